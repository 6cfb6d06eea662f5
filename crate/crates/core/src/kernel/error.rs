use std::fmt;

use crate::concrete::print;
use crate::syntax::{LfFamily, LfKind, Name};

/// One step from a term to one of its immediate subterms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    AppFun,
    AppArg,
    LamAnnot,
    LamBody,
    PiDomain,
    PiBody,
    FamilyHead,
    FamilyArg,
    Declaration(usize),
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathStep::AppFun => f.write_str("fun"),
            PathStep::AppArg => f.write_str("arg"),
            PathStep::LamAnnot => f.write_str("annot"),
            PathStep::LamBody => f.write_str("body"),
            PathStep::PiDomain => f.write_str("domain"),
            PathStep::PiBody => f.write_str("codomain"),
            PathStep::FamilyHead => f.write_str("head"),
            PathStep::FamilyArg => f.write_str("index"),
            PathStep::Declaration(i) => write!(f, "decl#{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KindMismatch {
    /// A family index does not have the type its kind demands.
    ArgumentType { expected: LfFamily, got: LfFamily },
    /// A family used as a type has a kind other than `type`.
    NotAType { family: LfFamily, kind: LfKind },
    /// A family of kind `type` applied to an index.
    TooManyArguments { family: LfFamily },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundName(Name),
    NotAFunction { ty: LfFamily },
    /// Both types are in normal form. `focus` is the innermost pair of
    /// subterms on which they disagree.
    DomainMismatch { expected: LfFamily, got: LfFamily, focus: (LfFamily, LfFamily) },
    KindMismatch(KindMismatch),
    DuplicateName(Name),
    IllFormedSignature { index: usize, name: Name, cause: Box<TypeError> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    /// From the root of the subject down to the offending subterm.
    pub path: Vec<PathStep>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind) -> Self {
        TypeError { kind, path: Vec::new() }
    }

    pub(crate) fn at(mut self, step: PathStep) -> Self {
        self.path.insert(0, step);
        self
    }

    /// The error after peeling signature wrappers.
    pub fn root_cause(&self) -> &TypeError {
        match &self.kind {
            TypeErrorKind::IllFormedSignature { cause, .. } => cause.root_cause(),
            _ => self,
        }
    }

    pub fn label(&self) -> &'static str {
        match &self.kind {
            TypeErrorKind::UnboundName(_) => "unbound-name",
            TypeErrorKind::NotAFunction { .. } => "not-a-function",
            TypeErrorKind::DomainMismatch { .. } => "domain-mismatch",
            TypeErrorKind::KindMismatch(_) => "kind-mismatch",
            TypeErrorKind::DuplicateName(_) => "duplicate-name",
            TypeErrorKind::IllFormedSignature { .. } => "ill-formed-signature",
        }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TypeErrorKind::UnboundName(n) => write!(f, "unbound name `{n}`")?,
            TypeErrorKind::NotAFunction { ty } => {
                write!(f, "applied a term of non-function type `{}`", print::family(ty))?
            }
            TypeErrorKind::DomainMismatch { expected, got, focus } => write!(
                f,
                "domain mismatch: expected `{}`, got `{}` (`{}` vs `{}`)",
                print::family(expected),
                print::family(got),
                print::family(&focus.0),
                print::family(&focus.1),
            )?,
            TypeErrorKind::KindMismatch(KindMismatch::ArgumentType { expected, got }) => write!(
                f,
                "kind mismatch: index of type `{}` where `{}` was expected",
                print::family(got),
                print::family(expected),
            )?,
            TypeErrorKind::KindMismatch(KindMismatch::NotAType { family, kind }) => write!(
                f,
                "kind mismatch: `{}` has kind `{}`, not `type`",
                print::family(family),
                print::kind(kind),
            )?,
            TypeErrorKind::KindMismatch(KindMismatch::TooManyArguments { family }) => {
                write!(f, "kind mismatch: `{}` takes no more indices", print::family(family))?
            }
            TypeErrorKind::DuplicateName(n) => write!(f, "`{n}` is declared twice")?,
            TypeErrorKind::IllFormedSignature { index, name, cause } => {
                return write!(f, "declaration {index} (`{name}`) is ill formed: {cause}");
            }
        }
        if !self.path.is_empty() {
            let path: Vec<String> = self.path.iter().map(ToString::to_string).collect();
            write!(f, " at {}", path.join("."))?;
        }
        Ok(())
    }
}

impl std::error::Error for TypeError {}
