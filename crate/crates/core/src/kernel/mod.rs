//! Decision procedure for LF judgments.
//!
//! Objects carry their λ-annotations, so every object's type is inferred;
//! checking an object against a type is inference followed by conversion.
//! Inferred types and kinds are returned β-normal. Successful runs produce a
//! [`DerivationTree`] that [`validate_derivation`] re-checks rule by rule.

mod conversion;
mod error;
mod validate;

use std::collections::BTreeSet;

use crate::syntax::lf::normalize;
use crate::syntax::{
    fresh_name, Binder, Classifier, LfContext, LfFamily, LfKind, LfObject, LfSignature, LfTerm,
    Name,
};

pub use conversion::{convertible_family, convertible_object, Conversion};
pub use error::{KindMismatch, PathStep, TypeError, TypeErrorKind};
pub use validate::validate_derivation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Signature,
    KindType,
    KindPi,
    FamConst,
    FamApp,
    FamPi,
    ObjConst,
    ObjVar,
    ObjApp,
    ObjLam,
    /// Closes the gap between an inferred type and a convertible target.
    Conv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgment {
    /// The first `decls` declarations of the signature are well formed.
    Signature { decls: usize },
    Kind { ctx: LfContext, kind: LfKind },
    Family { ctx: LfContext, family: LfFamily, kind: LfKind },
    Object { ctx: LfContext, object: LfObject, ty: LfFamily },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTree {
    pub rule: Rule,
    pub conclusion: Judgment,
    pub premises: Vec<DerivationTree>,
}

impl DerivationTree {
    fn new(rule: Rule, conclusion: Judgment, premises: Vec<DerivationTree>) -> Self {
        DerivationTree { rule, conclusion, premises }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(DerivationTree::node_count).sum::<usize>()
    }
}

#[derive(Clone, Debug)]
pub enum CheckResult {
    Derivable(DerivationTree),
    NotDerivable(TypeError),
}

impl CheckResult {
    pub fn is_derivable(&self) -> bool {
        matches!(self, CheckResult::Derivable(_))
    }

    pub fn error(&self) -> Option<&TypeError> {
        match self {
            CheckResult::NotDerivable(e) => Some(e),
            CheckResult::Derivable(_) => None,
        }
    }

    pub fn derivation(&self) -> Option<&DerivationTree> {
        match self {
            CheckResult::Derivable(d) => Some(d),
            CheckResult::NotDerivable(_) => None,
        }
    }
}

impl From<Result<DerivationTree, TypeError>> for CheckResult {
    fn from(r: Result<DerivationTree, TypeError>) -> Self {
        match r {
            Ok(d) => CheckResult::Derivable(d),
            Err(e) => CheckResult::NotDerivable(e),
        }
    }
}

/// A type checker for one signature.
#[derive(Clone, Copy, Debug)]
pub struct Kernel<'s> {
    sig: &'s LfSignature,
    conversion: Conversion,
}

impl<'s> Kernel<'s> {
    pub fn new(sig: &'s LfSignature) -> Self {
        Kernel { sig, conversion: Conversion::default() }
    }

    pub fn with_conversion(sig: &'s LfSignature, conversion: Conversion) -> Self {
        Kernel { sig, conversion }
    }

    pub fn conversion(&self) -> Conversion {
        self.conversion
    }

    pub fn check_signature(&self) -> CheckResult {
        let mut premises = Vec::new();
        let mut seen = BTreeSet::new();
        for (index, decl) in self.sig.decls().iter().enumerate() {
            let wrap = |cause: TypeError| TypeError {
                kind: TypeErrorKind::IllFormedSignature {
                    index,
                    name: decl.name.clone(),
                    cause: Box::new(cause),
                },
                path: vec![PathStep::Declaration(index)],
            };
            if !seen.insert(decl.name.clone()) {
                return CheckResult::NotDerivable(wrap(TypeError::new(TypeErrorKind::DuplicateName(
                    decl.name.clone(),
                ))));
            }
            let prefix = self.sig.prefix(index);
            let kernel = Kernel::with_conversion(&prefix, self.conversion);
            let ctx = LfContext::new();
            let derivation = match &decl.classifier {
                Classifier::Family(kind) => kernel.check_kind(&ctx, kind),
                Classifier::Object(ty) => kernel.check_type(&ctx, ty).map(|(_, d)| d),
            };
            match derivation {
                Ok(d) => premises.push(d),
                Err(e) => return CheckResult::NotDerivable(wrap(e)),
            }
        }
        let conclusion = Judgment::Signature { decls: self.sig.len() };
        CheckResult::Derivable(DerivationTree::new(Rule::Signature, conclusion, premises))
    }

    fn fresh(&self, ctx: &LfContext, hint: &Binder, extra: BTreeSet<Name>) -> Name {
        let mut avoid = self.sig.names();
        avoid.extend(ctx.names());
        avoid.extend(extra);
        fresh_name(hint.name(), &avoid)
    }

    pub fn check_kind(&self, ctx: &LfContext, kind: &LfKind) -> Result<DerivationTree, TypeError> {
        match kind {
            LfKind::Type => Ok(DerivationTree::new(
                Rule::KindType,
                Judgment::Kind { ctx: ctx.clone(), kind: LfKind::Type },
                vec![],
            )),
            LfKind::Pi(b, dom, body) => {
                let (dom_n, d_dom) = self.check_type(ctx, dom).map_err(|e| e.at(PathStep::PiDomain))?;
                let x = self.fresh(ctx, b, body.free_vars());
                let inner = ctx.extend(x.clone(), dom_n);
                let d_body = self
                    .check_kind(&inner, &body.open_with(&LfObject::Var(x)))
                    .map_err(|e| e.at(PathStep::PiBody))?;
                Ok(DerivationTree::new(
                    Rule::KindPi,
                    Judgment::Kind { ctx: ctx.clone(), kind: kind.clone() },
                    vec![d_dom, d_body],
                ))
            }
        }
    }

    /// Checks that `a` has kind `Type`; returns its normal form.
    pub fn check_type(
        &self,
        ctx: &LfContext,
        a: &LfFamily,
    ) -> Result<(LfFamily, DerivationTree), TypeError> {
        let (kind, d) = self.infer_family(ctx, a)?;
        if kind != LfKind::Type {
            return Err(TypeError::new(TypeErrorKind::KindMismatch(KindMismatch::NotAType {
                family: a.clone(),
                kind,
            })));
        }
        Ok((normalize(a), d))
    }

    pub fn infer_family(
        &self,
        ctx: &LfContext,
        a: &LfFamily,
    ) -> Result<(LfKind, DerivationTree), TypeError> {
        let conclude = |kind: LfKind, rule: Rule, premises: Vec<DerivationTree>| {
            let judgment = Judgment::Family { ctx: ctx.clone(), family: a.clone(), kind: kind.clone() };
            (kind, DerivationTree::new(rule, judgment, premises))
        };
        match a {
            LfFamily::Const(name) => match self.sig.family_kind(name) {
                Some(kind) => Ok(conclude(normalize(kind), Rule::FamConst, vec![])),
                None => Err(TypeError::new(TypeErrorKind::UnboundName(name.clone()))),
            },
            LfFamily::App(head, arg) => {
                let (head_kind, d_head) =
                    self.infer_family(ctx, head).map_err(|e| e.at(PathStep::FamilyHead))?;
                match head_kind {
                    LfKind::Pi(_, dom, cod) => {
                        let (arg_ty, d_arg) =
                            self.infer_object(ctx, arg).map_err(|e| e.at(PathStep::FamilyArg))?;
                        if !convertible_family(&dom, &arg_ty, self.conversion) {
                            return Err(TypeError::new(TypeErrorKind::KindMismatch(
                                KindMismatch::ArgumentType { expected: *dom, got: arg_ty },
                            ))
                            .at(PathStep::FamilyArg));
                        }
                        let kind = normalize(&cod.open_with(arg));
                        Ok(conclude(kind, Rule::FamApp, vec![d_head, d_arg]))
                    }
                    LfKind::Type => Err(TypeError::new(TypeErrorKind::KindMismatch(
                        KindMismatch::TooManyArguments { family: (**head).clone() },
                    ))),
                }
            }
            LfFamily::Pi(b, dom, body) => {
                let (dom_n, d_dom) = self.check_type(ctx, dom).map_err(|e| e.at(PathStep::PiDomain))?;
                let x = self.fresh(ctx, b, body.free_vars());
                let inner = ctx.extend(x.clone(), dom_n);
                let (_, d_body) = self
                    .check_type(&inner, &body.open_with(&LfObject::Var(x)))
                    .map_err(|e| e.at(PathStep::PiBody))?;
                Ok(conclude(LfKind::Type, Rule::FamPi, vec![d_dom, d_body]))
            }
        }
    }

    pub fn infer_object(
        &self,
        ctx: &LfContext,
        m: &LfObject,
    ) -> Result<(LfFamily, DerivationTree), TypeError> {
        let conclude = |ty: LfFamily, rule: Rule, premises: Vec<DerivationTree>| {
            let judgment = Judgment::Object { ctx: ctx.clone(), object: m.clone(), ty: ty.clone() };
            (ty, DerivationTree::new(rule, judgment, premises))
        };
        match m {
            LfObject::Const(name) => match self.sig.object_type(name) {
                Some(ty) => Ok(conclude(normalize(ty), Rule::ObjConst, vec![])),
                None => Err(TypeError::new(TypeErrorKind::UnboundName(name.clone()))),
            },
            LfObject::Var(name) => match ctx.lookup(name) {
                Some(ty) => Ok(conclude(normalize(ty), Rule::ObjVar, vec![])),
                None => Err(TypeError::new(TypeErrorKind::UnboundName(name.clone()))),
            },
            LfObject::BVar(i) => {
                Err(TypeError::new(TypeErrorKind::UnboundName(Name::new(format!("^{i}")))))
            }
            LfObject::App(fun, arg) => {
                let (fun_ty, d_fun) =
                    self.infer_object(ctx, fun).map_err(|e| e.at(PathStep::AppFun))?;
                let LfFamily::Pi(_, dom, cod) = fun_ty else {
                    return Err(TypeError::new(TypeErrorKind::NotAFunction { ty: fun_ty })
                        .at(PathStep::AppFun));
                };
                let (arg_ty, d_arg) =
                    self.infer_object(ctx, arg).map_err(|e| e.at(PathStep::AppArg))?;
                if !convertible_family(&dom, &arg_ty, self.conversion) {
                    return Err(self.domain_mismatch(ctx, *dom, arg_ty).at(PathStep::AppArg));
                }
                let ty = normalize(&cod.open_with(arg));
                Ok(conclude(ty, Rule::ObjApp, vec![d_fun, d_arg]))
            }
            LfObject::Lam(b, annot, body) => {
                let (annot_n, d_annot) =
                    self.check_type(ctx, annot).map_err(|e| e.at(PathStep::LamAnnot))?;
                let x = self.fresh(ctx, b, body.free_vars());
                let inner = ctx.extend(x.clone(), annot_n.clone());
                let (body_ty, d_body) = self
                    .infer_object(&inner, &body.open_with(&LfObject::Var(x.clone())))
                    .map_err(|e| e.at(PathStep::LamBody))?;
                let ty = LfFamily::Pi(b.clone(), Box::new(annot_n), Box::new(body_ty.close_over(&x)));
                Ok(conclude(ty, Rule::ObjLam, vec![d_annot, d_body]))
            }
        }
    }

    pub fn check_object(&self, ctx: &LfContext, m: &LfObject, a: &LfFamily) -> CheckResult {
        let (got, d) = match self.infer_object(ctx, m) {
            Ok(r) => r,
            Err(e) => return CheckResult::NotDerivable(e),
        };
        let expected = normalize(a);
        if !convertible_family(&expected, &got, self.conversion) {
            return CheckResult::NotDerivable(self.domain_mismatch(ctx, expected, got));
        }
        let judgment = Judgment::Object { ctx: ctx.clone(), object: m.clone(), ty: expected };
        CheckResult::Derivable(DerivationTree::new(Rule::Conv, judgment, vec![d]))
    }

    pub fn equal_family(&self, a: &LfFamily, b: &LfFamily) -> bool {
        convertible_family(&normalize(a), &normalize(b), self.conversion)
    }

    fn domain_mismatch(&self, ctx: &LfContext, expected: LfFamily, got: LfFamily) -> TypeError {
        let focus = self.first_disagreement(ctx, &expected, &got);
        TypeError::new(TypeErrorKind::DomainMismatch { expected, got, focus })
    }

    /// Descends through Π-types that agree on their domains and returns the
    /// innermost pair of families that still differ, with the shared binders
    /// opened as named variables.
    fn first_disagreement(
        &self,
        ctx: &LfContext,
        a: &LfFamily,
        b: &LfFamily,
    ) -> (LfFamily, LfFamily) {
        match (a, b) {
            (LfFamily::Pi(binder, d1, c1), LfFamily::Pi(_, d2, c2)) => {
                if !convertible_family(d1, d2, self.conversion) {
                    return self.first_disagreement(ctx, d1, d2);
                }
                let mut extra = c1.free_vars();
                extra.extend(c2.free_vars());
                let x = self.fresh(ctx, binder, extra);
                let inner = ctx.extend(x.clone(), (**d1).clone());
                let v = LfObject::Var(x);
                self.first_disagreement(&inner, &c1.open_with(&v), &c2.open_with(&v))
            }
            _ => (a.clone(), b.clone()),
        }
    }
}

pub fn check_signature(sig: &LfSignature) -> CheckResult {
    Kernel::new(sig).check_signature()
}

pub fn infer_object(sig: &LfSignature, ctx: &LfContext, m: &LfObject) -> Result<LfFamily, TypeError> {
    Kernel::new(sig).infer_object(ctx, m).map(|(ty, _)| ty)
}

pub fn check_object(sig: &LfSignature, ctx: &LfContext, m: &LfObject, a: &LfFamily) -> CheckResult {
    Kernel::new(sig).check_object(ctx, m, a)
}

pub fn check_family(sig: &LfSignature, ctx: &LfContext, a: &LfFamily) -> Result<LfKind, TypeError> {
    Kernel::new(sig).infer_family(ctx, a).map(|(k, _)| k)
}

pub fn equal_family(sig: &LfSignature, _ctx: &LfContext, a: &LfFamily, b: &LfFamily) -> bool {
    Kernel::new(sig).equal_family(a, b)
}

#[cfg(test)]
mod tests;
