//! The simply typed λ-calculus over the base types `ty` and `tm`.
//!
//! Same representation discipline as the LF terms: de Bruijn indices for
//! bound variables, names for free variables. Free variables and constants
//! carry their simple type so that typing is a local computation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::name::{Binder, Name};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Ty,
    Tm,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    /// `a1 -> ... -> an -> target`
    pub fn arrows(args: impl IntoIterator<Item = SimpleType>, target: SimpleType) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(target, |acc, a| SimpleType::arrow(a, acc))
    }

    /// Argument types and the base type at the end of the arrow chain.
    pub fn uncurry(&self) -> (Vec<&SimpleType>, &SimpleType) {
        let mut args = Vec::new();
        let mut t = self;
        while let SimpleType::Arrow(a, b) = t {
            args.push(a.as_ref());
            t = b;
        }
        (args, t)
    }

    pub fn is_base(&self) -> bool {
        !matches!(self, SimpleType::Arrow(..))
    }
}

impl fmt::Debug for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Ty => f.write_str("ty"),
            SimpleType::Tm => f.write_str("tm"),
            SimpleType::Arrow(a, b) => {
                if a.is_base() {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum STerm {
    Const(Name, SimpleType),
    /// Free variable (eigenvariable or a variable opened by a traversal).
    Var(Name, SimpleType),
    BVar(u32),
    /// Logic variable; only ever appears inside prover states.
    MetaVar(Name, SimpleType),
    App(Box<STerm>, Box<STerm>),
    Lam(Binder, SimpleType, Box<STerm>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SimpleTypeError {
    #[error("cannot apply {fun} of type {ty}")]
    NotAFunction { fun: String, ty: SimpleType },
    #[error("argument of type {got} where {expected} was expected")]
    ArgumentMismatch { expected: SimpleType, got: SimpleType },
    #[error("dangling bound variable index {0}")]
    DanglingIndex(u32),
    #[error("expected type {expected}, found {got}")]
    Mismatch { expected: SimpleType, got: SimpleType },
}

impl STerm {
    pub fn constant(name: impl Into<Name>, ty: SimpleType) -> Self {
        STerm::Const(name.into(), ty)
    }

    pub fn var(name: impl Into<Name>, ty: SimpleType) -> Self {
        STerm::Var(name.into(), ty)
    }

    pub fn meta(name: impl Into<Name>, ty: SimpleType) -> Self {
        STerm::MetaVar(name.into(), ty)
    }

    /// Unchecked application.
    pub fn app(fun: STerm, arg: STerm) -> Self {
        STerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn apps(fun: STerm, args: impl IntoIterator<Item = STerm>) -> Self {
        args.into_iter().fold(fun, STerm::app)
    }

    /// Application that checks simple types.
    pub fn checked_app(fun: STerm, arg: STerm) -> Result<Self, SimpleTypeError> {
        let t = STerm::app(fun, arg);
        t.type_of()?;
        Ok(t)
    }

    /// `λname:ty. body`, abstracting the free variable `name` in `body`.
    pub fn lam(name: impl Into<Name>, ty: SimpleType, body: STerm) -> Self {
        let name = name.into();
        let body = body.close_over(&name);
        STerm::Lam(Binder(name), ty, Box::new(body))
    }

    /// Type of a locally closed term.
    pub fn type_of(&self) -> Result<SimpleType, SimpleTypeError> {
        self.type_in(&mut Vec::new())
    }

    fn type_in(&self, stack: &mut Vec<SimpleType>) -> Result<SimpleType, SimpleTypeError> {
        match self {
            STerm::Const(_, t) | STerm::Var(_, t) | STerm::MetaVar(_, t) => Ok(t.clone()),
            STerm::BVar(i) => {
                let i = *i as usize;
                if i < stack.len() {
                    Ok(stack[stack.len() - 1 - i].clone())
                } else {
                    Err(SimpleTypeError::DanglingIndex(i as u32))
                }
            }
            STerm::App(f, a) => {
                let ft = f.type_in(stack)?;
                let at = a.type_in(stack)?;
                match ft {
                    SimpleType::Arrow(dom, cod) if *dom == at => Ok(*cod),
                    SimpleType::Arrow(dom, _) => {
                        Err(SimpleTypeError::ArgumentMismatch { expected: *dom, got: at })
                    }
                    ty => Err(SimpleTypeError::NotAFunction { fun: format!("{f:?}"), ty }),
                }
            }
            STerm::Lam(_, ty, body) => {
                stack.push(ty.clone());
                let bt = body.type_in(stack);
                stack.pop();
                Ok(SimpleType::arrow(ty.clone(), bt?))
            }
        }
    }

    pub fn check_type(&self, expected: &SimpleType) -> Result<(), SimpleTypeError> {
        let got = self.type_of()?;
        if &got == expected {
            Ok(())
        } else {
            Err(SimpleTypeError::Mismatch { expected: expected.clone(), got })
        }
    }

    /// Rebuilds the term bottom-up, giving `f` each leaf and its binder depth.
    pub fn map_leaves<F: FnMut(&STerm, u32) -> STerm>(&self, depth: u32, f: &mut F) -> STerm {
        match self {
            STerm::App(a, b) => STerm::app(a.map_leaves(depth, f), b.map_leaves(depth, f)),
            STerm::Lam(b, ty, body) => {
                STerm::Lam(b.clone(), ty.clone(), Box::new(body.map_leaves(depth + 1, f)))
            }
            leaf => f(leaf, depth),
        }
    }

    pub fn for_each_leaf<F: FnMut(&STerm, u32)>(&self, depth: u32, f: &mut F) {
        match self {
            STerm::App(a, b) => {
                a.for_each_leaf(depth, f);
                b.for_each_leaf(depth, f);
            }
            STerm::Lam(_, _, body) => body.for_each_leaf(depth + 1, f),
            leaf => f(leaf, depth),
        }
    }

    pub fn open_at(&self, k: u32, replacement: &STerm) -> STerm {
        self.map_leaves(k, &mut |leaf, d| match leaf {
            STerm::BVar(i) if *i == d => replacement.clone(),
            STerm::BVar(i) if *i > d => STerm::BVar(i - 1),
            other => other.clone(),
        })
    }

    /// Instantiates the outermost dangling index; `replacement` must be
    /// locally closed.
    pub fn open_with(&self, replacement: &STerm) -> STerm {
        self.open_at(0, replacement)
    }

    pub fn close_at(&self, k: u32, name: &Name) -> STerm {
        self.map_leaves(k, &mut |leaf, d| match leaf {
            STerm::Var(n, _) if n == name => STerm::BVar(d),
            STerm::BVar(i) if *i >= d => STerm::BVar(i + 1),
            other => other.clone(),
        })
    }

    pub fn close_over(&self, name: &Name) -> STerm {
        self.close_at(0, name)
    }

    /// Replaces the free variable `name` by a locally closed term.
    pub fn subst_var(&self, name: &Name, replacement: &STerm) -> STerm {
        self.map_leaves(0, &mut |leaf, _| match leaf {
            STerm::Var(n, _) if n == name => replacement.clone(),
            other => other.clone(),
        })
    }

    /// Replaces the metavariable `name` by a locally closed term. The result
    /// is not normalized.
    pub fn subst_meta(&self, name: &Name, replacement: &STerm) -> STerm {
        self.map_leaves(0, &mut |leaf, _| match leaf {
            STerm::MetaVar(n, _) if n == name => replacement.clone(),
            other => other.clone(),
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_leaf(0, &mut |leaf, _| {
            if let STerm::Var(n, _) = leaf {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn metavars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_leaf(0, &mut |leaf, _| {
            if let STerm::MetaVar(n, _) = leaf {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_leaf(0, &mut |leaf, _| {
            if let STerm::Const(n, _) = leaf {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn is_locally_closed(&self) -> bool {
        let mut ok = true;
        self.for_each_leaf(0, &mut |leaf, d| {
            if let STerm::BVar(i) = leaf {
                ok &= *i < d;
            }
        });
        ok
    }

    pub fn spine(&self) -> (&STerm, Vec<&STerm>) {
        let mut args = Vec::new();
        let mut head = self;
        while let STerm::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn size(&self) -> usize {
        match self {
            STerm::App(a, b) => 1 + a.size() + b.size(),
            STerm::Lam(_, _, body) => 1 + body.size(),
            _ => 1,
        }
    }
}

pub fn alpha_equal(a: &STerm, b: &STerm) -> bool {
    a == b
}

/// Normal-form configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeConfig {
    /// Expand to η-long form after β-normalizing.
    pub eta_long: bool,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        NormalizeConfig { eta_long: true }
    }
}

/// β-normal, η-long form (the default configuration).
pub fn st_normalize(t: &STerm) -> STerm {
    st_normalize_with(t, NormalizeConfig::default())
}

pub fn st_normalize_with(t: &STerm, config: NormalizeConfig) -> STerm {
    let beta = beta_normalize(t);
    if config.eta_long {
        eta_long(&beta)
    } else {
        beta
    }
}

/// β-normal form of a locally closed, simply typed term.
pub fn beta_normalize(t: &STerm) -> STerm {
    match t {
        STerm::App(f, a) => {
            let f = beta_normalize(f);
            let a = beta_normalize(a);
            match f {
                STerm::Lam(_, _, body) => beta_normalize(&body.open_with(&a)),
                f => STerm::app(f, a),
            }
        }
        STerm::Lam(b, ty, body) => {
            let x = Name::internal(&b.0);
            let opened = body.open_with(&STerm::Var(x.clone(), ty.clone()));
            STerm::Lam(b.clone(), ty.clone(), Box::new(beta_normalize(&opened).close_over(&x)))
        }
        leaf => leaf.clone(),
    }
}

/// η-expands a β-normal, locally closed, simply typed term.
pub fn eta_long(t: &STerm) -> STerm {
    match t {
        STerm::Lam(b, ty, body) => {
            let x = Name::internal(&b.0);
            let opened = body.open_with(&STerm::Var(x.clone(), ty.clone()));
            STerm::Lam(b.clone(), ty.clone(), Box::new(eta_long(&opened).close_over(&x)))
        }
        _ => {
            let (head, args) = t.spine();
            let rebuilt = STerm::apps(head.clone(), args.into_iter().map(eta_long));
            let ty = rebuilt.type_of().expect("eta_long requires a well-typed term");
            expand(rebuilt, &ty)
        }
    }
}

fn expand(neutral: STerm, ty: &SimpleType) -> STerm {
    match ty {
        SimpleType::Arrow(dom, cod) => {
            let hint = Name::new(if dom.is_base() { "u" } else { "f" });
            let x = Name::internal(&hint);
            let arg = eta_long(&STerm::Var(x.clone(), (**dom).clone()));
            let body = expand(STerm::app(neutral, arg), cod);
            STerm::Lam(Binder(hint), (**dom).clone(), Box::new(body.close_over(&x)))
        }
        _ => neutral,
    }
}

/// Removes η-redexes `λx. M x` with `x` not free in `M`.
pub fn eta_contract(t: &STerm) -> STerm {
    match t {
        STerm::Lam(b, ty, body) => {
            let body = eta_contract(body);
            if let STerm::App(f, a) = &body {
                if **a == STerm::BVar(0) && !mentions_index(f, 0) {
                    return lower_indices(f);
                }
            }
            STerm::Lam(b.clone(), ty.clone(), Box::new(body))
        }
        STerm::App(f, a) => STerm::app(eta_contract(f), eta_contract(a)),
        leaf => leaf.clone(),
    }
}

// Drops an unused outermost binder: every dangling index moves down by one.
fn lower_indices(t: &STerm) -> STerm {
    t.map_leaves(0, &mut |leaf, d| match leaf {
        STerm::BVar(i) if *i > d => STerm::BVar(i - 1),
        other => other.clone(),
    })
}

fn mentions_index(t: &STerm, k: u32) -> bool {
    let mut found = false;
    t.for_each_leaf(k, &mut |leaf, d| {
        if let STerm::BVar(i) = leaf {
            found |= *i == d;
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm() -> SimpleType {
        SimpleType::Tm
    }

    fn z() -> STerm {
        STerm::constant("z", tm())
    }

    fn k2() -> STerm {
        // λx:tm. λy:tm. z
        STerm::lam("x", tm(), STerm::lam("y", tm(), z()))
    }

    #[test]
    fn normalize_examples() {
        let a = STerm::constant("a", tm());
        let b = STerm::constant("b", tm());
        assert_eq!(st_normalize(&STerm::apps(k2(), [a, b])), z());
        assert_eq!(st_normalize(&z()), z());
        let id = STerm::lam("x", tm(), STerm::var("x", tm()));
        assert_eq!(st_normalize(&STerm::app(id, z())), z());
    }

    #[test]
    fn eta_long_expands_function_constants() {
        let f = STerm::constant("f", SimpleType::arrows([tm(), tm()], tm()));
        let long = st_normalize(&f);
        let expected = STerm::lam(
            "a",
            tm(),
            STerm::lam(
                "b",
                tm(),
                STerm::apps(f.clone(), [STerm::var("a", tm()), STerm::var("b", tm())]),
            ),
        );
        assert_eq!(long, expected);
        assert_eq!(eta_contract(&long), f);
        let beta_only = st_normalize_with(&f, NormalizeConfig { eta_long: false });
        assert_eq!(beta_only, f);
    }

    #[test]
    fn eta_long_expands_higher_order_arguments() {
        // c : (tm -> tm) -> tm applied to g : tm -> tm
        let c = STerm::constant("c", SimpleType::arrow(SimpleType::arrow(tm(), tm()), tm()));
        let g = STerm::constant("g", SimpleType::arrow(tm(), tm()));
        let long = st_normalize(&STerm::app(c.clone(), g.clone()));
        let expected = STerm::app(c, STerm::lam("u", tm(), STerm::app(g, STerm::var("u", tm()))));
        assert_eq!(long, expected);
    }

    #[test]
    fn typing() {
        let c = STerm::constant("c", SimpleType::arrow(SimpleType::arrows([tm(), tm()], tm()), tm()));
        assert_eq!(STerm::app(c.clone(), k2()).type_of().unwrap(), tm());
        assert!(STerm::checked_app(c, z()).is_err());
        assert!(STerm::checked_app(z(), z()).is_err());
    }

    #[test]
    fn display_types() {
        let t = SimpleType::arrow(SimpleType::arrows([tm(), tm()], tm()), tm());
        assert_eq!(t.to_string(), "(tm -> tm -> tm) -> tm");
    }
}
