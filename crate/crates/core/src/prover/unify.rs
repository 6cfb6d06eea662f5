//! Higher-order pattern unification.
//!
//! Terms are compared in β-normal η-long form. A flexible term `F x1 .. xn`
//! is a pattern when the `xi` are distinct variables outside the scope of
//! `F`; anything else is reported rather than guessed at. Each metavariable
//! carries the set of eigenvariables it may depend on, and solutions that
//! would let it depend on later ones are pruned or rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::concrete::print;
use crate::syntax::stlc::eta_contract;
use crate::syntax::{st_normalize, Binder, Name, STerm, SimpleType};

/// Bindings for metavariables. Every range is β-normal, η-long and free of
/// bound metavariables, so applying the substitution twice is the same as
/// applying it once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetaSubstitution {
    bindings: BTreeMap<Name, STerm>,
}

impl MetaSubstitution {
    pub fn get(&self, name: &Name) -> Option<&STerm> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &STerm)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Replaces bound metavariables without normalizing. Safe on terms with
    /// dangling indices.
    pub fn substitute(&self, t: &STerm) -> STerm {
        if self.bindings.is_empty() {
            return t.clone();
        }
        t.map_leaves(0, &mut |leaf, _| match leaf {
            STerm::MetaVar(n, _) => self.bindings.get(n).cloned().unwrap_or_else(|| leaf.clone()),
            other => other.clone(),
        })
    }

    /// Substitutes and normalizes a locally closed term.
    pub fn apply(&self, t: &STerm) -> STerm {
        st_normalize(&self.substitute(t))
    }

    fn bind(&mut self, name: Name, term: STerm) {
        let term = self.apply(&term);
        for v in self.bindings.values_mut() {
            if v.metavars().contains(&name) {
                *v = st_normalize(&v.subst_meta(&name, &term));
            }
        }
        self.bindings.insert(name, term);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaInfo {
    pub ty: SimpleType,
    /// Eigenvariables the metavariable may depend on.
    pub scope: BTreeSet<Name>,
}

/// A unification problem outside the pattern fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPatternProblem {
    pub left: STerm,
    pub right: STerm,
}

impl fmt::Display for NonPatternProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =?= {}", print::sterm(&self.left), print::sterm(&self.right))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyFailure {
    Clash,
    NonPattern(NonPatternProblem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyOutcome {
    Unifier(MetaSubstitution),
    Clash,
    NonPattern(NonPatternProblem),
}

/// Metavariables, their bindings, and every name already in use.
#[derive(Clone, Debug, Default)]
pub struct MetaContext {
    pub subst: MetaSubstitution,
    metas: BTreeMap<Name, MetaInfo>,
    used: BTreeSet<Name>,
    counter: usize,
}

impl MetaContext {
    pub fn new() -> Self {
        MetaContext::default()
    }

    pub fn info(&self, name: &Name) -> Option<&MetaInfo> {
        self.metas.get(name)
    }

    pub fn used(&self) -> &BTreeSet<Name> {
        &self.used
    }

    /// Marks a name as taken so that no metavariable receives it.
    pub fn reserve(&mut self, name: Name) {
        self.used.insert(name);
    }

    /// Registers an existing metavariable.
    pub fn declare(&mut self, name: Name, info: MetaInfo) {
        self.used.insert(name.clone());
        self.metas.insert(name, info);
    }

    pub fn fresh(&mut self, hint: &Name, ty: SimpleType, scope: BTreeSet<Name>) -> STerm {
        let mut stem: String = hint.stem().to_uppercase();
        if stem.is_empty() || stem == "_" {
            stem = "M".into();
        }
        let name = loop {
            self.counter += 1;
            let candidate = Name::new(format!("{stem}{}", self.counter));
            if !self.used.contains(&candidate) {
                break candidate;
            }
        };
        self.declare(name.clone(), MetaInfo { ty: ty.clone(), scope });
        STerm::MetaVar(name, ty)
    }

    fn scope_of(&self, name: &Name) -> BTreeSet<Name> {
        self.metas.get(name).map(|i| i.scope.clone()).unwrap_or_default()
    }

    /// Unifies two locally closed terms of the same simple type, extending
    /// the substitution. On failure the context may be partially updated;
    /// callers that backtrack keep a copy.
    pub fn unify(&mut self, a: &STerm, b: &STerm) -> Result<(), UnifyFailure> {
        let a = self.subst.apply(a);
        let b = self.subst.apply(b);
        if a == b {
            return Ok(());
        }
        match (&a, &b) {
            // Binder names of the right-hand side are kept in solutions.
            (STerm::Lam(_, ty, m1), STerm::Lam(bn, _, m2)) => {
                let x = STerm::Var(Name::internal(bn.name()), ty.clone());
                self.unify(&m1.open_with(&x), &m2.open_with(&x))
            }
            (STerm::Lam(bn, ty, m), other) | (other, STerm::Lam(bn, ty, m)) => {
                let x = STerm::Var(Name::internal(bn.name()), ty.clone());
                self.unify(&m.open_with(&x), &STerm::app(other.clone(), x))
            }
            _ => {
                let (h1, args1) = a.spine();
                let (h2, args2) = b.spine();
                match (h1, h2) {
                    (STerm::MetaVar(f, _), STerm::MetaVar(g, _)) if f == g => {
                        let f = f.clone();
                        let (args1, args2) = (cloned(&args1), cloned(&args2));
                        self.flex_same(&f, &args1, &args2, &a, &b)
                    }
                    (STerm::MetaVar(..), STerm::MetaVar(..)) => {
                        if self.pattern_args(&a).is_some() {
                            self.flex(&a, &b)
                        } else if self.pattern_args(&b).is_some() {
                            self.flex(&b, &a)
                        } else {
                            Err(non_pattern(&a, &b))
                        }
                    }
                    (STerm::MetaVar(..), _) => self.flex(&a, &b),
                    (_, STerm::MetaVar(..)) => self.flex(&b, &a),
                    _ => {
                        let same_head = match (h1, h2) {
                            (STerm::Const(x, _), STerm::Const(y, _)) => x == y,
                            (STerm::Var(x, _), STerm::Var(y, _)) => x == y,
                            _ => false,
                        };
                        if !same_head || args1.len() != args2.len() {
                            return Err(UnifyFailure::Clash);
                        }
                        for (x, y) in cloned(&args1).iter().zip(cloned(&args2).iter()) {
                            self.unify(x, y)?;
                        }
                        Ok(())
                    }
                }
            }
        }
    }

    /// The arguments of a flexible term if they form a pattern.
    fn pattern_args(&self, flex: &STerm) -> Option<Vec<(Name, SimpleType)>> {
        let (head, args) = flex.spine();
        let STerm::MetaVar(f, _) = head else { return None };
        let scope = self.scope_of(f);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for arg in args {
            match eta_contract(arg) {
                STerm::Var(x, ty) if !scope.contains(&x) && seen.insert(x.clone()) => out.push((x, ty)),
                _ => return None,
            }
        }
        Some(out)
    }

    fn flex_same(
        &mut self,
        f: &Name,
        args1: &[STerm],
        args2: &[STerm],
        a: &STerm,
        b: &STerm,
    ) -> Result<(), UnifyFailure> {
        let (Some(xs), Some(ys)) = (self.pattern_args(a), self.pattern_args(b)) else {
            return Err(non_pattern(a, b));
        };
        debug_assert_eq!(args1.len(), args2.len());
        let info = self.metas[f].clone();
        let keep: Vec<bool> = xs.iter().zip(&ys).map(|(x, y)| x.0 == y.0).collect();
        let binding = self.pruned_binding(f, &info, &keep, info.scope.clone());
        self.subst.bind(f.clone(), binding);
        Ok(())
    }

    /// `λy1..ym. H y_j1 .. y_jk` for the kept positions, with `H` fresh.
    fn pruned_binding(
        &mut self,
        f: &Name,
        info: &MetaInfo,
        keep: &[bool],
        scope: BTreeSet<Name>,
    ) -> STerm {
        let (arg_tys, _) = info.ty.uncurry();
        let m = keep.len();
        let mut rest = info.ty.clone();
        for _ in 0..m {
            if let SimpleType::Arrow(_, cod) = rest {
                rest = *cod;
            }
        }
        let kept_tys = arg_tys.iter().zip(keep).filter(|(_, k)| **k).map(|(t, _)| (*t).clone());
        let h = self.fresh(f, SimpleType::arrows(kept_tys, rest), scope);
        let kept_args = (0..m).filter(|j| keep[*j]).map(|j| STerm::BVar((m - 1 - j) as u32));
        let mut body = STerm::apps(h, kept_args);
        for j in (0..m).rev() {
            body = STerm::Lam(Binder::new("y"), arg_tys[j].clone(), Box::new(body));
        }
        body
    }

    fn flex(&mut self, flex: &STerm, other: &STerm) -> Result<(), UnifyFailure> {
        let Some(xs) = self.pattern_args(flex) else {
            return Err(non_pattern(flex, other));
        };
        let STerm::MetaVar(f, _) = flex.spine().0.clone() else { unreachable!() };
        let names: BTreeSet<Name> = xs.iter().map(|(x, _)| x.clone()).collect();
        let scope = self.scope_of(&f);
        match self.invert(other, &f, &scope, &names)? {
            Some(body) => {
                let binding = xs
                    .iter()
                    .rev()
                    .fold(body, |acc, (x, ty)| STerm::lam(x.clone(), ty.clone(), acc));
                self.subst.bind(f, binding);
                Ok(())
            }
            // A metavariable inside `other` was pruned; its binding changes
            // the problem, so start over.
            None => self.unify(flex, other),
        }
    }

    /// Checks that `t` can be the body of a solution for `f`: every free
    /// variable is one of `xs` or in `f`'s scope, and `f` does not occur.
    /// Returns `None` after pruning a metavariable.
    fn invert(
        &mut self,
        t: &STerm,
        f: &Name,
        scope: &BTreeSet<Name>,
        xs: &BTreeSet<Name>,
    ) -> Result<Option<STerm>, UnifyFailure> {
        if let STerm::Lam(b, ty, body) = t {
            let inner = self.invert(body, f, scope, xs)?;
            return Ok(inner.map(|body| STerm::Lam(b.clone(), ty.clone(), Box::new(body))));
        }
        let (head, args) = t.spine();
        match head {
            STerm::MetaVar(g, _) => {
                if g == f {
                    return Err(UnifyFailure::Clash);
                }
                let info = self.metas[g].clone();
                let mut seen: Vec<STerm> = Vec::new();
                let mut keep = Vec::new();
                for arg in &args {
                    let arg = eta_contract(arg);
                    if seen.contains(&arg) {
                        return Err(non_pattern(t, t));
                    }
                    match &arg {
                        STerm::Var(x, _) if !info.scope.contains(x) => {
                            keep.push(xs.contains(x) || scope.contains(x));
                        }
                        STerm::BVar(_) => keep.push(true),
                        _ => return Err(non_pattern(t, t)),
                    }
                    seen.push(arg);
                }
                let narrowed: BTreeSet<Name> = info.scope.intersection(scope).cloned().collect();
                if keep.iter().all(|k| *k) && narrowed == info.scope {
                    return Ok(Some(t.clone()));
                }
                let g = g.clone();
                let binding = self.pruned_binding(&g, &info, &keep, narrowed);
                self.subst.bind(g, binding);
                Ok(None)
            }
            STerm::Var(x, _) if !xs.contains(x) && !scope.contains(x) => Err(UnifyFailure::Clash),
            _ => {
                let mut rebuilt = head.clone();
                for arg in args {
                    match self.invert(arg, f, scope, xs)? {
                        Some(a) => rebuilt = STerm::app(rebuilt, a),
                        None => return Ok(None),
                    }
                }
                Ok(Some(rebuilt))
            }
        }
    }
}

fn cloned(args: &[&STerm]) -> Vec<STerm> {
    args.iter().map(|a| (*a).clone()).collect()
}

fn non_pattern(a: &STerm, b: &STerm) -> UnifyFailure {
    UnifyFailure::NonPattern(NonPatternProblem { left: a.clone(), right: b.clone() })
}

/// Unifies two locally closed terms whose metavariables may depend on every
/// eigenvariable in `env`.
pub fn pattern_unify(a: &STerm, b: &STerm, env: &[(Name, SimpleType)]) -> UnifyOutcome {
    let scope: BTreeSet<Name> = env.iter().map(|(n, _)| n.clone()).collect();
    let mut ctx = MetaContext::new();
    for (n, _) in env {
        ctx.reserve(n.clone());
    }
    for t in [a, b] {
        t.for_each_leaf(0, &mut |leaf, _| {
            if let STerm::MetaVar(n, ty) = leaf {
                ctx.declare(n.clone(), MetaInfo { ty: ty.clone(), scope: scope.clone() });
            }
        });
    }
    match ctx.unify(a, b) {
        Ok(()) => UnifyOutcome::Unifier(ctx.subst),
        Err(UnifyFailure::Clash) => UnifyOutcome::Clash,
        Err(UnifyFailure::NonPattern(p)) => UnifyOutcome::NonPattern(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm() -> SimpleType {
        SimpleType::Tm
    }

    fn ty() -> SimpleType {
        SimpleType::Ty
    }

    fn c() -> STerm {
        STerm::constant("c", SimpleType::arrow(SimpleType::arrows([tm(), tm()], tm()), tm()))
    }

    fn z() -> STerm {
        STerm::constant("z", tm())
    }

    fn k2() -> STerm {
        STerm::lam("x", tm(), STerm::lam("y", tm(), z()))
    }

    fn unifier(outcome: UnifyOutcome) -> MetaSubstitution {
        match outcome {
            UnifyOutcome::Unifier(s) => s,
            other => panic!("expected a unifier, got {other:?}"),
        }
    }

    #[test]
    fn higher_order_argument() {
        let w = STerm::meta("W", SimpleType::arrows([tm(), tm()], tm()));
        let a = STerm::app(c(), w.clone());
        let b = STerm::app(c(), k2());
        let s = unifier(pattern_unify(&a, &b, &[]));
        assert_eq!(s.apply(&w), k2());
        assert_eq!(s.apply(&a), s.apply(&b));
    }

    #[test]
    fn rigid_cases() {
        let nat = STerm::constant("nat", ty());
        let num_z = STerm::app(STerm::constant("num", SimpleType::arrow(tm(), ty())), z());
        assert!(unifier(pattern_unify(&nat, &nat, &[])).is_empty());
        assert_eq!(pattern_unify(&nat, &num_z, &[]), UnifyOutcome::Clash);
    }

    #[test]
    fn eigenvariable_scope() {
        // X created before the eigenvariable e cannot be bound to e.
        let e = STerm::var("e", tm());
        let mut ctx = MetaContext::new();
        let x = ctx.fresh(&Name::new("x"), tm(), BTreeSet::new());
        assert_eq!(ctx.unify(&x, &e), Err(UnifyFailure::Clash));

        let mut ctx = MetaContext::new();
        let x = ctx.fresh(&Name::new("x"), tm(), [Name::new("e")].into());
        assert_eq!(ctx.unify(&x, &e), Ok(()));
        assert_eq!(ctx.subst.apply(&x), e);
    }

    #[test]
    fn non_pattern_arguments() {
        let f = STerm::meta("F", SimpleType::arrow(tm(), tm()));
        let a = STerm::app(f.clone(), z());
        assert!(matches!(pattern_unify(&a, &z(), &[]), UnifyOutcome::NonPattern(_)));
        // An eigenvariable already in F's scope is not a pattern argument.
        let e = STerm::var("e", tm());
        let a = STerm::app(f, e.clone());
        let env = [(Name::new("e"), tm())];
        assert!(matches!(pattern_unify(&a, &z(), &env), UnifyOutcome::NonPattern(_)));
    }

    #[test]
    fn projection_and_pruning() {
        // λu. F u = λu. G  forces F to ignore its argument.
        let f = STerm::meta("F", SimpleType::arrow(tm(), tm()));
        let g = STerm::meta("G", tm());
        let a = STerm::lam("u", tm(), STerm::app(f.clone(), STerm::var("u", tm())));
        let b = STerm::lam("u", tm(), g.clone());
        let s = unifier(pattern_unify(&a, &b, &[]));
        assert_eq!(s.apply(&a), s.apply(&b));

        // λu.λv. F u v = λu.λv. F v u  keeps neither argument.
        let f2 = STerm::meta("F", SimpleType::arrows([tm(), tm()], tm()));
        let (u, v) = (STerm::var("u", tm()), STerm::var("v", tm()));
        let lhs = STerm::lam("u", tm(), STerm::lam("v", tm(), STerm::apps(f2.clone(), [u.clone(), v.clone()])));
        let rhs = STerm::lam("u", tm(), STerm::lam("v", tm(), STerm::apps(f2, [v, u])));
        let s = unifier(pattern_unify(&lhs, &rhs, &[]));
        assert_eq!(s.apply(&lhs), s.apply(&rhs));
    }

    #[test]
    fn occurs_check() {
        let f = STerm::meta("X", tm());
        let s = STerm::constant("s", SimpleType::arrow(tm(), tm()));
        assert_eq!(pattern_unify(&f, &STerm::app(s, f.clone()), &[]), UnifyOutcome::Clash);
    }

    #[test]
    fn bound_variable_escape() {
        // λu. X = λu. u has no solution.
        let x = STerm::meta("X", tm());
        let a = STerm::lam("u", tm(), x);
        let b = STerm::lam("u", tm(), STerm::var("u", tm()));
        assert_eq!(pattern_unify(&a, &b, &[]), UnifyOutcome::Clash);
    }
}
