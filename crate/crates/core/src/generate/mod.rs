//! Seeded random generators for the property suites.
//!
//! Every generator is a deterministic function of the seed. Simply typed
//! terms are generated type-directed and may contain β-redexes; LF objects
//! are well scoped but usually ill typed, since the well-typed ones are
//! covered exhaustively by [`crate::harness`].

pub mod laws;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{
    Atom, HHClause, HHGoal, LfDecl, LfFamily, LfKind, LfObject, LfSignature, Name, STerm, SimpleType,
};

/// Simple-type constants available to generated terms: the reflected
/// four-entry signature plus a successor and a binder-taking constant.
pub fn constant_table() -> Vec<(Name, SimpleType)> {
    let tm = SimpleType::Tm;
    vec![
        (Name::new("nat"), SimpleType::Ty),
        (Name::new("num"), SimpleType::arrow(tm.clone(), SimpleType::Ty)),
        (Name::new("z"), tm.clone()),
        (Name::new("c"), SimpleType::arrow(SimpleType::arrows([tm.clone(), tm.clone()], tm.clone()), tm.clone())),
        (Name::new("s"), SimpleType::arrow(tm.clone(), tm.clone())),
        (Name::new("lam"), SimpleType::arrow(SimpleType::arrow(tm.clone(), tm.clone()), tm)),
    ]
}

pub struct Gen {
    rng: ChaCha8Rng,
    counter: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), counter: 0 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("pick from an empty slice")
    }

    /// A binder name never produced before by this generator.
    pub fn binder(&mut self, stem: &str) -> Name {
        self.counter += 1;
        Name::new(format!("{stem}{}", self.counter))
    }

    pub fn simple_type(&mut self, depth: usize) -> SimpleType {
        if depth == 0 || self.chance(0.6) {
            if self.chance(0.8) { SimpleType::Tm } else { SimpleType::Ty }
        } else {
            let dom = if self.chance(0.8) { SimpleType::Tm } else { self.simple_type(depth - 1) };
            SimpleType::arrow(dom, self.simple_type(depth - 1))
        }
    }

    /// A term of type `ty` over the named variables in `env` and the
    /// constants in `consts`. `fuel` bounds the size loosely.
    pub fn sterm(
        &mut self,
        consts: &[(Name, SimpleType)],
        env: &[(Name, SimpleType)],
        ty: &SimpleType,
        fuel: usize,
    ) -> STerm {
        if let SimpleType::Arrow(dom, cod) = ty {
            if fuel == 0 || self.chance(0.7) {
                let x = self.binder("x");
                let mut inner = env.to_vec();
                inner.push((x.clone(), (**dom).clone()));
                let body = self.sterm(consts, &inner, cod, fuel.saturating_sub(1));
                return STerm::lam(x, (**dom).clone(), body);
            }
        }
        if fuel > 2 && self.chance(0.15) {
            let a = self.simple_type(1);
            let x = self.binder("r");
            let mut inner = env.to_vec();
            inner.push((x.clone(), a.clone()));
            let body = self.sterm(consts, &inner, ty, fuel / 2);
            let arg = self.sterm(consts, env, &a, fuel / 2);
            return STerm::app(STerm::lam(x, a, body), arg);
        }
        let heads: Vec<(STerm, Vec<SimpleType>)> = env
            .iter()
            .map(|(n, t)| (STerm::Var(n.clone(), t.clone()), t.clone()))
            .chain(consts.iter().map(|(n, t)| (STerm::Const(n.clone(), t.clone()), t.clone())))
            .filter_map(|(h, t)| arity_for(&t, ty).map(|args| (h, args)))
            .filter(|(_, args)| fuel > 0 || args.is_empty())
            .collect();
        if heads.is_empty() {
            let SimpleType::Arrow(dom, cod) = ty else {
                panic!("no inhabitant of {ty} among the constants");
            };
            let x = self.binder("x");
            let mut inner = env.to_vec();
            inner.push((x.clone(), (**dom).clone()));
            let body = self.sterm(consts, &inner, cod, 0);
            return STerm::lam(x, (**dom).clone(), body);
        }
        let (head, args) = self.pick(&heads).clone();
        let share = fuel.saturating_sub(1) / args.len().max(1);
        let args: Vec<STerm> = args.iter().map(|a| self.sterm(consts, env, a, share)).collect();
        STerm::apps(head, args)
    }

    /// A closed term over the default constant table.
    pub fn closed_sterm(&mut self, fuel: usize) -> STerm {
        let ty = self.simple_type(2);
        self.sterm(&constant_table(), &[], &ty, fuel)
    }

    pub fn atom(&mut self, consts: &[(Name, SimpleType)], env: &[(Name, SimpleType)], fuel: usize) -> Atom {
        let ty = self.sterm(consts, env, &SimpleType::Ty, fuel / 2);
        if self.chance(0.25) {
            Atom::Istype(ty)
        } else {
            Atom::Hastype(self.sterm(consts, env, &SimpleType::Tm, fuel / 2), ty)
        }
    }

    pub fn goal(&mut self, consts: &[(Name, SimpleType)], env: &[(Name, SimpleType)], depth: usize) -> HHGoal {
        match if depth == 0 { 0 } else { self.below(5) } {
            0 => HHGoal::Atom(self.atom(consts, env, 4)),
            1 => HHGoal::True,
            2 => HHGoal::and(self.goal(consts, env, depth - 1), self.goal(consts, env, depth - 1)),
            3 => HHGoal::implies(self.clause(consts, env, depth - 1), self.goal(consts, env, depth - 1)),
            _ => {
                let ty = self.simple_type(1);
                let x = self.binder("e");
                let mut inner = env.to_vec();
                inner.push((x.clone(), ty.clone()));
                let body = self.goal(consts, &inner, depth - 1);
                HHGoal::forall(x, ty, body)
            }
        }
    }

    pub fn clause(&mut self, consts: &[(Name, SimpleType)], env: &[(Name, SimpleType)], depth: usize) -> HHClause {
        match if depth == 0 { 0 } else { self.below(3) } {
            0 => HHClause::Atom(self.atom(consts, env, 4)),
            1 => HHClause::implies(self.goal(consts, env, depth - 1), self.clause(consts, env, depth - 1)),
            _ => {
                let ty = self.simple_type(1);
                let x = self.binder("a");
                let mut inner = env.to_vec();
                inner.push((x.clone(), ty.clone()));
                let body = self.clause(consts, &inner, depth - 1);
                HHClause::forall(x, ty, body)
            }
        }
    }

    /// A well-scoped LF object over the object constants of `sig` and the
    /// variables `vars`.
    pub fn lf_object(&mut self, sig: &LfSignature, vars: &[Name], fuel: usize) -> LfObject {
        let objects: Vec<Name> = sig
            .decls()
            .iter()
            .filter(|d| matches!(d.classifier, crate::syntax::Classifier::Object(_)))
            .map(|d| d.name.clone())
            .collect();
        let choice = if fuel == 0 { 0 } else { self.below(4) };
        match choice {
            1 | 2 if choice == 1 || vars.is_empty() => {
                let f = self.lf_object(sig, vars, fuel / 2);
                let a = self.lf_object(sig, vars, fuel / 2);
                LfObject::app(f, a)
            }
            2 => LfObject::Var(self.pick(vars).clone()),
            3 => {
                let x = self.binder("x");
                let annot = self.lf_family(sig, vars, 1);
                let mut inner = vars.to_vec();
                inner.push(x.clone());
                let body = self.lf_object(sig, &inner, fuel - 1);
                LfObject::lam(x, annot, body)
            }
            _ if !vars.is_empty() && (objects.is_empty() || self.chance(0.4)) => {
                LfObject::Var(self.pick(vars).clone())
            }
            _ => LfObject::Const(self.pick(&objects).clone()),
        }
    }

    /// A well-scoped family: an applied family constant or a Π over one.
    pub fn lf_family(&mut self, sig: &LfSignature, vars: &[Name], depth: usize) -> LfFamily {
        if depth > 0 && self.chance(0.3) {
            let x = self.binder("p");
            let dom = self.lf_family(sig, vars, depth - 1);
            let mut inner = vars.to_vec();
            inner.push(x.clone());
            let body = self.lf_family(sig, &inner, depth - 1);
            return LfFamily::pi(x, dom, body);
        }
        let families: Vec<(Name, usize)> = sig
            .decls()
            .iter()
            .filter_map(|d| match &d.classifier {
                crate::syntax::Classifier::Family(k) => Some((d.name.clone(), kind_arity(k))),
                _ => None,
            })
            .collect();
        let (head, arity) = self.pick(&families).clone();
        let mut fam = LfFamily::Const(head);
        for _ in 0..arity {
            let arg = self.lf_object(sig, vars, 1);
            fam = LfFamily::app(fam, arg);
        }
        fam
    }

    /// A signature of family and object declarations, each mentioning only
    /// earlier names. Not necessarily well kinded.
    pub fn lf_signature(&mut self, len: usize) -> LfSignature {
        let mut sig = LfSignature::new(vec![
            LfDecl::family("base", LfKind::Type),
            LfDecl::object("b0", LfFamily::constant("base")),
        ]);
        for i in 0..len {
            let name = format!("k{i}");
            if self.chance(0.4) {
                let mut kind = LfKind::Type;
                let mut binders = Vec::new();
                for _ in 0..self.below(3) {
                    binders.push((self.binder("v"), self.lf_family(&sig, &[], 0)));
                }
                for (x, dom) in binders.into_iter().rev() {
                    kind = LfKind::pi(x, dom, kind);
                }
                sig.push(LfDecl::family(name.as_str(), kind));
            } else {
                let ty = self.lf_family(&sig, &[], 2);
                sig.push(LfDecl::object(name.as_str(), ty));
            }
        }
        sig
    }
}

fn kind_arity(k: &LfKind) -> usize {
    match k {
        LfKind::Type => 0,
        LfKind::Pi(_, _, body) => 1 + kind_arity(body),
    }
}

/// The argument types that turn a head of type `head` into one of type
/// `target`, if any prefix of its arrows does.
fn arity_for(head: &SimpleType, target: &SimpleType) -> Option<Vec<SimpleType>> {
    let mut args = Vec::new();
    let mut t = head;
    loop {
        if t == target {
            return Some(args);
        }
        match t {
            SimpleType::Arrow(dom, cod) => {
                args.push((**dom).clone());
                t = cod;
            }
            _ => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_typed() {
        for seed in 0..200 {
            let a = Gen::new(seed).closed_sterm(8);
            assert_eq!(a, Gen::new(seed).closed_sterm(8));
            assert!(a.type_of().is_ok(), "{a:?}");
            assert!(a.is_locally_closed());
        }
    }

    #[test]
    fn signatures_mention_earlier_names_only() {
        for seed in 0..50 {
            let sig = Gen::new(seed).lf_signature(4);
            for (i, d) in sig.decls().iter().enumerate() {
                let earlier: std::collections::BTreeSet<Name> = sig.prefix(i).names();
                let used = match &d.classifier {
                    crate::syntax::Classifier::Family(k) => crate::syntax::LfTerm::constants(k),
                    crate::syntax::Classifier::Object(a) => crate::syntax::LfTerm::constants(a),
                };
                assert!(used.is_subset(&earlier));
            }
        }
    }
}
