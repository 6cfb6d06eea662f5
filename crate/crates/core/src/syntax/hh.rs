//! Hereditary Harrop goals and program clauses over `istype`/`hastype` atoms.

use std::collections::BTreeSet;

use super::name::{Binder, Name};
use super::stlc::{SimpleType, STerm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `hastype M A`: the object encoded by `M` has the type encoded by `A`.
    Hastype(STerm, STerm),
    /// `istype A`
    Istype(STerm),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HHGoal {
    True,
    Atom(Atom),
    And(Box<HHGoal>, Box<HHGoal>),
    Implies(Box<HHClause>, Box<HHGoal>),
    Forall(Binder, SimpleType, Box<HHGoal>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HHClause {
    Atom(Atom),
    Implies(Box<HHGoal>, Box<HHClause>),
    Forall(Binder, SimpleType, Box<HHClause>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HHProgram {
    pub clauses: Vec<HHClause>,
}

impl HHProgram {
    pub fn new(clauses: Vec<HHClause>) -> Self {
        HHProgram { clauses }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Names and types of every constant mentioned in the program.
    pub fn constant_table(&self) -> Vec<(Name, SimpleType)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in &self.clauses {
            c.for_each_term(0, &mut |t, _| {
                t.for_each_leaf(0, &mut |leaf, _| {
                    if let STerm::Const(n, ty) = leaf {
                        if seen.insert(n.clone()) {
                            out.push((n.clone(), ty.clone()));
                        }
                    }
                })
            });
        }
        out
    }
}

/// Structural operations common to atoms, goals and clauses, expressed via
/// the maximal term arguments and the number of quantifiers above them.
pub trait HHSyntax: Sized + Clone {
    fn map_terms<F: FnMut(&STerm, u32) -> STerm>(&self, depth: u32, f: &mut F) -> Self;

    fn for_each_term<F: FnMut(&STerm, u32)>(&self, depth: u32, f: &mut F);

    fn open_with(&self, replacement: &STerm) -> Self {
        self.map_terms(0, &mut |t, d| t.open_at(d, replacement))
    }

    fn close_over(&self, name: &Name) -> Self {
        self.map_terms(0, &mut |t, d| t.close_at(d, name))
    }

    fn subst_meta(&self, name: &Name, replacement: &STerm) -> Self {
        self.map_terms(0, &mut |t, _| t.subst_meta(name, replacement))
    }

    fn metavars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_term(0, &mut |t, _| out.extend(t.metavars()));
        out
    }

    fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_term(0, &mut |t, _| out.extend(t.free_vars()));
        out
    }

    fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_term(0, &mut |t, _| out.extend(t.constants()));
        out
    }
}

impl Atom {
    pub fn hastype(term: STerm, ty: STerm) -> Self {
        Atom::Hastype(term, ty)
    }

    pub fn predicate(&self) -> &'static str {
        match self {
            Atom::Hastype(..) => "hastype",
            Atom::Istype(..) => "istype",
        }
    }

    pub fn args(&self) -> Vec<&STerm> {
        match self {
            Atom::Hastype(m, a) => vec![m, a],
            Atom::Istype(a) => vec![a],
        }
    }
}

impl HHSyntax for Atom {
    fn map_terms<F: FnMut(&STerm, u32) -> STerm>(&self, depth: u32, f: &mut F) -> Self {
        match self {
            Atom::Hastype(m, a) => Atom::Hastype(f(m, depth), f(a, depth)),
            Atom::Istype(a) => Atom::Istype(f(a, depth)),
        }
    }

    fn for_each_term<F: FnMut(&STerm, u32)>(&self, depth: u32, f: &mut F) {
        match self {
            Atom::Hastype(m, a) => {
                f(m, depth);
                f(a, depth);
            }
            Atom::Istype(a) => f(a, depth),
        }
    }
}

impl HHGoal {
    pub fn atom(a: Atom) -> Self {
        HHGoal::Atom(a)
    }

    pub fn and(a: HHGoal, b: HHGoal) -> Self {
        HHGoal::And(Box::new(a), Box::new(b))
    }

    pub fn implies(hyp: HHClause, concl: HHGoal) -> Self {
        HHGoal::Implies(Box::new(hyp), Box::new(concl))
    }

    /// `∀name:ty. body`, abstracting the free variable `name` in `body`.
    pub fn forall(name: impl Into<Name>, ty: SimpleType, body: HHGoal) -> Self {
        let name = name.into();
        let body = body.close_over(&name);
        HHGoal::Forall(Binder(name), ty, Box::new(body))
    }

    /// Forgets the goal/clause distinction; used to compare goals with clauses.
    pub fn to_formula(&self) -> Formula {
        match self {
            HHGoal::True => Formula::True,
            HHGoal::Atom(a) => Formula::Atom(a.clone()),
            HHGoal::And(a, b) => Formula::And(Box::new(a.to_formula()), Box::new(b.to_formula())),
            HHGoal::Implies(h, c) => {
                Formula::Implies(Box::new(h.to_formula()), Box::new(c.to_formula()))
            }
            HHGoal::Forall(b, ty, body) => {
                Formula::Forall(b.clone(), ty.clone(), Box::new(body.to_formula()))
            }
        }
    }
}

impl HHSyntax for HHGoal {
    fn map_terms<F: FnMut(&STerm, u32) -> STerm>(&self, depth: u32, f: &mut F) -> Self {
        match self {
            HHGoal::True => HHGoal::True,
            HHGoal::Atom(a) => HHGoal::Atom(a.map_terms(depth, f)),
            HHGoal::And(a, b) => HHGoal::and(a.map_terms(depth, f), b.map_terms(depth, f)),
            HHGoal::Implies(h, c) => HHGoal::implies(h.map_terms(depth, f), c.map_terms(depth, f)),
            HHGoal::Forall(b, ty, body) => {
                HHGoal::Forall(b.clone(), ty.clone(), Box::new(body.map_terms(depth + 1, f)))
            }
        }
    }

    fn for_each_term<F: FnMut(&STerm, u32)>(&self, depth: u32, f: &mut F) {
        match self {
            HHGoal::True => {}
            HHGoal::Atom(a) => a.for_each_term(depth, f),
            HHGoal::And(a, b) => {
                a.for_each_term(depth, f);
                b.for_each_term(depth, f);
            }
            HHGoal::Implies(h, c) => {
                h.for_each_term(depth, f);
                c.for_each_term(depth, f);
            }
            HHGoal::Forall(_, _, body) => body.for_each_term(depth + 1, f),
        }
    }
}

impl HHClause {
    pub fn atom(a: Atom) -> Self {
        HHClause::Atom(a)
    }

    pub fn implies(premise: HHGoal, head: HHClause) -> Self {
        HHClause::Implies(Box::new(premise), Box::new(head))
    }

    pub fn forall(name: impl Into<Name>, ty: SimpleType, body: HHClause) -> Self {
        let name = name.into();
        let body = body.close_over(&name);
        HHClause::Forall(Binder(name), ty, Box::new(body))
    }

    /// The atom reached by stripping quantifiers and premises. Its terms may
    /// mention indices bound by the stripped quantifiers.
    pub fn head(&self) -> &Atom {
        match self {
            HHClause::Atom(a) => a,
            HHClause::Implies(_, h) => h.head(),
            HHClause::Forall(_, _, body) => body.head(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            HHClause::Atom(a) => Formula::Atom(a.clone()),
            HHClause::Implies(p, h) => {
                Formula::Implies(Box::new(p.to_formula()), Box::new(h.to_formula()))
            }
            HHClause::Forall(b, ty, body) => {
                Formula::Forall(b.clone(), ty.clone(), Box::new(body.to_formula()))
            }
        }
    }
}

impl HHSyntax for HHClause {
    fn map_terms<F: FnMut(&STerm, u32) -> STerm>(&self, depth: u32, f: &mut F) -> Self {
        match self {
            HHClause::Atom(a) => HHClause::Atom(a.map_terms(depth, f)),
            HHClause::Implies(p, h) => HHClause::implies(p.map_terms(depth, f), h.map_terms(depth, f)),
            HHClause::Forall(b, ty, body) => {
                HHClause::Forall(b.clone(), ty.clone(), Box::new(body.map_terms(depth + 1, f)))
            }
        }
    }

    fn for_each_term<F: FnMut(&STerm, u32)>(&self, depth: u32, f: &mut F) {
        match self {
            HHClause::Atom(a) => a.for_each_term(depth, f),
            HHClause::Implies(p, h) => {
                p.for_each_term(depth, f);
                h.for_each_term(depth, f);
            }
            HHClause::Forall(_, _, body) => body.for_each_term(depth + 1, f),
        }
    }
}

/// A formula without the goal/clause polarity split. Parsing produces this
/// first and then classifies it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(Atom),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Binder, SimpleType, Box<Formula>),
}

impl Formula {
    pub fn into_goal(self) -> Option<HHGoal> {
        Some(match self {
            Formula::True => HHGoal::True,
            Formula::Atom(a) => HHGoal::Atom(a),
            Formula::And(a, b) => HHGoal::and(a.into_goal()?, b.into_goal()?),
            Formula::Implies(h, c) => HHGoal::implies(h.into_clause()?, c.into_goal()?),
            Formula::Forall(b, ty, body) => HHGoal::Forall(b, ty, Box::new(body.into_goal()?)),
        })
    }

    pub fn into_clause(self) -> Option<HHClause> {
        Some(match self {
            Formula::Atom(a) => HHClause::Atom(a),
            Formula::Implies(p, h) => HHClause::implies(p.into_goal()?, h.into_clause()?),
            Formula::Forall(b, ty, body) => HHClause::Forall(b, ty, Box::new(body.into_clause()?)),
            Formula::True | Formula::And(..) => return None,
        })
    }
}
