use std::collections::BTreeSet;

use super::trace::{Instance, ProofTrace, TraceStep};
use super::{normalize_atom, normalize_clause, LONG};
use crate::syntax::{Atom, HHClause, HHGoal, HHProgram, HHSyntax, Name, STerm, SimpleType};

/// Checks a trace against the goal it claims to prove, without searching.
///
/// Every step must match the shape of its goal, each backchaining step must
/// name a clause in scope whose instance has the goal as its head, and each
/// eigenvariable must be new and never escape into an instantiation made
/// outside its scope.
pub fn replay_trace(program: &HHProgram, goal: &HHGoal, trace: &ProofTrace) -> bool {
    if !goal.metavars().is_empty() {
        return false;
    }
    let mut reserved = goal.constants();
    reserved.extend(goal.free_vars());
    for c in &program.clauses {
        reserved.extend(c.constants());
    }
    let mut replay = Replay { program: &program.clauses, reserved };
    replay.check(goal, &[], &[], trace)
}

struct Replay<'p> {
    program: &'p [HHClause],
    /// Constants and every eigenvariable introduced so far.
    reserved: BTreeSet<Name>,
}

impl Replay<'_> {
    fn check(&mut self, goal: &HHGoal, hyps: &[HHClause], eigen: &[(Name, SimpleType)], t: &ProofTrace) -> bool {
        match (goal, &t.step, t.children.as_slice()) {
            (HHGoal::True, TraceStep::True, []) => true,
            (HHGoal::And(a, b), TraceStep::And, [ta, tb]) => {
                self.check(a, hyps, eigen, ta) && self.check(b, hyps, eigen, tb)
            }
            (HHGoal::Implies(c, g), TraceStep::Implies { clause }, [tg]) => {
                if normalize_clause(c, LONG) != normalize_clause(clause, LONG) {
                    return false;
                }
                let mut hyps = hyps.to_vec();
                hyps.push((**c).clone());
                self.check(g, &hyps, eigen, tg)
            }
            (HHGoal::Forall(_, ty, body), TraceStep::Forall { eigen: x, ty: xty }, [tb]) => {
                if ty != xty || x.is_internal() || !self.reserved.insert(x.clone()) {
                    return false;
                }
                let mut eigen = eigen.to_vec();
                eigen.push((x.clone(), ty.clone()));
                self.check(&body.open_with(&STerm::Var(x.clone(), ty.clone())), hyps, &eigen, tb)
            }
            (HHGoal::Atom(a), TraceStep::Backchain { clause_index, instantiation, goal: solved }, premises) => {
                let a = normalize_atom(a, LONG);
                if normalize_atom(solved, LONG) != a {
                    return false;
                }
                let Some(clause) = self.program.iter().chain(hyps).nth(*clause_index) else {
                    return false;
                };
                let Some((subgoals, head)) = instance(clause, instantiation, eigen) else {
                    return false;
                };
                normalize_atom(&head, LONG) == a
                    && subgoals.len() == premises.len()
                    && subgoals.iter().zip(premises).all(|(g, p)| self.check(g, hyps, eigen, p))
            }
            _ => false,
        }
    }
}

/// The premises and head of `clause` under `instantiation`, provided every
/// instance is a closed, well-typed term over the eigenvariables in scope.
fn instance(
    clause: &HHClause,
    instantiation: &[Instance],
    eigen: &[(Name, SimpleType)],
) -> Option<(Vec<HHGoal>, Atom)> {
    let mut insts = instantiation.iter();
    let mut premises = Vec::new();
    let mut c = clause.clone();
    loop {
        match c {
            HHClause::Forall(_, ty, body) => {
                let inst = insts.next()?;
                let t = &inst.term;
                let mut scoped = true;
                t.for_each_leaf(0, &mut |leaf, _| {
                    if let STerm::Var(x, xty) = leaf {
                        scoped &= eigen.iter().any(|(e, ety)| e == x && ety == xty);
                    }
                });
                if inst.ty != ty
                    || t.check_type(&ty).is_err()
                    || !t.metavars().is_empty()
                    || !t.is_locally_closed()
                    || !scoped
                {
                    return None;
                }
                c = body.open_with(t);
            }
            HHClause::Implies(p, h) => {
                premises.push(*p);
                c = *h;
            }
            HHClause::Atom(a) => {
                return insts.next().is_none().then_some((premises, a));
            }
        }
    }
}
