//! Uniform-proof search for hereditary Harrop programs.
//!
//! Goals are decomposed right to left (`true`, `&`, `=>`, `all`) and atomic
//! goals are solved by backchaining over the program clauses followed by
//! the hypotheses introduced so far, in that order. Clause variables become
//! metavariables solved by pattern unification. The depth bound counts
//! backchaining steps along a branch.

mod replay;
mod search;
mod trace;
mod unify;

use std::fmt;

use crate::syntax::{st_normalize_with, Atom, HHClause, HHGoal, HHProgram, HHSyntax, Name, NormalizeConfig, STerm};

pub use replay::replay_trace;
pub use trace::{Instance, ProofTrace, TraceError, TraceStep};
pub use unify::{
    pattern_unify, MetaContext, MetaInfo, MetaSubstitution, NonPatternProblem, UnifyFailure,
    UnifyOutcome,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Proved(ProofTrace),
    /// Some branch was cut off by the depth bound and nothing was proved.
    Exhausted { depth: usize },
    /// The search space was finite and contained no proof.
    FailedNoProof,
    /// Unification left the pattern fragment somewhere in the search.
    Incomplete(NonPatternProblem),
}

impl SolveResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SolveResult::Proved(_))
    }

    pub fn trace(&self) -> Option<&ProofTrace> {
        match self {
            SolveResult::Proved(t) => Some(t),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolveResult::Proved(_) => "proved",
            SolveResult::Exhausted { .. } => "exhausted",
            SolveResult::FailedNoProof => "no-proof",
            SolveResult::Incomplete(_) => "non-pattern",
        }
    }
}

impl fmt::Display for SolveResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveResult::Proved(t) => write!(f, "proved ({} steps)", t.size()),
            SolveResult::Exhausted { depth } => write!(f, "no proof within depth {depth}"),
            SolveResult::FailedNoProof => write!(f, "no proof"),
            SolveResult::Incomplete(p) => write!(f, "incomplete: non-pattern problem {p}"),
        }
    }
}

/// Depth-bounded search for a proof of a closed goal without metavariables.
pub fn solve(program: &HHProgram, goal: &HHGoal, depth: usize) -> SolveResult {
    search::run(program, goal, depth).0
}

/// Runs [`solve`] at depths `0..=max_depth`, stopping at the first proof or
/// as soon as a run was not cut off by its bound.
pub fn solve_iterative(program: &HHProgram, goal: &HHGoal, max_depth: usize) -> SolveResult {
    let mut last = SolveResult::FailedNoProof;
    for depth in 0..=max_depth {
        let (result, cut_off) = search::run(program, goal, depth);
        if result.is_proved() || !cut_off {
            return result;
        }
        last = result;
    }
    last
}

pub(crate) fn normalize_atom(a: &Atom, config: NormalizeConfig) -> Atom {
    a.map_terms(0, &mut |t, _| st_normalize_with(t, config))
}

/// Normalizes every atom of a goal, opening quantifiers so that the terms
/// being normalized are locally closed.
pub(crate) fn normalize_goal(g: &HHGoal, config: NormalizeConfig) -> HHGoal {
    match g {
        HHGoal::True => HHGoal::True,
        HHGoal::Atom(a) => HHGoal::Atom(normalize_atom(a, config)),
        HHGoal::And(a, b) => HHGoal::and(normalize_goal(a, config), normalize_goal(b, config)),
        HHGoal::Implies(c, g) => HHGoal::implies(normalize_clause(c, config), normalize_goal(g, config)),
        HHGoal::Forall(b, ty, body) => {
            let x = Name::internal(b.name());
            let opened = body.open_with(&STerm::Var(x.clone(), ty.clone()));
            HHGoal::Forall(b.clone(), ty.clone(), Box::new(normalize_goal(&opened, config).close_over(&x)))
        }
    }
}

pub(crate) fn normalize_clause(c: &HHClause, config: NormalizeConfig) -> HHClause {
    match c {
        HHClause::Atom(a) => HHClause::Atom(normalize_atom(a, config)),
        HHClause::Implies(g, h) => HHClause::implies(normalize_goal(g, config), normalize_clause(h, config)),
        HHClause::Forall(b, ty, body) => {
            let x = Name::internal(b.name());
            let opened = body.open_with(&STerm::Var(x.clone(), ty.clone()));
            HHClause::Forall(b.clone(), ty.clone(), Box::new(normalize_clause(&opened, config).close_over(&x)))
        }
    }
}

const BETA: NormalizeConfig = NormalizeConfig { eta_long: false };
const LONG: NormalizeConfig = NormalizeConfig { eta_long: true };

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::{parse_goal, print, HHScope};
    use crate::encoding::{encode_signature, judgment_to_goal};
    use crate::witness;

    fn collision() -> HHProgram {
        encode_signature(&witness::signature()).unwrap()
    }

    fn goal(text: &str) -> HHGoal {
        let program = collision();
        parse_goal(text, &HHScope::new(program.constant_table())).unwrap()
    }

    #[test]
    fn collision_goal_is_proved() {
        let g = goal("hastype (c (\\x:tm. \\y:tm. z)) nat");
        let result = solve(&collision(), &g, 5);
        let trace = result.trace().expect("proof");
        assert!(replay_trace(&collision(), &g, trace));
        assert_eq!(trace.depth(), 2);
        let TraceStep::Backchain { clause_index, instantiation, .. } = &trace.step else { panic!() };
        assert_eq!(*clause_index, 3);
        assert_eq!(print::sterm(&instantiation[0].term), "\\x:tm. \\y:tm. z");
    }

    #[test]
    fn base_cases() {
        let p = collision();
        assert!(solve(&p, &goal("hastype z nat"), 1).is_proved());
        assert_eq!(solve(&p, &goal("hastype z nat"), 0), SolveResult::Exhausted { depth: 0 });
        for depth in 0..6 {
            assert_eq!(solve(&p, &goal("hastype z (num z)"), depth), SolveResult::FailedNoProof);
        }
        assert!(solve(&p, &goal("istype (num z)"), 2).is_proved());
        assert!(solve(&p, &goal("true & istype nat"), 1).is_proved());
    }

    #[test]
    fn hypothetical_goals() {
        let p = collision();
        let g = goal("all x:tm. hastype x nat => all y:tm. hastype y (num x) => hastype y (num x)");
        let r = solve(&p, &g, 1);
        let t = r.trace().unwrap();
        assert!(replay_trace(&p, &g, t));
        let TraceStep::Forall { eigen, .. } = &t.step else { panic!() };
        assert_eq!(eigen.as_str(), "x");
        let g = goal("all x:tm. hastype x (num z)");
        assert_eq!(solve(&p, &g, 3), SolveResult::FailedNoProof);
    }

    #[test]
    fn iterative_deepening() {
        let p = collision();
        let g = judgment_to_goal(&witness::signature(), &witness::good_term(), &witness::nat()).unwrap();
        let shallow = solve_iterative(&p, &g, 28);
        assert_eq!(shallow.trace().unwrap().depth(), 2);
        assert_eq!(solve(&p, &g, 1), SolveResult::Exhausted { depth: 1 });
        assert_eq!(solve_iterative(&p, &goal("hastype z (num z)"), 10), SolveResult::FailedNoProof);
    }

    #[test]
    fn non_pattern_is_reported() {
        let mut p = collision();
        // all f:tm -> tm. hastype (f z) nat : the head is not a pattern.
        let scope = HHScope::new(p.constant_table());
        p.clauses.push(crate::concrete::parse_clause("all f:tm -> tm. hastype (f z) (num z)", &scope).unwrap());
        let r = solve(&p, &goal("hastype z (num z)"), 2);
        assert!(matches!(r, SolveResult::Incomplete(_)), "{r:?}");
    }
}
