use std::collections::BTreeSet;
use std::rc::Rc;

use super::trace::{Instance, ProofTrace, TraceStep};
use super::unify::{MetaContext, NonPatternProblem, UnifyFailure};
use super::{normalize_atom, normalize_clause, SolveResult, BETA};
use crate::syntax::{fresh_name, Atom, HHClause, HHGoal, HHProgram, HHSyntax, Name, STerm, SimpleType};

#[derive(Clone)]
struct Frame {
    goal: HHGoal,
    hyps: Rc<Vec<HHClause>>,
    eigen: Rc<Vec<(Name, SimpleType)>>,
    depth: usize,
}

impl Frame {
    fn with_goal(&self, goal: HHGoal) -> Frame {
        Frame { goal, ..self.clone() }
    }
}

/// One proof step as it is taken, before the final substitution is known.
#[derive(Clone)]
enum Logged {
    True,
    And,
    Implies(HHClause),
    Forall(Name, SimpleType),
    Backchain { index: usize, metas: Vec<(Name, SimpleType, STerm)>, atom: Atom },
}

struct Search<'p> {
    program: &'p [HHClause],
    constants: BTreeSet<Name>,
    ctx: MetaContext,
    /// Pre-order log of the current partial proof, with arities.
    log: Vec<(Logged, usize)>,
    cut_off: bool,
    non_pattern: Option<NonPatternProblem>,
}

/// The result and whether any branch hit the depth bound.
pub(super) fn run(program: &HHProgram, goal: &HHGoal, depth: usize) -> (SolveResult, bool) {
    let mut constants = goal.constants();
    constants.extend(goal.free_vars());
    for c in &program.clauses {
        constants.extend(c.constants());
    }
    let mut search = Search {
        program: &program.clauses,
        constants,
        ctx: MetaContext::new(),
        log: Vec::new(),
        cut_off: false,
        non_pattern: None,
    };
    let root = Frame { goal: goal.clone(), hyps: Rc::default(), eigen: Rc::default(), depth };
    let result = if search.solve(vec![root]) {
        SolveResult::Proved(search.rebuild())
    } else if let Some(p) = search.non_pattern.take() {
        SolveResult::Incomplete(p)
    } else if search.cut_off {
        SolveResult::Exhausted { depth }
    } else {
        SolveResult::FailedNoProof
    };
    (result, search.cut_off)
}

/// An atomic goal with the clauses not yet tried on it, and the state to
/// restore before trying the next one.
struct Choice {
    frame: Frame,
    atom: Atom,
    clauses: Vec<(usize, HHClause)>,
    next: usize,
    rest: Vec<Frame>,
    ctx: MetaContext,
    log_len: usize,
}

impl Search<'_> {
    /// Solves the frames on the stack, top first, backtracking over the
    /// clause choices made at atomic goals.
    fn solve(&mut self, mut stack: Vec<Frame>) -> bool {
        let mut choices: Vec<Choice> = Vec::new();
        loop {
            let Some(frame) = stack.pop() else { return true };
            match &frame.goal {
                HHGoal::True => self.log.push((Logged::True, 0)),
                HHGoal::And(a, b) => {
                    self.log.push((Logged::And, 2));
                    stack.push(frame.with_goal((**b).clone()));
                    stack.push(frame.with_goal((**a).clone()));
                }
                HHGoal::Implies(c, g) => {
                    self.log.push((Logged::Implies((**c).clone()), 1));
                    let mut hyps = (*frame.hyps).clone();
                    hyps.push((**c).clone());
                    stack.push(Frame { goal: (**g).clone(), hyps: Rc::new(hyps), ..frame.clone() });
                }
                HHGoal::Forall(b, ty, body) => {
                    let hint = if b.name().as_str() == "_" { Name::new("x") } else { b.name().clone() };
                    let mut avoid = self.ctx.used().clone();
                    avoid.extend(self.constants.iter().cloned());
                    let x = fresh_name(&hint, &avoid);
                    self.ctx.reserve(x.clone());
                    self.log.push((Logged::Forall(x.clone(), ty.clone()), 1));
                    let mut eigen = (*frame.eigen).clone();
                    eigen.push((x.clone(), ty.clone()));
                    let goal = body.open_with(&STerm::Var(x, ty.clone()));
                    stack.push(Frame { goal, eigen: Rc::new(eigen), ..frame.clone() });
                }
                HHGoal::Atom(a) => {
                    let atom = a.map_terms(0, &mut |t, _| self.ctx.subst.apply(t));
                    let clauses = self
                        .program
                        .iter()
                        .chain(frame.hyps.iter())
                        .enumerate()
                        .filter(|(_, c)| c.head().predicate() == atom.predicate())
                        .map(|(i, c)| (i, c.clone()))
                        .collect();
                    choices.push(Choice {
                        frame: frame.clone(),
                        atom,
                        clauses,
                        next: 0,
                        rest: std::mem::take(&mut stack),
                        ctx: self.ctx.clone(),
                        log_len: self.log.len(),
                    });
                    match self.retry(&mut choices) {
                        Some(next) => stack = next,
                        None => return false,
                    }
                }
            }
        }
    }

    /// Tries the remaining clauses of the innermost choice point, popping
    /// exhausted ones. Returns the goals left to prove after a successful
    /// backchaining step, or `None` once every choice is exhausted.
    fn retry(&mut self, choices: &mut Vec<Choice>) -> Option<Vec<Frame>> {
        loop {
            let choice = choices.last_mut()?;
            self.ctx = choice.ctx.clone();
            self.log.truncate(choice.log_len);
            let Some((index, clause)) = choice.clauses.get(choice.next).cloned() else {
                choices.pop();
                continue;
            };
            choice.next += 1;
            let scope: BTreeSet<Name> = choice.frame.eigen.iter().map(|(n, _)| n.clone()).collect();
            let (metas, premises, head) = self.instantiate(&clause, &scope);
            let unified =
                head.args().into_iter().zip(choice.atom.args()).try_for_each(|(x, y)| self.ctx.unify(x, y));
            match unified {
                Ok(()) if choice.frame.depth == 0 => self.cut_off = true,
                Ok(()) => {
                    let backchain = Logged::Backchain { index, metas, atom: choice.atom.clone() };
                    self.log.push((backchain, premises.len()));
                    let mut next = choice.rest.clone();
                    for p in premises.into_iter().rev() {
                        next.push(Frame { goal: p, depth: choice.frame.depth - 1, ..choice.frame.clone() });
                    }
                    return Some(next);
                }
                Err(UnifyFailure::Clash) => {}
                Err(UnifyFailure::NonPattern(p)) => {
                    self.non_pattern.get_or_insert(p);
                }
            }
        }
    }

    /// Replaces the clause's quantifiers with fresh metavariables.
    #[allow(clippy::type_complexity)]
    fn instantiate(
        &mut self,
        clause: &HHClause,
        scope: &BTreeSet<Name>,
    ) -> (Vec<(Name, SimpleType, STerm)>, Vec<HHGoal>, Atom) {
        let mut metas = Vec::new();
        let mut premises = Vec::new();
        let mut c = clause.clone();
        loop {
            match c {
                HHClause::Forall(b, ty, body) => {
                    let m = self.ctx.fresh(b.name(), ty.clone(), scope.clone());
                    c = body.open_with(&m);
                    metas.push((b.name().clone(), ty, m));
                }
                HHClause::Implies(p, h) => {
                    premises.push(*p);
                    c = *h;
                }
                HHClause::Atom(a) => return (metas, premises, a),
            }
        }
    }

    fn rebuild(&self) -> ProofTrace {
        let mut entries = self.log.iter();
        let trace = self.node(&mut entries);
        debug_assert!(entries.next().is_none());
        trace
    }

    fn node<'a>(&self, entries: &mut impl Iterator<Item = &'a (Logged, usize)>) -> ProofTrace {
        let (logged, arity) = entries.next().expect("proof log ends early");
        let subst = &self.ctx.subst;
        let step = match logged {
            Logged::True => TraceStep::True,
            Logged::And => TraceStep::And,
            Logged::Implies(c) => TraceStep::Implies { clause: normalize_clause(&c.map_terms(0, &mut |t, _| subst.substitute(t)), BETA) },
            Logged::Forall(x, ty) => TraceStep::Forall { eigen: x.clone(), ty: ty.clone() },
            Logged::Backchain { index, metas, atom } => TraceStep::Backchain {
                clause_index: *index,
                instantiation: metas
                    .iter()
                    .map(|(binder, ty, m)| Instance { binder: binder.clone(), ty: ty.clone(), term: subst.apply(m) })
                    .collect(),
                goal: normalize_atom(&atom.map_terms(0, &mut |t, _| subst.substitute(t)), BETA),
            },
        };
        let children = (0..*arity).map(|_| self.node(entries)).collect();
        ProofTrace { step, children }
    }
}
