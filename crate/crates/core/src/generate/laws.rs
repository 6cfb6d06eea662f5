//! Properties checked on generated instances.
//!
//! Each law takes a seed, builds its instance with [`Gen`] or picks one from
//! a cached exhaustive enumeration, and reports the first violation it
//! finds. A law that does not apply to the instance it drew passes.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::{constant_table, Gen};
use crate::concrete::{
    parse_clause, parse_goal, parse_object, parse_program, parse_signature, print, HHScope,
};
use crate::encoding::{encode_signature, judgment_to_goal, type_to_clause, type_to_goal};
use crate::erasure::{erase_family, reflect_signature, Eraser};
use crate::harness::{enumerate_objects_in, enumerate_objects_with, enumerate_types, Limits};
use crate::kernel::{self, validate_derivation, Conversion, Kernel};
use crate::prover::{pattern_unify, replay_trace, solve, solve_iterative, ProofTrace, TraceStep, UnifyOutcome};
use crate::syntax::lf::normalize;
use crate::syntax::stlc::{alpha_equal, beta_normalize};
use crate::syntax::{
    st_normalize, Atom, Binder, HHClause, HHGoal, HHProgram, HHSyntax, LfContext, LfFamily, LfObject,
    LfSignature, LfTerm, Name, STerm, SimpleType,
};
use crate::witness;

pub type Law = fn(u64) -> Result<(), String>;

/// Every law with its name.
pub const LAWS: &[(&str, Law)] = &[
    ("st_substitution", st_substitution),
    ("lf_substitution", lf_substitution),
    ("normalization", normalization),
    ("lf_normalization", lf_normalization),
    ("alpha_equivalence", alpha_equivalence),
    ("unifier", unifier),
    ("trace_replay", trace_replay),
    ("depth_monotonicity", depth_monotonicity),
    ("signature_roundtrip", signature_roundtrip),
    ("object_roundtrip", object_roundtrip),
    ("program_roundtrip", program_roundtrip),
    ("erasure", erasure),
    ("kernel_soundness", kernel_soundness),
    ("kernel_substitution", kernel_substitution),
    ("encoding", encoding),
];

/// Runs one law by name.
pub fn law(name: &str) -> Option<Law> {
    LAWS.iter().find(|(n, _)| *n == name).map(|(_, l)| *l)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tm() -> SimpleType {
    SimpleType::Tm
}

/// The collision signature extended with a successor and a family member, so
/// that closed objects of every type exist.
const RICH: &str = "nat : type. num : {x:nat} type. z : nat. s : {x:nat} nat. \
                    w : {x:nat} num x. c : {f : {x:nat}{y:num x} nat} nat.";

fn rich() -> &'static LfSignature {
    static SIG: OnceLock<LfSignature> = OnceLock::new();
    SIG.get_or_init(|| parse_signature(RICH).expect("built-in signature parses"))
}

fn rich_closed() -> &'static [LfObject] {
    static OBJS: OnceLock<Vec<LfObject>> = OnceLock::new();
    OBJS.get_or_init(|| enumerate_objects_with(rich(), 5, Limits::default()))
}

fn nat_context() -> LfContext {
    LfContext::new().extend(Name::new("h"), witness::nat())
}

/// Objects over the single variable `h : nat`.
fn rich_open() -> &'static [LfObject] {
    static OBJS: OnceLock<Vec<LfObject>> = OnceLock::new();
    OBJS.get_or_init(|| enumerate_objects_in(rich(), &nat_context(), 5, Limits::default()))
}

/// Encoded judgments of the collision signature up to size 7 that the prover
/// derives, with their traces.
fn proved_judgments() -> &'static [(HHGoal, ProofTrace)] {
    static CASES: OnceLock<Vec<(HHGoal, ProofTrace)>> = OnceLock::new();
    CASES.get_or_init(|| {
        let sig = witness::signature();
        let types = enumerate_types(&sig, Limits::default());
        let pairs: Vec<(LfObject, LfFamily)> = enumerate_objects_with(&sig, 7, Limits::default())
            .into_iter()
            .flat_map(|m| types.iter().map(move |a| (m.clone(), a.clone())))
            .collect();
        pairs
            .par_iter()
            .filter_map(|(m, a)| {
                let goal = judgment_to_goal(&sig, m, a).ok()?;
                let trace = solve_iterative(collision_program(), &goal, 4 * m.size()).trace()?.clone();
                Some((goal, trace))
            })
            .collect()
    })
}

fn collision_program() -> &'static HHProgram {
    static PROGRAM: OnceLock<HHProgram> = OnceLock::new();
    PROGRAM.get_or_init(|| encode_signature(&witness::signature()).expect("collision signature encodes"))
}

fn rename_st(t: &STerm, n: &mut usize) -> STerm {
    match t {
        STerm::App(f, a) => STerm::app(rename_st(f, n), rename_st(a, n)),
        STerm::Lam(_, ty, body) => {
            *n += 1;
            let b = Binder(Name::new(format!("q{n}")));
            STerm::Lam(b, ty.clone(), Box::new(rename_st(body, n)))
        }
        other => other.clone(),
    }
}

fn rename_object(m: &LfObject, n: &mut usize) -> LfObject {
    match m {
        LfObject::App(f, a) => LfObject::app(rename_object(f, n), rename_object(a, n)),
        LfObject::Lam(_, annot, body) => {
            *n += 1;
            let b = Binder(Name::new(format!("q{n}")));
            LfObject::Lam(b, Box::new(rename_family(annot, n)), Box::new(rename_object(body, n)))
        }
        other => other.clone(),
    }
}

fn rename_family(a: &LfFamily, n: &mut usize) -> LfFamily {
    match a {
        LfFamily::Const(_) => a.clone(),
        LfFamily::App(f, m) => LfFamily::app(rename_family(f, n), rename_object(m, n)),
        LfFamily::Pi(_, dom, body) => {
            *n += 1;
            let b = Binder(Name::new(format!("q{n}")));
            LfFamily::Pi(b, Box::new(rename_family(dom, n)), Box::new(rename_family(body, n)))
        }
    }
}

/// `t[x:=u][y:=v] = t[y:=v][x:=u[y:=v]]` for distinct `x`, `y` with `x`
/// not free in `v`, plus commutation of substitution with normalization.
pub fn st_substitution(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let consts = constant_table();
    let x = Name::new("vx");
    let y = Name::new("vy");
    let (a, b) = (g.simple_type(1), g.simple_type(1));
    let env = vec![(x.clone(), a.clone()), (y.clone(), b.clone())];
    let ty = g.simple_type(1);
    let t = g.sterm(&consts, &env, &ty, 8);
    let u = g.sterm(&consts, &env, &a, 4);
    let v = g.sterm(&consts, &env[1..], &b, 4);

    let left = t.subst_var(&x, &u).subst_var(&y, &v);
    let right = t.subst_var(&y, &v).subst_var(&x, &u.subst_var(&y, &v));
    ensure(alpha_equal(&left, &right), || format!("substitution lemma fails on {}", print::sterm(&t)))?;

    let direct = st_normalize(&t.subst_var(&x, &u));
    let late = st_normalize(&st_normalize(&t).subst_var(&x, &st_normalize(&u)));
    ensure(alpha_equal(&direct, &late), || format!("normalization does not commute on {}", print::sterm(&t)))
}

/// The LF counterpart of [`st_substitution`] on well-scoped objects.
pub fn lf_substitution(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let sig = g.lf_signature(4);
    let x = Name::new("vx");
    let y = Name::new("vy");
    let both = [x.clone(), y.clone()];
    let t = g.lf_object(&sig, &both, 8);
    let u = g.lf_object(&sig, &both, 3);
    let v = g.lf_object(&sig, &both[1..], 3);
    let annot = g.lf_family(&sig, &both, 1);
    let fam = LfFamily::app(LfFamily::constant("base"), t.clone());

    let left = t.subst(&x, &u).subst(&y, &v);
    let right = t.subst(&y, &v).subst(&x, &u.subst(&y, &v));
    ensure(left == right, || format!("substitution lemma fails on {}", print::object(&t)))?;
    let left = annot.subst(&x, &u).subst(&y, &v);
    let right = annot.subst(&y, &v).subst(&x, &u.subst(&y, &v));
    ensure(left == right, || format!("substitution lemma fails on {}", print::family(&annot)))?;
    ensure(fam.subst(&x, &u) == LfFamily::app(LfFamily::constant("base"), t.subst(&x, &u)), || {
        "substitution does not distribute over application".into()
    })
}

/// Normalization is idempotent, preserves simple types, and yields β-normal
/// terms.
pub fn normalization(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let t = g.closed_sterm(10);
    let ty = t.type_of().map_err(|e| format!("generator produced an ill-typed term: {e}"))?;
    let n = st_normalize(&t);
    ensure(alpha_equal(&st_normalize(&n), &n), || format!("not idempotent on {}", print::sterm(&t)))?;
    ensure(n.type_of().as_ref() == Ok(&ty), || format!("type changed on {}", print::sterm(&t)))?;
    let b = beta_normalize(&t);
    ensure(alpha_equal(&beta_normalize(&b), &b), || format!("β not idempotent on {}", print::sterm(&t)))?;
    ensure(b.type_of().as_ref() == Ok(&ty), || format!("β changed the type of {}", print::sterm(&t)))
}

/// LF normalization is idempotent and commutes with renaming.
pub fn lf_normalization(seed: u64) -> Result<(), String> {
    let objs = rich_closed();
    let m = Gen::new(seed).pick(objs);
    let n = normalize(m);
    ensure(normalize(&n) == n, || format!("not idempotent on {}", print::object(m)))?;
    ensure(normalize(&rename_object(m, &mut 0)) == n, || format!("not invariant under renaming: {}", print::object(m)))
}

/// α-equivalence is reflexive, symmetric and transitive on a generated set
/// that contains renamed copies.
pub fn alpha_equivalence(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let t = g.closed_sterm(8);
    let mut set = vec![t.clone(), rename_st(&t, &mut 0), st_normalize(&t), g.closed_sterm(8)];
    set.push(rename_st(&set[3], &mut 100));
    for a in &set {
        ensure(alpha_equal(a, a), || "not reflexive".into())?;
        for b in &set {
            ensure(alpha_equal(a, b) == alpha_equal(b, a), || "not symmetric".into())?;
            for c in &set {
                if alpha_equal(a, b) && alpha_equal(b, c) {
                    ensure(alpha_equal(a, c), || "not transitive".into())?;
                }
            }
        }
    }
    ensure(alpha_equal(&set[0], &set[1]), || format!("renaming is not an α-variant: {}", print::sterm(&t)))
}

/// Replaces some subterms of the η-long term `t` by fresh metavariables
/// applied to the λ-bound `locals`. Never descends under a binder, so each
/// replaced subterm is locally closed.
fn punch(
    g: &mut Gen,
    t: &STerm,
    locals: &[(Name, SimpleType)],
    tag: &str,
    count: &mut usize,
) -> STerm {
    if g.chance(0.3) {
        let ty = t.type_of().expect("subterm is typed");
        *count += 1;
        let meta_ty = SimpleType::arrows(locals.iter().map(|(_, a)| a.clone()), ty);
        let meta = STerm::MetaVar(Name::new(format!("{tag}{count}")), meta_ty);
        return STerm::apps(meta, locals.iter().map(|(x, a)| STerm::Var(x.clone(), a.clone())));
    }
    if matches!(t, STerm::Lam(..)) {
        return t.clone();
    }
    let (head, args) = t.spine();
    let args: Vec<STerm> = args.into_iter().map(|a| punch(g, a, locals, tag, count)).collect();
    STerm::apps(head.clone(), args)
}

/// On problems built to have a solution, pattern unification finds a
/// unifier, and applying it makes both sides α-equal.
pub fn unifier(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let consts = constant_table();
    let env: Vec<(Name, SimpleType)> =
        (0..g.below(3)).map(|i| (Name::new(format!("e{i}")), g.simple_type(1))).collect();
    let locals: Vec<(Name, SimpleType)> =
        (0..g.below(3)).map(|i| (Name::new(format!("l{i}")), g.simple_type(1))).collect();
    let all: Vec<_> = env.iter().chain(&locals).cloned().collect();
    let t = st_normalize(&g.sterm(&consts, &all, &tm(), 10));

    let mut count = 0;
    let left = punch(&mut g, &t, &locals, "F", &mut count);
    let right = if g.chance(0.5) { t.clone() } else { punch(&mut g, &t, &locals, "G", &mut count) };
    let close = |body: STerm| locals.iter().rev().fold(body, |acc, (x, a)| STerm::lam(x.clone(), a.clone(), acc));
    let (left, right) = (close(left), close(right));

    match pattern_unify(&left, &right, &env) {
        UnifyOutcome::Unifier(s) => {
            let (l, r) = (s.apply(&left), s.apply(&right));
            ensure(alpha_equal(&l, &r), || {
                format!("unifier does not equate {} and {}", print::sterm(&left), print::sterm(&right))
            })
        }
        other => Err(format!(
            "no unifier for {} =?= {}: {other:?}",
            print::sterm(&left),
            print::sterm(&right)
        )),
    }
}

/// A goal that is derivable by construction: every atom it mentions is an
/// assumption in scope or follows from one.
fn provable_goal(
    g: &mut Gen,
    consts: &[(Name, SimpleType)],
    env: &[(Name, SimpleType)],
    facts: &[Atom],
    depth: usize,
) -> HHGoal {
    let choice = if depth == 0 { 0 } else { g.below(6) };
    match choice {
        0 if !facts.is_empty() => HHGoal::Atom(g.pick(facts).clone()),
        0 | 1 => HHGoal::True,
        2 => HHGoal::and(provable_goal(g, consts, env, facts, depth - 1), provable_goal(g, consts, env, facts, depth - 1)),
        3 => {
            let ty = g.simple_type(1);
            let x = g.binder("e");
            let mut inner = env.to_vec();
            inner.push((x.clone(), ty.clone()));
            HHGoal::forall(x, ty, provable_goal(g, consts, &inner, facts, depth - 1))
        }
        4 => {
            let a = g.atom(consts, env, 4);
            let mut facts = facts.to_vec();
            facts.push(a.clone());
            HHGoal::implies(HHClause::Atom(a), provable_goal(g, consts, env, &facts, depth - 1))
        }
        _ => {
            // all a:tm. G => hastype a T, with G provable from the facts so far
            let ty = g.sterm(consts, env, &SimpleType::Ty, 2);
            let a = g.binder("a");
            let premise = provable_goal(g, consts, env, facts, 1);
            let head = Atom::Hastype(STerm::Var(a.clone(), tm()), ty.clone());
            let clause = HHClause::forall(a, tm(), HHClause::implies(premise, HHClause::Atom(head)));
            let subject = g.sterm(consts, env, &tm(), 3);
            let mut facts = facts.to_vec();
            facts.push(Atom::Hastype(subject, ty));
            HHGoal::implies(clause, provable_goal(g, consts, env, &facts, depth - 1))
        }
    }
}

fn first_backchain(t: &mut ProofTrace) -> Option<&mut ProofTrace> {
    if matches!(t.step, TraceStep::Backchain { .. }) {
        return Some(t);
    }
    t.children.iter_mut().find_map(first_backchain)
}

/// A case for the search laws: even seeds build a derivable goal, odd seeds
/// pick an encoded judgment that the prover derives.
fn search_case(seed: u64) -> (HHProgram, HHGoal, bool) {
    if seed.is_multiple_of(2) {
        let mut g = Gen::new(seed);
        let program = if g.chance(0.5) { collision_program().clone() } else { HHProgram::default() };
        (program, provable_goal(&mut g, &constant_table(), &[], &[], 5), false)
    } else {
        let cases = proved_judgments();
        let (goal, _) = Gen::new(seed).pick(cases);
        (collision_program().clone(), goal.clone(), true)
    }
}

/// Every proof found replays, survives a JSON round trip, and stops
/// replaying once a clause index is corrupted.
pub fn trace_replay(seed: u64) -> Result<(), String> {
    let (program, goal, _) = search_case(seed);
    let shown = print::goal(&goal);
    let result = solve_iterative(&program, &goal, 30);
    let Some(trace) = result.trace() else {
        return Err(format!("no proof of derivable goal {shown}: {result}"));
    };
    ensure(replay_trace(&program, &goal, trace), || format!("trace for {shown} does not replay"))?;

    let mut constants = program.constant_table();
    constants.extend(constant_table());
    let back = ProofTrace::from_json(&trace.to_json(), &constants).map_err(|e| format!("{shown}: {e}"))?;
    ensure(replay_trace(&program, &goal, &back), || format!("trace for {shown} does not replay after JSON"))?;
    ensure(back.to_json() == trace.to_json(), || format!("JSON round trip changes the trace for {shown}"))?;

    let mut bad = trace.clone();
    if let Some(node) = first_backchain(&mut bad) {
        if let TraceStep::Backchain { clause_index, .. } = &mut node.step {
            *clause_index += 1000;
        }
        ensure(!replay_trace(&program, &goal, &bad), || format!("corrupted trace for {shown} replays"))?;
    }
    Ok(())
}

/// A goal proved at some depth stays proved at larger depths; for encoded
/// judgments the proof is the same.
pub fn depth_monotonicity(seed: u64) -> Result<(), String> {
    let (program, goal, same_trace) = search_case(seed);
    let shown = print::goal(&goal);
    let Some(d) = (0..=30).find(|&d| solve(&program, &goal, d).is_proved()) else {
        return Err(format!("no proof of derivable goal {shown}"));
    };
    let first = solve(&program, &goal, d);
    for extra in [1, 2] {
        let later = solve(&program, &goal, d + extra);
        ensure(later.is_proved(), || format!("{shown} proved at depth {d} but not at {}", d + extra))?;
        if same_trace {
            ensure(later == first, || format!("{shown} has a different proof at depth {}", d + extra))?;
        }
    }
    Ok(())
}

pub fn signature_roundtrip(seed: u64) -> Result<(), String> {
    let sig = Gen::new(seed).lf_signature(6);
    let text = print::signature(&sig);
    let back = parse_signature(&text).map_err(|e| format!("{text}: {e}"))?;
    ensure(back == sig, || format!("signature changes in a round trip:\n{text}"))
}

pub fn object_roundtrip(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let sig = g.lf_signature(4);
    let m = g.lf_object(&sig, &[], 10);
    let text = print::object(&m);
    let back = parse_object(&text, &sig).map_err(|e| format!("{text}: {e}"))?;
    ensure(back == m, || format!("object changes in a round trip: {text}"))
}

pub fn program_roundtrip(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let consts = constant_table();
    let program = HHProgram::new((0..1 + g.below(4)).map(|_| g.clause(&consts, &[], 3)).collect());
    let text = print::constant_decls(&consts) + &print::program(&program);
    let back = parse_program(&text, &HHScope::default()).map_err(|e| format!("{text}: {e}"))?;
    ensure(back.constants == consts && back.program == program, || format!("program changes in a round trip:\n{text}"))?;

    let scope = HHScope::new(consts.clone());
    let goal = g.goal(&consts, &[], 3);
    let text = print::goal(&goal);
    ensure(parse_goal(&text, &scope).ok() == Some(goal), || format!("goal changes in a round trip: {text}"))?;
    let text = print::clause(&program.clauses[0]);
    ensure(parse_clause(&text, &scope).ok().as_ref() == Some(&program.clauses[0]), || {
        format!("clause changes in a round trip: {text}")
    })
}

/// Erasure preserves typing on kernel-accepted objects and commutes with
/// substitution on all of them.
pub fn erasure(seed: u64) -> Result<(), String> {
    let sig = rich();
    let reflection = reflect_signature(sig);
    let closed = rich_closed();
    let open = rich_open();
    let mut g = Gen::new(seed);
    let m = g.pick(open);
    let n = g.pick(closed);
    let ctx = nat_context();
    let h = Name::new("h");

    let mut eraser = Eraser::new(&reflection);
    eraser.bind(h.clone(), tm());
    let em = eraser.object(m).map_err(|e| e.to_string())?;
    let en = eraser.object(n).map_err(|e| e.to_string())?;
    if let Ok(a) = kernel::infer_object(sig, &ctx, m) {
        ensure(em.check_type(&erase_family(&a)).is_ok(), || {
            format!("erasure of {} is not of type {}", print::object(m), erase_family(&a))
        })?;
    }
    let substituted = eraser.object(&m.subst(&h, n)).map_err(|e| e.to_string())?;
    ensure(alpha_equal(&substituted, &em.subst_var(&h, &en)), || {
        format!("erasure does not commute with substituting {} in {}", print::object(n), print::object(m))
    })
}

/// Accepted judgments come with derivations the validator accepts, the
/// inferred type is a type, and α-variants get the same verdict.
pub fn kernel_soundness(seed: u64) -> Result<(), String> {
    let sig = rich();
    let objs = rich_closed();
    let m = Gen::new(seed).pick(objs);
    let mode = if seed.is_multiple_of(3) { Conversion::Beta } else { Conversion::BetaEta };
    let k = Kernel::with_conversion(sig, mode);
    let empty = LfContext::new();
    let renamed = rename_object(m, &mut 0);
    match k.infer_object(&empty, m) {
        Ok((a, _)) => {
            let kind = kernel::check_family(sig, &empty, &a).map_err(|e| e.to_string())?;
            ensure(kind == crate::syntax::LfKind::Type, || format!("type of {} is not a type", print::object(m)))?;
            let checked = k.check_object(&empty, m, &a);
            let d = checked.derivation().ok_or_else(|| format!("{} does not check at its own type", print::object(m)))?;
            ensure(validate_derivation(sig, d, mode), || format!("derivation for {} does not validate", print::object(m)))?;
            ensure(k.infer_object(&empty, &renamed).map(|r| r.0).as_ref() == Ok(&a), || {
                format!("α-variant of {} gets another type", print::object(m))
            })
        }
        Err(_) => ensure(k.infer_object(&empty, &renamed).is_err(), || {
            format!("α-variant of rejected {} is accepted", print::object(m))
        }),
    }
}

/// If `h:nat ⊢ m : B` and `⊢ n : nat` then `⊢ m[h:=n] : B[h:=n]`.
pub fn kernel_substitution(seed: u64) -> Result<(), String> {
    static NATS: OnceLock<Vec<LfObject>> = OnceLock::new();
    let sig = rich();
    let nats = NATS.get_or_init(|| {
        rich_closed()
            .iter()
            .filter(|n| kernel::infer_object(sig, &LfContext::new(), n).ok() == Some(witness::nat()))
            .cloned()
            .collect()
    });
    let open = rich_open();
    let mut g = Gen::new(seed);
    let m = g.pick(open);
    let n = g.pick(nats);
    let h = Name::new("h");
    let Ok(b) = kernel::infer_object(sig, &nat_context(), m) else { return Ok(()) };
    let got = kernel::infer_object(sig, &LfContext::new(), &m.subst(&h, n))
        .map_err(|e| format!("{} with h := {}: {e}", print::object(m), print::object(n)))?;
    ensure(Kernel::new(sig).equal_family(&got, &normalize(&b.subst(&h, n))), || {
        format!("{} with h := {} has type {}", print::object(m), print::object(n), print::family(&got))
    })
}

fn atoms_of_goal(g: &HHGoal, out: &mut Vec<Atom>) {
    match g {
        HHGoal::True => {}
        HHGoal::Atom(a) => out.push(a.clone()),
        HHGoal::And(a, b) => {
            atoms_of_goal(a, out);
            atoms_of_goal(b, out);
        }
        HHGoal::Implies(c, g) => {
            atoms_of_clause(c, out);
            atoms_of_goal(g, out);
        }
        HHGoal::Forall(b, ty, body) => {
            atoms_of_goal(&body.open_with(&STerm::Var(Name::internal(b.name()), ty.clone())), out)
        }
    }
}

fn atoms_of_clause(c: &HHClause, out: &mut Vec<Atom>) {
    match c {
        HHClause::Atom(a) => out.push(a.clone()),
        HHClause::Implies(g, h) => {
            atoms_of_goal(g, out);
            atoms_of_clause(h, out);
        }
        HHClause::Forall(b, ty, body) => {
            atoms_of_clause(&body.open_with(&STerm::Var(Name::internal(b.name()), ty.clone())), out)
        }
    }
}

/// Encoded well-formed signatures contain only well-typed atoms, and a type
/// read as a clause or as a goal gives the same formula.
pub fn encoding(seed: u64) -> Result<(), String> {
    let mut g = Gen::new(seed);
    let sig = if seed.is_multiple_of(4) { rich().clone() } else { g.lf_signature(5) };
    let Ok(program) = encode_signature(&sig) else {
        return ensure(!kernel::check_signature(&sig).is_derivable(), || {
            format!("well-formed signature does not encode:\n{}", print::signature(&sig))
        });
    };
    let mut atoms = Vec::new();
    for c in &program.clauses {
        atoms_of_clause(c, &mut atoms);
    }
    for a in &atoms {
        let ok = match a {
            Atom::Hastype(m, ty) => m.type_of().is_ok() && ty.check_type(&SimpleType::Ty).is_ok(),
            Atom::Istype(ty) => ty.check_type(&SimpleType::Ty).is_ok(),
        };
        ensure(ok, || format!("ill-typed atom {}", print::goal(&HHGoal::Atom(a.clone()))))?;
    }

    let reflection = reflect_signature(&sig);
    for d in sig.decls() {
        if let crate::syntax::Classifier::Object(a) = &d.classifier {
            let subject = reflection.constant(&d.name).map_err(|e| e.to_string())?;
            let goal = type_to_goal(a, subject.clone(), &reflection).map_err(|e| e.to_string())?;
            let clause = type_to_clause(a, subject, &reflection).map_err(|e| e.to_string())?;
            ensure(goal.to_formula() == clause.to_formula(), || format!("duality fails for {}", d.name))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_law_holds_on_a_few_seeds() {
        for (name, law) in LAWS {
            for seed in 0..25 {
                if let Err(e) = law(seed) {
                    panic!("{name} fails on seed {seed}: {e}");
                }
            }
        }
    }

    #[test]
    fn caches_are_populated() {
        assert!(!rich_closed().is_empty());
        assert!(!rich_open().is_empty());
        assert!(proved_judgments().len() >= 10);
    }
}
