//! Canonical printing.
//!
//! LF uses the Twelf-style syntax `{x:A} B`, `[x:A] M`, juxtaposition for
//! application and `type` for the kind. Formulas use
//! `all x:T. F`, `F => G`, `F & G`, `true`, `hastype M A`, `istype A`, and
//! terms `\x:T. M`. Bound names are chosen so that the output parses back to
//! an α-equal value: a binder never reuses a name that is bound further out,
//! free in the term, or a constant of the term.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::syntax::{
    fresh_name, Atom, Classifier, HHClause, HHGoal, HHProgram, HHSyntax, LfDecl, LfFamily,
    LfKind, LfObject, LfSignature, LfTerm, Name, STerm, SimpleType,
};

const LF_RESERVED: &[&str] = &["type"];
const HH_RESERVED: &[&str] = &["all", "true", "hastype", "istype", "ty", "tm"];

struct Names {
    avoid: BTreeSet<Name>,
    stack: Vec<Name>,
}

impl Names {
    fn new(mut avoid: BTreeSet<Name>, reserved: &[&str]) -> Self {
        avoid.extend(reserved.iter().map(Name::new));
        Names { avoid, stack: Vec::new() }
    }

    fn bound(&self, i: u32) -> String {
        let i = i as usize;
        if i < self.stack.len() {
            self.stack[self.stack.len() - 1 - i].to_string()
        } else {
            format!("^{i}")
        }
    }

    fn push(&mut self, hint: &Name) -> Name {
        let hint = if hint.as_str() == "_" || hint.as_str().is_empty() {
            Name::new("x")
        } else {
            hint.clone()
        };
        let mut taken = self.avoid.clone();
        taken.extend(self.stack.iter().cloned());
        let n = fresh_name(&hint, &taken);
        self.stack.push(n.clone());
        n
    }

    fn pop(&mut self) {
        self.stack.pop();
    }
}

fn lf_names<T: LfTerm>(t: &T) -> Names {
    let mut avoid = t.constants();
    avoid.extend(t.free_vars());
    Names::new(avoid, LF_RESERVED)
}

pub fn object(m: &LfObject) -> String {
    let mut out = String::new();
    write_object(&mut out, m, &mut lf_names(m), 0);
    out
}

pub fn family(a: &LfFamily) -> String {
    let mut out = String::new();
    write_family(&mut out, a, &mut lf_names(a), 0);
    out
}

pub fn kind(k: &LfKind) -> String {
    let mut out = String::new();
    write_kind(&mut out, k, &mut lf_names(k));
    out
}

pub fn judgment(m: &LfObject, a: &LfFamily) -> String {
    format!("{} : {}", object(m), family(a))
}

pub fn decl(d: &LfDecl) -> String {
    match &d.classifier {
        Classifier::Family(k) => format!("{} : {}.", d.name, kind(k)),
        Classifier::Object(t) => format!("{} : {}.", d.name, family(t)),
    }
}

pub fn signature(sig: &LfSignature) -> String {
    sig.decls().iter().map(|d| decl(d) + "\n").collect()
}

// Precedence: 0 = anywhere, 1 = function position, 2 = argument position.
fn write_object(out: &mut String, m: &LfObject, names: &mut Names, prec: u8) {
    match m {
        LfObject::Const(n) | LfObject::Var(n) => out.push_str(n.as_str()),
        LfObject::BVar(i) => out.push_str(&names.bound(*i)),
        LfObject::App(f, a) => {
            let paren = prec >= 2;
            if paren {
                out.push('(');
            }
            write_object(out, f, names, 1);
            out.push(' ');
            write_object(out, a, names, 2);
            if paren {
                out.push(')');
            }
        }
        LfObject::Lam(b, ty, body) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            out.push('[');
            let mut ty_out = String::new();
            write_family(&mut ty_out, ty, names, 0);
            let x = names.push(b.name());
            let _ = write!(out, "{x}:{ty_out}]");
            if !matches!(**body, LfObject::Lam(..)) {
                out.push(' ');
            }
            write_object(out, body, names, 0);
            names.pop();
            if paren {
                out.push(')');
            }
        }
    }
}

fn write_family(out: &mut String, a: &LfFamily, names: &mut Names, prec: u8) {
    match a {
        LfFamily::Const(n) => out.push_str(n.as_str()),
        LfFamily::App(h, arg) => {
            let paren = prec >= 2;
            if paren {
                out.push('(');
            }
            write_family(out, h, names, 1);
            out.push(' ');
            write_object(out, arg, names, 2);
            if paren {
                out.push(')');
            }
        }
        LfFamily::Pi(b, dom, body) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            let mut dom_out = String::new();
            write_family(&mut dom_out, dom, names, 0);
            let x = names.push(b.name());
            let _ = write!(out, "{{{x}:{dom_out}}}");
            if !matches!(**body, LfFamily::Pi(..)) {
                out.push(' ');
            }
            write_family(out, body, names, 0);
            names.pop();
            if paren {
                out.push(')');
            }
        }
    }
}

fn write_kind(out: &mut String, k: &LfKind, names: &mut Names) {
    match k {
        LfKind::Type => out.push_str("type"),
        LfKind::Pi(b, dom, body) => {
            let mut dom_out = String::new();
            write_family(&mut dom_out, dom, names, 0);
            let x = names.push(b.name());
            let _ = write!(out, "{{{x}:{dom_out}}}");
            if !matches!(**body, LfKind::Pi(..)) {
                out.push(' ');
            }
            write_kind(out, body, names);
            names.pop();
        }
    }
}

fn hh_names<T: HHSyntax>(t: &T) -> Names {
    let mut avoid = t.constants();
    avoid.extend(t.free_vars());
    Names::new(avoid, HH_RESERVED)
}

pub fn sterm(t: &STerm) -> String {
    let mut avoid = t.constants();
    avoid.extend(t.free_vars());
    let mut names = Names::new(avoid, HH_RESERVED);
    let mut out = String::new();
    write_sterm(&mut out, t, &mut names, 0);
    out
}

fn write_sterm(out: &mut String, t: &STerm, names: &mut Names, prec: u8) {
    match t {
        STerm::Const(n, _) | STerm::Var(n, _) => out.push_str(n.as_str()),
        STerm::MetaVar(n, _) => {
            out.push('?');
            out.push_str(n.as_str());
        }
        STerm::BVar(i) => out.push_str(&names.bound(*i)),
        STerm::App(f, a) => {
            let paren = prec >= 2;
            if paren {
                out.push('(');
            }
            write_sterm(out, f, names, 1);
            out.push(' ');
            write_sterm(out, a, names, 2);
            if paren {
                out.push(')');
            }
        }
        STerm::Lam(b, ty, body) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            let x = names.push(b.name());
            let _ = write!(out, "\\{x}:{ty}. ");
            write_sterm(out, body, names, 0);
            names.pop();
            if paren {
                out.push(')');
            }
        }
    }
}

fn write_atom(out: &mut String, a: &Atom, names: &mut Names) {
    out.push_str(a.predicate());
    for arg in a.args() {
        out.push(' ');
        write_sterm(out, arg, names, 2);
    }
}

pub fn goal(g: &HHGoal) -> String {
    let mut out = String::new();
    write_goal(&mut out, g, &mut hh_names(g), 0);
    out
}

pub fn clause(c: &HHClause) -> String {
    let mut out = String::new();
    write_clause(&mut out, c, &mut hh_names(c), 0);
    out
}

// Precedence: 0 = anywhere, 1 = left of `=>`, 2 = operand of `&`.
fn write_goal(out: &mut String, g: &HHGoal, names: &mut Names, prec: u8) {
    match g {
        HHGoal::True => out.push_str("true"),
        HHGoal::Atom(a) => write_atom(out, a, names),
        HHGoal::And(a, b) => {
            let paren = prec >= 2;
            if paren {
                out.push('(');
            }
            write_goal(out, a, names, 2);
            out.push_str(" & ");
            write_goal(out, b, names, 2);
            if paren {
                out.push(')');
            }
        }
        HHGoal::Implies(h, c) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            write_clause(out, h, names, 1);
            out.push_str(" => ");
            write_goal(out, c, names, 0);
            if paren {
                out.push(')');
            }
        }
        HHGoal::Forall(b, ty, body) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            let x = names.push(b.name());
            let _ = write!(out, "all {x}:{ty}. ");
            write_goal(out, body, names, 0);
            names.pop();
            if paren {
                out.push(')');
            }
        }
    }
}

fn write_clause(out: &mut String, c: &HHClause, names: &mut Names, prec: u8) {
    match c {
        HHClause::Atom(a) => write_atom(out, a, names),
        HHClause::Implies(p, h) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            write_goal(out, p, names, 1);
            out.push_str(" => ");
            write_clause(out, h, names, 0);
            if paren {
                out.push(')');
            }
        }
        HHClause::Forall(b, ty, body) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            let x = names.push(b.name());
            let _ = write!(out, "all {x}:{ty}. ");
            write_clause(out, body, names, 0);
            names.pop();
            if paren {
                out.push(')');
            }
        }
    }
}

/// One clause per line, each terminated by `.`.
pub fn program(p: &HHProgram) -> String {
    p.clauses.iter().map(|c| clause(c) + ".\n").collect()
}

/// Constant declarations `name : type.`, one per line.
pub fn constant_decls<'a>(consts: impl IntoIterator<Item = &'a (Name, SimpleType)>) -> String {
    consts.into_iter().map(|(n, t)| format!("{n} : {t}.\n")).collect()
}
