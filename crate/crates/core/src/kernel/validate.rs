//! Rule-by-rule re-checking of kernel derivations.
//!
//! Nothing here infers anything: each node's conclusion is compared against
//! what its rule demands of the premises' conclusions.

use std::collections::BTreeSet;

use super::conversion::{convertible_family, Conversion};
use super::{DerivationTree, Judgment, Rule};
use crate::syntax::lf::normalize;
use crate::syntax::{Classifier, LfContext, LfFamily, LfKind, LfObject, LfSignature, LfTerm, Name};

pub fn validate_derivation(sig: &LfSignature, tree: &DerivationTree, mode: Conversion) -> bool {
    Validator { sig, mode }.node(tree)
}

struct Validator<'s> {
    sig: &'s LfSignature,
    mode: Conversion,
}

impl Validator<'_> {
    fn same_family(&self, a: &LfFamily, b: &LfFamily) -> bool {
        convertible_family(&normalize(a), &normalize(b), self.mode)
    }

    fn same_kind(&self, a: &LfKind, b: &LfKind) -> bool {
        match (a, b) {
            (LfKind::Type, LfKind::Type) => true,
            (LfKind::Pi(_, d1, k1), LfKind::Pi(_, d2, k2)) => {
                if !self.same_family(d1, d2) {
                    return false;
                }
                let x = LfObject::Var(Name::internal(&Name::new("k")));
                self.same_kind(&normalize(&k1.open_with(&x)), &normalize(&k2.open_with(&x)))
            }
            _ => false,
        }
    }

    /// `inner` must be `outer` plus one fresh binding of a type equal to `ty`;
    /// returns the new variable.
    fn extension(&self, outer: &LfContext, inner: &LfContext, ty: &LfFamily) -> Option<LfObject> {
        if inner.len() != outer.len() + 1 || inner.bindings()[..outer.len()] != *outer.bindings() {
            return None;
        }
        let (name, bound) = inner.bindings().last()?;
        let mut taken: BTreeSet<_> = outer.names();
        taken.extend(self.sig.names());
        if taken.contains(name) || !self.same_family(bound, ty) {
            return None;
        }
        Some(LfObject::Var(name.clone()))
    }

    fn node(&self, tree: &DerivationTree) -> bool {
        if !self.local(tree) {
            return false;
        }
        if tree.rule == Rule::Signature {
            // Each declaration is checked in the prefix that precedes it.
            tree.premises.iter().enumerate().all(|(i, premise)| {
                let prefix = self.sig.prefix(i);
                Validator { sig: &prefix, mode: self.mode }.node(premise)
            })
        } else {
            tree.premises.iter().all(|premise| self.node(premise))
        }
    }

    fn local(&self, tree: &DerivationTree) -> bool {
        let p = &tree.premises;
        match (&tree.rule, &tree.conclusion) {
            (Rule::Signature, Judgment::Signature { decls }) => {
                let decls_ok = *decls == self.sig.len() && p.len() == *decls;
                let names: BTreeSet<_> = self.sig.names();
                decls_ok
                    && names.len() == self.sig.len()
                    && self.sig.decls().iter().zip(p).all(|(decl, d)| {
                        match (&decl.classifier, &d.conclusion) {
                            (Classifier::Family(k), Judgment::Kind { ctx, kind }) => {
                                ctx.is_empty() && kind == k
                            }
                            (Classifier::Object(t), Judgment::Family { ctx, family, kind }) => {
                                ctx.is_empty() && family == t && *kind == LfKind::Type
                            }
                            _ => false,
                        }
                    })
            }
            (Rule::KindType, Judgment::Kind { kind: LfKind::Type, .. }) => p.is_empty(),
            (Rule::KindPi, Judgment::Kind { ctx, kind: LfKind::Pi(_, dom, body) }) => match p.as_slice() {
                [d_dom, d_body] => {
                    let dom_ok = matches!(&d_dom.conclusion,
                        Judgment::Family { ctx: c, family, kind: LfKind::Type } if c == ctx && family == &**dom);
                    let Judgment::Kind { ctx: inner, kind: k } = &d_body.conclusion else {
                        return false;
                    };
                    let Some(x) = self.extension(ctx, inner, dom) else {
                        return false;
                    };
                    dom_ok && self.same_kind(&normalize(&body.open_with(&x)), &normalize(k))
                }
                _ => false,
            },
            (Rule::FamConst, Judgment::Family { family: LfFamily::Const(a), kind, .. }) => {
                p.is_empty()
                    && self.sig.family_kind(a).is_some_and(|k| self.same_kind(&normalize(k), &normalize(kind)))
            }
            (Rule::FamApp, Judgment::Family { ctx, family: LfFamily::App(head, arg), kind }) => {
                match p.as_slice() {
                    [d_head, d_arg] => {
                        let Judgment::Family { ctx: c1, family: h, kind: LfKind::Pi(_, dom, cod) } =
                            &d_head.conclusion
                        else {
                            return false;
                        };
                        let Judgment::Object { ctx: c2, object: m, ty } = &d_arg.conclusion else {
                            return false;
                        };
                        c1 == ctx
                            && c2 == ctx
                            && h == &**head
                            && m == &**arg
                            && self.same_family(dom, ty)
                            && self.same_kind(&normalize(&cod.open_with(arg)), &normalize(kind))
                    }
                    _ => false,
                }
            }
            (Rule::FamPi, Judgment::Family { ctx, family: LfFamily::Pi(_, dom, body), kind: LfKind::Type }) => {
                match p.as_slice() {
                    [d_dom, d_body] => {
                        let dom_ok = matches!(&d_dom.conclusion,
                            Judgment::Family { ctx: c, family, kind: LfKind::Type } if c == ctx && family == &**dom);
                        let Judgment::Family { ctx: inner, family: b, kind: LfKind::Type } = &d_body.conclusion
                        else {
                            return false;
                        };
                        let Some(x) = self.extension(ctx, inner, dom) else {
                            return false;
                        };
                        dom_ok && body.open_with(&x) == *b
                    }
                    _ => false,
                }
            }
            (Rule::ObjConst, Judgment::Object { object: LfObject::Const(c), ty, .. }) => {
                p.is_empty() && self.sig.object_type(c).is_some_and(|t| self.same_family(t, ty))
            }
            (Rule::ObjVar, Judgment::Object { ctx, object: LfObject::Var(x), ty }) => {
                p.is_empty() && ctx.lookup(x).is_some_and(|t| self.same_family(t, ty))
            }
            (Rule::ObjApp, Judgment::Object { ctx, object: LfObject::App(fun, arg), ty }) => {
                match p.as_slice() {
                    [d_fun, d_arg] => {
                        let Judgment::Object { ctx: c1, object: f, ty: LfFamily::Pi(_, dom, cod) } =
                            &d_fun.conclusion
                        else {
                            return false;
                        };
                        let Judgment::Object { ctx: c2, object: a, ty: arg_ty } = &d_arg.conclusion else {
                            return false;
                        };
                        c1 == ctx
                            && c2 == ctx
                            && f == &**fun
                            && a == &**arg
                            && self.same_family(dom, arg_ty)
                            && self.same_family(&cod.open_with(arg), ty)
                    }
                    _ => false,
                }
            }
            (Rule::ObjLam, Judgment::Object { ctx, object: LfObject::Lam(_, annot, body), ty }) => {
                let LfFamily::Pi(_, pi_dom, pi_cod) = ty else {
                    return false;
                };
                match p.as_slice() {
                    [d_annot, d_body] => {
                        let annot_ok = matches!(&d_annot.conclusion,
                            Judgment::Family { ctx: c, family, kind: LfKind::Type } if c == ctx && family == &**annot);
                        let Judgment::Object { ctx: inner, object: m, ty: body_ty } = &d_body.conclusion else {
                            return false;
                        };
                        let Some(x) = self.extension(ctx, inner, annot) else {
                            return false;
                        };
                        annot_ok
                            && self.same_family(pi_dom, annot)
                            && *m == body.open_with(&x)
                            && self.same_family(&pi_cod.open_with(&x), body_ty)
                    }
                    _ => false,
                }
            }
            (Rule::Conv, Judgment::Object { ctx, object, ty }) => match p.as_slice() {
                [d] => matches!(&d.conclusion,
                    Judgment::Object { ctx: c, object: m, ty: t }
                        if c == ctx && m == object && self.same_family(t, ty)),
                _ => false,
            },
            _ => false,
        }
    }
}
