//! Signatures to `istype`/`hastype` programs, judgments to goals.
//!
//! A type `{x:A} B` read as a goal about a subject `M` becomes
//! `all x. (A as a clause about x) => (B as a goal about M x)`; read as a
//! clause the same shape appears with clause and goal swapped. Atomic types
//! bottom out in `hastype M A`. Terms are kept β-normal but not η-expanded,
//! so that clauses print as `hastype (c w) nat` rather than with an
//! expanded `w`.

use thiserror::Error;

use crate::erasure::{erase_family, erase_kind, reflect_signature, Eraser, ErasureError, Reflection};
use crate::kernel::{self, TypeError};
use crate::syntax::stlc::{beta_normalize, SimpleTypeError};
use crate::syntax::{
    Atom, Binder, Classifier, HHClause, HHGoal, HHProgram, HHSyntax, LfDecl, LfFamily, LfKind,
    LfObject, LfSignature, LfTerm, Name, STerm, SimpleType,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error(transparent)]
    Erasure(#[from] ErasureError),
    #[error("the erased subject is not simply typed: {0}")]
    IllTyped(#[from] SimpleTypeError),
    #[error("ill-formed signature: {0}")]
    IllFormedSignature(TypeError),
}

/// Builds goals and clauses, opening Π-binders as named variables whose
/// simple types the eraser tracks.
struct Encoder<'r> {
    eraser: Eraser<'r>,
}

impl<'r> Encoder<'r> {
    fn new(reflection: &'r Reflection) -> Self {
        Encoder { eraser: Eraser::new(reflection) }
    }

    fn open(&mut self, binder: &Binder, dom: &LfFamily) -> (Name, SimpleType, STerm) {
        let x = Name::internal(binder.name());
        let ty = erase_family(dom);
        self.eraser.bind(x.clone(), ty.clone());
        (x.clone(), ty.clone(), STerm::Var(x, ty))
    }

    fn head(&self, a: &LfFamily, subject: &STerm) -> Result<Atom, EncodingError> {
        Ok(Atom::Hastype(beta_normalize(subject), self.eraser.family_term(a)?))
    }

    fn goal(&mut self, a: &LfFamily, subject: STerm) -> Result<HHGoal, EncodingError> {
        match a {
            LfFamily::Pi(b, dom, body) => {
                let (x, ty, xv) = self.open(b, dom);
                let hyp = self.clause(dom, xv.clone())?;
                let body = body.open_with(&LfObject::Var(x.clone()));
                let concl = self.goal(&body, STerm::app(subject, xv))?;
                let inner = HHGoal::implies(hyp, concl).close_over(&x);
                Ok(HHGoal::Forall(b.clone(), ty, Box::new(inner)))
            }
            _ => Ok(HHGoal::Atom(self.head(a, &subject)?)),
        }
    }

    fn clause(&mut self, a: &LfFamily, subject: STerm) -> Result<HHClause, EncodingError> {
        match a {
            LfFamily::Pi(b, dom, body) => {
                let (x, ty, xv) = self.open(b, dom);
                let premise = self.goal(dom, xv.clone())?;
                let body = body.open_with(&LfObject::Var(x.clone()));
                let head = self.clause(&body, STerm::app(subject, xv))?;
                let inner = HHClause::implies(premise, head).close_over(&x);
                Ok(HHClause::Forall(b.clone(), ty, Box::new(inner)))
            }
            _ => Ok(HHClause::Atom(self.head(a, &subject)?)),
        }
    }

    /// `all x1 ... xn. G1 => ... => Gn => istype (a x1 ... xn)`.
    fn istype(&mut self, name: &Name, kind: &LfKind) -> Result<HHClause, EncodingError> {
        let mut kind = kind.clone();
        let mut binders = Vec::new();
        let mut premises = Vec::new();
        let mut args = Vec::new();
        while let LfKind::Pi(b, dom, body) = kind {
            let (x, ty, xv) = self.open(&b, &dom);
            premises.push(self.goal(&dom, xv.clone())?);
            binders.push((b, x.clone(), ty));
            args.push(xv);
            kind = body.open_with(&LfObject::Var(x));
        }
        let family = self.eraser.family_term(&LfFamily::Const(name.clone()))?;
        let applied = STerm::apps(family, args);
        debug_assert_eq!(applied.type_of().ok(), Some(erase_kind(&LfKind::Type)));
        let mut clause = HHClause::Atom(Atom::Istype(applied));
        for premise in premises.into_iter().rev() {
            clause = HHClause::implies(premise, clause);
        }
        for (b, x, ty) in binders.into_iter().rev() {
            clause = HHClause::Forall(b, ty, Box::new(clause.close_over(&x)));
        }
        Ok(clause)
    }
}

/// `a` read as a goal about `subject`.
pub fn type_to_goal(
    a: &LfFamily,
    subject: STerm,
    reflection: &Reflection,
) -> Result<HHGoal, EncodingError> {
    Encoder::new(reflection).goal(a, subject)
}

/// `a` read as a clause about `subject`.
pub fn type_to_clause(
    a: &LfFamily,
    subject: STerm,
    reflection: &Reflection,
) -> Result<HHClause, EncodingError> {
    Encoder::new(reflection).clause(a, subject)
}

/// The `istype` clause of a family declaration; `None` for an object
/// declaration.
pub fn kind_to_istype_clause(
    decl: &LfDecl,
    reflection: &Reflection,
) -> Result<Option<HHClause>, EncodingError> {
    match &decl.classifier {
        Classifier::Family(kind) => Encoder::new(reflection).istype(&decl.name, kind).map(Some),
        Classifier::Object(_) => Ok(None),
    }
}

fn encode_checked(sig: &LfSignature, reflection: &Reflection) -> Result<HHProgram, EncodingError> {
    let mut clauses = Vec::new();
    for decl in sig.decls() {
        match &decl.classifier {
            Classifier::Family(_) => clauses.extend(kind_to_istype_clause(decl, reflection)?),
            Classifier::Object(ty) => {
                let c = reflection.constant(&decl.name)?;
                clauses.push(type_to_clause(ty, c, reflection)?);
            }
        }
    }
    Ok(HHProgram::new(clauses))
}

/// One clause per declaration, in declaration order. The signature is
/// checked by the kernel first.
pub fn encode_signature(sig: &LfSignature) -> Result<HHProgram, EncodingError> {
    if let Some(e) = kernel::check_signature(sig).error() {
        return Err(EncodingError::IllFormedSignature(e.clone()));
    }
    encode_checked(sig, &reflect_signature(sig))
}

/// `hastype`-goal for the closed judgment `m : a`. Fails with
/// [`EncodingError::IllTyped`] when the erasure of `m` is not simply typed at
/// the erasure of `a`; no goal of the target logic can mention such a term.
pub fn judgment_to_goal(
    sig: &LfSignature,
    m: &LfObject,
    a: &LfFamily,
) -> Result<HHGoal, EncodingError> {
    let reflection = reflect_signature(sig);
    let subject = Eraser::new(&reflection).object(m)?;
    subject.check_type(&erase_family(a))?;
    type_to_goal(a, subject, &reflection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::print;
    use crate::witness;

    fn reflection() -> Reflection {
        reflect_signature(&witness::signature())
    }

    fn z() -> STerm {
        STerm::constant("z", SimpleType::Tm)
    }

    const C_PREMISE: &str =
        "all x:tm. hastype x nat => all y:tm. hastype y (num x) => hastype (w x y) nat";

    #[test]
    fn goals() {
        let r = reflection();
        assert_eq!(print::goal(&type_to_goal(&witness::nat(), z(), &r).unwrap()), "hastype z nat");

        let w = STerm::var("w", SimpleType::arrows([SimpleType::Tm, SimpleType::Tm], SimpleType::Tm));
        let g = type_to_goal(&witness::c_domain(), w, &r).unwrap();
        assert_eq!(print::goal(&g), C_PREMISE);

        let id = STerm::lam("x", SimpleType::Tm, STerm::var("x", SimpleType::Tm));
        let g = type_to_goal(&witness::nat(), STerm::app(id, z()), &r).unwrap();
        assert_eq!(print::goal(&g), "hastype z nat");
    }

    #[test]
    fn clauses() {
        let r = reflection();
        let sig = witness::signature();
        let c_ty = sig.object_type(&Name::new("c")).unwrap();
        let c = r.constant(&Name::new("c")).unwrap();
        let clause = type_to_clause(c_ty, c, &r).unwrap();
        assert_eq!(
            print::clause(&clause),
            format!("all w:tm -> tm -> tm. ({C_PREMISE}) => hastype (c w) nat")
        );
        let q = STerm::var("q", SimpleType::Tm);
        let clause = type_to_clause(&witness::num(witness::z()), q, &r).unwrap();
        assert_eq!(print::clause(&clause), "hastype q (num z)");
    }

    #[test]
    fn clause_goal_duality() {
        let r = reflection();
        let w = STerm::var("w", SimpleType::arrows([SimpleType::Tm, SimpleType::Tm], SimpleType::Tm));
        let a = witness::c_domain();
        let g = type_to_goal(&a, w.clone(), &r).unwrap();
        let c = type_to_clause(&a, w, &r).unwrap();
        assert_eq!(g.to_formula(), c.to_formula());
    }

    #[test]
    fn istype_clauses() {
        let r = reflection();
        let sig = witness::signature();
        let show = |i: usize| print::clause(&kind_to_istype_clause(&sig.decls()[i], &r).unwrap().unwrap());
        assert_eq!(show(0), "istype nat");
        assert_eq!(show(1), "all x:tm. hastype x nat => istype (num x)");
        assert!(kind_to_istype_clause(&sig.decls()[2], &r).unwrap().is_none());
    }

    #[test]
    fn signatures() {
        let program = encode_signature(&witness::signature()).unwrap();
        assert_eq!(program.len(), 4);
        assert!(encode_signature(&LfSignature::default()).unwrap().is_empty());
        let mut small = witness::signature().prefix(1);
        small.push(LfDecl::object("z", witness::nat()));
        assert_eq!(print::program(&encode_signature(&small).unwrap()), "istype nat.\nhastype z nat.\n");
        let broken = LfSignature::new(vec![LfDecl::family("num", LfKind::pi("x", witness::nat(), LfKind::Type))]);
        assert!(matches!(encode_signature(&broken), Err(EncodingError::IllFormedSignature(_))));
    }

    #[test]
    fn judgments() {
        let sig = witness::signature();
        let g = judgment_to_goal(&sig, &witness::bad_term(), &witness::nat()).unwrap();
        assert_eq!(print::goal(&g), "hastype (c (\\x:tm. \\y:tm. z)) nat");
        let g = judgment_to_goal(&sig, &witness::z(), &witness::nat()).unwrap();
        assert_eq!(print::goal(&g), "hastype z nat");
        let g = judgment_to_goal(&sig, &witness::z(), &witness::num(witness::z())).unwrap();
        assert_eq!(print::goal(&g), "hastype z (num z)");
        let ill = LfObject::app(LfObject::constant("c"), witness::z());
        assert!(matches!(
            judgment_to_goal(&sig, &ill, &witness::nat()),
            Err(EncodingError::IllTyped(_))
        ));
    }
}
