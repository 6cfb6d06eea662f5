//! Dependency erasure from LF into the simply typed calculus over `ty`/`tm`.
//!
//! Every atomic family becomes `tm`, the kind `type` becomes `ty`, and a Π
//! becomes an arrow whose binder is forgotten. Objects keep their shape;
//! only λ-annotations change. The map on objects is not injective: two
//! objects that differ only inside annotations erase to the same term.

use std::collections::HashMap;

use thiserror::Error;

use crate::concrete::print;
use crate::syntax::{Classifier, LfFamily, LfKind, LfObject, LfSignature, Name, STerm, SimpleType};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ErasureError {
    #[error("unbound name `{0}`")]
    UnboundName(Name),
    #[error("`{0}` is not an atomic type family")]
    NotAtomic(String),
}

/// The reflected signature: one constant per LF declaration, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reflection {
    constants: Vec<(Name, SimpleType)>,
    index: HashMap<Name, usize>,
}

impl Reflection {
    pub fn constants(&self) -> &[(Name, SimpleType)] {
        &self.constants
    }

    pub fn lookup(&self, name: &Name) -> Option<&SimpleType> {
        self.index.get(name).map(|&i| &self.constants[i].1)
    }

    pub fn constant(&self, name: &Name) -> Result<STerm, ErasureError> {
        self.lookup(name)
            .map(|ty| STerm::Const(name.clone(), ty.clone()))
            .ok_or_else(|| ErasureError::UnboundName(name.clone()))
    }
}

pub fn erase_family(a: &LfFamily) -> SimpleType {
    match a {
        LfFamily::Const(_) | LfFamily::App(..) => SimpleType::Tm,
        LfFamily::Pi(_, dom, body) => SimpleType::arrow(erase_family(dom), erase_family(body)),
    }
}

pub fn erase_kind(k: &LfKind) -> SimpleType {
    match k {
        LfKind::Type => SimpleType::Ty,
        LfKind::Pi(_, dom, body) => SimpleType::arrow(erase_family(dom), erase_kind(body)),
    }
}

pub fn erase_classifier(c: &Classifier) -> SimpleType {
    match c {
        Classifier::Family(k) => erase_kind(k),
        Classifier::Object(a) => erase_family(a),
    }
}

pub fn reflect_signature(sig: &LfSignature) -> Reflection {
    let constants: Vec<_> =
        sig.decls().iter().map(|d| (d.name.clone(), erase_classifier(&d.classifier))).collect();
    let index = constants.iter().enumerate().map(|(i, (n, _))| (n.clone(), i)).collect();
    Reflection { constants, index }
}

/// Erasure relative to a reflected signature and the simple types of the
/// free variables that may occur.
#[derive(Clone, Debug)]
pub struct Eraser<'r> {
    reflection: &'r Reflection,
    vars: HashMap<Name, SimpleType>,
}

impl<'r> Eraser<'r> {
    pub fn new(reflection: &'r Reflection) -> Self {
        Eraser { reflection, vars: HashMap::new() }
    }

    pub fn bind(&mut self, name: Name, ty: SimpleType) {
        self.vars.insert(name, ty);
    }

    /// Defined on all well-scoped objects, typed or not.
    pub fn object(&self, m: &LfObject) -> Result<STerm, ErasureError> {
        Ok(match m {
            LfObject::Const(c) => self.reflection.constant(c)?,
            LfObject::Var(x) => match self.vars.get(x) {
                Some(ty) => STerm::Var(x.clone(), ty.clone()),
                None => return Err(ErasureError::UnboundName(x.clone())),
            },
            LfObject::BVar(i) => STerm::BVar(*i),
            LfObject::App(f, a) => STerm::app(self.object(f)?, self.object(a)?),
            LfObject::Lam(b, annot, body) => {
                STerm::Lam(b.clone(), erase_family(annot), Box::new(self.object(body)?))
            }
        })
    }

    /// An atomic family as a term of type `ty`.
    pub fn family_term(&self, a: &LfFamily) -> Result<STerm, ErasureError> {
        let (head, args) = a.spine().ok_or_else(|| ErasureError::NotAtomic(print::family(a)))?;
        let head = self.reflection.constant(head)?;
        args.into_iter().try_fold(head, |acc, arg| Ok(STerm::app(acc, self.object(arg)?)))
    }
}

pub fn erase_object(m: &LfObject, reflection: &Reflection) -> Result<STerm, ErasureError> {
    Eraser::new(reflection).object(m)
}

pub fn erase_family_term(a: &LfFamily, reflection: &Reflection) -> Result<STerm, ErasureError> {
    Eraser::new(reflection).family_term(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness;

    fn tm() -> SimpleType {
        SimpleType::Tm
    }

    #[test]
    fn classifiers() {
        let c_ty = witness::signature().object_type(&Name::new("c")).unwrap().clone();
        assert_eq!(erase_family(&c_ty).to_string(), "(tm -> tm -> tm) -> tm");
        assert_eq!(erase_family(&witness::nat()), tm());
        assert_eq!(erase_kind(&LfKind::Type), SimpleType::Ty);
        assert_eq!(erase_kind(&LfKind::pi("x", witness::nat(), LfKind::Type)).to_string(), "tm -> ty");
    }

    #[test]
    fn reflected_signature() {
        let r = reflect_signature(&witness::signature());
        let shown: Vec<String> = r.constants().iter().map(|(n, t)| format!("{n}:{t}")).collect();
        assert_eq!(shown, ["nat:ty", "num:tm -> ty", "z:tm", "c:(tm -> tm -> tm) -> tm"]);
        assert!(reflect_signature(&LfSignature::default()).constants().is_empty());

        let mut sig = witness::signature();
        let k = LfKind::pi("x", witness::nat(), LfKind::pi("y", witness::nat(), LfKind::Type));
        sig.push(crate::syntax::LfDecl::family("k", k));
        let r = reflect_signature(&sig);
        assert_eq!(r.lookup(&Name::new("k")).unwrap().to_string(), "tm -> tm -> ty");
    }

    #[test]
    fn objects() {
        let r = reflect_signature(&witness::signature());
        let bad = erase_object(&witness::bad_term(), &r).unwrap();
        assert_eq!(print::sterm(&bad), "c (\\x:tm. \\y:tm. z)");
        assert_eq!(erase_object(&witness::z(), &r).unwrap(), STerm::constant("z", tm()));
        assert_eq!(erase_object(&witness::good_term(), &r).unwrap(), bad);
        let err = erase_object(&LfObject::constant("q"), &r).unwrap_err();
        assert_eq!(err, ErasureError::UnboundName(Name::new("q")));
    }

    #[test]
    fn family_terms() {
        let r = reflect_signature(&witness::signature());
        let t = erase_family_term(&witness::num(witness::z()), &r).unwrap();
        assert_eq!(print::sterm(&t), "num z");
        assert_eq!(t.type_of().unwrap(), SimpleType::Ty);
        assert_eq!(print::sterm(&erase_family_term(&witness::nat(), &r).unwrap()), "nat");
        let pi = LfFamily::arrow(witness::nat(), witness::nat());
        assert!(matches!(erase_family_term(&pi, &r), Err(ErasureError::NotAtomic(_))));
    }
}
