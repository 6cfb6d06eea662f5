use super::*;
use crate::concrete::{parse_judgment, print};
use crate::syntax::{LfDecl, LfKind};
use crate::witness::{self, nat, num, z};

fn sig() -> LfSignature {
    witness::signature()
}

fn empty() -> LfContext {
    LfContext::new()
}

const MODES: [Conversion; 2] = [Conversion::Beta, Conversion::BetaEta];

#[test]
fn signatures() {
    assert!(check_signature(&sig()).is_derivable());
    assert!(check_signature(&LfSignature::default()).is_derivable());

    let missing_nat = LfSignature::new(vec![LfDecl::family("num", LfKind::pi("x", nat(), LfKind::Type))]);
    let err = check_signature(&missing_nat).error().cloned().unwrap();
    let TypeErrorKind::IllFormedSignature { index, .. } = &err.kind else { panic!("{err:?}") };
    assert_eq!(*index, 0);
    assert!(matches!(err.root_cause().kind, TypeErrorKind::UnboundName(ref n) if n.as_str() == "nat"));

    let mut dup = sig();
    dup.push(LfDecl::object("z", nat()));
    let err = check_signature(&dup).error().cloned().unwrap();
    assert!(matches!(err.root_cause().kind, TypeErrorKind::DuplicateName(_)));
}

#[test]
fn signature_derivation_validates() {
    for mode in MODES {
        let result = Kernel::with_conversion(&sig(), mode).check_signature();
        assert!(validate_derivation(&sig(), result.derivation().unwrap(), mode));
    }
}

#[test]
fn inference() {
    let s = sig();
    assert_eq!(infer_object(&s, &empty(), &z()).unwrap(), nat());
    assert_eq!(infer_object(&s, &empty(), &witness::good_term()).unwrap(), nat());

    let err = infer_object(&s, &empty(), &witness::bad_term()).unwrap_err();
    let TypeErrorKind::DomainMismatch { expected, got, focus } = &err.kind else { panic!("{err:?}") };
    assert_eq!(print::family(expected), "{x:nat}{y:num x} nat");
    assert_eq!(print::family(got), "{x:nat}{y:num z} nat");
    let (want, have) = focus;
    assert_eq!(print::family(have), "num z");
    assert_eq!(print::family(want), "num x");
    assert!(matches!(want, LfFamily::App(_, arg) if matches!(**arg, LfObject::Var(_))));
    assert_eq!(err.path, vec![PathStep::AppArg]);
}

#[test]
fn checking() {
    let s = sig();
    for mode in MODES {
        let k = Kernel::with_conversion(&s, mode);
        let bad = k.check_object(&empty(), &witness::bad_term(), &nat());
        assert!(matches!(bad.error().unwrap().kind, TypeErrorKind::DomainMismatch { .. }));
        let good = k.check_object(&empty(), &witness::good_term(), &nat());
        assert!(validate_derivation(&s, good.derivation().unwrap(), mode));
        let zz = k.check_object(&empty(), &z(), &nat());
        assert!(validate_derivation(&s, zz.derivation().unwrap(), mode));
        assert!(!k.check_object(&empty(), &z(), &num(z())).is_derivable());
    }
}

#[test]
fn judgments_from_text() {
    let s = sig();
    let (m, a) = parse_judgment(witness::BAD_JUDGMENT, &s).unwrap();
    assert!(!check_object(&s, &empty(), &m, &a).is_derivable());
    let (m, a) = parse_judgment(witness::GOOD_JUDGMENT, &s).unwrap();
    assert!(check_object(&s, &empty(), &m, &a).is_derivable());
}

#[test]
fn families() {
    let s = sig();
    assert_eq!(check_family(&s, &empty(), &num(z())).unwrap(), LfKind::Type);
    assert_eq!(check_family(&s, &empty(), &nat()).unwrap(), LfKind::Type);
    let nat_as_object = num(LfObject::constant("nat"));
    assert!(check_family(&s, &empty(), &nat_as_object).is_err());
    let err = check_family(&s, &empty(), &LfFamily::app(nat(), z())).unwrap_err();
    assert!(matches!(err.kind, TypeErrorKind::KindMismatch(KindMismatch::TooManyArguments { .. })));
}

#[test]
fn family_equality() {
    let s = sig();
    let ctx = empty().extend(Name::new("x"), nat());
    assert!(equal_family(&s, &ctx, &num(z()), &num(z())));
    assert!(!equal_family(&s, &ctx, &num(z()), &num(LfObject::var("x"))));
    let got = LfFamily::pi("x", nat(), LfFamily::pi("y", num(z()), nat()));
    assert!(!equal_family(&s, &empty(), &witness::c_domain(), &got));
    assert!(equal_family(&s, &empty(), &witness::c_domain(), &witness::c_domain()));
}

#[test]
fn conversion_modes() {
    // q : p f checks against p ([x:nat] f x) only up to η.
    let mut s = sig();
    let f_ty = LfFamily::pi("x", nat(), nat());
    s.push(LfDecl::object("f", f_ty.clone()));
    s.push(LfDecl::family("p", LfKind::pi("g", f_ty, LfKind::Type)));
    let f = LfObject::constant("f");
    s.push(LfDecl::object("q", LfFamily::app(LfFamily::constant("p"), f.clone())));
    let expanded = LfObject::lam("x", nat(), LfObject::app(f, LfObject::var("x")));
    let target = LfFamily::app(LfFamily::constant("p"), expanded);
    let q = LfObject::constant("q");
    let eta = Kernel::with_conversion(&s, Conversion::BetaEta).check_object(&empty(), &q, &target);
    assert!(validate_derivation(&s, eta.derivation().unwrap(), Conversion::BetaEta));
    assert!(!Kernel::with_conversion(&s, Conversion::Beta).check_object(&empty(), &q, &target).is_derivable());

    let index = LfObject::app(LfObject::lam("x", nat(), LfObject::var("x")), z());
    let k = Kernel::with_conversion(&s, Conversion::Beta);
    assert!(k.equal_family(&num(index), &num(z())));
}

#[test]
fn contexts() {
    let s = sig();
    let ctx = empty().extend(Name::new("x"), nat()).extend(Name::new("y"), num(LfObject::var("x")));
    assert_eq!(infer_object(&s, &ctx, &LfObject::var("y")).unwrap(), num(LfObject::var("x")));
    let err = infer_object(&s, &empty(), &LfObject::var("y")).unwrap_err();
    assert!(matches!(err.kind, TypeErrorKind::UnboundName(_)));
    let err = infer_object(&s, &empty(), &LfObject::app(z(), z())).unwrap_err();
    assert!(matches!(err.kind, TypeErrorKind::NotAFunction { .. }));
}

#[test]
fn tampered_derivation_is_rejected() {
    let s = sig();
    let good = check_object(&s, &empty(), &witness::good_term(), &nat());
    let mut d = good.derivation().unwrap().clone();
    d.conclusion = Judgment::Object { ctx: empty(), object: witness::bad_term(), ty: nat() };
    assert!(!validate_derivation(&s, &d, Conversion::BetaEta));
}
