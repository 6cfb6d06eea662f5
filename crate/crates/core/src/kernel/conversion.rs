use crate::syntax::{LfFamily, LfObject, LfTerm, Name};

/// Which equations definitional equality includes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Conversion {
    Beta,
    #[default]
    BetaEta,
}

impl Conversion {
    pub fn label(self) -> &'static str {
        match self {
            Conversion::Beta => "beta",
            Conversion::BetaEta => "beta-eta",
        }
    }
}

/// Convertibility of two β-normal families. η is handled by expanding the
/// neutral side whenever a λ meets a neutral object.
pub fn convertible_family(a: &LfFamily, b: &LfFamily, mode: Conversion) -> bool {
    match (a, b) {
        (LfFamily::Const(x), LfFamily::Const(y)) => x == y,
        (LfFamily::App(h1, o1), LfFamily::App(h2, o2)) => {
            convertible_family(h1, h2, mode) && convertible_object(o1, o2, mode)
        }
        (LfFamily::Pi(b, d1, c1), LfFamily::Pi(_, d2, c2)) => {
            if !convertible_family(d1, d2, mode) {
                return false;
            }
            let x = LfObject::Var(Name::internal(&b.0));
            convertible_family(&c1.open_with(&x), &c2.open_with(&x), mode)
        }
        _ => false,
    }
}

/// Convertibility of two β-normal, locally closed objects.
pub fn convertible_object(a: &LfObject, b: &LfObject, mode: Conversion) -> bool {
    match (a, b) {
        (LfObject::Lam(b1, t1, m1), LfObject::Lam(_, t2, m2)) => {
            let x = LfObject::Var(Name::internal(&b1.0));
            convertible_family(t1, t2, mode)
                && convertible_object(&m1.open_with(&x), &m2.open_with(&x), mode)
        }
        (LfObject::Lam(b1, _, m1), n) | (n, LfObject::Lam(b1, _, m1)) => {
            if mode == Conversion::Beta {
                return false;
            }
            let x = LfObject::Var(Name::internal(&b1.0));
            convertible_object(&m1.open_with(&x), &LfObject::app(n.clone(), x), mode)
        }
        _ => {
            let (h1, args1) = a.spine();
            let (h2, args2) = b.spine();
            let same_head = match (h1, h2) {
                (LfObject::Const(x), LfObject::Const(y)) => x == y,
                (LfObject::Var(x), LfObject::Var(y)) => x == y,
                (LfObject::BVar(i), LfObject::BVar(j)) => i == j,
                _ => false,
            };
            same_head
                && args1.len() == args2.len()
                && args1.iter().zip(&args2).all(|(x, y)| convertible_object(x, y, mode))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::LfFamily;

    fn nat() -> LfFamily {
        LfFamily::constant("nat")
    }

    #[test]
    fn eta_only_in_eta_mode() {
        // f  vs  λx:nat. f x
        let f = LfObject::var("f");
        let expanded = LfObject::lam("x", nat(), LfObject::app(f.clone(), LfObject::var("x")));
        assert!(convertible_object(&f, &expanded, Conversion::BetaEta));
        assert!(convertible_object(&expanded, &f, Conversion::BetaEta));
        assert!(!convertible_object(&f, &expanded, Conversion::Beta));
    }

    #[test]
    fn distinct_heads() {
        let a = LfObject::constant("z");
        let b = LfObject::var("x");
        assert!(!convertible_object(&a, &b, Conversion::BetaEta));
    }
}
