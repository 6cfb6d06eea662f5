//! LF kinds, families and objects.
//!
//! Bound variables are de Bruijn indices (`BVar`), free variables are names
//! (`Var`). Binders keep a display name that is ignored by equality, so `==`
//! on any of these types is α-equivalence. Traversals under a binder open it
//! with a fresh free variable and close it again afterwards, so substitution
//! never needs to shift the replacement.

use std::collections::BTreeSet;

use super::name::{Binder, Name};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LfKind {
    Type,
    Pi(Binder, Box<LfFamily>, Box<LfKind>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LfFamily {
    Const(Name),
    App(Box<LfFamily>, Box<LfObject>),
    Pi(Binder, Box<LfFamily>, Box<LfFamily>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LfObject {
    Const(Name),
    /// Free variable, bound by an [`LfContext`].
    Var(Name),
    /// Bound variable as a de Bruijn index.
    BVar(u32),
    App(Box<LfObject>, Box<LfObject>),
    Lam(Binder, Box<LfFamily>, Box<LfObject>),
}

/// Operations shared by the three LF levels. Everything is expressed through
/// [`LfTerm::map_objects`], which visits the maximal object subterms together
/// with the number of binders above them.
pub trait LfTerm: Sized + Clone + PartialEq {
    fn map_objects<F: FnMut(&LfObject, u32) -> LfObject>(&self, depth: u32, f: &mut F) -> Self;

    fn for_each_object<F: FnMut(&LfObject, u32)>(&self, depth: u32, f: &mut F);

    /// Collects the names of family and object constants.
    fn collect_constants(&self, out: &mut BTreeSet<Name>);

    /// Instantiates the outermost dangling index with `replacement`, which
    /// must be locally closed.
    fn open_with(&self, replacement: &LfObject) -> Self {
        self.map_objects(0, &mut |o, d| o.open_at(d, replacement))
    }

    /// Abstracts the free variable `name` into the outermost dangling index.
    fn close_over(&self, name: &Name) -> Self {
        self.map_objects(0, &mut |o, d| o.close_at(d, name))
    }

    /// Capture-avoiding substitution of a locally closed object for a free
    /// variable.
    fn subst(&self, var: &Name, replacement: &LfObject) -> Self {
        self.map_objects(0, &mut |o, _| o.subst_object(var, replacement))
    }

    fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.for_each_object(0, &mut |o, _| o.collect_free_vars(&mut out));
        out
    }

    fn constants(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    /// True if no de Bruijn index escapes its binders.
    fn is_locally_closed(&self) -> bool {
        let mut ok = true;
        self.for_each_object(0, &mut |o, d| ok &= o.max_dangling(d).is_none());
        ok
    }
}

pub fn alpha_equal<T: LfTerm>(a: &T, b: &T) -> bool {
    a == b
}

/// `target[var := replacement]`.
pub fn subst_object<T: LfTerm>(target: &T, var: &Name, replacement: &LfObject) -> T {
    target.subst(var, replacement)
}

impl LfObject {
    pub fn constant(name: impl Into<Name>) -> Self {
        LfObject::Const(name.into())
    }

    pub fn var(name: impl Into<Name>) -> Self {
        LfObject::Var(name.into())
    }

    pub fn app(fun: LfObject, arg: LfObject) -> Self {
        LfObject::App(Box::new(fun), Box::new(arg))
    }

    pub fn apps(fun: LfObject, args: impl IntoIterator<Item = LfObject>) -> Self {
        args.into_iter().fold(fun, LfObject::app)
    }

    /// `λname:annot. body`, abstracting the free variable `name` in `body`.
    pub fn lam(name: impl Into<Name>, annot: LfFamily, body: LfObject) -> Self {
        let name = name.into();
        let body = body.close_over(&name);
        LfObject::Lam(Binder(name), Box::new(annot), Box::new(body))
    }

    fn open_at(&self, k: u32, replacement: &LfObject) -> LfObject {
        match self {
            LfObject::BVar(i) if *i == k => replacement.clone(),
            LfObject::BVar(i) if *i > k => LfObject::BVar(i - 1),
            LfObject::Const(_) | LfObject::Var(_) | LfObject::BVar(_) => self.clone(),
            LfObject::App(f, a) => LfObject::app(f.open_at(k, replacement), a.open_at(k, replacement)),
            LfObject::Lam(b, ty, body) => LfObject::Lam(
                b.clone(),
                Box::new(ty.map_objects(k, &mut |o, d| o.open_at(d, replacement))),
                Box::new(body.open_at(k + 1, replacement)),
            ),
        }
    }

    fn close_at(&self, k: u32, name: &Name) -> LfObject {
        match self {
            LfObject::Var(n) if n == name => LfObject::BVar(k),
            LfObject::BVar(i) if *i >= k => LfObject::BVar(i + 1),
            LfObject::Const(_) | LfObject::Var(_) | LfObject::BVar(_) => self.clone(),
            LfObject::App(f, a) => LfObject::app(f.close_at(k, name), a.close_at(k, name)),
            LfObject::Lam(b, ty, body) => LfObject::Lam(
                b.clone(),
                Box::new(ty.map_objects(k, &mut |o, d| o.close_at(d, name))),
                Box::new(body.close_at(k + 1, name)),
            ),
        }
    }

    fn subst_object(&self, var: &Name, replacement: &LfObject) -> LfObject {
        match self {
            LfObject::Var(n) if n == var => replacement.clone(),
            LfObject::Const(_) | LfObject::Var(_) | LfObject::BVar(_) => self.clone(),
            LfObject::App(f, a) => {
                LfObject::app(f.subst_object(var, replacement), a.subst_object(var, replacement))
            }
            LfObject::Lam(b, ty, body) => LfObject::Lam(
                b.clone(),
                Box::new(ty.subst(var, replacement)),
                Box::new(body.subst_object(var, replacement)),
            ),
        }
    }

    fn collect_free_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            LfObject::Var(n) => {
                out.insert(n.clone());
            }
            LfObject::Const(_) | LfObject::BVar(_) => {}
            LfObject::App(f, a) => {
                f.collect_free_vars(out);
                a.collect_free_vars(out);
            }
            LfObject::Lam(_, ty, body) => {
                ty.for_each_object(0, &mut |o, _| o.collect_free_vars(out));
                body.collect_free_vars(out);
            }
        }
    }

    fn max_dangling(&self, depth: u32) -> Option<u32> {
        match self {
            LfObject::BVar(i) if *i >= depth => Some(*i),
            LfObject::Const(_) | LfObject::Var(_) | LfObject::BVar(_) => None,
            LfObject::App(f, a) => f.max_dangling(depth).max(a.max_dangling(depth)),
            LfObject::Lam(_, ty, body) => {
                let mut worst = None;
                ty.for_each_object(depth, &mut |o, d| worst = worst.max(o.max_dangling(d)));
                worst.max(body.max_dangling(depth + 1))
            }
        }
    }

    /// Number of nodes, counting a λ-annotation as a single node.
    pub fn size(&self) -> usize {
        match self {
            LfObject::Const(_) | LfObject::Var(_) | LfObject::BVar(_) => 1,
            LfObject::App(f, a) => 1 + f.size() + a.size(),
            LfObject::Lam(_, _, body) => 2 + body.size(),
        }
    }

    /// Splits `h a1 ... an` into `h` and the arguments.
    pub fn spine(&self) -> (&LfObject, Vec<&LfObject>) {
        let mut args = Vec::new();
        let mut head = self;
        while let LfObject::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }
}

impl LfTerm for LfObject {
    fn map_objects<F: FnMut(&LfObject, u32) -> LfObject>(&self, depth: u32, f: &mut F) -> Self {
        f(self, depth)
    }

    fn for_each_object<F: FnMut(&LfObject, u32)>(&self, depth: u32, f: &mut F) {
        f(self, depth)
    }

    fn collect_constants(&self, out: &mut BTreeSet<Name>) {
        match self {
            LfObject::Const(n) => {
                out.insert(n.clone());
            }
            LfObject::Var(_) | LfObject::BVar(_) => {}
            LfObject::App(f, a) => {
                f.collect_constants(out);
                a.collect_constants(out);
            }
            LfObject::Lam(_, ty, body) => {
                ty.collect_constants(out);
                body.collect_constants(out);
            }
        }
    }
}

impl LfFamily {
    pub fn constant(name: impl Into<Name>) -> Self {
        LfFamily::Const(name.into())
    }

    pub fn app(head: LfFamily, arg: LfObject) -> Self {
        LfFamily::App(Box::new(head), Box::new(arg))
    }

    /// `Πname:domain. body`, abstracting the free variable `name` in `body`.
    pub fn pi(name: impl Into<Name>, domain: LfFamily, body: LfFamily) -> Self {
        let name = name.into();
        let body = body.close_over(&name);
        LfFamily::Pi(Binder(name), Box::new(domain), Box::new(body))
    }

    /// `A -> B`, a Π whose body ignores the bound variable.
    pub fn arrow(domain: LfFamily, body: LfFamily) -> Self {
        LfFamily::Pi(
            Binder::new("_"),
            Box::new(domain),
            Box::new(body.map_objects(0, &mut |o, d| o.close_at(d, &Name::new("#none")))),
        )
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, LfFamily::Pi(..))
    }

    /// Head constant and object arguments of an atomic family.
    pub fn spine(&self) -> Option<(&Name, Vec<&LfObject>)> {
        let mut args = Vec::new();
        let mut head = self;
        loop {
            match head {
                LfFamily::Const(n) => {
                    args.reverse();
                    return Some((n, args));
                }
                LfFamily::App(h, a) => {
                    args.push(a.as_ref());
                    head = h;
                }
                LfFamily::Pi(..) => return None,
            }
        }
    }
}

impl LfTerm for LfFamily {
    fn map_objects<F: FnMut(&LfObject, u32) -> LfObject>(&self, depth: u32, f: &mut F) -> Self {
        match self {
            LfFamily::Const(_) => self.clone(),
            LfFamily::App(h, a) => LfFamily::app(h.map_objects(depth, f), f(a, depth)),
            LfFamily::Pi(b, dom, body) => LfFamily::Pi(
                b.clone(),
                Box::new(dom.map_objects(depth, f)),
                Box::new(body.map_objects(depth + 1, f)),
            ),
        }
    }

    fn for_each_object<F: FnMut(&LfObject, u32)>(&self, depth: u32, f: &mut F) {
        match self {
            LfFamily::Const(_) => {}
            LfFamily::App(h, a) => {
                h.for_each_object(depth, f);
                f(a, depth);
            }
            LfFamily::Pi(_, dom, body) => {
                dom.for_each_object(depth, f);
                body.for_each_object(depth + 1, f);
            }
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<Name>) {
        match self {
            LfFamily::Const(n) => {
                out.insert(n.clone());
            }
            LfFamily::App(h, a) => {
                h.collect_constants(out);
                a.collect_constants(out);
            }
            LfFamily::Pi(_, dom, body) => {
                dom.collect_constants(out);
                body.collect_constants(out);
            }
        }
    }
}

impl LfKind {
    pub fn pi(name: impl Into<Name>, domain: LfFamily, body: LfKind) -> Self {
        let name = name.into();
        let body = body.close_over(&name);
        LfKind::Pi(Binder(name), Box::new(domain), Box::new(body))
    }
}

impl LfTerm for LfKind {
    fn map_objects<F: FnMut(&LfObject, u32) -> LfObject>(&self, depth: u32, f: &mut F) -> Self {
        match self {
            LfKind::Type => LfKind::Type,
            LfKind::Pi(b, dom, body) => LfKind::Pi(
                b.clone(),
                Box::new(dom.map_objects(depth, f)),
                Box::new(body.map_objects(depth + 1, f)),
            ),
        }
    }

    fn for_each_object<F: FnMut(&LfObject, u32)>(&self, depth: u32, f: &mut F) {
        if let LfKind::Pi(_, dom, body) = self {
            dom.for_each_object(depth, f);
            body.for_each_object(depth + 1, f);
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<Name>) {
        if let LfKind::Pi(_, dom, body) = self {
            dom.collect_constants(out);
            body.collect_constants(out);
        }
    }
}

/// β-normal form of an object. Terminates on well-typed input.
pub fn normalize_object(m: &LfObject) -> LfObject {
    match m {
        LfObject::Const(_) | LfObject::Var(_) | LfObject::BVar(_) => m.clone(),
        LfObject::App(f, a) => {
            let f = normalize_object(f);
            let a = normalize_object(a);
            match f {
                LfObject::Lam(_, _, body) => normalize_object(&body.open_with(&a)),
                f => LfObject::app(f, a),
            }
        }
        LfObject::Lam(b, ty, body) => {
            let x = Name::internal(&b.0);
            let body = normalize_object(&body.open_with(&LfObject::Var(x.clone())));
            LfObject::Lam(b.clone(), Box::new(normalize(ty.as_ref())), Box::new(body.close_over(&x)))
        }
    }
}

/// β-normalizes every object embedded in a family or kind.
pub fn normalize<T: LfTerm>(t: &T) -> T {
    t.map_objects(0, &mut |o, _| {
        if o.is_locally_closed() {
            normalize_object(o)
        } else {
            normalize_open(o)
        }
    })
}

// Objects under a Π are not locally closed on their own; normalize them by
// temporarily binding the dangling indices to fresh names.
fn normalize_open(o: &LfObject) -> LfObject {
    let depth = o.max_dangling(0).map_or(0, |m| m + 1);
    let names: Vec<Name> = (0..depth).map(|_| Name::internal(&Name::new("d"))).collect();
    let mut opened = o.clone();
    for n in names.iter() {
        opened = opened.open_at(0, &LfObject::Var(n.clone()));
    }
    let mut result = normalize_object(&opened);
    for n in names.iter().rev() {
        result = result.close_at(0, n);
    }
    result
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classifier {
    Family(LfKind),
    Object(LfFamily),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LfDecl {
    pub name: Name,
    pub classifier: Classifier,
}

impl LfDecl {
    pub fn family(name: impl Into<Name>, kind: LfKind) -> Self {
        LfDecl { name: name.into(), classifier: Classifier::Family(kind) }
    }

    pub fn object(name: impl Into<Name>, ty: LfFamily) -> Self {
        LfDecl { name: name.into(), classifier: Classifier::Object(ty) }
    }
}

/// Ordered declarations. Well-formedness is decided by the kernel.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LfSignature {
    decls: Vec<LfDecl>,
}

impl LfSignature {
    pub fn new(decls: Vec<LfDecl>) -> Self {
        LfSignature { decls }
    }

    pub fn decls(&self) -> &[LfDecl] {
        &self.decls
    }

    pub fn push(&mut self, decl: LfDecl) {
        self.decls.push(decl);
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    /// The signature made of the first `n` declarations.
    pub fn prefix(&self, n: usize) -> LfSignature {
        LfSignature { decls: self.decls[..n.min(self.decls.len())].to_vec() }
    }

    pub fn lookup(&self, name: &Name) -> Option<&LfDecl> {
        self.decls.iter().find(|d| &d.name == name)
    }

    pub fn family_kind(&self, name: &Name) -> Option<&LfKind> {
        self.decls.iter().find_map(|d| match &d.classifier {
            Classifier::Family(k) if &d.name == name => Some(k),
            _ => None,
        })
    }

    pub fn object_type(&self, name: &Name) -> Option<&LfFamily> {
        self.decls.iter().find_map(|d| match &d.classifier {
            Classifier::Object(t) if &d.name == name => Some(t),
            _ => None,
        })
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.decls.iter().map(|d| d.name.clone()).collect()
    }
}

/// Ordered variable bindings; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LfContext {
    bindings: Vec<(Name, LfFamily)>,
}

impl LfContext {
    pub fn new() -> Self {
        LfContext::default()
    }

    pub fn bindings(&self) -> &[(Name, LfFamily)] {
        &self.bindings
    }

    pub fn lookup(&self, name: &Name) -> Option<&LfFamily> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn extend(&self, name: Name, ty: LfFamily) -> LfContext {
        let mut bindings = self.bindings.clone();
        bindings.push((name, ty));
        LfContext { bindings }
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.bindings.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> LfFamily {
        LfFamily::constant("nat")
    }

    fn num(o: LfObject) -> LfFamily {
        LfFamily::app(LfFamily::constant("num"), o)
    }

    fn z() -> LfObject {
        LfObject::constant("z")
    }

    #[test]
    fn alpha_equal_examples() {
        let a = LfObject::lam("x", nat(), LfObject::var("x"));
        let b = LfObject::lam("y", nat(), LfObject::var("y"));
        assert!(alpha_equal(&a, &b));

        let bad = LfObject::lam("x", nat(), LfObject::lam("y", num(z()), z()));
        let good = LfObject::lam("x", nat(), LfObject::lam("y", num(LfObject::var("x")), z()));
        assert!(!alpha_equal(&bad, &good));

        assert!(alpha_equal(&z(), &z()));
    }

    #[test]
    fn subst_examples() {
        let x = Name::new("x");
        assert_eq!(subst_object(&num(LfObject::var("x")), &x, &z()), num(z()));

        let id = LfObject::lam("x", nat(), LfObject::var("x"));
        assert_eq!(subst_object(&id, &x, &z()), id);

        let pi = LfFamily::pi("y", num(LfObject::var("x")), nat());
        assert_eq!(subst_object(&pi, &x, &z()), LfFamily::pi("y", num(z()), nat()));
    }

    #[test]
    fn subst_does_not_capture() {
        // (λy:nat. x)[x := y] keeps the free y distinct from the binder.
        let t = LfObject::lam("y", nat(), LfObject::var("x"));
        let r = subst_object(&t, &Name::new("x"), &LfObject::var("y"));
        match r {
            LfObject::Lam(_, _, body) => assert_eq!(*body, LfObject::var("y")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn normalize_beta() {
        let id = LfObject::lam("x", nat(), LfObject::var("x"));
        assert_eq!(normalize_object(&LfObject::app(id, z())), z());
        let k = LfObject::lam("x", nat(), LfObject::lam("y", nat(), LfObject::var("x")));
        let t = LfObject::apps(k, [z(), LfObject::var("q")]);
        assert_eq!(normalize_object(&t), z());
    }

    #[test]
    fn normalize_under_pi() {
        let id = LfObject::lam("u", nat(), LfObject::var("u"));
        let fam = LfFamily::pi("x", nat(), num(LfObject::app(id, LfObject::var("x"))));
        assert_eq!(normalize(&fam), LfFamily::pi("x", nat(), num(LfObject::var("x"))));
    }

    #[test]
    fn sizes() {
        let t = LfObject::app(
            LfObject::constant("c"),
            LfObject::lam("x", nat(), LfObject::lam("y", num(z()), z())),
        );
        assert_eq!(t.size(), 7);
    }
}
