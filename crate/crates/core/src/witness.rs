//! The four-entry signature and the pair of objects that collide under
//! erasure.
//!
//! ```text
//! nat : type.
//! num : {x:nat} type.
//! z   : nat.
//! c   : {w:{x:nat}{y:num x} nat} nat.
//! ```
//!
//! `c ([x:nat][y:num z] z)` is ill typed, `c ([x:nat][y:num x] z)` is well
//! typed, and both erase to `c (\x:tm. \y:tm. z)`.

use crate::syntax::{LfDecl, LfFamily, LfKind, LfObject, LfSignature};

pub fn nat() -> LfFamily {
    LfFamily::constant("nat")
}

pub fn num(index: LfObject) -> LfFamily {
    LfFamily::app(LfFamily::constant("num"), index)
}

pub fn z() -> LfObject {
    LfObject::constant("z")
}

/// `{x:nat}{y:num x} nat`, the domain of `c`.
pub fn c_domain() -> LfFamily {
    LfFamily::pi("x", nat(), LfFamily::pi("y", num(LfObject::var("x")), nat()))
}

pub fn signature() -> LfSignature {
    LfSignature::new(vec![
        LfDecl::family("nat", LfKind::Type),
        LfDecl::family("num", LfKind::pi("x", nat(), LfKind::Type)),
        LfDecl::object("z", nat()),
        LfDecl::object("c", LfFamily::pi("w", c_domain(), nat())),
    ])
}

/// `c ([x:nat][y:num z] z)`, rejected by the kernel.
pub fn bad_term() -> LfObject {
    LfObject::app(
        LfObject::constant("c"),
        LfObject::lam("x", nat(), LfObject::lam("y", num(z()), z())),
    )
}

/// `c ([x:nat][y:num x] z)`, accepted by the kernel.
pub fn good_term() -> LfObject {
    LfObject::app(
        LfObject::constant("c"),
        LfObject::lam("x", nat(), LfObject::lam("y", num(LfObject::var("x")), z())),
    )
}

pub const BAD_JUDGMENT: &str = "c ([x:nat][y:num z] z) : nat";
pub const GOOD_JUDGMENT: &str = "c ([x:nat][y:num x] z) : nat";
