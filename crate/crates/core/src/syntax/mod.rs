//! Term languages shared by every stage: LF, the simply typed target
//! calculus, and hereditary Harrop formulas.

pub mod hh;
pub mod lf;
pub mod name;
pub mod stlc;

pub use hh::{Atom, Formula, HHClause, HHGoal, HHProgram, HHSyntax};
pub use lf::{Classifier, LfContext, LfDecl, LfFamily, LfKind, LfObject, LfSignature, LfTerm};
pub use name::{fresh_name, Binder, Name};
pub use stlc::{st_normalize, st_normalize_with, NormalizeConfig, SimpleType, STerm};
