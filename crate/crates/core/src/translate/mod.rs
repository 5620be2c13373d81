//! Translation between BTOR2 systems and programs, and a canonical text
//! form for comparing systems structurally.

mod canonical;
mod to_btor2;
mod to_ir;

pub use canonical::canonical_form;
pub use to_btor2::{to_btor2, ToBtor2Error};
pub use to_ir::to_ir;
