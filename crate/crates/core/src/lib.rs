//! Core of btor2kit: BTOR2 front end, a two-block SSA program IR, an
//! interpreter and bounded model checking. Needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod bmc;
pub mod btor2;
pub mod bv;
pub mod interp;
pub mod ir;
pub mod ops;
pub mod sort;
pub mod translate;

#[cfg(test)]
mod testdata;

pub use bv::BitvecConst;
pub use ops::Op;
pub use sort::{Sort, Width};
