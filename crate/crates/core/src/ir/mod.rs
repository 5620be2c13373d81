//! The transition-system IR: a function with an init block and a
//! self-looping step block that carries every register as a block argument.

mod fold;
mod pretty;
mod program;
mod verify;

pub use fold::fold_constants;
pub use pretty::pretty_print_ir;
pub use program::{
    Block, BlockKind, NondetOrigin, OpId, OpNode, Opcode, OutputMeta, Program, ProgramBuilder, PropertyMeta, StateMeta,
    ValueRef,
};
pub use verify::{verify_ir, Diagnostic, DiagnosticKind};
