//! BTOR2 text front end: lexing, parsing, constant literals and sort
//! checking.

mod literal;
mod node;
mod parse;
mod typecheck;

pub use literal::{parse_const_literal, LiteralError};
pub use node::{Btor2File, ConstKind, Immediates, NodeId, NodeKind, NodeLine};
pub use parse::{parse_btor2, ParseError, ParseErrorKind};
pub use typecheck::{typecheck, Condition, Def, DefKind, Operand, TypeError, TypeErrorKind, TypedSystem, Update};
