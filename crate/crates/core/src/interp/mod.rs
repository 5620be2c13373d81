//! Executable semantics: operator evaluation, cycle-accurate simulation and
//! witness replay.

mod eval;
mod exec;
mod replay;
mod sim;
mod value;

pub(crate) use eval::eval_unchecked;
pub(crate) use exec::{Executor, Nondets};

pub use eval::{eval_op, EvalError};
pub use replay::{replay, ReplayError, ReplayResult};
pub use sim::{simulate, Frame, PropertyStatus, SimError, SimOptions, Trace, TraceFrame};
pub use value::{ArrayValue, Value};
