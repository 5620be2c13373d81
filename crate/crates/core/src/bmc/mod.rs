//! Bounded model checking: SMT-LIB unrolling, solver answers, witnesses,
//! and an exhaustive internal engine.

mod brute;
mod check;
mod response;
mod smt;
mod unroll;
mod witness;

pub use brute::{brute_force_check, nondet_bits, BruteForceError, DEFAULT_BUDGET_BITS};
pub use check::{
    check, combined_verdicts, confirm, solve_target, BmcResult, CheckError, Engine, Solver, SolverError, SolverRun,
    Verdict,
};
pub use response::{parse_model, parse_sexprs, parse_solver_output, Model, ResponseError, SExpr, SolverResponse};
pub use unroll::{emit_smtlib, unroll, unroll_all, Definition, Logic, Mode, Target, VarSource, VcScript};
pub use witness::{extract_witness, ExtractError, SatStatus, Witness};
