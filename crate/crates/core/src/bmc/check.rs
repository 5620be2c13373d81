use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use thiserror::Error;

use super::brute::{brute_force_check, BruteForceError};
use super::response::{ResponseError, SolverResponse};
use super::unroll::{emit_smtlib, unroll, Mode, Target};
use super::witness::{extract_witness, Witness};
use crate::interp::{replay, ReplayResult};
use crate::ir::Program;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No violation in frames `0..=bound`.
    Safe,
    Unsafe(Witness),
    Unknown(String),
}

impl Verdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, Verdict::Safe)
    }

    pub fn is_unsafe(&self) -> bool {
        matches!(self, Verdict::Unsafe(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Unsafe(w) => Some(w),
            _ => None,
        }
    }

    /// Verdict kind without the witness, for comparing engines.
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Safe => "safe",
            Verdict::Unsafe(_) => "unsafe",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Per-property verdicts of one bounded check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BmcResult {
    pub bound: u32,
    pub verdicts: Vec<Verdict>,
    /// Total time spent in the external solver.
    pub solver_time: Duration,
    /// Number of complete assignments the internal engine enumerated.
    pub enumerated: u64,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("solver not found: {0}")]
    NotFound(String),
    #[error("solver timed out")]
    Timeout,
    #[error("solver failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Response(#[from] ResponseError),
}

/// A solver's answer and how long it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverRun {
    pub response: SolverResponse,
    pub elapsed: Duration,
}

/// Something that decides SMT-LIB scripts.
pub trait Solver: Sync {
    fn solve(&self, script: &str) -> Result<SolverRun, SolverError>;
}

#[derive(Clone, Copy)]
pub enum Engine<'a> {
    /// Exhaustive enumeration, limited to `budget_bits` nondet bits.
    Internal {
        budget_bits: u32,
    },
    Solver(&'a dyn Solver),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    BruteForce(#[from] BruteForceError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Keeps an unsafe verdict only if its witness replays on the interpreter
/// and violates `property` at the claimed frame. Anything else becomes
/// unknown and the reason is added to `diagnostics`.
pub fn confirm(p: &Program, property: usize, verdict: Verdict, diagnostics: &mut Vec<String>) -> Verdict {
    let Verdict::Unsafe(w) = verdict else { return verdict };
    let reason = match replay(p, &w) {
        Ok(ReplayResult::Confirmed { property: q, .. }) if q == property => return Verdict::Unsafe(w),
        Ok(ReplayResult::Confirmed { property: q, frame }) => {
            format!("witness for property {property} violates property {q} at frame {frame} instead")
        }
        Ok(ReplayResult::Diverged { frame }) => format!("witness diverges from the interpreter at frame {frame}"),
        Ok(ReplayResult::Vacuous { frame }) => format!("witness fails a constraint at frame {frame}"),
        Err(e) => format!("witness cannot be replayed: {e}"),
    };
    diagnostics.push(format!("property {property}: {reason}"));
    Verdict::Unknown(reason)
}

/// Solver-backed verdict for a single target, before replay confirmation.
pub fn solve_target(
    p: &Program,
    bound: u32,
    target: Target,
    solver: &dyn Solver,
) -> Result<(Verdict, Duration), CheckError> {
    let vc = unroll(p, bound, target);
    let run = match solver.solve(&emit_smtlib(&vc)) {
        Ok(run) => run,
        Err(SolverError::Timeout) => return Ok((Verdict::Unknown(String::from("solver timed out")), Duration::ZERO)),
        Err(e) => return Err(e.into()),
    };
    let verdict = match run.response {
        SolverResponse::Unsat => Verdict::Safe,
        SolverResponse::Unknown(why) => Verdict::Unknown(format!("solver answered {why}")),
        SolverResponse::Sat(model) => match extract_witness(p, &vc, &model) {
            Ok(w) => Verdict::Unsafe(w),
            Err(e) => Verdict::Unknown(format!("unusable model: {e}")),
        },
    };
    Ok((verdict, run.elapsed))
}

/// Checks every property over frames `0..=bound`.
///
/// In combined mode the solver is asked once for any violation: unsat
/// makes every property safe, sat makes the violated property unsafe and
/// leaves the others unknown. The internal engine always decides every
/// property. Every unsafe verdict is confirmed by replay.
pub fn check(p: &Program, bound: u32, mode: Mode, engine: Engine<'_>) -> Result<BmcResult, CheckError> {
    let mut result = match engine {
        Engine::Internal { budget_bits } => brute_force_check(p, bound, budget_bits)?,
        Engine::Solver(solver) => {
            let mut result = BmcResult { bound, ..BmcResult::default() };
            match mode {
                Mode::PerProperty => {
                    for j in 0..p.properties.len() {
                        let (v, t) = solve_target(p, bound, Target::Property(j), solver)?;
                        result.verdicts.push(v);
                        result.solver_time += t;
                    }
                }
                Mode::Combined => {
                    let (v, t) = solve_target(p, bound, Target::Any, solver)?;
                    result.solver_time = t;
                    result.verdicts = combined_verdicts(p.properties.len(), v);
                }
            }
            result
        }
    };
    let verdicts = core::mem::take(&mut result.verdicts);
    result.verdicts =
        verdicts.into_iter().enumerate().map(|(j, v)| confirm(p, j, v, &mut result.diagnostics)).collect();
    Ok(result)
}

/// Spreads the single verdict of a combined query over the properties.
pub fn combined_verdicts(properties: usize, v: Verdict) -> Vec<Verdict> {
    match v {
        Verdict::Safe => alloc::vec![Verdict::Safe; properties],
        Verdict::Unknown(why) => alloc::vec![Verdict::Unknown(why); properties],
        Verdict::Unsafe(w) => {
            let hit = w.violated_property;
            let mut w = Some(w);
            (0..properties)
                .map(|j| match Some(j) == hit {
                    true => Verdict::Unsafe(w.take().expect("one violated property")),
                    false => Verdict::Unknown(String::from("combined query reports one violation")),
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btor2::{parse_btor2, typecheck};
    use crate::testdata::{COUNTER, FACTORIAL};
    use crate::translate::to_ir;

    fn program(text: &str) -> Program {
        to_ir(&typecheck(&parse_btor2(text, "t").unwrap()).unwrap())
    }

    fn internal(p: &Program, bound: u32) -> BmcResult {
        check(p, bound, Mode::PerProperty, Engine::Internal { budget_bits: 20 }).unwrap()
    }

    #[test]
    fn counter() {
        let p = program(COUNTER);
        let r = internal(&p, 15);
        let w = r.verdicts[0].witness().expect("unsafe");
        assert_eq!(w.violation_frame, Some(15));
        assert!(internal(&p, 14).verdicts[0].is_safe());
    }

    #[test]
    fn factorial() {
        let p = program(FACTORIAL);
        let r = internal(&p, 20);
        assert_eq!(r.verdicts[0].witness().and_then(|w| w.violation_frame), Some(14));
        assert!(r.verdicts[1].is_safe());
        assert!(internal(&p, 10).verdicts.iter().all(Verdict::is_safe));
    }

    #[test]
    fn toggle_enumerates_every_assignment() {
        let toggle = "1 sort bitvec 1\n2 input 1\n3 state 1\n4 zero 1\n5 init 1 3 4\n6 xor 1 3 2\n7 next 1 3 6\n";
        let r = brute_force_check(&program(toggle), 3, 20).unwrap();
        assert_eq!(r.enumerated, 16);
    }

    #[test]
    fn budget_is_enforced() {
        let wide = "1 sort bitvec 16\n2 input 1\n3 state 1\n4 next 1 3 2\n";
        assert!(matches!(brute_force_check(&program(wide), 1, 20), Err(BruteForceError::Budget { .. })));
    }

    #[test]
    fn bad_witness_is_downgraded() {
        let p = program(COUNTER);
        let mut w = internal(&p, 15).verdicts[0].witness().unwrap().clone();
        w.frames[3].states[0] = crate::interp::Value::zero(crate::sort::Sort::Bitvec(4));
        let mut diags = Vec::new();
        assert!(matches!(confirm(&p, 0, Verdict::Unsafe(w), &mut diags), Verdict::Unknown(_)));
        assert_eq!(diags.len(), 1);
    }
}
