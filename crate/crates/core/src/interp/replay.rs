use thiserror::Error;

use super::exec::Executor;
use super::sim::{ScriptedNondets, SimError};
use super::value::Value;
use crate::bmc::{SatStatus, Witness};
use crate::ir::Program;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplayResult {
    /// The claimed property is violated at the claimed frame.
    Confirmed { frame: u32, property: usize },
    /// Register values first disagree with the witness at `frame`, or the
    /// claimed property does not fire there.
    Diverged { frame: u32 },
    /// A constraint fails at `frame`, so the violation does not count.
    Vacuous { frame: u32 },
}

impl ReplayResult {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, ReplayResult::Confirmed { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("witness does not claim a violation")]
    NoViolation,
    #[error("witness has {frames} frames but claims a violation at frame {claimed}")]
    TooShort { frames: usize, claimed: u32 },
    #[error("witness claims property {0}, which does not exist")]
    NoSuchProperty(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn matches(recorded: &[Value], actual: &[Value]) -> bool {
    recorded.is_empty() || recorded == actual
}

/// Re-executes a witness on the interpreter.
///
/// Nondet values come from the witness; every other value is recomputed and
/// compared with the register values the witness records. Frames that
/// record no register values are not compared.
pub fn replay(p: &Program, w: &Witness) -> Result<ReplayResult, ReplayError> {
    let (SatStatus::Sat, Some(property), Some(claimed)) = (w.status, w.violated_property, w.violation_frame) else {
        return Err(ReplayError::NoViolation);
    };
    if property >= p.properties.len() {
        return Err(ReplayError::NoSuchProperty(property));
    }
    if w.frames.len() <= claimed as usize {
        return Err(ReplayError::TooShort { frames: w.frames.len(), claimed });
    }
    let mut src = ScriptedNondets { frames: &w.frames };
    let mut exec = Executor::new(p);
    let mut states = exec.run_init(&mut src)?;
    for frame in 0..=claimed {
        if !matches(&w.frames[frame as usize].states, &states) {
            return Ok(ReplayResult::Diverged { frame });
        }
        let last = frame == claimed;
        let step = exec.run_step(frame, &states, &mut src, !last)?;
        if !step.constraints_hold {
            return Ok(ReplayResult::Vacuous { frame });
        }
        if last {
            return Ok(if step.bads[property] {
                ReplayResult::Confirmed { frame, property }
            } else {
                ReplayResult::Diverged { frame }
            });
        }
        states = step.next.expect("next state requested");
    }
    unreachable!("loop returns at the claimed frame")
}
