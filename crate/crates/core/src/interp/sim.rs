use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use super::exec::{Executor, Nondets};
use super::value::{ArrayValue, Value};
use crate::bv::{from_limbs, BitvecConst};
use crate::ir::{OpId, OpNode, Program};
use crate::sort::Sort;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("frame {frame}: no value supplied for {what}")]
    MissingValue { frame: u32, what: String },
    #[error("frame {frame}: value for {what} has sort {actual}, expected {expected}")]
    SortMismatch { frame: u32, what: String, expected: Sort, actual: Sort },
}

/// Register values at one frame and the input values consumed in it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Frame {
    pub states: Vec<Value>,
    pub inputs: BTreeMap<OpId, Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyStatus {
    Holds,
    Violated,
    /// A constraint failed in this frame or an earlier one.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFrame {
    pub states: Vec<Value>,
    pub inputs: BTreeMap<OpId, Value>,
    pub properties: Vec<PropertyStatus>,
}

/// Result of a simulation: frame 0 is the state right after initialisation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub frames: Vec<TraceFrame>,
}

impl Trace {
    /// First `(frame, property)` with a non-vacuous violation.
    pub fn first_violation(&self) -> Option<(u32, usize)> {
        self.frames.iter().enumerate().find_map(|(f, frame)| {
            frame.properties.iter().position(|s| *s == PropertyStatus::Violated).map(|p| (f as u32, p))
        })
    }

    /// Frame indices at which property `j` is violated.
    pub fn violations_of(&self, j: usize) -> impl Iterator<Item = u32> + '_ {
        self.frames
            .iter()
            .enumerate()
            .filter(move |(_, fr)| fr.properties.get(j) == Some(&PropertyStatus::Violated))
            .map(|(f, _)| f as u32)
    }

    /// The register and input values, without property statuses.
    pub fn to_frames(&self) -> Vec<Frame> {
        self.frames.iter().map(|f| Frame { states: f.states.clone(), inputs: f.inputs.clone() }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    /// Number of clock cycles after initialisation.
    pub cycles: u32,
    pub seed: u64,
    /// Stop after the first frame with a violation.
    pub stop_on_violation: bool,
}

impl SimOptions {
    pub fn new(cycles: u32, seed: u64) -> Self {
        SimOptions { cycles, seed, stop_on_violation: false }
    }
}

pub(crate) fn random_bv(rng: &mut ChaCha8Rng, width: u32) -> BitvecConst {
    let limbs = (0..width.div_ceil(32)).map(|_| rng.next_u32()).collect();
    from_limbs(width, limbs)
}

pub(crate) fn random_value(rng: &mut ChaCha8Rng, sort: Sort) -> Value {
    match sort {
        Sort::Bitvec(w) => Value::Bv(random_bv(rng, w)),
        Sort::Array { index, element } => Value::Array(ArrayValue::filled(index, random_bv(rng, element))),
    }
}

struct RandomNondets(ChaCha8Rng);

impl Nondets for RandomNondets {
    fn init_seed(&mut self, _: u32, sort: Sort) -> Result<Value, SimError> {
        Ok(random_value(&mut self.0, sort))
    }

    fn input(&mut self, _: u32, op: &OpNode) -> Result<Value, SimError> {
        Ok(random_value(&mut self.0, op.sort))
    }

    fn step_seed(&mut self, _: u32, _: u32, sort: Sort) -> Result<Value, SimError> {
        Ok(random_value(&mut self.0, sort))
    }
}

/// Nondet values taken from recorded frames: inputs from each frame, and
/// unpinned register values from the register columns.
pub(crate) struct ScriptedNondets<'a> {
    pub frames: &'a [Frame],
}

fn checked(frame: u32, what: impl FnOnce() -> String, v: Option<&Value>, sort: Sort) -> Result<Value, SimError> {
    match v {
        None => Err(SimError::MissingValue { frame, what: what() }),
        Some(v) if v.sort() != sort => {
            Err(SimError::SortMismatch { frame, what: what(), expected: sort, actual: v.sort() })
        }
        Some(v) => Ok(v.clone()),
    }
}

impl Nondets for ScriptedNondets<'_> {
    fn init_seed(&mut self, state: u32, sort: Sort) -> Result<Value, SimError> {
        let v = self.frames.first().and_then(|f| f.states.get(state as usize));
        checked(0, || alloc::format!("state {state}"), v, sort)
    }

    fn input(&mut self, frame: u32, op: &OpNode) -> Result<Value, SimError> {
        let v = self.frames.get(frame as usize).and_then(|f| f.inputs.get(&op.id));
        checked(frame, || alloc::format!("input {}", op.id), v, op.sort)
    }

    fn step_seed(&mut self, frame: u32, state: u32, sort: Sort) -> Result<Value, SimError> {
        let v = self.frames.get(frame as usize + 1).and_then(|f| f.states.get(state as usize));
        checked(frame + 1, || alloc::format!("state {state}"), v, sort)
    }
}

/// Runs the init block once and the step block for frames `0..=cycles`.
///
/// Nondet values are drawn from a ChaCha PRNG seeded with `opts.seed`, or
/// from `script` when given. Once a constraint fails, that frame and every
/// later one report their properties as vacuous; simulation carries on.
pub fn simulate(p: &Program, opts: &SimOptions, script: Option<&[Frame]>) -> Result<Trace, SimError> {
    let mut random = RandomNondets(ChaCha8Rng::seed_from_u64(opts.seed));
    let mut scripted;
    let src: &mut dyn Nondets = match script {
        Some(frames) => {
            scripted = ScriptedNondets { frames };
            &mut scripted
        }
        None => &mut random,
    };
    let mut exec = Executor::new(p);
    let mut states = exec.run_init(src)?;
    let mut trace = Trace::default();
    let mut vacuous = false;
    for frame in 0..=opts.cycles {
        let last = frame == opts.cycles;
        let step = exec.run_step(frame, &states, src, !last)?;
        vacuous |= !step.constraints_hold;
        let properties: Vec<PropertyStatus> = step
            .bads
            .iter()
            .map(|&bad| match (vacuous, bad) {
                (true, _) => PropertyStatus::Vacuous,
                (false, true) => PropertyStatus::Violated,
                (false, false) => PropertyStatus::Holds,
            })
            .collect();
        let violated = properties.contains(&PropertyStatus::Violated);
        let next = step.next;
        trace.frames.push(TraceFrame { states, inputs: step.inputs, properties });
        if last || (violated && opts.stop_on_violation) {
            break;
        }
        states = next.expect("next state computed for non-final frames");
    }
    Ok(trace)
}
