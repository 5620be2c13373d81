use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::response::Model;
use super::unroll::{Target, VarSource, VcScript};
use crate::interp::{simulate, Frame, SimError, SimOptions, Value};
use crate::ir::Program;
use crate::sort::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SatStatus {
    Sat,
    Unsat,
    Unknown,
}

/// A counterexample: register and input values for frames
/// `0..=violation_frame`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub status: SatStatus,
    pub violated_property: Option<usize>,
    pub violation_frame: Option<u32>,
    pub frames: Vec<Frame>,
    /// Notes about values the model left out.
    pub warnings: Vec<String>,
}

impl Witness {
    pub fn violation(property: usize, frame: u32, frames: Vec<Frame>) -> Self {
        Witness {
            status: SatStatus::Sat,
            violated_property: Some(property),
            violation_frame: Some(frame),
            frames,
            warnings: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("model value of `{name}` has sort {actual}, expected {expected}")]
    Sort { name: String, expected: Sort, actual: Sort },
    #[error("model does not violate the target within the bound")]
    NoViolation,
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Reads a counterexample out of a model of `vc`.
///
/// Values the model omits default to zero, with a warning. The violated
/// property and frame are found by running the interpreter on the model's
/// inputs.
pub fn extract_witness(p: &Program, vc: &VcScript, model: &Model) -> Result<Witness, ExtractError> {
    let mut warnings = Vec::new();
    let mut lookup = |frame: u32, source: VarSource, sort: Sort| -> Result<Value, ExtractError> {
        let name = &vc.var_map[&(frame, source)];
        match model.values.get(name) {
            Some(v) if v.sort() == sort => Ok(v.clone()),
            Some(v) => Err(ExtractError::Sort { name: name.clone(), expected: sort, actual: v.sort() }),
            None => {
                match model.skipped.iter().find(|(n, _)| n == name) {
                    Some((_, why)) => warnings.push(format!("{name} unreadable in model ({why}), using 0")),
                    None => warnings.push(format!("{name} missing from model, using 0")),
                }
                Ok(Value::zero(sort))
            }
        }
    };
    let inputs: Vec<_> = p.inputs().map(|op| (op.id, op.sort)).collect();
    let mut frames = Vec::with_capacity(vc.bound as usize + 1);
    for f in 0..=vc.bound {
        let mut frame = Frame::default();
        for (i, s) in p.states.iter().enumerate() {
            frame.states.push(lookup(f, VarSource::State(i as u32), s.sort)?);
        }
        for &(id, sort) in &inputs {
            frame.inputs.insert(id, lookup(f, VarSource::Input(id), sort)?);
        }
        frames.push(frame);
    }
    let trace = simulate(p, &SimOptions::new(vc.bound, 0), Some(&frames))?;
    let found = match vc.target {
        Target::Property(j) => trace.violations_of(j).next().map(|f| (f, j)),
        Target::Any => trace.first_violation(),
    };
    let (frame, property) = found.ok_or(ExtractError::NoViolation)?;
    frames.truncate(frame as usize + 1);
    let mut w = Witness::violation(property, frame, frames);
    w.warnings = warnings;
    Ok(w)
}
