use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use super::check::{BmcResult, Verdict};
use super::witness::Witness;
use crate::bv::BitvecConst;
use crate::interp::{ArrayValue, Executor, Frame, Nondets, SimError, Value};
use crate::ir::{NondetOrigin, OpId, OpNode, Opcode, Program};
use crate::sort::Sort;

/// Default limit on the number of nondet bits enumerated.
pub const DEFAULT_BUDGET_BITS: u32 = 20;

/// Hard cap on the budget: assignments are counted in a `u64`.
const MAX_BUDGET_BITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("{bits} nondet bits exceed the budget of {budget}")]
    Budget { bits: u64, budget: u32 },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Number of nondet bits a run over frames `0..=bound` consumes.
pub fn nondet_bits(p: &Program, bound: u32) -> u64 {
    let bits = |op: &OpNode| op.sort.value_bits();
    let init: u64 = p.init_ops().filter(|op| matches!(op.opcode, Opcode::Nondet(_))).map(bits).sum();
    let inputs: u64 = p.inputs().map(bits).sum();
    let seeds: u64 =
        p.step_ops().filter(|op| matches!(op.opcode, Opcode::Nondet(NondetOrigin::StateSeed(_)))).map(bits).sum();
    let frames = u64::from(bound) + 1;
    init.saturating_add(inputs.saturating_mul(frames)).saturating_add(seeds.saturating_mul(frames - 1))
}

/// Decodes consecutive bits of `assignment` into values of the given sorts.
fn decode(assignment: u64, sorts: &[Sort]) -> Vec<Value> {
    let mut rest = assignment;
    let mut take = |w: u32| {
        let v = BitvecConst::from_u64(w, rest);
        rest = rest.checked_shr(w).unwrap_or(0);
        v
    };
    sorts
        .iter()
        .map(|sort| match *sort {
            Sort::Bitvec(w) => Value::Bv(take(w)),
            Sort::Array { index, element } => {
                let mut a = ArrayValue::filled(index, take(element));
                for i in 1..(1u64 << index) {
                    let v = take(element);
                    a.store(&BitvecConst::from_u64(index, i), v);
                }
                Value::Array(a)
            }
        })
        .collect()
}

struct Fixed {
    init: BTreeMap<u32, Value>,
    inputs: BTreeMap<OpId, Value>,
    seeds: BTreeMap<u32, Value>,
}

impl Nondets for Fixed {
    fn init_seed(&mut self, state: u32, _: Sort) -> Result<Value, SimError> {
        Ok(self.init[&state].clone())
    }

    fn input(&mut self, _: u32, op: &OpNode) -> Result<Value, SimError> {
        Ok(self.inputs[&op.id].clone())
    }

    fn step_seed(&mut self, _: u32, state: u32, _: Sort) -> Result<Value, SimError> {
        Ok(self.seeds[&state].clone())
    }
}

struct Search<'p> {
    exec: Executor<'p>,
    bound: u32,
    inputs: Vec<(OpId, Sort)>,
    seeds: Vec<(u32, Sort)>,
    path: Vec<Frame>,
    /// Earliest violation found so far, per property.
    found: Vec<Option<(u32, Vec<Frame>)>>,
    leaves: u64,
}

impl Search<'_> {
    fn frame(&mut self, f: u32, states: Vec<Value>) -> Result<(), SimError> {
        let last = f == self.bound;
        let mut sorts: Vec<Sort> = self.inputs.iter().map(|(_, s)| *s).collect();
        if !last {
            sorts.extend(self.seeds.iter().map(|(_, s)| *s));
        }
        let bits: u64 = sorts.iter().map(|s| s.value_bits()).sum();
        for assignment in 0..(1u64 << bits) {
            let mut values = decode(assignment, &sorts).into_iter();
            let mut src = Fixed { init: BTreeMap::new(), inputs: BTreeMap::new(), seeds: BTreeMap::new() };
            for ((id, _), v) in self.inputs.iter().zip(&mut values) {
                src.inputs.insert(*id, v);
            }
            for ((state, _), v) in self.seeds.iter().zip(&mut values) {
                src.seeds.insert(*state, v);
            }
            let step = self.exec.run_step(f, &states, &mut src, !last)?;
            if !step.constraints_hold {
                self.leaves += 1;
                continue;
            }
            self.path.push(Frame { states: states.clone(), inputs: step.inputs });
            for (j, bad) in step.bads.iter().enumerate() {
                if *bad && self.found[j].as_ref().is_none_or(|(at, _)| f < *at) {
                    self.found[j] = Some((f, self.path.clone()));
                }
            }
            match step.next {
                Some(next) => self.frame(f + 1, next)?,
                None => self.leaves += 1,
            }
            self.path.pop();
        }
        Ok(())
    }
}

/// Decides every property up to `bound` by enumerating all nondet values.
///
/// Fails when the run needs more than `budget_bits` nondet bits in total.
/// Each unsafe verdict carries the earliest violation found.
pub fn brute_force_check(p: &Program, bound: u32, budget_bits: u32) -> Result<BmcResult, BruteForceError> {
    let budget = budget_bits.min(MAX_BUDGET_BITS);
    let bits = nondet_bits(p, bound);
    if bits > u64::from(budget) {
        return Err(BruteForceError::Budget { bits, budget });
    }
    let init_seeds: Vec<(u32, Sort)> = p
        .init_ops()
        .filter_map(|op| match op.opcode {
            Opcode::Nondet(NondetOrigin::StateSeed(s)) => Some((s, op.sort)),
            _ => None,
        })
        .collect();
    let mut search = Search {
        exec: Executor::new(p),
        bound,
        inputs: p.inputs().map(|op| (op.id, op.sort)).collect(),
        seeds: p
            .step_ops()
            .filter_map(|op| match op.opcode {
                Opcode::Nondet(NondetOrigin::StateSeed(s)) => Some((s, op.sort)),
                _ => None,
            })
            .collect(),
        path: Vec::new(),
        found: alloc::vec![None; p.properties.len()],
        leaves: 0,
    };
    let sorts: Vec<Sort> = init_seeds.iter().map(|(_, s)| *s).collect();
    let init_bits: u64 = sorts.iter().map(|s| s.value_bits()).sum();
    for assignment in 0..(1u64 << init_bits) {
        let mut src = Fixed {
            init: init_seeds.iter().map(|(s, _)| *s).zip(decode(assignment, &sorts)).collect(),
            inputs: BTreeMap::new(),
            seeds: BTreeMap::new(),
        };
        let states = search.exec.run_init(&mut src)?;
        search.frame(0, states)?;
    }
    let verdicts = search
        .found
        .into_iter()
        .enumerate()
        .map(|(j, found)| match found {
            Some((frame, frames)) => Verdict::Unsafe(Witness::violation(j, frame, frames)),
            None => Verdict::Safe,
        })
        .collect();
    Ok(BmcResult { bound, verdicts, enumerated: search.leaves, ..BmcResult::default() })
}
