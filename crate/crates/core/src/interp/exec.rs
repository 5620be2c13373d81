use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use arrayvec::ArrayVec;

use super::eval::eval_unchecked;
use super::sim::SimError;
use super::value::{ArrayValue, Value};
use crate::ir::{NondetOrigin, OpId, OpNode, Opcode, Program, ValueRef};
use crate::sort::Sort;

/// Supplies the values of nondet ops.
pub(crate) trait Nondets {
    /// Initial value of a register without init.
    fn init_seed(&mut self, state: u32, sort: Sort) -> Result<Value, SimError>;
    /// Value of an input at `frame`.
    fn input(&mut self, frame: u32, op: &OpNode) -> Result<Value, SimError>;
    /// Value at `frame + 1` of a register with neither init nor next.
    fn step_seed(&mut self, frame: u32, state: u32, sort: Sort) -> Result<Value, SimError>;
}

pub(crate) struct StepResult {
    pub constraints_hold: bool,
    /// Per property: whether its bad condition is true in this frame.
    pub bads: Vec<bool>,
    pub inputs: BTreeMap<OpId, Value>,
    /// Register values for the following frame, when requested.
    pub next: Option<Vec<Value>>,
}

/// Evaluates the blocks of a verified program one frame at a time.
pub(crate) struct Executor<'p> {
    p: &'p Program,
    slots: Vec<Option<Value>>,
}

impl<'p> Executor<'p> {
    pub fn new(p: &'p Program) -> Self {
        Executor { p, slots: alloc::vec![None; p.ops.len()] }
    }

    fn get<'a>(&'a self, states: &'a [Value], v: ValueRef) -> &'a Value {
        match v {
            ValueRef::Op(id) => self.slots[id.0 as usize].as_ref().expect("operand evaluated before use"),
            ValueRef::Arg(i) => &states[i as usize],
        }
    }

    fn compute(&self, op: &OpNode, states: &[Value]) -> Value {
        match &op.opcode {
            Opcode::Op(o) => {
                let args: ArrayVec<&Value, 3> = op.operands.iter().map(|v| self.get(states, *v)).collect();
                eval_unchecked(*o, &args)
            }
            Opcode::Constant(c) => Value::Bv(c.clone()),
            Opcode::ArrayFill => {
                let Sort::Array { index, .. } = op.sort else { unreachable!("array_fill of non-array sort") };
                let element = self.get(states, op.operands[0]).as_bv().expect("fill element").clone();
                Value::Array(ArrayValue::filled(index, element))
            }
            Opcode::AssertNot | Opcode::Assume => self.get(states, op.operands[0]).clone(),
            Opcode::Nondet(_) => unreachable!("nondets are supplied by the caller"),
        }
    }

    pub fn run_init(&mut self, src: &mut dyn Nondets) -> Result<Vec<Value>, SimError> {
        let p = self.p;
        for &id in &p.init.ops {
            let op = p.op(id);
            let value = match op.opcode {
                Opcode::Nondet(NondetOrigin::StateSeed(s)) => src.init_seed(s, op.sort)?,
                Opcode::Nondet(NondetOrigin::Input { .. }) => src.input(0, op)?,
                _ => self.compute(op, &[]),
            };
            self.slots[id.0 as usize] = Some(value);
        }
        Ok(p.init.branch.iter().map(|v| self.get(&[], *v).clone()).collect())
    }

    pub fn run_step(
        &mut self,
        frame: u32,
        states: &[Value],
        src: &mut dyn Nondets,
        compute_next: bool,
    ) -> Result<StepResult, SimError> {
        let p = self.p;
        let mut inputs = BTreeMap::new();
        let mut constraints_hold = true;
        for &id in &p.step.ops {
            let op = p.op(id);
            let value = match op.opcode {
                Opcode::Nondet(NondetOrigin::StateSeed(s)) => {
                    if !compute_next {
                        continue;
                    }
                    src.step_seed(frame, s, op.sort)?
                }
                Opcode::Nondet(NondetOrigin::Input { .. }) => {
                    let v = src.input(frame, op)?;
                    inputs.insert(id, v.clone());
                    v
                }
                _ => self.compute(op, states),
            };
            if op.opcode == Opcode::Assume && !value.as_bv().is_some_and(|b| b.is_true()) {
                constraints_hold = false;
            }
            self.slots[id.0 as usize] = Some(value);
        }
        let bads = p
            .properties
            .iter()
            .map(|prop| self.slots[prop.op.0 as usize].as_ref().and_then(|v| v.as_bv()).is_some_and(|b| b.is_true()))
            .collect();
        let next = compute_next.then(|| p.step.branch.iter().map(|v| self.get(states, *v).clone()).collect());
        Ok(StepResult { constraints_hold, bads, inputs, next })
    }
}
