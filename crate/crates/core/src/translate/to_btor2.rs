use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::btor2::{Btor2File, ConstKind, Immediates, NodeId, NodeKind, NodeLine};
use crate::ir::{verify_ir, Diagnostic, NondetOrigin, OpId, OpNode, Opcode, Program, ValueRef};
use crate::ops::Op;
use crate::sort::Sort;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ToBtor2Error {
    #[error("program is malformed: {0}")]
    Invalid(Diagnostic),
    #[error("{0} has no BTOR2 counterpart")]
    NoCounterpart(OpId),
}

struct Printer<'a> {
    p: &'a Program,
    file: Btor2File,
    next_id: u64,
    sorts: BTreeMap<Sort, NodeId>,
    refs: BTreeMap<ValueRef, i64>,
    /// Printed form (without id) of every shareable line.
    shared: BTreeMap<String, i64>,
}

impl Printer<'_> {
    fn emit(&mut self, mut line: NodeLine) -> NodeId {
        self.next_id += 1;
        line.id = NodeId(self.next_id);
        self.file.nodes.insert(line.id, line);
        NodeId(self.next_id)
    }

    fn line(kind: NodeKind, sort: Option<NodeId>, operands: Vec<i64>, symbol: Option<String>) -> NodeLine {
        NodeLine { id: NodeId(0), kind, sort, operands, immediates: Immediates::None, symbol }
    }

    fn sort(&mut self, sort: Sort) -> NodeId {
        if let Some(id) = self.sorts.get(&sort) {
            return *id;
        }
        let id = match sort {
            Sort::Bitvec(w) => {
                let mut line = Self::line(NodeKind::SortBitvec, None, Vec::new(), None);
                line.immediates = Immediates::Width(w);
                self.emit(line)
            }
            Sort::Array { index, element } => {
                let i = self.sort(Sort::Bitvec(index)).0 as i64;
                let e = self.sort(Sort::Bitvec(element)).0 as i64;
                self.emit(Self::line(NodeKind::SortArray, None, vec![i, e], None))
            }
        };
        self.sorts.insert(sort, id);
        id
    }

    /// Emits a value line unless an identical one exists.
    fn shared_value(&mut self, line: NodeLine) -> i64 {
        let key = line.to_string();
        if let Some(id) = self.shared.get(&key) {
            return *id;
        }
        let id = self.emit(line).0 as i64;
        self.shared.insert(key, id);
        id
    }

    fn operand(&self, v: ValueRef) -> i64 {
        self.refs[&v]
    }

    fn value_op(&mut self, op: &OpNode) -> Result<(), ToBtor2Error> {
        let r = match &op.opcode {
            Opcode::Constant(c) => {
                let sort = self.sort(op.sort);
                let mut line = Self::line(NodeKind::Const(ConstKind::Decimal), Some(sort), Vec::new(), None);
                line.immediates = Immediates::Literal(c.to_decimal());
                self.shared_value(line)
            }
            Opcode::Op(Op::Not) if op.sort.is_bool() && self.operand(op.operands[0]) > 0 => {
                -self.operand(op.operands[0])
            }
            Opcode::Op(o) => {
                let operands = op.operands.iter().map(|v| self.operand(*v)).collect();
                let sort = self.sort(op.sort);
                self.shared_value(Self::line(NodeKind::Op(*o), Some(sort), operands, None))
            }
            // The fill is expressed by the `init` line itself.
            Opcode::ArrayFill => self.operand(op.operands[0]),
            _ => return Err(ToBtor2Error::NoCounterpart(op.id)),
        };
        self.refs.insert(ValueRef::Op(op.id), r);
        Ok(())
    }

    fn is_seed(&self, v: ValueRef) -> bool {
        matches!(v, ValueRef::Op(id) if matches!(self.p.op(id).opcode, Opcode::Nondet(NondetOrigin::StateSeed(_))))
    }
}

/// Prints a program as BTOR2 with fresh sequential ids.
///
/// Sorts are declared at first use, constants are printed in decimal, and
/// structurally identical operator lines are printed once. Registers seeded
/// by a nondet get no `init` or `next` line, and neither do registers that
/// hold their initial value without having had an explicit `next`. A `not` of a one-bit value
/// becomes a negated operand.
pub fn to_btor2(p: &Program) -> Result<Btor2File, ToBtor2Error> {
    if let Some(d) = verify_ir(p).into_iter().next() {
        return Err(ToBtor2Error::Invalid(d));
    }
    let mut pr = Printer {
        p,
        file: Btor2File::new(""),
        next_id: 0,
        sorts: BTreeMap::new(),
        refs: BTreeMap::new(),
        shared: BTreeMap::new(),
    };
    for op in p.inputs() {
        let sort = pr.sort(op.sort);
        let id = pr.emit(Printer::line(NodeKind::Input, Some(sort), Vec::new(), op.symbol.clone()));
        pr.refs.insert(ValueRef::Op(op.id), id.0 as i64);
    }
    let mut state_ids = Vec::with_capacity(p.states.len());
    for (i, s) in p.states.iter().enumerate() {
        let sort = pr.sort(s.sort);
        let id = pr.emit(Printer::line(NodeKind::State, Some(sort), Vec::new(), s.symbol.clone()));
        pr.refs.insert(ValueRef::Arg(i as u32), id.0 as i64);
        state_ids.push(id.0 as i64);
    }
    for op in p.init_ops() {
        if !matches!(op.opcode, Opcode::Nondet(NondetOrigin::StateSeed(_))) {
            pr.value_op(op)?;
        }
    }
    let mut has_init = vec![false; p.states.len()];
    for (i, &v) in p.init.branch.iter().enumerate() {
        if pr.is_seed(v) {
            continue;
        }
        let sort = pr.sort(p.states[i].sort);
        let value = pr.operand(v);
        pr.emit(Printer::line(NodeKind::Init, Some(sort), vec![state_ids[i], value], None));
        has_init[i] = true;
    }
    for op in p.step_ops() {
        match op.opcode {
            Opcode::Nondet(_) => {}
            Opcode::AssertNot | Opcode::Assume => {
                let kind = if op.opcode == Opcode::AssertNot { NodeKind::Bad } else { NodeKind::Constraint };
                let value = pr.operand(op.operands[0]);
                pr.emit(Printer::line(kind, None, vec![value], op.symbol.clone()));
            }
            _ => pr.value_op(op)?,
        }
    }
    for (i, &v) in p.step.branch.iter().enumerate() {
        if pr.is_seed(v) || (v == ValueRef::Arg(i as u32) && has_init[i] && !p.states[i].had_next) {
            continue;
        }
        let sort = pr.sort(p.states[i].sort);
        let value = pr.operand(v);
        pr.emit(Printer::line(NodeKind::Next, Some(sort), vec![state_ids[i], value], None));
    }
    for o in &p.outputs {
        let value = pr.operand(o.value);
        pr.emit(Printer::line(NodeKind::Output, None, vec![value], o.symbol.clone()));
    }
    Ok(pr.file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btor2::{parse_btor2, typecheck};
    use crate::bv::BitvecConst;
    use crate::ir::{BlockKind, ProgramBuilder};
    use crate::testdata::COUNTER;
    use crate::translate::to_ir;

    #[test]
    fn counter_round_trip() {
        let sys = typecheck(&parse_btor2(COUNTER, "counter").unwrap()).unwrap();
        let text = to_btor2(&to_ir(&sys)).unwrap().to_string();
        let back = typecheck(&parse_btor2(&text, "rt").unwrap()).unwrap();
        assert_eq!(back.states.len(), 1);
        assert_eq!(back.bads.len(), 1);
        assert!(back.next_of(back.states[0]).is_some());
    }

    #[test]
    fn keywords() {
        let mut b = ProgramBuilder::new();
        let s = b.add_state(Sort::Bitvec(4), None, None);
        let c = b.constant(BlockKind::Step, BitvecConst::from_u64(4, 15));
        let eq = b.apply(BlockKind::Step, Op::Eq, &[s, c]).unwrap();
        b.assert_not(eq, None, None);
        let text = to_btor2(&b.finish()).unwrap().to_string();
        assert!(text.contains("constd 1 15"));
        assert!(text.contains(" bad "));
    }

    #[test]
    fn empty_program() {
        assert!(to_btor2(&Program::default()).unwrap().is_empty());
    }
}
