use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::btor2::{DefKind, NodeId, Operand, TypedSystem};
use crate::ir::{BlockKind, Opcode, Program, ProgramBuilder, ValueRef};
use crate::ops::Op;
use crate::sort::Sort;

struct Lowering<'a> {
    sys: &'a TypedSystem,
    b: ProgramBuilder,
    memo: BTreeMap<(BlockKind, NodeId), ValueRef>,
    negations: BTreeMap<(BlockKind, NodeId), ValueRef>,
    states: BTreeMap<NodeId, u32>,
    inputs: BTreeMap<NodeId, ValueRef>,
}

impl Lowering<'_> {
    fn node(&mut self, block: BlockKind, root: NodeId) -> ValueRef {
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if self.memo.contains_key(&(block, id)) {
                continue;
            }
            let def = &self.sys.defs[&id];
            let v = match &def.kind {
                DefKind::State => ValueRef::Arg(self.states[&id]),
                DefKind::Input => self.inputs[&id],
                DefKind::Const(c) => self.b.constant(block, c.clone()),
                DefKind::Op(op) if expanded => {
                    let args: Vec<ValueRef> = def.operands.iter().map(|o| self.operand(block, *o)).collect();
                    self.b.push(block, Opcode::Op(*op), args, def.sort, None)
                }
                DefKind::Op(_) => {
                    stack.push((id, true));
                    stack.extend(def.operands.iter().rev().map(|o| (o.node, false)));
                    continue;
                }
            };
            self.memo.insert((block, id), v);
        }
        self.memo[&(block, root)]
    }

    fn operand(&mut self, block: BlockKind, o: Operand) -> ValueRef {
        let v = self.node(block, o.node);
        if !o.negated {
            return v;
        }
        if let Some(n) = self.negations.get(&(block, o.node)) {
            return *n;
        }
        let n = self.b.push(block, Opcode::Op(Op::Not), vec![v], Sort::BOOL, None);
        self.negations.insert((block, o.node), n);
        n
    }
}

/// Builds the two-block program of a sort-checked system.
///
/// Init values go to the init block. The step block reads inputs first, then
/// assumes every constraint, asserts every bad condition is false, and
/// finally computes next values. A negated operand becomes a `not` op.
pub fn to_ir(sys: &TypedSystem) -> Program {
    let mut l = Lowering {
        sys,
        b: ProgramBuilder::new(),
        memo: BTreeMap::new(),
        negations: BTreeMap::new(),
        states: BTreeMap::new(),
        inputs: BTreeMap::new(),
    };
    for &id in &sys.states {
        let def = &sys.defs[&id];
        let ValueRef::Arg(i) = l.b.add_state(def.sort, def.symbol.clone(), Some(id)) else { unreachable!() };
        l.states.insert(id, i);
    }
    for &id in &sys.inputs {
        let def = &sys.defs[&id];
        let v = l.b.input(def.sort, def.symbol.clone(), Some(id));
        l.inputs.insert(id, v);
    }
    for (i, &state) in sys.states.iter().enumerate() {
        if let Some(init) = sys.init_of(state) {
            let mut v = l.operand(BlockKind::Init, init.value);
            if init.fill {
                v = l.b.push(BlockKind::Init, Opcode::ArrayFill, vec![v], sys.sort_of(state), None);
            }
            l.b.set_init(i as u32, v);
        }
    }
    for &line in &sys.constraints {
        let c = sys.condition(line);
        let v = l.operand(BlockKind::Step, c.value);
        l.b.assume(v, c.symbol.clone());
    }
    for &line in &sys.bads {
        let c = sys.condition(line);
        let v = l.operand(BlockKind::Step, c.value);
        l.b.assert_not(v, Some(line), c.symbol.clone());
    }
    for (i, &state) in sys.states.iter().enumerate() {
        if let Some(next) = sys.next_of(state) {
            let v = l.operand(BlockKind::Step, next.value);
            l.b.set_next(i as u32, v);
        }
    }
    for &line in &sys.outputs {
        let c = sys.condition(line);
        let v = l.operand(BlockKind::Step, c.value);
        l.b.output(v, c.symbol.clone());
    }
    l.b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btor2::{parse_btor2, typecheck};
    use crate::bv::BitvecConst;
    use crate::ir::verify_ir;
    use crate::testdata::{COUNTER, FACTORIAL};

    fn lower(text: &str) -> Program {
        to_ir(&typecheck(&parse_btor2(text, "t").unwrap()).unwrap())
    }

    fn has_op(p: &Program, op: Op, operands: impl Fn(&Program, &[ValueRef]) -> bool) -> bool {
        p.step_ops().any(|n| n.opcode == Opcode::Op(op) && operands(p, &n.operands))
    }

    fn is_const(p: &Program, v: ValueRef, w: u32, x: u64) -> bool {
        matches!(v, ValueRef::Op(id) if p.op(id).opcode == Opcode::Constant(BitvecConst::from_u64(w, x)))
    }

    #[test]
    fn counter() {
        let p = lower(COUNTER);
        assert!(verify_ir(&p).is_empty());
        assert_eq!(p.states.len(), 1);
        assert!(has_op(&p, Op::Add, |p, a| a[0] == ValueRef::Arg(0) && is_const(p, a[1], 4, 1)));
        let prop = p.op(p.properties[0].op);
        let ValueRef::Op(cond) = prop.operands[0] else { panic!() };
        let cond = p.op(cond);
        assert_eq!(cond.opcode, Opcode::Op(Op::Eq));
        assert_eq!(cond.operands[0], ValueRef::Arg(0));
        assert!(is_const(&p, cond.operands[1], 4, 15));
    }

    #[test]
    fn factorial() {
        let p = lower(FACTORIAL);
        assert!(verify_ir(&p).is_empty());
        assert_eq!(p.states.len(), 2);
        assert_eq!(p.properties.len(), 2);
        assert_eq!(p.properties[0].source, Some(NodeId(14)));
        assert_eq!(p.properties[1].source, Some(NodeId(19)));
        assert!(has_op(&p, Op::Mul, |_, _| true));
        assert!(has_op(&p, Op::Slice { upper: 0, lower: 0 }, |_, _| true));
        assert!(has_op(&p, Op::Ugt, |p, a| a[0] == ValueRef::Arg(1) && is_const(p, a[1], 4, 3)));
    }

    #[test]
    fn no_bads_no_asserts() {
        let p = lower("1 sort bitvec 2\n2 state 1\n3 next 1 2 2\n");
        assert!(p.properties.is_empty());
        assert!(p.step_ops().all(|o| o.opcode != Opcode::AssertNot));
    }

    #[test]
    fn negation_is_shared() {
        let p = lower("1 sort bitvec 1\n2 input 1\n3 and 1 -2 -2\n4 bad -2\n");
        assert!(verify_ir(&p).is_empty());
        assert_eq!(p.step_ops().filter(|o| o.opcode == Opcode::Op(Op::Not)).count(), 1);
    }
}
