use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::program::{BlockKind, OpId, Opcode, Program, ValueRef};
use crate::bv::BitvecConst;
use crate::interp::{eval_unchecked, Value};
use crate::ops::Op;

fn resolve(alias: &BTreeMap<OpId, ValueRef>, mut v: ValueRef) -> ValueRef {
    while let ValueRef::Op(id) = v {
        match alias.get(&id) {
            Some(next) => v = *next,
            None => break,
        }
    }
    v
}

fn constant_of(p: &Program, v: ValueRef) -> Option<&BitvecConst> {
    match v {
        ValueRef::Op(id) => match &p.op(id).opcode {
            Opcode::Constant(c) => Some(c),
            _ => None,
        },
        ValueRef::Arg(_) => None,
    }
}

/// Replaces operators whose operands are all constants by the constant they
/// evaluate to, and `ite` ops with a constant condition by the selected
/// operand.
///
/// Nondets, constraints and properties are left alone and op ids are kept,
/// so folding does not change simulation traces. Removed `ite` ops stay in
/// the arena but are no longer scheduled.
pub fn fold_constants(p: &Program) -> Program {
    let mut out = p.clone();
    let mut alias: BTreeMap<OpId, ValueRef> = BTreeMap::new();
    for kind in [BlockKind::Init, BlockKind::Step] {
        let ids = out.block(kind).ops.clone();
        let mut kept = Vec::with_capacity(ids.len());
        for id in ids {
            let slot = id.0 as usize;
            let operands: Vec<ValueRef> = out.ops[slot].operands.iter().map(|v| resolve(&alias, *v)).collect();
            out.ops[slot].operands = operands;
            let op = &out.ops[slot];
            match op.opcode {
                Opcode::Op(Op::Ite) => {
                    if let Some(c) = constant_of(&out, op.operands[0]) {
                        let chosen = if c.is_true() { op.operands[1] } else { op.operands[2] };
                        alias.insert(id, chosen);
                        continue;
                    }
                }
                Opcode::Op(o) if !op.sort.is_array() => {
                    let args: Option<Vec<Value>> =
                        op.operands.iter().map(|v| constant_of(&out, *v).map(|c| Value::Bv(c.clone()))).collect();
                    if let Some(args) = args {
                        let refs: Vec<&Value> = args.iter().collect();
                        if let Value::Bv(folded) = eval_unchecked(o, &refs) {
                            let node = &mut out.ops[slot];
                            node.opcode = Opcode::Constant(folded);
                            node.operands.clear();
                        }
                    }
                }
                _ => {}
            }
            kept.push(id);
        }
        let block = match kind {
            BlockKind::Init => &mut out.init,
            BlockKind::Step => &mut out.step,
        };
        block.ops = kept;
        for v in block.branch.iter_mut() {
            *v = resolve(&alias, *v);
        }
    }
    for o in out.outputs.iter_mut() {
        o.value = resolve(&alias, o.value);
    }
    out
}
