use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::program::{BlockKind, NondetOrigin, OpId, Opcode, Program, ValueRef};
use crate::sort::Sort;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Result sort disagrees with the opcode's signature.
    Sort(String),
    /// A value is used where its definition does not dominate the use.
    Dominance(ValueRef),
    /// A reference to a value that does not exist.
    Undefined(ValueRef),
    BranchArity {
        block: BlockKind,
        expected: usize,
        actual: usize,
    },
    BranchSort {
        block: BlockKind,
        index: usize,
        expected: Sort,
        actual: Sort,
    },
    /// An op sits somewhere its opcode is not allowed.
    Placement(String),
    /// Property table out of sync with the `assert_not` ops.
    Property(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub op: Option<OpId>,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(op) = self.op {
            write!(f, "{op}: ")?;
        }
        match &self.kind {
            DiagnosticKind::Sort(m) => write!(f, "sort error: {m}"),
            DiagnosticKind::Dominance(v) => write!(f, "use of {v} is not dominated by its definition"),
            DiagnosticKind::Undefined(v) => write!(f, "use of undefined value {v}"),
            DiagnosticKind::BranchArity { block, expected, actual } => {
                write!(f, "{block} branch carries {actual} values, step block takes {expected}")
            }
            DiagnosticKind::BranchSort { block, index, expected, actual } => {
                write!(f, "{block} branch operand {index} has sort {actual}, expected {expected}")
            }
            DiagnosticKind::Placement(m) => f.write_str(m),
            DiagnosticKind::Property(m) => write!(f, "property table: {m}"),
        }
    }
}

fn is_branch_only(opcode: &Opcode) -> bool {
    matches!(opcode, Opcode::Nondet(NondetOrigin::StateSeed(_)) | Opcode::ArrayFill)
}

struct Verifier<'a> {
    p: &'a Program,
    out: Vec<Diagnostic>,
    /// Block each scheduled op lives in.
    home: BTreeMap<OpId, BlockKind>,
    /// Uses of each StateSeed nondet outside the branch.
    stray_uses: BTreeSet<OpId>,
}

impl Verifier<'_> {
    fn diag(&mut self, op: Option<OpId>, kind: DiagnosticKind) {
        self.out.push(Diagnostic { op, kind });
    }

    fn exists(&self, v: ValueRef) -> bool {
        match v {
            ValueRef::Op(id) => (id.0 as usize) < self.p.ops.len(),
            ValueRef::Arg(i) => (i as usize) < self.p.states.len(),
        }
    }

    /// Checks that `v` may be used inside `block` at a point where
    /// `defined` holds the ops scheduled so far.
    fn check_use(&mut self, user: Option<OpId>, v: ValueRef, block: BlockKind, defined: &BTreeSet<OpId>) -> bool {
        if !self.exists(v) {
            self.diag(user, DiagnosticKind::Undefined(v));
            return false;
        }
        let ok = match v {
            ValueRef::Arg(_) => block == BlockKind::Step,
            ValueRef::Op(id) => defined.contains(&id),
        };
        if !ok {
            let kind = match v {
                ValueRef::Op(id) if !self.home.contains_key(&id) => DiagnosticKind::Undefined(v),
                _ => DiagnosticKind::Dominance(v),
            };
            self.diag(user, kind);
            return false;
        }
        if let ValueRef::Op(id) = v {
            let def = self.p.op(id);
            if !def.opcode.has_result() {
                self.diag(user, DiagnosticKind::Placement(format!("{id} ({}) has no result", def.opcode.name())));
                return false;
            }
            if is_branch_only(&def.opcode) {
                self.stray_uses.insert(id);
            }
        }
        true
    }

    fn block(&mut self, kind: BlockKind) {
        let block = self.p.block(kind);
        let mut defined = BTreeSet::new();
        for &id in &block.ops {
            let op = self.p.op(id);
            let mut operands_ok = true;
            for &v in &op.operands {
                operands_ok &= self.check_use(Some(id), v, kind, &defined);
            }
            if operands_ok {
                let sorts: Vec<Sort> = op.operands.iter().map(|v| self.p.sort_of(*v)).collect();
                match op.opcode.result_sort(&sorts, op.sort) {
                    Ok(s) if s == op.sort => {}
                    Ok(s) => self.diag(Some(id), DiagnosticKind::Sort(format!("declared {}, inferred {s}", op.sort))),
                    Err(e) => self.diag(Some(id), DiagnosticKind::Sort(format!("{e}"))),
                }
            }
            let placement = match (&op.opcode, kind) {
                (Opcode::AssertNot | Opcode::Assume, BlockKind::Init) => {
                    Some("constraints and properties belong in the step block")
                }
                (Opcode::Nondet(NondetOrigin::Input { .. }), BlockKind::Init) => {
                    Some("inputs belong in the step block")
                }
                (Opcode::ArrayFill, BlockKind::Step) => Some("array_fill belongs in the init block"),
                _ => None,
            };
            if let Some(m) = placement {
                self.diag(Some(id), DiagnosticKind::Placement(m.into()));
            }
            defined.insert(id);
        }

        let n = self.p.states.len();
        if block.branch.len() != n {
            self.diag(None, DiagnosticKind::BranchArity { block: kind, expected: n, actual: block.branch.len() });
        }
        for (index, &v) in block.branch.iter().enumerate() {
            let ok = match v {
                ValueRef::Op(id) if self.exists(v) && is_branch_only(&self.p.op(id).opcode) => {
                    if let Opcode::Nondet(NondetOrigin::StateSeed(s)) = self.p.op(id).opcode {
                        if s as usize != index {
                            self.diag(
                                Some(id),
                                DiagnosticKind::Placement(format!("seed of state {s} feeds state {index}")),
                            );
                        }
                    }
                    let ok = defined.contains(&id);
                    if !ok {
                        self.diag(None, DiagnosticKind::Dominance(v));
                    }
                    ok
                }
                _ => self.check_use(None, v, kind, &defined),
            };
            if ok && index < n {
                let (expected, actual) = (self.p.states[index].sort, self.p.sort_of(v));
                if actual != expected {
                    self.diag(None, DiagnosticKind::BranchSort { block: kind, index, expected, actual });
                }
            }
        }
    }
}

/// Checks sorts, dominance, branch arity and op placement. Returns one
/// diagnostic per violation; an empty list means the program is well formed.
pub fn verify_ir(p: &Program) -> Vec<Diagnostic> {
    let mut v = Verifier { p, out: Vec::new(), home: BTreeMap::new(), stray_uses: BTreeSet::new() };

    for (i, op) in p.ops.iter().enumerate() {
        if op.id.0 as usize != i {
            v.diag(Some(op.id), DiagnosticKind::Placement(format!("op stored at arena slot {i}")));
        }
    }
    for kind in [BlockKind::Init, BlockKind::Step] {
        for &id in &p.block(kind).ops {
            if id.0 as usize >= p.ops.len() {
                v.diag(Some(id), DiagnosticKind::Undefined(ValueRef::Op(id)));
            } else if v.home.insert(id, kind).is_some() {
                v.diag(Some(id), DiagnosticKind::Placement(format!("{id} is scheduled twice")));
            }
        }
    }
    if !v.out.is_empty() {
        return v.out;
    }

    v.block(BlockKind::Init);
    v.block(BlockKind::Step);

    let stray: Vec<OpId> = v.stray_uses.iter().copied().collect();
    for id in stray {
        v.diag(Some(id), DiagnosticKind::Placement(format!("{} may only feed a branch", p.op(id).opcode.name())));
    }

    let step_defined: BTreeSet<OpId> = p.step.ops.iter().copied().collect();
    for out in &p.outputs {
        v.check_use(None, out.value, BlockKind::Step, &step_defined);
    }

    let mut claimed = BTreeSet::new();
    for (index, prop) in p.properties.iter().enumerate() {
        let is_assert = v.home.get(&prop.op) == Some(&BlockKind::Step) && p.op(prop.op).opcode == Opcode::AssertNot;
        if !is_assert {
            v.diag(Some(prop.op), DiagnosticKind::Property(format!("property {index} is not a step-block assert_not")));
        } else if !claimed.insert(prop.op) {
            v.diag(Some(prop.op), DiagnosticKind::Property(format!("property {index} repeats an assert_not")));
        }
    }
    for op in p.step_ops() {
        if op.opcode == Opcode::AssertNot && !claimed.contains(&op.id) {
            v.diag(Some(op.id), DiagnosticKind::Property("assert_not without a property entry".into()));
        }
    }
    v.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bv::BitvecConst;
    use crate::ir::{ProgramBuilder, StateMeta};
    use crate::ops::Op;
    use alloc::vec;

    fn two_state_program() -> Program {
        let mut b = ProgramBuilder::new();
        let a = b.add_state(Sort::Bitvec(4), None, None);
        let c = b.add_state(Sort::Bitvec(4), None, None);
        let zero = b.constant(BlockKind::Init, BitvecConst::zero(4));
        b.set_init(0, zero);
        b.set_init(1, zero);
        let sum = b.apply(BlockKind::Step, Op::Add, &[a, c]).unwrap();
        b.set_next(0, sum);
        b.set_next(1, a);
        b.finish()
    }

    #[test]
    fn well_formed_program_is_clean() {
        assert_eq!(verify_ir(&two_state_program()), vec![]);
        assert_eq!(verify_ir(&Program::default()), vec![]);
    }

    #[test]
    fn branch_arity_mismatch() {
        let mut p = two_state_program();
        p.init.branch.pop();
        let d = verify_ir(&p);
        assert!(d
            .iter()
            .any(|d| matches!(d.kind, DiagnosticKind::BranchArity { block: BlockKind::Init, expected: 2, actual: 1 })));
    }

    #[test]
    fn step_value_used_in_init() {
        let mut p = two_state_program();
        let step_value = p.step.branch[0];
        p.init.branch[0] = step_value;
        let d = verify_ir(&p);
        assert!(d.iter().any(|d| d.kind == DiagnosticKind::Dominance(step_value)), "{d:?}");

        let mut p = two_state_program();
        p.init.branch[1] = ValueRef::Arg(0);
        assert!(verify_ir(&p).iter().any(|d| d.kind == DiagnosticKind::Dominance(ValueRef::Arg(0))));
    }

    #[test]
    fn sort_and_property_errors() {
        let mut p = two_state_program();
        p.states.push(StateMeta {
            sort: Sort::Bitvec(3),
            symbol: None,
            source: None,
            had_init: false,
            had_next: false,
        });
        let d = verify_ir(&p);
        assert!(d.iter().any(|d| matches!(d.kind, DiagnosticKind::BranchArity { .. })));

        let mut p = two_state_program();
        let add = p.step.ops[0];
        p.ops[add.0 as usize].sort = Sort::Bitvec(5);
        assert!(verify_ir(&p).iter().any(|d| matches!(d.kind, DiagnosticKind::Sort(_))));

        let mut b = ProgramBuilder::new();
        let x = b.input(Sort::BOOL, None, None);
        b.assert_not(x, None, None);
        let mut p = b.finish();
        p.properties.clear();
        assert!(verify_ir(&p).iter().any(|d| matches!(d.kind, DiagnosticKind::Property(_))));
    }
}
