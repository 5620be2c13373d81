use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::btor2::NodeId;
use crate::bv::BitvecConst;
use crate::ops::{Op, SortError};
use crate::sort::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub u32);

impl fmt::Display for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "%{}", self.0)
    }
}

/// An SSA value: either the result of an op or a step-block argument (one
/// per state register).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueRef {
    Op(OpId),
    Arg(u32),
}

impl fmt::Display for ValueRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueRef::Op(id) => write!(f, "{id}"),
            ValueRef::Arg(i) => write!(f, "%s{i}"),
        }
    }
}

/// Where a non-deterministic value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NondetOrigin {
    /// A circuit input, fresh every frame.
    Input { source: Option<NodeId> },
    /// The value of state register `n` that no init (in the init block) or
    /// no next (in the step block) pins down.
    StateSeed(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Opcode {
    Op(Op),
    Constant(BitvecConst),
    Nondet(NondetOrigin),
    /// Array whose every index holds the operand. Only appears as an init
    /// value.
    ArrayFill,
    /// Property: the operand must be false in every frame.
    AssertNot,
    /// Constraint: frames where the operand is false do not count.
    Assume,
}

impl Opcode {
    pub fn name(&self) -> &'static str {
        match self {
            Opcode::Op(op) => op.name(),
            Opcode::Constant(_) => "constant",
            Opcode::Nondet(_) => "nondet",
            Opcode::ArrayFill => "array_fill",
            Opcode::AssertNot => "assert_not",
            Opcode::Assume => "assume",
        }
    }

    /// Whether the op yields a value other ops may consume.
    pub fn has_result(&self) -> bool {
        !matches!(self, Opcode::AssertNot | Opcode::Assume)
    }

    /// Sort of the op's result from its operand sorts. `declared` supplies
    /// what the operands cannot determine (nondet sorts, fill index width).
    pub fn result_sort(&self, operands: &[Sort], declared: Sort) -> Result<Sort, SortError> {
        let arity = |expected: usize| {
            if operands.len() == expected {
                Ok(())
            } else {
                Err(SortError::Arity { op: self.name(), expected, actual: operands.len() })
            }
        };
        match self {
            Opcode::Op(op) => op.result_sort(operands),
            Opcode::Constant(c) => arity(0).map(|_| Sort::Bitvec(c.width())),
            Opcode::Nondet(_) => arity(0).map(|_| declared),
            Opcode::ArrayFill => {
                arity(1)?;
                match (declared, operands[0]) {
                    (Sort::Array { element, .. }, Sort::Bitvec(w)) if w == element => Ok(declared),
                    _ => Err(SortError::Mismatch { op: self.name(), lhs: declared, rhs: operands[0] }),
                }
            }
            Opcode::AssertNot | Opcode::Assume => {
                arity(1)?;
                if operands[0].is_bool() {
                    Ok(Sort::BOOL)
                } else {
                    Err(SortError::Operand { op: self.name(), index: 0, expected: "bitvec 1", actual: operands[0] })
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpNode {
    pub id: OpId,
    pub opcode: Opcode,
    pub operands: Vec<ValueRef>,
    pub sort: Sort,
    pub symbol: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Init,
    Step,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockKind::Init => "init",
            BlockKind::Step => "step",
        })
    }
}

/// A basic block: scheduled ops followed by a branch to the step block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Block {
    pub ops: Vec<OpId>,
    pub branch: Vec<ValueRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMeta {
    pub sort: Sort,
    pub symbol: Option<String>,
    pub source: Option<NodeId>,
    pub had_init: bool,
    pub had_next: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyMeta {
    /// The `assert_not` op in the step block.
    pub op: OpId,
    /// The `bad` line it came from.
    pub source: Option<NodeId>,
}

/// An `output` line. Carried through for printing; no semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputMeta {
    pub value: ValueRef,
    pub symbol: Option<String>,
}

/// A transition system as a two-block SSA function.
///
/// The init block computes every register's initial value and branches to
/// the step block. The step block takes one argument per register, checks
/// constraints and properties, computes next values and branches back to
/// itself. `ops` is an arena indexed by [`OpId`]; only ops listed in a
/// block are live.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub ops: Vec<OpNode>,
    pub init: Block,
    pub step: Block,
    pub states: Vec<StateMeta>,
    pub properties: Vec<PropertyMeta>,
    pub outputs: Vec<OutputMeta>,
}

impl Program {
    pub fn op(&self, id: OpId) -> &OpNode {
        &self.ops[id.0 as usize]
    }

    pub fn block(&self, kind: BlockKind) -> &Block {
        match kind {
            BlockKind::Init => &self.init,
            BlockKind::Step => &self.step,
        }
    }

    /// Sort of a value. Panics on dangling references; run
    /// [`verify_ir`](super::verify_ir) first on untrusted programs.
    pub fn sort_of(&self, v: ValueRef) -> Sort {
        match v {
            ValueRef::Op(id) => self.op(id).sort,
            ValueRef::Arg(i) => self.states[i as usize].sort,
        }
    }

    pub fn step_ops(&self) -> impl Iterator<Item = &OpNode> {
        self.step.ops.iter().map(|id| self.op(*id))
    }

    pub fn init_ops(&self) -> impl Iterator<Item = &OpNode> {
        self.init.ops.iter().map(|id| self.op(*id))
    }

    pub fn assumes(&self) -> impl Iterator<Item = &OpNode> {
        self.step_ops().filter(|op| op.opcode == Opcode::Assume)
    }

    /// Step-block nondets standing for circuit inputs, in schedule order.
    pub fn inputs(&self) -> impl Iterator<Item = &OpNode> {
        self.step_ops().filter(|op| matches!(op.opcode, Opcode::Nondet(NondetOrigin::Input { .. })))
    }

    pub fn uses_arrays(&self) -> bool {
        self.states.iter().any(|s| s.sort.is_array())
            || self.init_ops().chain(self.step_ops()).any(|op| op.sort.is_array())
    }
}

/// Incremental construction of a [`Program`].
///
/// Registers whose init or next value is never set get the defaults of
/// [`finish`](ProgramBuilder::finish).
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    program: Program,
    init_values: Vec<Option<ValueRef>>,
    next_values: Vec<Option<ValueRef>>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, sort: Sort, symbol: Option<String>, source: Option<NodeId>) -> ValueRef {
        let index = self.program.states.len() as u32;
        self.program.states.push(StateMeta { sort, symbol, source, had_init: false, had_next: false });
        self.init_values.push(None);
        self.next_values.push(None);
        ValueRef::Arg(index)
    }

    pub fn sort_of(&self, v: ValueRef) -> Sort {
        self.program.sort_of(v)
    }

    /// Appends an op without any checking.
    pub fn push(
        &mut self,
        block: BlockKind,
        opcode: Opcode,
        operands: Vec<ValueRef>,
        sort: Sort,
        symbol: Option<String>,
    ) -> ValueRef {
        let id = OpId(self.program.ops.len() as u32);
        self.program.ops.push(OpNode { id, opcode, operands, sort, symbol });
        match block {
            BlockKind::Init => self.program.init.ops.push(id),
            BlockKind::Step => self.program.step.ops.push(id),
        }
        ValueRef::Op(id)
    }

    /// Appends an operator, inferring its result sort.
    pub fn apply(&mut self, block: BlockKind, op: Op, operands: &[ValueRef]) -> Result<ValueRef, SortError> {
        let sorts: Vec<Sort> = operands.iter().map(|v| self.sort_of(*v)).collect();
        let sort = op.result_sort(&sorts)?;
        Ok(self.push(block, Opcode::Op(op), operands.to_vec(), sort, None))
    }

    pub fn constant(&mut self, block: BlockKind, value: BitvecConst) -> ValueRef {
        let sort = Sort::Bitvec(value.width());
        self.push(block, Opcode::Constant(value), Vec::new(), sort, None)
    }

    pub fn input(&mut self, sort: Sort, symbol: Option<String>, source: Option<NodeId>) -> ValueRef {
        self.push(BlockKind::Step, Opcode::Nondet(NondetOrigin::Input { source }), Vec::new(), sort, symbol)
    }

    pub fn set_init(&mut self, state: u32, value: ValueRef) {
        self.program.states[state as usize].had_init = true;
        self.init_values[state as usize] = Some(value);
    }

    pub fn set_next(&mut self, state: u32, value: ValueRef) {
        self.program.states[state as usize].had_next = true;
        self.next_values[state as usize] = Some(value);
    }

    pub fn assume(&mut self, cond: ValueRef, symbol: Option<String>) {
        self.push(BlockKind::Step, Opcode::Assume, alloc::vec![cond], Sort::BOOL, symbol);
    }

    /// Adds a property and returns its index.
    pub fn assert_not(&mut self, cond: ValueRef, source: Option<NodeId>, symbol: Option<String>) -> usize {
        let ValueRef::Op(op) = self.push(BlockKind::Step, Opcode::AssertNot, alloc::vec![cond], Sort::BOOL, symbol)
        else {
            unreachable!()
        };
        self.program.properties.push(PropertyMeta { op, source });
        self.program.properties.len() - 1
    }

    pub fn output(&mut self, value: ValueRef, symbol: Option<String>) {
        self.program.outputs.push(OutputMeta { value, symbol });
    }

    /// Fills in the branches. A register without init is seeded by a
    /// nondet in the init block. A register without next keeps its value
    /// if it had an init, and otherwise gets a fresh nondet every frame.
    pub fn finish(mut self) -> Program {
        let n = self.program.states.len();
        let mut init_branch = Vec::with_capacity(n);
        for i in 0..n {
            let v = match self.init_values[i] {
                Some(v) => v,
                None => {
                    let sort = self.program.states[i].sort;
                    self.push(
                        BlockKind::Init,
                        Opcode::Nondet(NondetOrigin::StateSeed(i as u32)),
                        Vec::new(),
                        sort,
                        None,
                    )
                }
            };
            init_branch.push(v);
        }
        let mut step_branch = Vec::with_capacity(n);
        for i in 0..n {
            let v = match (self.next_values[i], self.program.states[i].had_init) {
                (Some(v), _) => v,
                (None, true) => ValueRef::Arg(i as u32),
                (None, false) => {
                    let sort = self.program.states[i].sort;
                    self.push(
                        BlockKind::Step,
                        Opcode::Nondet(NondetOrigin::StateSeed(i as u32)),
                        Vec::new(),
                        sort,
                        None,
                    )
                }
            };
            step_branch.push(v);
        }
        self.program.init.branch = init_branch;
        self.program.step.branch = step_branch;
        self.program
    }
}
