use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::literal::{parse_const_literal, LiteralError};
use super::node::{Btor2File, Immediates, NodeId, NodeKind, NodeLine};
use crate::bv::BitvecConst;
use crate::ops::{Op, SortError};
use crate::sort::Sort;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("node {node}: {kind}")]
pub struct TypeError {
    pub node: NodeId,
    pub kind: TypeErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("sort mismatch: expected {expected}, found {actual}")]
    SortMismatch { expected: Sort, actual: Sort },
    #[error(transparent)]
    Operator(#[from] SortError),
    #[error("negated operand -{0} does not have sort bitvec 1")]
    NegatedNonBoolean(NodeId),
    #[error("{0} is not a sort")]
    NotASort(NodeId),
    #[error("{0} is not a value")]
    NotAValue(NodeId),
    #[error("{0} is not a state")]
    NotAState(NodeId),
    #[error("state {0} has more than one init line")]
    DuplicateInit(NodeId),
    #[error("state {0} has more than one next line")]
    DuplicateNext(NodeId),
    #[error("init value depends on input or state {0}")]
    InitNotConstant(NodeId),
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

/// A possibly negated reference to a value node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Operand {
    pub node: NodeId,
    pub negated: bool,
}

impl Operand {
    fn from_raw(raw: i64) -> Self {
        Operand { node: NodeId(raw.unsigned_abs()), negated: raw < 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefKind {
    Input,
    State,
    Const(BitvecConst),
    Op(Op),
}

/// A typed value-producing node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub id: NodeId,
    pub kind: DefKind,
    pub sort: Sort,
    pub operands: Vec<Operand>,
    pub symbol: Option<String>,
}

/// An `init` or `next` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Update {
    pub line: NodeId,
    pub state: NodeId,
    pub value: Operand,
    /// Array state initialised from an element value: every index holds it.
    pub fill: bool,
}

/// A `bad`, `constraint` or `output` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub line: NodeId,
    pub value: Operand,
    pub symbol: Option<String>,
}

/// A BTOR2 file after sort checking, with the transition-system structure
/// pulled out.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypedSystem {
    pub source_name: String,
    /// Sort of every sort line and every value node.
    pub sorts: BTreeMap<NodeId, Sort>,
    pub defs: BTreeMap<NodeId, Def>,
    pub inputs: Vec<NodeId>,
    pub states: Vec<NodeId>,
    /// State id to its `init` line id.
    pub init_map: BTreeMap<NodeId, NodeId>,
    /// State id to its `next` line id.
    pub next_map: BTreeMap<NodeId, NodeId>,
    /// `init` and `next` lines by line id.
    pub updates: BTreeMap<NodeId, Update>,
    pub bads: Vec<NodeId>,
    pub constraints: Vec<NodeId>,
    pub outputs: Vec<NodeId>,
    /// `bad`, `constraint` and `output` lines by line id.
    pub conditions: BTreeMap<NodeId, Condition>,
}

impl TypedSystem {
    pub fn sort_of(&self, node: NodeId) -> Sort {
        self.sorts[&node]
    }

    pub fn init_of(&self, state: NodeId) -> Option<&Update> {
        self.init_map.get(&state).map(|l| &self.updates[l])
    }

    pub fn next_of(&self, state: NodeId) -> Option<&Update> {
        self.next_map.get(&state).map(|l| &self.updates[l])
    }

    pub fn condition(&self, line: NodeId) -> &Condition {
        &self.conditions[&line]
    }

    pub fn max_width(&self) -> u32 {
        self.sorts
            .values()
            .map(|s| match *s {
                Sort::Bitvec(w) => w,
                Sort::Array { index, element } => index.max(element),
            })
            .max()
            .unwrap_or(0)
    }
}

struct Checker<'a> {
    file: &'a Btor2File,
    sys: TypedSystem,
}

impl Checker<'_> {
    fn err(&self, line: &NodeLine, kind: TypeErrorKind) -> TypeError {
        TypeError { node: line.id, kind }
    }

    fn sort_line(&self, line: &NodeLine, id: NodeId) -> Result<Sort, TypeError> {
        match self.file.get(id) {
            Some(l) if l.kind.is_sort() => Ok(self.sys.sorts[&id]),
            _ => Err(self.err(line, TypeErrorKind::NotASort(id))),
        }
    }

    fn declared_sort(&self, line: &NodeLine) -> Result<Sort, TypeError> {
        let id = line.sort.ok_or_else(|| self.err(line, TypeErrorKind::NotASort(NodeId(0))))?;
        self.sort_line(line, id)
    }

    fn value(&self, line: &NodeLine, raw: i64) -> Result<(Operand, Sort), TypeError> {
        let operand = Operand::from_raw(raw);
        if !self.sys.defs.contains_key(&operand.node) {
            return Err(self.err(line, TypeErrorKind::NotAValue(operand.node)));
        }
        let sort = self.sys.sorts[&operand.node];
        if operand.negated && !sort.is_bool() {
            return Err(self.err(line, TypeErrorKind::NegatedNonBoolean(operand.node)));
        }
        Ok((operand, sort))
    }

    fn expect(&self, line: &NodeLine, expected: Sort, actual: Sort) -> Result<(), TypeError> {
        if expected == actual {
            Ok(())
        } else {
            Err(self.err(line, TypeErrorKind::SortMismatch { expected, actual }))
        }
    }

    fn define(&mut self, line: &NodeLine, kind: DefKind, sort: Sort, operands: Vec<Operand>) {
        self.sys.sorts.insert(line.id, sort);
        self.sys.defs.insert(line.id, Def { id: line.id, kind, sort, operands, symbol: line.symbol.clone() });
    }

    fn condition(&mut self, line: &NodeLine) -> Result<Condition, TypeError> {
        let (value, sort) = self.value(line, line.operands[0])?;
        self.sys.sorts.insert(line.id, sort);
        Ok(Condition { line: line.id, value, symbol: line.symbol.clone() })
    }

    fn line(&mut self, line: &NodeLine) -> Result<(), TypeError> {
        match line.kind {
            NodeKind::SortBitvec => {
                let w = match line.immediates {
                    Immediates::Width(w) if w > 0 => w,
                    _ => return Err(self.err(line, TypeErrorKind::NotASort(line.id))),
                };
                self.sys.sorts.insert(line.id, Sort::Bitvec(w));
            }
            NodeKind::SortArray => {
                let index = self.sort_line(line, NodeId(line.operands[0] as u64))?;
                let element = self.sort_line(line, NodeId(line.operands[1] as u64))?;
                let (Sort::Bitvec(index), Sort::Bitvec(element)) = (index, element) else {
                    return Err(self.err(line, TypeErrorKind::Unsupported("nested array sorts")));
                };
                self.sys.sorts.insert(line.id, Sort::Array { index, element });
            }
            NodeKind::Input => {
                let sort = self.declared_sort(line)?;
                self.define(line, DefKind::Input, sort, Vec::new());
                self.sys.inputs.push(line.id);
            }
            NodeKind::State => {
                let sort = self.declared_sort(line)?;
                self.define(line, DefKind::State, sort, Vec::new());
                self.sys.states.push(line.id);
            }
            NodeKind::Const(kind) => {
                let sort = self.declared_sort(line)?;
                let Sort::Bitvec(width) = sort else {
                    return Err(self.err(line, TypeErrorKind::SortMismatch { expected: Sort::Bitvec(1), actual: sort }));
                };
                let literal = match &line.immediates {
                    Immediates::Literal(l) => l.as_str(),
                    _ => "",
                };
                let value = parse_const_literal(kind, literal, width).map_err(|e| self.err(line, e.into()))?;
                self.define(line, DefKind::Const(value), sort, Vec::new());
            }
            NodeKind::Op(op) => {
                let declared = self.declared_sort(line)?;
                let mut operands = Vec::with_capacity(line.operands.len());
                let mut sorts = Vec::with_capacity(line.operands.len());
                for raw in &line.operands {
                    let (operand, sort) = self.value(line, *raw)?;
                    operands.push(operand);
                    sorts.push(sort);
                }
                let inferred = op.result_sort(&sorts).map_err(|e| self.err(line, e.into()))?;
                self.expect(line, declared, inferred)?;
                self.define(line, DefKind::Op(op), declared, operands);
            }
            NodeKind::Init | NodeKind::Next => {
                let declared = self.declared_sort(line)?;
                let state = NodeId(line.operands[0] as u64);
                match self.sys.defs.get(&state) {
                    Some(d) if d.kind == DefKind::State => {}
                    _ => return Err(self.err(line, TypeErrorKind::NotAState(state))),
                }
                let state_sort = self.sys.sorts[&state];
                self.expect(line, state_sort, declared)?;
                let (value, value_sort) = self.value(line, line.operands[1])?;
                let is_init = line.kind == NodeKind::Init;
                let fill = match (state_sort, value_sort) {
                    (Sort::Array { element, .. }, Sort::Bitvec(w)) if is_init && w == element => true,
                    _ => {
                        self.expect(line, state_sort, value_sort)?;
                        false
                    }
                };
                let map = if is_init { &self.sys.init_map } else { &self.sys.next_map };
                if map.contains_key(&state) {
                    let kind =
                        if is_init { TypeErrorKind::DuplicateInit(state) } else { TypeErrorKind::DuplicateNext(state) };
                    return Err(self.err(line, kind));
                }
                if is_init {
                    if let Some(free) = self.free_dependency(value.node) {
                        return Err(self.err(line, TypeErrorKind::InitNotConstant(free)));
                    }
                    self.sys.init_map.insert(state, line.id);
                } else {
                    self.sys.next_map.insert(state, line.id);
                }
                self.sys.sorts.insert(line.id, state_sort);
                self.sys.updates.insert(line.id, Update { line: line.id, state, value, fill });
            }
            NodeKind::Bad | NodeKind::Constraint => {
                let c = self.condition(line)?;
                self.expect(line, Sort::BOOL, self.sys.sorts[&line.id])?;
                if line.kind == NodeKind::Bad {
                    self.sys.bads.push(line.id);
                } else {
                    self.sys.constraints.push(line.id);
                }
                self.sys.conditions.insert(line.id, c);
            }
            NodeKind::Output => {
                let c = self.condition(line)?;
                self.sys.outputs.push(line.id);
                self.sys.conditions.insert(line.id, c);
            }
            NodeKind::Fair => return Err(self.err(line, TypeErrorKind::Unsupported("fairness constraints"))),
            NodeKind::Justice => return Err(self.err(line, TypeErrorKind::Unsupported("justice constraints"))),
        }
        Ok(())
    }

    /// First input or state reachable from `root` through operands.
    fn free_dependency(&self, root: NodeId) -> Option<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            let def = &self.sys.defs[&id];
            match def.kind {
                DefKind::Input | DefKind::State => return Some(id),
                _ => stack.extend(def.operands.iter().map(|o| o.node)),
            }
        }
        None
    }
}

/// Assigns a sort to every node and checks every operator signature.
///
/// `fair` and `justice` lines are rejected as unsupported.
pub fn typecheck(file: &Btor2File) -> Result<TypedSystem, TypeError> {
    let mut checker =
        Checker { file, sys: TypedSystem { source_name: file.source_name.clone(), ..TypedSystem::default() } };
    for line in file.lines() {
        checker.line(line)?;
    }
    Ok(checker.sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btor2::parse_btor2;
    use crate::testdata::{COUNTER, FACTORIAL};

    fn check(text: &str) -> Result<TypedSystem, TypeError> {
        typecheck(&parse_btor2(text, "t").unwrap())
    }

    #[test]
    fn counter_structure() {
        let sys = check(COUNTER).unwrap();
        assert_eq!(sys.states, [NodeId(3)]);
        assert_eq!(sys.next_map.get(&NodeId(3)), Some(&NodeId(7)));
        assert_eq!(sys.bads, [NodeId(11)]);
        assert_eq!(sys.max_width(), 4);
    }

    #[test]
    fn factorial_structure() {
        let sys = check(FACTORIAL).unwrap();
        assert_eq!(sys.states, [NodeId(3), NodeId(4)]);
        assert_eq!(sys.bads, [NodeId(14), NodeId(19)]);
        assert!(sys.inputs.is_empty());
    }

    #[test]
    fn every_node_gets_a_sort() {
        let file = parse_btor2(FACTORIAL, "f").unwrap();
        let sys = typecheck(&file).unwrap();
        for id in file.nodes.keys() {
            assert!(sys.sorts.contains_key(id), "node {id} has no sort");
        }
    }

    #[test]
    fn wide_bad_is_rejected() {
        let e = check("1 sort bitvec 4\n2 input 1\n3 bad 2\n").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::SortMismatch { expected: Sort::BOOL, actual: Sort::Bitvec(4) });
        assert_eq!(e.node, NodeId(3));
    }

    #[test]
    fn negation_requires_bool() {
        let e = check("1 sort bitvec 4\n2 input 1\n3 not 1 -2\n").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::NegatedNonBoolean(NodeId(2)));
        assert!(check("1 sort bitvec 1\n2 input 1\n3 bad -2\n").is_ok());
    }

    #[test]
    fn structural_errors() {
        let e = check("1 sort bitvec 4\n2 input 1\n3 slice 1 2 4 0\n").unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::Operator(SortError::SliceBounds { .. })));

        let e = check("1 sort bitvec 4\n2 state 1\n3 next 1 2 2\n4 next 1 2 2\n").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::DuplicateNext(NodeId(2)));

        let e = check("1 sort bitvec 1\n2 input 1\n3 fair 2\n").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Unsupported("fairness constraints"));
        assert!(alloc::format!("{e}").contains("unsupported: fairness"));

        let e = check("1 sort bitvec 1\n2 input 1\n3 justice 1 2\n").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Unsupported("justice constraints"));

        let e = check("1 sort bitvec 4\n2 sort bitvec 3\n3 input 1\n4 input 2\n5 add 1 3 4\n").unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::Operator(SortError::Mismatch { .. })));

        let e = check("1 sort bitvec 4\n2 input 1\n3 state 1\n4 init 1 3 2\n").unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::InitNotConstant(NodeId(2)));

        let e = check("1 sort bitvec 2\n2 sort array 1 1\n3 state 2\n4 state 2\n5 sort bitvec 1\n6 eq 5 3 4\n")
            .unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::Operator(_)));
    }

    #[test]
    fn array_fill_init() {
        let sys = check("1 sort bitvec 2\n2 sort bitvec 4\n3 sort array 1 2\n4 state 3 mem\n5 zero 2\n6 init 3 4 5\n")
            .unwrap();
        assert!(sys.init_of(NodeId(4)).unwrap().fill);
    }

    #[test]
    fn symbols_do_not_affect_typing() {
        let named = check(COUNTER).unwrap();
        let anon = check(&COUNTER.replace(" out", "")).unwrap();
        assert_eq!(named.sorts, anon.sorts);
        assert_eq!(named.states, anon.states);
    }
}
