use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ops::Op;
use crate::sort::Width;

/// Id of a line in a BTOR2 file. Sorts, values and property lines share one
/// id space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstKind {
    /// `const`, binary digits.
    Binary,
    /// `constd`, decimal, optionally negative.
    Decimal,
    /// `consth`, hexadecimal digits.
    Hex,
    Zero,
    One,
    Ones,
}

impl ConstKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            ConstKind::Binary => "const",
            ConstKind::Decimal => "constd",
            ConstKind::Hex => "consth",
            ConstKind::Zero => "zero",
            ConstKind::One => "one",
            ConstKind::Ones => "ones",
        }
    }

    pub fn has_literal(&self) -> bool {
        matches!(self, ConstKind::Binary | ConstKind::Decimal | ConstKind::Hex)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// `sort bitvec <w>`
    SortBitvec,
    /// `sort array <index> <element>`; the two sort ids are the operands.
    SortArray,
    Input,
    State,
    Const(ConstKind),
    /// Any operator; immediates are carried inside the [`Op`].
    Op(Op),
    Init,
    Next,
    Bad,
    Constraint,
    Output,
    Fair,
    Justice,
}

impl NodeKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            NodeKind::SortBitvec | NodeKind::SortArray => "sort",
            NodeKind::Input => "input",
            NodeKind::State => "state",
            NodeKind::Const(k) => k.keyword(),
            NodeKind::Op(op) => op.name(),
            NodeKind::Init => "init",
            NodeKind::Next => "next",
            NodeKind::Bad => "bad",
            NodeKind::Constraint => "constraint",
            NodeKind::Output => "output",
            NodeKind::Fair => "fair",
            NodeKind::Justice => "justice",
        }
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, NodeKind::SortBitvec | NodeKind::SortArray)
    }

    /// Whether the line defines a value other lines may reference as an
    /// operand.
    pub fn is_value(&self) -> bool {
        matches!(self, NodeKind::Input | NodeKind::State | NodeKind::Const(_) | NodeKind::Op(_))
    }
}

/// Extra non-operand payload of a line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Immediates {
    None,
    /// Width of a `sort bitvec` line.
    Width(Width),
    /// Literal text of `const`, `constd` and `consth` lines.
    Literal(String),
}

/// One non-comment line of a BTOR2 file.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeLine {
    pub id: NodeId,
    pub kind: NodeKind,
    pub sort: Option<NodeId>,
    /// Referenced ids; a negative entry is the logical negation of the
    /// referenced one-bit node.
    pub operands: Vec<i64>,
    pub immediates: Immediates,
    pub symbol: Option<String>,
}

impl NodeLine {
    pub fn new(id: NodeId, kind: NodeKind) -> Self {
        NodeLine { id, kind, sort: None, operands: Vec::new(), immediates: Immediates::None, symbol: None }
    }
}

impl fmt::Display for NodeLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.id)?;
        match self.kind {
            NodeKind::SortBitvec => {
                let w = match self.immediates {
                    Immediates::Width(w) => w,
                    _ => 0,
                };
                write!(f, "sort bitvec {w}")?;
            }
            NodeKind::SortArray => write!(f, "sort array")?,
            kind => {
                f.write_str(kind.keyword())?;
                if let Some(sort) = self.sort {
                    write!(f, " {sort}")?;
                }
                if kind == NodeKind::Justice {
                    write!(f, " {}", self.operands.len())?;
                }
            }
        }
        for op in &self.operands {
            write!(f, " {op}")?;
        }
        match (&self.kind, &self.immediates) {
            (NodeKind::Op(Op::Sext(w) | Op::Uext(w)), _) => write!(f, " {w}")?,
            (NodeKind::Op(Op::Slice { upper, lower }), _) => write!(f, " {upper} {lower}")?,
            (_, Immediates::Literal(lit)) => write!(f, " {lit}")?,
            _ => {}
        }
        if let Some(sym) = &self.symbol {
            write!(f, " {sym}")?;
        }
        Ok(())
    }
}

/// A parsed BTOR2 file: lines keyed and ordered by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Btor2File {
    pub nodes: BTreeMap<NodeId, NodeLine>,
    pub source_name: String,
}

impl Btor2File {
    pub fn new(source_name: impl Into<String>) -> Self {
        Btor2File { nodes: BTreeMap::new(), source_name: source_name.into() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: NodeId) -> Option<&NodeLine> {
        self.nodes.get(&id)
    }

    pub fn lines(&self) -> impl Iterator<Item = &NodeLine> {
        self.nodes.values()
    }
}

/// Prints one line per node, in id order. The output parses back to an
/// identical node table.
impl fmt::Display for Btor2File {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.nodes.values() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
