//! The BTOR2 operator set, shared by the front end, the IR and the
//! interpreter.

use core::fmt;

use thiserror::Error;

use crate::sort::{Sort, Width};

/// A BTOR2 operator, with its immediates where it has any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    // unary
    Not,
    Inc,
    Dec,
    Neg,
    Redand,
    Redor,
    Redxor,
    Sext(Width),
    Uext(Width),
    Slice { upper: Width, lower: Width },
    // binary, boolean/bitwise
    And,
    Nand,
    Nor,
    Or,
    Xor,
    Xnor,
    Implies,
    Iff,
    // comparisons
    Eq,
    Neq,
    Ult,
    Ulte,
    Ugt,
    Ugte,
    Slt,
    Slte,
    Sgt,
    Sgte,
    // shifts and rotations
    Sll,
    Srl,
    Sra,
    Rol,
    Ror,
    // arithmetic
    Add,
    Sub,
    Mul,
    Udiv,
    Sdiv,
    Urem,
    Srem,
    Smod,
    Concat,
    // overflow detection
    Uaddo,
    Saddo,
    Usubo,
    Ssubo,
    Umulo,
    Smulo,
    Sdivo,
    // arrays and selection
    Read,
    Write,
    Ite,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("`{op}` expects {expected} operands, got {actual}")]
    Arity { op: &'static str, expected: usize, actual: usize },
    #[error("`{op}` operand {index} has sort {actual}, expected {expected}")]
    Operand { op: &'static str, index: usize, expected: &'static str, actual: Sort },
    #[error("`{op}` operands have different sorts {lhs} and {rhs}")]
    Mismatch { op: &'static str, lhs: Sort, rhs: Sort },
    #[error("slice [{upper}:{lower}] out of range for width {width}")]
    SliceBounds { upper: Width, lower: Width, width: Width },
    #[error("extension of width {width} by {by} overflows")]
    ExtensionOverflow { width: Width, by: Width },
}

/// Binary operators without immediates, in BTOR2 keyword order.
pub const BINARY_OPS: [Op; 39] = [
    Op::And,
    Op::Nand,
    Op::Nor,
    Op::Or,
    Op::Xor,
    Op::Xnor,
    Op::Implies,
    Op::Iff,
    Op::Eq,
    Op::Neq,
    Op::Ult,
    Op::Ulte,
    Op::Ugt,
    Op::Ugte,
    Op::Slt,
    Op::Slte,
    Op::Sgt,
    Op::Sgte,
    Op::Sll,
    Op::Srl,
    Op::Sra,
    Op::Rol,
    Op::Ror,
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Udiv,
    Op::Sdiv,
    Op::Urem,
    Op::Srem,
    Op::Smod,
    Op::Concat,
    Op::Uaddo,
    Op::Saddo,
    Op::Usubo,
    Op::Ssubo,
    Op::Umulo,
    Op::Smulo,
    Op::Sdivo,
];

/// Unary operators without immediates.
pub const UNARY_OPS: [Op; 7] = [Op::Not, Op::Inc, Op::Dec, Op::Neg, Op::Redand, Op::Redor, Op::Redxor];

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Not => "not",
            Op::Inc => "inc",
            Op::Dec => "dec",
            Op::Neg => "neg",
            Op::Redand => "redand",
            Op::Redor => "redor",
            Op::Redxor => "redxor",
            Op::Sext(_) => "sext",
            Op::Uext(_) => "uext",
            Op::Slice { .. } => "slice",
            Op::And => "and",
            Op::Nand => "nand",
            Op::Nor => "nor",
            Op::Or => "or",
            Op::Xor => "xor",
            Op::Xnor => "xnor",
            Op::Implies => "implies",
            Op::Iff => "iff",
            Op::Eq => "eq",
            Op::Neq => "neq",
            Op::Ult => "ult",
            Op::Ulte => "ulte",
            Op::Ugt => "ugt",
            Op::Ugte => "ugte",
            Op::Slt => "slt",
            Op::Slte => "slte",
            Op::Sgt => "sgt",
            Op::Sgte => "sgte",
            Op::Sll => "sll",
            Op::Srl => "srl",
            Op::Sra => "sra",
            Op::Rol => "rol",
            Op::Ror => "ror",
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Udiv => "udiv",
            Op::Sdiv => "sdiv",
            Op::Urem => "urem",
            Op::Srem => "srem",
            Op::Smod => "smod",
            Op::Concat => "concat",
            Op::Uaddo => "uaddo",
            Op::Saddo => "saddo",
            Op::Usubo => "usubo",
            Op::Ssubo => "ssubo",
            Op::Umulo => "umulo",
            Op::Smulo => "smulo",
            Op::Sdivo => "sdivo",
            Op::Read => "read",
            Op::Write => "write",
            Op::Ite => "ite",
        }
    }

    /// Looks up an operator keyword. Operators with immediates come back with
    /// zeroed immediates; the caller fills them in.
    pub fn from_keyword(kw: &str) -> Option<Op> {
        let op = match kw {
            "sext" => Op::Sext(0),
            "uext" => Op::Uext(0),
            "slice" => Op::Slice { upper: 0, lower: 0 },
            "read" => Op::Read,
            "write" => Op::Write,
            "ite" => Op::Ite,
            _ => return UNARY_OPS.iter().chain(BINARY_OPS.iter()).copied().find(|op| op.name() == kw),
        };
        Some(op)
    }

    pub fn arity(&self) -> usize {
        match self {
            Op::Not
            | Op::Inc
            | Op::Dec
            | Op::Neg
            | Op::Redand
            | Op::Redor
            | Op::Redxor
            | Op::Sext(_)
            | Op::Uext(_)
            | Op::Slice { .. } => 1,
            Op::Write | Op::Ite => 3,
            _ => 2,
        }
    }

    /// Whether `eval(a, b) == eval(b, a)` for all operands.
    pub fn is_commutative(&self) -> bool {
        matches!(
            self,
            Op::And
                | Op::Nand
                | Op::Nor
                | Op::Or
                | Op::Xor
                | Op::Xnor
                | Op::Iff
                | Op::Eq
                | Op::Neq
                | Op::Add
                | Op::Mul
                | Op::Uaddo
                | Op::Saddo
                | Op::Umulo
                | Op::Smulo
        )
    }

    /// Result sort as a function of the operand sorts.
    pub fn result_sort(&self, args: &[Sort]) -> Result<Sort, SortError> {
        let name = self.name();
        if args.len() != self.arity() {
            return Err(SortError::Arity { op: name, expected: self.arity(), actual: args.len() });
        }
        let bv = |index: usize| -> Result<Width, SortError> {
            args[index].bv_width().ok_or(SortError::Operand {
                op: name,
                index,
                expected: "a bitvector",
                actual: args[index],
            })
        };
        let same = || -> Result<Width, SortError> {
            let w = bv(0)?;
            bv(1)?;
            if args[0] != args[1] {
                return Err(SortError::Mismatch { op: name, lhs: args[0], rhs: args[1] });
            }
            Ok(w)
        };
        let boolean = |index: usize| -> Result<(), SortError> {
            if args[index].is_bool() {
                Ok(())
            } else {
                Err(SortError::Operand { op: name, index, expected: "bitvec 1", actual: args[index] })
            }
        };
        match *self {
            Op::Not | Op::Inc | Op::Dec | Op::Neg => Ok(Sort::Bitvec(bv(0)?)),
            Op::Redand | Op::Redor | Op::Redxor => bv(0).map(|_| Sort::BOOL),
            Op::Sext(by) | Op::Uext(by) => {
                let width = bv(0)?;
                width.checked_add(by).map(Sort::Bitvec).ok_or(SortError::ExtensionOverflow { width, by })
            }
            Op::Slice { upper, lower } => {
                let width = bv(0)?;
                if upper < width && lower <= upper {
                    Ok(Sort::Bitvec(upper - lower + 1))
                } else {
                    Err(SortError::SliceBounds { upper, lower, width })
                }
            }
            Op::Implies | Op::Iff => {
                boolean(0)?;
                boolean(1)?;
                Ok(Sort::BOOL)
            }
            Op::And
            | Op::Nand
            | Op::Nor
            | Op::Or
            | Op::Xor
            | Op::Xnor
            | Op::Sll
            | Op::Srl
            | Op::Sra
            | Op::Rol
            | Op::Ror
            | Op::Add
            | Op::Sub
            | Op::Mul
            | Op::Udiv
            | Op::Sdiv
            | Op::Urem
            | Op::Srem
            | Op::Smod => same().map(Sort::Bitvec),
            Op::Eq
            | Op::Neq
            | Op::Ult
            | Op::Ulte
            | Op::Ugt
            | Op::Ugte
            | Op::Slt
            | Op::Slte
            | Op::Sgt
            | Op::Sgte
            | Op::Uaddo
            | Op::Saddo
            | Op::Usubo
            | Op::Ssubo
            | Op::Umulo
            | Op::Smulo
            | Op::Sdivo => same().map(|_| Sort::BOOL),
            Op::Concat => {
                let (a, b) = (bv(0)?, bv(1)?);
                a.checked_add(b).map(Sort::Bitvec).ok_or(SortError::ExtensionOverflow { width: a, by: b })
            }
            Op::Read => match args[0] {
                Sort::Array { index, element } => {
                    if args[1] != Sort::Bitvec(index) {
                        return Err(SortError::Mismatch { op: name, lhs: Sort::Bitvec(index), rhs: args[1] });
                    }
                    Ok(Sort::Bitvec(element))
                }
                actual => Err(SortError::Operand { op: name, index: 0, expected: "an array", actual }),
            },
            Op::Write => match args[0] {
                Sort::Array { index, element } => {
                    if args[1] != Sort::Bitvec(index) {
                        return Err(SortError::Mismatch { op: name, lhs: Sort::Bitvec(index), rhs: args[1] });
                    }
                    if args[2] != Sort::Bitvec(element) {
                        return Err(SortError::Mismatch { op: name, lhs: Sort::Bitvec(element), rhs: args[2] });
                    }
                    Ok(args[0])
                }
                actual => Err(SortError::Operand { op: name, index: 0, expected: "an array", actual }),
            },
            Op::Ite => {
                boolean(0)?;
                if args[1] != args[2] {
                    return Err(SortError::Mismatch { op: name, lhs: args[1], rhs: args[2] });
                }
                Ok(args[1])
            }
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Sext(w) | Op::Uext(w) => write!(f, "{} {}", self.name(), w),
            Op::Slice { upper, lower } => write!(f, "slice {upper} {lower}"),
            _ => f.write_str(self.name()),
        }
    }
}
