use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use super::value::Value;
use crate::bv::BitvecConst;
use crate::ops::Op;
use crate::sort::Sort;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("cannot evaluate `{op}`: {detail}")]
pub struct EvalError {
    pub op: &'static str,
    pub detail: String,
}

/// Evaluates one operator on concrete operands.
///
/// Operand sorts are checked against the operator signature first; a
/// mismatch is reported as an error rather than a panic.
pub fn eval_op(op: Op, args: &[&Value]) -> Result<Value, EvalError> {
    let sorts: Vec<Sort> = args.iter().map(|v| v.sort()).collect();
    op.result_sort(&sorts).map_err(|e| EvalError { op: op.name(), detail: format!("{e}") })?;
    Ok(eval_unchecked(op, args))
}

fn bv(v: &Value) -> &BitvecConst {
    match v {
        Value::Bv(b) => b,
        Value::Array(_) => panic!("expected a bitvector operand"),
    }
}

fn flag(b: bool) -> Value {
    Value::Bv(BitvecConst::from_bool(b))
}

/// [`eval_op`] without the signature check, for programs that passed
/// `verify_ir`.
pub(crate) fn eval_unchecked(op: Op, args: &[&Value]) -> Value {
    if let Op::Read = op {
        let Value::Array(a) = args[0] else { panic!("read from a bitvector") };
        return Value::Bv(a.read(bv(args[1])));
    }
    if let Op::Write = op {
        let Value::Array(a) = args[0] else { panic!("write to a bitvector") };
        return Value::Array(a.write(bv(args[1]), bv(args[2]).clone()));
    }
    if let Op::Ite = op {
        return if bv(args[0]).is_true() { args[1].clone() } else { args[2].clone() };
    }

    let x = bv(args[0]);
    if op.arity() == 1 {
        return Value::Bv(match op {
            Op::Not => x.not(),
            Op::Inc => x.inc(),
            Op::Dec => x.dec(),
            Op::Neg => x.neg(),
            Op::Redand => x.redand(),
            Op::Redor => x.redor(),
            Op::Redxor => x.redxor(),
            Op::Sext(by) => x.sext(by),
            Op::Uext(by) => x.uext(by),
            Op::Slice { upper, lower } => x.slice(upper, lower),
            _ => unreachable!(),
        });
    }

    let y = bv(args[1]);
    let value = match op {
        Op::And => x.and(y),
        Op::Nand => x.and(y).not(),
        Op::Nor => x.or(y).not(),
        Op::Or => x.or(y),
        Op::Xor => x.xor(y),
        Op::Xnor => x.xor(y).not(),
        Op::Implies => x.not().or(y),
        Op::Iff => x.xor(y).not(),
        Op::Eq => return flag(x == y),
        Op::Neq => return flag(x != y),
        Op::Ult => return flag(x.ucmp(y) == Ordering::Less),
        Op::Ulte => return flag(x.ucmp(y) != Ordering::Greater),
        Op::Ugt => return flag(x.ucmp(y) == Ordering::Greater),
        Op::Ugte => return flag(x.ucmp(y) != Ordering::Less),
        Op::Slt => return flag(x.scmp(y) == Ordering::Less),
        Op::Slte => return flag(x.scmp(y) != Ordering::Greater),
        Op::Sgt => return flag(x.scmp(y) == Ordering::Greater),
        Op::Sgte => return flag(x.scmp(y) != Ordering::Less),
        Op::Sll => x.sll(y),
        Op::Srl => x.srl(y),
        Op::Sra => x.sra(y),
        Op::Rol => x.rol(y),
        Op::Ror => x.ror(y),
        Op::Add => x.add(y),
        Op::Sub => x.sub(y),
        Op::Mul => x.mul(y),
        Op::Udiv => x.udiv(y),
        Op::Sdiv => x.sdiv(y),
        Op::Urem => x.urem(y),
        Op::Srem => x.srem(y),
        Op::Smod => x.smod(y),
        Op::Concat => x.concat(y),
        Op::Uaddo => return flag(x.uaddo(y)),
        Op::Saddo => return flag(x.saddo(y)),
        Op::Usubo => return flag(x.usubo(y)),
        Op::Ssubo => return flag(x.ssubo(y)),
        Op::Umulo => return flag(x.umulo(y)),
        Op::Smulo => return flag(x.smulo(y)),
        Op::Sdivo => return flag(x.sdivo(y)),
        _ => unreachable!("{op:?} is not binary"),
    };
    Value::Bv(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::ArrayValue;

    fn v(w: u32, x: u64) -> Value {
        Value::Bv(BitvecConst::from_u64(w, x))
    }

    #[test]
    fn examples() {
        assert_eq!(eval_op(Op::Udiv, &[&v(4, 0b0101), &v(4, 0)]), Ok(v(4, 0b1111)));
        assert_eq!(eval_op(Op::Slice { upper: 2, lower: 1 }, &[&v(4, 0b1101)]), Ok(v(2, 0b10)));
        assert_eq!(eval_op(Op::Smod, &[&v(4, 0b1001), &v(4, 0b0011)]), Ok(v(4, 0b0010)));
        assert_eq!(eval_op(Op::Implies, &[&v(1, 1), &v(1, 0)]), Ok(v(1, 0)));
        assert_eq!(eval_op(Op::Sgt, &[&v(4, 1), &v(4, 15)]), Ok(v(1, 1)));
    }

    #[test]
    fn arrays_and_selection() {
        let mem = Value::Array(ArrayValue::filled(2, BitvecConst::zero(4)));
        let written = eval_op(Op::Write, &[&mem, &v(2, 1), &v(4, 7)]).unwrap();
        assert_eq!(eval_op(Op::Read, &[&written, &v(2, 1)]), Ok(v(4, 7)));
        assert_eq!(eval_op(Op::Read, &[&written, &v(2, 2)]), Ok(v(4, 0)));
        assert_eq!(eval_op(Op::Ite, &[&v(1, 0), &mem, &written]), Ok(written.clone()));
    }

    #[test]
    fn sort_mismatch_is_an_error() {
        assert!(eval_op(Op::Add, &[&v(4, 1), &v(3, 1)]).is_err());
        assert!(eval_op(Op::Not, &[&v(4, 1), &v(4, 1)]).is_err());
    }
}
