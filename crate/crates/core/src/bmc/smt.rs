use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bv::BitvecConst;
use crate::ops::Op;
use crate::sort::Sort;

pub(crate) fn sort_term(sort: Sort) -> String {
    match sort {
        Sort::Bitvec(w) => format!("(_ BitVec {w})"),
        Sort::Array { index, element } => format!("(Array (_ BitVec {index}) (_ BitVec {element}))"),
    }
}

pub(crate) fn literal(c: &BitvecConst) -> String {
    format!("#b{}", c.to_binary())
}

fn flag(cond: String) -> String {
    format!("(ite {cond} #b1 #b0)")
}

fn zext(by: u32, a: &str) -> String {
    format!("((_ zero_extend {by}) {a})")
}

fn sext(by: u32, a: &str) -> String {
    format!("((_ sign_extend {by}) {a})")
}

fn bit(i: u32, a: &str) -> String {
    format!("((_ extract {i} {i}) {a})")
}

fn bv_width(sort: Sort) -> u32 {
    sort.bv_width().expect("bitvector operand")
}

/// SMT-LIB term for `op` applied to already rendered operands.
///
/// Every result is a bitvector: predicates produce `#b1`/`#b0`. `amount` is
/// the constant value of a rotate amount, when known.
pub(crate) fn op_term(op: Op, args: &[String], sorts: &[Sort], amount: Option<&BitvecConst>) -> String {
    let a = args[0].as_str();
    let b = args.get(1).map(String::as_str).unwrap_or("");
    let simple = |name: &str| format!("({name} {})", args.join(" "));
    match op {
        Op::Not => simple("bvnot"),
        Op::Neg => simple("bvneg"),
        Op::Inc => format!("(bvadd {a} {})", literal(&BitvecConst::one(bv_width(sorts[0])))),
        Op::Dec => format!("(bvsub {a} {})", literal(&BitvecConst::one(bv_width(sorts[0])))),
        Op::Redand => flag(format!("(= {a} {})", literal(&BitvecConst::ones(bv_width(sorts[0]))))),
        Op::Redor => format!("(ite (= {a} {}) #b0 #b1)", literal(&BitvecConst::zero(bv_width(sorts[0])))),
        Op::Redxor => {
            let w = bv_width(sorts[0]);
            if w == 1 {
                String::from(a)
            } else {
                let bits: Vec<String> = (0..w).map(|i| bit(i, a)).collect();
                format!("(bvxor {})", bits.join(" "))
            }
        }
        Op::Sext(by) => sext(by, a),
        Op::Uext(by) => zext(by, a),
        Op::Slice { upper, lower } => format!("((_ extract {upper} {lower}) {a})"),
        Op::And => simple("bvand"),
        Op::Nand => simple("bvnand"),
        Op::Nor => simple("bvnor"),
        Op::Or => simple("bvor"),
        Op::Xor => simple("bvxor"),
        Op::Xnor | Op::Iff => simple("bvxnor"),
        Op::Implies => format!("(bvor (bvnot {a}) {b})"),
        Op::Eq => flag(format!("(= {a} {b})")),
        Op::Neq => format!("(ite (= {a} {b}) #b0 #b1)"),
        Op::Ult => flag(simple("bvult")),
        Op::Ulte => flag(simple("bvule")),
        Op::Ugt => flag(simple("bvugt")),
        Op::Ugte => flag(simple("bvuge")),
        Op::Slt => flag(simple("bvslt")),
        Op::Slte => flag(simple("bvsle")),
        Op::Sgt => flag(simple("bvsgt")),
        Op::Sgte => flag(simple("bvsge")),
        Op::Sll => simple("bvshl"),
        Op::Srl => simple("bvlshr"),
        Op::Sra => simple("bvashr"),
        Op::Rol | Op::Ror => {
            let w = bv_width(sorts[0]);
            let left = op == Op::Rol;
            match amount {
                Some(k) => {
                    let k = k.urem(&BitvecConst::from_u64(w, u64::from(w))).to_u64().unwrap_or(0);
                    format!("((_ {} {k}) {a})", if left { "rotate_left" } else { "rotate_right" })
                }
                None => {
                    let width = literal(&BitvecConst::from_u64(w, u64::from(w)));
                    let r = format!("(bvurem {b} {width})");
                    let (first, second) = if left { ("bvshl", "bvlshr") } else { ("bvlshr", "bvshl") };
                    format!("(bvor ({first} {a} {r}) ({second} {a} (bvsub {width} {r})))")
                }
            }
        }
        Op::Add => simple("bvadd"),
        Op::Sub => simple("bvsub"),
        Op::Mul => simple("bvmul"),
        Op::Udiv => simple("bvudiv"),
        Op::Sdiv => simple("bvsdiv"),
        Op::Urem => simple("bvurem"),
        Op::Srem => simple("bvsrem"),
        Op::Smod => simple("bvsmod"),
        Op::Concat => simple("concat"),
        Op::Uaddo => {
            let w = bv_width(sorts[0]);
            bit(w, &format!("(bvadd {} {})", zext(1, a), zext(1, b)))
        }
        Op::Usubo => {
            let w = bv_width(sorts[0]);
            bit(w, &format!("(bvsub {} {})", zext(1, a), zext(1, b)))
        }
        Op::Saddo | Op::Ssubo => {
            let w = bv_width(sorts[0]);
            let name = if op == Op::Saddo { "bvadd" } else { "bvsub" };
            let r = format!("({name} {} {})", sext(1, a), sext(1, b));
            format!("(bvxor {} {})", bit(w, &r), bit(w - 1, &r))
        }
        Op::Umulo => {
            let w = bv_width(sorts[0]);
            let p = format!("(bvmul {} {})", zext(w, a), zext(w, b));
            format!("(ite (= ((_ extract {} {w}) {p}) {}) #b0 #b1)", 2 * w - 1, literal(&BitvecConst::zero(w)))
        }
        Op::Smulo => {
            let w = bv_width(sorts[0]);
            let p = format!("(bvmul {} {})", sext(w, a), sext(w, b));
            format!("(ite (= {p} {}) #b0 #b1)", sext(w, &format!("((_ extract {} 0) {p})", w - 1)))
        }
        Op::Sdivo => {
            let w = bv_width(sorts[0]);
            format!(
                "(ite (and (= {a} {}) (= {b} {})) #b1 #b0)",
                literal(&BitvecConst::int_min(w)),
                literal(&BitvecConst::ones(w))
            )
        }
        Op::Ite => format!("(ite (= {a} #b1) {b} {})", args[2]),
        Op::Read => simple("select"),
        Op::Write => simple("store"),
    }
}
