use alloc::string::String;

use num_bigint::BigUint;
use thiserror::Error;

use super::node::ConstKind;
use crate::bv::BitvecConst;
use crate::sort::Width;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("`{literal}` is not a valid {radix} literal")]
    BadDigits { literal: String, radix: &'static str },
    #[error("literal `{literal}` does not fit in {width} bits")]
    TooWide { literal: String, width: Width },
    #[error("`{0}` takes no literal")]
    Unexpected(&'static str),
}

/// Decodes the value of a `const`-family line at the given width.
///
/// Decimal literals are reduced modulo `2^width`, so negative decimals come
/// out in two's complement. Binary and hex literals must fit the width.
pub fn parse_const_literal(kind: ConstKind, literal: &str, width: Width) -> Result<BitvecConst, LiteralError> {
    let bad = |radix| LiteralError::BadDigits { literal: literal.into(), radix };
    match kind {
        ConstKind::Zero | ConstKind::One | ConstKind::Ones if !literal.is_empty() => {
            Err(LiteralError::Unexpected(kind.keyword()))
        }
        ConstKind::Zero => Ok(BitvecConst::zero(width)),
        ConstKind::One => Ok(BitvecConst::one(width)),
        ConstKind::Ones => Ok(BitvecConst::ones(width)),
        ConstKind::Binary => {
            if literal.is_empty() || !literal.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad("binary"));
            }
            if literal.len() > width as usize {
                return Err(LiteralError::TooWide { literal: literal.into(), width });
            }
            let v = BigUint::parse_bytes(literal.as_bytes(), 2).ok_or_else(|| bad("binary"))?;
            Ok(BitvecConst::new(width, v))
        }
        ConstKind::Hex => {
            if literal.is_empty() || !literal.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(bad("hexadecimal"));
            }
            let v = BigUint::parse_bytes(literal.as_bytes(), 16).ok_or_else(|| bad("hexadecimal"))?;
            if v.bits() > u64::from(width) || literal.len() > (width as usize).div_ceil(4) {
                return Err(LiteralError::TooWide { literal: literal.into(), width });
            }
            Ok(BitvecConst::new(width, v))
        }
        ConstKind::Decimal => {
            let (negative, digits) = match literal.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, literal),
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("decimal"));
            }
            let v = BigUint::parse_bytes(digits.as_bytes(), 10).ok_or_else(|| bad("decimal"))?;
            let v = BitvecConst::new(width, v);
            Ok(if negative { v.neg() } else { v })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(kind: ConstKind, lit: &str, w: Width) -> String {
        parse_const_literal(kind, lit, w).unwrap().to_binary()
    }

    #[test]
    fn literal_examples() {
        assert_eq!(bin(ConstKind::Decimal, "3", 4), "0011");
        assert_eq!(bin(ConstKind::Ones, "", 4), "1111");
        assert_eq!(bin(ConstKind::Decimal, "-1", 4), "1111");
        // 2^4 - 6 = 10
        assert_eq!(bin(ConstKind::Decimal, "-6", 4), "1010");
        assert_eq!(bin(ConstKind::Decimal, "17", 4), "0001");
        assert_eq!(bin(ConstKind::Binary, "101", 4), "0101");
        assert_eq!(bin(ConstKind::Hex, "a", 4), "1010");
        assert_eq!(bin(ConstKind::Hex, "1F", 5), "11111");
        assert_eq!(bin(ConstKind::Zero, "", 3), "000");
        assert_eq!(bin(ConstKind::One, "", 3), "001");
    }

    #[test]
    fn literal_errors() {
        assert!(matches!(parse_const_literal(ConstKind::Binary, "102", 4), Err(LiteralError::BadDigits { .. })));
        assert!(matches!(parse_const_literal(ConstKind::Binary, "10101", 4), Err(LiteralError::TooWide { .. })));
        assert!(matches!(parse_const_literal(ConstKind::Hex, "1f", 4), Err(LiteralError::TooWide { .. })));
        assert!(matches!(parse_const_literal(ConstKind::Hex, "g", 4), Err(LiteralError::BadDigits { .. })));
        assert!(matches!(parse_const_literal(ConstKind::Decimal, "-", 4), Err(LiteralError::BadDigits { .. })));
        assert!(parse_const_literal(ConstKind::Ones, "1", 4).is_err());
    }
}
