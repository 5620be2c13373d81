//! Arbitrary-width bitvector values with SMT-LIB `FixedSizeBitVectors`
//! semantics.
//!
//! Every operation is total. Division, remainder and modulus by zero follow
//! the SMT-LIB definitions, which is also what BTOR2 prescribes.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::sort::Width;

/// A bitvector constant: an explicit width and an unsigned magnitude
/// strictly below `2^width`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitvecConst {
    width: Width,
    value: BigUint,
}

fn modulus(width: Width) -> BigUint {
    BigUint::one() << width as usize
}

fn mask(width: Width) -> BigUint {
    modulus(width) - 1u32
}

impl BitvecConst {
    /// Builds a constant, reducing `value` modulo `2^width`.
    pub fn new(width: Width, value: BigUint) -> Self {
        assert!(width > 0, "bitvector width must be positive");
        let value = if value.bits() > u64::from(width) { value & mask(width) } else { value };
        BitvecConst { width, value }
    }

    pub fn from_u64(width: Width, value: u64) -> Self {
        Self::new(width, BigUint::from(value))
    }

    pub fn from_bool(b: bool) -> Self {
        Self::from_u64(1, b as u64)
    }

    pub fn zero(width: Width) -> Self {
        Self::new(width, BigUint::zero())
    }

    pub fn one(width: Width) -> Self {
        Self::from_u64(width, 1)
    }

    pub fn ones(width: Width) -> Self {
        Self::new(width, mask(width))
    }

    /// The most negative two's-complement value, `100..0`.
    pub fn int_min(width: Width) -> Self {
        Self::new(width, BigUint::one() << (width as usize - 1))
    }

    pub fn width(&self) -> Width {
        self.width
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_ones(&self) -> bool {
        self.value.bits() == u64::from(self.width) && self.value.count_ones() == u64::from(self.width)
    }

    /// True iff this is the one-bit value `1`.
    pub fn is_true(&self) -> bool {
        self.width == 1 && !self.value.is_zero()
    }

    pub fn bit(&self, i: Width) -> bool {
        self.value.bit(u64::from(i))
    }

    pub fn msb(&self) -> bool {
        self.bit(self.width - 1)
    }

    /// Binary digits, most significant first, exactly `width` characters.
    pub fn to_binary(&self) -> String {
        (0..self.width).rev().map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }

    /// Parses a string of exactly `width` binary digits (no prefix).
    pub fn from_binary(bits: &str) -> Option<Self> {
        if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        let value = BigUint::parse_bytes(bits.as_bytes(), 2)?;
        Some(Self::new(bits.len() as Width, value))
    }

    pub fn to_decimal(&self) -> String {
        self.value.to_str_radix(10)
    }

    fn same(&self, other: &Self) {
        debug_assert_eq!(self.width, other.width, "operand widths differ");
    }

    fn wrap(&self, value: BigUint) -> Self {
        Self::new(self.width, value)
    }

    // ---- unary ----

    pub fn not(&self) -> Self {
        BitvecConst { width: self.width, value: &self.value ^ mask(self.width) }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BitvecConst { width: self.width, value: modulus(self.width) - &self.value }
    }

    pub fn inc(&self) -> Self {
        self.wrap(&self.value + 1u32)
    }

    pub fn dec(&self) -> Self {
        self.add(&Self::ones(self.width))
    }

    pub fn redand(&self) -> Self {
        Self::from_bool(self.is_ones())
    }

    pub fn redor(&self) -> Self {
        Self::from_bool(!self.is_zero())
    }

    pub fn redxor(&self) -> Self {
        Self::from_bool(self.value.count_ones() % 2 == 1)
    }

    pub fn uext(&self, by: Width) -> Self {
        BitvecConst { width: self.width + by, value: self.value.clone() }
    }

    pub fn sext(&self, by: Width) -> Self {
        if by == 0 || !self.msb() {
            return self.uext(by);
        }
        let fill = mask(by) << self.width as usize;
        BitvecConst { width: self.width + by, value: &self.value | fill }
    }

    /// Bits `upper..=lower`, bit 0 being the least significant.
    pub fn slice(&self, upper: Width, lower: Width) -> Self {
        debug_assert!(upper < self.width && lower <= upper);
        Self::new(upper - lower + 1, &self.value >> lower as usize)
    }

    // ---- bitwise ----

    pub fn and(&self, o: &Self) -> Self {
        self.same(o);
        BitvecConst { width: self.width, value: &self.value & &o.value }
    }

    pub fn or(&self, o: &Self) -> Self {
        self.same(o);
        BitvecConst { width: self.width, value: &self.value | &o.value }
    }

    pub fn xor(&self, o: &Self) -> Self {
        self.same(o);
        BitvecConst { width: self.width, value: &self.value ^ &o.value }
    }

    pub fn concat(&self, low: &Self) -> Self {
        BitvecConst { width: self.width + low.width, value: (&self.value << low.width as usize) | &low.value }
    }

    // ---- comparisons ----

    pub fn ucmp(&self, o: &Self) -> Ordering {
        self.same(o);
        self.value.cmp(&o.value)
    }

    pub fn scmp(&self, o: &Self) -> Ordering {
        self.same(o);
        match (self.msb(), o.msb()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.value.cmp(&o.value),
        }
    }

    // ---- arithmetic ----

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        self.wrap(&self.value + &o.value)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same(o);
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        self.wrap(&self.value * &o.value)
    }

    /// Unsigned division; `x / 0` is all ones.
    pub fn udiv(&self, o: &Self) -> Self {
        self.same(o);
        if o.is_zero() {
            return Self::ones(self.width);
        }
        BitvecConst { width: self.width, value: &self.value / &o.value }
    }

    /// Unsigned remainder; `x % 0` is `x`.
    pub fn urem(&self, o: &Self) -> Self {
        self.same(o);
        if o.is_zero() {
            return self.clone();
        }
        BitvecConst { width: self.width, value: &self.value % &o.value }
    }

    fn abs(&self) -> Self {
        if self.msb() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Signed division rounding toward zero, defined through `udiv` on the
    /// magnitudes exactly like `bvsdiv`.
    pub fn sdiv(&self, o: &Self) -> Self {
        let q = self.abs().udiv(&o.abs());
        if self.msb() != o.msb() {
            q.neg()
        } else {
            q
        }
    }

    /// Signed remainder; the sign follows the dividend (`bvsrem`).
    pub fn srem(&self, o: &Self) -> Self {
        let r = self.abs().urem(&o.abs());
        if self.msb() {
            r.neg()
        } else {
            r
        }
    }

    /// Signed modulus; the sign follows the divisor (`bvsmod`).
    pub fn smod(&self, o: &Self) -> Self {
        let u = self.abs().urem(&o.abs());
        if u.is_zero() {
            return u;
        }
        match (self.msb(), o.msb()) {
            (false, false) => u,
            (true, false) => u.neg().add(o),
            (false, true) => u.add(o),
            (true, true) => u.neg(),
        }
    }

    // ---- shifts ----

    /// Shift amount as a `usize` if it is below the width, `None` otherwise.
    fn shift_amount(&self, amount: &Self) -> Option<usize> {
        match amount.value.to_u64() {
            Some(a) if a < u64::from(self.width) => Some(a as usize),
            _ => None,
        }
    }

    pub fn sll(&self, amount: &Self) -> Self {
        self.same(amount);
        match self.shift_amount(amount) {
            Some(a) => self.wrap(&self.value << a),
            None => Self::zero(self.width),
        }
    }

    pub fn srl(&self, amount: &Self) -> Self {
        self.same(amount);
        match self.shift_amount(amount) {
            Some(a) => BitvecConst { width: self.width, value: &self.value >> a },
            None => Self::zero(self.width),
        }
    }

    pub fn sra(&self, amount: &Self) -> Self {
        self.same(amount);
        if !self.msb() {
            return self.srl(amount);
        }
        match self.shift_amount(amount) {
            Some(a) => {
                let fill = mask(a as Width) << (self.width as usize - a);
                BitvecConst { width: self.width, value: (&self.value >> a) | fill }
            }
            None => Self::ones(self.width),
        }
    }

    fn rotate_amount(&self, amount: &Self) -> usize {
        let w = BigUint::from(self.width);
        (&amount.value % w).to_usize().unwrap_or(0)
    }

    pub fn rol(&self, amount: &Self) -> Self {
        self.same(amount);
        let a = self.rotate_amount(amount);
        if a == 0 {
            return self.clone();
        }
        let hi = &self.value << a;
        let lo = &self.value >> (self.width as usize - a);
        self.wrap(hi | lo)
    }

    pub fn ror(&self, amount: &Self) -> Self {
        self.same(amount);
        let a = self.rotate_amount(amount);
        if a == 0 {
            return self.clone();
        }
        let lo = &self.value >> a;
        let hi = &self.value << (self.width as usize - a);
        self.wrap(hi | lo)
    }

    // ---- overflow detection, via widening ----

    pub fn uaddo(&self, o: &Self) -> bool {
        self.uext(1).add(&o.uext(1)).msb()
    }

    pub fn saddo(&self, o: &Self) -> bool {
        let sum = self.sext(1).add(&o.sext(1));
        sum.bit(self.width) != sum.bit(self.width - 1)
    }

    pub fn usubo(&self, o: &Self) -> bool {
        self.uext(1).sub(&o.uext(1)).msb()
    }

    pub fn ssubo(&self, o: &Self) -> bool {
        let diff = self.sext(1).sub(&o.sext(1));
        diff.bit(self.width) != diff.bit(self.width - 1)
    }

    pub fn umulo(&self, o: &Self) -> bool {
        let w = self.width;
        let p = self.uext(w).mul(&o.uext(w));
        !p.slice(2 * w - 1, w).is_zero()
    }

    pub fn smulo(&self, o: &Self) -> bool {
        let w = self.width;
        let p = self.sext(w).mul(&o.sext(w));
        p.slice(w - 1, 0).sext(w) != p
    }

    pub fn sdivo(&self, o: &Self) -> bool {
        *self == Self::int_min(self.width) && o.is_ones()
    }
}

impl fmt::Debug for BitvecConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#b{}", self.to_binary())
    }
}

impl fmt::Display for BitvecConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary())
    }
}

/// Little-endian 32-bit limbs, used when drawing random values.
pub(crate) fn from_limbs(width: Width, limbs: Vec<u32>) -> BitvecConst {
    BitvecConst::new(width, BigUint::new(limbs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(w: Width, v: u64) -> BitvecConst {
        BitvecConst::from_u64(w, v)
    }

    #[test]
    fn construction_reduces_modulo_width() {
        assert_eq!(bv(4, 17), bv(4, 1));
        assert_eq!(BitvecConst::ones(4).to_binary(), "1111");
        assert!(BitvecConst::ones(130).is_ones());
        assert!(!bv(4, 7).is_ones());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(bv(4, 5).udiv(&bv(4, 0)), bv(4, 15));
        assert_eq!(bv(4, 5).urem(&bv(4, 0)), bv(4, 5));
        // -3 / 0 = 1, 3 / 0 = -1
        assert_eq!(bv(4, 13).sdiv(&bv(4, 0)), bv(4, 1));
        assert_eq!(bv(4, 3).sdiv(&bv(4, 0)), bv(4, 15));
        assert_eq!(bv(4, 13).srem(&bv(4, 0)), bv(4, 13));
        assert_eq!(bv(4, 13).smod(&bv(4, 0)), bv(4, 13));
    }

    #[test]
    fn smod_sign_follows_divisor() {
        // -7 smod 3 = 2
        assert_eq!(bv(4, 0b1001).smod(&bv(4, 0b0011)), bv(4, 0b0010));
        // 7 smod -3 = -2
        assert_eq!(bv(4, 7).smod(&bv(4, 13)), bv(4, 14));
    }

    #[test]
    fn shifts_saturate() {
        assert_eq!(bv(4, 0b1001).sll(&bv(4, 4)), bv(4, 0));
        assert_eq!(bv(4, 0b1001).srl(&bv(4, 9)), bv(4, 0));
        assert_eq!(bv(4, 0b1001).sra(&bv(4, 1)), bv(4, 0b1100));
        assert_eq!(bv(4, 0b1001).sra(&bv(4, 15)), bv(4, 0b1111));
        assert_eq!(bv(4, 0b1001).rol(&bv(4, 5)), bv(4, 0b0011));
        assert_eq!(bv(4, 0b1001).ror(&bv(4, 1)), bv(4, 0b1100));
    }

    #[test]
    fn slice_and_extension() {
        assert_eq!(bv(4, 0b1101).slice(2, 1), bv(2, 0b10));
        assert_eq!(bv(4, 0b1101).sext(2), bv(6, 0b111101));
        assert_eq!(bv(4, 0b1101).uext(2), bv(6, 0b001101));
        assert_eq!(bv(2, 0b10).concat(&bv(3, 0b011)), bv(5, 0b10011));
    }

    #[test]
    fn overflow_flags() {
        assert!(bv(4, 15).uaddo(&bv(4, 1)));
        assert!(bv(4, 7).saddo(&bv(4, 1)));
        assert!(!bv(4, 15).saddo(&bv(4, 1)));
        assert!(bv(4, 1).usubo(&bv(4, 2)));
        assert!(bv(4, 8).ssubo(&bv(4, 1)));
        assert!(bv(4, 4).umulo(&bv(4, 4)));
        assert!(bv(4, 4).smulo(&bv(4, 2)));
        assert!(!bv(4, 12).smulo(&bv(4, 2)));
        assert!(bv(4, 8).sdivo(&bv(4, 15)));
    }

    #[test]
    fn binary_text() {
        let v = BitvecConst::from_binary("0011").unwrap();
        assert_eq!(v, bv(4, 3));
        assert_eq!(v.to_binary(), "0011");
        assert!(BitvecConst::from_binary("012").is_none());
        assert!(BitvecConst::from_binary("").is_none());
    }
}
