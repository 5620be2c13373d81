use core::fmt;

/// Width of a bitvector sort in bits. Always at least one.
pub type Width = u32;

/// A BTOR2 sort.
///
/// Arrays map a bitvector index sort to a bitvector element sort; nested
/// arrays do not exist in BTOR2, so both sides are stored as plain widths.
/// Structurally equal sorts compare equal, which is all the deduplication the
/// rest of the crate relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Bitvec(Width),
    Array { index: Width, element: Width },
}

impl Sort {
    pub const BOOL: Sort = Sort::Bitvec(1);

    pub fn is_bool(&self) -> bool {
        *self == Sort::BOOL
    }

    pub fn is_array(&self) -> bool {
        matches!(self, Sort::Array { .. })
    }

    /// Width of a bitvector sort, `None` for arrays.
    pub fn bv_width(&self) -> Option<Width> {
        match self {
            Sort::Bitvec(w) => Some(*w),
            Sort::Array { .. } => None,
        }
    }

    /// Number of bits needed to describe an arbitrary value of this sort.
    /// Saturates for arrays whose full content does not fit in a `u64`.
    pub fn value_bits(&self) -> u64 {
        match *self {
            Sort::Bitvec(w) => u64::from(w),
            Sort::Array { index, element } => {
                if index >= 63 {
                    u64::MAX
                } else {
                    (1u64 << index).saturating_mul(u64::from(element))
                }
            }
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bitvec(w) => write!(f, "bv{w}"),
            Sort::Array { index, element } => write!(f, "array[bv{index} -> bv{element}]"),
        }
    }
}
