use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigUint;

use crate::bv::BitvecConst;
use crate::sort::{Sort, Width};

/// An array value: a default element plus explicit overrides.
///
/// Overrides equal to the default are never stored. Equality is
/// extensional: two arrays are equal exactly when they agree on every index.
#[derive(Clone)]
pub struct ArrayValue {
    index_width: Width,
    default: BitvecConst,
    overrides: BTreeMap<BigUint, BitvecConst>,
}

impl ArrayValue {
    /// An array holding `element` at every index.
    pub fn filled(index_width: Width, element: BitvecConst) -> Self {
        ArrayValue { index_width, default: element, overrides: BTreeMap::new() }
    }

    pub fn index_width(&self) -> Width {
        self.index_width
    }

    pub fn element_width(&self) -> Width {
        self.default.width()
    }

    pub fn sort(&self) -> Sort {
        Sort::Array { index: self.index_width, element: self.default.width() }
    }

    pub fn default_element(&self) -> &BitvecConst {
        &self.default
    }

    /// Explicit entries, by index magnitude.
    pub fn overrides(&self) -> impl Iterator<Item = (&BigUint, &BitvecConst)> {
        self.overrides.iter()
    }

    pub fn read(&self, index: &BitvecConst) -> BitvecConst {
        debug_assert_eq!(index.width(), self.index_width);
        self.overrides.get(index.value()).unwrap_or(&self.default).clone()
    }

    pub fn write(&self, index: &BitvecConst, element: BitvecConst) -> ArrayValue {
        let mut out = self.clone();
        out.store(index, element);
        out
    }

    pub fn store(&mut self, index: &BitvecConst, element: BitvecConst) {
        debug_assert_eq!(element.width(), self.default.width());
        if element == self.default {
            self.overrides.remove(index.value());
        } else {
            self.overrides.insert(index.value().clone(), element);
        }
    }
}

impl PartialEq for ArrayValue {
    fn eq(&self, other: &Self) -> bool {
        if self.index_width != other.index_width || self.default.width() != other.default.width() {
            return false;
        }
        let mut covered = 0u128;
        for key in self.overrides.keys().chain(other.overrides.keys().filter(|k| !self.overrides.contains_key(*k))) {
            let a = self.overrides.get(key).unwrap_or(&self.default);
            let b = other.overrides.get(key).unwrap_or(&other.default);
            if a != b {
                return false;
            }
            covered += 1;
        }
        let domain_covered = self.index_width < 128 && covered == 1u128 << self.index_width;
        domain_covered || self.default == other.default
    }
}

impl Eq for ArrayValue {}

impl fmt::Debug for ArrayValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[* -> {:?}", self.default)?;
        for (i, v) in &self.overrides {
            write!(f, ", {i} -> {v:?}")?;
        }
        f.write_str("]")
    }
}

/// A concrete value of any sort.
#[derive(Clone, PartialEq, Eq)]
pub enum Value {
    Bv(BitvecConst),
    Array(ArrayValue),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Bv(b) => Sort::Bitvec(b.width()),
            Value::Array(a) => a.sort(),
        }
    }

    pub fn as_bv(&self) -> Option<&BitvecConst> {
        match self {
            Value::Bv(b) => Some(b),
            Value::Array(_) => None,
        }
    }

    pub fn as_array(&self) -> Option<&ArrayValue> {
        match self {
            Value::Array(a) => Some(a),
            Value::Bv(_) => None,
        }
    }

    /// All-zero value of the sort.
    pub fn zero(sort: Sort) -> Value {
        match sort {
            Sort::Bitvec(w) => Value::Bv(BitvecConst::zero(w)),
            Sort::Array { index, element } => Value::Array(ArrayValue::filled(index, BitvecConst::zero(element))),
        }
    }
}

impl From<BitvecConst> for Value {
    fn from(b: BitvecConst) -> Self {
        Value::Bv(b)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bv(b) => write!(f, "{b:?}"),
            Value::Array(a) => write!(f, "{a:?}"),
        }
    }
}
