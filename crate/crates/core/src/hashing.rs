//! Jenkins one-at-a-time hashing and the hash-to-dimension mapping.
//!
//! The hash is computed on a signed 32-bit accumulator: additions and left
//! shifts wrap, and `>>` is an arithmetic (sign-propagating) shift. This
//! differs from the common unsigned variant whenever an intermediate value
//! has its top bit set, so the two must not be mixed.

use crate::error::{Error, Result};

/// A 32-bit Jenkins hash value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HashCode(pub i32);

/// Jenkins one-at-a-time hash of `key`. Bytes are widened as unsigned values.
pub fn jenkins_hash(key: &[u8]) -> HashCode {
    let mut hash: i32 = 0;
    for &byte in key {
        hash = hash.wrapping_add(i32::from(byte));
        hash = hash.wrapping_add(hash << 10);
        hash ^= hash >> 6;
    }
    hash = hash.wrapping_add(hash << 3);
    hash ^= hash >> 11;
    hash = hash.wrapping_add(hash << 15);
    HashCode(hash)
}

/// Maps a hash code onto `[0, m)` as `abs(hash % m)`.
///
/// The remainder takes the sign of the hash (truncated division) and the
/// absolute value is taken in 64 bits, so `i32::MIN` is well defined.
pub fn bucket(hash: HashCode, m: usize) -> usize {
    debug_assert!(m >= 1);
    (i64::from(hash.0) % m as i64).unsigned_abs() as usize
}

/// Dimension selected by a context element for an `m`-dimensional model.
pub fn dimension_index(context: &[u8], m: i64) -> Result<usize> {
    if m < 1 {
        return Err(Error::InvalidDimensionality(m));
    }
    Ok(bucket(jenkins_hash(context), m as usize))
}

/// Validated dimensionality, so hot loops can skip the `m >= 1` check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dim(usize);

impl Dim {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDimensionality(0));
        }
        Ok(Dim(m))
    }

    pub fn get(self) -> usize {
        self.0
    }

    #[inline]
    pub fn index_of(self, context: &[u8]) -> usize {
        bucket(jenkins_hash(context), self.0)
    }
}
