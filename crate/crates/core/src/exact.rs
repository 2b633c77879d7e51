//! Exact rational arithmetic and dyadic (m-bit) values.
//!
//! Every quantity in this crate — local discrepancies, squared L2
//! discrepancies, integrals, lemma sums — is carried as an [`ExactRational`].
//! Nothing is ever rounded; equality assertions throughout the test suite are
//! exact value equality.
//!
//! An m-bit value is an element of the dyadic grid
//! `Q(2^m) = {0, 1/2^m, ..., (2^m-1)/2^m}`; `Q*(2^m)` excludes 0.
//! [`DyadicRational`] represents `a/2^m` together with its digit view
//! `a = α_1/2 + ... + α_m/2^m` (MSB first). The value one (`a = 2^m`) is
//! representable solely so that rounding up near the top of the unit interval
//! has somewhere to go; digit-indexed operations reject it.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational, always stored normalized
/// (`gcd(|numerator|, denominator) = 1`, positive denominator).
///
/// [`num_rational::BigRational`] already guarantees exactly the invariants we
/// need, so it is used directly rather than wrapped.
pub type ExactRational = num_rational::BigRational;

/// Largest supported level for exhaustive dyadic operations.
///
/// Grids have `2^m - 1` elements and several sweeps cost `Θ(4^m)`;
/// denominators reach `9·2^(4m)`. 16 keeps every internal integer
/// accumulation comfortably inside `i128` (checked, see `l2`/`oracles`)
/// while covering far more than the closed forms need for verification.
pub const MAX_LEVEL: u32 = 16;

/// `2^m` as a machine integer. Callers must have checked `m <= MAX_LEVEL`.
#[inline]
pub(crate) fn pow2(m: u32) -> u64 {
    debug_assert!(m <= MAX_LEVEL + 1);
    1u64 << m
}

pub(crate) fn check_level(m: u32) -> Result<()> {
    if (1..=MAX_LEVEL).contains(&m) {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange(m))
    }
}

/// Small-integer rational constructor; `d` must be nonzero.
pub fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` as a rational, with `k` possibly negative.
pub fn pow2_rat(k: i32) -> ExactRational {
    let one = BigInt::one();
    if k >= 0 {
        ExactRational::from_integer(one << k as usize)
    } else {
        ExactRational::new(one, BigInt::one() << (-k) as usize)
    }
}

/// Distance to the nearest integer, `‖x‖ = min_{z ∈ Z} |x − z|`.
///
/// The result lies in `[0, 1/2]` and inherits exactness from the input.
pub fn nearest_int_distance(x: &ExactRational) -> ExactRational {
    let frac = x - x.floor();
    let complement = ExactRational::one() - &frac;
    if frac <= complement {
        frac
    } else {
        complement
    }
}

/// A dyadic rational `a/2^m` with `0 <= a <= 2^m` and `1 <= m <= MAX_LEVEL`.
///
/// Digits are indexed `1..=m` MSB first: `a/2^m = Σ_j α_j 2^{-j}`. Index
/// `m + 1` is the sentinel digit, always 0; it absorbs the `j(u) = 0` branch
/// of the local-discrepancy formula without special-casing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicRational {
    level: u32,
    num: u64,
}

impl DyadicRational {
    pub fn new(num: u64, level: u32) -> Result<Self> {
        check_level(level)?;
        if num > pow2(level) {
            return Err(Error::OutOfRange(format!(
                "numerator {num} exceeds 2^{level}"
            )));
        }
        Ok(DyadicRational { level, num })
    }

    /// Internal constructor for values already known to be in range.
    #[inline]
    pub(crate) fn new_unchecked(num: u64, level: u32) -> Self {
        debug_assert!(level >= 1 && level <= MAX_LEVEL && num <= pow2(level));
        DyadicRational { level, num }
    }

    pub fn zero(level: u32) -> Result<Self> {
        Self::new(0, level)
    }

    /// The value one, `2^m/2^m`. Exists only as the capped corner for
    /// round-up near 1; it has no digit view.
    pub fn one(level: u32) -> Result<Self> {
        check_level(level)?;
        Ok(DyadicRational {
            level,
            num: pow2(level),
        })
    }

    #[inline]
    pub fn numerator(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.num == pow2(self.level)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Digit `α_j` for `j ∈ 1..=m`, plus the sentinel `α_{m+1} = 0`.
    ///
    /// Panics on the value one or an out-of-range index; both indicate a
    /// caller bug, not a data condition.
    #[inline]
    pub fn digit(&self, j: u32) -> u8 {
        assert!(!self.is_one(), "digit access on the unit dyadic value");
        assert!(j >= 1 && j <= self.level + 1, "digit index {j} out of range");
        if j == self.level + 1 {
            0
        } else {
            ((self.num >> (self.level - j)) & 1) as u8
        }
    }

    pub fn value(&self) -> ExactRational {
        ExactRational::new(BigInt::from(self.num), BigInt::from(pow2(self.level)))
    }
}

impl std::fmt::Display for DyadicRational {
    /// Renders as the unreduced grid fraction, e.g. `3/8` at level 3 and
    /// `0/2`, `1/2` at level 1.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, pow2(self.level))
    }
}

/// The grid `Q*(2^m) = {1/2^m, ..., (2^m−1)/2^m}` in increasing order.
pub fn mbit_grid(m: u32) -> Result<Vec<DyadicRational>> {
    check_level(m)?;
    Ok((1..pow2(m))
        .map(|a| DyadicRational::new_unchecked(a, m))
        .collect())
}

/// Smallest m-bit value `>= x` for `x ∈ (0, 1]`, capped at one for
/// `x > 1 − 2^{−m}`.
pub fn round_up_mbit(x: &ExactRational, m: u32) -> Result<DyadicRational> {
    check_level(m)?;
    if !x.is_positive() || x > &ExactRational::one() {
        return Err(Error::OutOfRange(format!("{x} not in (0, 1]")));
    }
    let scaled = (x * pow2_rat(m as i32)).ceil();
    let (sign, digits) = scaled.to_integer().to_u64_digits();
    debug_assert_eq!(sign, Sign::Plus);
    debug_assert_eq!(digits.len(), 1);
    Ok(DyadicRational::new_unchecked(digits[0], m))
}

/// True iff `x` lies on the dyadic grid `Q(2^m)` (so `0 <= x < 1` and
/// `x·2^m` is an integer). Returns the numerator when it does.
pub fn as_mbit(x: &ExactRational, m: u32) -> Option<u64> {
    if x.is_negative() || x >= &ExactRational::one() {
        return None;
    }
    let scaled = x * pow2_rat(m as i32);
    if !scaled.is_integer() {
        return None;
    }
    let (sign, digits) = scaled.to_integer().to_u64_digits();
    match (sign, digits.len()) {
        (Sign::NoSign, 0) => Some(0),
        (Sign::Plus, 1) => Some(digits[0]),
        _ => None,
    }
}
