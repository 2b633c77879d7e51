//! Shifted Hammersley point sets and their symmetrizations.
//!
//! `hammersley(m, σ)` produces the 2^m points
//! `(t_m/2 + ... + t_1/2^m, s_1/2 + ... + s_m/2^m)` over all digit vectors
//! `(t_1, ..., t_m) ∈ {0,1}^m`, with `s_j = t_j ⊕ σ_j`. Equivalently, point
//! `n` has x-numerator `bitreverse_m(n)` and y-numerator `n ⊕ σ`, which is
//! how the construction is implemented.
//!
//! Two symmetrizations are provided: the union with the complementary shift
//! (all points distinct), and the union with the exact reflection
//! `y ↦ 1 − y` (a multiset; points may coincide).

use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use crate::error::{Error, Result};
use crate::exact::{check_level, pow2, DyadicRational};

/// A dyadic digit shift `σ ∈ {0,1}^m`, applied to y-digits via XOR.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shift {
    bits: Vec<u8>,
}

impl Shift {
    /// Builds a shift from explicit bits (index 0 holds `σ_1`).
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        check_level(bits.len() as u32)?;
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::OutOfRange(format!("shift bit {b} not in {{0,1}}")));
        }
        Ok(Shift { bits })
    }

    pub fn zeros(m: u32) -> Result<Self> {
        Self::new(vec![0; m as usize])
    }

    pub fn ones(m: u32) -> Result<Self> {
        Self::new(vec![1; m as usize])
    }

    /// `(0, 1, 0, 1, ...)`, starting with 0.
    pub fn alternating(m: u32) -> Result<Self> {
        Self::new((0..m).map(|j| (j % 2) as u8).collect())
    }

    /// Deterministic pseudo-random shift for a given seed.
    pub fn random(m: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample(m, &mut rng)
    }

    pub fn sample<R: Rng>(m: u32, rng: &mut R) -> Result<Self> {
        check_level(m)?;
        Self::new((0..m).map(|_| rng.random_range(0..=1u8)).collect())
    }

    /// Parses a bit string such as `"01010101"`.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::OutOfRange(format!("invalid shift character {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::new(bits)
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.bits.len() as u32
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    /// `σ_j`, 1-based.
    #[inline]
    pub fn bit(&self, j: u32) -> u8 {
        self.bits[(j - 1) as usize]
    }

    /// σ* — every bit flipped.
    pub fn complement(&self) -> Shift {
        Shift {
            bits: self.bits.iter().map(|b| b ^ 1).collect(),
        }
    }

    /// Number of zero components; the `l` parameter of the closed forms.
    pub fn zero_count(&self) -> u32 {
        self.bits.iter().filter(|&&b| b == 0).count() as u32
    }

    /// The shift packed as an integer `Σ_j σ_j 2^{m−j}` (σ_1 is the MSB),
    /// so that applying the shift to a y-numerator is a single XOR.
    #[inline]
    pub fn as_int(&self) -> u64 {
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// All `2^m` shifts of length `m`, in increasing packed-integer order.
    pub fn all(m: u32) -> Result<impl Iterator<Item = Shift>> {
        check_level(m)?;
        Ok((0..pow2(m)).map(move |v| Shift {
            bits: (0..m).map(|j| ((v >> (m - 1 - j)) & 1) as u8).collect(),
        }))
    }
}

impl std::fmt::Display for Shift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A finite multiset of points in the unit square with exact dyadic
/// coordinates, all at a common level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    level: u32,
    points: Vec<(DyadicRational, DyadicRational)>,
}

impl PointSet {
    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Cardinality counted with multiplicity.
    #[inline]
    pub fn size(&self) -> u64 {
        self.points.len() as u64
    }

    #[inline]
    pub fn points(&self) -> &[(DyadicRational, DyadicRational)] {
        &self.points
    }

    /// Coordinate numerators, in point order. Internal fast path for the
    /// integerized pair sums.
    pub(crate) fn numerators(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.points
            .iter()
            .map(|(x, y)| (x.numerator(), y.numerator()))
    }

    /// Multiset of points as sorted numerator pairs, for set/multiset
    /// equality checks in tests.
    pub fn sorted_numerators(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<_> = self.numerators().collect();
        v.sort_unstable();
        v
    }
}

/// Which of the three constructions to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Hammersley,
    Symmetrized,
    ReflectedSymmetrized,
}

impl SetKind {
    pub fn construct(self, m: u32, shift: &Shift) -> Result<PointSet> {
        match self {
            SetKind::Hammersley => hammersley(m, shift),
            SetKind::Symmetrized => symmetrized(m, shift),
            SetKind::ReflectedSymmetrized => reflected_symmetrized(m, shift),
        }
    }
}

pub(crate) fn check_shift(m: u32, shift: &Shift) -> Result<()> {
    check_level(m)?;
    if shift.len() != m {
        return Err(Error::ShiftLength {
            expected: m,
            got: shift.len() as usize,
        });
    }
    Ok(())
}

#[inline]
fn bit_reverse(n: u64, m: u32) -> u64 {
    let mut out = 0u64;
    for j in 0..m {
        out |= ((n >> j) & 1) << (m - 1 - j);
    }
    out
}

/// The shifted Hammersley point set `H_m(σ)` with 2^m points, ordered by the
/// digit-vector integer `(t_1 ... t_m)_2` so emitted files are byte-stable.
pub fn hammersley(m: u32, shift: &Shift) -> Result<PointSet> {
    check_shift(m, shift)?;
    let sigma = shift.as_int();
    let points = (0..pow2(m))
        .map(|n| {
            (
                DyadicRational::new_unchecked(bit_reverse(n, m), m),
                DyadicRational::new_unchecked(n ^ sigma, m),
            )
        })
        .collect();
    Ok(PointSet { level: m, points })
}

/// The symmetrized set `H_m(σ) ∪ H_m(σ*)`, 2^{m+1} points, all distinct.
pub fn symmetrized(m: u32, shift: &Shift) -> Result<PointSet> {
    let mut first = hammersley(m, shift)?;
    let second = hammersley(m, &shift.complement())?;
    // Distinct by construction: equal x forces equal n, and then the two
    // y-numerators differ in every digit.
    first.points.extend_from_slice(&second.points);
    Ok(first)
}

/// The reflected variant: `H_m(σ)` together with `{(x, 1−y)}`, kept as a
/// multiset of 2^{m+1} points. A reflected y-coordinate equals one exactly
/// when the original was zero; such points are retained — no box `[0,β)`
/// with `β <= 1` ever counts them.
pub fn reflected_symmetrized(m: u32, shift: &Shift) -> Result<PointSet> {
    let mut base = hammersley(m, shift)?;
    let reflected: Vec<_> = base
        .points
        .iter()
        .map(|&(x, y)| {
            (
                x,
                DyadicRational::new_unchecked(pow2(m) - y.numerator(), m),
            )
        })
        .collect();
    base.points.extend(reflected);
    Ok(base)
}
