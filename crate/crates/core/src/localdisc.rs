//! Local discrepancy, two ways: direct counting, and the digit formula for
//! shifted Hammersley sets (plus its extension off the dyadic grid).
//!
//! The digit formula for `H_m(σ)` at m-bit `(α, β)` is
//!
//! ```text
//! Δ(α,β) = Σ_{u=0}^{m−1} ‖2^u β‖ (−1)^{σ_{u+1}} (α_{m−u} ⊕ α_{m+1−j(u)})
//! ```
//!
//! with `j(u)` the deepest index `j <= u` at which `α_{m+1−j}` disagrees with
//! `γ_j = β_j ⊕ σ_j` (0 when there is none, with `α_{m+1} = 0` as sentinel).
//! Off the grid it extends via `Δ(α,β) = Δ(α(m),β(m)) + 2^m(α(m)β(m) − αβ)`
//! with `α(m), β(m)` the coordinates rounded up to the grid (capped at one,
//! where `Δ` vanishes).
//!
//! The formula and the counting definition share no code; their agreement is
//! a real cross-check and is asserted exhaustively in the tests and the
//! verification sweeps.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{as_mbit, pow2, pow2_rat, round_up_mbit, DyadicRational, ExactRational};
use crate::pointset::{check_shift, PointSet, Shift};

/// Number of points of `p` in the half-open box `[0,α) × [0,β)`, counted
/// with multiplicity.
pub fn count_points(p: &PointSet, alpha: &ExactRational, beta: &ExactRational) -> u64 {
    let m = p.level();
    // x < α  ⇔  x_num · denom(α) < numer(α) · 2^m, and likewise for y.
    let thr_x = alpha.numer() * BigInt::from(pow2(m));
    let thr_y = beta.numer() * BigInt::from(pow2(m));
    let den_x = alpha.denom();
    let den_y = beta.denom();
    p.numerators()
        .filter(|&(x, y)| {
            BigInt::from(x) * den_x < thr_x && BigInt::from(y) * den_y < thr_y
        })
        .count() as u64
}

/// `Δ(α,β,P) = A([0,α)×[0,β), P) − N·α·β`, exact.
pub fn local_discrepancy(
    p: &PointSet,
    alpha: &ExactRational,
    beta: &ExactRational,
) -> ExactRational {
    let count = ExactRational::from_integer(BigInt::from(count_points(p, alpha, beta)));
    let volume = ExactRational::from_integer(BigInt::from(p.size())) * alpha * beta;
    count - volume
}

/// `2^m · ‖2^u · b/2^m‖` as an integer, for `u ∈ 0..m`.
#[inline]
pub(crate) fn scaled_norm(b: u64, m: u32, u: u32) -> u64 {
    debug_assert!(u < m);
    let span = pow2(m - u);
    let r = b % span;
    r.min(span - r) << u
}

/// Digit `α_i` of the numerator `a` at level `m`, with `α_{m+1} = 0`.
#[inline]
fn alpha_digit(a: u64, m: u32, i: u32) -> u8 {
    debug_assert!(i >= 1 && i <= m + 1);
    if i == m + 1 {
        0
    } else {
        ((a >> (m - i)) & 1) as u8
    }
}

/// Per-β state for evaluating the digit formula across many α: the γ digits,
/// the scaled norms `2^m‖2^u β‖`, and the signs `(−1)^{σ_{u+1}}`.
///
/// `delta_pair_scaled` walks the digits once per α, maintaining the running
/// mismatch depths for σ and σ* simultaneously (a digit that matches γ_j is
/// exactly a mismatch against the complement), so a full evaluation is O(m).
pub(crate) struct FormulaRow {
    m: u32,
    gamma: Vec<u8>,
    norms: Vec<i64>,
    signs: Vec<i64>,
}

impl FormulaRow {
    pub(crate) fn new(shift: &Shift, beta_num: u64) -> FormulaRow {
        let m = shift.len();
        debug_assert!(beta_num < pow2(m));
        let gamma = (1..=m)
            .map(|j| alpha_digit(beta_num, m, j) ^ shift.bit(j))
            .collect();
        let norms = (0..m).map(|u| scaled_norm(beta_num, m, u) as i64).collect();
        let signs = (0..m)
            .map(|u| if shift.bit(u + 1) == 0 { 1i64 } else { -1i64 })
            .collect();
        FormulaRow { m, gamma, norms, signs }
    }

    /// `(2^m Δ_1, 2^m Δ_2)` at `α = a/2^m`, under σ and σ* respectively.
    #[inline]
    pub(crate) fn delta_pair_scaled(&self, a: u64) -> (i64, i64) {
        let m = self.m;
        let mut depth1 = 0u32; // running j(u) under σ
        let mut depth2 = 0u32; // running j(u) under σ*
        let mut d1 = 0i64;
        let mut d2 = 0i64;
        for u in 0..m {
            if u >= 1 {
                if alpha_digit(a, m, m + 1 - u) != self.gamma[(u - 1) as usize] {
                    depth1 = u;
                } else {
                    depth2 = u;
                }
            }
            let base = alpha_digit(a, m, m - u);
            let w = self.norms[u as usize] * self.signs[u as usize];
            if base ^ alpha_digit(a, m, m + 1 - depth1) == 1 {
                d1 += w;
            }
            if base ^ alpha_digit(a, m, m + 1 - depth2) == 1 {
                d2 -= w;
            }
        }
        (d1, d2)
    }

    /// `2^m Δ` at `α = a/2^m` under σ alone.
    #[inline]
    pub(crate) fn delta_scaled(&self, a: u64) -> i64 {
        self.delta_pair_scaled(a).0
    }
}

/// The XOR factor bits `α_{m−u} ⊕ α_{m+1−j_i(u)}` for every `u`, with `j_1`
/// evaluated under σ (matching against γ) and `j_2` under σ*.
///
/// Used by the brute-force digit-product oracles; `bits1`/`bits2` must hold
/// at least `m` entries.
pub(crate) fn digit_factor_bits(
    m: u32,
    gamma: &[u8],
    a: u64,
    bits1: &mut [u8],
    bits2: &mut [u8],
) {
    let mut depth1 = 0u32;
    let mut depth2 = 0u32;
    for u in 0..m {
        if u >= 1 {
            if alpha_digit(a, m, m + 1 - u) != gamma[(u - 1) as usize] {
                depth1 = u;
            } else {
                depth2 = u;
            }
        }
        let base = alpha_digit(a, m, m - u);
        bits1[u as usize] = base ^ alpha_digit(a, m, m + 1 - depth1);
        bits2[u as usize] = base ^ alpha_digit(a, m, m + 1 - depth2);
    }
}

/// `γ_j = β_j ⊕ σ_j` for `j = 1..=m`.
pub(crate) fn gamma_digits(shift: &Shift, beta_num: u64) -> Vec<u8> {
    let m = shift.len();
    (1..=m)
        .map(|j| alpha_digit(beta_num, m, j) ^ shift.bit(j))
        .collect()
}

/// Digit context for one `(σ, α, β)` triple: the α digits (with sentinel),
/// the γ digits, and the mismatch-depth function `j(u)`.
#[derive(Debug, Clone)]
pub struct DigitContext {
    m: u32,
    alpha: DyadicRational,
    gamma: Vec<u8>,
}

impl DigitContext {
    pub fn new(shift: &Shift, alpha: &DyadicRational, beta: &DyadicRational) -> Result<Self> {
        let m = shift.len();
        if alpha.level() != m || beta.level() != m {
            return Err(Error::ShiftLength {
                expected: m,
                got: alpha.level().max(beta.level()) as usize,
            });
        }
        if alpha.is_one() || beta.is_one() {
            return Err(Error::DigitOfOne);
        }
        Ok(DigitContext {
            m,
            alpha: *alpha,
            gamma: gamma_digits(shift, beta.numerator()),
        })
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    /// `α_i` for `i ∈ 1..=m+1` (sentinel at `m+1`).
    pub fn alpha_digit(&self, i: u32) -> u8 {
        alpha_digit(self.alpha.numerator(), self.m, i)
    }

    /// `γ_j = β_j ⊕ σ_j`.
    pub fn gamma(&self, j: u32) -> u8 {
        self.gamma[(j - 1) as usize]
    }

    /// The depth function `j(u)`: deepest `j <= u` with
    /// `α_{m+1−j} ≠ γ_j`, and 0 when every position matches (or `u = 0`).
    pub fn mismatch_depth(&self, u: u32) -> u32 {
        assert!(u < self.m, "u={u} out of range at level {}", self.m);
        (1..=u)
            .rev()
            .find(|&j| self.alpha_digit(self.m + 1 - j) != self.gamma(j))
            .unwrap_or(0)
    }
}

/// The digit formula for `Δ(α,β)` on `H_m(σ)` at m-bit arguments.
///
/// Rejects arguments off the grid `Q(2^m)`; `β = 0` (empty box) gives 0.
pub fn local_discrepancy_formula(
    m: u32,
    shift: &Shift,
    alpha: &ExactRational,
    beta: &ExactRational,
) -> Result<ExactRational> {
    check_shift(m, shift)?;
    let a = as_mbit(alpha, m).ok_or_else(|| Error::NotMBit(alpha.to_string(), m))?;
    let b = as_mbit(beta, m).ok_or_else(|| Error::NotMBit(beta.to_string(), m))?;
    let d = FormulaRow::new(shift, b).delta_scaled(a);
    Ok(ExactRational::new(BigInt::from(d), BigInt::from(pow2(m))))
}

/// `2^m · Δ(A, B)` at grid corners `A = a/2^m`, `B = b/2^m` with
/// `a, b ∈ [0, 2^m]`; the capped corners `a = 2^m` (A = 1) and `b = 2^m`
/// (B = 1) vanish because both coordinate multisets of `H_m(σ)` are exactly
/// the full grid.
pub(crate) fn corner_delta_scaled(shift: &Shift, a: u64, b: u64) -> i64 {
    let m = shift.len();
    if a == pow2(m) || b == pow2(m) {
        0
    } else {
        FormulaRow::new(shift, b).delta_scaled(a)
    }
}

/// `Δ(α,β)` on `H_m(σ)` for arbitrary `α, β ∈ [0,1]`, via round-up to the
/// grid. Zero arguments give 0 by the empty-box convention.
pub fn local_discrepancy_extended(
    m: u32,
    shift: &Shift,
    alpha: &ExactRational,
    beta: &ExactRational,
) -> Result<ExactRational> {
    check_shift(m, shift)?;
    for v in [alpha, beta] {
        if v.is_negative() || v > &ExactRational::from_integer(BigInt::from(1)) {
            return Err(Error::OutOfRange(format!("{v} not in [0, 1]")));
        }
    }
    if alpha.is_zero() || beta.is_zero() {
        return Ok(ExactRational::zero());
    }
    let a = round_up_mbit(alpha, m)?;
    let b = round_up_mbit(beta, m)?;
    let corner = corner_delta_scaled(shift, a.numerator(), b.numerator());
    let corner = ExactRational::new(BigInt::from(corner), BigInt::from(pow2(m)));
    Ok(corner + pow2_rat(m as i32) * (a.value() * b.value() - alpha * beta))
}

/// `Δ_sym(α,β)` of the symmetrized set, as `Δ_1 + Δ_2` (the σ- and
/// σ*-evaluations).
pub fn local_discrepancy_sym(
    m: u32,
    shift: &Shift,
    alpha: &ExactRational,
    beta: &ExactRational,
) -> Result<ExactRational> {
    let d1 = local_discrepancy_extended(m, shift, alpha, beta)?;
    let d2 = local_discrepancy_extended(m, &shift.complement(), alpha, beta)?;
    Ok(d1 + d2)
}

/// Prefix-sum table of point counts on the dyadic grid: `count(a, b)` is
/// `A([0, a/2^m) × [0, b/2^m))` in O(1). Internal accelerator for the
/// exhaustive formula-vs-counting sweeps.
pub(crate) struct GridCounts {
    side: usize, // 2^m + 1
    prefix: Vec<u64>,
}

impl GridCounts {
    pub(crate) fn new(p: &PointSet) -> GridCounts {
        let n = pow2(p.level()) as usize;
        let side = n + 1;
        let mut cells = vec![0u64; n * n];
        for (x, y) in p.numerators() {
            // Coordinates equal to one are never inside a [0,β) box.
            if (x as usize) < n && (y as usize) < n {
                cells[x as usize * n + y as usize] += 1;
            }
        }
        let mut prefix = vec![0u64; side * side];
        for a in 1..side {
            for b in 1..side {
                prefix[a * side + b] = cells[(a - 1) * n + (b - 1)]
                    + prefix[(a - 1) * side + b]
                    + prefix[a * side + (b - 1)]
                    - prefix[(a - 1) * side + (b - 1)];
            }
        }
        GridCounts { side, prefix }
    }

    #[inline]
    pub(crate) fn count(&self, a: u64, b: u64) -> u64 {
        self.prefix[a as usize * self.side + b as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::pointset::hammersley;
    use num_traits::One;

    fn h(m: u32, bits: &[u8]) -> PointSet {
        hammersley(m, &Shift::new(bits.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn count_examples() {
        let p = h(1, &[0]);
        assert_eq!(count_points(&p, &rat(1, 2), &rat(1, 2)), 1);
        assert_eq!(count_points(&p, &rat(1, 1), &rat(1, 1)), 2);
        let p = h(1, &[1]);
        assert_eq!(count_points(&p, &rat(1, 2), &rat(1, 2)), 0);
    }

    #[test]
    fn local_discrepancy_examples() {
        let p = h(1, &[0]);
        assert_eq!(local_discrepancy(&p, &rat(1, 2), &rat(1, 2)), rat(1, 2));
        assert_eq!(local_discrepancy(&p, &rat(1, 1), &rat(1, 1)), rat(0, 1));
        let p = h(1, &[1]);
        assert_eq!(local_discrepancy(&p, &rat(1, 2), &rat(1, 2)), rat(-1, 2));
    }

    #[test]
    fn mismatch_depth_examples() {
        // u = 0 is always 0.
        let shift = Shift::new(vec![0, 0]).unwrap();
        let alpha = DyadicRational::new(2, 2).unwrap(); // 1/2, digits (1,0)
        let beta = DyadicRational::new(1, 2).unwrap(); // 1/4, digits (0,1)
        let ctx = DigitContext::new(&shift, &alpha, &beta).unwrap();
        assert_eq!(ctx.mismatch_depth(0), 0);
        // α_2 = 0 vs γ_1 = 0: match, so j(1) = 0.
        assert_eq!(ctx.mismatch_depth(1), 0);

        // All positions matching give 0 at every depth: α = (0,1) reversed
        // must equal γ = (γ_1, γ_2). Take β with digits (1,0) and σ = 0, so
        // γ = (1,0); α with α_2 = γ_1 = 1, α_1 = γ_2 = 0 → α digits (0,1).
        let alpha = DyadicRational::new(0b01, 2).unwrap();
        let beta = DyadicRational::new(0b10, 2).unwrap();
        let ctx = DigitContext::new(&shift, &alpha, &beta).unwrap();
        assert_eq!(ctx.mismatch_depth(1), 0);

        // Depth ranges: 0 <= j(u) <= u.
        for m in 1..=5u32 {
            for shift in Shift::all(m).unwrap() {
                for a in 0..pow2(m) {
                    for b in 0..pow2(m) {
                        let ctx = DigitContext::new(
                            &shift,
                            &DyadicRational::new(a, m).unwrap(),
                            &DyadicRational::new(b, m).unwrap(),
                        )
                        .unwrap();
                        for u in 0..m {
                            assert!(ctx.mismatch_depth(u) <= u);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn formula_m1() {
        let shift = Shift::zeros(1).unwrap();
        let d = local_discrepancy_formula(1, &shift, &rat(1, 2), &rat(1, 2)).unwrap();
        assert_eq!(d, rat(1, 2));
        // β = 0 gives 0.
        let d = local_discrepancy_formula(1, &shift, &rat(1, 2), &rat(0, 1)).unwrap();
        assert_eq!(d, rat(0, 1));
    }

    #[test]
    fn formula_rejects_off_grid() {
        let shift = Shift::zeros(2).unwrap();
        assert!(matches!(
            local_discrepancy_formula(2, &shift, &rat(1, 3), &rat(1, 4)),
            Err(Error::NotMBit(..))
        ));
        assert!(matches!(
            local_discrepancy_formula(2, &shift, &rat(1, 1), &rat(1, 4)),
            Err(Error::NotMBit(..))
        ));
    }

    #[test]
    fn formula_matches_counting_m2_exhaustive() {
        let shift = Shift::zeros(2).unwrap();
        let p = h(2, &[0, 0]);
        for a in 1..4u64 {
            for b in 1..4u64 {
                let alpha = rat(a as i64, 4);
                let beta = rat(b as i64, 4);
                let by_formula =
                    local_discrepancy_formula(2, &shift, &alpha, &beta).unwrap();
                let by_counting = local_discrepancy(&p, &alpha, &beta);
                assert_eq!(by_formula, by_counting, "mismatch at ({a}/4, {b}/4)");
            }
        }
    }

    #[test]
    fn formula_matches_counting_small_levels_all_shifts() {
        for m in 1..=4u32 {
            for shift in Shift::all(m).unwrap() {
                let p = hammersley(m, &shift).unwrap();
                let counts = GridCounts::new(&p);
                for b in 1..pow2(m) {
                    let row = FormulaRow::new(&shift, b);
                    for a in 1..pow2(m) {
                        let scaled = row.delta_scaled(a) as i64;
                        // 2^m Δ = 2^m A − a·b/2^m... compare as rationals.
                        let delta = rat(scaled, pow2(m) as i64);
                        let counting = rat(counts.count(a, b) as i64, 1)
                            - rat((a * b) as i64, 1) * pow2_rat(-(m as i32));
                        assert_eq!(delta, counting, "m={m} σ={shift} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn extended_reconciles_with_counting() {
        // α = β = 3/8 at m=1, σ=(0): counting is authoritative.
        let shift = Shift::zeros(1).unwrap();
        let p = h(1, &[0]);
        let alpha = rat(3, 8);
        let by_counting = local_discrepancy(&p, &alpha, &alpha);
        assert_eq!(by_counting, rat(23, 32)); // 1 − 2·(9/64)
        let by_extension =
            local_discrepancy_extended(1, &shift, &alpha, &alpha).unwrap();
        assert_eq!(by_extension, by_counting);
    }

    #[test]
    fn extended_capped_corners() {
        for m in 1..=4u32 {
            for shift in Shift::all(m).unwrap() {
                // Δ(α, 1) = 0 for m-bit α, and Δ(1, 1) = 0.
                for a in 1..=pow2(m) {
                    let alpha = rat(a as i64, pow2(m) as i64);
                    let d = local_discrepancy_extended(m, &shift, &alpha, &ExactRational::one())
                        .unwrap();
                    assert_eq!(d, rat(0, 1));
                }
                // Δ(1, β) for m-bit β is also 0 by the grid bijection.
                for b in 1..=pow2(m) {
                    let beta = rat(b as i64, pow2(m) as i64);
                    let d = local_discrepancy_extended(m, &shift, &ExactRational::one(), &beta)
                        .unwrap();
                    assert_eq!(d, rat(0, 1));
                }
            }
        }
    }

    #[test]
    fn extended_matches_counting_randomized() {
        use rand::Rng;
        use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for m in 1..=5u32 {
            let shift = Shift::sample(m, &mut rng).unwrap();
            let p = hammersley(m, &shift).unwrap();
            for _ in 0..200 {
                let da = rng.random_range(1..=512u64);
                let na = rng.random_range(1..=da);
                let db = rng.random_range(1..=512u64);
                let nb = rng.random_range(1..=db);
                let alpha = rat(na as i64, da as i64);
                let beta = rat(nb as i64, db as i64);
                let by_ext =
                    local_discrepancy_extended(m, &shift, &alpha, &beta).unwrap();
                let by_count = local_discrepancy(&p, &alpha, &beta);
                assert_eq!(by_ext, by_count, "m={m} σ={shift} α={alpha} β={beta}");
            }
        }
    }

    #[test]
    fn sym_examples_and_additivity() {
        let shift = Shift::zeros(1).unwrap();
        let d = local_discrepancy_sym(1, &shift, &rat(1, 2), &rat(1, 2)).unwrap();
        assert_eq!(d, rat(0, 1)); // 1/2 + (−1/2)
        let d = local_discrepancy_sym(1, &shift, &rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(d, rat(0, 1));

        use rand::Rng;
        use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 1..=4u32 {
            let shift = Shift::sample(m, &mut rng).unwrap();
            let sym = crate::pointset::symmetrized(m, &shift).unwrap();
            for _ in 0..100 {
                let da = rng.random_range(1..=128u64);
                let na = rng.random_range(1..=da);
                let db = rng.random_range(1..=128u64);
                let nb = rng.random_range(1..=db);
                let alpha = rat(na as i64, da as i64);
                let beta = rat(nb as i64, db as i64);
                let by_sym = local_discrepancy_sym(m, &shift, &alpha, &beta).unwrap();
                let by_count = local_discrepancy(&sym, &alpha, &beta);
                assert_eq!(by_sym, by_count);
            }
        }
    }

    #[test]
    fn counting_monotone_in_box() {
        let p = h(3, &[0, 1, 0]);
        let mut prev = 0;
        for a in 1..=8 {
            let c = count_points(&p, &rat(a, 8), &rat(1, 1));
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn grid_counts_match_direct_counting() {
        for m in 1..=4u32 {
            let shift = Shift::random(m, 3 * m as u64).unwrap();
            let p = crate::pointset::reflected_symmetrized(m, &shift).unwrap();
            let counts = GridCounts::new(&p);
            for a in 0..=pow2(m) {
                for b in 0..=pow2(m) {
                    let direct = count_points(
                        &p,
                        &rat(a as i64, pow2(m) as i64),
                        &rat(b as i64, pow2(m) as i64),
                    );
                    assert_eq!(counts.count(a, b), direct);
                }
            }
        }
    }
}
