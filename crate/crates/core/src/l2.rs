//! Exact squared L2 discrepancy via pairwise summation, and every closed
//! form it is checked against.
//!
//! Expanding `Δ(α,β) = A − Nαβ` inside `∫∫ Δ² dα dβ` gives the classical
//! pairwise identity
//!
//! ```text
//! (N·L2(P))² = Σ_{p,q} (1−max(x_p,x_q))(1−max(y_p,y_q))
//!            − 2N Σ_p ((1−x_p²)/2)((1−y_p²)/2) + N²/9,
//! ```
//!
//! and the same expansion with two different point sets yields the exact
//! cross integral `∫∫ Δ_1 Δ_2`. This path derives from the definition alone
//! and shares no code with the digit formula in `localdisc`, which is what
//! makes the closed-form comparisons in `oracles`/`verify` genuine
//! cross-checks.
//!
//! All coordinates are dyadic, so both sums are computed over machine
//! integers scaled by powers of two (checked, overflow-free for the
//! supported levels) and converted to a rational once at the end.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::decimal::{format_sig, sqrt_scaled};
use crate::error::{Error, Result};
use crate::exact::{pow2, pow2_rat, rat, ExactRational};
use crate::par;
use crate::pointset::{check_shift, PointSet, SetKind, Shift};

/// Coordinate numerators of `p`, rescaled to `level`.
fn scaled_numerators(p: &PointSet, level: u32) -> Vec<(u64, u64)> {
    let up = level - p.level();
    p.numerators().map(|(x, y)| (x << up, y << up)).collect()
}

/// `Σ_q (2^m − max(ax, x_q))(2^m − max(ay, y_q))` for one anchor point.
#[inline]
fn pair_row(anchor: (u64, u64), points: &[(u64, u64)], two_m: u64) -> i128 {
    let (ax, ay) = anchor;
    let mut acc: u64 = 0;
    for &(qx, qy) in points {
        acc += (two_m - ax.max(qx)) * (two_m - ay.max(qy));
    }
    acc as i128
}

/// `Σ_p (2^{2m} − x_p²)(2^{2m} − y_p²)` (single-point part of the identity).
fn single_sum(points: &[(u64, u64)], two_m: u64) -> BigInt {
    let sq = (two_m as u128) * (two_m as u128);
    let mut acc: u128 = 0;
    for &(x, y) in points {
        let term = (sq - (x as u128) * (x as u128)) * (sq - (y as u128) * (y as u128));
        acc = acc.checked_add(term).expect("single-sum overflow");
    }
    BigInt::from(acc)
}

fn assemble(
    pair: i128,
    singles: BigInt,
    n1: u64,
    n2: u64,
    m: u32,
) -> ExactRational {
    // pair/4^m − (singles already weighted)/2^{4m+2} + n1·n2/9
    let pair_term = ExactRational::new(BigInt::from(pair), BigInt::one() << (2 * m));
    let single_term = ExactRational::new(singles, BigInt::one() << (4 * m + 2));
    let const_term = ExactRational::new(
        BigInt::from(n1) * BigInt::from(n2),
        BigInt::from(9),
    );
    pair_term - single_term + const_term
}

fn l2sq_impl(p: &PointSet, sequential: bool) -> Result<ExactRational> {
    if p.size() == 0 {
        return Err(Error::EmptySet);
    }
    let m = p.level();
    let two_m = pow2(m);
    let pts: Vec<(u64, u64)> = p.numerators().collect();
    let row = |i: u64| pair_row(pts[i as usize], &pts, two_m);
    let pair = if sequential {
        par::sum_i128_seq(p.size(), row)
    } else {
        par::sum_i128(p.size(), row)
    };
    let singles = BigInt::from(2u8) * BigInt::from(p.size()) * single_sum(&pts, two_m);
    Ok(assemble(pair, singles, p.size(), p.size(), m))
}

/// `(N·L2(P))²`, exact and multiplicity-aware.
pub fn l2sq_exact(p: &PointSet) -> Result<ExactRational> {
    l2sq_impl(p, false)
}

/// Sequential variant of [`l2sq_exact`]; same result, used as the baseline
/// in benchmarks.
pub fn l2sq_exact_seq(p: &PointSet) -> Result<ExactRational> {
    l2sq_impl(p, true)
}

fn cross_impl(p1: &PointSet, p2: &PointSet, sequential: bool) -> Result<ExactRational> {
    if p1.size() != p2.size() {
        return Err(Error::SizeMismatch(p1.size(), p2.size()));
    }
    if p1.size() == 0 {
        return Err(Error::EmptySet);
    }
    let m = p1.level().max(p2.level());
    let two_m = pow2(m);
    let a = scaled_numerators(p1, m);
    let b = scaled_numerators(p2, m);
    let row = |i: u64| pair_row(a[i as usize], &b, two_m);
    let pair = if sequential {
        par::sum_i128_seq(p1.size(), row)
    } else {
        par::sum_i128(p1.size(), row)
    };
    let singles = BigInt::from(p2.size()) * single_sum(&a, two_m)
        + BigInt::from(p1.size()) * single_sum(&b, two_m);
    Ok(assemble(pair, singles, p1.size(), p2.size(), m))
}

/// Exact `∫₀¹∫₀¹ Δ(α,β,P1)·Δ(α,β,P2) dα dβ` for equally sized sets.
pub fn cross_integral_exact(p1: &PointSet, p2: &PointSet) -> Result<ExactRational> {
    cross_impl(p1, p2, false)
}

/// Sequential variant of [`cross_integral_exact`].
pub fn cross_integral_exact_seq(p1: &PointSet, p2: &PointSet) -> Result<ExactRational> {
    cross_impl(p1, p2, true)
}

/// Closed form for `(2^{m+1}·L2(H_sym))²`:
/// `m/24 + 11/8 + 2^{−m} − 1/(9·2^{2m+1})`. Independent of the shift.
pub fn symmetrized_l2sq_value(m: u32) -> ExactRational {
    debug_assert!(m >= 1);
    rat(m as i64, 24) + rat(11, 8) + pow2_rat(-(m as i32))
        - ExactRational::new(BigInt::one(), BigInt::from(9) << (2 * m as usize + 1))
}

/// Closed form for `(2^m·L2(H_m(σ)))²` in terms of `l`, the number of zero
/// bits of σ.
pub fn shifted_l2sq_value(m: u32, l: u32) -> Result<ExactRational> {
    if l > m {
        return Err(Error::OutOfRange(format!("l={l} exceeds m={m}")));
    }
    let (mi, li) = (m as i64, l as i64);
    let p2m = pow2(m) as i64;
    Ok(rat(mi * mi, 64) - rat(19 * mi, 192) - rat(li * mi, 16) + rat(li * li, 16)
        + rat(li, 4)
        + rat(3, 8)
        + rat(mi, 16 * p2m)
        - rat(li, 8 * p2m)
        + rat(1, 4 * p2m)
        - ExactRational::new(BigInt::one(), BigInt::from(72) << (2 * m as usize)))
}

/// Closed form for the normalized mixed grid sum
/// `(1/2^{2m}) Σ_{α,β ∈ Q*(2^m)} Δ_1 Δ_2`:
/// `−m²/64 − l²/16 + lm/16 − m/192 − 5/144 − 1/(9·2^{2m+2})`.
pub fn mixed_sum_value(m: u32, l: u32) -> Result<ExactRational> {
    if l > m {
        return Err(Error::OutOfRange(format!("l={l} exceeds m={m}")));
    }
    let (mi, li) = (m as i64, l as i64);
    Ok(rat(-mi * mi, 64) - rat(li * li, 16) + rat(li * mi, 16) - rat(mi, 192)
        - rat(5, 144)
        - ExactRational::new(BigInt::one(), BigInt::from(9) << (2 * m as usize + 2)))
}

/// The zero-bit count minimizing the shifted closed form:
/// `⌈(m−5)/2 + 2^{−m}⌉`, clamped into `[0, m]` (the raw formula is negative
/// for small `m`).
pub fn optimal_zero_count(m: u32) -> u32 {
    debug_assert!(m >= 1);
    let p = (m as i64 - 5) * (pow2(m - 1) as i64) + 1;
    let q = pow2(m) as i64;
    let ceil = (p + q - 1).div_euclid(q);
    ceil.clamp(0, m as i64) as u32
}

/// Which leading-term constant of the `√(log N)/N` regime to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantKind {
    /// Symmetrized Hammersley sets: `√(1/(24 log 2))`.
    Symmetrized,
    /// Shifted Hammersley sets with balanced shifts: `√(5/(192 log 2))`.
    BalancedShift,
    /// Digit-scrambled sets in base 22: `√(278629/(2811072 log 22))`.
    Base22,
}

/// A leading constant with its exact radicand `num/(den·ln(log_arg))` and a
/// decimal rendering.
#[derive(Debug, Clone)]
pub struct LeadingConstant {
    pub kind: ConstantKind,
    pub radicand_num: u64,
    pub radicand_den: u64,
    pub log_arg: u64,
    pub decimal: String,
}

/// The constant to `sig` significant digits (at least 10 are meaningful for
/// any practical `sig`; guard digits are handled internally).
pub fn leading_constant(kind: ConstantKind, sig: usize) -> LeadingConstant {
    let (num, den, log_arg) = match kind {
        ConstantKind::Symmetrized => (1, 24, 2),
        ConstantKind::BalancedShift => (5, 192, 2),
        ConstantKind::Base22 => (278_629, 2_811_072, 22),
    };
    let scale = sig + 8;
    let fixed = crate::decimal::sqrt_div_ln_scaled(
        &rat(num as i64, den as i64),
        log_arg,
        scale,
    );
    LeadingConstant {
        kind,
        radicand_num: num,
        radicand_den: den,
        log_arg,
        decimal: format_sig(&fixed, scale, sig),
    }
}

/// Result of comparing the exact-reflection symmetrization against the
/// complementary-shift one.
#[derive(Debug, Clone)]
pub struct ReflectionGap {
    /// `|L2(H̃_sym) − L2(H_sym)|` as a decimal (50 significant digits).
    pub gap_decimal: String,
    /// The bound `1/N = 1/2^{m+1}`.
    pub bound: ExactRational,
    /// Whether `gap <= bound`, decided exactly on the squared values.
    pub holds: bool,
}

/// Computes the L2 gap between the two symmetrization variants and checks
/// it against `1/N`.
///
/// With `v_i = (N·L2)²`, the bound `|√v1 − √v2| <= 1` is decided without
/// square roots: it is equivalent to `v1 + v2 − 1 <= 2√(v1·v2)`, i.e. to
/// `v1 + v2 − 1 <= 0` or `(v1 + v2 − 1)² <= 4·v1·v2`. The reported decimal
/// gap uses 50-digit scaled square roots.
pub fn reflection_gap(m: u32, shift: &Shift) -> Result<ReflectionGap> {
    let v1 = l2sq_exact(&crate::pointset::reflected_symmetrized(m, shift)?)?;
    let v2 = l2sq_exact(&crate::pointset::symmetrized(m, shift)?)?;
    let n = 2 * pow2(m);

    let s = &v1 + &v2 - ExactRational::one();
    let holds = s <= ExactRational::from_integer(BigInt::from(0))
        || &s * &s <= rat(4, 1) * &v1 * &v2;

    const SIG: usize = 50;
    let scale = SIG + 6;
    let g1 = sqrt_scaled(&v1, scale);
    let g2 = sqrt_scaled(&v2, scale);
    let gap_fixed = (g1 - g2).abs() / BigInt::from(n);
    Ok(ReflectionGap {
        gap_decimal: format_sig(&gap_fixed, scale, SIG),
        bound: ExactRational::new(BigInt::one(), BigInt::from(n)),
        holds,
    })
}

/// Exact squared L2 value of one constructed set next to its closed-form
/// prediction, when one applies.
#[derive(Debug, Clone)]
pub struct L2Report {
    pub kind: SetKind,
    pub m: u32,
    pub shift: Shift,
    /// Cardinality of the constructed set.
    pub n: u64,
    /// `(N·L2)²`, from the pairwise identity.
    pub squared_scaled: ExactRational,
    /// Closed form: shifted and symmetrized sets have one, the exact
    /// reflection does not.
    pub predicted: Option<ExactRational>,
    /// `predicted == squared_scaled` (true when no prediction applies).
    pub matches: bool,
}

impl L2Report {
    /// `L2 = √(squared)/N` to `sig` significant digits.
    pub fn l2_decimal(&self, sig: usize) -> String {
        let scale = sig + 8;
        let fixed = sqrt_scaled(&self.squared_scaled, scale) / BigInt::from(self.n);
        format_sig(&fixed, scale, sig)
    }
}

/// Builds the set, evaluates the pairwise identity, and compares against
/// the applicable closed form.
pub fn l2_report(kind: SetKind, m: u32, shift: &Shift) -> Result<L2Report> {
    check_shift(m, shift)?;
    let set = kind.construct(m, shift)?;
    let squared = l2sq_exact(&set)?;
    let predicted = match kind {
        SetKind::Hammersley => Some(shifted_l2sq_value(m, shift.zero_count())?),
        SetKind::Symmetrized => Some(symmetrized_l2sq_value(m)),
        SetKind::ReflectedSymmetrized => None,
    };
    let matches = predicted.as_ref().map_or(true, |p| p == &squared);
    Ok(L2Report {
        kind,
        m,
        shift: shift.clone(),
        n: set.size(),
        squared_scaled: squared,
        predicted,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{hammersley, symmetrized};

    fn single_point_set() -> PointSet {
        crate::pointset::tests_support::from_numerators(1, &[(0, 0)])
    }

    #[test]
    fn l2sq_singleton() {
        // ∫∫ (1 − αβ)² = 1 − 1/2 + 1/9 = 11/18
        let p = single_point_set();
        assert_eq!(l2sq_exact(&p).unwrap(), rat(11, 18));
        assert_eq!(l2sq_exact_seq(&p).unwrap(), rat(11, 18));
    }

    #[test]
    fn l2sq_hammersley_m1() {
        let p = hammersley(1, &Shift::zeros(1).unwrap()).unwrap();
        assert_eq!(l2sq_exact(&p).unwrap(), rat(91, 144));
        let p = hammersley(1, &Shift::ones(1).unwrap()).unwrap();
        assert_eq!(l2sq_exact(&p).unwrap(), rat(4, 9));
    }

    #[test]
    fn l2sq_symmetrized_m1() {
        let p = symmetrized(1, &Shift::zeros(1).unwrap()).unwrap();
        assert_eq!(l2sq_exact(&p).unwrap(), rat(137, 72));
        assert_eq!(symmetrized_l2sq_value(1), rat(137, 72));
    }

    #[test]
    fn l2sq_rejects_empty() {
        let p = crate::pointset::tests_support::from_numerators(1, &[]);
        assert_eq!(l2sq_exact(&p), Err(Error::EmptySet));
    }

    #[test]
    fn cross_integral_examples() {
        let a = hammersley(1, &Shift::zeros(1).unwrap()).unwrap();
        let b = hammersley(1, &Shift::ones(1).unwrap()).unwrap();
        assert_eq!(cross_integral_exact(&a, &b).unwrap(), rat(119, 288));
        // Diagonal case reduces to the squared value.
        assert_eq!(
            cross_integral_exact(&a, &a).unwrap(),
            l2sq_exact(&a).unwrap()
        );
        // Size mismatch rejected.
        let s = symmetrized(1, &Shift::zeros(1).unwrap()).unwrap();
        assert_eq!(
            cross_integral_exact(&a, &s),
            Err(Error::SizeMismatch(2, 4))
        );
    }

    #[test]
    fn decomposition_identity_small() {
        // l2sq(H_sym) = l2sq(H(σ)) + l2sq(H(σ*)) + 2·cross
        for m in 1..=6 {
            let shift = Shift::random(m, 11 * m as u64).unwrap();
            let h1 = hammersley(m, &shift).unwrap();
            let h2 = hammersley(m, &shift.complement()).unwrap();
            let sym = symmetrized(m, &shift).unwrap();
            let lhs = l2sq_exact(&sym).unwrap();
            let rhs = l2sq_exact(&h1).unwrap()
                + l2sq_exact(&h2).unwrap()
                + rat(2, 1) * cross_integral_exact(&h1, &h2).unwrap();
            assert_eq!(lhs, rhs, "m={m} σ={shift}");
        }
    }

    #[test]
    fn symmetrized_value_matches_n_form() {
        // m/24 + 11/8 + 2^{−m} − 1/(9·2^{2m+1})  ==  with N = 2^{m+1}:
        // (m+1)/24 + 4/3 + 2/N − 2/(9N²)
        for m in 1..=14u32 {
            let n = 2i64 * pow2(m) as i64;
            let n_form = rat(m as i64 + 1, 24) + rat(4, 3) + rat(2, n)
                - rat(2, 1) / rat(9 * n * n, 1);
            assert_eq!(symmetrized_l2sq_value(m), n_form);
        }
    }

    #[test]
    fn shifted_value_anchors() {
        assert_eq!(shifted_l2sq_value(1, 1).unwrap(), rat(91, 144));
        assert_eq!(shifted_l2sq_value(1, 0).unwrap(), rat(4, 9));
        assert!(shifted_l2sq_value(3, 4).is_err());
    }

    #[test]
    fn shifted_value_complement_sum() {
        // kp(m,l) + kp(m,m−l) = m²/32 + l²/8 − lm/8 + 5m/96 + 3/4
        //                      + 2^{−(m+1)} − 1/(9·2^{2m+2})
        for m in 1..=12u32 {
            for l in 0..=m {
                let (mi, li) = (m as i64, l as i64);
                let expected = rat(mi * mi, 32) + rat(li * li, 8) - rat(li * mi, 8)
                    + rat(5 * mi, 96)
                    + rat(3, 4)
                    + pow2_rat(-(m as i32 + 1))
                    - ExactRational::new(
                        BigInt::one(),
                        BigInt::from(9) << (2 * m as usize + 2),
                    );
                let got = shifted_l2sq_value(m, l).unwrap()
                    + shifted_l2sq_value(m, m - l).unwrap();
                assert_eq!(got, expected, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn mixed_sum_value_anchors() {
        assert_eq!(mixed_sum_value(1, 1).unwrap(), rat(-1, 16));
        // Symmetric under l ↔ m−l.
        for m in 1..=12u32 {
            for l in 0..=m {
                assert_eq!(
                    mixed_sum_value(m, l).unwrap(),
                    mixed_sum_value(m, m - l).unwrap()
                );
            }
        }
    }

    #[test]
    fn optimal_zero_count_examples() {
        assert_eq!(optimal_zero_count(5), 1);
        assert_eq!(optimal_zero_count(10), 3);
        assert_eq!(optimal_zero_count(1), 0);
    }

    #[test]
    fn optimal_zero_count_is_argmin() {
        for m in 6..=12u32 {
            let best = shifted_l2sq_value(m, optimal_zero_count(m)).unwrap();
            for l in 0..=m {
                assert!(
                    best <= shifted_l2sq_value(m, l).unwrap(),
                    "m={m}: l_opt={} beaten by l={l}",
                    optimal_zero_count(m)
                );
            }
        }
    }

    #[test]
    fn leading_constants() {
        let c = leading_constant(ConstantKind::Symmetrized, 12);
        assert!(c.decimal.starts_with("0.2451"), "got {}", c.decimal);
        let c = leading_constant(ConstantKind::BalancedShift, 12);
        assert!(c.decimal.starts_with("0.1938"), "got {}", c.decimal);
        let c = leading_constant(ConstantKind::Base22, 12);
        assert!(c.decimal.starts_with("0.1790"), "got {}", c.decimal);
    }

    #[test]
    fn reflection_gap_m1() {
        let gap = reflection_gap(1, &Shift::zeros(1).unwrap()).unwrap();
        assert!(gap.holds);
        assert_eq!(gap.bound, rat(1, 4));
        assert!(!gap.gap_decimal.starts_with('-'));
    }

    #[test]
    fn figure_caption_value() {
        // (N·L2)² at m=8 is 2019839/1179648 and L2 prints as 0.00255571…
        let v = symmetrized_l2sq_value(8);
        assert_eq!(v, rat(2_019_839, 1_179_648));
        let report = l2_report(
            SetKind::Symmetrized,
            8,
            &Shift::alternating(8).unwrap(),
        )
        .unwrap();
        assert!(report.matches);
        assert_eq!(report.l2_decimal(6), "0.00255571");
    }

    #[test]
    fn report_for_reflected_has_no_prediction() {
        let r = l2_report(SetKind::ReflectedSymmetrized, 2, &Shift::zeros(2).unwrap())
            .unwrap();
        assert!(r.predicted.is_none());
        assert!(r.matches);
        assert_eq!(r.n, 8);
    }
}
