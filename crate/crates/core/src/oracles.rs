//! Brute-force verification sums for the combinatorial identities behind the
//! closed forms, and the exact decomposition of the cross integral.
//!
//! Everything here is an enumeration: sums over the full grid `Q*(2^m)` in
//! one or both variables, compared elsewhere against closed forms with exact
//! rational equality — no tolerances.
//!
//! The digit machinery (`j(u)` evaluation, XOR factor bits) is reused from
//! `localdisc` rather than re-implemented, so a digit-convention bug cannot
//! hide by cancelling out: the counting oracle would catch it.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{pow2, rat, DyadicRational, ExactRational};
use crate::l2::{cross_integral_exact, mixed_sum_value};
use crate::localdisc::{digit_factor_bits, gamma_digits, scaled_norm, FormulaRow};
use crate::par;
use crate::pointset::{check_shift, hammersley, Shift};

/// Hard cap for the Θ(4^m·m) double-grid sweeps.
pub const GRID_SWEEP_MAX: u32 = 10;

fn check_grid_sweep(m: u32) -> Result<()> {
    check_level_op(m)?;
    if m > GRID_SWEEP_MAX {
        return Err(Error::OutOfRange(format!(
            "m={m} exceeds the 4^m-sweep cap {GRID_SWEEP_MAX}"
        )));
    }
    Ok(())
}

fn check_level_op(m: u32) -> Result<()> {
    crate::exact::check_level(m)
}

fn check_beta(m: u32, beta: &DyadicRational) -> Result<()> {
    if beta.level() != m || beta.is_one() {
        return Err(Error::NotMBit(beta.to_string(), m));
    }
    Ok(())
}

fn check_u(m: u32, u: u32) -> Result<()> {
    if u >= m {
        return Err(Error::OutOfRange(format!("u={u} not in [0, m−1] for m={m}")));
    }
    Ok(())
}

/// `Σ_{α∈Q*(2^m)} (α_{m−u1} ⊕ α_{m+1−j_1(u1)})(α_{m−u2} ⊕ α_{m+1−j_2(u2)})`
/// with `j_1` evaluated under σ and `j_2` under σ*, for distinct `u1 ≠ u2`.
///
/// Equals `2^{m−2}` for every σ and every m-bit β.
pub fn alpha_cross_product_sum(
    m: u32,
    shift: &Shift,
    beta: &DyadicRational,
    u1: u32,
    u2: u32,
) -> Result<ExactRational> {
    check_shift(m, shift)?;
    check_beta(m, beta)?;
    check_u(m, u1)?;
    check_u(m, u2)?;
    if u1 == u2 {
        return Err(Error::OutOfRange(
            "u1 = u2; use the equal-index sum".to_string(),
        ));
    }
    let gamma = gamma_digits(shift, beta.numerator());
    let mut bits1 = [0u8; 16];
    let mut bits2 = [0u8; 16];
    let mut total = 0u64;
    for a in 1..pow2(m) {
        digit_factor_bits(m, &gamma, a, &mut bits1, &mut bits2);
        total += u64::from(bits1[u1 as usize] & bits2[u2 as usize]);
    }
    Ok(ExactRational::from_integer(BigInt::from(total)))
}

/// The equal-index variant: `Σ_α (α_{m−u} ⊕ α_{m+1−j_1(u)})(α_{m−u} ⊕ α_{m+1−j_2(u)})`.
pub fn alpha_equal_product_sum(
    m: u32,
    shift: &Shift,
    beta: &DyadicRational,
    u: u32,
) -> Result<ExactRational> {
    check_shift(m, shift)?;
    check_beta(m, beta)?;
    check_u(m, u)?;
    let gamma = gamma_digits(shift, beta.numerator());
    let mut bits1 = [0u8; 16];
    let mut bits2 = [0u8; 16];
    let mut total = 0u64;
    for a in 1..pow2(m) {
        digit_factor_bits(m, &gamma, a, &mut bits1, &mut bits2);
        total += u64::from(bits1[u as usize] & bits2[u as usize]);
    }
    Ok(ExactRational::from_integer(BigInt::from(total)))
}

/// Closed form for [`alpha_equal_product_sum`]: `2^{m−u−1}` for `u ∈ {0,1}`,
/// and `2^{m−u−1}(1 + Σ_{j=1}^{u−1} 2^j [γ_j ≠ γ_u])` otherwise, with
/// `γ_j = β_j ⊕ σ_j`.
pub fn alpha_equal_product_value(
    m: u32,
    shift: &Shift,
    beta: &DyadicRational,
    u: u32,
) -> Result<ExactRational> {
    check_shift(m, shift)?;
    check_beta(m, beta)?;
    check_u(m, u)?;
    let lead = pow2(m - u - 1);
    let total = if u <= 1 {
        lead
    } else {
        let gamma = gamma_digits(shift, beta.numerator());
        let gu = gamma[(u - 1) as usize];
        let inner: u64 = (1..u)
            .map(|j| {
                if gamma[(j - 1) as usize] != gu {
                    pow2(j)
                } else {
                    0
                }
            })
            .sum();
        lead * (1 + inner)
    };
    Ok(ExactRational::from_integer(BigInt::from(total)))
}

/// `Σ_{β∈Q*(2^m)} ‖2^{u1}β‖·‖2^{u2}β‖` for distinct `u1 ≠ u2`; equals
/// `2^m/2^4`.
pub fn norm_cross_sum(m: u32, u1: u32, u2: u32) -> Result<ExactRational> {
    check_level_op(m)?;
    check_u(m, u1)?;
    check_u(m, u2)?;
    if u1 == u2 {
        return Err(Error::OutOfRange(
            "u1 = u2; use the squared-norm sum".to_string(),
        ));
    }
    let total: u64 = (1..pow2(m))
        .map(|b| scaled_norm(b, m, u1) * scaled_norm(b, m, u2))
        .sum();
    Ok(ExactRational::new(BigInt::from(total), BigInt::one() << (2 * m)))
}

/// `Σ_{β∈Q*(2^m)} ‖2^u β‖²` by enumeration.
pub fn norm_square_sum(m: u32, u: u32) -> Result<ExactRational> {
    check_level_op(m)?;
    check_u(m, u)?;
    let total: u64 = (1..pow2(m))
        .map(|b| {
            let s = scaled_norm(b, m, u);
            s * s
        })
        .sum();
    Ok(ExactRational::new(BigInt::from(total), BigInt::one() << (2 * m)))
}

/// Closed form for [`norm_square_sum`]: `(2^{2m} + 2^{2u+1})/(3·2^{m+2})`.
pub fn norm_square_value(m: u32, u: u32) -> Result<ExactRational> {
    check_level_op(m)?;
    check_u(m, u)?;
    Ok(ExactRational::new(
        BigInt::from((1u64 << (2 * m)) + (1u64 << (2 * u + 1))),
        BigInt::from(3) << (m as usize + 2),
    ))
}

/// Which shift a product factor evaluates its depth function under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSide {
    /// `j_1`: depths under σ.
    Primary,
    /// `j_2`: depths under σ*.
    Complement,
}

/// The k-fold product sum
/// `Σ_{α∈Q*(2^m)} Π_i (α_{m−u_i} ⊕ α_{m+1−j(u_i)})` with each factor's depth
/// function evaluated under its assigned shift; equals `2^{m−k}` for
/// `1 <= k <= m−1` and distinct `u_i`.
pub fn digit_product_sum(
    m: u32,
    shift: &Shift,
    beta: &DyadicRational,
    factors: &[(u32, ShiftSide)],
) -> Result<ExactRational> {
    check_shift(m, shift)?;
    check_beta(m, beta)?;
    let k = factors.len();
    if k == 0 || k as u32 > m - 1 {
        return Err(Error::OutOfRange(format!(
            "k={k} not in [1, m−1] for m={m}"
        )));
    }
    for (i, &(u, _)) in factors.iter().enumerate() {
        check_u(m, u)?;
        if factors[..i].iter().any(|&(v, _)| v == u) {
            return Err(Error::OutOfRange(format!("repeated index u={u}")));
        }
    }
    let gamma = gamma_digits(shift, beta.numerator());
    let mut bits1 = [0u8; 16];
    let mut bits2 = [0u8; 16];
    let mut total = 0u64;
    for a in 1..pow2(m) {
        digit_factor_bits(m, &gamma, a, &mut bits1, &mut bits2);
        let product = factors.iter().all(|&(u, side)| match side {
            ShiftSide::Primary => bits1[u as usize] == 1,
            ShiftSide::Complement => bits2[u as usize] == 1,
        });
        total += u64::from(product);
    }
    Ok(ExactRational::from_integer(BigInt::from(total)))
}

fn mixed_grid_total(m: u32, shift: &Shift, sequential: bool) -> i128 {
    let rows = pow2(m) - 1;
    let row_sum = |i: u64| {
        let b = i + 1;
        let row = FormulaRow::new(shift, b);
        let mut acc: i64 = 0;
        for a in 1..pow2(m) {
            let (d1, d2) = row.delta_pair_scaled(a);
            acc += d1 * d2;
        }
        acc as i128
    };
    if sequential {
        par::sum_i128_seq(rows, row_sum)
    } else {
        par::sum_i128(rows, row_sum)
    }
}

/// `(1/2^{2m}) Σ_{α,β∈Q*(2^m)} Δ_1(α,β)·Δ_2(α,β)` by enumeration over the
/// full double grid, using the digit formula under σ and σ*.
pub fn mixed_grid_sum(m: u32, shift: &Shift) -> Result<ExactRational> {
    check_shift(m, shift)?;
    check_grid_sweep(m)?;
    let total = mixed_grid_total(m, shift, false);
    Ok(ExactRational::new(BigInt::from(total), BigInt::one() << (4 * m)))
}

/// Sequential variant of [`mixed_grid_sum`]; same result.
pub fn mixed_grid_sum_seq(m: u32, shift: &Shift) -> Result<ExactRational> {
    check_shift(m, shift)?;
    check_grid_sweep(m)?;
    let total = mixed_grid_total(m, shift, true);
    Ok(ExactRational::new(BigInt::from(total), BigInt::one() << (4 * m)))
}

/// One computed term next to its closed-form prediction.
#[derive(Debug, Clone)]
pub struct TermCheck {
    pub computed: ExactRational,
    pub predicted: ExactRational,
    pub matches: bool,
}

impl TermCheck {
    fn new(computed: ExactRational, predicted: ExactRational) -> TermCheck {
        let matches = computed == predicted;
        TermCheck {
            computed,
            predicted,
            matches,
        }
    }
}

/// The cross integral `∫∫ Δ_1 Δ_2` split over the dyadic cells: the four
/// corner regions `I1..I4` and the inner-region expansion `S1..S4`, each
/// against its closed form, plus the two independent-route identities.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub m: u32,
    pub shift: Shift,
    pub i1: TermCheck,
    pub i2: TermCheck,
    pub i3: TermCheck,
    pub i4: TermCheck,
    pub s1: TermCheck,
    pub s2: TermCheck,
    pub s3: TermCheck,
    pub s4: TermCheck,
    /// `S2 + S3 = 0`.
    pub s2_plus_s3_zero: bool,
    /// The same integral by the pairwise-sum route.
    pub cross_total: ExactRational,
    /// `I1 + I2 + I3 + I4 = cross_total` — cell-wise integration against the
    /// pairwise identity, two fully independent computations.
    pub sum_identity: bool,
}

impl DecompositionReport {
    pub fn terms(&self) -> [(&'static str, &TermCheck); 8] {
        [
            ("I1", &self.i1),
            ("I2", &self.i2),
            ("I3", &self.i3),
            ("I4", &self.i4),
            ("S1", &self.s1),
            ("S2", &self.s2),
            ("S3", &self.s3),
            ("S4", &self.s4),
        ]
    }

    pub fn all_match(&self) -> bool {
        self.terms().iter().all(|(_, t)| t.matches)
            && self.s2_plus_s3_zero
            && self.sum_identity
    }
}

/// `∫∫ (AB − αβ)²` over cell `(a, b)`, times `4^m·9·2^{4m+1}`.
#[inline]
fn cell_square_weight(a: i128, b: i128) -> i128 {
    let lin_a = 2 * a - 1;
    let lin_b = 2 * b - 1;
    let quad_a = 3 * a * a - 3 * a + 1;
    let quad_b = 3 * b * b - 3 * b + 1;
    18 * a * a * b * b - 9 * a * b * lin_a * lin_b + 2 * quad_a * quad_b
}

#[derive(Clone, Copy, Default)]
struct RowAcc {
    /// Σ d1·d2 over inner cells.
    t0: i128,
    /// Σ d1·(2a+2b−1) and Σ d2·(2a+2b−1) over inner cells.
    u1: i128,
    u2: i128,
    /// Σ cell_square_weight over inner cells.
    w_inner: i128,
    /// Σ cell_square_weight over the α-top strip (a = 2^m).
    w_alpha_strip: i128,
}

fn join_rows(x: RowAcc, y: RowAcc) -> RowAcc {
    RowAcc {
        t0: par::checked_add_i128(x.t0, y.t0),
        u1: par::checked_add_i128(x.u1, y.u1),
        u2: par::checked_add_i128(x.u2, y.u2),
        w_inner: par::checked_add_i128(x.w_inner, y.w_inner),
        w_alpha_strip: par::checked_add_i128(x.w_alpha_strip, y.w_alpha_strip),
    }
}

/// Closed form shared by I2 and I3.
fn i2_i3_value(m: u32) -> ExactRational {
    let p = |k: i32| crate::exact::pow2_rat(-k * m as i32);
    rat(25, 36) * p(1) - rat(5, 9) * p(2) - rat(25, 36) * p(2) + rat(2, 3) * p(3)
        - rat(1, 9) * p(4)
}

fn i4_value(m: u32) -> ExactRational {
    let p = |k: i32| crate::exact::pow2_rat(-k * m as i32);
    rat(7, 6) * p(2) + rat(1, 9) * p(4) - rat(2, 3) * p(3)
}

/// `−(2^m−1)²(32·2^m − 25·4^m − 8) / (72·16^m)`.
fn s4_value(m: u32) -> ExactRational {
    let p = BigInt::from(pow2(m));
    let num: BigInt =
        (&p - 1) * (&p - 1) * (BigInt::from(32) * &p - BigInt::from(25) * &p * &p - 8);
    ExactRational::new(-num, BigInt::from(72) << (4 * m as usize))
}

/// `2^{m−1}·(2^{m+1}−1)/4^m · (l/8 − m/16)`.
fn s2_value(m: u32, l: u32) -> ExactRational {
    let scale = ExactRational::new(
        BigInt::from(pow2(m - 1)) * BigInt::from(2 * pow2(m) - 1),
        BigInt::one() << (2 * m),
    );
    scale * (rat(l as i64, 8) - rat(m as i64, 16))
}

/// Computes the full decomposition by exact cell-wise integration.
///
/// On each cell the integrand is `(d1 + 2^m(AB−αβ))(d2 + 2^m(AB−αβ))` with
/// constant corner values `d_i`, so every piece has a polynomial
/// antiderivative evaluated in closed form — no quadrature anywhere.
pub fn cross_integral_decomposition(m: u32, shift: &Shift) -> Result<DecompositionReport> {
    check_shift(m, shift)?;
    check_grid_sweep(m)?;
    let n = pow2(m);
    let inner_rows = n - 1;

    let per_row = |i: u64| {
        let b = i + 1;
        let row = FormulaRow::new(shift, b);
        let mut acc = RowAcc::default();
        for a in 1..n {
            let (d1, d2) = row.delta_pair_scaled(a);
            let (d1, d2) = (d1 as i128, d2 as i128);
            let lin = (2 * a + 2 * b - 1) as i128;
            acc.t0 += d1 * d2;
            acc.u1 += d1 * lin;
            acc.u2 += d2 * lin;
            acc.w_inner += cell_square_weight(a as i128, b as i128);
        }
        acc.w_alpha_strip = cell_square_weight(n as i128, b as i128);
        acc
    };
    let acc = par::map_reduce(inner_rows, per_row, join_rows);

    // The β-top strip (b = 2^m) and the corner cell.
    let w_beta_strip: i128 = (1..n)
        .map(|a| cell_square_weight(a as i128, n as i128))
        .fold(0i128, par::checked_add_i128);
    let w_corner = cell_square_weight(n as i128, n as i128);

    let den_quarter = BigInt::one() << (4 * m as usize + 2); // 2^{4m+2}
    let den_square = BigInt::from(9) << (4 * m as usize + 1); // 9·2^{4m+1}

    let s1 = ExactRational::new(BigInt::from(acc.t0), BigInt::one() << (4 * m as usize));
    let s2 = ExactRational::new(BigInt::from(acc.u1), den_quarter.clone());
    let s3 = ExactRational::new(BigInt::from(acc.u2), den_quarter);
    let s4 = ExactRational::new(BigInt::from(acc.w_inner), den_square.clone());
    let i1 = &s1 + &s2 + &s3 + &s4;
    let i2 = ExactRational::new(BigInt::from(acc.w_alpha_strip), den_square.clone());
    let i3 = ExactRational::new(BigInt::from(w_beta_strip), den_square.clone());
    let i4 = ExactRational::new(BigInt::from(w_corner), den_square);

    let l = shift.zero_count();
    let s1_pred = mixed_sum_value(m, l)?;
    let s4_pred = s4_value(m);
    let i1_pred = &s1_pred + &s4_pred; // S2 + S3 cancel

    let cross_total = cross_integral_exact(
        &hammersley(m, shift)?,
        &hammersley(m, &shift.complement())?,
    )?;
    let total = &i1 + &i2 + &i3 + &i4;

    Ok(DecompositionReport {
        m,
        shift: shift.clone(),
        s2_plus_s3_zero: (&s2 + &s3) == rat(0, 1),
        sum_identity: total == cross_total,
        i1: TermCheck::new(i1, i1_pred),
        i2: TermCheck::new(i2, i2_i3_value(m)),
        i3: TermCheck::new(i3, i2_i3_value(m)),
        i4: TermCheck::new(i4, i4_value(m)),
        s1: TermCheck::new(s1, s1_pred),
        s2: TermCheck::new(s2, s2_value(m, l)),
        s3: TermCheck::new(s3, s2_value(m, m - l)),
        s4: TermCheck::new(s4, s4_pred),
        cross_total,
    })
}
