//! Decimal rendering of exact quantities.
//!
//! Square roots and natural logs are computed on scaled big integers
//! (`value·10^scale`) with guard digits, then formatted. Decimals are for
//! output only — every mathematical assertion in this crate compares exact
//! rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::ExactRational;

/// Guard digits carried internally so all requested digits are trustworthy.
const GUARD: usize = 12;

pub(crate) fn pow10(k: usize) -> BigInt {
    BigInt::from(10u8).pow(k as u32)
}

/// `floor(sqrt(x) · 10^scale)` for rational `x >= 0`.
pub fn sqrt_scaled(x: &ExactRational, scale: usize) -> BigInt {
    assert!(!x.is_negative(), "sqrt of negative rational");
    // sqrt(n/d)·10^s = sqrt(n·d·10^{2s})/d; floor passes through the outer
    // division since d > 0.
    (x.numer() * x.denom() * pow10(2 * scale)).sqrt() / x.denom()
}

/// `ln(x) · 10^scale` for rational `x > 0`, good to `scale` digits.
pub fn ln_scaled(x: &ExactRational, scale: usize) -> BigInt {
    assert!(x.is_positive(), "log of non-positive rational");
    let s = scale + GUARD;
    let ln2 = ln2_fixed(s);
    // Normalize y = x / 2^k into [1, 2), exactly.
    let two = ExactRational::from_integer(BigInt::from(2));
    let one = ExactRational::from_integer(BigInt::from(1));
    let mut y = x.clone();
    let mut k = 0i64;
    while y >= two {
        y /= &two;
        k += 1;
    }
    while y < one {
        y *= &two;
        k -= 1;
    }
    // ln y = 2 atanh(z), z = (y−1)/(y+1) ∈ [0, 1/3).
    let z = (&y - &one) / (&y + &one);
    let t = z.numer() * pow10(s) / z.denom();
    let series = atanh_series_fixed(&t, s);
    let total = BigInt::from(2) * series + BigInt::from(k) * ln2;
    total / pow10(GUARD)
}

/// `ln(2) · 10^s` via `2·atanh(1/3)`.
fn ln2_fixed(s: usize) -> BigInt {
    let t = pow10(s) / BigInt::from(3);
    BigInt::from(2) * atanh_series_fixed(&t, s)
}

/// `Σ_{i>=0} t^{2i+1}/(2i+1)` in fixed point at scale `10^s`, for
/// `t/10^s < 1/3` (terms shrink by at least 9× per step).
fn atanh_series_fixed(t: &BigInt, s: usize) -> BigInt {
    let scale = pow10(s);
    let t2 = t * t / &scale;
    let mut term = t.clone();
    let mut sum = BigInt::zero();
    let mut odd = 1u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(odd);
        term = term * &t2 / &scale;
        odd += 2;
    }
    sum
}

/// `floor(sqrt(x / ln(arg)) · 10^scale)` for rational `x >= 0`, integer
/// `arg >= 2`.
pub fn sqrt_div_ln_scaled(x: &ExactRational, ln_arg: u64, scale: usize) -> BigInt {
    let s = scale + GUARD;
    let ln_fixed = ln_scaled(
        &ExactRational::from_integer(BigInt::from(ln_arg)),
        s,
    );
    // r·10^s = n·10^{2s} / (d·ln_fixed), then sqrt(r)·10^s = sqrt(r_fixed·10^s).
    let r_fixed = x.numer() * pow10(2 * s) / (x.denom() * ln_fixed);
    (r_fixed * pow10(s)).sqrt() / pow10(GUARD)
}

/// Renders `mant/10^scale` (`mant >= 0`) with `sig` significant digits,
/// round-half-up, plain positional notation.
pub fn format_sig(mant: &BigInt, scale: usize, sig: usize) -> String {
    assert!(sig >= 1 && !mant.is_negative());
    if mant.is_zero() {
        return "0".to_string();
    }
    let mut digits = mant.to_string();
    let mut exp = -(scale as i64);
    if digits.len() > sig {
        let drop = digits.len() - sig;
        let mut rounded = (mant + BigInt::from(5) * pow10(drop - 1)) / pow10(drop);
        exp += drop as i64;
        digits = rounded.to_string();
        if digits.len() > sig {
            // 99…9 rounded up to 100…0; renormalize.
            rounded /= BigInt::from(10);
            exp += 1;
            digits = rounded.to_string();
        }
    }
    render_positional(&digits, exp)
}

/// Renders `mant/10^scale` (`mant >= 0`) truncated to `decimals` places.
pub fn format_trunc(mant: &BigInt, scale: usize, decimals: usize) -> String {
    assert!(decimals <= scale && !mant.is_negative());
    let q = mant / pow10(scale - decimals);
    let int_part = &q / pow10(decimals);
    let frac_part = &q % pow10(decimals);
    format!("{int_part}.{frac_part:0>width$}", width = decimals)
}

/// `digits × 10^exp` written without exponent notation.
fn render_positional(digits: &str, exp: i64) -> String {
    if exp >= 0 {
        let zeros = "0".repeat(exp as usize);
        return format!("{digits}{zeros}");
    }
    let point = digits.len() as i64 + exp;
    if point > 0 {
        let (int_part, frac_part) = digits.split_at(point as usize);
        if frac_part.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac_part}")
        }
    } else {
        let zeros = "0".repeat((-point) as usize);
        format!("0.{zeros}{digits}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn sqrt_scaled_exact_square() {
        assert_eq!(sqrt_scaled(&rat(4, 1), 10), BigInt::from(20_000_000_000u64));
        assert_eq!(sqrt_scaled(&rat(9, 4), 4), BigInt::from(15_000u32));
        assert_eq!(sqrt_scaled(&rat(0, 1), 8), BigInt::from(0));
    }

    #[test]
    fn sqrt_two_digits() {
        let s = sqrt_scaled(&rat(2, 1), 60);
        assert_eq!(format_sig(&s, 60, 20), "1.4142135623730950488");
    }

    #[test]
    fn ln_two_digits() {
        let l = ln_scaled(&rat(2, 1), 50);
        assert_eq!(format_sig(&l, 50, 18), "0.693147180559945309");
    }

    #[test]
    fn ln_handles_scaling_and_small_arguments() {
        let l = ln_scaled(&rat(22, 1), 40);
        assert!(format_sig(&l, 40, 13).starts_with("3.091042453358"));
        // ln(1/2) = −ln 2
        let a = ln_scaled(&rat(1, 2), 30);
        let b = ln_scaled(&rat(2, 1), 30);
        let sum = (&a + &b).abs();
        assert!(sum <= BigInt::from(2), "ln(1/2) + ln(2) = {sum} ulp");
        // ln 1 = 0
        assert_eq!(ln_scaled(&rat(1, 1), 30), BigInt::from(0));
    }

    #[test]
    fn format_sig_cases() {
        // 0.00255571366 → 6 significant digits
        let m = BigInt::from(255_571_366u64);
        assert_eq!(format_sig(&m, 11, 6), "0.00255571");
        // integer rendering
        assert_eq!(format_sig(&BigInt::from(200u32), 2, 3), "2.00");
        assert_eq!(format_sig(&BigInt::from(2u32), 0, 1), "2");
        // carry 0.999… → 1.0
        let m = BigInt::from(99_995u32);
        assert_eq!(format_sig(&m, 5, 4), "1.000");
        // zero
        assert_eq!(format_sig(&BigInt::from(0u8), 10, 5), "0");
    }

    #[test]
    fn format_trunc_cases() {
        let m = BigInt::from(2_451_782u64); // 0.2451782
        assert_eq!(format_trunc(&m, 7, 4), "0.2451");
        let m = BigInt::from(1_790_703u64);
        assert_eq!(format_trunc(&m, 7, 4), "0.1790");
        let m = BigInt::from(123_456u64); // 12.3456
        assert_eq!(format_trunc(&m, 4, 2), "12.34");
    }
}
