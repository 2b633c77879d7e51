//! Configurable verification sweeps over every identity in the crate.
//!
//! Each check enumerates its identity at a scale derived from the config and
//! reports case/failure counts plus the first failing tuple. Shift sampling
//! is seeded, so a given config always produces the same report.

use num_traits::Signed;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use crate::exact::{pow2, rat, ExactRational, MAX_LEVEL};
use crate::l2::{
    l2sq_exact, leading_constant, mixed_sum_value, optimal_zero_count, reflection_gap,
    shifted_l2sq_value, symmetrized_l2sq_value, ConstantKind,
};
use crate::localdisc::{
    local_discrepancy, local_discrepancy_extended, local_discrepancy_sym, FormulaRow, GridCounts,
};
use crate::oracles::{
    alpha_cross_product_sum, alpha_equal_product_sum, alpha_equal_product_value,
    cross_integral_decomposition, digit_product_sum, mixed_grid_sum, norm_cross_sum,
    norm_square_sum, norm_square_value, ShiftSide,
};
use crate::pointset::{hammersley, symmetrized, Shift};

/// The individual verification sweeps, in canonical report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Digit formula ≡ counting on the full grid; extension ≡ counting at
    /// random rationals; symmetrized additivity.
    LocalFormula,
    /// XOR digit-product sums over α against their closed forms.
    DigitProducts,
    /// Distance-to-nearest-integer sums over β against their closed forms.
    NormSums,
    /// k-fold digit-product sums with mixed shift assignments.
    KProducts,
    /// Normalized double-grid sum of Δ1·Δ2 against its closed form.
    MixedGrid,
    /// Pairwise (N·L2)² of shifted sets against the closed form in (m, l).
    ShiftedL2,
    /// Pairwise (N·L2)² of symmetrized sets against the closed form in m,
    /// including shift independence.
    SymmetrizedL2,
    /// Cell-wise cross-integral decomposition: per-term closed forms and the
    /// independent pairwise route.
    Decomposition,
    /// L2 gap between the exact-reflection and complementary-shift
    /// symmetrizations against 1/N.
    ReflectionGap,
    /// Leading constants, the N-form identity, the optimal zero count, and
    /// the growth rate of the symmetrized closed form.
    Constants,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::LocalFormula,
        Check::DigitProducts,
        Check::NormSums,
        Check::KProducts,
        Check::MixedGrid,
        Check::ShiftedL2,
        Check::SymmetrizedL2,
        Check::Decomposition,
        Check::ReflectionGap,
        Check::Constants,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Check::LocalFormula => "local-formula",
            Check::DigitProducts => "digit-products",
            Check::NormSums => "norm-sums",
            Check::KProducts => "k-products",
            Check::MixedGrid => "mixed-grid",
            Check::ShiftedL2 => "shifted-l2",
            Check::SymmetrizedL2 => "symmetrized-l2",
            Check::Decomposition => "decomposition",
            Check::ReflectionGap => "reflection-gap",
            Check::Constants => "constants",
        }
    }

    /// Parses a canonical id or one of the conventional aliases used in the
    /// literature-style numbering.
    pub fn parse(s: &str) -> Option<Check> {
        match s {
            "local-formula" | "lemma1" | "lemma2" => Some(Check::LocalFormula),
            "digit-products" | "lemma3" => Some(Check::DigitProducts),
            "norm-sums" | "lemma4" => Some(Check::NormSums),
            "k-products" | "products" => Some(Check::KProducts),
            "mixed-grid" | "lemma6" => Some(Check::MixedGrid),
            "shifted-l2" | "lemma5" => Some(Check::ShiftedL2),
            "symmetrized-l2" | "theorem1" => Some(Check::SymmetrizedL2),
            "decomposition" => Some(Check::Decomposition),
            "reflection-gap" | "corollary" => Some(Check::ReflectionGap),
            "constants" => Some(Check::Constants),
            _ => None,
        }
    }
}

/// Scale configuration for a sweep run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Largest level to test; each check additionally has a ceiling chosen
    /// so the default run stays fast.
    pub max_m: u32,
    /// Enumerate all 2^m shifts up to `max_m` instead of the per-check
    /// exhaustive cutoffs (exponential — intended for small `max_m`).
    pub exhaustive: bool,
    /// Seed for sampled shifts and random rational test points.
    pub seed: u64,
    /// Sampled shifts per level beyond an exhaustive cutoff.
    pub shift_samples: usize,
    /// Random (α, β) pairs per (m, σ) for the extension check.
    pub random_points: usize,
    /// Restricts the run to the listed checks.
    pub only: Option<Vec<Check>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_m: 6,
            exhaustive: false,
            seed: 0x53_59_4d_48, // arbitrary fixed default
            shift_samples: 32,
            random_points: 1000,
            only: None,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failures == 0)
    }

    pub fn total_cases(&self) -> u64 {
        self.outcomes.iter().map(|o| o.cases).sum()
    }
}

/// Runs the configured checks and returns a deterministic report.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let outcomes = Check::ALL
        .iter()
        .filter(|c| cfg.only.as_ref().map_or(true, |only| only.contains(c)))
        .map(|&check| run_check(check, cfg))
        .collect();
    VerifyReport { outcomes }
}

fn run_check(check: Check, cfg: &VerifyConfig) -> CheckOutcome {
    let mut tally = Tally::new(check);
    match check {
        Check::LocalFormula => check_local_formula(cfg, &mut tally),
        Check::DigitProducts => check_digit_products(cfg, &mut tally),
        Check::NormSums => check_norm_sums(cfg, &mut tally),
        Check::KProducts => check_k_products(cfg, &mut tally),
        Check::MixedGrid => check_mixed_grid(cfg, &mut tally),
        Check::ShiftedL2 => check_shifted_l2(cfg, &mut tally),
        Check::SymmetrizedL2 => check_symmetrized_l2(cfg, &mut tally),
        Check::Decomposition => check_decomposition(cfg, &mut tally),
        Check::ReflectionGap => check_reflection_gap(cfg, &mut tally),
        Check::Constants => check_constants(cfg, &mut tally),
    }
    tally.finish()
}

struct Tally {
    check: Check,
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(check: Check) -> Tally {
        Tally {
            check,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            check: self.check,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// Shifts for level `m`: exhaustive up to a cutoff (or up to `max_m` with
/// the exhaustive flag), `samples` seeded draws beyond.
fn shifts_for(cfg: &VerifyConfig, m: u32, cutoff: u32, stream: u64, samples: usize) -> Vec<Shift> {
    let effective = if cfg.exhaustive { cfg.max_m } else { cutoff };
    if m <= effective {
        Shift::all(m).expect("level checked").collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(
            cfg.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ u64::from(m),
        );
        (0..samples)
            .map(|_| Shift::sample(m, &mut rng).expect("level checked"))
            .collect()
    }
}

fn random_unit_rational(rng: &mut ChaCha8Rng, max_den: u64) -> ExactRational {
    let den = rng.random_range(1..=max_den);
    let num = rng.random_range(1..=den);
    rat(num as i64, den as i64)
}

fn check_local_formula(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(6) {
        for shift in shifts_for(cfg, m, 4, 1, cfg.shift_samples) {
            let set = hammersley(m, &shift).expect("valid construction");
            let counts = GridCounts::new(&set);
            // Digit formula against counting, exhaustively over Q*(2^m)².
            for b in 1..pow2(m) {
                let row = FormulaRow::new(&shift, b);
                for a in 1..pow2(m) {
                    let lhs = row.delta_scaled(a);
                    let rhs = (pow2(m) * counts.count(a, b)) as i64 - (a * b) as i64;
                    tally.case(lhs == rhs, || {
                        format!(
                            "local-formula m={m} σ={shift} α={a}/{n} β={b}/{n}: \
                             formula {lhs} ≠ counting {rhs} (×2^m)",
                            n = pow2(m)
                        )
                    });
                }
            }
            // Extension and symmetrized additivity at random rationals.
            let sym = symmetrized(m, &shift).expect("valid construction");
            let mut rng =
                ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xA1FA ^ (u64::from(m) << 8) ^ shift.as_int());
            let mut points: Vec<(ExactRational, ExactRational)> = vec![
                (rat(1, 1), rat(1, 1)),
                (rat(1, 1), rat(1, 2)),
                (rat(2 * pow2(m) as i64 - 1, 2 * pow2(m) as i64), rat(1, 1)),
            ];
            for _ in 0..cfg.random_points {
                points.push((
                    random_unit_rational(&mut rng, 1000),
                    random_unit_rational(&mut rng, 1000),
                ));
            }
            for (alpha, beta) in points {
                let ext = local_discrepancy_extended(m, &shift, &alpha, &beta)
                    .expect("in-domain arguments");
                let direct = local_discrepancy(&set, &alpha, &beta);
                tally.case(ext == direct, || {
                    format!(
                        "extension m={m} σ={shift} α={alpha} β={beta}: {ext} ≠ {direct}"
                    )
                });
                let ext_sym = local_discrepancy_sym(m, &shift, &alpha, &beta)
                    .expect("in-domain arguments");
                let direct_sym = local_discrepancy(&sym, &alpha, &beta);
                tally.case(ext_sym == direct_sym, || {
                    format!(
                        "additivity m={m} σ={shift} α={alpha} β={beta}: {ext_sym} ≠ {direct_sym}"
                    )
                });
            }
        }
    }
}

fn check_digit_products(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(6) {
        for shift in Shift::all(m).expect("level checked") {
            for b in 0..pow2(m) {
                let beta = crate::exact::DyadicRational::new(b, m).expect("on grid");
                for u1 in 0..m {
                    let sum = alpha_equal_product_sum(m, &shift, &beta, u1).expect("in range");
                    let value =
                        alpha_equal_product_value(m, &shift, &beta, u1).expect("in range");
                    tally.case(sum == value, || {
                        format!(
                            "digit-products equal m={m} σ={shift} β={beta} u={u1}: \
                             {sum} ≠ {value}"
                        )
                    });
                    for u2 in 0..m {
                        if u1 == u2 {
                            continue;
                        }
                        let sum = alpha_cross_product_sum(m, &shift, &beta, u1, u2)
                            .expect("in range");
                        let value = rat(pow2(m) as i64, 4);
                        tally.case(sum == value, || {
                            format!(
                                "digit-products cross m={m} σ={shift} β={beta} \
                                 u=({u1},{u2}): {sum} ≠ {value}"
                            )
                        });
                    }
                }
            }
        }
    }
}

fn check_norm_sums(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(MAX_LEVEL) {
        for u1 in 0..m {
            let sum = norm_square_sum(m, u1).expect("in range");
            let value = norm_square_value(m, u1).expect("in range");
            tally.case(sum == value, || {
                format!("norm-sums square m={m} u={u1}: {sum} ≠ {value}")
            });
            for u2 in (u1 + 1)..m {
                let sum = norm_cross_sum(m, u1, u2).expect("in range");
                let value = rat(pow2(m) as i64, 16);
                tally.case(sum == value, || {
                    format!("norm-sums cross m={m} u=({u1},{u2}): {sum} ≠ {value}")
                });
            }
        }
    }
}

fn check_k_products(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 2..=cfg.max_m.min(6) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD161 ^ u64::from(m));
        let shifts: Vec<Shift> = (0..4)
            .map(|_| Shift::sample(m, &mut rng).expect("level checked"))
            .collect();
        let betas: Vec<u64> = (0..4).map(|_| rng.random_range(0..pow2(m))).collect();
        for k in 1..=3.min(m - 1) {
            for combo in index_combinations(m, k) {
                for assignment in 0..pow2(k) {
                    let factors: Vec<(u32, ShiftSide)> = combo
                        .iter()
                        .enumerate()
                        .map(|(i, &u)| {
                            let side = if (assignment >> i) & 1 == 0 {
                                ShiftSide::Primary
                            } else {
                                ShiftSide::Complement
                            };
                            (u, side)
                        })
                        .collect();
                    for shift in &shifts {
                        for &b in &betas {
                            let beta =
                                crate::exact::DyadicRational::new(b, m).expect("on grid");
                            let sum = digit_product_sum(m, shift, &beta, &factors)
                                .expect("valid factors");
                            let value = rat(pow2(m - k) as i64, 1);
                            tally.case(sum == value, || {
                                format!(
                                    "k-products m={m} σ={shift} β={beta} factors={factors:?}: \
                                     {sum} ≠ {value}"
                                )
                            });
                        }
                    }
                }
            }
        }
    }
}

fn index_combinations(m: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: u32, m: u32, k: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k as usize {
            out.push(current.clone());
            return;
        }
        for u in start..m {
            current.push(u);
            rec(u + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

fn check_mixed_grid(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(8) {
        for shift in shifts_for(cfg, m, 5, 6, 8) {
            let sum = mixed_grid_sum(m, &shift).expect("within cap");
            let value = mixed_sum_value(m, shift.zero_count()).expect("l in range");
            tally.case(sum == value, || {
                format!("mixed-grid m={m} σ={shift}: {sum} ≠ {value}")
            });
        }
    }
}

fn check_shifted_l2(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(12) {
        for shift in shifts_for(cfg, m, 6, 5, 8) {
            let set = hammersley(m, &shift).expect("valid construction");
            let got = l2sq_exact(&set).expect("nonempty");
            let value = shifted_l2sq_value(m, shift.zero_count()).expect("l in range");
            tally.case(got == value, || {
                format!("shifted-l2 m={m} σ={shift} l={}: {got} ≠ {value}", shift.zero_count())
            });
        }
    }
}

fn check_symmetrized_l2(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(10) {
        let value = symmetrized_l2sq_value(m);
        let mut seen: Option<(ExactRational, Shift)> = None;
        for shift in shifts_for(cfg, m, 6, 2, cfg.shift_samples) {
            let set = symmetrized(m, &shift).expect("valid construction");
            let got = l2sq_exact(&set).expect("nonempty");
            tally.case(got == value, || {
                format!("symmetrized-l2 m={m} σ={shift}: {got} ≠ {value}")
            });
            if let Some((first, first_shift)) = &seen {
                tally.case(&got == first, || {
                    format!(
                        "shift independence m={m}: σ={shift} gives {got}, \
                         σ={first_shift} gave {first}"
                    )
                });
            } else {
                seen = Some((got, shift));
            }
        }
    }
}

fn check_decomposition(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(8) {
        for shift in shifts_for(cfg, m, 5, 3, 8) {
            let report = cross_integral_decomposition(m, &shift).expect("within cap");
            for (name, term) in report.terms() {
                tally.case(term.matches, || {
                    format!(
                        "decomposition m={m} σ={shift} {name}: {} ≠ {}",
                        term.computed, term.predicted
                    )
                });
            }
            tally.case(report.s2_plus_s3_zero, || {
                format!("decomposition m={m} σ={shift}: S2 + S3 ≠ 0")
            });
            tally.case(report.sum_identity, || {
                format!(
                    "decomposition m={m} σ={shift}: ΣI ≠ pairwise cross integral {}",
                    report.cross_total
                )
            });
        }
    }
}

fn check_reflection_gap(cfg: &VerifyConfig, tally: &mut Tally) {
    for m in 1..=cfg.max_m.min(10) {
        for shift in shifts_for(cfg, m, 6, 4, cfg.shift_samples) {
            let gap = reflection_gap(m, &shift).expect("valid construction");
            tally.case(gap.holds, || {
                format!(
                    "reflection-gap m={m} σ={shift}: gap {} exceeds 1/{}",
                    gap.gap_decimal,
                    2 * pow2(m)
                )
            });
        }
    }
}

fn check_constants(cfg: &VerifyConfig, tally: &mut Tally) {
    let _ = cfg;
    for (kind, prefix) in [
        (ConstantKind::Symmetrized, "0.2451"),
        (ConstantKind::BalancedShift, "0.1938"),
        (ConstantKind::Base22, "0.1790"),
    ] {
        let c = leading_constant(kind, 12);
        tally.case(c.decimal.starts_with(prefix), || {
            format!("constants {kind:?}: {} does not start with {prefix}", c.decimal)
        });
    }
    // Closed form agrees with its N-form restatement.
    for m in 1..=14u32 {
        let n = 2 * pow2(m) as i64;
        let n_form =
            rat(m as i64 + 1, 24) + rat(4, 3) + rat(2, n) - rat(2, 9 * n * n);
        let direct = symmetrized_l2sq_value(m);
        tally.case(direct == n_form, || {
            format!("constants N-form m={m}: {direct} ≠ {n_form}")
        });
    }
    // The optimal zero count minimizes the shifted closed form.
    for m in 6..=12u32 {
        let best = shifted_l2sq_value(m, optimal_zero_count(m)).expect("in range");
        for l in 0..=m {
            let other = shifted_l2sq_value(m, l).expect("in range");
            tally.case(best <= other, || {
                format!(
                    "constants argmin m={m}: l={} loses to l={l}",
                    optimal_zero_count(m)
                )
            });
        }
    }
    // Growth: the symmetrized value increases by ~1/24 per level.
    for m in 4..=13u32 {
        let diff = symmetrized_l2sq_value(m + 1) - symmetrized_l2sq_value(m);
        let dev = (diff - rat(1, 24)).abs();
        let bound = crate::exact::pow2_rat(-(m as i32));
        tally.case(dev < bound, || {
            format!("constants growth m={m}: |Δ − 1/24| = {dev} ≥ {bound}")
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn default_small_run_passes() {
        let cfg = VerifyConfig {
            max_m: 3,
            random_points: 50,
            shift_samples: 4,
            ..VerifyConfig::default()
        };
        let report = run(&cfg);
        assert!(report.passed(), "{:#?}", report.outcomes);
        assert_eq!(report.outcomes.len(), Check::ALL.len());
        assert!(report.total_cases() > 0);
    }

    #[test]
    fn only_filter_restricts_checks() {
        let cfg = VerifyConfig {
            max_m: 2,
            random_points: 10,
            only: Some(vec![Check::NormSums, Check::Constants]),
            ..VerifyConfig::default()
        };
        let report = run(&cfg);
        assert_eq!(report.outcomes.len(), 2);
        assert!(report.passed());
    }

    #[test]
    fn check_parsing_accepts_aliases() {
        assert_eq!(Check::parse("lemma4"), Some(Check::NormSums));
        assert_eq!(Check::parse("theorem1"), Some(Check::SymmetrizedL2));
        assert_eq!(Check::parse("corollary"), Some(Check::ReflectionGap));
        assert_eq!(Check::parse("norm-sums"), Some(Check::NormSums));
        assert_eq!(Check::parse("bogus"), None);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = VerifyConfig {
            max_m: 4,
            random_points: 20,
            shift_samples: 4,
            ..VerifyConfig::default()
        };
        let a = run(&cfg);
        let b = run(&cfg);
        let to_tuples = |r: &VerifyReport| {
            r.outcomes
                .iter()
                .map(|o| (o.check.id(), o.cases, o.failures))
                .collect::<Vec<_>>()
        };
        assert_eq!(to_tuples(&a), to_tuples(&b));
    }
}
