//! The strong converse exponent across its three rate regimes.
//!
//! For a rate `R`, input distribution `p`, and channel `W`, the strong
//! converse exponent is the variational value
//!
//! ```text
//! E_sc(R, W, p) = sup_{ρ > 1} ((ρ − 1)/ρ) (R − I_ρ(p; W)),
//! ```
//!
//! the exponential speed at which the correct-decoding probability of
//! constant composition codes decays above the mutual information. It
//! resolves into three regimes:
//!
//! * **ZERO** — `R ≤ I₁(p; W)`: the exponent is 0.
//! * **PARAMETRIC** — the supremum is attained at a unique finite order ρ*
//!   characterized by `I₁(p; W_{ρ*}^q) = R` ([`i1_of_tilted`] is monotone,
//!   so ρ* is found by bisection); the exponent is `C₁(W_{ρ*}^q ‖ W | p)`
//!   and the slope in the rate is `(ρ* − 1)/ρ*`.
//! * **HIGH_RATE** — `R` at or above `lim_{ρ→∞} I₁(p; W_ρ^q)`: the exponent
//!   is `R − I_∞(p; W)` with slope 1.
//!
//! The high-rate threshold and `I_∞` have no closed forms; they are
//! estimated by a geometric sweep of the order with a reported (not
//! asserted) extrapolation tail; see [`rate_threshold_high`].

use alloc::format;
use alloc::string::ToString;

use crate::augustin::{
    i1_from_solution, solve_augustin, solve_augustin_from, AugustinSolution, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};
use crate::dist::{Channel, Distribution};
use crate::divergence::{conditional_channel_divergence, tilted_channel};
use crate::error::{Error, Result};

/// Default cap on the order ρ for threshold estimation and bisection.
pub const DEFAULT_RHO_CAP: f64 = 65536.0;

/// Rates within this distance of a regime boundary snap to the boundary
/// regime, avoiding ill-conditioned bisection at slope extremes.
pub const RATE_SNAP_TOLERANCE: f64 = 1e-6;

/// The bisection for ρ* stops once `|i1_of_tilted(ρ) − rate|` is below this.
pub const BISECTION_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Maximum number of bisection iterations for ρ*.
const BISECTION_MAX_ITER: usize = 200;

/// First order evaluated by the threshold chain.
const CHAIN_START: f64 = 16.0;

/// The threshold chain stops when successive `i1_of_tilted` values differ
/// by less than this.
const CHAIN_STOP_DIFF: f64 = 1e-7;

/// The rate regime a strong-converse evaluation resolved to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `rate ≤ I₁(p; W)`: the exponent vanishes.
    Zero,
    /// The exponent is parametrized by a finite order ρ* > 1.
    Parametric,
    /// `rate` at or above the high-rate threshold: exponent `rate − I_∞`.
    HighRate,
}

impl Regime {
    /// Canonical upper-case name, as emitted in CSV/JSON output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Zero => "ZERO",
            Regime::Parametric => "PARAMETRIC",
            Regime::HighRate => "HIGH_RATE",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A strong-converse exponent evaluation at one rate.
#[derive(Debug, Clone)]
pub struct SceResult {
    /// The rate the exponent was evaluated at, in nats.
    pub rate: f64,
    /// Which regime the rate falls in.
    pub regime: Regime,
    /// The parametric order: in `(1, ∞)` for [`Regime::Parametric`], `+∞`
    /// in [`Regime::HighRate`], and 1 at the [`Regime::Zero`] boundary.
    pub rho_star: f64,
    /// `E_sc(rate, W, p) ≥ 0` in nats.
    pub exponent: f64,
    /// `dE_sc/dR ∈ [0, 1]`: 0 at the ZERO boundary, `(ρ*−1)/ρ*` in the
    /// parametric regime, 1 in the high-rate regime.
    pub slope: f64,
    /// `I₁(p; W)`, the lower boundary of the parametric window.
    pub i1: f64,
    /// The estimated high-rate threshold `lim_{ρ→∞} I₁(p; W_ρ^q)`.
    pub rate_threshold_high: f64,
}

/// The high-rate threshold estimate produced by [`rate_threshold_high`].
#[derive(Debug, Clone)]
pub struct ThresholdEstimate {
    /// Estimated `lim_{ρ→∞} I₁(p; W_ρ^q)`: the rate at which the
    /// parametric regime hands over to the high-rate regime.
    pub threshold: f64,
    /// Estimated `I_∞(p; W)`, from Richardson extrapolation of `I_ρ` under
    /// the error model `I_ρ ≈ I_∞ − c/(ρ − 1)`.
    pub i_infinity: f64,
    /// The last successive difference of the `I_ρ` chain — a heuristic
    /// bound on the extrapolation tail, reported but never asserted.
    pub tail_bound: f64,
    /// The order at which the chain stopped.
    pub rho_stop: f64,
    /// Whether the chain stabilized before hitting the order cap.
    pub converged: bool,
}

/// Evaluates one chain/bisection point: a warm-started solve at order `rho`
/// together with `i1_of_tilted(rho)`.
fn eval_point(
    rho: f64,
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
    warm: &mut Option<Distribution>,
) -> Result<(AugustinSolution, f64)> {
    // The fixed-point map is assembled from exponentials of order-scaled
    // logarithms, so the smallest residual it can reach grows linearly
    // with the order; chain and bisection probes in the tens of thousands
    // cannot hit the base tolerance and do not need to — the quantities
    // read off a probe are first-order in the residual at worst, and the
    // stopping rules they feed act at the 10⁻⁷ scale.
    let tol = tol * rho.max(1.0);
    let solution = match warm {
        Some(start) => solve_augustin_from(rho, channel, p, tol, max_iter, start)?,
        None => solve_augustin(rho, channel, p, tol, max_iter)?,
    };
    let i1 = i1_from_solution(&solution, channel, p)?;
    *warm = Some(solution.mean.clone());
    Ok((solution, i1))
}

/// Estimates the high-rate threshold `lim_{ρ→∞} i1_of_tilted(ρ)` and
/// `I_∞(p; W)` with default solver settings and order cap.
///
/// See [`rate_threshold_high_with`].
pub fn rate_threshold_high(channel: &Channel, p: &Distribution) -> Result<ThresholdEstimate> {
    rate_threshold_high_with(channel, p, DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_RHO_CAP)
}

/// [`rate_threshold_high`] with explicit solver tolerance, iteration budget,
/// and order cap.
///
/// Evaluates `i1_of_tilted` at geometrically increasing orders
/// (16, 32, 64, …) with warm-started solves until successive values differ
/// by less than 10⁻⁷ or the cap is exceeded; the threshold is the last
/// value, flagged non-converged in the latter case. `I_∞` is estimated from
/// the final two Augustin informations by one Richardson step under the
/// model `I_ρ ≈ I_∞ − c/(ρ − 1)`, with the last successive difference
/// reported as a heuristic tail bound.
pub fn rate_threshold_high_with(
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
    rho_cap: f64,
) -> Result<ThresholdEstimate> {
    if !(rho_cap > 2.0) || !rho_cap.is_finite() {
        return Err(Error::InvalidInput(format!(
            "rate_threshold_high: order cap must be a finite real > 2, got {rho_cap}"
        )));
    }
    let mut warm = None;
    let mut rho = if CHAIN_START * 2.0 <= rho_cap {
        CHAIN_START
    } else {
        0.5 * rho_cap
    };
    let mut prev: Option<(f64, f64, f64)> = None; // (rho, i1, info)
    let mut prev2: Option<(f64, f64, f64)> = None;
    loop {
        let (solution, i1) = match eval_point(rho, channel, p, tol, max_iter, &mut warm) {
            Ok(point) => point,
            // The damped iteration stiffens linearly in the order: past a
            // channel-dependent wall it cannot reach any useful residual
            // in any budget. A probe that stalls there is the same
            // situation as running out of cap — stop the chain at the
            // last feasible order and flag the estimate non-converged.
            Err(Error::NoConvergence { .. }) if prev.is_some() => {
                let (prev_rho, prev_i1, prev_info) = prev.expect("guarded by is_some");
                let (i_infinity, tail_bound) = match prev2 {
                    Some((p2_rho, _, p2_info)) => {
                        let delta = prev_info - p2_info;
                        (prev_info + delta * (p2_rho - 1.0) / p2_rho, delta.abs())
                    }
                    None => (prev_info, f64::INFINITY),
                };
                return Ok(ThresholdEstimate {
                    threshold: prev_i1,
                    i_infinity,
                    tail_bound,
                    rho_stop: prev_rho,
                    converged: false,
                });
            }
            Err(e) => return Err(e),
        };
        let richardson = |prev: &Option<(f64, f64, f64)>| -> (f64, f64) {
            match prev {
                Some((prev_rho, _, prev_info)) => {
                    let delta = solution.info - prev_info;
                    let correction = delta * (prev_rho - 1.0) / prev_rho;
                    (solution.info + correction, delta.abs())
                }
                None => (solution.info, f64::INFINITY),
            }
        };
        if let Some((_, prev_i1, _)) = prev {
            if (i1 - prev_i1).abs() < CHAIN_STOP_DIFF {
                let (i_infinity, tail_bound) = richardson(&prev);
                return Ok(ThresholdEstimate {
                    threshold: i1,
                    i_infinity,
                    tail_bound,
                    rho_stop: rho,
                    converged: true,
                });
            }
        }
        if rho * 2.0 > rho_cap {
            let (i_infinity, tail_bound) = richardson(&prev);
            return Ok(ThresholdEstimate {
                threshold: i1,
                i_infinity,
                tail_bound,
                rho_stop: rho,
                converged: false,
            });
        }
        prev2 = prev;
        prev = Some((rho, i1, solution.info));
        rho *= 2.0;
    }
}

/// Computes the strong converse exponent at `rate` with default settings.
///
/// # Example
///
/// ```
/// use augustin_core::dist::{Channel, Distribution};
/// use augustin_core::sce::{sce_full, Regime};
///
/// let w = Channel::binary_symmetric(0.1).unwrap();
/// let p = Distribution::uniform(w.input_alphabet().clone());
/// // Below the mutual information the exponent vanishes…
/// let low = sce_full(0.3, &w, &p).unwrap();
/// assert_eq!(low.regime, Regime::Zero);
/// assert_eq!(low.exponent, 0.0);
/// // …and in the parametric window it is strictly positive.
/// let mid = sce_full(0.6272862446184671, &w, &p).unwrap();
/// assert_eq!(mid.regime, Regime::Parametric);
/// assert!((mid.rho_star - 2.0).abs() < 1e-6);
/// ```
pub fn sce_full(rate: f64, channel: &Channel, p: &Distribution) -> Result<SceResult> {
    sce_full_with(rate, channel, p, DEFAULT_TOL, DEFAULT_MAX_ITER, DEFAULT_RHO_CAP)
}

/// [`sce_full`] with explicit solver settings and order cap.
pub fn sce_full_with(
    rate: f64,
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
    rho_cap: f64,
) -> Result<SceResult> {
    sce_full_detailed(rate, channel, p, tol, max_iter, rho_cap).map(|(result, _)| result)
}

/// [`sce_full_with`], additionally returning the Augustin solution at ρ*
/// when the rate is parametric (callers evaluating bound prefactors need
/// the mean and `I_ρ*` and should not redo the solve).
pub fn sce_full_detailed(
    rate: f64,
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
    rho_cap: f64,
) -> Result<(SceResult, Option<AugustinSolution>)> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidInput(format!(
            "sce_full: rate must be a positive real, got {rate}"
        )));
    }
    let i1 = solve_augustin(1.0, channel, p, tol, max_iter)?.info;
    let estimate = rate_threshold_high_with(channel, p, tol, max_iter, rho_cap)?;

    // The ZERO test runs first: for degenerate channels the parametric
    // window is empty (i1 equals the threshold) and boundary rates must
    // resolve to the zero-exponent side.
    if rate <= i1 + RATE_SNAP_TOLERANCE {
        let result = SceResult {
            rate,
            regime: Regime::Zero,
            rho_star: 1.0,
            exponent: 0.0,
            slope: 0.0,
            i1,
            rate_threshold_high: estimate.threshold,
        };
        return Ok((result, None));
    }
    if rate >= estimate.threshold - RATE_SNAP_TOLERANCE {
        let exponent = (rate - estimate.i_infinity).max(0.0);
        let result = SceResult {
            rate,
            regime: Regime::HighRate,
            rho_star: f64::INFINITY,
            exponent,
            slope: 1.0,
            i1,
            rate_threshold_high: estimate.threshold,
        };
        return Ok((result, None));
    }

    // PARAMETRIC: bisect ρ on the monotone curve i1_of_tilted(ρ) = rate.
    // Bracket by doubling from ρ = 2; the lower endpoint 1 + 1e-9 is valid
    // because i1_of_tilted(1⁺) = I₁ < rate here.
    let mut warm = None;
    let mut lo = 1.0 + 1e-9;
    let mut hi = 2.0;
    let (_, mut f_hi) = eval_point(hi, channel, p, tol, max_iter, &mut warm)?;
    while f_hi < rate {
        lo = hi;
        hi *= 2.0;
        if hi > rho_cap {
            return Err(Error::Regime(format!(
                "sce_full: rate {rate} lies below the estimated high-rate threshold \
                 {} but i1_of_tilted never reached it up to the order cap {rho_cap} \
                 (last value {f_hi} at order {lo}; threshold chain converged: {})",
                estimate.threshold, estimate.converged
            )));
        }
        let point = match eval_point(hi, channel, p, tol, max_iter, &mut warm) {
            Ok(point) => point,
            // Same wall as in the threshold chain: a rate this close to
            // the (estimated) threshold needs a bracketing order the
            // solver cannot feasibly resolve, which is a regime failure,
            // not a numerical accident worth retrying.
            Err(Error::NoConvergence { residual, .. }) => {
                return Err(Error::Regime(format!(
                    "sce_full: rate {rate} lies below the estimated high-rate threshold {} \
                     but the order-{hi} solve needed to bracket ρ* is beyond the solver's \
                     feasible range (stalled at residual {residual:.3e})",
                    estimate.threshold
                )));
            }
            Err(e) => return Err(e),
        };
        f_hi = point.1;
    }

    let mut pinned: Option<(f64, AugustinSolution, f64)> = None;
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let (solution, f_mid) = eval_point(mid, channel, p, tol, max_iter, &mut warm)?;
        let residual = f_mid - rate;
        pinned = Some((mid, solution, residual));
        if residual.abs() <= BISECTION_RESIDUAL_TOLERANCE {
            break;
        }
        if f_mid < rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rho_star, solution, residual) =
        pinned.expect("bisection runs at least one iteration");
    if residual.abs() > BISECTION_RESIDUAL_TOLERANCE {
        return Err(Error::Regime(format!(
            "sce_full: bisection for rate {rate} stalled at order {rho_star} with \
             rate residual {residual:.3e}"
        )));
    }

    let tilted = tilted_channel(rho_star, channel, &solution.mean)?;
    let exponent = conditional_channel_divergence(1.0, &tilted, channel, p)?;
    let result = SceResult {
        rate,
        regime: Regime::Parametric,
        rho_star,
        exponent,
        slope: (rho_star - 1.0) / rho_star,
        i1,
        rate_threshold_high: estimate.threshold,
    };
    Ok((result, Some(solution)))
}

/// Independent lower-bound oracle: the maximum of
/// `((ρ − 1)/ρ)(rate − I_ρ(p; W))` over a finite grid of orders.
///
/// Every grid term under-approximates the supremum defining the exponent,
/// so the returned value never exceeds `sce_full(..).exponent` (up to
/// solver noise); dense grids approach it.
///
/// # Errors
///
/// `InvalidInput` for an empty grid or non-finite rate, `Domain` for grid
/// orders not strictly above 1.
pub fn sce_grid_oracle(
    rate: f64,
    channel: &Channel,
    p: &Distribution,
    rho_grid: &[f64],
) -> Result<f64> {
    if rho_grid.is_empty() {
        return Err(Error::InvalidInput(
            "sce_grid_oracle: the order grid must be nonempty".to_string(),
        ));
    }
    if !rate.is_finite() {
        return Err(Error::InvalidInput(format!(
            "sce_grid_oracle: rate must be finite, got {rate}"
        )));
    }
    let mut warm = None;
    let mut best = f64::NEG_INFINITY;
    for &rho in rho_grid {
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(Error::Domain(format!(
                "sce_grid_oracle: grid orders must be finite reals > 1, got {rho}"
            )));
        }
        let (solution, _) = eval_point(rho, channel, p, DEFAULT_TOL, DEFAULT_MAX_ITER, &mut warm)?;
        let value = (rho - 1.0) / rho * (rate - solution.info);
        best = best.max(value);
    }
    Ok(best)
}

/// Discrepancy of the Dueck–Körner variational characterization at a
/// parametric rate: evaluates
/// `C₁(V ‖ W | p) + max(0, rate − I₁(p; V))` at `V = W_{ρ*}^q` and returns
/// its absolute difference from the exponent. The characterization makes
/// the objective collapse to the exponent there, so the discrepancy is at
/// the level of solver tolerance (≤ 10⁻⁸ in practice).
///
/// # Errors
///
/// `Regime` when the rate does not resolve to the parametric regime.
pub fn dueck_korner_check(rate: f64, channel: &Channel, p: &Distribution) -> Result<f64> {
    let (result, solution) = sce_full_detailed(
        rate,
        channel,
        p,
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
        DEFAULT_RHO_CAP,
    )?;
    if result.regime != Regime::Parametric {
        return Err(Error::Regime(format!(
            "dueck_korner_check: rate {rate} resolves to regime {}, but the variational \
             characterization is evaluated only at PARAMETRIC rates",
            result.regime
        )));
    }
    let solution = solution.expect("parametric results carry their solution");
    let v = tilted_channel(result.rho_star, channel, &solution.mean)?;
    let penalty = conditional_channel_divergence(1.0, &v, channel, p)?;
    let i1_v = solve_augustin(1.0, &v, p, DEFAULT_TOL, DEFAULT_MAX_ITER)?.info;
    let objective = penalty + (rate - i1_v).max(0.0);
    Ok((objective - result.exponent).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Alphabet;
    use alloc::vec;

    fn bsc01() -> (Channel, Distribution) {
        let w = Channel::binary_symmetric(0.1).unwrap();
        let p = Distribution::uniform(w.input_alphabet().clone());
        (w, p)
    }

    fn identical_rows() -> (Channel, Distribution) {
        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let w = Channel::from_matrix(input.clone(), output, &[vec![0.4, 0.6], vec![0.4, 0.6]])
            .unwrap();
        let p = Distribution::uniform(input);
        (w, p)
    }

    fn noiseless() -> (Channel, Distribution) {
        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let w = Channel::from_matrix(input.clone(), output, &[vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        let p = Distribution::uniform(input);
        (w, p)
    }

    // Reference values computed independently with 50-digit arithmetic.
    const BSC_I1: f64 = 0.368_064_207_168_497_070;
    const BSC_RATE_AT_2: f64 = 0.627_286_244_618_467_074; // i1_of_tilted(2)
    const BSC_EXPONENT_AT_2: f64 = 0.066_295_001_391_180_010;
    const BSC_RHO_AT_LITERAL: f64 = 1.999_997_896_936_996_567; // at rate 0.627286
    const BSC_EXPONENT_AT_LITERAL: f64 = 0.066_294_879_082_010_779;
    const BSC_SLOPE_AT_LITERAL: f64 = 0.499_999_474_233_696_282;
    const BSC_I_INFINITY: f64 = 0.587_786_664_902_119_008; // ln 1.8
    const BSC_RICHARDSON_TAIL: f64 = 0.003_625_308_1;
    const LN2: f64 = 0.693_147_180_559_945_309;

    #[test]
    fn below_mutual_information_is_zero_regime() {
        let (w, p) = bsc01();
        let r = sce_full(0.3, &w, &p).unwrap();
        assert_eq!(r.regime, Regime::Zero);
        assert_eq!(r.exponent, 0.0);
        assert_eq!(r.slope, 0.0);
        assert_eq!(r.rho_star, 1.0);
        assert!((r.i1 - BSC_I1).abs() < 1e-12);
        assert!((r.rate_threshold_high - LN2).abs() < 1e-9);
    }

    #[test]
    fn parametric_roundtrip_at_order_two() {
        let (w, p) = bsc01();
        let r = sce_full(BSC_RATE_AT_2, &w, &p).unwrap();
        assert_eq!(r.regime, Regime::Parametric);
        assert!((r.rho_star - 2.0).abs() < 1e-7, "rho {}", r.rho_star);
        assert!(
            (r.exponent - BSC_EXPONENT_AT_2).abs() < 1e-9,
            "exponent {}",
            r.exponent
        );
        assert!((r.slope - 0.5).abs() < 1e-8);
    }

    #[test]
    fn parametric_values_at_the_literal_rounded_rate() {
        let (w, p) = bsc01();
        let r = sce_full(0.627286, &w, &p).unwrap();
        assert_eq!(r.regime, Regime::Parametric);
        assert!((r.rho_star - BSC_RHO_AT_LITERAL).abs() < 1e-7, "{}", r.rho_star);
        assert!((r.exponent - BSC_EXPONENT_AT_LITERAL).abs() < 1e-9);
        assert!((r.slope - BSC_SLOPE_AT_LITERAL).abs() < 1e-8);
    }

    #[test]
    fn identical_rows_resolve_to_high_rate() {
        let (w, p) = identical_rows();
        let r = sce_full(0.1, &w, &p).unwrap();
        assert_eq!(r.regime, Regime::HighRate);
        assert_eq!(r.rho_star, f64::INFINITY);
        assert!((r.exponent - 0.1).abs() < 1e-12);
        assert_eq!(r.slope, 1.0);
        assert!(r.rate_threshold_high.abs() < 1e-12);
    }

    #[test]
    fn noiseless_channel_boundary_snaps_to_zero() {
        let (w, p) = noiseless();
        // i1 and the threshold coincide at ln 2: the parametric window is
        // empty and the boundary belongs to the zero regime.
        let r = sce_full(LN2, &w, &p).unwrap();
        assert_eq!(r.regime, Regime::Zero);
        assert_eq!(r.exponent, 0.0);
        let r = sce_full(0.8, &w, &p).unwrap();
        assert_eq!(r.regime, Regime::HighRate);
        assert!((r.exponent - (0.8 - LN2)).abs() < 1e-12);
    }

    #[test]
    fn threshold_estimate_matches_bsc_closed_forms() {
        let (w, p) = bsc01();
        let est = rate_threshold_high(&w, &p).unwrap();
        assert!(est.converged);
        assert_eq!(est.rho_stop, 32.0);
        assert!((est.threshold - LN2).abs() < 1e-9, "{}", est.threshold);
        assert!(
            (est.i_infinity - BSC_I_INFINITY).abs() < 1e-12,
            "{}",
            est.i_infinity
        );
        assert!((est.tail_bound - BSC_RICHARDSON_TAIL).abs() < 1e-7);
    }

    #[test]
    fn threshold_estimate_degenerate_channels() {
        let (w, p) = identical_rows();
        let est = rate_threshold_high(&w, &p).unwrap();
        assert!(est.converged);
        assert!(est.threshold.abs() < 1e-12);
        assert!(est.i_infinity.abs() < 1e-12);

        let (w, p) = noiseless();
        let est = rate_threshold_high(&w, &p).unwrap();
        assert!(est.converged);
        assert!((est.threshold - LN2).abs() < 1e-12);
        assert!((est.i_infinity - LN2).abs() < 1e-12);
        assert!(est.tail_bound.abs() < 1e-12);
    }

    #[test]
    fn grid_oracle_matches_at_grid_points_and_never_exceeds() {
        let (w, p) = bsc01();
        let oracle = sce_grid_oracle(BSC_RATE_AT_2, &w, &p, &[1.5, 2.0, 3.0]).unwrap();
        let full = sce_full(BSC_RATE_AT_2, &w, &p).unwrap();
        assert!((oracle - BSC_EXPONENT_AT_2).abs() < 1e-9, "{oracle}");
        assert!(oracle <= full.exponent + 1e-6);

        // A dense logarithmic grid approaches the true exponent.
        let mut grid = Vec::new();
        let mut rho = 1.01;
        while rho <= 64.0 {
            grid.push(rho);
            rho *= 1.04;
        }
        for rate in [0.45, 0.55, 0.627286, 0.66] {
            let full = sce_full(rate, &w, &p).unwrap();
            let dense = sce_grid_oracle(rate, &w, &p, &grid).unwrap();
            assert!(dense <= full.exponent + 1e-6, "rate {rate}");
            assert!(
                full.exponent - dense < 1e-4,
                "rate {rate}: {} vs {dense}",
                full.exponent
            );
        }
    }

    #[test]
    fn grid_oracle_rejects_bad_grids() {
        let (w, p) = bsc01();
        assert!(sce_grid_oracle(0.5, &w, &p, &[]).is_err());
        assert!(sce_grid_oracle(0.5, &w, &p, &[1.0]).is_err());
        assert!(sce_grid_oracle(0.5, &w, &p, &[2.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn exponent_curve_is_convex_continuous_with_matching_slope() {
        let (w, p) = bsc01();
        let step = 0.005;
        let mut rates = Vec::new();
        let mut r = 0.30;
        while r < 0.75 {
            rates.push(r);
            r += step;
        }
        let results: Vec<SceResult> =
            rates.iter().map(|&r| sce_full(r, &w, &p).unwrap()).collect();

        // Convexity: second differences of the exponent are nonnegative.
        for window in results.windows(3) {
            let second = window[2].exponent - 2.0 * window[1].exponent + window[0].exponent;
            assert!(
                second >= -1e-8,
                "convexity violated near rate {}: {second}",
                window[1].rate
            );
        }
        // Continuity across regime boundaries: adjacent values differ by at
        // most slope·step (slope ≤ 1) plus rounding.
        for window in results.windows(2) {
            let jump = (window[1].exponent - window[0].exponent).abs();
            assert!(
                jump <= step + 1e-9,
                "discontinuity near rate {}: {jump}",
                window[1].rate
            );
        }
    }

    #[test]
    fn slope_matches_central_finite_difference() {
        let (w, p) = bsc01();
        let h = 1e-4;
        for rate in [0.45, 0.55, BSC_RATE_AT_2, 0.66] {
            let mid = sce_full(rate, &w, &p).unwrap();
            assert_eq!(mid.regime, Regime::Parametric);
            let up = sce_full(rate + h, &w, &p).unwrap();
            let down = sce_full(rate - h, &w, &p).unwrap();
            let fd = (up.exponent - down.exponent) / (2.0 * h);
            assert!(
                (fd - mid.slope).abs() < 1e-4,
                "slope mismatch at rate {rate}: fd {fd} vs {}",
                mid.slope
            );
        }
    }

    #[test]
    fn dueck_korner_discrepancy_is_negligible() {
        let (w, p) = bsc01();
        for rate in [0.45, 0.55, BSC_RATE_AT_2, 0.66] {
            let d = dueck_korner_check(rate, &w, &p).unwrap();
            assert!(d <= 1e-8, "rate {rate}: discrepancy {d}");
        }
    }

    #[test]
    fn dueck_korner_requires_the_parametric_regime() {
        let (w, p) = identical_rows();
        assert!(matches!(
            dueck_korner_check(0.1, &w, &p),
            Err(Error::Regime(_))
        ));
        let (w, p) = bsc01();
        assert!(matches!(
            dueck_korner_check(0.2, &w, &p),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn rate_validation() {
        let (w, p) = bsc01();
        assert!(sce_full(0.0, &w, &p).is_err());
        assert!(sce_full(-0.5, &w, &p).is_err());
        assert!(sce_full(f64::NAN, &w, &p).is_err());
    }
}
