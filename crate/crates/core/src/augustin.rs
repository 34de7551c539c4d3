//! Augustin information and Augustin means.
//!
//! The Augustin information of order α for an input distribution `p` over a
//! channel `W` is the minimum over output measures of the conditional Rényi
//! divergence,
//!
//! ```text
//! I_α(p; W) = inf_Q C_α(W ‖ Q | p),
//! ```
//!
//! attained by a unique probability measure, the Augustin mean `q_α`. The
//! mean is characterized by a fixed-point property — it is invariant under
//! [`augustin_fixed_point_map`] — and every solve is certified a posteriori
//! through the sandwich inequality
//!
//! ```text
//! D_{1∧α}(q_α ‖ Q)  ≤  C_α(W ‖ Q | p) − I_α  ≤  D_{1∨α}(q_α ‖ Q)
//! ```
//!
//! evaluated at a fixed family of probe measures. A solve whose certificate
//! margin dips below `-`[`CERTIFICATE_TOLERANCE`] is reported as a
//! convergence failure rather than returned silently.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{Channel, Distribution};
use crate::divergence::{
    check_order, conditional_channel_divergence, conditional_renyi_divergence, renyi_divergence,
    tilted_channel, tilted_measure,
};
use crate::error::{Error, Result};
use crate::numeric;

/// Default fixed-point tolerance (L1 distance between the mean and its image).
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default iteration budget for the damped fixed-point solver.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// A solve is rejected when its certificate margin falls below the negative
/// of this tolerance; see [`AugustinSolution::certificate_margin`].
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

/// Smallest damping factor the residual-driven schedule may reach.
const DAMPING_FLOOR: f64 = 1.0 / 16.0;

/// The residual is checkpointed every this many iterations; failing to
/// shrink by [`PROGRESS_FACTOR`] between checkpoints switches the solver
/// into line-search mode.
const PROGRESS_WINDOW: usize = 64;

/// Required residual shrinkage per progress window (4× per 64 iterations,
/// i.e. an asymptotic rate of at least ~0.979 per step).
const PROGRESS_FACTOR: f64 = 0.25;

/// Seed for the certificate probe draws. Arbitrary but fixed: probes must be
/// identical across runs (and across `std`/`no_std` builds) so certificate
/// margins are reproducible.
const PROBE_SEED: u64 = 0x4155_4755_5354_494e;

/// Mixing weights for the Dirichlet-perturbed certificate probes.
const PROBE_MIX_WEIGHTS: [f64; 3] = [0.5, 0.1, 0.01];

/// Number of Dirichlet draws used for the certificate probes.
const PROBE_DIRICHLET_DRAWS: usize = 3;

/// A certified solution of the Augustin minimization.
#[derive(Debug, Clone)]
pub struct AugustinSolution {
    /// The Rényi order α of the solve.
    pub alpha: f64,
    /// The Augustin mean `q_α`: the output measure achieving the minimum.
    pub mean: Distribution,
    /// `I_α(p; W) = C_α(W ‖ mean | p)` in nats.
    pub info: f64,
    /// Number of fixed-point updates applied (0 when the starting point
    /// already met the tolerance, as happens for the α = 1 closed form).
    pub iterations: usize,
    /// `‖T(mean) − mean‖₁` where `T` is [`augustin_fixed_point_map`];
    /// at most the configured tolerance.
    pub fixed_point_residual: f64,
    /// Minimum over the probe measures `Q` of
    /// `C_α(W ‖ Q | p) − info − D_{1∧α}(mean ‖ Q)`; nonnegative for the
    /// exact mean, and ≥ `-`[`CERTIFICATE_TOLERANCE`] for accepted solves.
    pub certificate_margin: f64,
}

fn check_solver_inputs(alpha: f64, channel: &Channel, p: &Distribution, tol: f64) -> Result<()> {
    check_order(alpha)?;
    if !p.alphabet().same_as(channel.input_alphabet()) {
        return Err(Error::InvalidInput(
            "solve_augustin: p does not live on the channel input alphabet".to_string(),
        ));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidInput(format!(
            "solve_augustin: tolerance must be a positive real, got {tol}"
        )));
    }
    Ok(())
}

/// The Augustin fixed-point map `T(q) = Σ_x p(x) · W_α^q(x)`.
///
/// The Augustin mean is the unique fixed point of this map; the solver
/// iterates it with damping. Rows with `p(x) = 0` are skipped, so the map is
/// defined whenever the tilt is defined on the support of `p`.
///
/// # Errors
///
/// Propagates tilting errors (a row mutually singular with `q` is a
/// `Domain` error naming the input symbol), and `InvalidInput` on alphabet
/// mismatches.
pub fn augustin_fixed_point_map(
    alpha: f64,
    channel: &Channel,
    p: &Distribution,
    q: &Distribution,
) -> Result<Distribution> {
    check_order(alpha)?;
    if !p.alphabet().same_as(channel.input_alphabet()) {
        return Err(Error::InvalidInput(
            "augustin_fixed_point_map: p does not live on the input alphabet".to_string(),
        ));
    }
    if !q.alphabet().same_as(channel.output_alphabet()) {
        return Err(Error::InvalidInput(
            "augustin_fixed_point_map: q does not live on the output alphabet".to_string(),
        ));
    }
    let mut mixture = vec![0.0; channel.num_outputs()];
    for (x, &px) in p.probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let (tilted, _) = tilted_measure(alpha, channel.row(x), q).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!(
                "input symbol {:?}: {msg}",
                channel.input_alphabet().labels()[x]
            )),
            other => other,
        })?;
        for (acc, &ty) in mixture.iter_mut().zip(tilted.probs().iter()) {
            *acc += px * ty;
        }
    }
    Distribution::new(channel.output_alphabet().clone(), mixture)
}

fn mix(q: &Distribution, m: &Distribution, lambda: f64) -> Result<Distribution> {
    let probs: Vec<f64> = q
        .probs()
        .iter()
        .zip(m.probs().iter())
        .map(|(&qy, &my)| (1.0 - lambda) * qy + lambda * my)
        .collect();
    Distribution::new(q.alphabet().clone(), probs)
}

/// Solves the Augustin minimization at order `alpha`, starting from the
/// output marginal.
///
/// The iteration is `q ← (1 − λ) q + λ T(q)` with `λ` starting at 1, halved
/// whenever the residual `‖T(q) − q‖₁` increases (floor 1/16). That
/// schedule can crawl when the damped map sits at the edge of stability
/// (residuals then shrink monotonically but only as O(1/k)), so whenever a
/// progress window passes without a 4× residual reduction the solver
/// switches to a backtracking line search along `T(q) − q` that insists on
/// a strict residual decrease per step. Convergence is declared at residual
/// ≤ `tol`, after which the sandwich certificate is evaluated at ten probe
/// measures; see [`sandwich_margins`].
///
/// # Errors
///
/// `NoConvergence` (carrying the last residual) when the budget runs out or
/// the certificate margin is worse than `-`[`CERTIFICATE_TOLERANCE`];
/// `Domain`/`InvalidInput` on invalid orders or mismatched alphabets.
///
/// # Example
///
/// ```
/// use augustin_core::augustin::solve_augustin;
/// use augustin_core::dist::{Channel, Distribution};
///
/// let w = Channel::binary_symmetric(0.1).unwrap();
/// let p = Distribution::uniform(w.input_alphabet().clone());
/// let sol = solve_augustin(1.0, &w, &p, 1e-12, 10_000).unwrap();
/// // ln 2 − H(0.1): the mutual information of the BSC under uniform input.
/// assert!((sol.info - 0.368064).abs() < 1e-6);
/// ```
pub fn solve_augustin(
    alpha: f64,
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
) -> Result<AugustinSolution> {
    check_solver_inputs(alpha, channel, p, tol)?;
    let start = channel.output_marginal(p)?;
    solve_from_checked(alpha, channel, p, tol, max_iter, start)
}

/// [`solve_augustin`] with a caller-supplied starting measure (warm start).
///
/// The start is blended with the output marginal at weight 10⁻⁶ so that
/// every output reachable from the support of `p` stays in the support of
/// the iterates; a warm start that lost such an atom would otherwise lock
/// the iteration out of it permanently.
pub fn solve_augustin_from(
    alpha: f64,
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
    initial: &Distribution,
) -> Result<AugustinSolution> {
    check_solver_inputs(alpha, channel, p, tol)?;
    if !initial.alphabet().same_as(channel.output_alphabet()) {
        return Err(Error::InvalidInput(
            "solve_augustin_from: initial point does not live on the output alphabet".to_string(),
        ));
    }
    let marginal = channel.output_marginal(p)?;
    let start = mix(initial, &marginal, 1e-6)?;
    solve_from_checked(alpha, channel, p, tol, max_iter, start)
}

/// Pushes iterate atoms that rounded to zero on the reachable output
/// support back up to the smallest normal float.
///
/// The exact Augustin mean is strictly positive wherever the output
/// marginal is — an atom `q(y) = ε` on the reachable support forces the
/// tilt factor `(ε/q(y*))^{1−α}` away from a fixed point — but the tilted
/// masses are computed through `exp` and round to an exact zero once a
/// per-atom log gap passes ~745. A zero atom is dropped from every later
/// tilt, so the iteration would otherwise converge on a spurious boundary
/// point that the certificate then rejects.
fn floor_onto_support(q: Distribution, support: &[bool]) -> Result<Distribution> {
    if q.probs().iter().zip(support).all(|(&qy, &on)| qy > 0.0 || !on) {
        return Ok(q);
    }
    let probs: Vec<f64> = q
        .probs()
        .iter()
        .zip(support)
        .map(|(&qy, &on)| if on { qy.max(f64::MIN_POSITIVE) } else { qy })
        .collect();
    Distribution::new(q.alphabet().clone(), probs)
}

fn solve_from_checked(
    alpha: f64,
    channel: &Channel,
    p: &Distribution,
    tol: f64,
    max_iter: usize,
    start: Distribution,
) -> Result<AugustinSolution> {
    let support: Vec<bool> = channel
        .output_marginal(p)?
        .probs()
        .iter()
        .map(|&my| my > 0.0)
        .collect();
    let mut q = floor_onto_support(start, &support)?;
    let mut m = augustin_fixed_point_map(alpha, channel, p, &q)?;
    let mut residual = q.l1_distance(&m)?;
    let mut lambda: f64 = 1.0;
    let mut prev_residual = f64::INFINITY;
    let mut checkpoint = f64::INFINITY;
    let mut line_search = false;
    let mut step_hint: f64 = 1.0;

    for iteration in 0..=max_iter {
        if residual <= tol {
            return finish(alpha, channel, p, q, iteration, residual);
        }
        if iteration == max_iter {
            return Err(Error::NoConvergence {
                context: format!(
                    "solve_augustin(alpha = {alpha}) exhausted its iteration budget \
                     (residual {residual:.3e}, tolerance {tol:.3e})"
                ),
                iterations: max_iter,
                residual,
            });
        }
        if !line_search && iteration % PROGRESS_WINDOW == 0 {
            if residual > PROGRESS_FACTOR * checkpoint {
                line_search = true;
            }
            checkpoint = residual;
        }

        if line_search {
            // Backtrack along T(q) − q until the residual drops by a
            // t-proportional margin (plain strict decrease would re-accept
            // the crawling step). Near the mean a step of size t contracts
            // the residual by |1 − t(1 − μ)| per Jacobian eigenvalue μ of
            // T, so for α > 1 (μ ≤ 0) backtracking always reaches a step
            // with factor far below the 1 − t/4 acceptance threshold.
            let mut t = step_hint;
            let mut accepted = false;
            for _ in 0..30 {
                let candidate = floor_onto_support(mix(&q, &m, t)?, &support)?;
                let candidate_map = augustin_fixed_point_map(alpha, channel, p, &candidate)?;
                let candidate_residual = candidate.l1_distance(&candidate_map)?;
                if candidate_residual <= (1.0 - 0.25 * t) * residual {
                    q = candidate;
                    m = candidate_map;
                    residual = candidate_residual;
                    step_hint = (2.0 * t).min(1.0);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                q = floor_onto_support(mix(&q, &m, DAMPING_FLOOR)?, &support)?;
                m = augustin_fixed_point_map(alpha, channel, p, &q)?;
                residual = q.l1_distance(&m)?;
            }
        } else {
            if residual > prev_residual {
                lambda = (0.5 * lambda).max(DAMPING_FLOOR);
            }
            prev_residual = residual;
            q = floor_onto_support(mix(&q, &m, lambda)?, &support)?;
            m = augustin_fixed_point_map(alpha, channel, p, &q)?;
            residual = q.l1_distance(&m)?;
        }
    }
    unreachable!("loop returns or errors at iteration == max_iter");
}

fn finish(
    alpha: f64,
    channel: &Channel,
    p: &Distribution,
    mean: Distribution,
    iterations: usize,
    residual: f64,
) -> Result<AugustinSolution> {
    let info = conditional_renyi_divergence(alpha, channel, &mean, p)?;
    let mut solution = AugustinSolution {
        alpha,
        mean,
        info,
        iterations,
        fixed_point_residual: residual,
        certificate_margin: 0.0,
    };
    let (lower, _upper) = sandwich_margins(&solution, channel, p)?;
    solution.certificate_margin = lower;
    if lower < -CERTIFICATE_TOLERANCE {
        return Err(Error::NoConvergence {
            context: format!(
                "solve_augustin(alpha = {alpha}) converged to residual {residual:.3e} but the \
                 sandwich certificate fails: margin {lower:.3e} < -{CERTIFICATE_TOLERANCE:.0e}"
            ),
            iterations,
            residual,
        });
    }
    Ok(solution)
}

/// The fixed family of ten certificate probe measures for a given mean:
/// three Dirichlet(1) draws, each mixed into the mean at the weights
/// {0.5, 0.1, 0.01}, plus the uniform distribution. Deterministic — the
/// generator is seeded with a fixed constant.
pub fn certificate_probes(mean: &Distribution) -> Vec<Distribution> {
    let k = mean.len();
    let alphabet = mean.alphabet().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut probes = Vec::with_capacity(PROBE_DIRICHLET_DRAWS * PROBE_MIX_WEIGHTS.len() + 1);
    for _ in 0..PROBE_DIRICHLET_DRAWS {
        // A flat Dirichlet sample is a normalized vector of Exp(1) draws.
        let mut draw: Vec<f64> = (0..k)
            .map(|_| -numeric::ln(1.0 - rng.gen::<f64>()))
            .collect();
        let total: f64 = draw.iter().sum();
        if total > 0.0 {
            for e in &mut draw {
                *e /= total;
            }
        } else {
            draw = vec![1.0 / k as f64; k];
        }
        for &weight in &PROBE_MIX_WEIGHTS {
            let probs: Vec<f64> = mean
                .probs()
                .iter()
                .zip(draw.iter())
                .map(|(&qy, &dy)| (1.0 - weight) * qy + weight * dy)
                .collect();
            probes.push(
                Distribution::new(alphabet.clone(), probs)
                    .expect("probe mixture is a convex combination of distributions"),
            );
        }
    }
    probes.push(Distribution::uniform(alphabet));
    probes
}

/// Evaluates the sandwich certificate at the ten probe measures and returns
/// the minimum slack of each side: `(lower, upper)` where
///
/// * `lower = min_Q [C_α(W ‖ Q | p) − info − D_{1∧α}(mean ‖ Q)]`,
/// * `upper = min_Q [D_{1∨α}(mean ‖ Q) − C_α(W ‖ Q | p) + info]`.
///
/// Both are nonnegative at the exact Augustin mean; a converged solve must
/// keep them above `-`[`CERTIFICATE_TOLERANCE`].
pub fn sandwich_margins(
    solution: &AugustinSolution,
    channel: &Channel,
    p: &Distribution,
) -> Result<(f64, f64)> {
    let alpha = solution.alpha;
    let lower_order = if alpha < 1.0 { alpha } else { 1.0 };
    let upper_order = if alpha > 1.0 { alpha } else { 1.0 };
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for probe in certificate_probes(&solution.mean) {
        let objective = conditional_renyi_divergence(alpha, channel, &probe, p)?;
        let gap = objective - solution.info;
        let d_lower = renyi_divergence(lower_order, &solution.mean, &probe)?;
        let d_upper = renyi_divergence(upper_order, &solution.mean, &probe)?;
        lower = lower.min(gap - d_lower);
        upper = upper.min(d_upper - gap);
    }
    Ok((lower, upper))
}

/// The derivative `dI_α/dα` of the Augustin information in the order.
///
/// For α ≠ 1 this is `C₁(W_α^q ‖ W | p) / (α − 1)²` evaluated at the
/// Augustin mean `q`; at α = 1 it is half the `p`-average of the variance of
/// `ln(dW(x)/dq₁)` under `W(x)`.
///
/// # Errors
///
/// Propagates solver errors.
pub fn augustin_info_derivative(alpha: f64, channel: &Channel, p: &Distribution) -> Result<f64> {
    let solution = solve_augustin(alpha, channel, p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    if alpha == 1.0 {
        let q = &solution.mean;
        let mut acc = 0.0;
        for (x, &px) in p.probs().iter().enumerate() {
            if px == 0.0 {
                continue;
            }
            let row = channel.row(x);
            let mut mean_z = 0.0;
            let mut mean_z2 = 0.0;
            for (&wy, &qy) in row.probs().iter().zip(q.probs().iter()) {
                if wy == 0.0 {
                    continue;
                }
                let z = numeric::ln(wy) - numeric::ln(qy);
                mean_z += wy * z;
                mean_z2 += wy * z * z;
            }
            acc += px * (mean_z2 - mean_z * mean_z);
        }
        Ok(0.5 * acc)
    } else {
        let tilted = tilted_channel(alpha, channel, &solution.mean)?;
        let c1 = conditional_channel_divergence(1.0, &tilted, channel, p)?;
        Ok(c1 / ((alpha - 1.0) * (alpha - 1.0)))
    }
}

/// `I₁(p; W_ρ^{q_ρ}) = C₁(W_ρ^{q_ρ} ‖ q_ρ | p)`: the order-1 information of
/// the tilted channel at the order-ρ Augustin mean.
///
/// This is the rate coordinate of the parametric strong-converse curve; it
/// is nondecreasing and continuous in ρ.
///
/// # Errors
///
/// `Domain` unless ρ > 1 (finite); otherwise propagates solver errors.
pub fn i1_of_tilted(rho: f64, channel: &Channel, p: &Distribution) -> Result<f64> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "i1_of_tilted: order must be a finite real > 1, got {rho}"
        )));
    }
    let solution = solve_augustin(rho, channel, p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    i1_from_solution(&solution, channel, p)
}

/// [`i1_of_tilted`] computed from an existing solution (avoids re-solving;
/// used by warm-started sweeps).
pub fn i1_from_solution(
    solution: &AugustinSolution,
    channel: &Channel,
    p: &Distribution,
) -> Result<f64> {
    let tilted = tilted_channel(solution.alpha, channel, &solution.mean)?;
    conditional_renyi_divergence(1.0, &tilted, &solution.mean, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Alphabet;
    use proptest::prelude::*;

    fn bsc01() -> (Channel, Distribution) {
        let w = Channel::binary_symmetric(0.1).unwrap();
        let p = Distribution::uniform(w.input_alphabet().clone());
        (w, p)
    }

    fn z_channel() -> (Channel, Distribution) {
        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let w = Channel::from_matrix(
            input.clone(),
            output,
            &[vec![1.0, 0.0], vec![0.3, 0.7]],
        )
        .unwrap();
        let p = Distribution::uniform(input);
        (w, p)
    }

    fn ternary_channel() -> (Channel, Distribution) {
        let input = Alphabet::numbered(3).unwrap();
        let output = Alphabet::numbered(3).unwrap();
        let w = Channel::from_matrix(
            input.clone(),
            output,
            &[
                vec![0.70, 0.20, 0.10],
                vec![0.15, 0.60, 0.25],
                vec![0.05, 0.35, 0.60],
            ],
        )
        .unwrap();
        let p = Distribution::new(input, vec![0.2, 0.45, 0.35]).unwrap();
        (w, p)
    }

    // Reference values computed independently with 50-digit arithmetic.
    const BSC_I1: f64 = 0.368_064_207_168_497_070;
    const BSC_I2: f64 = 0.494_696_241_836_107_055;
    const BSC_I_HALF: f64 = 0.223_143_551_314_209_756;
    const BSC_I1_OF_TILTED_2: f64 = 0.627_286_244_618_467_074;
    const BSC_DERIV_AT_2: f64 = 0.066_295_001_391_180_010;
    const BSC_DERIV_AT_1: f64 = 0.217_250_812_946_264_756;
    const BSC_MAP_FROM_SKEWED: f64 = 0.450_684_931_506_849_315; // T((0.9, 0.1))[0] at α = 2
    const Z_MEAN_2: f64 = 0.5625; // exact rational fixed point
    const Z_I2: f64 = 0.411_112_111_417_543_826;
    const Z_MEAN_HALF: f64 = 0.773_861_278_752_583_057;
    const Z_I_HALF: f64 = 0.256_362_647_873_235_014;
    const Z_I1: f64 = 0.342_014_488_007_185_727;

    #[test]
    fn map_at_order_one_is_the_output_marginal() {
        let w = Channel::binary_symmetric(0.2).unwrap();
        let p = Distribution::new(w.input_alphabet().clone(), vec![0.3, 0.7]).unwrap();
        let q = Distribution::uniform(w.output_alphabet().clone());
        let mapped = augustin_fixed_point_map(1.0, &w, &p, &q).unwrap();
        let marginal = w.output_marginal(&p).unwrap();
        assert!(mapped.l1_distance(&marginal).unwrap() < 1e-15);
    }

    #[test]
    fn map_preserves_bsc_symmetry() {
        let (w, p) = bsc01();
        let q = Distribution::uniform(w.output_alphabet().clone());
        let mapped = augustin_fixed_point_map(2.0, &w, &p, &q).unwrap();
        assert!(mapped.l1_distance(&q).unwrap() < 1e-15);
    }

    #[test]
    fn map_reference_value_from_skewed_start() {
        let (w, p) = bsc01();
        let q = Distribution::new(w.output_alphabet().clone(), vec![0.9, 0.1]).unwrap();
        let mapped = augustin_fixed_point_map(2.0, &w, &p, &q).unwrap();
        assert!((mapped.probs()[0] - BSC_MAP_FROM_SKEWED).abs() < 1e-15);
    }

    #[test]
    fn single_input_channel_converges_to_its_row() {
        let input = Alphabet::new(["x"]).unwrap();
        let output = Alphabet::numbered(3).unwrap();
        let row = Distribution::new(output.clone(), vec![0.2, 0.5, 0.3]).unwrap();
        let w = Channel::new(input.clone(), output.clone(), vec![row.clone()]).unwrap();
        let p = Distribution::point_mass(input, 0).unwrap();
        let uniform = Distribution::uniform(output);
        for alpha in [0.5, 2.0, 4.0] {
            let sol = solve_augustin_from(alpha, &w, &p, 1e-12, 10_000, &uniform).unwrap();
            assert!(sol.mean.l1_distance(&row).unwrap() < 1e-10, "alpha {alpha}");
            assert!(sol.info.abs() < 1e-12, "alpha {alpha}: info {}", sol.info);
        }
    }

    #[test]
    fn identical_rows_give_zero_information() {
        let input = Alphabet::numbered(3).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let row = vec![0.4, 0.6];
        let w = Channel::from_matrix(
            input.clone(),
            output,
            &[row.clone(), row.clone(), row.clone()],
        )
        .unwrap();
        let p = Distribution::new(input, vec![0.5, 0.25, 0.25]).unwrap();
        for alpha in [0.5, 1.0, 2.0, 8.0] {
            let sol = solve_augustin(alpha, &w, &p, 1e-12, 10_000).unwrap();
            assert!(sol.info.abs() < 1e-12, "alpha {alpha}: info {}", sol.info);
            assert!((sol.mean.probs()[0] - 0.4).abs() < 1e-12, "alpha {alpha}");
        }
    }

    #[test]
    fn bsc_reference_informations() {
        let (w, p) = bsc01();
        for (alpha, expected) in [(0.5, BSC_I_HALF), (1.0, BSC_I1), (2.0, BSC_I2)] {
            let sol = solve_augustin(alpha, &w, &p, 1e-12, 10_000).unwrap();
            assert!(
                (sol.info - expected).abs() < 1e-12,
                "alpha {alpha}: info {} vs {expected}",
                sol.info
            );
            assert!((sol.mean.probs()[0] - 0.5).abs() < 1e-12, "alpha {alpha}");
            assert!(sol.fixed_point_residual <= 1e-12);
            assert!(sol.certificate_margin >= -CERTIFICATE_TOLERANCE);
        }
        // α = 1 is the closed form: the marginal is already the mean.
        let sol = solve_augustin(1.0, &w, &p, 1e-12, 10_000).unwrap();
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn z_channel_reference_informations() {
        let (w, p) = z_channel();
        let sol = solve_augustin(2.0, &w, &p, 1e-12, 10_000).unwrap();
        assert!(
            (sol.mean.probs()[0] - Z_MEAN_2).abs() < 1e-9,
            "mean {}",
            sol.mean.probs()[0]
        );
        assert!((sol.info - Z_I2).abs() < 1e-12, "info {}", sol.info);

        let sol = solve_augustin(0.5, &w, &p, 1e-12, 10_000).unwrap();
        assert!((sol.mean.probs()[0] - Z_MEAN_HALF).abs() < 1e-9);
        assert!((sol.info - Z_I_HALF).abs() < 1e-12);

        let sol = solve_augustin(1.0, &w, &p, 1e-12, 10_000).unwrap();
        assert!((sol.info - Z_I1).abs() < 1e-12);
    }

    #[test]
    fn information_is_nondecreasing_in_order() {
        for (w, p) in [bsc01(), z_channel(), ternary_channel()] {
            let mut last = -1.0;
            for alpha in [0.5, 1.0, 1.5, 2.0, 4.0, 8.0] {
                let sol = solve_augustin(alpha, &w, &p, 1e-12, 10_000).unwrap();
                assert!(
                    sol.info >= last - 1e-10,
                    "I_α dropped at alpha {alpha}: {} < {last}",
                    sol.info
                );
                last = sol.info;
            }
        }
    }

    #[test]
    fn certificate_probes_are_deterministic_and_ten() {
        let (w, p) = bsc01();
        let sol = solve_augustin(2.0, &w, &p, 1e-12, 10_000).unwrap();
        let a = certificate_probes(&sol.mean);
        let b = certificate_probes(&sol.mean);
        assert_eq!(a.len(), 10);
        for (pa, pb) in a.iter().zip(b.iter()) {
            assert_eq!(pa.probs(), pb.probs(), "probe draws must be reproducible");
        }
    }

    #[test]
    fn sandwich_margins_hold_on_both_sides() {
        for (w, p) in [bsc01(), z_channel(), ternary_channel()] {
            for alpha in [0.5, 1.0, 2.0, 8.0] {
                let sol = solve_augustin(alpha, &w, &p, 1e-12, 10_000).unwrap();
                let (lower, upper) = sandwich_margins(&sol, &w, &p).unwrap();
                assert!(lower >= -CERTIFICATE_TOLERANCE, "alpha {alpha}: lower {lower}");
                assert!(upper >= -CERTIFICATE_TOLERANCE, "alpha {alpha}: upper {upper}");
            }
        }
    }

    #[test]
    fn kl_decomposition_and_haroutunian_identity() {
        // I_α = (α/(1−α))·C₁(W_α^q ‖ W | p) + I₁(p; W_α^q), and
        // I₁(p; W_α^q) = C₁(W_α^q ‖ q | p).
        for (w, p) in [bsc01(), z_channel(), ternary_channel()] {
            for alpha in [0.5, 1.5, 2.0, 4.0] {
                let sol = solve_augustin(alpha, &w, &p, 1e-12, 10_000).unwrap();
                let tilted = tilted_channel(alpha, &w, &sol.mean).unwrap();
                let c1_vs_w = conditional_channel_divergence(1.0, &tilted, &w, &p).unwrap();
                let i1_tilted = solve_augustin(1.0, &tilted, &p, 1e-12, 10_000).unwrap().info;
                let decomposition = alpha / (1.0 - alpha) * c1_vs_w + i1_tilted;
                assert!(
                    (decomposition - sol.info).abs() < 1e-8,
                    "alpha {alpha}: {decomposition} vs {}",
                    sol.info
                );
                let haroutunian = i1_from_solution(&sol, &w, &p).unwrap();
                assert!(
                    (haroutunian - i1_tilted).abs() < 1e-8,
                    "alpha {alpha}: {haroutunian} vs {i1_tilted}"
                );
            }
        }
    }

    #[test]
    fn derivative_reference_values() {
        let (w, p) = bsc01();
        assert!((augustin_info_derivative(2.0, &w, &p).unwrap() - BSC_DERIV_AT_2).abs() < 1e-10);
        assert!((augustin_info_derivative(1.0, &w, &p).unwrap() - BSC_DERIV_AT_1).abs() < 1e-10);

        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let w = Channel::from_matrix(input.clone(), output, &[vec![0.4, 0.6], vec![0.4, 0.6]])
            .unwrap();
        let p = Distribution::uniform(input);
        for alpha in [0.5, 1.0, 2.0] {
            assert!(augustin_info_derivative(alpha, &w, &p).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let (w, p) = ternary_channel();
        let h = 1e-4;
        for alpha in [0.7, 1.0, 2.5] {
            let formula = augustin_info_derivative(alpha, &w, &p).unwrap();
            let hi = solve_augustin(alpha + h, &w, &p, 1e-12, 10_000).unwrap().info;
            let lo = solve_augustin(alpha - h, &w, &p, 1e-12, 10_000).unwrap().info;
            let fd = (hi - lo) / (2.0 * h);
            assert!(
                ((formula - fd) / fd).abs() < 1e-5,
                "alpha {alpha}: formula {formula} vs fd {fd}"
            );
        }
    }

    #[test]
    fn i1_of_tilted_reference_values() {
        let (w, p) = bsc01();
        let v = i1_of_tilted(2.0, &w, &p).unwrap();
        assert!((v - BSC_I1_OF_TILTED_2).abs() < 1e-10, "{v}");
        // ρ → 1⁺ recovers I₁.
        let near_one = i1_of_tilted(1.0 + 1e-4, &w, &p).unwrap();
        assert!((near_one - BSC_I1).abs() < 1e-3, "{near_one}");
        // Monotone in ρ.
        let mut last = 0.0;
        for rho in [1.25, 1.5, 2.0, 4.0] {
            let v = i1_of_tilted(rho, &w, &p).unwrap();
            assert!(v >= last - 1e-10, "rho {rho}");
            last = v;
        }
        // Degenerate: identical rows stay at zero for every ρ.
        let input = Alphabet::numbered(2).unwrap();
        let output = Alphabet::numbered(2).unwrap();
        let flat = Channel::from_matrix(input.clone(), output, &[vec![0.4, 0.6], vec![0.4, 0.6]])
            .unwrap();
        let pu = Distribution::uniform(input);
        assert!(i1_of_tilted(3.0, &flat, &pu).unwrap().abs() < 1e-12);
    }

    #[test]
    fn solver_input_validation() {
        let (w, p) = bsc01();
        assert!(solve_augustin(0.0, &w, &p, 1e-12, 100).is_err());
        assert!(solve_augustin(2.0, &w, &p, 0.0, 100).is_err());
        assert!(solve_augustin(2.0, &w, &p, f64::NAN, 100).is_err());
        let wrong_p = Distribution::uniform(Alphabet::numbered(3).unwrap());
        assert!(matches!(
            solve_augustin(2.0, &w, &wrong_p, 1e-12, 100),
            Err(Error::InvalidInput(_))
        ));
        assert!(i1_of_tilted(1.0, &w, &p).is_err());
        assert!(i1_of_tilted(f64::INFINITY, &w, &p).is_err());
    }

    #[test]
    fn exhausted_budget_reports_residual() {
        let (w, p) = z_channel();
        let err = solve_augustin(2.0, &w, &p, 1e-15, 2).unwrap_err();
        match err {
            Error::NoConvergence {
                iterations,
                residual,
                ..
            } => {
                assert_eq!(iterations, 2);
                assert!(residual > 0.0 && residual.is_finite());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn random_channels_solve_and_certify(
            raw in proptest::collection::vec(0.05f64..1.0, 9),
            praw in proptest::collection::vec(0.05f64..1.0, 3),
            alpha in prop_oneof![Just(0.5), Just(1.0), Just(1.5), Just(4.0)],
        ) {
            let input = Alphabet::numbered(3).unwrap();
            let output = Alphabet::numbered(3).unwrap();
            let rows: Vec<Vec<f64>> = raw.chunks(3).map(|c| {
                let s: f64 = c.iter().sum();
                c.iter().map(|v| v / s).collect()
            }).collect();
            let w = Channel::from_matrix(input.clone(), output, &rows).unwrap();
            let ps: f64 = praw.iter().sum();
            let p = Distribution::new(input, praw.iter().map(|v| v / ps).collect()).unwrap();
            let sol = solve_augustin(alpha, &w, &p, 1e-12, 10_000).unwrap();
            prop_assert!(sol.fixed_point_residual <= 1e-12);
            prop_assert!(sol.info >= -1e-12);
            let (lower, upper) = sandwich_margins(&sol, &w, &p).unwrap();
            prop_assert!(lower >= -CERTIFICATE_TOLERANCE);
            prop_assert!(upper >= -CERTIFICATE_TOLERANCE);
        }
    }
}
