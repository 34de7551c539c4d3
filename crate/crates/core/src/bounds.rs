//! Finite-blocklength converse and achievability bounds.
//!
//! The central object is a product hypothesis-testing instance: `n` pairs
//! `(wₜ, qₜ)` of per-letter measures, with `W = ⊗wₜ` against `Q = ⊗qₜ`.
//! [`lemma1_converse_bound`] lower-bounds the type-II error complement
//! `W(Eᶜ)` of any test `E` whose `Q(E)` is exponentially small, via the
//! Berry-Esseen theorem applied to the log-likelihood ratio under the
//! order-ρ tilted measure; [`lemma2_achievability_event`] constructs an
//! explicit event showing that the bound's `n^{−1/(2ρ)}` prefactor order is
//! not improvable.
//!
//! Specializing the letters to the rows of a channel weighted by a code's
//! composition, with `q` the order-ρ* Augustin mean, yields
//! [`theorem1_bound`]: a refined strong converse for constant composition
//! codes whose deficiency term carries the `n^{−1/(2ρ*)}` prefactor.
//! [`theorem2_bound`] is the companion `1 − e^{−n·E_sc}` bound, weaker in
//! the prefactor but evaluable at every rate.
//!
//! All bounds are validated elsewhere against the exact Neyman-Pearson
//! trade-off and exact list decoders of [`crate::oracle`].

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use core::f64::consts::{E as EULER_E, LN_2, PI};

use crate::augustin::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::dist::{Channel, Composition, Distribution};
use crate::divergence::{renyi_divergence, tilted_measure};
use crate::error::{Error, Result};
use crate::numeric::{self, Accumulator};
use crate::oracle::{llr_atoms_with_cap, DEFAULT_ATOM_CAP};
use crate::sce::{sce_full_detailed, Regime, DEFAULT_RHO_CAP};

/// Relative slack allowed when checking that β lies in the achievability
/// window (the window endpoints are themselves computed in floating point).
pub const WINDOW_SLACK: f64 = 1e-12;

/// One letter of a product hypothesis-testing instance: a pair of measures
/// on a common per-letter alphabet, repeated `count` times.
#[derive(Debug, Clone)]
pub struct HtLetter {
    /// The alternative (type-II) measure `wₜ`.
    pub w: Distribution,
    /// The null (type-I) measure `qₜ`.
    pub q: Distribution,
    /// Run length: how many coordinates carry this pair.
    pub count: usize,
}

/// A product hypothesis-testing instance `W = ⊗wₜ` vs `Q = ⊗qₜ` of length
/// `n = Σ count`, run-length encoded over distinct letters.
///
/// Per-letter alphabets may differ between letters; within a letter, `w`
/// and `q` share one alphabet.
#[derive(Debug, Clone)]
pub struct HtInstance {
    letters: Vec<HtLetter>,
}

impl HtInstance {
    /// Builds an instance from run-length encoded letters.
    pub fn new(letters: Vec<HtLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput(
                "hypothesis-testing instance needs at least one letter".to_string(),
            ));
        }
        for (i, letter) in letters.iter().enumerate() {
            if letter.count == 0 {
                return Err(Error::InvalidInput(format!(
                    "letter {i} has count 0; drop it instead"
                )));
            }
            if !letter.w.alphabet().same_as(letter.q.alphabet()) {
                return Err(Error::InvalidInput(format!(
                    "letter {i}: w and q live on different alphabets"
                )));
            }
        }
        Ok(Self { letters })
    }

    /// The i.i.d. instance repeating one `(w, q)` pair `n` times.
    pub fn iid(w: &Distribution, q: &Distribution, n: usize) -> Result<Self> {
        Self::new(alloc::vec![HtLetter {
            w: w.clone(),
            q: q.clone(),
            count: n,
        }])
    }

    /// The instance whose letters are the channel rows used by a
    /// composition, each against the same output-side measure `q`: letter
    /// `(W(x), q)` with run length `composition.counts()[x]`.
    pub fn from_composition(
        channel: &Channel,
        composition: &Composition,
        q: &Distribution,
    ) -> Result<Self> {
        if !channel
            .input_alphabet()
            .same_as(composition.base().alphabet())
        {
            return Err(Error::InvalidInput(
                "composition alphabet does not match the channel input alphabet".to_string(),
            ));
        }
        if !channel.output_alphabet().same_as(q.alphabet()) {
            return Err(Error::InvalidInput(
                "q does not live on the channel output alphabet".to_string(),
            ));
        }
        let letters: Vec<HtLetter> = composition
            .counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(x, &c)| HtLetter {
                w: channel.row(x).clone(),
                q: q.clone(),
                count: c,
            })
            .collect();
        Self::new(letters)
    }

    /// The distinct letters with their run lengths.
    pub fn letters(&self) -> &[HtLetter] {
        &self.letters
    }

    /// Total instance length `n`.
    pub fn n(&self) -> usize {
        self.letters.iter().map(|l| l.count).sum()
    }
}

/// The Berry-Esseen moment constants of the log-likelihood ratio under the
/// order-ρ tilted measure, averaged per letter.
#[derive(Debug, Clone, Copy)]
pub struct BerryEsseenConstants {
    /// `a₂ = (1/n) Σₜ Var[Λₜ]` under the per-letter tilted measures (nats²).
    pub a2: f64,
    /// `a₃ = (1/n) Σₜ E|Λₜ − E Λₜ|³` likewise (nats³).
    pub a3: f64,
    /// `ĥ = (1/(e√a₂))(1/√(2π) + 2·0.56·a₃/a₂)`, the prefactor constant
    /// combining the Gaussian density peak with the Berry-Esseen constant.
    pub hat_delta: f64,
}

/// Central moments of `Λₜ = ln(dwₜ_ac/dqₜ)` under the order-ρ tilted
/// measure of one letter.
struct LetterMoments {
    mean: f64,
    var: f64,
    abs3: f64,
}

fn letter_moments(rho: f64, letter: &HtLetter, index: usize) -> Result<LetterMoments> {
    let (tilted, _) = tilted_for_letter(rho, letter, index)?;
    let w = letter.w.probs();
    let q = letter.q.probs();
    let llr = |y: usize| numeric::ln(w[y]) - numeric::ln(q[y]);
    let mut mean = 0.0;
    for y in tilted.support() {
        mean += tilted.probs()[y] * llr(y);
    }
    let mut var = 0.0;
    let mut abs3 = 0.0;
    for y in tilted.support() {
        let centered = llr(y) - mean;
        let t = tilted.probs()[y];
        var += t * centered * centered;
        abs3 += t * centered * centered * numeric::abs(centered);
    }
    Ok(LetterMoments { mean, var, abs3 })
}

/// Tilts one letter, converting the singular-pair error into a
/// letter-indexed one.
fn tilted_for_letter(
    rho: f64,
    letter: &HtLetter,
    index: usize,
) -> Result<(Distribution, f64)> {
    tilted_measure(rho, &letter.w, &letter.q).map_err(|e| match e {
        Error::Domain(_) => Error::MutuallySingular { letter: index },
        other => other,
    })
}

/// Computes the Berry-Esseen constants of an instance at order `rho`.
///
/// # Errors
///
/// `Domain` for orders not in `(1, ∞)`; `MutuallySingular` when some
/// letter's pair is mutually singular; `DegenerateVariance` when the
/// log-likelihood ratio is almost surely constant under every letter's
/// tilted measure (`a₂ = 0`, so the prefactor constant is undefined).
pub fn berry_esseen_constants(rho: f64, instance: &HtInstance) -> Result<BerryEsseenConstants> {
    check_tilt_order(rho)?;
    let n = instance.n() as f64;
    let mut a2 = 0.0;
    let mut a3 = 0.0;
    for (i, letter) in instance.letters().iter().enumerate() {
        let m = letter_moments(rho, letter, i)?;
        a2 += letter.count as f64 * m.var;
        a3 += letter.count as f64 * m.abs3;
    }
    a2 /= n;
    a3 /= n;
    if a2 == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let hat_delta =
        1.0 / (EULER_E * numeric::sqrt(a2)) * (1.0 / numeric::sqrt(2.0 * PI) + 2.0 * 0.56 * a3 / a2);
    Ok(BerryEsseenConstants { a2, a3, hat_delta })
}

pub(crate) fn check_tilt_order(rho: f64) -> Result<()> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "tilt order must be a finite real > 1, got {rho}"
        )));
    }
    Ok(())
}

/// Instance-level divergences of the order-ρ tilted product measure,
/// summed over letters with their run lengths.
#[derive(Debug, Clone, Copy)]
pub struct InstanceDivergences {
    /// `D₁(w_ρ^Q ‖ Q)` — the type-I exponent of the tilted measure.
    pub d1_tilted_vs_q: f64,
    /// `D₁(w_ρ^Q ‖ W)` — the type-II exponent of the tilted measure.
    pub d1_tilted_vs_w: f64,
    /// `D₁(w_ρ^Q ‖ w₁^Q)` — against the normalized absolutely continuous
    /// component; differs from the previous by `ln Π‖wₜ_ac‖`.
    pub d1_tilted_vs_w1: f64,
    /// `ln Π‖wₜ_ac‖ ≤ 0`, the log of the total absolutely continuous mass.
    pub ln_ac_product: f64,
    /// `E_{w_ρ^Q}[Λ]`, the tilted mean of the total log-likelihood ratio.
    pub tilted_mean: f64,
}

/// Computes the divergences and tilted mean of an instance at order `rho`.
pub fn instance_divergences(rho: f64, instance: &HtInstance) -> Result<InstanceDivergences> {
    check_tilt_order(rho)?;
    let mut d = InstanceDivergences {
        d1_tilted_vs_q: 0.0,
        d1_tilted_vs_w: 0.0,
        d1_tilted_vs_w1: 0.0,
        ln_ac_product: 0.0,
        tilted_mean: 0.0,
    };
    for (i, letter) in instance.letters().iter().enumerate() {
        let c = letter.count as f64;
        let (tilted, ac_norm) = tilted_for_letter(rho, letter, i)?;
        let (w1, _) = tilted_for_letter(1.0, letter, i)?;
        d.d1_tilted_vs_q += c * renyi_divergence(1.0, &tilted, &letter.q)?;
        d.d1_tilted_vs_w += c * renyi_divergence(1.0, &tilted, &letter.w)?;
        d.d1_tilted_vs_w1 += c * renyi_divergence(1.0, &tilted, &w1)?;
        d.ln_ac_product += c * numeric::ln(ac_norm);
        d.tilted_mean += c * letter_moments(rho, letter, i)?.mean;
    }
    Ok(d)
}

/// The `ln` of the converse prefactor `2e^ρ ĥ^{1/ρ} β^{(ρ−1)/ρ}/(ρ−1)^{1/ρ}`.
///
/// Exposed so callers can reason about the converse deficiency
/// `K(ρ,β) n^{−1/(2ρ)} e^{−D₁(w_ρ^Q‖W)}` in log space once it drops below
/// one ulp of the total mass. Only meaningful for `ρ > 1` and `β > 0`;
/// out-of-domain arguments produce a NaN rather than an error.
pub fn ln_converse_prefactor(rho: f64, beta: f64, hat_delta: f64) -> f64 {
    LN_2 + rho + numeric::ln(hat_delta) / rho + (rho - 1.0) / rho * numeric::ln(beta)
        - numeric::ln(rho - 1.0) / rho
}

/// Lower bounds `W(Eᶜ)` for every event `E` with
/// `Q(E) ≤ β e^{−D₁(w_ρ^Q‖Q)}`, in two algebraically equal forms.
///
/// The first form subtracts the deficiency from the total absolutely
/// continuous mass using `D₁(w_ρ^Q‖W)`; the second factors that mass out
/// and uses `D₁(w_ρ^Q‖w₁^Q)`. Both equal
///
/// ```text
/// Π‖wₜ_ac‖ − 2e^ρ ĥ^{1/ρ} β^{(ρ−1)/ρ} (ρ−1)^{−1/ρ} n^{−1/(2ρ)} e^{−D₁(w_ρ^Q‖W)}
/// ```
///
/// and may be negative (vacuous) at small `n`.
pub fn lemma1_converse_bound(
    rho: f64,
    beta: f64,
    instance: &HtInstance,
) -> Result<(f64, f64)> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "beta must be a positive real, got {beta}"
        )));
    }
    let constants = berry_esseen_constants(rho, instance)?;
    let d = instance_divergences(rho, instance)?;
    let n = instance.n() as f64;
    let ln_k = ln_converse_prefactor(rho, beta, constants.hat_delta);
    let ln_n_term = numeric::ln(n) / (2.0 * rho);
    let bound_form_5 =
        numeric::exp(d.ln_ac_product) - numeric::exp(ln_k - ln_n_term - d.d1_tilted_vs_w);
    let bound_form_6 = numeric::exp(d.ln_ac_product)
        * -numeric::expm1(ln_k - ln_n_term - d.d1_tilted_vs_w1);
    Ok((bound_form_5, bound_form_6))
}

/// The refined strong converse bound for constant composition codes.
#[derive(Debug, Clone, Copy)]
pub struct Theorem1Bound {
    /// The parametric order ρ* at the code rate.
    pub rho_star: f64,
    /// The strong converse exponent at the code rate.
    pub exponent: f64,
    /// `2e^{ρ*}(ĥ/(ρ*−1))^{1/ρ*} n^{−1/(2ρ*)}` — the full subexponential
    /// prefactor; the bound improves on [`theorem2_bound`] exactly when
    /// this is below 1.
    pub prefactor: f64,
    /// `ln(prefactor) − n·E` — the log of the deficiency term. Kept
    /// explicit because at large `n` the deficiency underflows while its
    /// log remains informative for crossover analysis.
    pub ln_deficiency: f64,
    /// `1 − prefactor·e^{−n·E}`, unclamped: negative when the prefactor
    /// overwhelms the exponential at small `n`.
    pub bound: f64,
    /// Whether `bound > 0`, i.e. the bound carries information.
    pub informative: bool,
}

fn code_rate(m: u64, l: u64, n: usize) -> Result<f64> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidInput(format!(
            "code parameters must be positive, got M = {m}, L = {l}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("blocklength must be positive".to_string()));
    }
    Ok((numeric::ln(m as f64) - numeric::ln(l as f64)) / n as f64)
}

/// [`theorem1_bound`] at an explicit rate instead of `(M, L)`.
pub fn theorem1_bound_at_rate(
    channel: &Channel,
    composition: &Composition,
    rate: f64,
) -> Result<Theorem1Bound> {
    theorem1_bound_at_rate_with(
        channel,
        composition,
        rate,
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
        DEFAULT_RHO_CAP,
    )
}

/// [`theorem1_bound_at_rate`] with explicit solver settings.
pub fn theorem1_bound_at_rate_with(
    channel: &Channel,
    composition: &Composition,
    rate: f64,
    tol: f64,
    max_iter: usize,
    rho_cap: f64,
) -> Result<Theorem1Bound> {
    if rate.is_finite() && rate <= 0.0 {
        return Err(Error::Regime(format!(
            "theorem1_bound requires a rate inside the parametric window, and rate {rate} \
             is not positive; theorem2_bound is evaluable at every rate"
        )));
    }
    let p = composition.base();
    let (sce, solution) = sce_full_detailed(rate, channel, p, tol, max_iter, rho_cap)?;
    if sce.regime != Regime::Parametric {
        return Err(Error::Regime(format!(
            "theorem1_bound requires a rate strictly between I1 = {:.12} and the high-rate \
             threshold {:.12}; rate {rate} resolved to {}; theorem2_bound is evaluable at \
             every rate",
            sce.i1, sce.rate_threshold_high, sce.regime
        )));
    }
    let solution = solution.expect("parametric results carry their solution");
    let n = composition.n() as f64;

    // Certified exponent: the variational value ((ρ*−1)/ρ*)(R − I_ρ*)
    // evaluated with the solver's objective value, which can only
    // overestimate I_ρ* — so this never overestimates the true exponent
    // and the bound stays sound against exact oracles.
    let certified = (sce.rho_star - 1.0) / sce.rho_star * (rate - solution.info);

    let instance = HtInstance::from_composition(channel, composition, &solution.mean)?;
    let constants = berry_esseen_constants(sce.rho_star, &instance)?;
    let ln_prefactor = ln_converse_prefactor(sce.rho_star, 1.0, constants.hat_delta)
        - numeric::ln(n) / (2.0 * sce.rho_star);
    let ln_deficiency = ln_prefactor - n * certified;
    Ok(Theorem1Bound {
        rho_star: sce.rho_star,
        exponent: sce.exponent,
        prefactor: numeric::exp(ln_prefactor),
        ln_deficiency,
        bound: -numeric::expm1(ln_deficiency),
        informative: ln_deficiency < 0.0,
    })
}

/// The refined strong converse for an `(M, L)` constant composition code:
/// `P_e ≥ 1 − 2e^{ρ*}(ĥ/(ρ*−1))^{1/ρ*} n^{−1/(2ρ*)} e^{−n·E_sc(R)}` at
/// `R = (1/n)ln(M/L)`.
///
/// # Errors
///
/// `Regime` when the rate is not in the parametric window (the bound's
/// hypothesis); `theorem2_bound` applies there instead.
pub fn theorem1_bound(
    channel: &Channel,
    composition: &Composition,
    m: u64,
    l: u64,
) -> Result<Theorem1Bound> {
    let rate = code_rate(m, l, composition.n())?;
    theorem1_bound_at_rate(channel, composition, rate)
}

/// [`theorem2_bound`] at an explicit rate instead of `(M, L)`.
pub fn theorem2_bound_at_rate(
    channel: &Channel,
    composition: &Composition,
    rate: f64,
) -> Result<f64> {
    theorem2_bound_at_rate_with(
        channel,
        composition,
        rate,
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
        DEFAULT_RHO_CAP,
    )
}

/// [`theorem2_bound_at_rate`] with explicit solver settings.
pub fn theorem2_bound_at_rate_with(
    channel: &Channel,
    composition: &Composition,
    rate: f64,
    tol: f64,
    max_iter: usize,
    rho_cap: f64,
) -> Result<f64> {
    if !rate.is_finite() {
        return Err(Error::InvalidInput(format!(
            "rate must be finite, got {rate}"
        )));
    }
    if rate <= 0.0 {
        return Ok(0.0);
    }
    let n = composition.n() as f64;
    let (sce, solution) = sce_full_detailed(rate, channel, composition.base(), tol, max_iter, rho_cap)?;
    let exponent = match sce.regime {
        // Same certified value as theorem1_bound, so the two bounds share
        // one exponent and their ordering is decided by the prefactor.
        Regime::Parametric => {
            let solution = solution.expect("parametric results carry their solution");
            (sce.rho_star - 1.0) / sce.rho_star * (rate - solution.info)
        }
        _ => sce.exponent,
    };
    Ok(-numeric::expm1(-n * exponent))
}

/// The all-rates strong converse for an `(M, L)` code:
/// `P_e ≥ 1 − e^{−n·E_sc(R)}` at `R = (1/n)ln(M/L)`; zero (trivial) at and
/// below the mutual information.
pub fn theorem2_bound(
    channel: &Channel,
    composition: &Composition,
    m: u64,
    l: u64,
) -> Result<f64> {
    let rate = code_rate(m, l, composition.n())?;
    theorem2_bound_at_rate(channel, composition, rate)
}

/// An explicit test event matching the converse prefactor order, with its
/// exactly computed masses.
#[derive(Debug, Clone, Copy)]
pub struct AchievabilityEvent {
    /// The tilt order the event was built at.
    pub rho: f64,
    /// The type-I budget parameter.
    pub beta: f64,
    /// The threshold offset `τ = (1/ρ)ln(9ĥ/(β√n))` on the centered
    /// log-likelihood ratio.
    pub tau: f64,
    /// The slab width `δ = e√(2πe·a₂)·ĥ` entering the window endpoints.
    pub delta: f64,
    /// `Q(E)`, computed exactly over the atom distribution.
    pub q_mass: f64,
    /// `W(Eᶜ)`, computed exactly over the atom distribution.
    pub w_complement_mass: f64,
    /// `Π‖wₜ_ac‖`, the total absolutely continuous mass.
    pub ac_product: f64,
    /// The certified budget `β e^{−D₁(w_ρ^Q‖Q)}`; `q_mass` is verified to
    /// stay within it.
    pub q_mass_limit: f64,
    /// The certified ceiling on `W(Eᶜ)` whose deficiency from
    /// `ac_product` matches the converse bound's `n^{−1/(2ρ)}` order;
    /// `w_complement_mass` is verified to stay within it (+1e-12).
    pub w_complement_limit: f64,
}

/// The β-window `[9ĥe^{ρδ}e^{−ρ√(a₂n)}/√n, 9ĥe^{ρ√(a₂n)}/√n]` inside
/// which the achievability construction is guaranteed; empty (lo > hi)
/// when `n < δ²/(4a₂)`.
pub fn lemma2_window(rho: f64, instance: &HtInstance) -> Result<(f64, f64)> {
    let constants = berry_esseen_constants(rho, instance)?;
    let n = instance.n() as f64;
    let delta = EULER_E * numeric::sqrt(2.0 * PI * EULER_E * constants.a2) * constants.hat_delta;
    let ln_base = numeric::ln(9.0 * constants.hat_delta) - 0.5 * numeric::ln(n);
    let spread = rho * numeric::sqrt(constants.a2 * n);
    let lo = numeric::exp(ln_base + rho * delta - spread);
    let hi = numeric::exp(ln_base + spread);
    Ok((lo, hi))
}

/// Constructs the achievability event at order `rho` and budget parameter
/// `beta`, verifying both of its guarantees against the exact atom
/// distribution.
///
/// The event is the union of the `Q`-singular region with the upper tail
/// `{Λ − E_{w_ρ^Q}[Λ] ≥ τ}`. Its `Q`-mass is verified to satisfy
/// `Q(E) ≤ β e^{−D₁(w_ρ^Q‖Q)}` exactly, and its `W(Eᶜ)` to satisfy the
/// matching upper bound within 1e-12; violations are property errors.
///
/// # Errors
///
/// `Hypothesis` when `beta` lies outside the [`lemma2_window`] (with the
/// computed endpoints in the message); `Property` if either verified
/// inequality fails; `Capacity` if the atom enumeration exceeds the cap.
pub fn lemma2_achievability_event(
    rho: f64,
    beta: f64,
    instance: &HtInstance,
) -> Result<AchievabilityEvent> {
    lemma2_achievability_event_with(rho, beta, instance, DEFAULT_ATOM_CAP, true)
}

/// [`lemma2_achievability_event`] without the window gate: constructs and
/// verifies the event at any positive `beta`, for observing the
/// construction where the window hypothesis fails (it is empty for small
/// `n`) yet the guarantees still hold.
pub fn lemma2_event_unchecked(
    rho: f64,
    beta: f64,
    instance: &HtInstance,
) -> Result<AchievabilityEvent> {
    lemma2_achievability_event_with(rho, beta, instance, DEFAULT_ATOM_CAP, false)
}

/// Full-control variant of [`lemma2_achievability_event`].
pub fn lemma2_achievability_event_with(
    rho: f64,
    beta: f64,
    instance: &HtInstance,
    atom_cap: u64,
    enforce_window: bool,
) -> Result<AchievabilityEvent> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "beta must be a positive real, got {beta}"
        )));
    }
    let constants = berry_esseen_constants(rho, instance)?;
    let n = instance.n() as f64;
    let delta = EULER_E * numeric::sqrt(2.0 * PI * EULER_E * constants.a2) * constants.hat_delta;
    let (lo, hi) = lemma2_window(rho, instance)?;
    if enforce_window && !(beta >= lo * (1.0 - WINDOW_SLACK) && beta <= hi * (1.0 + WINDOW_SLACK)) {
        return Err(Error::Hypothesis(format!(
            "beta = {beta:e} outside the achievability window [{lo:e}, {hi:e}]{}",
            if lo > hi { " (window empty at this blocklength)" } else { "" }
        )));
    }

    let tau = (numeric::ln(9.0 * constants.hat_delta) - numeric::ln(beta)
        - 0.5 * numeric::ln(n))
        / rho;
    let atoms = llr_atoms_with_cap(rho, instance, atom_cap)?;
    let mut tilted_mean = Accumulator::new();
    for atom in &atoms.atoms {
        if atom.lambda.is_finite() {
            tilted_mean.add(atom.p_tilted * atom.lambda);
        }
    }
    let mean = tilted_mean.total();

    let mut q_mass = Accumulator::new();
    let mut w_excluded = Accumulator::new();
    for atom in &atoms.atoms {
        if atom.lambda - mean >= tau {
            q_mass.add(atom.p_q);
        } else {
            w_excluded.add(atom.p_w);
        }
    }
    let q_mass = q_mass.total();
    let w_complement_mass = w_excluded.total();

    let d = instance_divergences(rho, instance)?;
    let ac_product = numeric::exp(d.ln_ac_product);
    let q_mass_limit = beta * numeric::exp(-d.d1_tilted_vs_q);
    if q_mass > q_mass_limit {
        return Err(Error::Property(format!(
            "achievability event breaks its type-I guarantee: Q(E) = {q_mass:e} > {q_mass_limit:e}"
        )));
    }
    let w_complement_limit = ac_product
        - numeric::exp(
            (1.0 - rho) * delta - 0.5 * numeric::ln(2.0 * PI * constants.a2)
                + (rho - 1.0) / rho * (numeric::ln(beta) - numeric::ln(9.0 * constants.hat_delta))
                - d.d1_tilted_vs_w
                - numeric::ln(n) / (2.0 * rho),
        );
    if w_complement_mass > w_complement_limit + 1e-12 {
        return Err(Error::Property(format!(
            "achievability event breaks its type-II guarantee: W(Ec) = {w_complement_mass:e} > \
             {w_complement_limit:e} + 1e-12"
        )));
    }

    Ok(AchievabilityEvent {
        rho,
        beta,
        tau,
        delta,
        q_mass,
        w_complement_mass,
        ac_product,
        q_mass_limit,
        w_complement_limit,
    })
}
