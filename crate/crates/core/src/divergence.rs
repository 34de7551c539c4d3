//! Rényi divergences, conditional divergences, and exponential tilting.
//!
//! All sums run in the log domain with an explicit `-∞` for zero atoms, so
//! orders far from one and long product measures stay finite-precision
//! clean. Divergences are extended reals: `+∞` is a legitimate value (and
//! the *only* non-finite one), never an error.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::dist::{absolutely_continuous_component, Channel, Distribution};
use crate::error::{Error, Result};
use crate::numeric::{self, log_sum_exp};

pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Rényi order must be a positive real, got {alpha}"
        )))
    }
}

/// The Rényi divergence `D_α(w ‖ q)` in nats.
///
/// For α ≠ 1 this is `(1/(α−1)) · ln Σ_y w(y)^α q(y)^{1−α}`, with the sum
/// restricted to the common support; at α = 1 it is the Kullback-Leibler
/// divergence. Returns `+∞` exactly when absolute continuity fails at
/// α ≥ 1, or when the two measures are mutually singular at α < 1.
///
/// # Errors
///
/// `Domain` for α ≤ 0, `InvalidInput` on an alphabet mismatch.
///
/// # Examples
///
/// ```
/// use augustin_core::dist::{Alphabet, Distribution};
/// use augustin_core::divergence::renyi_divergence;
///
/// let ab = Alphabet::numbered(2).unwrap();
/// let w = Distribution::new(ab.clone(), vec![1.0, 0.0]).unwrap();
/// let q = Distribution::uniform(ab);
/// let d = renyi_divergence(2.0, &w, &q).unwrap();
/// assert!((d - 2f64.ln()).abs() < 1e-15);
/// assert_eq!(renyi_divergence(2.0, &q, &w).unwrap(), f64::INFINITY);
/// ```
pub fn renyi_divergence(alpha: f64, w: &Distribution, q: &Distribution) -> Result<f64> {
    check_order(alpha)?;
    if !w.alphabet().same_as(q.alphabet()) {
        return Err(Error::InvalidInput(
            "renyi_divergence: w and q live on different alphabets".to_string(),
        ));
    }

    if alpha == 1.0 {
        // Kullback-Leibler: Σ w (ln w − ln q) over the support of w.
        let mut kl = 0.0;
        for (&wy, &qy) in w.probs().iter().zip(q.probs().iter()) {
            if wy == 0.0 {
                continue;
            }
            if qy == 0.0 {
                return Ok(f64::INFINITY);
            }
            kl += wy * (numeric::ln(wy) - numeric::ln(qy));
        }
        return Ok(kl);
    }

    if alpha > 1.0 && !w.absolutely_continuous_wrt(q) {
        return Ok(f64::INFINITY);
    }

    // ln Σ exp(α ln w + (1−α) ln q) over the common support. Atoms with
    // w(y) = 0 contribute nothing for every α > 0; atoms with q(y) = 0 only
    // reach this point when α < 1, where they also contribute nothing.
    let log_terms: Vec<f64> = w
        .probs()
        .iter()
        .zip(q.probs().iter())
        .filter(|(&wy, &qy)| wy > 0.0 && qy > 0.0)
        .map(|(&wy, &qy)| alpha * numeric::ln(wy) + (1.0 - alpha) * numeric::ln(qy))
        .collect();
    let lse = log_sum_exp(&log_terms);
    if lse == f64::NEG_INFINITY {
        // Mutually singular at α < 1.
        return Ok(f64::INFINITY);
    }
    Ok(lse / (alpha - 1.0))
}

/// The conditional Rényi divergence `C_α(W ‖ q | p) = Σ_x p(x) D_α(W(x) ‖ q)`.
///
/// Returns `+∞` as soon as any term with `p(x) > 0` is infinite.
pub fn conditional_renyi_divergence(
    alpha: f64,
    channel: &Channel,
    q: &Distribution,
    p: &Distribution,
) -> Result<f64> {
    check_order(alpha)?;
    if !p.alphabet().same_as(channel.input_alphabet()) {
        return Err(Error::InvalidInput(
            "conditional_renyi_divergence: p does not live on the input alphabet".to_string(),
        ));
    }
    if !q.alphabet().same_as(channel.output_alphabet()) {
        return Err(Error::InvalidInput(
            "conditional_renyi_divergence: q does not live on the output alphabet".to_string(),
        ));
    }
    let mut acc = 0.0;
    for (x, &px) in p.probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let d = renyi_divergence(alpha, channel.row(x), q)?;
        if d == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        acc += px * d;
    }
    Ok(acc)
}

/// The conditional Rényi divergence between two channels,
/// `C_α(V ‖ W | p) = Σ_x p(x) D_α(V(x) ‖ W(x))`.
pub fn conditional_channel_divergence(
    alpha: f64,
    v: &Channel,
    w: &Channel,
    p: &Distribution,
) -> Result<f64> {
    check_order(alpha)?;
    if !p.alphabet().same_as(v.input_alphabet()) || !p.alphabet().same_as(w.input_alphabet()) {
        return Err(Error::InvalidInput(
            "conditional_channel_divergence: p does not live on both input alphabets".to_string(),
        ));
    }
    if !v.output_alphabet().same_as(w.output_alphabet()) {
        return Err(Error::InvalidInput(
            "conditional_channel_divergence: output alphabets differ".to_string(),
        ));
    }
    let mut acc = 0.0;
    for (x, &px) in p.probs().iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        let d = renyi_divergence(alpha, v.row(x), w.row(x))?;
        if d == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        acc += px * d;
    }
    Ok(acc)
}

/// The order-α tilted probability measure of `w` toward `q`, together with
/// the mass `‖w_ac‖` of the component of `w` absolutely continuous in `q`.
///
/// Writing `w₁ = w_ac / ‖w_ac‖`, the tilted measure satisfies
/// `w_α(y) ∝ w₁(y)^α q(y)^{1−α}` on the support of `q`; at α = 1 it is `w₁`
/// itself. Its support always equals the support of `w₁`.
///
/// # Errors
///
/// `Domain` when `w` and `q` are mutually singular (`‖w_ac‖ = 0`), or in the
/// (impossible at finite alphabets, checked anyway) case where the
/// normalizing divergence is infinite.
pub fn tilted_measure(
    alpha: f64,
    w: &Distribution,
    q: &Distribution,
) -> Result<(Distribution, f64)> {
    check_order(alpha)?;
    let ac = absolutely_continuous_component(w, q)?;
    if ac.total() <= 0.0 {
        return Err(Error::Domain(
            "tilted measure undefined: w and q are mutually singular".to_string(),
        ));
    }
    let w1 = ac.normalized()?;
    if alpha == 1.0 {
        return Ok((w1, ac.total()));
    }

    // ln of the unnormalized tilt, −∞ off the support of w₁.
    let log_terms: Vec<f64> = w1
        .probs()
        .iter()
        .zip(q.probs().iter())
        .map(|(&w1y, &qy)| {
            if w1y > 0.0 {
                alpha * numeric::ln(w1y) + (1.0 - alpha) * numeric::ln(qy)
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let lse = log_sum_exp(&log_terms);
    if !lse.is_finite() {
        return Err(Error::Domain(format!(
            "tilted measure undefined: D_{alpha}(w₁‖q) is not finite"
        )));
    }
    let probs: Vec<f64> = log_terms
        .iter()
        .map(|&t| {
            if t == f64::NEG_INFINITY {
                0.0
            } else {
                numeric::exp(t - lse)
            }
        })
        .collect();
    let tilted = Distribution::new(w.alphabet().clone(), probs)?;
    Ok((tilted, ac.total()))
}

/// The order-α tilted channel: row `x` is `tilted_measure(alpha, W(x), q)`.
///
/// Errors identify the offending input symbol.
pub fn tilted_channel(alpha: f64, channel: &Channel, q: &Distribution) -> Result<Channel> {
    check_order(alpha)?;
    if !q.alphabet().same_as(channel.output_alphabet()) {
        return Err(Error::InvalidInput(
            "tilted_channel: q does not live on the output alphabet".to_string(),
        ));
    }
    let mut rows = Vec::with_capacity(channel.num_inputs());
    for (x, row) in channel.rows().iter().enumerate() {
        let (tilted, _) = tilted_measure(alpha, row, q).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!(
                "input symbol {:?}: {msg}",
                channel.input_alphabet().labels()[x]
            )),
            other => other,
        })?;
        rows.push(tilted);
    }
    Channel::new(
        channel.input_alphabet().clone(),
        channel.output_alphabet().clone(),
        rows,
    )
}
