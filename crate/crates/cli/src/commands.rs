//! Subcommand implementations.
//!
//! Each command is a pure function from validated inputs to the full output
//! string; the binary only decides where the string goes. Keeping the
//! functions pure makes the byte-stability guarantee testable in-process.

use augustin_core::augustin::solve_augustin;
use augustin_core::bounds::{theorem1_bound_at_rate_with, theorem2_bound_at_rate_with};
use augustin_core::dist::{Channel, Composition, Distribution};
use augustin_core::sce::{sce_full_with, Regime};
use augustin_core::{Error, Result};

use crate::config::RunConfig;
use crate::emit::{self, JsonObject};
use crate::suites;

/// Output encoding for the tabular subcommands (`info`, `sce-curve`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Comma-separated rows with a header line.
    Csv,
    /// A JSON array of one object per row.
    Json,
}

/// The Augustin information table: one row per requested order.
pub fn cmd_info(
    channel: &Channel,
    p: &Distribution,
    alphas: &[f64],
    config: &RunConfig,
    format: Format,
) -> Result<String> {
    config.validate()?;
    if alphas.is_empty() {
        return Err(Error::InvalidInput(
            "info: at least one order is required".to_string(),
        ));
    }
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let solution = solve_augustin(alpha, channel, p, config.tol, config.max_iter)?;
        rows.push((
            alpha,
            solution.info,
            solution.fixed_point_residual,
            solution.certificate_margin,
        ));
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("alpha,I_alpha,fixed_point_residual,certificate_margin");
            for (alpha, info, residual, margin) in rows {
                out.push('\n');
                out.push_str(&format!(
                    "{},{},{},{}",
                    emit::float(alpha),
                    emit::float(info),
                    emit::float(residual),
                    emit::float(margin)
                ));
            }
            out
        }
        Format::Json => {
            let items: Vec<String> = rows
                .into_iter()
                .map(|(alpha, info, residual, margin)| {
                    JsonObject::new()
                        .float("alpha", alpha)
                        .float("I_alpha", info)
                        .float("fixed_point_residual", residual)
                        .float("certificate_margin", margin)
                        .compact()
                })
                .collect();
            emit::json_array_pretty(&items, 0)
        }
    })
}

/// A parsed `start:stop:step` rate grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateGrid {
    /// First rate, in nats.
    pub start: f64,
    /// Inclusive upper end of the grid.
    pub stop: f64,
    /// Grid spacing.
    pub step: f64,
}

impl RateGrid {
    /// The grid points `start, start + step, …` up to `stop` (inclusive,
    /// with a relative slack of one part in 10⁹ of a step so that an
    /// intended endpoint is not lost to rounding).
    pub fn rates(&self) -> Vec<f64> {
        let mut rates = Vec::new();
        let mut k = 0u64;
        loop {
            let rate = self.start + k as f64 * self.step;
            if rate > self.stop + self.step * 1e-9 {
                return rates;
            }
            rates.push(rate);
            k += 1;
        }
    }
}

/// Parses a `start:stop:step` specification with `0 < start < stop` and a
/// positive step that keeps the grid below a million rows.
pub fn parse_rate_spec(spec: &str) -> Result<RateGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "rate spec must be start:stop:step, got {spec:?}"
        )));
    }
    let mut values = [0.0f64; 3];
    for (v, part) in values.iter_mut().zip(&parts) {
        *v = part.parse().map_err(|_| {
            Error::InvalidInput(format!("rate spec {spec:?}: {part:?} is not a number"))
        })?;
    }
    let [start, stop, step] = values;
    if !(start > 0.0 && start < stop && stop.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "rate spec {spec:?} needs 0 < start < stop"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!(
            "rate spec {spec:?} needs a positive step"
        )));
    }
    if (stop - start) / step > 1e6 {
        return Err(Error::InvalidInput(format!(
            "rate spec {spec:?} describes more than a million rows"
        )));
    }
    Ok(RateGrid { start, stop, step })
}

/// The strong converse exponent curve over a rate grid.
pub fn cmd_sce_curve(
    channel: &Channel,
    p: &Distribution,
    grid: &RateGrid,
    config: &RunConfig,
    format: Format,
) -> Result<String> {
    config.validate()?;
    let mut rows = Vec::new();
    for rate in grid.rates() {
        let result = sce_full_with(
            rate,
            channel,
            p,
            config.tol,
            config.max_iter,
            config.rho_cap,
        )?;
        rows.push(result);
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("rate,regime,rho_star,exponent,slope");
            for r in rows {
                out.push('\n');
                out.push_str(&format!(
                    "{},{},{},{},{}",
                    emit::float(r.rate),
                    r.regime.as_str(),
                    emit::float(r.rho_star),
                    emit::float(r.exponent),
                    emit::float(r.slope)
                ));
            }
            out
        }
        Format::Json => {
            let items: Vec<String> = rows
                .into_iter()
                .map(|r| {
                    JsonObject::new()
                        .float("rate", r.rate)
                        .str("regime", r.regime.as_str())
                        .float("rho_star", r.rho_star)
                        .float("exponent", r.exponent)
                        .float("slope", r.slope)
                        .compact()
                })
                .collect();
            emit::json_array_pretty(&items, 0)
        }
    })
}

/// The converse bounds for an `(M, L)` constant composition code at
/// blocklength `n`, as one JSON object.
///
/// Field conventions: outside the parametric regime the refined bound does
/// not apply and `rho_star`, `prefactor`, and `theorem1_bound` are `null`
/// (at non-positive rates both bounds are zero and emitted as such).
pub fn cmd_bound(
    channel: &Channel,
    p: &Distribution,
    n: usize,
    m: u64,
    l: u64,
    config: &RunConfig,
) -> Result<String> {
    config.validate()?;
    let composition = Composition::new(p, n)?;
    if m == 0 || l == 0 {
        return Err(Error::InvalidInput(format!(
            "code parameters must be positive, got M = {m}, L = {l}"
        )));
    }
    let rate = ((m as f64).ln() - (l as f64).ln()) / n as f64;
    if rate <= 0.0 {
        return Ok(JsonObject::new()
            .float("rate", rate)
            .str("regime", Regime::Zero.as_str())
            .null("rho_star")
            .float("exponent", 0.0)
            .null("prefactor")
            .float("theorem1_bound", 0.0)
            .float("theorem2_bound", 0.0)
            .bool("informative", false)
            .pretty());
    }
    let sce = sce_full_with(
        rate,
        channel,
        composition.base(),
        config.tol,
        config.max_iter,
        config.rho_cap,
    )?;
    let theorem2 = theorem2_bound_at_rate_with(
        channel,
        &composition,
        rate,
        config.tol,
        config.max_iter,
        config.rho_cap,
    )?;
    Ok(match sce.regime {
        Regime::Parametric => {
            let refined = theorem1_bound_at_rate_with(
                channel,
                &composition,
                rate,
                config.tol,
                config.max_iter,
                config.rho_cap,
            )?;
            JsonObject::new()
                .float("rate", rate)
                .str("regime", sce.regime.as_str())
                .float("rho_star", refined.rho_star)
                .float("exponent", refined.exponent)
                .float("prefactor", refined.prefactor)
                .float("theorem1_bound", refined.bound)
                .float("theorem2_bound", theorem2)
                .bool("informative", refined.informative)
                .pretty()
        }
        Regime::Zero | Regime::HighRate => JsonObject::new()
            .float("rate", rate)
            .str("regime", sce.regime.as_str())
            .null("rho_star")
            .float("exponent", sce.exponent)
            .null("prefactor")
            .null("theorem1_bound")
            .float("theorem2_bound", theorem2)
            .bool("informative", false)
            .pretty(),
    })
}

/// Runs one validation sweep; returns the rendered report and its
/// violation count (the binary exits 3 when it is nonzero).
pub fn cmd_validate(suite: &str, config: &RunConfig) -> Result<(String, usize)> {
    config.validate()?;
    let report = match suite {
        "ht-converse" => suites::ht_converse_suite(config)?,
        "ht-achievability" => suites::ht_achievability_suite(config)?,
        "code" => suites::code_suite(config)?,
        other => {
            return Err(Error::InvalidInput(format!(
                "validate: unknown suite {other:?} (expected ht-converse, ht-achievability, or code)"
            )))
        }
    };
    Ok((report.render(), report.violations))
}
