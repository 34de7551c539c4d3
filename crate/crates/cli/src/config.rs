//! Run-wide settings shared by every subcommand.

use augustin_core::{Error, Result};

/// Solver tolerances, enumeration caps, and the seed feeding every
/// randomized sweep.
///
/// One value of this struct fixes a run completely: given identical input
/// files and an identical `RunConfig`, every subcommand's output is
/// byte-stable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    /// Fixed-point residual target for the Augustin solver.
    pub tol: f64,
    /// Iteration cap for the Augustin solver.
    pub max_iter: usize,
    /// Upper limit on the tilt order explored when bracketing ρ*.
    pub rho_cap: f64,
    /// Atom / output-sequence enumeration cap for the exact oracles.
    pub atom_cap: u64,
    /// Seed for the seeded validation sweeps.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
            rho_cap: 65_536.0,
            atom_cap: 10_000_000,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Rejects tolerances outside `(0, 1e-3)` and non-positive caps.
    ///
    /// The order cap additionally has to leave room for a bracketing step,
    /// which the solver itself enforces (`rho_cap > 2`); this check only
    /// guards the invariants every field shares.
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return Err(Error::InvalidInput(format!(
                "tol must lie in (0, 1e-3), got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput(
                "max-iter must be positive".to_string(),
            ));
        }
        if !(self.rho_cap > 0.0) || !self.rho_cap.is_finite() {
            return Err(Error::InvalidInput(format!(
                "rho-cap must be a positive finite real, got {}",
                self.rho_cap
            )));
        }
        if self.atom_cap == 0 {
            return Err(Error::InvalidInput(
                "atom-cap must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn out_of_range_fields_are_rejected() {
        let mut c = RunConfig::default();
        c.tol = 1e-3;
        assert!(c.validate().is_err());
        c = RunConfig::default();
        c.tol = 0.0;
        assert!(c.validate().is_err());
        c = RunConfig::default();
        c.max_iter = 0;
        assert!(c.validate().is_err());
        c = RunConfig::default();
        c.rho_cap = f64::INFINITY;
        assert!(c.validate().is_err());
        c = RunConfig::default();
        c.atom_cap = 0;
        assert!(c.validate().is_err());
    }
}
