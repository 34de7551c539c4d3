//! Log-domain arithmetic helpers shared across the crate.
//!
//! Every transcendental call routes through `libm` so that results are
//! bit-identical with and without the `std` feature (the inherent `f64`
//! methods are `std`-only and may differ between platforms).

use alloc::vec::Vec;

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// ln Γ(x), used for exact-in-log multinomial coefficients.
#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// ln n! = ln Γ(n + 1).
#[inline]
pub(crate) fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// ln Σᵢ e^{xᵢ}, computed two-pass (max first) so that −∞ entries are inert
/// and no finite entry underflows before the final ln.
///
/// Returns −∞ for an empty slice or a slice of −∞ entries.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut max = f64::NEG_INFINITY;
    for &x in xs {
        debug_assert!(!x.is_nan(), "log_sum_exp called on NaN");
        if x > max {
            max = x;
        }
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut sum = 0.0;
    for &x in xs {
        if x != f64::NEG_INFINITY {
            sum += exp(x - max);
        }
    }
    max + ln(sum)
}

/// Convenience wrapper over [`log_sum_exp`] for iterator inputs.
pub(crate) fn log_sum_exp_iter(xs: impl IntoIterator<Item = f64>) -> f64 {
    let buf: Vec<f64> = xs.into_iter().collect();
    log_sum_exp(&buf)
}

/// Neumaier-compensated summation, for long sums of nonnegative masses
/// where naive accumulation would lose low-order bits.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
