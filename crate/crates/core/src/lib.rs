//! Augustin information measures, strong converse exponents, and refined
//! strong-converse bounds for constant composition codes on discrete
//! memoryless channels — plus the exact brute-force oracles (Neyman-Pearson
//! trade-off, exact list decoding) that every bound is validated against.
//!
//! # Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`dist`] | Distributions, channels, compositions, sub-probability masses |
//! | [`divergence`] | Rényi divergence, conditional divergence, exponential tilting |
//! | [`augustin`] | Augustin information and mean via a certified fixed-point solver |
//! | [`sce`] | Strong converse exponent across its three rate regimes |
//! | [`bounds`] | Hypothesis-testing converse and achievability, code converse bounds |
//! | [`oracle`] | Exact Neyman-Pearson trade-off and exact list-decoding error |
//!
//! # Numerics
//!
//! Probabilities are stored linearly, but every divergence and tilting
//! computation runs on natural logarithms with an explicit `-∞` for zero
//! atoms, so products over long blocks and orders up to ~2¹⁶ neither
//! underflow nor produce spurious NaNs. All results are in nats.
//!
//! Transcendental functions route through `libm` unconditionally, so a
//! computation gives bit-identical results with and without the `std`
//! feature. The crate is `no_std`-compatible; it requires `alloc`.
//!
//! # Example
//!
//! ```
//! use augustin_core::augustin::solve_augustin;
//! use augustin_core::dist::{Channel, Distribution};
//!
//! let w = Channel::binary_symmetric(0.1).unwrap();
//! let p = Distribution::uniform(w.input_alphabet().clone());
//! let sol = solve_augustin(2.0, &w, &p, 1e-12, 10_000).unwrap();
//! assert!((sol.info - 0.494696).abs() < 1e-6);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod augustin;
pub mod bounds;
pub mod dist;
pub mod divergence;
pub mod error;
pub mod oracle;
pub mod sce;

mod numeric;

pub use error::{Error, Result};
