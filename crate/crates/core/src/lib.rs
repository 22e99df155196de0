//! Meromorphic extendibility of continuous functions on the unit circle.
//!
//! Given samples of `f` on a uniform grid of the circle, the crate decides
//! whether `f` extends meromorphically through the disc with at most `N`
//! poles, recovers the poles and evaluates the extension when it does, and
//! builds explicit winding-number certificates `W(Pf + Q) <= -N - 1` when it
//! does not.
//!
//! The pipeline runs through a small number of modules:
//!
//! - [`spectrum`]: samples, discrete Fourier coefficients, the analytic and
//!   coanalytic split, Cesàro means.
//! - [`winding`]: argument tracking for nonvanishing sampled functions.
//! - [`hankel`]: Hankel systems of negative coefficients, annihilating
//!   polynomials, numerical rank.
//! - [`extension`]: the moment-condition decision, root classification, and
//!   Cauchy-integral evaluation of the extension.
//! - [`certificates`]: falsifying `(P, Q)` pairs and zero-free completions.
//! - [`oracle`]: closed-form results for rational functions.
//! - [`generators`]: a small language naming built-in boundary functions.

pub mod certificates;
pub mod error;
pub mod extension;
pub mod generators;
pub mod hankel;
pub mod io;
pub mod oracle;
pub mod polynomial;
pub mod spectrum;
pub mod tolerances;
pub mod winding;

pub use error::{Error, Result};
pub use polynomial::ComplexPolynomial;
pub use spectrum::{BoundarySamples, FourierSpectrum};
pub use tolerances::Tolerances;
