//! Numerical operator theory on a truncated Fourier window.
//!
//! The crate works with `C^d`-valued trigonometric data: matrix- and
//! vector-valued Laurent polynomials ([`laurent`]), matrix inner functions
//! built from Blaschke–Potapov factors ([`inner`]), finite sections of the
//! classical space operators on `L^2(C^d)` ([`window`]), model-space
//! conjugations in canonical antilinear form ([`conjugation`]), and truncated
//! Toeplitz / Hankel operators with matrix symbols ([`operators`]).
//!
//! Everything is dense, immutable and pure; all tolerances are explicit.
//! Finite sections are exact inside a tracked *exactness margin*: an operator
//! that moves frequencies by at most `m` agrees with its bilaterally infinite
//! counterpart on every input whose band keeps distance `m` from the window
//! edge. The margin is part of each operator value and enforced on `apply`.

pub mod conjugation;
pub mod error;
pub mod inner;
pub mod laurent;
pub mod linalg;
pub mod operators;
pub mod window;

pub use error::{Error, Result};

/// Scalar type used throughout: double-precision complex numbers.
pub type C64 = num_complex::Complex64;

/// Convenience constructor for [`C64`].
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
