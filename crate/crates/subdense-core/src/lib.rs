//! Core numerical engine for subordinator transition densities.
//!
//! A subordinator is a nondecreasing Lévy process, determined by a drift
//! `b ≥ 0` and a Lévy measure `ν` on `(0,∞)` through its Laplace exponent
//!
//! ```text
//! φ(λ) = bλ + ∫ (1 − e^{−λs}) ν(ds),        E e^{−λ T_t} = e^{−t φ(λ)}.
//! ```
//!
//! The crate evaluates φ and its first three derivatives at real and complex
//! arguments ([`model`]), builds the scale functions and scaling diagnostics
//! that control the density (running sups, generalized inverses, the
//! concentration functions K and h, [`scale`]), computes the transition
//! density p(t,x) by saddle-point asymptotics and by direct Bromwich contour
//! inversion ([`density`]), evaluates constant-free estimate envelopes and
//! regime classification ([`bounds`]), integrates the density into Green
//! functions and subordinated heat-kernel estimates ([`green`], [`heat`]),
//! and provides independent Monte Carlo oracles ([`sampler`]).
//!
//! The crate is `no_std` (with `alloc`) so the numerical kernels can be
//! embedded anywhere; IO, file formats and the CLI live in the companion
//! `subdense` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod density;
pub mod error;
pub mod green;
pub mod heat;
pub mod model;
pub mod quad;
pub mod sampler;
pub mod scale;
pub mod special;

pub use error::{EngineError, ErrorKind};
pub use model::{BernsteinSpec, LevyMeasureSpec};
