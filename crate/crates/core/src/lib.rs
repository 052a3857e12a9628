//! Numerical laboratory for the prime geodesic theorem on the modular surface.
//!
//! The crate computes three families of objects:
//!
//! * [`arithmetic`] — the exact length spectrum of `PSL(2,Z)\H` through the
//!   correspondence between hyperbolic conjugacy classes and classes of
//!   indefinite binary quadratic forms, and the Chebyshev-like counting
//!   function `Ψ(X) = Σ_{NP≤X} Λ(P)`.
//! * [`spectrum`] — ingestion of Maass spectral-parameter tables, the Weyl-law
//!   diagnostic, spectral exponential sums `R(X,T)` and their smoothed
//!   variants, and the Bessel transform of the standard test function.
//! * [`meansquare`] / [`explicit`] — exact piecewise and closed-form
//!   evaluation of the square-mean error functionals `(1/A)∫_A^{2A}|·|² dX`,
//!   power-law envelopes with exponent fitting, sweep drivers, and the
//!   truncated explicit formula for `Ψ(X)` with its Abel-summation identity.
//!
//! All evaluators are pure functions over immutable inputs. With the default
//! `parallel` feature the data-parallel inner loops (trace enumeration, pair
//! sums, sweep rows) run on rayon; results are collected in index order and
//! reduced sequentially, so output is bit-identical across thread counts and
//! with the sequential fallback (`--no-default-features`).

pub mod arithmetic;
pub mod explicit;
pub mod meansquare;
pub mod spectrum;

mod error;
mod exec;

pub use error::{Error, Result};
