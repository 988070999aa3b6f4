//! Numerical toolkit for degrees of sphere maps.
//!
//! The crate builds explicit families of maps between spheres (bubble
//! stacks, Whitehead products, the Hopf fibration), computes their Brouwer
//! degrees and Hopf invariants along two independent routes each, measures
//! fractional Sobolev seminorms, and packages parameter sweeps that verify
//! the expected power laws at desk scale.
//!
//! Module map:
//! - [`geometry`]: spheres, quadrature, stereographic charts, pointwise
//!   exterior algebra;
//! - [`mapzoo`]: the map families and map combinators;
//! - [`sobolev`]: Gagliardo seminorms (full pair sum and Monte Carlo),
//!   Lipschitz norms;
//! - [`potentials`]: grid fields, discrete exterior calculus, spectral
//!   Riesz potentials, Poisson extension;
//! - [`invariants`]: Brouwer degree (integral / preimage count) and Hopf
//!   invariant (Whitehead integral / fiber linking);
//! - [`experiments`]: sweeps, power-law regression and reports.

pub mod error;
// pub mod experiments;
pub mod geometry;
// pub mod invariants;
pub mod mapzoo;
// pub mod potentials;
pub mod sobolev;

pub use error::{Error, Result};
