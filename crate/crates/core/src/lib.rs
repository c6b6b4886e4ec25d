//! Numerical laboratory for incompressible averaged Lagrangian hydrodynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] – Fourier transforms, exact differentiation, dealiasing and
//!   the α-weighted inner product on the flat 2D torus.
//! * [`helmholtz`] – the smoothing inverse `(1 - α²Δ)⁻¹`, Leray and Stokes
//!   projections, and tridiagonal 1D Helmholtz solves.
//! * [`euler`] – potential-vorticity Euler-α / LANS-α integration, the
//!   third-grade momentum form and the free-space vortex-blob solver.
//! * [`flow`] – flow-map advection, volume and transport diagnostics, and the
//!   Riemannian / group exponential maps.
//! * [`geometry`] – covariant derivative, curvature tensor, sectional
//!   curvature and Jacobi fields of the right-invariant α-metric.
//! * [`ch`] – the Camassa-Holm equation in Eulerian and Lagrangian (spray)
//!   form, with its covariant derivative and curvature.
//!
//! Supporting pieces: [`initial`] (named initial velocity fields), [`rng`]
//! (the SplitMix64 stream behind every seeded quantity), [`bessel`] (`K₀`,
//! `K₁` for the blob kernel) and [`interp`] (monotone cubic interpolation).

pub mod bessel;
pub mod ch;
pub mod error;
pub mod euler;
mod fft;
pub mod flow;
pub mod geometry;
pub mod helmholtz;
pub mod initial;
pub mod interp;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{AlphaParam, PhysicalField, SpectralField, TorusGrid2D};
