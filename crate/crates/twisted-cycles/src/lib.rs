//! Twisted homology of a four-punctured elliptic curve.
//!
//! The library computes, both exactly and numerically, the structures attached
//! to the multi-valued integrand g^α on the curve C = ℂ/Γ punctured at
//! x̄₀, x̄₁, x̄₂, 0̄ (with x₀ + x₁ + x₂ = 0):
//!
//! * [`elliptic`] — Weierstrass σ, ζ, ℘, ℘′ and the quasi-periods η₁, η₂ for an
//!   arbitrary period lattice, evaluated through Jacobi theta series.
//! * [`local_system`] — the function g, its logarithmic derivative, and branch
//!   tracking of log g along arbitrary paths on the punctured curve.
//! * [`chains`] — exact ℚ(c)-linear algebra of twisted cycles: the five
//!   generators, the basis relation, duality c ↦ 1/c, and the intersection form.
//! * [`picard_lefschetz`] — vanishing cycles, the twisted Picard–Lefschetz
//!   transform, connection matrices for the elementary configuration-space
//!   paths, and path composition.
//! * [`quadrature`] — adaptive Gauss–Kronrod contour integration of g^α over
//!   regularized cycles (weighted segment + ε-circles, or period loops) and the
//!   numeric cross-check report.
//!
//! Exact coefficients live in ℚ(c) ([`ratfunc::RationalFunctionC`]); every
//! matrix of interest (intersection form, connection matrices) is reproduced
//! with zero tolerance, while the numeric layer cross-validates the same
//! objects with contour quadrature at a concrete c = e^{2πiα}.
//!
//! All types are immutable values and all operations are pure functions; the
//! whole crate is safe for unsynchronized concurrent use.

pub mod chains;
pub mod elliptic;
pub mod error;
pub mod local_system;
pub mod matrix;
pub mod paths;
pub mod picard_lefschetz;
pub mod quadrature;
pub mod ratfunc;
pub mod tolerances;

pub use error::{Error, Result};
