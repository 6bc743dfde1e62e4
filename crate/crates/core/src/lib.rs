//! Boundedness and compactness of monomial operators on `L²(0,1)`.
//!
//! An operator `T xⁿ = cₙ x^{pₙ}` with affine exponents `pₙ = a·n + b` is
//! transferred to a weighted composition operator `f ↦ h·(f∘φ)` on the
//! Hardy space of the right half-plane. Boundedness and compactness are then
//! read off Carleson-square masses of the pull-back measure
//! `μ(E) = ∫_{φ⁻¹(E)∩iℝ} |h|² |ds|`, and cross-checked against Galerkin
//! truncations of `T` in the shifted-Legendre basis.
//!
//! Modules:
//! - [`expr`]: expression language for `h(s)` and `c(n)`.
//! - [`symbols`]: operator specs, half-plane symbols and closed-form checks.
//! - [`measure`]: line measures, Carleson scans and the final verdict.
//! - [`transforms`]: the unitary chain `L²(0,1) → L²(0,∞) → H²` and kernels.
//! - [`oracle`]: exact Galerkin matrices and singular-value diagnostics.
//! - [`catalog`], [`config`], [`report`]: the batch pipeline behind the CLI.

pub mod catalog;
pub mod config;
pub mod error;
pub mod expr;
pub mod measure;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod report;
pub mod scalar;
pub mod symbols;
pub mod transforms;

pub use error::{Error, Result};

/// Double-precision complex number.
pub type Complex64 = num_complex::Complex<f64>;
/// Exact rational scalar used by the oracle's exact mode.
pub type ExactRational = num_rational::BigRational;
/// Exact Gaussian rational.
pub type ExactComplex = num_complex::Complex<ExactRational>;
/// 256-bit binary float used by the oracle's float mode.
pub type Wide = scalar::Wide256;
/// Affine map with `f64` coefficients.
pub type AffineMap64 = symbols::AffineMap<f64>;
/// Affine map with exact rational coefficients.
pub type AffineMapExact = symbols::AffineMap<ExactRational>;
/// Adaptive Gauss–Kronrod integrator in double precision.
pub type Quadrature64 = quad::Integrator<f64>;

/// Tool version stamped into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
