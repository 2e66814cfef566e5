//! Desk-scale numerics for two-dimensional integrable models with factorizing
//! S-matrices and their short-distance (massless, chiral) limits.
//!
//! The crate is organized along the objects of the underlying theory:
//!
//! - [`numerics`]: adaptive Gauss–Kronrod quadrature on the rapidity line and
//!   on shifted strip contours, shared by everything else.
//! - [`scattering`]: the classified family of scattering functions with limit
//!   (finite sinh-Blaschke products), the massive kernel `S_m` and its
//!   massless limit `S_0`.
//! - [`testfn`]: Gaussian-packet and bump test functions with all transforms
//!   used downstream (mass-shell restrictions, hat/check transforms, chiral
//!   components).
//! - [`zf`]: symbolic normal ordering of Zamolodchikov–Faddeev words and
//!   numeric evaluation of vacuum expectation values.
//! - [`fock`]: S-symmetric Fock-space numerics and the truncated-grid matrix
//!   oracle used to cross-check the symbolic engine.
//! - [`correlators`]: scaled n-point functions and the scaling-limit
//!   experiment.
//! - [`chiral`]: light-ray fields, half-locality kernels, tensor-split and
//!   dilation-clustering checks.
//! - [`ising`]: the S = -1 sector — CAR bounds, Fermi field, energy density,
//!   and the central-charge extraction.
//! - [`cli`]: batch experiment runner behind the `zfscale` binary.
//!
//! All numeric code is generic over the scalar type through [`Real`];
//! concrete aliases for `f64` are exported at the crate root.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

pub mod chiral;
pub mod cli;
pub mod correlators;
pub mod fock;
pub mod ising;
pub mod numerics;
pub mod scattering;
pub mod testfn;
pub mod zf;

/// Floating-point scalar the whole crate is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type Cx<T> = Complex<T>;

/// Default scalar used by the CLI and the test suites.
pub type Scalar = f64;
/// Complex number over the default scalar.
pub type C64 = Complex<f64>;
/// Single-precision complex alias.
pub type C32 = Complex<f32>;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {estimate} > tolerance {tolerance} after {subdivisions} subdivisions")]
    NonConvergence {
        estimate: f64,
        tolerance: f64,
        subdivisions: usize,
    },
    #[error("integration dimension {0} exceeds the supported maximum of 4")]
    DimensionTooLarge(usize),
    #[error("integrand factor has no closed-form analytic continuation to the strip")]
    NonAnalyticInput,
    #[error("zero {0} lies outside the half-strip 0 < Im b <= pi/2")]
    ZeroOutOfStrip(String),
    #[error("zero set is not closed under b -> -conj(b) and auto-completion is disabled")]
    NonClosedUnderReflection,
    #[error("evaluation point hits a pole of the scattering function (|sinh z + sinh b_k| < 1e-14)")]
    PoleHit,
    #[error("massless mass-shell restriction of a non-derivative test function is infrared divergent")]
    MasslessInfraredDivergent,
    #[error("generator word of length {0} exceeds the cap of 8")]
    WordTooLong(usize),
    #[error("particle count {0} exceeds the cap of {1}")]
    ParticleCapExceeded(usize, usize),
    #[error("truncated Fock dimension {0} exceeds the cap of 10^4")]
    FockDimensionTooLarge(usize),
    #[error("test-function supports overlap; half-line locality requires strict separation")]
    SupportsOverlap,
    #[error("central-charge fit is ill-conditioned: {0}")]
    FitIllConditioned(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<V> = std::result::Result<V, Error>;
