//! Constant-rank linear differential operators with constant coefficients.
//!
//! Operators are stored through their homogeneous matrix symbols with exact
//! rational coefficients. On top of that the crate builds rational
//! Moore–Penrose inverses, exact annihilators and potentials, sampled
//! rank/cancellation verdicts, a periodic spectral engine, and numerical
//! probes of the associated `L¹` inequalities.

pub mod analysis;
pub mod annihilator;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod operator;
pub mod pinv;
pub mod rank;
pub mod scalar;
pub mod spectral;
pub mod sphere;
pub mod symbol;

pub use error::{Error, Result};
pub use operator::Operator;
pub use scalar::{Real, Scalar};

pub type Rational = num_rational::BigRational;

pub type RatPoly = symbol::ScalarPoly<Rational>;
pub type RatMatPoly = symbol::MatPoly<Rational>;
pub type F64MatPoly = symbol::MatPoly<f64>;
pub type RatPinv = pinv::RationalMatSymbol<Rational>;

pub type Grid64 = spectral::Grid<f64>;
pub type Field64 = spectral::Field<f64>;
pub type Grid32 = spectral::Grid<f32>;
pub type Field32 = spectral::Field<f32>;
