use std::fmt;

use super::experiments::sobolev_exponent;
use crate::annihilator::potential_operator;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::spectral::{apply_derivative_tuple, lp, Field, SpectralOperator};

/// `‖B(D)u‖_{L¹}` must be at most this multiple of `‖u‖_{L¹}`.
pub const ANNIHILATED_TOL: f64 = 1e-9;
/// `‖D^{k-1}u‖_{L^{n/(n-1)}}` must exceed this multiple of `‖u‖_{L¹}`.
pub const LHS_FLOOR: f64 = 0.01;

/// Outcome of feeding `u = 𝔅(D)ψ` into the estimate without `π`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialDemoReport {
    /// `‖u‖_{L¹}`.
    pub scale: f64,
    /// `‖B(D)u‖_{L¹}`.
    pub operator_l1: f64,
    /// `‖D^{k-1}u‖_{L^{n/(n-1)}}`.
    pub lhs: f64,
    pub annihilated: bool,
    pub lhs_positive: bool,
    /// Both hold: the estimate without `π` would force `lhs = 0`.
    pub contradiction: bool,
}

pub fn potential_failure_demo(op: &Operator, psi: &Field<f64>) -> Result<PotentialDemoReport> {
    let n = op.n();
    if n < 2 {
        return Err(Error::InvalidConfig("the demo needs n >= 2".into()));
    }
    let pot = potential_operator(op)?;
    if pot.is_zero {
        return Err(Error::EllipticOperator(op.name().to_string()));
    }
    let u = SpectralOperator::<f64>::symbol_only(&pot.operator).apply(psi)?;
    let bu = SpectralOperator::<f64>::symbol_only(op).apply(&u)?;
    let scale = lp(&u, 1.0)?;
    let operator_l1 = lp(&bu, 1.0)?;
    let lhs = lp(&apply_derivative_tuple(op.k() - 1, &u)?, sobolev_exponent(n, 1))?;
    let annihilated = operator_l1 <= ANNIHILATED_TOL * scale;
    let lhs_positive = lhs > LHS_FLOOR * scale;
    Ok(PotentialDemoReport {
        scale,
        operator_l1,
        lhs,
        annihilated,
        lhs_positive,
        contradiction: annihilated && lhs_positive && scale > 0.0,
    })
}

impl fmt::Display for PotentialDemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|u|_L1 = {:.6e}", self.scale)?;
        writeln!(f, "|B(D)u|_L1 = {:.3e} ({})", self.operator_l1, if self.annihilated { "annihilated" } else { "not annihilated" })?;
        writeln!(f, "|D^(k-1)u|_L(n/(n-1)) = {:.6e}", self.lhs)?;
        write!(f, "estimate without projection {}", if self.contradiction { "FAILS" } else { "not refuted" })
    }
}
