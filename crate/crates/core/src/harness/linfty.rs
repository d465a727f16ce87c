use std::fmt;

use nalgebra::DVector;

use crate::annihilator::decompose;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::rank::{image_intersection, DEFAULT_RANK_TOL, DEFAULT_SAMPLES};
use crate::sphere::{integrate, sphere_area, DEFAULT_SEED};
use crate::symbol::{enumerate_multiindices, MultiIndex};

/// Relative tolerance of the condition.
pub const LINFTY_TOL: f64 = 1e-6;

/// Quadrature size used when none is given: 2048 angles on the circle,
/// 20000 Fibonacci points on `S²`, `2·10⁵` Monte Carlo samples above.
pub fn default_quadrature_size(n: usize) -> usize {
    match n {
        0 | 1 => 2,
        2 => 2048,
        3 => 20_000,
        _ => 200_000,
    }
}

/// `∫_{S^{n-1}} B†(ξ) w ξ^β dℋ^{n-1}` for each intersection basis vector `w`
/// and each `|β| = k - n`.
#[derive(Clone, Debug)]
pub struct LInftyConditionReport {
    pub basis: Vec<Vec<f64>>,
    pub multi_indices: Vec<MultiIndex>,
    /// `integrals[i][b]` is the `V`-vector for `basis[i]` and `multi_indices[b]`.
    pub integrals: Vec<Vec<Vec<f64>>>,
    pub max_entry: f64,
    /// `|S^{n-1}| · max ‖B†(ξ)w‖` over the quadrature nodes.
    pub scale: f64,
    pub quadrature_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn linfty_condition(op: &Operator, quadrature_size: Option<usize>) -> Result<LInftyConditionReport> {
    let (n, k) = (op.n(), op.k() as usize);
    if k < n {
        return Err(Error::InvalidConfig(format!("the L∞ condition needs k >= n, got k = {k}, n = {n}")));
    }
    let size = quadrature_size.unwrap_or_else(|| default_quadrature_size(n));
    let dec = decompose(op)?;
    let inter = image_intersection(op, DEFAULT_SAMPLES, DEFAULT_RANK_TOL)?;
    let basis: Vec<Vec<f64>> = inter.basis.column_iter().map(|c| c.iter().copied().collect()).collect();
    let betas = enumerate_multiindices(n, (k - n) as u32);
    let dim_v = op.dim_v();

    let mut integrals = Vec::new();
    let mut max_entry: f64 = 0.0;
    let mut max_value: f64 = 0.0;
    let mut quadrature_error: f64 = 0.0;
    for w in &basis {
        let wv = DVector::from_column_slice(w);
        let res = integrate(n, size, DEFAULT_SEED, |xi| {
            let v = dec.pinv.eval(xi).expect("dimension checked") * &wv;
            max_value = max_value.max(v.norm());
            betas
                .iter()
                .flat_map(|b| {
                    let mono = b.monomial(xi);
                    v.iter().map(move |x| x * mono).collect::<Vec<_>>()
                })
                .collect()
        });
        quadrature_error = res.error.iter().copied().fold(quadrature_error, f64::max);
        max_entry = res.value.iter().fold(max_entry, |m, v| m.max(v.abs()));
        integrals.push(res.value.chunks(dim_v).map(<[f64]>::to_vec).collect());
    }
    let scale = sphere_area(n) * max_value;
    let tolerance = (LINFTY_TOL * scale).max(quadrature_error);
    Ok(LInftyConditionReport {
        basis,
        multi_indices: betas,
        integrals,
        pass: max_entry <= tolerance,
        max_entry,
        scale,
        quadrature_error,
        tolerance,
    })
}

impl fmt::Display for LInftyConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "intersection dimension: {}", self.basis.len())?;
        writeln!(f, "monomials per basis vector: {}", self.multi_indices.len())?;
        writeln!(f, "max |entry|: {:.6e}", self.max_entry)?;
        writeln!(f, "tolerance: {:.3e} (scale {:.6e}, quadrature error {:.3e})", self.tolerance, self.scale, self.quadrature_error)?;
        write!(f, "CONDITION {}", if self.pass { "PASS" } else { "FAIL" })
    }
}
