//! Moore–Penrose inverses of constant-rank symbols.
//!
//! For a symbol of constant rank `r`, with `M = B B*` and characteristic
//! coefficients `a_i` of `M`,
//!
//! ```text
//! B†(ξ) = -a_r(ξ)^{-1} B*(ξ) [M^{r-1} + a_1 M^{r-2} + … + a_{r-1} Id]
//! ```
//!
//! so `B† = Q/p` with `p = (-1)^r a_r` of degree `2kr` and `Q` of degree
//! `2kr - k`. No common factors are cancelled.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::to_dmatrix;
pub use crate::linalg::{mp_numeric, penrose_residuals};
use crate::scalar::Scalar;
use crate::sphere::{sample_directions, DEFAULT_SEED};
use crate::symbol::{faddeev_leverrier, MatPoly, ScalarPoly};

/// `B†(ξ) = Q(ξ)/p(ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatSymbol<T> {
    /// `dim V x dim W` numerator.
    pub numerator: MatPoly<T>,
    /// Scalar denominator, positive away from the origin.
    pub denominator: ScalarPoly<T>,
    pub rank: usize,
}

impl<T: Scalar> RationalMatSymbol<T> {
    pub fn eval(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        let q = to_dmatrix(&self.numerator.eval_real(xi)?);
        let p = self.denominator.eval_real(xi)?;
        Ok(q / p)
    }
}

/// Projector symbols sharing the denominator `p`:
/// `P_im = B Q / p` onto `im B(ξ)` and `P_ker = (p Id - Q B) / p` onto `ker B(ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorSymbols<T> {
    pub image: MatPoly<T>,
    pub kernel: MatPoly<T>,
    pub denominator: ScalarPoly<T>,
}

impl<T: Scalar> ProjectorSymbols<T> {
    pub fn eval_image(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        Ok(to_dmatrix(&self.image.eval_real(xi)?) / self.denominator.eval_real::<f64>(xi)?)
    }

    pub fn eval_kernel(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        Ok(to_dmatrix(&self.kernel.eval_real(xi)?) / self.denominator.eval_real::<f64>(xi)?)
    }
}

/// Rational Moore–Penrose inverse of a symbol of constant rank `r >= 1`.
///
/// Fails with [`Error::RankMismatch`] when `a_r` is the zero polynomial or
/// comes close to vanishing on the sampled unit sphere, which means `r` is
/// wrong or the rank is not constant.
pub fn symbolic_pseudoinverse<T: Scalar>(b: &MatPoly<T>, r: usize) -> Result<RationalMatSymbol<T>> {
    if r == 0 {
        return Err(Error::RankMismatch("rank must be at least 1".into()));
    }
    if r > b.rows().min(b.cols()) {
        return Err(Error::RankMismatch(format!(
            "rank {r} exceeds the symbol shape {:?}",
            b.shape()
        )));
    }
    let adjoint = b.adjoint();
    let gram = b.mul(&adjoint)?;
    let fl = faddeev_leverrier(&gram, r)?;
    let a_r = fl.coeffs[r - 1].clone();
    if a_r.is_zero() {
        return Err(Error::RankMismatch(format!(
            "characteristic coefficient a_{r} vanishes identically"
        )));
    }
    let sign = if r.is_multiple_of(2) { T::one() } else { -T::one() };
    let mut p = a_r.scale(&sign);
    let mut q = adjoint.mul(&fl.last_iterate)?.scale(&-sign);

    let ones = vec![T::one(); b.n()];
    if p.eval(&ones)?.to_f64().unwrap_or(0.0) < 0.0 {
        p = p.neg();
        q = q.neg();
    }

    // p = e_r(spectrum of B B*) >= 0, zero exactly where rank B(ξ) < r
    let p_real = p.to_real::<f64>();
    let values: Vec<f64> = sample_directions(b.n(), 200, DEFAULT_SEED)
        .iter()
        .map(|xi| p_real.eval(xi).map(f64::abs))
        .collect::<Result<_>>()?;
    let largest = values.iter().copied().fold(0.0, f64::max);
    let smallest = values.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest.is_nan() || smallest <= 1e-10 * largest {
        return Err(Error::RankMismatch(format!(
            "denominator nearly vanishes on the unit sphere (min {smallest:e}, max {largest:e})"
        )));
    }

    Ok(RationalMatSymbol {
        numerator: q,
        denominator: p,
        rank: r,
    })
}

/// Image and kernel projector numerators for `B` and its pseudoinverse.
pub fn projector_symbols<T: Scalar>(b: &MatPoly<T>, mp: &RationalMatSymbol<T>) -> Result<ProjectorSymbols<T>> {
    let image = b.mul(&mp.numerator)?;
    let kernel = MatPoly::scalar_identity(&mp.denominator, b.cols()).sub(&mp.numerator.mul(b)?)?;
    Ok(ProjectorSymbols {
        image,
        kernel,
        denominator: mp.denominator.clone(),
    })
}
