//! Exact annihilators `A(D)` with `ker A(ξ) = im B(ξ)` and potentials `𝔅(D)`
//! with `im 𝔅(ξ) = ker B(ξ)`, both built from `B† = Q/p`:
//!
//! ```text
//! A(ξ) = p(ξ) Id_W - B(ξ) Q(ξ)        (order 2kr, W → W)
//! 𝔅(ξ) = p(ξ) Id_V - Q(ξ) B(ξ)        (order 2kr, V → V)
//! ```

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::max_principal_angle;
use crate::operator::Operator;
use crate::pinv::{projector_symbols, symbolic_pseudoinverse, ProjectorSymbols, RationalMatSymbol};
use crate::rank::{constant_rank, SampledSymbol, DEFAULT_RANK_TOL, DEFAULT_SAMPLES};
use crate::Rational;

/// Pseudoinverse and projector numerators of a constant-rank operator.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub rank: usize,
    pub pinv: RationalMatSymbol<Rational>,
    pub projectors: ProjectorSymbols<Rational>,
}

/// Verifies constant rank by sampling, then builds `B† = Q/p` and the
/// projector numerators. Fails for the zero operator.
pub fn decompose(op: &Operator) -> Result<Decomposition> {
    let report = constant_rank(op, DEFAULT_SAMPLES, DEFAULT_RANK_TOL)?;
    let pinv = symbolic_pseudoinverse(op.symbol(), report.r)?;
    let projectors = projector_symbols(op.symbol(), &pinv)?;
    Ok(Decomposition {
        rank: report.r,
        pinv,
        projectors,
    })
}

/// An operator built from another one, with a flag for the degenerate case.
#[derive(Clone, Debug)]
pub struct Derived {
    pub operator: Operator,
    /// The symbol vanishes identically: a surjective `B(ξ)` for annihilators,
    /// an elliptic `B` for potentials.
    pub is_zero: bool,
}

/// `A(D)` with symbol `p Id_W - B Q`, of order `2kr` from `W` to `W`.
pub fn exact_annihilator(op: &Operator) -> Result<Derived> {
    let dec = decompose(op)?;
    let symbol = dec.projectors.denominator_identity_minus_image(op.dim_w())?;
    let operator = Operator::from_symbol(format!("annihilator({})", op.name()), symbol)?;
    Ok(Derived {
        is_zero: operator.is_zero(),
        operator,
    })
}

/// `𝔅(D)` with symbol `p Id_V - Q B`, of order `2kr` from `V` to `V`.
pub fn potential_operator(op: &Operator) -> Result<Derived> {
    let dec = decompose(op)?;
    let operator = Operator::from_symbol(format!("potential({})", op.name()), dec.projectors.kernel.clone())?;
    Ok(Derived {
        is_zero: operator.is_zero(),
        operator,
    })
}

impl ProjectorSymbols<Rational> {
    fn denominator_identity_minus_image(&self, dim_w: usize) -> Result<crate::symbol::MatPoly<Rational>> {
        crate::symbol::MatPoly::scalar_identity(&self.denominator, dim_w).sub(&self.image)
    }
}

#[derive(Clone, Debug)]
pub struct ExactnessReport {
    /// Largest principal angle between `im B(ξ)` and `ker A(ξ)` over samples.
    pub max_angle: f64,
    /// `dim im B(ξ)`, taken at the first sample where dimensions disagree if any.
    pub dim_im: usize,
    pub dim_ker: usize,
    pub dims_agree: bool,
    /// `A(ξ) B(ξ)` is the zero polynomial.
    pub exact_product_zero: bool,
    pub pass: bool,
}

/// Checks `im B(ξ) = ker A(ξ)` at sampled unit `ξ` and `A B ≡ 0` exactly.
pub fn verify_exactness(b: &Operator, a: &Operator, n_samples: usize, tol: f64) -> Result<ExactnessReport> {
    if a.dim_v() != b.dim_w() || a.n() != b.n() {
        return Err(Error::ShapeMismatch(format!(
            "annihilator acts on R^{} over R^{}, operator maps into R^{} over R^{}",
            a.dim_v(),
            a.n(),
            b.dim_w(),
            b.n()
        )));
    }
    let exact_product_zero = a.symbol().mul(b.symbol())?.is_zero();

    let b_samples = SampledSymbol::for_operator(b, n_samples);
    let a_samples = SampledSymbol::new(a, b_samples.points.clone());
    let images = b_samples.image_bases(DEFAULT_RANK_TOL);
    let kernels: Vec<DMatrix<f64>> = if a.is_zero() {
        vec![DMatrix::identity(a.dim_v(), a.dim_v()); images.len()]
    } else {
        a_samples.kernel_bases(DEFAULT_RANK_TOL)
    };

    let mut max_angle: f64 = 0.0;
    let mut dims = (images[0].ncols(), kernels[0].ncols());
    let mut dims_agree = true;
    for (im, ker) in images.iter().zip(&kernels) {
        if im.ncols() != ker.ncols() {
            if dims_agree {
                dims = (im.ncols(), ker.ncols());
            }
            dims_agree = false;
        }
        max_angle = max_angle.max(max_principal_angle(im, ker));
    }
    Ok(ExactnessReport {
        max_angle,
        dim_im: dims.0,
        dim_ker: dims.1,
        dims_agree,
        exact_product_zero,
        pass: exact_product_zero && dims_agree && max_angle <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::builtin;
    use crate::rank::{image_intersection, kernel_intersection, rank_profile};
    use crate::sphere::random_points;
    use crate::symbol::{MatPoly, ScalarPoly};

    fn outer(n: usize) -> MatPoly<Rational> {
        let g = builtin("gradient", n).unwrap().symbol().clone();
        g.mul(&g.adjoint()).unwrap()
    }

    fn norm_sq(n: usize, m: u32) -> ScalarPoly<Rational> {
        ScalarPoly::norm_squared_power(n, m)
    }

    #[test]
    fn annihilator_of_gradient_is_curl_type() {
        for n in 2..=4 {
            let a = exact_annihilator(&builtin("gradient", n).unwrap()).unwrap();
            assert!(!a.is_zero);
            assert_eq!(a.operator.k(), 2);
            let expected = MatPoly::scalar_identity(&norm_sq(n, 1), n).sub(&outer(n)).unwrap();
            assert_eq!(a.operator.symbol(), &expected);
        }
    }

    #[test]
    fn annihilator_of_divergence_vanishes() {
        let a = exact_annihilator(&builtin("divergence", 3).unwrap()).unwrap();
        assert!(a.is_zero);
        assert_eq!((a.operator.k(), a.operator.dim_v(), a.operator.dim_w()), (2, 1, 1));
    }

    #[test]
    fn annihilator_of_curl_is_weighted_grad_div() {
        let a = exact_annihilator(&builtin("curl3", 3).unwrap()).unwrap();
        assert_eq!(a.operator.k(), 4);
        assert_eq!(a.operator.symbol(), &outer(3).mul_scalar_poly(&norm_sq(3, 1)).unwrap());
    }

    #[test]
    fn potentials() {
        let d = potential_operator(&builtin("divergence", 2).unwrap()).unwrap();
        let expected = MatPoly::scalar_identity(&norm_sq(2, 1), 2).sub(&outer(2)).unwrap();
        assert_eq!(d.operator.symbol(), &expected);
        let c = potential_operator(&builtin("curl3", 3).unwrap()).unwrap();
        assert_eq!(c.operator.symbol(), &outer(3).mul_scalar_poly(&norm_sq(3, 1)).unwrap());
        let g = potential_operator(&builtin("gradient", 3).unwrap()).unwrap();
        assert!(g.is_zero);
    }

    #[test]
    fn exactness_reports() {
        let curl = builtin("curl3", 3).unwrap();
        let a = exact_annihilator(&curl).unwrap().operator;
        let rep = verify_exactness(&curl, &a, 200, 1e-8).unwrap();
        assert!(rep.pass && rep.exact_product_zero);
        assert_eq!((rep.dim_im, rep.dim_ker), (2, 2));

        let grad = builtin("gradient", 3).unwrap();
        let ga = exact_annihilator(&grad).unwrap().operator;
        let rep = verify_exactness(&grad, &ga, 200, 1e-8).unwrap();
        assert!(rep.pass);
        assert_eq!((rep.dim_im, rep.dim_ker), (1, 1));

        let div = builtin("divergence", 3).unwrap();
        let rep = verify_exactness(&curl, &div, 200, 1e-8).unwrap();
        assert!(rep.pass && rep.exact_product_zero);
        assert_eq!((rep.dim_im, rep.dim_ker), (2, 2));

        // gradient is not annihilated by div on R^3 → dims and product both fail
        let rep = verify_exactness(&grad, &div, 50, 1e-8).unwrap();
        assert!(!rep.pass);
        let rep = verify_exactness(&curl, &ga, 50, 1e-8).unwrap();
        assert!(!rep.pass);
        let da = exact_annihilator(&div).unwrap().operator;
        assert!(verify_exactness(&curl, &da, 10, 1e-8).is_err());
    }

    #[test]
    fn catalog_invariants() {
        for (name, n) in [
            ("gradient", 2),
            ("gradient", 3),
            ("divergence", 2),
            ("divergence", 3),
            ("curl3", 3),
            ("laplacian", 2),
            ("symmetric_gradient", 2),
            ("symmetric_gradient", 3),
        ] {
            let op = builtin(name, n).unwrap();
            let ann = exact_annihilator(&op).unwrap().operator;
            assert!(ann.symbol().mul(op.symbol()).unwrap().is_zero(), "{name}");
            let rep = verify_exactness(&op, &ann, 100, 1e-8).unwrap();
            assert!(rep.pass, "{name}: {rep:?}");
            assert!(rank_profile(&ann, 200, DEFAULT_RANK_TOL).constant_rank, "{name}");

            let pot = potential_operator(&op).unwrap().operator;
            assert!(op.symbol().mul(pot.symbol()).unwrap().is_zero(), "{name}");
            let r = rank_profile(&op, 200, DEFAULT_RANK_TOL).r;
            let fresh = SampledSymbol::new(&pot, random_points(n, 100, 3));
            for rk in fresh.ranks(DEFAULT_RANK_TOL) {
                assert_eq!(rk, op.dim_v() - r, "{name}");
            }

            let canc = image_intersection(&op, 300, DEFAULT_RANK_TOL).unwrap().dimension;
            let cocanc = kernel_intersection(&ann, 300, DEFAULT_RANK_TOL).unwrap().dimension;
            assert_eq!(canc, cocanc, "{name}");
        }
    }

    #[test]
    fn non_constant_rank_is_refused() {
        let p = builtin("partial1", 2).unwrap();
        assert!(matches!(exact_annihilator(&p), Err(Error::NonConstantRank { .. })));
        assert!(matches!(potential_operator(&p), Err(Error::NonConstantRank { .. })));
    }
}
