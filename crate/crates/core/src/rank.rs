//! Sampled rank, ellipticity, cancellation and cocancellation verdicts.
//!
//! Every verdict here comes from evaluating the symbol on a finite set of unit
//! directions. Sampling can refute constancy of rank, never certify it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{projection_defect, select_columns, to_dmatrix, FullSvd};
use crate::operator::Operator;
use crate::sphere::{sample_directions, DEFAULT_SEED};

/// Relative singular-value cutoff for ranks and bases.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Directions kept by an intersection step must have cosine at least `1 - this`.
pub const INTERSECTION_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Clone, Debug)]
pub struct RankReport {
    /// Common rank (the maximum when rank is not constant).
    pub r: usize,
    pub constant_rank: bool,
    pub min_rank: usize,
    pub max_rank: usize,
    pub min_witness: Vec<f64>,
    pub max_witness: Vec<f64>,
    /// `r = dim V` at every sample.
    pub elliptic: bool,
    pub sample_count: usize,
    /// Largest singular value over all samples.
    pub scale: f64,
}

#[derive(Clone, Debug)]
pub struct SubspaceReport {
    pub dimension: usize,
    /// Orthonormal columns.
    pub basis: DMatrix<f64>,
    /// Max over samples of `‖(I - P_ξ) basis‖₂`.
    pub residual: f64,
    pub sample_count: usize,
}

/// Symbol evaluated and factored at each sample direction.
pub(crate) struct SampledSymbol {
    pub points: Vec<Vec<f64>>,
    pub svds: Vec<FullSvd>,
    pub scale: f64,
}

impl SampledSymbol {
    pub fn new(op: &Operator, points: Vec<Vec<f64>>) -> Self {
        let svds: Vec<FullSvd> = points
            .iter()
            .map(|xi| FullSvd::new(&to_dmatrix(&op.eval(xi).expect("sample has dimension n"))))
            .collect();
        let scale = svds.iter().map(FullSvd::max_singular_value).fold(0.0, f64::max);
        Self { points, svds, scale }
    }

    pub fn for_operator(op: &Operator, n_samples: usize) -> Self {
        Self::new(op, sample_directions(op.n(), n_samples, DEFAULT_SEED))
    }

    pub fn threshold(&self, tol: f64) -> f64 {
        tol * self.scale
    }

    pub fn ranks(&self, tol: f64) -> Vec<usize> {
        let t = self.threshold(tol);
        self.svds.iter().map(|s| if self.scale == 0.0 { 0 } else { s.rank(t) }).collect()
    }

    pub fn image_bases(&self, tol: f64) -> Vec<DMatrix<f64>> {
        let t = self.threshold(tol);
        self.svds.iter().map(|s| s.image_basis(t)).collect()
    }

    pub fn kernel_bases(&self, tol: f64) -> Vec<DMatrix<f64>> {
        let t = self.threshold(tol);
        self.svds.iter().map(|s| s.kernel_basis(t)).collect()
    }
}

fn profile_of(op: &Operator, sampled: &SampledSymbol, tol: f64) -> RankReport {
    let ranks = sampled.ranks(tol);
    let (mut min_i, mut max_i) = (0, 0);
    for (i, &r) in ranks.iter().enumerate() {
        if r < ranks[min_i] {
            min_i = i;
        }
        if r > ranks[max_i] {
            max_i = i;
        }
    }
    let min_rank = ranks[min_i];
    let max_rank = ranks[max_i];
    let constant_rank = min_rank == max_rank;
    RankReport {
        r: max_rank,
        constant_rank,
        min_rank,
        max_rank,
        min_witness: sampled.points[min_i].clone(),
        max_witness: sampled.points[max_i].clone(),
        elliptic: constant_rank && min_rank == op.dim_v(),
        sample_count: ranks.len(),
        scale: sampled.scale,
    }
}

/// Rank of `B(ξ)` over `n_samples` deterministic plus `n_samples` seeded
/// random unit directions (and the coordinate axes). A singular value counts
/// when it exceeds `tol` times the largest singular value over all samples.
pub fn rank_profile(op: &Operator, n_samples: usize, tol: f64) -> RankReport {
    profile_of(op, &SampledSymbol::for_operator(op, n_samples), tol)
}

fn require_constant(report: &RankReport) -> Result<()> {
    if report.constant_rank {
        Ok(())
    } else {
        Err(Error::NonConstantRank {
            min_rank: report.min_rank,
            max_rank: report.max_rank,
            witness: report.min_witness.clone(),
        })
    }
}

/// Intersects `span start` with each subspace in turn. A direction survives a
/// step when its cosine to the subspace is at least `1 - INTERSECTION_TOL`.
pub fn intersect_subspaces<'a>(start: DMatrix<f64>, subspaces: impl IntoIterator<Item = &'a DMatrix<f64>>) -> DMatrix<f64> {
    let mut current = start;
    for sub in subspaces {
        if current.ncols() == 0 {
            break;
        }
        if sub.ncols() == 0 {
            current = DMatrix::zeros(current.nrows(), 0);
            break;
        }
        // singular values of Sᵀ U are the cosines of the principal angles
        let overlap = FullSvd::new(&(sub.transpose() * &current));
        let keep = overlap.sigma.iter().map(|&s| s >= 1.0 - INTERSECTION_TOL);
        let padded: Vec<bool> = keep.chain(std::iter::repeat(false)).take(current.ncols()).collect();
        current = &current * select_columns(&overlap.v, padded.into_iter());
    }
    current
}

fn subspace_report(ambient: usize, subspaces: &[DMatrix<f64>]) -> SubspaceReport {
    let basis = intersect_subspaces(DMatrix::identity(ambient, ambient), subspaces);
    let residual = subspaces
        .iter()
        .map(|s| projection_defect(&basis, s))
        .fold(0.0, f64::max);
    SubspaceReport {
        dimension: basis.ncols(),
        basis,
        residual,
        sample_count: subspaces.len(),
    }
}

/// `⋂_ξ im B(ξ)` over the samples; the operator is canceling iff the
/// dimension is 0.
pub fn image_intersection(op: &Operator, n_samples: usize, tol: f64) -> Result<SubspaceReport> {
    let sampled = SampledSymbol::for_operator(op, n_samples);
    require_constant(&profile_of(op, &sampled, tol))?;
    Ok(subspace_report(op.dim_w(), &sampled.image_bases(tol)))
}

/// `⋂_ξ ker B(ξ)` over the samples; cocanceling iff the dimension is 0.
pub fn kernel_intersection(op: &Operator, n_samples: usize, tol: f64) -> Result<SubspaceReport> {
    let sampled = SampledSymbol::for_operator(op, n_samples);
    require_constant(&profile_of(op, &sampled, tol))?;
    Ok(subspace_report(op.dim_v(), &sampled.kernel_bases(tol)))
}

/// Errors with [`Error::NonConstantRank`] unless the sampled rank is constant.
pub fn constant_rank(op: &Operator, n_samples: usize, tol: f64) -> Result<RankReport> {
    let report = rank_profile(op, n_samples, tol);
    require_constant(&report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_principal_angle;
    use crate::operator::{builtin, BUILTIN_NAMES};
    use crate::sphere::random_points;
    use crate::symbol::{Mat, MultiIndex};
    use crate::Rational;

    const N: usize = DEFAULT_SAMPLES;
    const TOL: f64 = DEFAULT_RANK_TOL;

    #[test]
    fn curl_gradient_partial_profiles() {
        let curl = rank_profile(&builtin("curl3", 3).unwrap(), N, TOL);
        assert_eq!((curl.r, curl.constant_rank, curl.elliptic), (2, true, false));
        for n in 1..=4 {
            let g = rank_profile(&builtin("gradient", n).unwrap(), N, TOL);
            assert_eq!((g.r, g.constant_rank, g.elliptic), (1, true, true));
        }
        let p = rank_profile(&builtin("partial1", 2).unwrap(), N, TOL);
        assert_eq!((p.min_rank, p.max_rank, p.constant_rank), (0, 1, false));
        assert_eq!(p.min_witness, vec![0.0, 1.0]);
        assert!(p.sample_count >= 500);
    }

    #[test]
    fn image_intersections_of_catalog() {
        for n in 2..=4 {
            let d = image_intersection(&builtin("divergence", n).unwrap(), N, TOL).unwrap();
            assert_eq!(d.dimension, 1);
            assert!((d.basis[(0, 0)].abs() - 1.0).abs() < 1e-12);
            let l = image_intersection(&builtin("laplacian", n).unwrap(), N, TOL).unwrap();
            assert_eq!(l.dimension, 1);
            assert_eq!(image_intersection(&builtin("gradient", n).unwrap(), N, TOL).unwrap().dimension, 0);
            assert_eq!(
                image_intersection(&builtin("symmetric_gradient", n).unwrap(), N, TOL).unwrap().dimension,
                0
            );
        }
        assert_eq!(image_intersection(&builtin("curl3", 3).unwrap(), N, TOL).unwrap().dimension, 0);
        assert!(matches!(
            image_intersection(&builtin("partial1", 2).unwrap(), N, TOL),
            Err(Error::NonConstantRank { .. })
        ));
    }

    #[test]
    fn kernel_intersections() {
        for n in 2..=4 {
            let d = kernel_intersection(&builtin("divergence", n).unwrap(), N, TOL).unwrap();
            assert_eq!(d.dimension, 0);
        }
        let zero = Operator::new("zero", 3, 1, 3, 3, std::iter::empty::<(MultiIndex, Mat<Rational>)>()).unwrap();
        assert_eq!(kernel_intersection(&zero, N, TOL).unwrap().dimension, 3);
        let zp = rank_profile(&zero, N, TOL);
        assert_eq!((zp.r, zp.constant_rank), (0, true));
    }

    #[test]
    fn rank_is_stable_on_fresh_points() {
        for name in BUILTIN_NAMES {
            for n in 1..=4 {
                let Ok(op) = builtin(name, n) else { continue };
                let report = rank_profile(&op, N, TOL);
                if !report.constant_rank {
                    continue;
                }
                let fresh = SampledSymbol::new(&op, random_points(n, 500, 999));
                for r in fresh.ranks(TOL) {
                    assert_eq!(r, report.r, "{name} n={n}");
                }
            }
        }
    }

    #[test]
    fn intersection_lies_in_fresh_images() {
        let op = builtin("divergence", 3).unwrap();
        let report = image_intersection(&op, N, TOL).unwrap();
        let fresh = SampledSymbol::new(&op, random_points(3, 100, 4242));
        for img in fresh.image_bases(TOL) {
            assert!(projection_defect(&report.basis, &img) <= 10.0 * TOL);
        }
        assert!(report.residual <= 10.0 * TOL);
    }

    #[test]
    fn intersection_is_order_independent() {
        // subspaces of R^4 sharing a 2-dimensional core
        let core = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let subs_init: Vec<DMatrix<f64>> = [0.1f64, 0.7, 1.3, 2.0]
            .iter()
            .map(|t| {
                let extra = nalgebra::DVector::from_row_slice(&[0.0, 0.0, t.cos(), t.sin()]);
                DMatrix::from_columns(&[core.column(0).into_owned(), extra, core.column(1).into_owned()])
            })
            .collect();
        // bases must be orthonormal; the columns above already are
        let mut subs = subs_init;
        let forward = intersect_subspaces(DMatrix::identity(4, 4), &subs);
        subs.reverse();
        subs.swap(0, 2);
        let permuted = intersect_subspaces(DMatrix::identity(4, 4), &subs);
        assert_eq!(forward.ncols(), 2);
        assert_eq!(permuted.ncols(), 2);
        assert!(max_principal_angle(&forward, &permuted) <= 1e-8);
        assert!(max_principal_angle(&forward, &core) <= 1e-8);

        let op = builtin("laplacian", 3).unwrap();
        let sampled = SampledSymbol::for_operator(&op, 200);
        let mut bases = sampled.image_bases(TOL);
        let a = intersect_subspaces(DMatrix::identity(1, 1), &bases);
        bases.reverse();
        let b = intersect_subspaces(DMatrix::identity(1, 1), &bases);
        assert_eq!(a.ncols(), b.ncols());
        assert!(max_principal_angle(&a, &b) <= 1e-8);
    }
}
