//! Dense floating-point linear algebra on evaluated symbols.

use nalgebra::{DMatrix, DVector};

use crate::symbol::Mat;

pub fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// SVD with a complete right factor: `v` is `cols x cols` and `sigma[i]`
/// pairs with `v.column(i)`; `u` has the original row count.
#[derive(Clone, Debug)]
pub struct FullSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl FullSvd {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Self {
                u: DMatrix::zeros(rows, 0),
                sigma: Vec::new(),
                v: DMatrix::identity(cols, cols),
            };
        }
        // pad with zero rows so the thin SVD already yields a square V
        let padded = if rows < cols {
            let mut p = DMatrix::zeros(cols, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(m);
            p
        } else {
            m.clone()
        };
        let svd = padded.svd(true, true);
        let u = svd.u.expect("requested U");
        let v = svd.v_t.expect("requested V^T").transpose();
        Self {
            u: u.rows(0, rows).into_owned(),
            sigma: svd.singular_values.iter().copied().collect(),
            v,
        }
    }

    pub fn max_singular_value(&self) -> f64 {
        self.sigma.iter().copied().fold(0.0, f64::max)
    }

    pub fn rank(&self, threshold: f64) -> usize {
        self.sigma.iter().filter(|&&s| s > threshold).count()
    }

    /// Orthonormal basis of the range (singular values above `threshold`).
    pub fn image_basis(&self, threshold: f64) -> DMatrix<f64> {
        select_columns(&self.u, self.sigma.iter().map(|&s| s > threshold))
    }

    /// Orthonormal basis of the null space.
    pub fn kernel_basis(&self, threshold: f64) -> DMatrix<f64> {
        select_columns(&self.v, self.sigma.iter().map(|&s| s <= threshold))
    }
}

pub fn select_columns(m: &DMatrix<f64>, keep: impl Iterator<Item = bool>) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = keep
        .enumerate()
        .filter(|(_, k)| *k)
        .map(|(i, _)| m.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Spectral norm.
pub fn norm2(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    FullSvd::new(m).max_singular_value()
}

/// `‖(I - S Sᵀ) B‖₂` for orthonormal `S`: how far `span B` sticks out of `span S`.
pub fn projection_defect(basis: &DMatrix<f64>, subspace: &DMatrix<f64>) -> f64 {
    if basis.ncols() == 0 {
        return 0.0;
    }
    let residual = basis - subspace * (subspace.transpose() * basis);
    norm2(&residual)
}

/// Largest principal angle between two subspaces given by orthonormal bases;
/// `π/2` when the dimensions differ.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() != b.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    projection_defect(a, b).min(1.0).asin()
}

/// Moore–Penrose inverse via SVD, zeroing singular values `<= tol·σ_max`.
pub fn mp_numeric(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    let svd = FullSvd::new(m);
    let cutoff = tol * svd.max_singular_value();
    let mut out = DMatrix::zeros(cols, rows);
    for (i, &s) in svd.sigma.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            out += svd.v.column(i) * svd.u.column(i).transpose() / s;
        }
    }
    out
}

/// Relative residuals of the four Penrose identities
/// `MXM = M`, `XMX = X`, `(MX)ᵀ = MX`, `(XM)ᵀ = XM`.
pub fn penrose_residuals(m: &DMatrix<f64>, x: &DMatrix<f64>) -> [f64; 4] {
    let rel = |a: DMatrix<f64>, b: &DMatrix<f64>| {
        let scale = b.norm();
        if scale == 0.0 {
            a.norm()
        } else {
            (a - b).norm() / scale
        }
    };
    let mx = m * x;
    let xm = x * m;
    let sym = |p: &DMatrix<f64>| {
        let scale = p.norm();
        if scale == 0.0 {
            0.0
        } else {
            (p - p.transpose()).norm() / scale
        }
    };
    [rel(&mx * m, m), rel(&xm * x, x), sym(&mx), sym(&xm)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_and_zero_pseudoinverses() {
        let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let p = mp_numeric(&d, 1e-12);
        assert_eq!(p, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.0]));
        let z = DMatrix::<f64>::zeros(3, 2);
        assert_eq!(mp_numeric(&z, 1e-12), DMatrix::zeros(2, 3));
    }

    #[test]
    fn penrose_identities_on_random_rank_deficient_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let a = DMatrix::from_fn(4, 2, |_, _| rng.random_range(-1.0..1.0));
            let b = DMatrix::from_fn(2, 3, |_, _| rng.random_range(-1.0..1.0));
            let m = a * b;
            let x = mp_numeric(&m, 1e-10);
            assert_eq!(x.shape(), (3, 4));
            for r in penrose_residuals(&m, &x) {
                assert!(r < 1e-10, "{r}");
            }
            assert_eq!(FullSvd::new(&m).rank(1e-10 * norm2(&m)), 2);
        }
    }

    #[test]
    fn bases_of_wide_and_tall_matrices() {
        let wide = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 2.0]);
        let svd = FullSvd::new(&wide);
        assert_eq!(svd.kernel_basis(1e-10).ncols(), 2);
        assert_eq!(svd.image_basis(1e-10).shape(), (1, 1));
        let tall = wide.transpose();
        let svd = FullSvd::new(&tall);
        assert_eq!(svd.kernel_basis(1e-10).ncols(), 0);
        let img = svd.image_basis(1e-10);
        assert_eq!(img.shape(), (3, 1));
        assert!(projection_defect(&(tall / 3.0), &img) < 1e-14);
    }

    #[test]
    fn principal_angles() {
        let e1 = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let t = 0.3f64;
        let rot = DMatrix::from_row_slice(2, 1, &[t.cos(), t.sin()]);
        assert!((max_principal_angle(&e1, &rot) - t).abs() < 1e-14);
        assert_eq!(max_principal_angle(&e1, &DMatrix::identity(2, 2)), std::f64::consts::FRAC_PI_2);
    }
}
