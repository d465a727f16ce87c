use super::poly::{MatPoly, ScalarPoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Output of a (possibly truncated) Faddeev–LeVerrier run.
#[derive(Clone, Debug)]
pub struct FaddeevLeverrier<T> {
    /// `a_1, …, a_s` with `det(λ - M) = λ^m + a_1 λ^{m-1} + … + a_m`.
    pub coeffs: Vec<ScalarPoly<T>>,
    /// `N_s = M^{s-1} + a_1 M^{s-2} + … + a_{s-1} Id`.
    pub last_iterate: MatPoly<T>,
}

/// Runs the recursion `N_1 = Id`, `a_i = -tr(M N_i)/i`,
/// `N_{i+1} = M N_i + a_i Id` for `i = 1..=steps`.
pub fn faddeev_leverrier<T: Scalar>(m: &MatPoly<T>, steps: usize) -> Result<FaddeevLeverrier<T>> {
    let size = m.rows();
    if size != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let steps = steps.min(size);
    let mut iterate = MatPoly::identity(m.n(), size);
    let mut coeffs = Vec::with_capacity(steps);
    for i in 1..=steps {
        if i > 1 {
            let prev = coeffs.last().expect("at least one coefficient");
            iterate = m.mul(&iterate)?.add(&MatPoly::scalar_identity(prev, size))?;
        }
        let a = m.mul(&iterate)?.trace()?;
        let a = a.map(|c| -c.clone() / T::from_int(i as i64));
        coeffs.push(a);
    }
    Ok(FaddeevLeverrier {
        coeffs,
        last_iterate: iterate,
    })
}

/// Characteristic coefficients `[a_1, …, a_m]` of a square matrix polynomial;
/// `a_i` is homogeneous of degree `i·deg M`.
pub fn char_poly_coeffs<T: Scalar>(m: &MatPoly<T>) -> Result<Vec<ScalarPoly<T>>> {
    Ok(faddeev_leverrier(m, m.rows())?.coeffs)
}
