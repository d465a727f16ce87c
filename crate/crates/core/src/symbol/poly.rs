use std::collections::BTreeMap;

use super::mat::Mat;
use super::multiindex::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Homogeneous scalar polynomial in `n` variables. Zero coefficients are never
/// stored, so the zero polynomial has an empty term map.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarPoly<T> {
    n: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, T>,
}

/// Homogeneous `rows x cols` matrix-valued polynomial in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPoly<T> {
    n: usize,
    degree: u32,
    rows: usize,
    cols: usize,
    terms: BTreeMap<MultiIndex, Mat<T>>,
}

fn check_index(n: usize, degree: u32, alpha: &MultiIndex) -> Result<()> {
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.dim(),
        });
    }
    if alpha.order() != degree {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: alpha.order(),
        });
    }
    Ok(())
}

fn check_point<T>(n: usize, xi: &[T]) -> Result<()> {
    if xi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: xi.len(),
        });
    }
    Ok(())
}

impl<T: Scalar> ScalarPoly<T> {
    pub fn zero(n: usize, degree: u32) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-0 constant `c`.
    pub fn constant(n: usize, c: T) -> Self {
        let mut p = Self::zero(n, 0);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(n), c);
        }
        p
    }

    /// `|ξ|^(2m)` expanded.
    pub fn norm_squared_power(n: usize, m: u32) -> Self {
        let mut sq = Self::zero(n, 2);
        for i in 0..n {
            sq.terms.insert(MultiIndex::axis(n, i, 2), T::one());
        }
        let mut out = Self::constant(n, T::one());
        for _ in 0..m {
            out = out.mul(&sq).expect("same ambient dimension");
        }
        out
    }

    pub fn from_terms(n: usize, degree: u32, terms: impl IntoIterator<Item = (MultiIndex, T)>) -> Result<Self> {
        let mut p = Self::zero(n, degree);
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: T) -> Result<()> {
        check_index(self.n, self.degree, &alpha)?;
        let entry = self.terms.entry(alpha).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, T> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> T {
        self.terms.get(alpha).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, xi: &[T]) -> Result<T> {
        check_point(self.n, xi)?;
        Ok(self
            .terms
            .iter()
            .fold(T::zero(), |acc, (a, c)| acc + c.clone() * a.monomial(xi)))
    }

    pub fn eval_real<F: Real>(&self, xi: &[F]) -> Result<F> {
        self.to_real::<F>().eval(xi)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ScalarPoly<U> {
        ScalarPoly {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn to_real<F: Real>(&self) -> ScalarPoly<F> {
        self.map(|c| c.to_real())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut acc: BTreeMap<MultiIndex, T> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = acc.entry(a.add(b)?).or_insert_with(T::zero);
                *e = e.clone() + x.clone() * y.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Self {
            n: self.n,
            degree: self.degree + other.degree,
            terms: acc,
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }
}

impl<T: Scalar> MatPoly<T> {
    pub fn zero(n: usize, degree: u32, rows: usize, cols: usize) -> Self {
        Self {
            n,
            degree,
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    /// Constant matrix as a degree-0 polynomial.
    pub fn constant(n: usize, m: Mat<T>) -> Self {
        let (rows, cols) = m.shape();
        let mut p = Self::zero(n, 0, rows, cols);
        if !m.is_zero() {
            p.terms.insert(MultiIndex::zero(n), m);
        }
        p
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self::constant(n, Mat::identity(m))
    }

    /// `p(ξ)·Id_m`.
    pub fn scalar_identity(p: &ScalarPoly<T>, m: usize) -> Self {
        let mut out = Self::zero(p.n, p.degree, m, m);
        for (a, c) in &p.terms {
            out.terms.insert(a.clone(), Mat::identity(m).scale(c));
        }
        out
    }

    pub fn from_terms(
        n: usize,
        degree: u32,
        rows: usize,
        cols: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Mat<T>)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, degree, rows, cols);
        for (alpha, m) in terms {
            p.add_term(alpha, m)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, m: Mat<T>) -> Result<()> {
        check_index(self.n, self.degree, &alpha)?;
        if m.shape() != (self.rows, self.cols) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient {:?} is {:?}, expected {:?}",
                alpha,
                m.shape(),
                (self.rows, self.cols)
            )));
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => {
                existing.add_assign(&m);
                if existing.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None if !m.is_zero() => {
                self.terms.insert(alpha, m);
            }
            None => {}
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Mat<T>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_α ξ^α M_α`.
    pub fn eval(&self, xi: &[T]) -> Result<Mat<T>> {
        check_point(self.n, xi)?;
        let mut out = Mat::zeros(self.rows, self.cols);
        for (a, m) in &self.terms {
            out.add_scaled(&a.monomial(xi), m);
        }
        Ok(out)
    }

    /// Evaluation at a floating-point frequency.
    pub fn eval_real<F: Real>(&self, xi: &[F]) -> Result<Mat<F>> {
        check_point(self.n, xi)?;
        let mut out = Mat::zeros(self.rows, self.cols);
        for (a, m) in &self.terms {
            out.add_scaled(&a.monomial(xi), &m.to_real());
        }
        Ok(out)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatPoly<U> {
        MatPoly {
            n: self.n,
            degree: self.degree,
            rows: self.rows,
            cols: self.cols,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (a.clone(), m.map(&f)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
        }
    }

    pub fn to_real<F: Real>(&self) -> MatPoly<F> {
        self.map(|c| c.to_real())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    /// Transposes every coefficient (real scalars, so this is the adjoint).
    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            degree: self.degree,
            rows: self.cols,
            cols: self.rows,
            terms: self.terms.iter().map(|(a, m)| (a.clone(), m.transpose())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (a, m) in &other.terms {
            out.add_term(a.clone(), m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zero(self.n, self.degree + other.degree, self.rows, other.cols);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.add(b)?, x.try_mul(y)?)?;
            }
        }
        Ok(out)
    }

    /// `p(ξ)·P(ξ)`.
    pub fn mul_scalar_poly(&self, p: &ScalarPoly<T>) -> Result<Self> {
        if self.n != p.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.n,
            });
        }
        let mut out = Self::zero(self.n, self.degree + p.degree, self.rows, self.cols);
        for (a, m) in &self.terms {
            for (b, c) in &p.terms {
                out.add_term(a.add(b)?, m.scale(c))?;
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<ScalarPoly<T>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        ScalarPoly::from_terms(self.n, self.degree, self.terms.iter().map(|(a, m)| (a.clone(), m.trace())))
    }

    /// Scalar entry `(r, c)` as a polynomial.
    pub fn entry(&self, r: usize, c: usize) -> ScalarPoly<T> {
        ScalarPoly {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (a.clone(), m.get(r, c).clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

/// Matrix polynomial evaluated at many points, with coefficients pre-converted
/// to floats.
#[derive(Clone, Debug)]
pub struct RealMatPoly<F> {
    rows: usize,
    cols: usize,
    terms: Vec<(Vec<u32>, Vec<F>)>,
}

impl<F: Real> RealMatPoly<F> {
    pub fn new<T: Scalar>(p: &MatPoly<T>) -> Self {
        Self {
            rows: p.rows,
            cols: p.cols,
            terms: p
                .terms
                .iter()
                .map(|(a, m)| (a.entries().to_vec(), m.to_real::<F>().as_slice().to_vec()))
                .collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Writes `P(ξ)` row-major into `out`; `powers[d][e] = ξ_d^e` must cover
    /// every exponent in use.
    pub fn eval_with_powers(&self, powers: &[Vec<F>], out: &mut [F]) {
        out.iter_mut().for_each(|v| *v = F::zero());
        for (alpha, m) in &self.terms {
            let mono = alpha
                .iter()
                .enumerate()
                .fold(F::one(), |acc, (d, &e)| acc * powers[d][e as usize]);
            for (o, c) in out.iter_mut().zip(m) {
                *o = *o + mono * *c;
            }
        }
    }

    pub fn eval(&self, xi: &[F]) -> Vec<F> {
        let max_e = self
            .terms
            .iter()
            .flat_map(|(a, _)| a.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers = power_table(xi, max_e);
        let mut out = vec![F::zero(); self.rows * self.cols];
        self.eval_with_powers(&powers, &mut out);
        out
    }

    pub fn max_exponent(&self) -> u32 {
        self.terms.iter().flat_map(|(a, _)| a.iter().copied()).max().unwrap_or(0)
    }
}

/// `table[d][e] = xi[d]^e` for `e <= max_e`.
pub fn power_table<F: Real>(xi: &[F], max_e: usize) -> Vec<Vec<F>> {
    xi.iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(max_e + 1);
            let mut acc = F::one();
            for _ in 0..=max_e {
                row.push(acc);
                acc = acc * x;
            }
            row
        })
        .collect()
}
