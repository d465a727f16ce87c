use rustfft::num_complex::Complex;

use super::{Field, Grid};
use crate::annihilator::decompose;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::scalar::Real;
use crate::symbol::{enumerate_multiindices, power_table, MultiIndex, RealMatPoly, ScalarPoly};

/// Value a multiplier takes at the zero frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroModeRule {
    Zero,
    Identity,
    /// The polynomial symbol evaluated at `ξ = 0`.
    Symbol,
}

/// The Fourier multipliers used on the grid. `∂_j ↦ iξ_j` throughout.
#[derive(Clone, Debug, PartialEq)]
pub enum Multiplier {
    /// `i^k B(ξ)`.
    OperatorSymbol,
    /// `Id - Q(ξ)B(ξ)/p(ξ)`.
    ProjectionPi,
    /// `(-i)^k Q(ξ)/p(ξ)`.
    KernelK,
    /// `(iξ)^α`.
    Derivative(MultiIndex),
    /// `|ξ|^{-s}`.
    Riesz(f64),
    /// `|ξ|^σ`.
    Power(f64),
}

impl Multiplier {
    pub fn zero_mode_rule(&self) -> ZeroModeRule {
        match self {
            Self::OperatorSymbol => ZeroModeRule::Symbol,
            Self::ProjectionPi => ZeroModeRule::Identity,
            Self::KernelK | Self::Derivative(_) | Self::Riesz(_) | Self::Power(_) => ZeroModeRule::Zero,
        }
    }
}

/// `i^k` for integer `k`.
fn i_pow<F: Real>(k: i64) -> Complex<F> {
    match k.rem_euclid(4) {
        0 => Complex::new(F::one(), F::zero()),
        1 => Complex::new(F::zero(), F::one()),
        2 => Complex::new(-F::one(), F::zero()),
        _ => Complex::new(F::zero(), -F::one()),
    }
}

fn norm<F: Real>(xi: &[F]) -> F {
    xi.iter().map(|&x| x * x).sum::<F>().sqrt()
}

/// Applies `phase · M(ξ)` per frequency, where `fill(ξ, out)` writes the real
/// `rows x cols` matrix `M(ξ)` row-major and returns `false` to zero the bin.
fn apply_real_matrix<F: Real>(
    u: &Field<F>,
    rows: usize,
    phase: Complex<F>,
    mut fill: impl FnMut(&[F], &mut [F]) -> bool,
) -> Result<Field<F>> {
    let grid = u.grid();
    let cols = u.channels();
    let spec = u.spectrum();
    let npts = grid.num_points();
    let zero = Complex::new(F::zero(), F::zero());
    let mut out = vec![vec![zero; npts]; rows];
    let mut m = vec![F::zero(); rows * cols];
    for (p, xi) in grid.frequencies().iter().enumerate() {
        if !fill(xi, &mut m) {
            continue;
        }
        for r in 0..rows {
            let mut acc = zero;
            for c in 0..cols {
                let w = m[r * cols + c];
                if w != F::zero() {
                    acc = acc + spec[c][p] * w;
                }
            }
            out[r][p] = acc * phase;
        }
    }
    Field::from_spectrum(grid, out)
}

/// Applies a scalar multiplier `phase · s(ξ)` to every channel.
fn apply_scalar<F: Real>(u: &Field<F>, phase: Complex<F>, mut s: impl FnMut(&[F]) -> F) -> Field<F> {
    let grid = u.grid();
    let freqs = grid.frequencies();
    let spectra = u
        .spectrum()
        .into_iter()
        .map(|mut ch| {
            for (c, xi) in ch.iter_mut().zip(&freqs) {
                *c = *c * phase * s(xi);
            }
            ch
        })
        .collect();
    Field::from_spectrum(grid, spectra).expect("scalar multiplier preserves shape")
}

/// Pseudoinverse data evaluated in floating point.
#[derive(Clone, Debug)]
struct InverseSymbols<F: Real> {
    q: RealMatPoly<F>,
    p: ScalarPoly<F>,
    kernel: RealMatPoly<F>,
}

/// An operator prepared for repeated use on grids.
#[derive(Clone, Debug)]
pub struct SpectralOperator<F: Real> {
    name: String,
    n: usize,
    k: u32,
    dim_v: usize,
    dim_w: usize,
    symbol: RealMatPoly<F>,
    inverse: Option<InverseSymbols<F>>,
}

impl<F: Real> SpectralOperator<F> {
    /// Prepares `B(D)` only; any operator is accepted.
    pub fn symbol_only(op: &Operator) -> Self {
        Self {
            name: op.name().to_string(),
            n: op.n(),
            k: op.k(),
            dim_v: op.dim_v(),
            dim_w: op.dim_w(),
            symbol: RealMatPoly::new(op.symbol()),
            inverse: None,
        }
    }

    /// Prepares `B(D)`, `π` and `K`; requires constant rank.
    pub fn new(op: &Operator) -> Result<Self> {
        let dec = decompose(op)?;
        let mut out = Self::symbol_only(op);
        out.inverse = Some(InverseSymbols {
            q: RealMatPoly::new(&dec.pinv.numerator),
            p: dec.pinv.denominator.to_real(),
            kernel: RealMatPoly::new(&dec.projectors.kernel),
        });
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    fn check_grid(&self, u: &Field<F>, channels: usize) -> Result<()> {
        if u.grid().n() != self.n {
            return Err(Error::InvalidGrid(format!(
                "operator acts on R^{} but the grid is {}-dimensional",
                self.n,
                u.grid().n()
            )));
        }
        u.require_channels(channels)
    }

    fn inverse(&self) -> Result<&InverseSymbols<F>> {
        self.inverse
            .as_ref()
            .ok_or_else(|| Error::InvalidOperator(format!("'{}' was prepared without a pseudoinverse", self.name)))
    }

    /// Largest operator norm of `B(ξ)` over the grid frequencies.
    pub fn symbol_scale(&self, grid: &Grid<F>) -> F {
        let h = grid.spacing();
        // |ξ| <= sqrt(n) π / h on the grid
        let radius = F::of(self.n as f64).sqrt() * F::pi() / h;
        let max_e = self.symbol.max_exponent() as usize;
        let mut buf = vec![F::zero(); self.dim_w * self.dim_v];
        let mut best = F::zero();
        for d in 0..self.n {
            let mut xi = vec![F::zero(); self.n];
            xi[d] = F::one();
            self.symbol.eval_with_powers(&power_table(&xi, max_e), &mut buf);
            let fro = buf.iter().map(|&v| v * v).sum::<F>().sqrt();
            best = best.max(fro);
        }
        best * radius.powi(self.k as i32)
    }

    /// `B(D)u`.
    pub fn apply(&self, u: &Field<F>) -> Result<Field<F>> {
        self.check_grid(u, self.dim_v)?;
        let max_e = self.symbol.max_exponent() as usize;
        apply_real_matrix(u, self.dim_w, i_pow(self.k as i64), |xi, m| {
            self.symbol.eval_with_powers(&power_table(xi, max_e), m);
            true
        })
    }

    /// `πu`, the `L²` projection onto `ker B(D)`; constants pass through.
    pub fn apply_pi(&self, u: &Field<F>) -> Result<Field<F>> {
        self.check_grid(u, self.dim_v)?;
        let inv = self.inverse()?;
        let max_e = inv.kernel.max_exponent() as usize;
        let dim = self.dim_v;
        apply_real_matrix(u, dim, i_pow(0), |xi, m| {
            let r = norm(xi);
            if r == F::zero() {
                m.iter_mut().for_each(|v| *v = F::zero());
                (0..dim).for_each(|i| m[i * dim + i] = F::one());
                return true;
            }
            let omega: Vec<F> = xi.iter().map(|&x| x / r).collect();
            inv.kernel.eval_with_powers(&power_table(&omega, max_e), m);
            let p = inv.p.eval_real(&omega).expect("dimension checked");
            m.iter_mut().for_each(|v| *v = *v / p);
            true
        })
    }

    /// `K ⋆ f` with `K̂ = B†`; the zero mode is removed.
    pub fn apply_k(&self, f: &Field<F>) -> Result<Field<F>> {
        self.check_grid(f, self.dim_w)?;
        let inv = self.inverse()?;
        let max_e = inv.q.max_exponent() as usize;
        let k = self.k as i32;
        apply_real_matrix(f, self.dim_v, i_pow(-(self.k as i64)), |xi, m| {
            let r = norm(xi);
            if r == F::zero() {
                return false;
            }
            let omega: Vec<F> = xi.iter().map(|&x| x / r).collect();
            inv.q.eval_with_powers(&power_table(&omega, max_e), m);
            let s = F::one() / (inv.p.eval_real(&omega).expect("dimension checked") * r.powi(k));
            m.iter_mut().for_each(|v| *v = *v * s);
            true
        })
    }

    /// Applies one of the multipliers, dispatching on its kind.
    pub fn apply_multiplier(&self, kind: &Multiplier, u: &Field<F>) -> Result<Field<F>> {
        match kind {
            Multiplier::OperatorSymbol => self.apply(u),
            Multiplier::ProjectionPi => self.apply_pi(u),
            Multiplier::KernelK => self.apply_k(u),
            Multiplier::Derivative(alpha) => apply_derivative(alpha, u),
            Multiplier::Riesz(s) => apply_riesz(*s, u),
            Multiplier::Power(s) => Ok(apply_power(*s, u)),
        }
    }
}

/// `B(D)u` with `∂_j ↦ iξ_j`.
pub fn apply_operator<F: Real>(op: &Operator, u: &Field<F>) -> Result<Field<F>> {
    SpectralOperator::symbol_only(op).apply(u)
}

/// `πu`; fails unless `op` has constant rank.
pub fn apply_pi<F: Real>(op: &Operator, u: &Field<F>) -> Result<Field<F>> {
    SpectralOperator::new(op)?.apply_pi(u)
}

/// `K ⋆ f`; fails unless `op` has constant rank.
pub fn apply_k<F: Real>(op: &Operator, f: &Field<F>) -> Result<Field<F>> {
    SpectralOperator::new(op)?.apply_k(f)
}

/// `∂^α u` channelwise.
pub fn apply_derivative<F: Real>(alpha: &MultiIndex, u: &Field<F>) -> Result<Field<F>> {
    let n = u.grid().n();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.dim(),
        });
    }
    let e = alpha.entries().to_vec();
    Ok(apply_scalar(u, i_pow(alpha.order() as i64), |xi| {
        xi.iter().zip(&e).fold(F::one(), |acc, (&x, &k)| acc * x.powi(k as i32))
    }))
}

/// Riesz potential `|ξ|^{-s}`, `0 < s < n`.
pub fn apply_riesz<F: Real>(s: f64, u: &Field<F>) -> Result<Field<F>> {
    let n = u.grid().n() as f64;
    if !(s > 0.0 && s < n) {
        return Err(Error::InvalidExponent(format!("Riesz order {s} outside (0, {n})")));
    }
    Ok(apply_power(-s, u))
}

/// `|ξ|^σ` with the zero mode removed.
pub fn apply_power<F: Real>(sigma: f64, u: &Field<F>) -> Field<F> {
    let sigma = F::of(sigma);
    apply_scalar(u, i_pow(0), |xi| {
        let r = norm(xi);
        if r == F::zero() {
            F::zero()
        } else {
            r.powf(sigma)
        }
    })
}

/// The full tuple `(∂^α u)_{|α| = m}`, channels grouped by multi-index in
/// enumeration order. `m = 0` returns `u` unchanged.
pub fn apply_derivative_tuple<F: Real>(m: u32, u: &Field<F>) -> Result<Field<F>> {
    if m == 0 {
        return Ok(u.clone());
    }
    let grid = u.grid();
    let mut values = Vec::new();
    let mut channels = 0;
    for alpha in enumerate_multiindices(grid.n(), m) {
        let d = apply_derivative(&alpha, u)?;
        channels += d.channels();
        values.extend(d.into_values());
    }
    Field::new(grid.clone(), channels, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::builtin;
    use crate::symbol::Mat;

    fn grid(n: usize, size: usize) -> Grid<f64> {
        Grid::new(n, size).unwrap()
    }

    #[test]
    fn pure_mode_derivative() {
        let g = grid(1, 16);
        let u = Field::from_fn(&g, 1, |x| vec![x[0].sin()]).unwrap();
        let op = Operator::new("d", 1, 1, 1, 1, [(MultiIndex::new(vec![1]), Mat::identity(1))]).unwrap();
        let du = apply_operator(&op, &u).unwrap();
        let expected = Field::from_fn(&g, 1, |x| vec![x[0].cos()]).unwrap();
        assert!(du.sub(&expected).unwrap().max_abs() <= 1e-12);
        let p1 = apply_operator(&builtin("partial1", 1).unwrap(), &u).unwrap();
        assert!(p1.sub(&expected).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn divergence_of_cross_field_vanishes() {
        let g = grid(2, 16);
        let u = Field::from_fn(&g, 2, |x| vec![x[1].sin(), x[0].sin()]).unwrap();
        let d = apply_operator(&builtin("divergence", 2).unwrap(), &u).unwrap();
        assert!(d.max_abs() <= 1e-12);
    }

    #[test]
    fn laplacian_of_sine() {
        let g = grid(2, 16);
        let u = Field::from_fn(&g, 1, |x| vec![x[0].sin()]).unwrap();
        let l = apply_operator(&builtin("laplacian", 2).unwrap(), &u).unwrap();
        assert!(l.add(&u).unwrap().max_abs() <= 1e-12);
        let d2 = apply_derivative(&MultiIndex::new(vec![2, 0]), &u).unwrap();
        assert!(d2.add(&u).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn channel_checks() {
        let g = grid(2, 8);
        let u = Field::zeros(&g, 1);
        assert!(matches!(
            apply_operator(&builtin("divergence", 2).unwrap(), &u),
            Err(Error::ChannelMismatch { expected: 2, found: 1 })
        ));
        let g3 = grid(3, 8);
        assert!(apply_operator(&builtin("gradient", 2).unwrap(), &Field::zeros(&g3, 1)).is_err());
        assert!(matches!(
            apply_pi(&builtin("partial1", 2).unwrap(), &u),
            Err(Error::NonConstantRank { .. })
        ));
    }

    #[test]
    fn pi_for_elliptic_keeps_only_mean() {
        let g = grid(2, 16);
        let u = Field::from_fn(&g, 1, |x| vec![(x[0] + x[1]).cos() + 0.5 * (2.0 * x[1]).sin() + 3.0]).unwrap();
        let pu = apply_pi(&builtin("gradient", 2).unwrap(), &u).unwrap();
        for v in pu.values() {
            assert!((v - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pi_for_curl() {
        let g = grid(3, 16);
        let curl = builtin("curl3", 3).unwrap();
        // ∇(sin x sin y sin z)
        let grad = Field::from_fn(&g, 3, |x| {
            let (s, c): (Vec<f64>, Vec<f64>) = x.iter().map(|t| (t.sin(), t.cos())).unzip();
            vec![c[0] * s[1] * s[2], s[0] * c[1] * s[2], s[0] * s[1] * c[2]]
        })
        .unwrap();
        let pg = apply_pi(&curl, &grad).unwrap();
        assert!(pg.sub(&grad).unwrap().max_abs() <= 1e-10);
        let solenoidal = Field::from_fn(&g, 3, |x| vec![x[1].sin(), (x[2] + x[0]).cos(), 0.0]).unwrap();
        assert!(apply_pi(&curl, &solenoidal).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn k_inverts_gradient() {
        let g = grid(2, 16);
        let op = builtin("gradient", 2).unwrap();
        let u = Field::from_fn(&g, 1, |x| vec![(x[0] - 2.0 * x[1]).sin() + (3.0 * x[1]).cos()]).unwrap();
        let back = apply_k(&op, &apply_operator(&op, &u).unwrap()).unwrap();
        assert!(back.sub(&u).unwrap().max_abs() <= 1e-12);
        let zero = apply_k(&op, &Field::zeros(&g, 2)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn riesz_pure_mode_and_inverse() {
        let g = grid(1, 16);
        let u = Field::from_fn(&g, 1, |x| vec![(3.0 * x[0]).cos()]).unwrap();
        let r = apply_riesz(0.5, &u).unwrap();
        let g1 = grid(2, 16);
        let v = Field::from_fn(&g1, 1, |x| vec![(3.0 * x[0]).cos()]).unwrap();
        let r1 = apply_riesz(1.0, &v).unwrap();
        assert!(r1.sub(&v.scale(1.0 / 3.0)).unwrap().max_abs() <= 1e-13);
        assert!(r.sub(&u.scale(3f64.powf(-0.5))).unwrap().max_abs() <= 1e-13);
        assert!(apply_riesz(1.0, &u).is_err());
        assert!(apply_riesz(0.0, &v).is_err());

        let w = Field::from_fn(&g1, 1, |x| vec![(x[0] + 2.0 * x[1]).sin() - (5.0 * x[1]).cos()]).unwrap();
        let back = apply_power(1.3, &apply_riesz(1.3, &w).unwrap());
        assert!(back.sub(&w).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn derivative_tuple_layout() {
        let g = grid(2, 8);
        let u = Field::from_fn(&g, 2, |x| vec![x[0].sin(), x[1].cos()]).unwrap();
        let d = apply_derivative_tuple(2, &u).unwrap();
        assert_eq!(d.channels(), 6);
        assert_eq!(apply_derivative_tuple(0, &u).unwrap(), u);
    }

    #[test]
    fn zero_mode_rules() {
        assert_eq!(Multiplier::ProjectionPi.zero_mode_rule(), ZeroModeRule::Identity);
        assert_eq!(Multiplier::KernelK.zero_mode_rule(), ZeroModeRule::Zero);
        assert_eq!(Multiplier::Riesz(1.0).zero_mode_rule(), ZeroModeRule::Zero);
    }

    #[test]
    fn single_precision() {
        let g = Grid::<f32>::new(2, 16).unwrap();
        let u = Field::from_fn(&g, 1, |x| vec![x[0].sin()]).unwrap();
        let l = apply_operator(&builtin("laplacian", 2).unwrap(), &u).unwrap();
        assert!(l.add(&u).unwrap().max_abs() <= 1e-5);
        let pu = apply_pi(&builtin("gradient", 2).unwrap(), &u).unwrap();
        assert!(pu.max_abs() <= 1e-5);
    }
}
