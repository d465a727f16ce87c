use super::multiplier::apply_power;
use super::Field;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Norms of grid fields, all taken on the pointwise Euclidean channel norm.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    Lp(f64),
    /// `L^{p,q}`; `q = ∞` is the weak norm.
    Lorentz { p: f64, q: f64 },
    Weak(f64),
    Sup,
    /// `(∫ |u|^q / |x - x₀|^{(n/q - (n-j)) q} dx)^{1/q}` with the cell at
    /// `x₀` left out; distances are periodic.
    Hardy { j: usize, q: f64, center: Vec<usize> },
    /// `‖ |ξ|^σ û ‖_{L^p}`.
    SobolevFrac { sigma: f64, p: f64 },
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("p = {p} must lie in [1, ∞)")))
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("q = {q} must lie in [1, ∞]")))
    }
}

/// Evaluates `spec` on `u`.
pub fn norm<F: Real>(u: &Field<F>, spec: &NormSpec) -> Result<F> {
    match spec {
        NormSpec::Lp(p) => lp(u, *p),
        NormSpec::Lorentz { p, q } => lorentz(u, *p, *q),
        NormSpec::Weak(p) => weak(u, *p),
        NormSpec::Sup => Ok(u.magnitudes().into_iter().fold(F::zero(), F::max)),
        NormSpec::Hardy { j, q, center } => hardy(u, *j, *q, center),
        NormSpec::SobolevFrac { sigma, p } => lp(&apply_power(*sigma, u), *p),
    }
}

pub fn lp<F: Real>(u: &Field<F>, p: f64) -> Result<F> {
    check_p(p)?;
    let pf = F::of(p);
    let s: F = u.magnitudes().into_iter().map(|v| v.powf(pf)).sum();
    Ok((s * u.grid().cell_volume()).powf(F::one() / pf))
}

/// Decreasing rearrangement of the pointwise magnitudes.
fn rearranged<F: Real>(u: &Field<F>) -> Vec<F> {
    let mut m = u.magnitudes();
    m.sort_by(|a, b| b.partial_cmp(a).expect("finite magnitudes"));
    m
}

/// `(∫₀^∞ (t^{1/p} f*(t))^q dt/t)^{1/q}` with `f*` the step rearrangement;
/// each step integrates in closed form to `f_i^q (p/q) ((ih)^{q/p} - ((i-1)h)^{q/p})`.
pub fn lorentz<F: Real>(u: &Field<F>, p: f64, q: f64) -> Result<F> {
    check_p(p)?;
    check_q(q)?;
    if q.is_infinite() {
        return weak(u, p);
    }
    let h = u.grid().cell_volume();
    let (pf, qf) = (F::of(p), F::of(q));
    let e = qf / pf;
    let mut prev = F::zero();
    let mut acc = F::zero();
    for (i, f) in rearranged(u).into_iter().enumerate() {
        let next = (F::of((i + 1) as f64) * h).powf(e);
        if f > F::zero() {
            acc = acc + f.powf(qf) * (next - prev);
        }
        prev = next;
    }
    Ok((acc * pf / qf).powf(F::one() / qf))
}

/// `sup_i f_i (i h)^{1/p}` over the rearranged values.
pub fn weak<F: Real>(u: &Field<F>, p: f64) -> Result<F> {
    check_p(p)?;
    let h = u.grid().cell_volume();
    let inv = F::one() / F::of(p);
    Ok(rearranged(u)
        .into_iter()
        .enumerate()
        .fold(F::zero(), |m, (i, f)| m.max(f * (F::of((i + 1) as f64) * h).powf(inv))))
}

pub fn hardy<F: Real>(u: &Field<F>, j: usize, q: f64, center: &[usize]) -> Result<F> {
    let grid = u.grid();
    let n = grid.n();
    check_q(q)?;
    if !q.is_finite() {
        return Err(Error::InvalidExponent("Hardy exponent q must be finite".into()));
    }
    if j > n {
        return Err(Error::InvalidExponent(format!("j = {j} exceeds n = {n}")));
    }
    if center.len() != n || center.iter().any(|&c| c >= grid.size()) {
        return Err(Error::InvalidGrid(format!("center {center:?} is not a grid point")));
    }
    let weight_exp = F::of((n as f64 / q - (n - j) as f64) * q);
    let qf = F::of(q);
    let size = grid.size() as i64;
    let h = grid.spacing();
    let skip = grid.flatten(center);
    let mut acc = F::zero();
    for (p, m) in u.magnitudes().into_iter().enumerate() {
        if p == skip || m == F::zero() {
            continue;
        }
        let r2: F = grid
            .unflatten(p)
            .iter()
            .zip(center)
            .map(|(&i, &c)| {
                let d = (i as i64 - c as i64).rem_euclid(size);
                let d = d.min(size - d);
                let x = F::of(d as f64) * h;
                x * x
            })
            .sum();
        acc = acc + m.powf(qf) / r2.sqrt().powf(weight_exp);
    }
    Ok((acc * grid.cell_volume()).powf(F::one() / qf))
}
