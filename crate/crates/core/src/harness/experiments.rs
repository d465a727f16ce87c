use nalgebra::DVector;

use super::family::{bump_family, cutoff, mollifier, DEFAULT_FAMILY_SIZE};
use super::table::{RatioRow, RatioTable, Sweep, Thresholds};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::rank::{image_intersection, DEFAULT_RANK_TOL, DEFAULT_SAMPLES, INTERSECTION_TOL};
use crate::spectral::{apply_derivative_tuple, lp, norm, Field, Grid, NormSpec, SpectralOperator};
use crate::sphere::DEFAULT_SEED;

/// Relative factor of the degenerate-field threshold.
pub const DEGENERATE_TOL: f64 = 1e-13;

/// Box edge of the blow-up grids: the smallest box whose cutoff plateau
/// `L/8` admits `ε = 1/4`.
pub const BLOWUP_BOX_LENGTH: f64 = 2.0;

/// Default mollifier radii, largest first.
pub const DEFAULT_EPS: [f64; 3] = [0.25, 0.125, 0.0625];

/// Default grid size of the blow-up experiment.
pub const DEFAULT_BLOWUP_SIZE: usize = 128;

/// Default Lorentz exponent `q = (1 + p)/2` for `p = n/(n-j)`.
pub fn default_lorentz_q(n: usize, j: usize) -> f64 {
    0.5 * (1.0 + sobolev_exponent(n, j))
}

/// Norm of `D^{k-j}(u - πu)` at the Sobolev exponent `p = n/(n-j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TargetNorm {
    Lp,
    Lorentz(f64),
    Weak,
}

impl TargetNorm {
    fn spec(self, p: f64) -> NormSpec {
        match self {
            Self::Lp => NormSpec::Lp(p),
            Self::Lorentz(q) => NormSpec::Lorentz { p, q },
            Self::Weak => NormSpec::Weak(p),
        }
    }

    fn label(self) -> String {
        match self {
            Self::Lp => "Lp".into(),
            Self::Lorentz(q) => format!("Lorentz(q={q})"),
            Self::Weak => "weak".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub j: usize,
    pub target: TargetNorm,
    pub sizes: Vec<usize>,
    pub family_size: usize,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            j: 1,
            target: TargetNorm::Lp,
            sizes: vec![16, 32, 64],
            family_size: DEFAULT_FAMILY_SIZE,
            seed: DEFAULT_SEED,
            thresholds: Thresholds::default(),
        }
    }
}

/// Checks `1 <= j <= min(k, n - 1)`.
pub fn check_j(op: &Operator, j: usize) -> Result<()> {
    let bound = (op.k() as usize).min(op.n().saturating_sub(1));
    if j >= 1 && j <= bound {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "j = {j} must satisfy 1 <= j <= min(k, n-1) = {bound}"
        )))
    }
}

/// `n/(n-j)`.
pub fn sobolev_exponent(n: usize, j: usize) -> f64 {
    n as f64 / (n - j) as f64
}

fn check_lorentz_q(target: TargetNorm) -> Result<()> {
    match target {
        TargetNorm::Lorentz(q) if !(q > 1.0 && q.is_finite()) => {
            Err(Error::InvalidExponent(format!("Lorentz exponent q = {q} must lie in (1, ∞)")))
        }
        _ => Ok(()),
    }
}

fn check_hardy_q(n: usize, j: usize, q: f64) -> Result<()> {
    let top = sobolev_exponent(n, j);
    if q >= 1.0 && q <= top {
        Ok(())
    } else {
        Err(Error::InvalidExponent(format!("Hardy exponent q = {q} must lie in [1, {top}]")))
    }
}

/// `‖B(D)u‖_{L¹}`, failing with `DegenerateField` below
/// `1e-13 · max(1, ‖u‖_{L¹}) · max_ξ |B(ξ)|` on the grid.
pub fn operator_l1(sop: &SpectralOperator<f64>, u: &Field<f64>) -> Result<f64> {
    let l1 = lp(&sop.apply(u)?, 1.0)?;
    let threshold = DEGENERATE_TOL * lp(u, 1.0)?.max(1.0) * sop.symbol_scale(u.grid());
    if l1 < threshold {
        Err(Error::DegenerateField { l1, threshold })
    } else {
        Ok(l1)
    }
}

/// `D^{k-j}(u - πu)` as a full derivative tuple.
pub fn projected_derivatives(sop: &SpectralOperator<f64>, u: &Field<f64>, j: usize) -> Result<Field<f64>> {
    let v = u.sub(&sop.apply_pi(u)?)?;
    apply_derivative_tuple(sop.k() - j as u32, &v)
}

/// `(numerator, denominator)` for one field.
pub fn field_ratio(sop: &SpectralOperator<f64>, u: &Field<f64>, j: usize, spec: &NormSpec) -> Result<(f64, f64)> {
    let den = operator_l1(sop, u)?;
    let num = norm(&projected_derivatives(sop, u, j)?, spec)?;
    Ok((num, den))
}

fn grid_sweep(
    name: String,
    op: &Operator,
    cfg: &ExperimentConfig,
    spec_for: impl Fn(&[usize]) -> NormSpec,
) -> Result<RatioTable> {
    if cfg.sizes.is_empty() || cfg.family_size == 0 {
        return Err(Error::InvalidConfig("need at least one grid size and one test field".into()));
    }
    let sop = SpectralOperator::new(op)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &size in &cfg.sizes {
        let grid = Grid::new(op.n(), size)?;
        for tf in bump_family(&grid, op.dim_v(), cfg.family_size, cfg.seed)? {
            match field_ratio(&sop, &tf.field, cfg.j, &spec_for(&tf.center)) {
                Ok((numerator, denominator)) => rows.push(RatioRow {
                    grid_size: size,
                    field_id: tf.id,
                    numerator,
                    denominator,
                    ratio: numerator / denominator,
                }),
                Err(e @ Error::DegenerateField { .. }) => skipped.push(format!("N={size} {}: {e}", tf.id)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(RatioTable::new(name, Sweep::GridSize, rows, |r| r.grid_size as f64, skipped, cfg.thresholds))
}

/// `‖D^{k-j}(u - πu)‖ / ‖B(D)u‖_{L¹}` over the bump family and grid sizes.
pub fn sobolev_ratio_experiment(op: &Operator, cfg: &ExperimentConfig) -> Result<RatioTable> {
    check_j(op, cfg.j)?;
    check_lorentz_q(cfg.target)?;
    let p = sobolev_exponent(op.n(), cfg.j);
    let name = format!("sobolev {} j={} {} p={p}", op.name(), cfg.j, cfg.target.label());
    grid_sweep(name, op, cfg, |_| cfg.target.spec(p))
}

/// Weighted ratio `(∫ |D^{k-j}(u - πu)|^q / |x - x₀|^{n - q(n-j)})^{1/q} / ‖B(D)u‖_{L¹}`
/// with `x₀` the bump center.
pub fn hardy_experiment(op: &Operator, q: f64, cfg: &ExperimentConfig) -> Result<RatioTable> {
    check_j(op, cfg.j)?;
    check_hardy_q(op.n(), cfg.j, q)?;
    let name = format!("hardy {} j={} q={q}", op.name(), cfg.j);
    grid_sweep(name, op, cfg, |center| NormSpec::Hardy {
        j: cfg.j,
        q,
        center: center.to_vec(),
    })
}

/// Unit vector spanning the first direction of `⋂ im B(ξ)`.
pub fn intersection_vector(op: &Operator) -> Result<Vec<f64>> {
    let report = image_intersection(op, DEFAULT_SAMPLES, DEFAULT_RANK_TOL)?;
    if report.dimension == 0 {
        return Err(Error::NotInIntersection { defect: 1.0 });
    }
    Ok(report.basis.column(0).iter().copied().collect())
}

/// Relative distance of `w` from `⋂ im B(ξ)`.
pub fn intersection_defect(op: &Operator, w: &[f64]) -> Result<f64> {
    if w.len() != op.dim_w() {
        return Err(Error::DimensionMismatch {
            expected: op.dim_w(),
            found: w.len(),
        });
    }
    let w = DVector::from_column_slice(w);
    if w.norm() == 0.0 {
        return Err(Error::InvalidConfig("w must be nonzero".into()));
    }
    let s = image_intersection(op, DEFAULT_SAMPLES, DEFAULT_RANK_TOL)?.basis;
    let residual = if s.ncols() == 0 {
        w.clone()
    } else {
        &w - &s * (s.transpose() * &w)
    };
    Ok(residual.norm() / w.norm())
}

/// Zeroes every bin with a wavenumber above `N/3` in magnitude on some axis.
pub fn dealias(u: &Field<f64>) -> Result<Field<f64>> {
    let grid = u.grid();
    let limit = (grid.size() / 3) as i64;
    let keep: Vec<bool> = (0..grid.num_points())
        .map(|p| grid.unflatten(p).iter().all(|&b| grid.wavenumber(b).abs() <= limit))
        .collect();
    let spectra = u
        .spectrum()
        .into_iter()
        .map(|mut ch| {
            for (c, &k) in ch.iter_mut().zip(&keep) {
                if !k {
                    *c = Default::default();
                }
            }
            ch
        })
        .collect();
    Field::from_spectrum(grid, spectra)
}

/// `u_ε = ρ · (K ⋆ η_ε w)` for each `ε`, centered in the box. The source
/// `η_ε w` is band-limited by [`dealias`] so the product with `ρ` stays
/// resolved on the grid.
pub fn rhokw_family(op: &Operator, w: &[f64], eps_list: &[f64], grid: &Grid<f64>) -> Result<Vec<Field<f64>>> {
    let defect = intersection_defect(op, w)?;
    if defect > INTERSECTION_TOL {
        return Err(Error::NotInIntersection { defect });
    }
    let plateau = grid.length() / 8.0;
    for &eps in eps_list {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidConfig(format!("mollifier radius {eps} must be positive")));
        }
        if eps > plateau {
            return Err(Error::MollifierTooWide { eps, plateau });
        }
    }
    let sop = SpectralOperator::new(op)?;
    let rho = cutoff(grid);
    eps_list
        .iter()
        .map(|&eps| {
            let eta = mollifier(grid, eps);
            let values = w.iter().flat_map(|&wc| eta.iter().map(move |&e| e * wc)).collect();
            let f = dealias(&Field::new(grid.clone(), op.dim_w(), values)?)?;
            sop.apply_k(&f)?.mul_pointwise(&rho)
        })
        .collect()
}

/// Which quantity a mollifier sweep divides by `‖B(D)u_ε‖_{L¹}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlowupNorm {
    /// `‖D^{k-j}(u - πu)‖_{L^{n/(n-j), q}}`.
    Lorentz(f64),
    /// The Hardy quantity centered at the singularity.
    Hardy(f64),
}

/// Ratios on the `ρKw` family for `ε` from largest to smallest, on a grid of
/// edge [`BLOWUP_BOX_LENGTH`].
pub fn blowup_experiment(
    op: &Operator,
    j: usize,
    norm_kind: BlowupNorm,
    eps_list: &[f64],
    size: usize,
    thresholds: Thresholds,
) -> Result<RatioTable> {
    check_j(op, j)?;
    let n = op.n();
    let p = sobolev_exponent(n, j);
    let grid = Grid::with_length(n, size, BLOWUP_BOX_LENGTH)?;
    let (spec, label) = match norm_kind {
        BlowupNorm::Lorentz(q) => {
            check_lorentz_q(TargetNorm::Lorentz(q))?;
            (NormSpec::Lorentz { p, q }, format!("Lorentz(p={p}, q={q})"))
        }
        BlowupNorm::Hardy(q) => {
            check_hardy_q(n, j, q)?;
            (
                NormSpec::Hardy {
                    j,
                    q,
                    center: grid.center_index(),
                },
                format!("hardy(q={q})"),
            )
        }
    };
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|a, b| b.partial_cmp(a).expect("finite radii"));
    let w = intersection_vector(op)?;
    let fields = rhokw_family(op, &w, &eps, &grid)?;
    let sop = SpectralOperator::new(op)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (e, u) in eps.iter().zip(&fields) {
        let id = format!("eps={e}");
        match field_ratio(&sop, u, j, &spec) {
            Ok((numerator, denominator)) => rows.push(RatioRow {
                grid_size: size,
                field_id: id,
                numerator,
                denominator,
                ratio: numerator / denominator,
            }),
            Err(err @ Error::DegenerateField { .. }) => skipped.push(format!("{id}: {err}")),
            Err(err) => return Err(err),
        }
    }
    let name = format!("blowup {} j={j} {label}", op.name());
    Ok(RatioTable::new(
        name,
        Sweep::Mollifier,
        rows,
        |r| 1.0 / r.field_id[4..].parse::<f64>().expect("numeric radius"),
        skipped,
        thresholds,
    ))
}
