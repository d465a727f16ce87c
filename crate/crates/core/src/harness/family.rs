use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::spectral::{Field, Grid};

/// Default number of fields in a test family.
pub const DEFAULT_FAMILY_SIZE: usize = 8;

/// Physical description of one seeded bump, independent of the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpSpec {
    pub id: usize,
    /// Center as a multiple of `L/16` per axis.
    pub center_sixteenths: Vec<i64>,
    /// Radii as a fraction of `L`, in `[1/8, 3/16]`.
    pub radius_fraction: Vec<f64>,
    /// `amplitude[0]` is the constant part, `amplitude[1 + d]` the slope along axis `d`.
    pub amplitude: Vec<Vec<f64>>,
    /// Modulation `sin(m (x_1 + … + x_n))`, `None` for a plain bump.
    pub modulation: Option<u32>,
}

/// A grid field with its bump center rounded to a grid point.
#[derive(Clone, Debug)]
pub struct TestField {
    pub id: String,
    pub field: Field<f64>,
    pub center: Vec<usize>,
}

/// `size` bumps seeded by `seed`; odd members are modulated with `m ∈ {1, 2}`.
pub fn bump_specs(n: usize, channels: usize, size: usize, seed: u64) -> Vec<BumpSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|id| {
            let center_sixteenths = (0..n).map(|_| rng.random_range(7..=9)).collect();
            let radius_fraction = (0..n).map(|_| rng.random_range(0.125..=0.1875)).collect();
            let amplitude = (0..=n)
                .map(|_| (0..channels).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let modulation = (id % 2 == 1).then_some(if id % 4 == 1 { 1 } else { 2 });
            BumpSpec {
                id,
                center_sixteenths,
                radius_fraction,
                amplitude,
                modulation,
            }
        })
        .collect()
}

impl BumpSpec {
    pub fn center(&self, length: f64) -> Vec<f64> {
        self.center_sixteenths.iter().map(|&c| c as f64 * length / 16.0).collect()
    }

    /// `∏ max(0, 1 - ((x_d - c_d)/ρ_d)²)⁴ · (a₀ + Σ a_d (x_d - c_d)/ρ_d)`, optionally modulated.
    pub fn sample(&self, grid: &Grid<f64>) -> Result<TestField> {
        let length = grid.length();
        let center = self.center(length);
        let radius: Vec<f64> = self.radius_fraction.iter().map(|r| r * length).collect();
        let channels = self.amplitude[0].len();
        let field = Field::from_fn(grid, channels, |x| {
            let t: Vec<f64> = x.iter().zip(&center).zip(&radius).map(|((x, c), r)| (x - c) / r).collect();
            let profile: f64 = t.iter().map(|t| (1.0 - t * t).max(0.0).powi(4)).product();
            if profile == 0.0 {
                return vec![0.0; channels];
            }
            let modulation = self
                .modulation
                .map_or(1.0, |m| (m as f64 * x.iter().sum::<f64>()).sin());
            (0..channels)
                .map(|c| {
                    let affine = self.amplitude[0][c]
                        + t.iter().enumerate().map(|(d, t)| self.amplitude[1 + d][c] * t).sum::<f64>();
                    profile * modulation * affine
                })
                .collect()
        })?;
        let h = grid.spacing();
        let center = center.iter().map(|c| ((c / h).round() as usize) % grid.size()).collect();
        Ok(TestField {
            id: format!("bump{}", self.id),
            field,
            center,
        })
    }
}

/// The seeded bump family sampled on `grid`.
pub fn bump_family(grid: &Grid<f64>, channels: usize, size: usize, seed: u64) -> Result<Vec<TestField>> {
    bump_specs(grid.n(), channels, size, seed)
        .iter()
        .map(|s| s.sample(grid))
        .collect()
}

/// Smooth radial cutoff: 1 for `r <= L/8`, 0 for `r >= L/4`, centered in the box.
pub fn cutoff(grid: &Grid<f64>) -> Vec<f64> {
    let length = grid.length();
    let (inner, outer) = (length / 8.0, length / 4.0);
    let g = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    radii(grid)
        .into_iter()
        .map(|r| {
            let a = g((outer - r) / (outer - inner));
            let b = g((r - inner) / (outer - inner));
            a / (a + b)
        })
        .collect()
}

/// `exp(-1/(1 - |x - c|²/ε²))` normalized to unit discrete mass, centered in the box.
pub fn mollifier(grid: &Grid<f64>, eps: f64) -> Vec<f64> {
    let raw: Vec<f64> = radii(grid)
        .into_iter()
        .map(|r| {
            let s = (r / eps).powi(2);
            if s < 1.0 {
                (-1.0 / (1.0 - s)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let mass: f64 = raw.iter().sum::<f64>() * grid.cell_volume();
    raw.into_iter().map(|v| v / mass).collect()
}

/// Distance of each grid point from the box center.
fn radii(grid: &Grid<f64>) -> Vec<f64> {
    let c = grid.center();
    (0..grid.num_points())
        .map(|p| {
            grid.coords(p)
                .iter()
                .zip(&c)
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}
