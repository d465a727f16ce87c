use rustfft::num_complex::Complex;

use super::Grid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `m` real channels sampled on a grid, stored channel-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<F: Real> {
    grid: Grid<F>,
    channels: usize,
    values: Vec<F>,
}

impl<F: Real> Field<F> {
    pub fn new(grid: Grid<F>, channels: usize, values: Vec<F>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::ShapeMismatch("a field needs at least one channel".into()));
        }
        let expected = channels * grid.num_points();
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at flat index {i}")));
        }
        Ok(Self { grid, channels, values })
    }

    pub fn zeros(grid: &Grid<F>, channels: usize) -> Self {
        Self {
            values: vec![F::zero(); channels * grid.num_points()],
            grid: grid.clone(),
            channels,
        }
    }

    /// Samples `f(x)` (one value per channel) at every grid point.
    pub fn from_fn(grid: &Grid<F>, channels: usize, mut f: impl FnMut(&[F]) -> Vec<F>) -> Result<Self> {
        let npts = grid.num_points();
        let mut values = vec![F::zero(); channels * npts];
        for p in 0..npts {
            let v = f(&grid.coords(p));
            if v.len() != channels {
                return Err(Error::ChannelMismatch {
                    expected: channels,
                    found: v.len(),
                });
            }
            for (c, x) in v.into_iter().enumerate() {
                values[c * npts + p] = x;
            }
        }
        Self::new(grid.clone(), channels, values)
    }

    pub fn grid(&self) -> &Grid<F> {
        &self.grid
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn into_values(self) -> Vec<F> {
        self.values
    }

    pub fn channel(&self, c: usize) -> &[F] {
        let npts = self.grid.num_points();
        &self.values[c * npts..(c + 1) * npts]
    }

    /// Channel vector at one grid point.
    pub fn at(&self, flat: usize) -> Vec<F> {
        (0..self.channels).map(|c| self.channel(c)[flat]).collect()
    }

    pub(crate) fn require_channels(&self, expected: usize) -> Result<()> {
        if self.channels == expected {
            Ok(())
        } else {
            Err(Error::ChannelMismatch {
                expected,
                found: self.channels,
            })
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("fields live on different grids".into()));
        }
        other.require_channels(self.channels)
    }

    /// Pointwise Euclidean norm over channels.
    pub fn magnitudes(&self) -> Vec<F> {
        let npts = self.grid.num_points();
        (0..npts)
            .map(|p| {
                (0..self.channels)
                    .map(|c| {
                        let v = self.values[c * npts + p];
                        v * v
                    })
                    .sum::<F>()
                    .sqrt()
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(F) -> F) -> Self {
        Self {
            grid: self.grid.clone(),
            channels: self.channels,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, s: F) -> Self {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(F, F) -> F) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            channels: self.channels,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Multiplies every channel pointwise by a scalar field given per point.
    pub fn mul_pointwise(&self, weights: &[F]) -> Result<Self> {
        let npts = self.grid.num_points();
        if weights.len() != npts {
            return Err(Error::DimensionMismatch {
                expected: npts,
                found: weights.len(),
            });
        }
        let mut out = self.clone();
        for c in 0..self.channels {
            for (v, &w) in out.values[c * npts..(c + 1) * npts].iter_mut().zip(weights) {
                *v = *v * w;
            }
        }
        Ok(out)
    }

    /// Discrete `L²` inner product `h^n Σ ⟨u_i, v_i⟩`.
    pub fn inner(&self, other: &Self) -> Result<F> {
        self.require_same_shape(other)?;
        let s: F = self.values.iter().zip(&other.values).map(|(&a, &b)| a * b).sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn l2_norm(&self) -> F {
        (self.values.iter().map(|&v| v * v).sum::<F>() * self.grid.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> F {
        self.values.iter().fold(F::zero(), |m, v| m.max(v.abs()))
    }

    /// Mean of each channel.
    pub fn mean(&self) -> Vec<F> {
        let npts = F::of(self.grid.num_points() as f64);
        (0..self.channels)
            .map(|c| self.channel(c).iter().copied().sum::<F>() / npts)
            .collect()
    }

    /// Forward DFT of every channel.
    pub fn spectrum(&self) -> Vec<Vec<Complex<F>>> {
        (0..self.channels)
            .map(|c| {
                let mut data: Vec<Complex<F>> =
                    self.channel(c).iter().map(|&v| Complex::new(v, F::zero())).collect();
                self.grid.fft_forward(&mut data);
                data
            })
            .collect()
    }

    /// Inverse DFT of Hermitian spectra; the imaginary residue is dropped.
    pub fn from_spectrum(grid: &Grid<F>, spectra: Vec<Vec<Complex<F>>>) -> Result<Self> {
        let channels = spectra.len();
        let mut values = Vec::with_capacity(channels * grid.num_points());
        let mut residue = F::zero();
        let mut scale = F::zero();
        for mut data in spectra {
            grid.fft_inverse(&mut data);
            for c in data {
                residue = residue.max(c.im.abs());
                scale = scale.max(c.re.abs());
                values.push(c.re);
            }
        }
        let tol = F::of(1e-12).max(F::epsilon() * F::of(1e4));
        debug_assert!(
            residue <= tol * scale.max(F::one()),
            "imaginary residue {residue} for real scale {scale}"
        );
        Self::new(grid.clone(), channels, values)
    }

    /// Frequency-side `L²` norm, equal to [`Field::l2_norm`] by Parseval.
    pub fn spectral_l2_norm(&self) -> F {
        let npts = F::of(self.grid.num_points() as f64);
        let s: F = self
            .spectrum()
            .iter()
            .flat_map(|ch| ch.iter().map(|c| c.norm_sqr()))
            .sum();
        (s * self.grid.cell_volume() / npts).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        let g = Grid::<f64>::new(2, 8).unwrap();
        assert!(Field::new(g.clone(), 2, vec![0.0; 127]).is_err());
        let mut v = vec![0.0; 64];
        v[3] = f64::NAN;
        assert!(Field::new(g.clone(), 1, v).is_err());
        assert!(Field::from_fn(&g, 2, |_| vec![1.0]).is_err());
    }

    #[test]
    fn channel_layout() {
        let g = Grid::<f64>::new(2, 8).unwrap();
        let f = Field::from_fn(&g, 2, |x| vec![x[0], x[1]]).unwrap();
        let h = g.spacing();
        assert_eq!(f.channel(0)[8], h);
        assert_eq!(f.channel(1)[1], h);
        assert_eq!(f.at(9), vec![h, h]);
        assert!((f.magnitudes()[9] - h * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parseval_and_roundtrip() {
        let g = Grid::<f64>::new(3, 8).unwrap();
        let f = Field::from_fn(&g, 2, |x| vec![(x[0] + 2.0 * x[2]).sin() + 0.3, x[1].cos() * x[0]]).unwrap();
        assert!((f.l2_norm() - f.spectral_l2_norm()).abs() <= 1e-12 * f.l2_norm());
        let back = Field::from_spectrum(&g, f.spectrum()).unwrap();
        assert!(back.sub(&f).unwrap().max_abs() < 1e-13);
    }
}
