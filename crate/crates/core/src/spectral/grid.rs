use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform periodic grid on `[0, L)^n` with `N` points per axis.
///
/// Flat indices run over the last axis fastest. FFT plans are built once and
/// shared between clones.
#[derive(Clone)]
pub struct Grid<F: Real> {
    n: usize,
    size: usize,
    length: F,
    forward: Arc<dyn Fft<F>>,
    inverse: Arc<dyn Fft<F>>,
}

impl<F: Real> fmt::Debug for Grid<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("size", &self.size)
            .field("length", &self.length)
            .finish()
    }
}

impl<F: Real> PartialEq for Grid<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.size == other.size && self.length == other.length
    }
}

impl<F: Real> Grid<F> {
    /// Grid on the box of edge `2π`.
    pub fn new(n: usize, size: usize) -> Result<Self> {
        Self::with_length(n, size, F::of(2.0) * F::pi())
    }

    pub fn with_length(n: usize, size: usize, length: F) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if size < 8 || !size.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {size}"
            )));
        }
        if !(length.is_finite() && length > F::zero()) {
            return Err(Error::InvalidGrid(format!("box length must be positive, got {length}")));
        }
        size.checked_pow(n as u32)
            .ok_or_else(|| Error::InvalidGrid(format!("{size}^{n} points overflow")))?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            size,
            length,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Points per axis.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn length(&self) -> F {
        self.length
    }

    pub fn spacing(&self) -> F {
        self.length / F::of(self.size as f64)
    }

    pub fn cell_volume(&self) -> F {
        self.spacing().powi(self.n as i32)
    }

    pub fn num_points(&self) -> usize {
        self.size.pow(self.n as u32)
    }

    /// Grid index of each axis for a flat index.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for d in (0..self.n).rev() {
            idx[d] = flat % self.size;
            flat /= self.size;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.size + i)
    }

    /// Physical coordinates `x_d = i_d L / N`.
    pub fn coords(&self, flat: usize) -> Vec<F> {
        let h = self.spacing();
        self.unflatten(flat).into_iter().map(|i| F::of(i as f64) * h).collect()
    }

    /// Index of the box center `(N/2, …, N/2)`.
    pub fn center_index(&self) -> Vec<usize> {
        vec![self.size / 2; self.n]
    }

    pub fn center(&self) -> Vec<F> {
        vec![self.length / F::of(2.0); self.n]
    }

    /// Signed integer wavenumber of a DFT bin, in `-N/2 … N/2-1`.
    pub fn wavenumber(&self, bin: usize) -> i64 {
        let half = self.size / 2;
        if bin < half {
            bin as i64
        } else {
            bin as i64 - self.size as i64
        }
    }

    /// Angular frequency `2π k / L` of a bin as used by multipliers. The
    /// Nyquist bin maps to 0 so every multiplier stays Hermitian.
    pub fn multiplier_frequency(&self, bin: usize) -> F {
        if bin == self.size / 2 {
            F::zero()
        } else {
            F::of(2.0) * F::pi() * F::of(self.wavenumber(bin) as f64) / self.length
        }
    }

    /// Frequency vectors of all bins, flat order.
    pub fn frequencies(&self) -> Vec<Vec<F>> {
        let axis: Vec<F> = (0..self.size).map(|b| self.multiplier_frequency(b)).collect();
        (0..self.num_points())
            .map(|flat| self.unflatten(flat).into_iter().map(|b| axis[b]).collect())
            .collect()
    }

    /// In-place unnormalized n-dimensional forward DFT.
    pub(crate) fn fft_forward(&self, data: &mut [Complex<F>]) {
        self.transform(data, &*self.forward);
    }

    /// In-place normalized inverse DFT.
    pub(crate) fn fft_inverse(&self, data: &mut [Complex<F>]) {
        self.transform(data, &*self.inverse);
        let scale = F::one() / F::of(self.num_points() as f64);
        data.iter_mut().for_each(|c| *c = *c * scale);
    }

    fn transform(&self, data: &mut [Complex<F>], plan: &dyn Fft<F>) {
        let size = self.size;
        let total = self.num_points();
        debug_assert_eq!(data.len(), total);
        let mut scratch = vec![Complex::new(F::zero(), F::zero()); plan.get_inplace_scratch_len()];
        // last axis: contiguous lines
        plan.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex::new(F::zero(), F::zero()); size];
        for axis in 0..self.n.saturating_sub(1) {
            let stride = size.pow((self.n - 1 - axis) as u32);
            let block = stride * size;
            for start in (0..total).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = data[base + i * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (i, v) in line.iter().enumerate() {
                        data[base + i * stride] = *v;
                    }
                }
            }
        }
    }
}
