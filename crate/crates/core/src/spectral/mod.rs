//! Periodic grids, Fourier multipliers and the norms used by the inequality
//! probes.
//!
//! Phase convention: `∂_j ↦ iξ_j`, so `B(D) ↦ i^k B(ξ)`. The Nyquist bin is
//! treated as wavenumber 0 on its axis. Zero-frequency rules: `π` keeps the
//! mean, `K`, derivatives and Riesz potentials remove it.

mod field;
mod grid;
mod multiplier;
mod norm;
mod snapshot;

pub use field::Field;
pub use grid::Grid;
pub use multiplier::{
    apply_derivative, apply_derivative_tuple, apply_k, apply_operator, apply_pi, apply_power, apply_riesz,
    Multiplier, SpectralOperator, ZeroModeRule,
};
pub use norm::{hardy, lorentz, lp, norm, weak, NormSpec};
pub use snapshot::{read_snapshot, write_csv_slice, write_snapshot, SNAPSHOT_MAGIC};
