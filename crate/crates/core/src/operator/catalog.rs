use std::str::FromStr;

use super::Operator;
use crate::error::{Error, Result};
use crate::scalar::ratio;
use crate::symbol::{Mat, MultiIndex};
use crate::Rational;

pub const BUILTIN_NAMES: [&str; 6] = [
    "gradient",
    "divergence",
    "curl3",
    "laplacian",
    "symmetric_gradient",
    "partial1",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `∇: R → R^n`, elliptic.
    Gradient,
    /// `div: R^n → R`, surjective symbol.
    Divergence,
    /// `curl` on `R^3`, symbol `v ↦ ξ × v`.
    Curl3,
    /// `Δ` on scalars.
    Laplacian,
    /// `u ↦ (Du + Duᵀ)/2`, flattened upper triangle of `Sym(n)`.
    SymmetricGradient,
    /// `∂₁` on scalars; rank drops on `ξ₁ = 0`.
    Partial1,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gradient" | "grad" => Self::Gradient,
            "divergence" | "div" => Self::Divergence,
            "curl3" | "curl" => Self::Curl3,
            "laplacian" => Self::Laplacian,
            "symmetric_gradient" | "symgrad" => Self::SymmetricGradient,
            "partial1" => Self::Partial1,
            other => return Err(Error::UnknownBuiltin(other.to_string())),
        })
    }
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gradient => "gradient",
            Self::Divergence => "divergence",
            Self::Curl3 => "curl3",
            Self::Laplacian => "laplacian",
            Self::SymmetricGradient => "symmetric_gradient",
            Self::Partial1 => "partial1",
        }
    }

    pub fn build(self, n: usize) -> Result<Operator> {
        let unsupported = || Error::UnsupportedDimension {
            name: self.name().to_string(),
            n,
        };
        if n == 0 {
            return Err(unsupported());
        }
        let one = || ratio(1, 1);
        let e = |i| MultiIndex::axis(n, i, 1);
        let name = self.name();
        match self {
            Self::Gradient => Operator::new(
                name,
                n,
                1,
                1,
                n,
                (0..n).map(|i| (e(i), unit(n, 1, i, 0))),
            ),
            Self::Divergence => Operator::new(
                name,
                n,
                1,
                n,
                1,
                (0..n).map(|i| (e(i), unit(1, n, 0, i))),
            ),
            Self::Curl3 => {
                if n != 3 {
                    return Err(unsupported());
                }
                // C[i][j] = -ξ_l, C[j][i] = ξ_l
                let terms = [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)].map(|(i, j, l)| {
                    let mut m = Mat::zeros(3, 3);
                    m.set(i, j, -one());
                    m.set(j, i, one());
                    (e(l), m)
                });
                Operator::new(name, 3, 1, 3, 3, terms)
            }
            Self::Laplacian => Operator::new(
                name,
                n,
                2,
                1,
                1,
                (0..n).map(|i| (MultiIndex::axis(n, i, 2), unit(1, 1, 0, 0))),
            ),
            Self::SymmetricGradient => {
                let pairs = sym_pairs(n);
                let dim_w = pairs.len();
                let half = ratio(1, 2);
                let terms = (0..n).map(|l| {
                    // ((ξ⊗v + v⊗ξ)/2)_{ij} = (ξ_i v_j + ξ_j v_i)/2
                    let mut m = Mat::<Rational>::zeros(dim_w, n);
                    for (row, &(i, j)) in pairs.iter().enumerate() {
                        if i == l {
                            let v = m.get(row, j).clone() + half.clone();
                            m.set(row, j, v);
                        }
                        if j == l {
                            let v = m.get(row, i).clone() + half.clone();
                            m.set(row, i, v);
                        }
                    }
                    (e(l), m)
                });
                Operator::new(name, n, 1, n, dim_w, terms)
            }
            Self::Partial1 => Operator::new(name, n, 1, 1, 1, [(e(0), unit(1, 1, 0, 0))]),
        }
    }
}

/// Upper-triangular index pairs `(i, j)`, `i <= j`, row-major; the flattening
/// order of `Sym(n)`.
pub fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Mat<Rational> {
    let mut m = Mat::zeros(rows, cols);
    m.set(r, c, ratio(1, 1));
    m
}

/// Looks up a builtin operator by name.
pub fn builtin(name: &str, n: usize) -> Result<Operator> {
    name.parse::<Builtin>()?.build(n)
}
