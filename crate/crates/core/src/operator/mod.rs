//! Homogeneous constant-coefficient operators `B(D)u = Σ_{|α|=k} B_α ∂^α u`.

mod catalog;
mod format;

pub use catalog::{builtin, Builtin, BUILTIN_NAMES};
pub use format::{parse_operator, serialize_operator};

use crate::error::{Error, Result};
use crate::symbol::{Mat, MatPoly, MultiIndex};
use crate::Rational;

/// Operator from `V = R^dim_v` to `W = R^dim_w` with exact rational
/// coefficients `B_α` (each `dim_w x dim_v`).
///
/// The zero operator is representable; constructions such as the annihilator
/// of a surjective symbol produce it.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    name: String,
    symbol: MatPoly<Rational>,
}

impl Operator {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        k: u32,
        dim_v: usize,
        dim_w: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Mat<Rational>)>,
    ) -> Result<Self> {
        if n == 0 || dim_v == 0 || dim_w == 0 {
            return Err(Error::InvalidOperator(format!(
                "dimensions must be positive (n={n}, dimV={dim_v}, dimW={dim_w})"
            )));
        }
        let symbol = MatPoly::from_terms(n, k, dim_w, dim_v, terms)?;
        Ok(Self {
            name: name.into(),
            symbol,
        })
    }

    /// Wraps a symbol `W x V` matrix polynomial as an operator.
    pub fn from_symbol(name: impl Into<String>, symbol: MatPoly<Rational>) -> Result<Self> {
        if symbol.n() == 0 || symbol.rows() == 0 || symbol.cols() == 0 {
            return Err(Error::InvalidOperator("empty symbol".into()));
        }
        Ok(Self {
            name: name.into(),
            symbol,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.symbol.n()
    }

    /// Order `k`.
    pub fn k(&self) -> u32 {
        self.symbol.degree()
    }

    pub fn dim_v(&self) -> usize {
        self.symbol.cols()
    }

    pub fn dim_w(&self) -> usize {
        self.symbol.rows()
    }

    /// `B(ξ) = Σ ξ^α B_α`.
    pub fn symbol(&self) -> &MatPoly<Rational> {
        &self.symbol
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// Symbol evaluated at a real frequency.
    pub fn eval(&self, xi: &[f64]) -> Result<Mat<f64>> {
        self.symbol.eval_real(xi)
    }
}

/// Free-function form of [`Operator::symbol`].
pub fn symbol(op: &Operator) -> MatPoly<Rational> {
    op.symbol.clone()
}
