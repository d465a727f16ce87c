//! One-shot structural report of an operator.

use std::fmt;

use crate::annihilator::exact_annihilator;
use crate::error::Result;
use crate::operator::Operator;
use crate::rank::{constant_rank, image_intersection, kernel_intersection, RankReport};

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub name: String,
    pub n: usize,
    pub k: u32,
    pub dim_v: usize,
    pub dim_w: usize,
    pub rank: RankReport,
    /// `dim ⋂ im B(ξ)`.
    pub intersection_dim: usize,
    pub canceling: bool,
    /// Order `2kr` of the exact annihilator.
    pub annihilator_order: u32,
    pub annihilator_is_zero: bool,
    /// `dim ⋂ ker A(ξ)` for the exact annihilator `A`.
    pub annihilator_kernel_dim: usize,
    pub annihilator_cocanceling: bool,
}

/// Rank profile, cancellation and cocancellation of the exact annihilator.
/// All verdicts are sampled; fails with `NonConstantRank` when the sampled
/// rank varies.
pub fn analyze(op: &Operator, n_samples: usize, tol: f64) -> Result<AnalysisReport> {
    let rank = constant_rank(op, n_samples, tol)?;
    let intersection_dim = image_intersection(op, n_samples, tol)?.dimension;
    let ann = exact_annihilator(op)?;
    let annihilator_kernel_dim = kernel_intersection(&ann.operator, n_samples, tol)?.dimension;
    Ok(AnalysisReport {
        name: op.name().to_string(),
        n: op.n(),
        k: op.k(),
        dim_v: op.dim_v(),
        dim_w: op.dim_w(),
        rank,
        intersection_dim,
        canceling: intersection_dim == 0,
        annihilator_order: ann.operator.k(),
        annihilator_is_zero: ann.is_zero,
        annihilator_kernel_dim,
        annihilator_cocanceling: annihilator_kernel_dim == 0,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operator: {}", self.name)?;
        writeln!(f, "n = {}, k = {}, dim V = {}, dim W = {}", self.n, self.k, self.dim_v, self.dim_w)?;
        writeln!(
            f,
            "rank profile: min {} max {} over {} directions",
            self.rank.min_rank, self.rank.max_rank, self.rank.sample_count
        )?;
        writeln!(
            f,
            "constant rank r={}, elliptic: {}, canceling: {} (intersection dim {})",
            self.rank.r,
            yes_no(self.rank.elliptic),
            yes_no(self.canceling),
            self.intersection_dim
        )?;
        writeln!(
            f,
            "annihilator: order {}{}, cocanceling: {} (kernel intersection dim {})",
            self.annihilator_order,
            if self.annihilator_is_zero { " (zero)" } else { "" },
            yes_no(self.annihilator_cocanceling),
            self.annihilator_kernel_dim
        )?;
        write!(f, "certification: sampled")
    }
}
