use std::fmt;

/// CSV header of every ratio table.
pub const CSV_HEADER: &str = "N,field_id,numerator,denominator,ratio";

/// Default ratio-variation factor below which a sweep counts as bounded.
pub const DEFAULT_BOUNDED_FACTOR: f64 = 2.0;
/// Default relative growth at or above which a sweep counts as divergent.
pub const DEFAULT_GROWTH_THRESHOLD: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Divergent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bounded => "BOUNDED",
            Self::Divergent => "DIVERGENT",
            Self::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// What the rows of a table are indexed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Grid sizes; bounded when per-size maxima vary by less than the factor.
    GridSize,
    /// Mollifier radii from largest to smallest; divergent on strict growth
    /// of at least the threshold.
    Mollifier,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub bounded_factor: f64,
    pub growth: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            bounded_factor: DEFAULT_BOUNDED_FACTOR,
            growth: DEFAULT_GROWTH_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub grid_size: usize,
    pub field_id: String,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub max_ratio: f64,
    /// Least-squares slope of `log(ratio)` against `log N` or `log(1/ε)`.
    pub trend_slope: f64,
    /// Largest over smallest of the per-step maxima.
    pub variation: f64,
    /// Last step over first step, minus one.
    pub growth: f64,
    pub monotone: bool,
    pub verdict: Verdict,
}

/// Rows of one experiment plus a summary over the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioTable {
    pub experiment: String,
    pub sweep: Sweep,
    pub rows: Vec<RatioRow>,
    /// Fields left out, with the reason.
    pub skipped: Vec<String>,
    pub summary: Summary,
}

impl RatioTable {
    /// Builds the table. `step_of_row` gives the sweep parameter of a row
    /// (`N` or `1/ε`); rows sharing a value form one step, in order of first
    /// appearance.
    pub fn new(
        experiment: impl Into<String>,
        sweep: Sweep,
        rows: Vec<RatioRow>,
        step_of_row: impl Fn(&RatioRow) -> f64,
        skipped: Vec<String>,
        thresholds: Thresholds,
    ) -> Self {
        // per-step maxima in order of first appearance
        let mut steps: Vec<(f64, f64)> = Vec::new();
        for row in &rows {
            let s = step_of_row(row);
            match steps.iter_mut().find(|(k, _)| *k == s) {
                Some((_, m)) => *m = m.max(row.ratio),
                None => steps.push((s, row.ratio)),
            }
        }
        let summary = summarize(sweep, &steps, thresholds);
        Self {
            experiment: experiment.into(),
            sweep,
            rows,
            skipped,
            summary,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.summary.verdict
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.grid_size, r.field_id, r.numerator, r.denominator, r.ratio
            ));
        }
        out
    }
}

fn summarize(sweep: Sweep, steps: &[(f64, f64)], th: Thresholds) -> Summary {
    let maxima: Vec<f64> = steps.iter().map(|s| s.1).collect();
    let max_ratio = maxima.iter().copied().fold(f64::NAN, f64::max);
    let lo = maxima.iter().copied().fold(f64::INFINITY, f64::min);
    let variation = if maxima.is_empty() { f64::NAN } else { max_ratio / lo };
    let growth = match (maxima.first(), maxima.last()) {
        (Some(a), Some(b)) => b / a - 1.0,
        _ => f64::NAN,
    };
    let monotone = maxima.windows(2).all(|w| w[1] > w[0]);
    let trend_slope = slope(&steps.iter().map(|&(s, r)| (s.ln(), r.ln())).collect::<Vec<_>>());
    let verdict = if maxima.len() < 2 {
        Verdict::Inconclusive
    } else {
        match sweep {
            Sweep::GridSize if variation < th.bounded_factor => Verdict::Bounded,
            Sweep::Mollifier if monotone && growth >= th.growth => Verdict::Divergent,
            Sweep::Mollifier if variation < 1.0 + th.growth => Verdict::Bounded,
            _ => Verdict::Inconclusive,
        }
    };
    Summary {
        max_ratio,
        trend_slope,
        variation,
        growth,
        monotone,
        verdict,
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

impl fmt::Display for RatioTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.summary;
        writeln!(f, "experiment: {}", self.experiment)?;
        writeln!(f, "rows: {} (skipped {})", self.rows.len(), self.skipped.len())?;
        for note in &self.skipped {
            writeln!(f, "  skipped {note}")?;
        }
        writeln!(f, "max ratio: {:.6e}", s.max_ratio)?;
        writeln!(f, "variation: {:.4}", s.variation)?;
        writeln!(f, "growth: {:.2}%", 100.0 * s.growth)?;
        writeln!(f, "trend slope: {:.4}", s.trend_slope)?;
        writeln!(f, "thresholds are calibrations, not sharp constants")?;
        write!(f, "{}", s.verdict)
    }
}
