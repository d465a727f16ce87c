//! Point sets and quadrature on the unit sphere `S^{n-1}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Default seed for sampled verdicts.
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

/// `|S^{n-1}| = 2 π^{n/2} / Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    // Γ(n/2) by the half-integer recursion
    let gamma_half = |m: usize| -> f64 {
        let (mut g, mut x) = if m.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
        while x + 1e-9 < m as f64 / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    };
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Seeded Gaussian directions, normalized.
pub fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            if v.iter().map(|x| x * x).sum::<f64>() > 1e-12 {
                break normalize(v);
            }
        })
        .collect()
}

/// `count` angles equispaced on `[0, π)`; the half circle suffices for
/// sign-invariant quantities such as rank.
pub fn half_circle_points(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / count as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// `count` angles equispaced on the full circle.
pub fn circle_points(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / count as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Fibonacci lattice on `S^2` (equal-area spiral).
pub fn fibonacci_sphere(count: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Deterministic directions: 2 points for `n = 1`, equispaced angles for
/// `n = 2`, a Fibonacci lattice for `n = 3`, seeded Gaussians beyond.
pub fn deterministic_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => half_circle_points(count),
        3 => fibonacci_sphere(count),
        _ => random_points(n, count, DEFAULT_SEED ^ 0xd1ce),
    }
}

/// Sample set used by sampled verdicts: coordinate axes, `count`
/// deterministic points, then `count` seeded random points.
pub fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    pts.extend(deterministic_points(n, count));
    if n > 1 {
        pts.extend(random_points(n, count, seed));
    }
    pts
}

/// Result of a vector-valued sphere integral.
#[derive(Clone, Debug)]
pub struct SphereIntegral {
    pub value: Vec<f64>,
    /// Estimated absolute quadrature error per component.
    pub error: Vec<f64>,
}

/// Integrates `f` over `S^{n-1}` with respect to surface measure.
///
/// `n = 1`: the two-point sum; `n = 2`: trapezoid rule on `size` angles;
/// `n = 3`: Fibonacci-lattice mean times `4π`; `n ≥ 4`: Monte Carlo with
/// antithetic pairs (`size` samples) and a 3σ error bar.
pub fn integrate(n: usize, size: usize, seed: u64, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> SphereIntegral {
    let mean_of = |pts: &[Vec<f64>], f: &mut dyn FnMut(&[f64]) -> Vec<f64>| -> Vec<f64> {
        let mut acc: Vec<f64> = Vec::new();
        for p in pts {
            let v = f(p);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            acc.iter_mut().zip(&v).for_each(|(a, b)| *a += b);
        }
        acc.iter_mut().for_each(|a| *a /= pts.len() as f64);
        acc
    };
    match n {
        1 => {
            let a = f(&[1.0]);
            let b = f(&[-1.0]);
            SphereIntegral {
                error: vec![0.0; a.len()],
                value: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
            }
        }
        2 | 3 => {
            let area = sphere_area(n);
            let points = |m: usize| if n == 2 { circle_points(m) } else { fibonacci_sphere(m) };
            let full = mean_of(&points(size), &mut f);
            let half = mean_of(&points(size / 2), &mut f);
            SphereIntegral {
                error: full.iter().zip(&half).map(|(a, b)| area * (a - b).abs()).collect(),
                value: full.iter().map(|v| v * area).collect(),
            }
        }
        _ => {
            let area = sphere_area(n);
            let pairs = (size / 2).max(1);
            let mut sum: Vec<f64> = Vec::new();
            let mut sum_sq: Vec<f64> = Vec::new();
            for p in random_points(n, pairs, seed) {
                let neg: Vec<f64> = p.iter().map(|x| -x).collect();
                let a = f(&p);
                let b = f(&neg);
                if sum.is_empty() {
                    sum = vec![0.0; a.len()];
                    sum_sq = vec![0.0; a.len()];
                }
                for i in 0..a.len() {
                    let pair_mean = 0.5 * (a[i] + b[i]);
                    sum[i] += pair_mean;
                    sum_sq[i] += pair_mean * pair_mean;
                }
            }
            let m = pairs as f64;
            let value: Vec<f64> = sum.iter().map(|s| area * s / m).collect();
            let error = sum
                .iter()
                .zip(&sum_sq)
                .map(|(s, s2)| {
                    let mean = s / m;
                    let var = (s2 / m - mean * mean).max(0.0);
                    3.0 * area * (var / m).sqrt()
                })
                .collect();
            SphereIntegral { value, error }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sample_sets_are_unit_and_deterministic() {
        for n in 1..=5 {
            let a = sample_directions(n, 60, 7);
            assert_eq!(a, sample_directions(n, 60, 7));
            for p in &a {
                let norm: f64 = p.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(sample_directions(3, 500, 1).len(), 3 + 1000);
    }

    #[test]
    fn quadrature_of_polynomials() {
        // ∫_{S^1} cos² = π, ∫_{S^2} z² = 4π/3, ∫_{S^3} x1² = π²/2
        let c = integrate(2, 2048, 0, |p| vec![p[0] * p[0], 1.0]);
        assert!((c.value[0] - PI).abs() < 1e-12);
        assert!((c.value[1] - 2.0 * PI).abs() < 1e-12);
        let s = integrate(3, 20000, 0, |p| vec![p[2] * p[2]]);
        assert!((s.value[0] - 4.0 * PI / 3.0).abs() < 1e-3);
        let h = integrate(4, 200_000, 3, |p| vec![p[0] * p[0], p[1]]);
        assert!((h.value[0] - PI * PI / 2.0).abs() < h.error[0].max(1e-12));
        assert!(h.value[1].abs() < 1e-12, "antithetic pairs cancel odd integrands");
        let one = integrate(1, 0, 0, |p| vec![p[0]]);
        assert_eq!(one.value, vec![0.0]);
    }
}
