use constrank::harness::bump_family;
use constrank::operator::builtin;
use constrank::spectral::{apply_pi, Field, SpectralOperator};
use constrank::{Field64, Grid64, Operator};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONSTANT_RANK: [(&str, usize); 9] = [
    ("gradient", 2),
    ("gradient", 3),
    ("divergence", 2),
    ("divergence", 3),
    ("curl3", 3),
    ("laplacian", 2),
    ("laplacian", 3),
    ("symmetric_gradient", 2),
    ("symmetric_gradient", 3),
];

fn random_field(grid: &Grid64, channels: usize, seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..channels * grid.num_points()).map(|_| rng.random_range(-1.0..1.0)).collect();
    Field::new(grid.clone(), channels, values).unwrap()
}

fn prepared(name: &str, n: usize) -> (Operator, SpectralOperator<f64>) {
    let op = builtin(name, n).unwrap();
    let sop = SpectralOperator::new(&op).unwrap();
    (op, sop)
}

#[test]
fn reconstruction_identity_all_builtins() {
    for (name, n) in CONSTANT_RANK {
        let (op, sop) = prepared(name, n);
        for size in [16, 32] {
            let grid = Grid64::new(n, size).unwrap();
            for tf in bump_family(&grid, op.dim_v(), 8, 5).unwrap() {
                let u = tf.field;
                let lhs = u.sub(&sop.apply_pi(&u).unwrap()).unwrap();
                let rhs = sop.apply_k(&sop.apply(&u).unwrap()).unwrap();
                let err = lhs.sub(&rhs).unwrap().l2_norm();
                assert!(err <= 1e-9 * u.l2_norm(), "{name} n={n} N={size} {}: {err:e}", tf.id);
            }
        }
    }
}

#[test]
fn projection_is_orthogonal_and_annihilated() {
    for (name, n) in CONSTANT_RANK {
        let (op, sop) = prepared(name, n);
        let grid = Grid64::new(n, 16).unwrap();
        let scale = sop.symbol_scale(&grid);
        for seed in 0..3 {
            let u = random_field(&grid, op.dim_v(), seed);
            let v = random_field(&grid, op.dim_v(), seed + 100);
            let pu = sop.apply_pi(&u).unwrap();
            let ppu = sop.apply_pi(&pu).unwrap();
            assert!(ppu.sub(&pu).unwrap().l2_norm() <= 1e-10 * u.l2_norm(), "{name} idempotence");
            let pv = sop.apply_pi(&v).unwrap();
            let asym = (pu.inner(&v).unwrap() - u.inner(&pv).unwrap()).abs();
            assert!(asym <= 1e-10 * u.l2_norm() * v.l2_norm(), "{name} self-adjointness");
            let bpu = sop.apply(&pu).unwrap();
            assert!(bpu.l2_norm() <= 1e-9 * u.l2_norm() * scale, "{name} B∘π");
        }
    }
}

#[test]
fn curl_k_identity() {
    let (op, sop) = prepared("curl3", 3);
    let grid = Grid64::new(3, 32).unwrap();
    for tf in bump_family(&grid, 3, 4, 9).unwrap() {
        let u = tf.field;
        let mean = u.mean();
        let u0 = Field::from_fn(&grid, 3, |_| mean.iter().map(|m| -m).collect()).unwrap().add(&u).unwrap();
        let back = sop.apply_k(&sop.apply(&u0).unwrap()).unwrap();
        let expected = u0.sub(&apply_pi(&op, &u0).unwrap()).unwrap();
        assert!(back.sub(&expected).unwrap().max_abs() <= 1e-9);
    }
}

#[test]
fn helmholtz_for_curl() {
    let (_, sop) = prepared("curl3", 3);
    let div = SpectralOperator::<f64>::symbol_only(&builtin("divergence", 3).unwrap());
    let grid = Grid64::new(3, 32).unwrap();
    for tf in bump_family(&grid, 3, 8, 21).unwrap() {
        let u = tf.field;
        let pu = sop.apply_pi(&u).unwrap();
        let rest = u.sub(&pu).unwrap();
        let d = div.apply(&rest).unwrap().l2_norm();
        let c = sop.apply(&pu).unwrap().l2_norm();
        let du = div.apply(&u).unwrap().l2_norm().max(sop.apply(&u).unwrap().l2_norm());
        assert!(d <= 1e-9 * du && c <= 1e-9 * du, "{}: {d:e} {c:e}", tf.id);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval(seed in any::<u64>(), n in 1usize..=3, channels in 1usize..=3) {
        let grid = Grid64::new(n, 8).unwrap();
        let u = random_field(&grid, channels, seed);
        let a = u.l2_norm();
        prop_assert!((a - u.spectral_l2_norm()).abs() <= 1e-12 * a);
    }

    #[test]
    fn projection_properties_random(seed in any::<u64>(), which in 0usize..CONSTANT_RANK.len()) {
        let (name, n) = CONSTANT_RANK[which];
        let (op, sop) = prepared(name, n);
        let grid = Grid64::new(n, 8).unwrap();
        let u = random_field(&grid, op.dim_v(), seed);
        let pu = sop.apply_pi(&u).unwrap();
        prop_assert!(sop.apply_pi(&pu).unwrap().sub(&pu).unwrap().l2_norm() <= 1e-10 * u.l2_norm());
        let lhs = u.sub(&pu).unwrap();
        let rhs = sop.apply_k(&sop.apply(&u).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2_norm() <= 1e-9 * u.l2_norm());
        // π never increases the L² norm
        prop_assert!(pu.l2_norm() <= u.l2_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn single_precision_pipeline() {
    let op = builtin("curl3", 3).unwrap();
    let sop = SpectralOperator::<f32>::new(&op).unwrap();
    let grid = constrank::Grid32::new(3, 16).unwrap();
    let u = Field::from_fn(&grid, 3, |x| vec![x[1].sin(), (x[0] + x[2]).cos(), x[0].sin() * x[1].cos()]).unwrap();
    let lhs = u.sub(&sop.apply_pi(&u).unwrap()).unwrap();
    let rhs = sop.apply_k(&sop.apply(&u).unwrap()).unwrap();
    assert!(lhs.sub(&rhs).unwrap().l2_norm() <= 1e-5 * u.l2_norm());
}
