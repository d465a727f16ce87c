use constrank::annihilator::exact_annihilator;
use constrank::harness::*;
use constrank::operator::builtin;
use constrank::spectral::{Field, Grid, SpectralOperator};
use constrank::{Error, Grid64};

fn cfg(j: usize, target: TargetNorm, sizes: &[usize]) -> ExperimentConfig {
    ExperimentConfig {
        j,
        target,
        sizes: sizes.to_vec(),
        ..ExperimentConfig::default()
    }
}

#[test]
fn curl_sobolev_bounded() {
    let t = sobolev_ratio_experiment(&builtin("curl3", 3).unwrap(), &cfg(1, TargetNorm::Lp, &[16, 32])).unwrap();
    assert_eq!(t.rows.len(), 16);
    assert!(t.skipped.is_empty());
    assert!(t.summary.variation < 2.0);
    assert_eq!(t.verdict(), Verdict::Bounded);
    assert!(t.to_csv().starts_with(CSV_HEADER));
}

#[test]
fn gradient_sobolev_bounded() {
    let t = sobolev_ratio_experiment(&builtin("gradient", 2).unwrap(), &cfg(1, TargetNorm::Lp, &[16, 32, 64])).unwrap();
    assert_eq!(t.verdict(), Verdict::Bounded);
    let l = sobolev_ratio_experiment(&builtin("gradient", 2).unwrap(), &cfg(1, TargetNorm::Lorentz(1.5), &[16, 32])).unwrap();
    let w = sobolev_ratio_experiment(&builtin("gradient", 2).unwrap(), &cfg(1, TargetNorm::Weak, &[16, 32])).unwrap();
    // weak ≤ (q/p)^{1/q} L^{p,q}
    for (a, b) in w.rows.iter().zip(&l.rows) {
        assert!(a.numerator <= (1.5f64 / 2.0).powf(1.0 / 1.5) * b.numerator * (1.0 + 1e-12));
    }
}

#[test]
fn kernel_fields_are_degenerate() {
    let curl = builtin("curl3", 3).unwrap();
    let sop = SpectralOperator::new(&curl).unwrap();
    let grid = Grid64::new(3, 16).unwrap();
    let scalar = &bump_family(&grid, 1, 1, 4).unwrap()[0].field;
    let grad = SpectralOperator::<f64>::symbol_only(&builtin("gradient", 3).unwrap()).apply(scalar).unwrap();
    let err = field_ratio(&sop, &grad, 1, &constrank::spectral::NormSpec::Lp(1.5)).unwrap_err();
    assert!(matches!(err, Error::DegenerateField { .. }));
}

#[test]
fn config_validation() {
    let curl = builtin("curl3", 3).unwrap();
    assert!(matches!(
        sobolev_ratio_experiment(&curl, &cfg(2, TargetNorm::Lp, &[16])),
        Err(Error::InvalidConfig(_))
    ));
    assert!(sobolev_ratio_experiment(&curl, &cfg(1, TargetNorm::Lorentz(1.0), &[16])).is_err());
    assert!(sobolev_ratio_experiment(&curl, &cfg(1, TargetNorm::Lp, &[])).is_err());
    assert!(sobolev_ratio_experiment(&curl, &cfg(1, TargetNorm::Lp, &[12])).is_err());
    assert!(matches!(hardy_experiment(&curl, 1.6, &cfg(1, TargetNorm::Lp, &[16])), Err(Error::InvalidExponent(_))));
    assert!(matches!(
        sobolev_ratio_experiment(&builtin("partial1", 2).unwrap(), &cfg(1, TargetNorm::Lp, &[16])),
        Err(Error::NonConstantRank { .. })
    ));
}

#[test]
fn curl_hardy_bounded() {
    let t = hardy_experiment(&builtin("curl3", 3).unwrap(), 1.0, &cfg(1, TargetNorm::Lp, &[16, 32])).unwrap();
    assert_eq!(t.verdict(), Verdict::Bounded);
}

#[test]
fn rhokw_preconditions() {
    let div = builtin("divergence", 2).unwrap();
    let grid = Grid64::new(2, 64).unwrap();
    let plateau = grid.length() / 8.0;
    assert!(matches!(
        rhokw_family(&div, &[1.0], &[plateau * 1.01], &grid),
        Err(Error::MollifierTooWide { .. })
    ));
    let curl = builtin("curl3", 3).unwrap();
    let g3 = Grid64::new(3, 16).unwrap();
    assert!(matches!(
        rhokw_family(&curl, &[1.0, 0.0, 0.0], &[0.3], &g3),
        Err(Error::NotInIntersection { .. })
    ));
    assert!(matches!(
        blowup_experiment(&curl, 1, BlowupNorm::Lorentz(1.25), &DEFAULT_EPS, 16, Thresholds::default()),
        Err(Error::NotInIntersection { .. })
    ));
    assert!(rhokw_family(&div, &[0.0], &[0.3], &grid).is_err());
}

#[test]
fn rhokw_strict_convergence() {
    // ‖div u_ε‖₁ settles as ε shrinks
    let div = builtin("divergence", 2).unwrap();
    let grid = Grid::with_length(2, 128, BLOWUP_BOX_LENGTH).unwrap();
    let fields = rhokw_family(&div, &[1.0], &DEFAULT_EPS, &grid).unwrap();
    let sop = SpectralOperator::<f64>::symbol_only(&div);
    let l1: Vec<f64> = fields
        .iter()
        .map(|u| constrank::spectral::lp(&sop.apply(u).unwrap(), 1.0).unwrap())
        .collect();
    assert!(l1.iter().all(|&v| v > 1.0));
    assert!(l1[2] / l1[1] < 1.1 && l1[1] / l1[0] < 1.1, "{l1:?}");
}

#[test]
fn blowup_signatures() {
    let div = builtin("divergence", 2).unwrap();
    let q = default_lorentz_q(2, 1);
    let t = blowup_experiment(&div, 1, BlowupNorm::Lorentz(q), &DEFAULT_EPS, DEFAULT_BLOWUP_SIZE, Thresholds::default()).unwrap();
    assert_eq!(t.verdict(), Verdict::Divergent, "{t}");
    let num: Vec<f64> = t.rows.iter().map(|r| r.numerator).collect();
    assert!(num[2] - num[1] >= 0.5 * (num[1] - num[0]), "{num:?}");

    let lap = builtin("laplacian", 2).unwrap();
    let t = blowup_experiment(&lap, 1, BlowupNorm::Lorentz(q), &DEFAULT_EPS, DEFAULT_BLOWUP_SIZE, Thresholds::default()).unwrap();
    assert_eq!(t.verdict(), Verdict::Divergent, "{t}");

    let h = blowup_experiment(&div, 1, BlowupNorm::Hardy(1.0), &DEFAULT_EPS, DEFAULT_BLOWUP_SIZE, Thresholds::default()).unwrap();
    assert_eq!(h.verdict(), Verdict::Divergent, "{h}");
    assert!(h.rows.windows(2).all(|w| w[1].numerator > w[0].numerator));
}

#[test]
fn potential_demo() {
    for (name, n) in [("curl3", 3), ("divergence", 2)] {
        let op = builtin(name, n).unwrap();
        let grid = Grid64::new(n, 32).unwrap();
        let psi = &bump_family(&grid, op.dim_v(), 1, 17).unwrap()[0].field;
        let r = potential_failure_demo(&op, psi).unwrap();
        assert!(r.annihilated && r.lhs_positive && r.contradiction, "{name}: {r}");
    }
    let grid = Grid64::new(2, 16).unwrap();
    let psi = Field::zeros(&grid, 1);
    assert!(matches!(
        potential_failure_demo(&builtin("gradient", 2).unwrap(), &psi),
        Err(Error::EllipticOperator(_))
    ));
}

#[test]
fn linfty_reports() {
    let lap = linfty_condition(&builtin("laplacian", 2).unwrap(), None).unwrap();
    assert!(!lap.pass);
    let canc = linfty_condition(&exact_annihilator(&builtin("gradient", 2).unwrap()).unwrap().operator, None).unwrap();
    assert!(canc.pass && canc.basis.is_empty());
}

#[test]
fn deterministic_tables() {
    let op = builtin("divergence", 2).unwrap();
    let c = cfg(1, TargetNorm::Lorentz(1.5), &[16, 32]);
    let a = sobolev_ratio_experiment(&op, &c).unwrap().to_csv();
    let b = sobolev_ratio_experiment(&op, &c).unwrap().to_csv();
    assert_eq!(a, b);
    let other = sobolev_ratio_experiment(&op, &ExperimentConfig { seed: 1, ..c }).unwrap().to_csv();
    assert_ne!(a, other);
}
