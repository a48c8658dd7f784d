use num_complex::Complex64;

use radineq::bounds::{bound_cor28, bound_thm23, BoundConfig, BoundParams, Status};
use radineq::harness::{compare_refinements, gen_matrix, EnsembleKind, EnsembleSpec, SuiteConfig};
use radineq::linalg::{ComplexMatrix, HermitianMatrix, PsdMatrix};
use radineq::radius::{numerical_radius, wp_radius, OperatorTuple, SphereOptConfig, DEFAULT_RESOLUTION};
use radineq::tolerance::ToleranceConfig;

fn fast_cfg(seed: u64) -> BoundConfig {
    BoundConfig {
        opt: SphereOptConfig {
            restarts: 8,
            max_iters: 200,
            step_tol: 1e-10,
            seed,
        },
        ..BoundConfig::default()
    }
}

/// `[[λ, c], [0, −λ]]` has an elliptical numerical range with foci `±λ` and
/// minor semi-axis `|c|/2`, so `w = √(λ² + |c|²/4)`.
#[test]
fn two_by_two_ellipse_radius() {
    for (lam, c) in [(0.0, Complex64::new(1.0, 0.0)), (1.0, Complex64::new(0.5, -2.0)), (3.0, Complex64::new(0.0, 0.1)), (0.2, Complex64::new(-4.0, 1.0))] {
        let t = ComplexMatrix::from_row_major(2, &[Complex64::new(lam, 0.0), c, Complex64::new(0.0, 0.0), Complex64::new(-lam, 0.0)]).unwrap();
        let w = numerical_radius(&t, DEFAULT_RESOLUTION).unwrap().value;
        let expected = (lam * lam + c.norm_sqr() / 4.0).sqrt();
        assert!((w - expected).abs() <= 1e-10 * expected.max(1.0), "{lam} {c}: {w} vs {expected}");
    }
}

/// A single Hermitian operator has `w_p = w = spectral radius` for every `p`.
#[test]
fn hermitian_wp_is_spectral_radius() {
    let tol = ToleranceConfig::default();
    for seed in 0..6 {
        let t = gen_matrix(&EnsembleSpec::new(EnsembleKind::Hermitian, 3 + seed as usize % 3, seed)).unwrap();
        let rho = HermitianMatrix::new(t.clone(), &tol)
            .unwrap()
            .eigenvalues()
            .unwrap()
            .into_iter()
            .fold(0.0, |m: f64, v| m.max(v.abs()));
        let tuple = OperatorTuple::new(vec![t]).unwrap();
        for p in [1.0, 4.0] {
            let wp = wp_radius(&tuple, p, &SphereOptConfig::default().with_seed(seed)).unwrap().value;
            assert!((wp - rho).abs() <= 1e-7 * rho.max(1.0), "{wp} vs {rho}");
        }
    }
}

/// Equal weights: the refinement vanishes and the verdict is clean.
#[test]
fn equal_weights_give_no_refinement() {
    let tol = ToleranceConfig::default();
    let a = PsdMatrix::from_complex(gen_matrix(&EnsembleSpec::new(EnsembleKind::PositiveDefinite, 3, 5)).unwrap(), &tol).unwrap();
    let x = gen_matrix(&EnsembleSpec::new(EnsembleKind::Ginibre, 3, 6)).unwrap();
    let params = BoundParams::default().with_nu(0.25).with_levels(3);
    let rep = bound_thm23(&a, &a, &x, &params, &fast_cfg(1)).unwrap();
    assert!(rep.refinement_upper <= 1e-9 * rep.norm_term.max(1.0), "{rep:?}");
    assert_eq!(rep.pointwise_violations, 0);
    assert_eq!(rep.status, Status::VerifiedPointwise);
}

#[test]
fn random_tuples_respect_certified_bound() {
    for seed in 0..5 {
        let ops: Vec<ComplexMatrix> = (0..2)
            .map(|k| gen_matrix(&EnsembleSpec::new(EnsembleKind::Ginibre, 3, seed * 10 + k)).unwrap())
            .collect();
        let tuple = OperatorTuple::new(ops).unwrap();
        let params = BoundParams::default().with_nu(0.75).with_levels(2);
        let rep = bound_cor28(&tuple, &params, &fast_cfg(seed)).unwrap();
        assert!(rep.lhs_lower <= rep.norm_term * (1.0 + 1e-8), "{rep:?}");
        assert!(rep.rhs_refined_est <= rep.norm_term + 1e-12);
        assert_ne!(rep.status, Status::CertifiedViolation);
    }
}

#[test]
fn small_comparison_has_no_negative_gains() {
    let cfg = SuiteConfig {
        trials: 2,
        dims: (2, 3),
        samples: 64,
        seed: 11,
        ..SuiteConfig::default()
    };
    let rep = compare_refinements(&cfg).unwrap();
    assert_eq!(rep.errors(), 0);
    assert_eq!(rep.evidence["negative_gain_trials"], 0.0);
    assert_eq!(rep.dominance_violations(), 0);
}
