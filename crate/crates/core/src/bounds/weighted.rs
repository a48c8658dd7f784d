//! Bounds on `w_p(T_1, …, T_n)` through the mixed Schwarz inequality.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::engine::{run, Assembly, Problem, Sample};
use super::sandwich::half_gap;
use super::young::first_level_form;
use super::{BoundConfig, BoundParams, BoundReport, TheoremId};
use crate::error::{RadError, Result};
use crate::linalg::{abs_pair, op_norm, psd_power, quad, quad_re, ComplexMatrix, PsdMatrix, UnitVector};
use crate::radius::{numerical_radius, we_radius, wp_radius, OperatorTuple, SphereOptConfig, DEFAULT_RESOLUTION};
use crate::scalar::{refinement_sum, uniform_half_sum};

fn check_vector(dim: usize, x: &UnitVector) -> Result<()> {
    if x.dim() != dim {
        return Err(RadError::DimensionMismatch {
            expected: dim,
            found: x.dim(),
        });
    }
    Ok(())
}

/// `η_i(x)`: weight one half on every level, brackets at `ν = ½`, on
/// `⟨|T|^{2α} x, x⟩` and `⟨|T*|^{2(1−α)} x, x⟩`.
pub fn eta_thm211(t: &ComplexMatrix, params: &BoundParams, x: &UnitVector) -> Result<f64> {
    params.check_common()?;
    check_vector(t.dim(), x)?;
    let (abs_t, abs_adj) = abs_pair(t)?;
    let f = psd_power(&abs_t, 2.0 * params.nu)?;
    let g = psd_power(&abs_adj, 2.0 * (1.0 - params.nu))?;
    Ok(uniform_half_sum(
        params.levels,
        quad_re(f.as_dmatrix(), x.as_slice()),
        quad_re(g.as_dmatrix(), x.as_slice()),
    ))
}

/// `η(x) = Σ_i S_N(α)` on `⟨|T_i|^p x, x⟩` and `⟨|T_i*|^p x, x⟩`.
pub fn eta_thm213(tuple: &OperatorTuple, params: &BoundParams, x: &UnitVector) -> Result<f64> {
    params.check_common()?;
    params.require_p_at_least(2.0)?;
    check_vector(tuple.dim(), x)?;
    let mut total = 0.0;
    for t in tuple.ops() {
        let (abs_t, abs_adj) = abs_pair(t)?;
        let a = quad_re(psd_power(&abs_t, params.p)?.as_dmatrix(), x.as_slice());
        let b = quad_re(psd_power(&abs_adj, params.p)?.as_dmatrix(), x.as_slice());
        total += refinement_sum(params.nu, params.levels, a, b);
    }
    Ok(total)
}

/// `½ [Σ max(0, n_i − 2 m_i)^p]^{1/p}`.
fn per_operator_rhs(norms: &[f64], subtracted: &[f64], p: f64) -> f64 {
    let s: f64 = norms
        .iter()
        .zip(subtracted)
        .map(|(&n, &m)| (n - 2.0 * m).max(0.0).powf(p))
        .sum();
    0.5 * s.powf(1.0 / p)
}

/// `w_p(T_1, …, T_n) ≤ ½ [Σ (‖|T_i|^{2α} + |T_i*|^{2(1−α)}‖ − 2 inf η_i)^p]^{1/p}`.
///
/// Each `η_i` is minimized on its own. Per vector the chain is
/// `(Σ|⟨T_i x,x⟩|^p)^{1/p} ≤ ½[Σ (c_i + d_i − 2 S_N(½; c_i, d_i))^p]^{1/p}`
/// with `c_i = ⟨|T_i|^{2α}x,x⟩`, `d_i = ⟨|T_i*|^{2(1−α)}x,x⟩`. The reading
/// with `p` inside the quadratic forms of `η_i` is reported under
/// `powered_forms_*`.
pub fn bound_thm211(tuple: &OperatorTuple, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    params.check_common()?;
    params.require_p_at_least(1.0)?;
    let (alpha, p, levels) = (params.nu, params.p, params.levels);
    let n = tuple.len();
    let mut fs = Vec::with_capacity(n);
    let mut gs = Vec::with_capacity(n);
    let mut fps = Vec::with_capacity(n);
    let mut gps = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for t in tuple.ops() {
        let (abs_t, abs_adj) = abs_pair(t)?;
        let f = psd_power(&abs_t, 2.0 * alpha)?;
        let g = psd_power(&abs_adj, 2.0 * (1.0 - alpha))?;
        norms.push(op_norm(&f.as_complex().add(&g.as_complex()))?);
        fps.push(psd_power(&abs_t, 2.0 * alpha * p)?);
        gps.push(psd_power(&abs_adj, 2.0 * (1.0 - alpha) * p)?);
        fs.push(f);
        gs.push(g);
    }
    let norm_term = per_operator_rhs(&norms, &vec![0.0; n], p);
    let w = wp_radius(tuple, p, &cfg.opt)?;

    let mats: Vec<_> = tuple.ops().iter().map(|m| m.as_dmatrix()).collect();
    let cd = |i: usize, v: &[Complex64]| (quad_re(fs[i].as_dmatrix(), v), quad_re(gs[i].as_dmatrix(), v));
    let eta = |v: &[Complex64], _: &[Complex64], i: usize| {
        let (c, d) = cd(i, v);
        uniform_half_sum(levels, c, d)
    };
    let zeta = |v: &[Complex64], _: &[Complex64], i: usize| {
        let (c, d) = cd(i, v);
        half_gap(c, d)
    };
    let point = |v: &[Complex64], _: &[Complex64]| {
        let lhs = mats.iter().map(|m| quad(m, v).norm().powf(p)).sum::<f64>().powf(1.0 / p);
        let mut sums = Vec::with_capacity(n);
        let mut derived = Vec::with_capacity(n);
        let mut refined = Vec::with_capacity(n);
        let mut baseline = Vec::with_capacity(n);
        let mut powered = Vec::with_capacity(n);
        let mut first: f64 = 0.0;
        for i in 0..n {
            let (c, d) = cd(i, v);
            sums.push(c + d);
            derived.push(refinement_sum(0.5, levels, c, d));
            let e = uniform_half_sum(levels, c, d);
            let z = half_gap(c, d);
            first = first.max((uniform_half_sum(1, c, d) - z).abs());
            refined.push(e);
            baseline.push(z);
            powered.push(uniform_half_sum(
                levels,
                quad_re(fps[i].as_dmatrix(), v),
                quad_re(gps[i].as_dmatrix(), v),
            ));
        }
        let chain = per_operator_rhs(&sums, &derived, p);
        let half_weight = per_operator_rhs(&sums, &refined, p);
        let powered_chain = per_operator_rhs(&sums, &powered, p);
        Sample {
            chains: vec![(lhs, chain)],
            lhs_candidate: Some(lhs),
            refined,
            baseline,
            first_level: first,
            evidence: powered,
            evidence_chains: vec![(lhs, half_weight), (lhs, powered_chain)],
        }
    };
    let mut spectra: Vec<&PsdMatrix> = fs.iter().chain(&gs).collect();
    spectra.extend(fps.iter().chain(&gps));
    let problem = Problem {
        dim: tuple.dim(),
        components: n,
        pairwise: false,
        point: &point,
        refined: &eta,
        baseline: Some(&zeta),
        spectra,
        witnesses: vec![(w.witness.clone(), None)],
    };
    let scan = run(&problem, cfg)?;
    let clamp = |v: &[f64]| v.iter().map(|x| x.max(0.0)).collect::<Vec<_>>();
    let refined_rhs = per_operator_rhs(&norms, &clamp(&scan.refined_min), p);
    let baseline_rhs = per_operator_rhs(&norms, &clamp(&scan.baseline_min), p);
    let mut variants = BTreeMap::new();
    variants.insert(
        "powered_forms_rhs".to_string(),
        per_operator_rhs(&norms, &clamp(&scan.evidence_min), p),
    );
    variants.insert("half_weight_chain_failures".to_string(), scan.evidence_failures[0] as f64);
    variants.insert("powered_forms_chain_failures".to_string(), scan.evidence_failures[1] as f64);
    Ok(Assembly {
        theorem: TheoremId::Thm211,
        dim: tuple.dim(),
        n_ops: n,
        params: *params,
        lhs_lower: w.value,
        norm_term,
        refinement_upper: norm_term - refined_rhs,
        baseline_subtracted: norm_term - baseline_rhs,
        lhs_witness: Some(w.witness),
        lhs_second_witness: None,
        variants,
    }
    .finish(&scan, &cfg.tol))
}

/// `w_p^p(T_1, …, T_n) ≤ ‖Σ α|T_i|^p + (1−α)|T_i*|^p‖ − inf η` for `p ≥ 2`.
///
/// Per vector: `Σ|⟨T_i x,x⟩|^p ≤ ⟨Σ(α|T_i|^p + (1−α)|T_i*|^p) x,x⟩ − η(x)`.
/// The baseline subtracts `min{α,1−α} Σ(√a_i − √b_i)²`.
pub fn bound_thm213(tuple: &OperatorTuple, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    weighted_report(TheoremId::Thm213, tuple, params, cfg)
}

/// `w_p^p(B, C) ≤ ½‖|B|^p + |B*|^p + |C|^p + |C*|^p‖ − inf η` for `p ≥ 2`,
/// with `η = ½[(√⟨|B|^p x,x⟩ − √⟨|B*|^p x,x⟩)² + (√⟨|C|^p x,x⟩ − √⟨|C*|^p x,x⟩)²]`.
///
/// The baseline is the same bound without the subtracted term. The reading
/// with a minus between the two squares is reported under `minus_sign_*`.
pub fn bound_cor215(b: &ComplexMatrix, c: &ComplexMatrix, p: f64, cfg: &BoundConfig) -> Result<BoundReport> {
    let tuple = OperatorTuple::new(vec![b.clone(), c.clone()])?;
    let params = BoundParams::default().with_nu(0.5).with_p(p).with_levels(1).with_r(1.0);
    weighted_report(TheoremId::Cor215, &tuple, &params, cfg)
}

fn weighted_report(theorem: TheoremId, tuple: &OperatorTuple, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    params.check_common()?;
    params.require_p_at_least(2.0)?;
    let (alpha, p, levels) = (params.nu, params.p, params.levels);
    let n = tuple.len();
    let mut aps = Vec::with_capacity(n);
    let mut bps = Vec::with_capacity(n);
    let mut k = ComplexMatrix::zeros(tuple.dim());
    for t in tuple.ops() {
        let (abs_t, abs_adj) = abs_pair(t)?;
        let ap = psd_power(&abs_t, p)?;
        let bp = psd_power(&abs_adj, p)?;
        k = k
            .add(&ap.as_complex().scale_real(alpha))
            .add(&bp.as_complex().scale_real(1.0 - alpha));
        aps.push(ap);
        bps.push(bp);
    }
    let norm_term = op_norm(&k)?;
    let k = PsdMatrix::from_complex(k, &cfg.tol)?;
    let w = wp_radius(tuple, p, &cfg.opt)?;
    let with_baseline = theorem != TheoremId::Cor215;

    let mats: Vec<_> = tuple.ops().iter().map(|m| m.as_dmatrix()).collect();
    let forms = |v: &[Complex64]| -> Vec<(f64, f64)> {
        aps.iter()
            .zip(&bps)
            .map(|(a, b)| (quad_re(a.as_dmatrix(), v), quad_re(b.as_dmatrix(), v)))
            .collect()
    };
    let eta = |v: &[Complex64], _: &[Complex64], _: usize| {
        forms(v)
            .into_iter()
            .map(|(a, b)| refinement_sum(alpha, levels, a, b))
            .sum::<f64>()
    };
    let zeta = |v: &[Complex64], _: &[Complex64], _: usize| {
        forms(v)
            .into_iter()
            .map(|(a, b)| first_level_form(alpha, a, b))
            .sum::<f64>()
    };
    let point = |v: &[Complex64], _: &[Complex64]| {
        let lhs: f64 = mats.iter().map(|m| quad(m, v).norm().powf(p)).sum();
        let ab = forms(v);
        let e: f64 = ab.iter().map(|&(a, b)| refinement_sum(alpha, levels, a, b)).sum();
        let z: f64 = ab.iter().map(|&(a, b)| first_level_form(alpha, a, b)).sum();
        let s1: f64 = ab.iter().map(|&(a, b)| refinement_sum(alpha, 1, a, b)).sum();
        let k_form = quad_re(k.as_dmatrix(), v);
        let mut sample = Sample {
            chains: vec![(lhs, k_form - e)],
            lhs_candidate: Some(lhs),
            refined: vec![e],
            first_level: (s1 - z).abs(),
            ..Sample::default()
        };
        if with_baseline {
            sample.baseline = vec![z];
        } else {
            let minus = half_gap(ab[0].0, ab[0].1) - half_gap(ab[1].0, ab[1].1);
            sample.evidence = vec![minus];
            sample.evidence_chains = vec![(lhs, k_form - minus)];
        }
        sample
    };
    let mut spectra: Vec<&PsdMatrix> = vec![&k];
    spectra.extend(aps.iter().chain(&bps));
    let problem = Problem {
        dim: tuple.dim(),
        components: 1,
        pairwise: false,
        point: &point,
        refined: &eta,
        baseline: if with_baseline { Some(&zeta) } else { None },
        spectra,
        witnesses: vec![(w.witness.clone(), None)],
    };
    let scan = run(&problem, cfg)?;
    let mut variants = BTreeMap::new();
    let baseline_subtracted = if with_baseline {
        scan.baseline_min[0].max(0.0)
    } else {
        variants.insert("minus_sign_refinement".to_string(), scan.evidence_min[0]);
        variants.insert("minus_sign_chain_failures".to_string(), scan.evidence_failures[0] as f64);
        0.0
    };
    Ok(Assembly {
        theorem,
        dim: tuple.dim(),
        n_ops: n,
        params: *params,
        lhs_lower: w.value.powf(p),
        norm_term,
        refinement_upper: scan.refined_min[0].max(0.0),
        baseline_subtracted,
        lhs_witness: Some(w.witness),
        lhs_second_witness: None,
        variants,
    }
    .finish(&scan, &cfg.tol))
}

/// Outcome of the Cartesian-decomposition check `A = B + iC`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianCheck {
    /// `w(A)²` from the phase-grid radius.
    pub w_squared: f64,
    /// `½‖A*A + AA*‖`.
    pub half_norm: f64,
    /// Largest entry of `A*A + AA* − 2(B² + C²)`.
    pub identity_deviation: f64,
    /// `w_2(B, C)²` from the sphere optimizer; equals `w(A)²`.
    pub we_squared: f64,
}

/// Splits `A = B + iC` into Hermitian parts, checks
/// `A*A + AA* = 2(B² + C²)`, and returns `w(A)²` with `½‖A*A + AA*‖`.
pub fn cartesian_check(a: &ComplexMatrix) -> Result<CartesianCheck> {
    let b = a.hermitian_part().as_complex();
    let c = a.skew_part().as_complex();
    let lhs = a.adjoint().mul(a).add(&a.mul(&a.adjoint()));
    let rhs = b.mul(&b).add(&c.mul(&c)).scale_real(2.0);
    let identity_deviation = lhs.sub(&rhs).max_abs();
    if identity_deviation > 1e-10 * lhs.max_abs().max(1.0) {
        return Err(RadError::domain(format!(
            "Cartesian identity fails: deviation {identity_deviation:e}"
        )));
    }
    let w = numerical_radius(a, DEFAULT_RESOLUTION)?.value;
    let we = we_radius(&OperatorTuple::new(vec![b, c])?, &SphereOptConfig::default())?.value;
    Ok(CartesianCheck {
        w_squared: w * w,
        half_norm: 0.5 * op_norm(&lhs)?,
        identity_deviation,
        we_squared: we * we,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Status;
    use approx::assert_abs_diff_eq;

    fn cfg() -> BoundConfig {
        let mut c = BoundConfig::default();
        c.opt.restarts = 6;
        c
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nil(s: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, s], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn single_hermitian_operator() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -3.0]]).unwrap();
        let norm = op_norm(&h).unwrap();
        let p = BoundParams::default().with_nu(0.5).with_p(1.0).with_levels(2);
        let rep = bound_thm211(&OperatorTuple::new(vec![h]).unwrap(), &p, &cfg()).unwrap();
        assert_abs_diff_eq!(rep.norm_term, norm, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.lhs_lower, norm, epsilon = 1e-8);
        assert!(rep.refinement_upper < 1e-10);
        assert_eq!(rep.pointwise_violations, 0);
    }

    #[test]
    fn one_level_per_operator_matches_baseline() {
        let p = BoundParams::default().with_nu(0.5).with_p(2.0).with_levels(1);
        let tuple = OperatorTuple::new(vec![nil(2.0), ComplexMatrix::real_diag(&[1.0, 0.5])]).unwrap();
        let rep = bound_thm211(&tuple, &p, &cfg()).unwrap();
        assert_abs_diff_eq!(rep.rhs_refined_est, rep.rhs_baseline, epsilon = 1e-10);
        assert!(rep.first_level_deviation < 1e-12);
        assert_eq!(rep.pointwise_violations, 0);
        assert_eq!(rep.dominance_violations, 0);
    }

    #[test]
    fn scaled_nilpotent_per_operator() {
        // |T| = diag(0, 2), |T*| = diag(2, 0); at α = ½ the norm term is ½‖diag(2, 2)‖ = 1
        let p = BoundParams::default().with_nu(0.5).with_p(2.0).with_levels(1);
        let rep = bound_thm211(&OperatorTuple::new(vec![nil(2.0)]).unwrap(), &p, &cfg()).unwrap();
        assert_abs_diff_eq!(rep.norm_term, 2.0 * 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.lhs_lower, 1.0, epsilon = 1e-8);
        assert!(rep.refinement_upper < 1e-6);
    }

    #[test]
    fn eta_per_operator_example() {
        let p = BoundParams::default().with_nu(0.5).with_levels(1);
        let x = UnitVector::basis(2, 1);
        // c = ⟨|T| e2, e2⟩ = 2, d = ⟨|T*| e2, e2⟩ = 0
        assert_abs_diff_eq!(eta_thm211(&nil(2.0), &p, &x).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weighted_requires_p_at_least_two() {
        let p = BoundParams::default().with_p(1.0);
        let err = bound_thm213(&OperatorTuple::new(vec![nil(1.0)]).unwrap(), &p, &cfg()).unwrap_err();
        assert!(err.to_string().contains("p ≥ 2"));
        assert!(bound_cor215(&nil(1.0), &nil(1.0), 1.5, &cfg()).is_err());
    }

    #[test]
    fn endpoint_weights_vanish() {
        let tuple = OperatorTuple::new(vec![nil(1.0), ComplexMatrix::real_diag(&[2.0, -1.0])]).unwrap();
        for alpha in [0.0, 1.0] {
            let p = BoundParams::default().with_nu(alpha).with_p(2.0).with_levels(3);
            let rep = bound_thm213(&tuple, &p, &cfg()).unwrap();
            assert_eq!(rep.refinement_upper, 0.0);
            assert_eq!(rep.pointwise_violations, 0);
        }
        let x = UnitVector::basis(2, 0);
        let p = BoundParams::default().with_nu(1.0).with_p(3.0).with_levels(2);
        assert_eq!(eta_thm213(&tuple, &p, &x).unwrap(), 0.0);
    }

    #[test]
    fn cor215_matches_weighted_specialization() {
        let b = nil(1.0);
        let cm = ComplexMatrix::from_row_major(2, &[c(0.5, 0.0), c(0.0, 1.0), c(0.3, 0.0), c(-1.0, 0.2)]).unwrap();
        let rep = bound_cor215(&b, &cm, 2.0, &cfg()).unwrap();
        let p = BoundParams::default().with_nu(0.5).with_p(2.0).with_levels(1);
        let gen = bound_thm213(&OperatorTuple::new(vec![b, cm]).unwrap(), &p, &cfg()).unwrap();
        assert_abs_diff_eq!(rep.norm_term, gen.norm_term, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.refinement_upper, gen.refinement_upper, epsilon = 1e-9);
        assert_eq!(rep.rhs_baseline, rep.norm_term);
        assert!(rep.variants.contains_key("minus_sign_refinement"));
        assert_eq!(rep.pointwise_violations, 0);
    }

    #[test]
    fn cartesian_nilpotent() {
        let chk = cartesian_check(&nil(1.0)).unwrap();
        assert_abs_diff_eq!(chk.w_squared, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(chk.half_norm, 0.5, epsilon = 1e-12);
        assert!(chk.identity_deviation < 1e-12);
        assert_abs_diff_eq!(chk.we_squared, 0.25, epsilon = 1e-8);
    }

    #[test]
    fn cartesian_normal_and_hermitian() {
        let d = ComplexMatrix::diag(&[c(1.0, 1.0), c(-0.5, 0.0)]);
        let chk = cartesian_check(&d).unwrap();
        assert_abs_diff_eq!(chk.w_squared, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(chk.half_norm, 2.0, epsilon = 1e-10);

        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 0.0]]).unwrap();
        let chk = cartesian_check(&h).unwrap();
        let n = op_norm(&h).unwrap();
        assert_abs_diff_eq!(chk.w_squared, n * n, epsilon = 1e-9);
        assert_abs_diff_eq!(chk.half_norm, n * n, epsilon = 1e-9);
    }

    #[test]
    fn weighted_status_is_consistent_on_nilpotent() {
        let p = BoundParams::default().with_nu(0.5).with_p(2.0).with_levels(2);
        let rep = bound_thm213(&OperatorTuple::new(vec![nil(1.0)]).unwrap(), &p, &cfg()).unwrap();
        assert_ne!(rep.status, Status::CertifiedViolation);
        assert_eq!(rep.pointwise_violations, 0);
        assert_eq!(rep.dominance_violations, 0);
    }
}
