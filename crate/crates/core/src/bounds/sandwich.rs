//! Power-mean bounds for `w_p^p(A_1* T_1 B_1, …, A_n* T_n B_n)` and their
//! specializations.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::engine::{run, Assembly, Problem, Sample};
use super::{BoundConfig, BoundParams, BoundReport, FunctionPair, PowerPair, SandwichTuple, TheoremId};
use crate::error::{RadError, Result};
use crate::linalg::{abs_pair, op_norm, psd_power, quad, quad_re, spectral_apply, ComplexMatrix, PsdMatrix};
use crate::radius::{wp_radius, OperatorTuple};
use crate::scalar::{refinement_sum, uniform_half_sum};

/// Level sum with weight one half at every level, brackets at `ν = ½`,
/// summed over operators: `½ Σ_i Σ_j (…)²` on `a_i`, `b_i`.
pub fn eta_thm26(a: &[f64], b: &[f64], levels: u32) -> Result<f64> {
    BoundParams::default().with_levels(levels).check_common()?;
    if a.len() != b.len() {
        return Err(RadError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if let Some(bad) = a.iter().chain(b).find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(RadError::domain(format!("quadratic forms must be nonnegative, got {bad}")));
    }
    Ok(a.iter().zip(b).map(|(&ai, &bi)| uniform_half_sum(levels, ai, bi)).sum())
}

pub(crate) fn half_gap(a: f64, b: f64) -> f64 {
    let d = a.max(0.0).sqrt() - b.max(0.0).sqrt();
    0.5 * d * d
}

fn check_pair<F: FunctionPair + ?Sized>(fg: &F, spectrum: &[f64]) -> Result<()> {
    for &t in spectrum {
        let prod = fg.f(t) * fg.g(t);
        if !((prod - t).abs() <= 1e-10 * t.max(1.0)) {
            return Err(RadError::domain(format!(
                "function pair violates f(t)g(t) = t at t = {t}: product {prod}"
            )));
        }
    }
    Ok(())
}

/// `w_p^p(A_i* T_i B_i) ≤ c ‖Σ P_i^{rp} + Q_i^{rp}‖^{1/r} − inf η` with
/// `c = n^{1−1/r}/2^{1/r}`, `P_i = B_i* f²(|T_i|) B_i` and
/// `Q_i = A_i* g²(|T_i*|) A_i`.
///
/// `η` carries weight one half on every level with brackets taken at `ν = ½`.
/// At `ν = ½` only the first level of the weighted-mean refinement has
/// nonzero weight, so the per-vector chain subtracts
/// `Σ_i ½(√⟨P_i^p x,x⟩ − √⟨Q_i^p x,x⟩)²`; failures of the chain with the
/// full `η` are reported as `uniform_weight_chain_failures`. The baseline
/// subtracts that single-level term.
pub fn bound_thm26<F: FunctionPair + ?Sized>(tuple: &SandwichTuple, fg: &F, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    sandwich_report(TheoremId::Thm26, tuple, fg, params, cfg)
}

/// `w_p^p(A_1* B_1, …) ≤ c ‖Σ |B_i|^{2rp} + |A_i|^{2rp}‖^{1/r} − inf η`:
/// the sandwich bound with `T_i = I` and `f = g = √t`.
pub fn bound_cor27(pairs: &[(ComplexMatrix, ComplexMatrix)], params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    let first = pairs
        .first()
        .ok_or_else(|| RadError::domain("at least one operand pair is required"))?;
    let id = ComplexMatrix::identity(first.0.dim());
    let triples = pairs.iter().map(|(a, b)| (a.clone(), id.clone(), b.clone())).collect();
    let tuple = SandwichTuple::new(triples)?;
    let params = params.with_nu(0.5);
    sandwich_report(TheoremId::Cor27, &tuple, &PowerPair::new(0.5)?, &params, cfg)
}

/// `w_p^p(T_1, …, T_n) ≤ c ‖Σ |T_i|^{2αrp} + |T_i*|^{2(1−α)rp}‖^{1/r} − inf η`:
/// the sandwich bound with `A_i = B_i = I` and `f = t^α`, `g = t^{1−α}`.
pub fn bound_cor28(tuple: &OperatorTuple, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    let id = ComplexMatrix::identity(tuple.dim());
    let triples = tuple.ops().iter().map(|t| (id.clone(), t.clone(), id.clone())).collect();
    let sandwich = SandwichTuple::new(triples)?;
    sandwich_report(TheoremId::Cor28, &sandwich, &PowerPair::new(params.nu)?, params, cfg)
}

/// Two-operator form at one level and `r = 1`; `params.r` and
/// `params.levels` are replaced by one.
pub fn bound_cor210(b: &ComplexMatrix, c: &ComplexMatrix, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    let tuple = OperatorTuple::new(vec![b.clone(), c.clone()])?;
    let params = params.with_r(1.0).with_levels(1);
    let id = ComplexMatrix::identity(tuple.dim());
    let triples = tuple.ops().iter().map(|t| (id.clone(), t.clone(), id.clone())).collect();
    let sandwich = SandwichTuple::new(triples)?;
    sandwich_report(TheoremId::Cor210, &sandwich, &PowerPair::new(params.nu)?, &params, cfg)
}

fn sandwich_report<F: FunctionPair + ?Sized>(
    theorem: TheoremId,
    tuple: &SandwichTuple,
    fg: &F,
    params: &BoundParams,
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    params.check_common()?;
    params.require_p_at_least(1.0)?;
    params.require_r_at_least(1.0)?;
    let (p, r, levels) = (params.p, params.r, params.levels);
    let n = tuple.len();
    let dim = tuple.dim();

    let mut pp = Vec::with_capacity(n);
    let mut qp = Vec::with_capacity(n);
    let mut total = ComplexMatrix::zeros(dim);
    for (a, t, b) in tuple.triples() {
        let (abs_t, abs_adj) = abs_pair(t)?;
        check_pair(fg, &abs_t.eigen().values)?;
        check_pair(fg, &abs_adj.eigen().values)?;
        let f2 = spectral_apply(&abs_t, |s| fg.f(s).powi(2))?;
        let g2 = spectral_apply(&abs_adj, |s| fg.g(s).powi(2))?;
        let pm = PsdMatrix::from_complex(b.adjoint().mul(&f2.as_complex()).mul(b), &cfg.tol)?;
        let qm = PsdMatrix::from_complex(a.adjoint().mul(&g2.as_complex()).mul(a), &cfg.tol)?;
        total = total
            .add(&psd_power(&pm, p * r)?.as_complex())
            .add(&psd_power(&qm, p * r)?.as_complex());
        pp.push(psd_power(&pm, p)?);
        qp.push(psd_power(&qm, p)?);
    }
    let coef = (n as f64).powf(1.0 - 1.0 / r) / 2f64.powf(1.0 / r);
    let norm_term = coef * op_norm(&total)?.powf(1.0 / r);
    let total = PsdMatrix::from_complex(total, &cfg.tol)?;

    let products = OperatorTuple::new(tuple.products())?;
    let w = wp_radius(&products, p, &cfg.opt)?;

    let mats: Vec<_> = products.ops().iter().map(|m| m.as_dmatrix()).collect();
    let forms = |v: &[Complex64]| -> (Vec<f64>, Vec<f64>) {
        (
            pp.iter().map(|m| quad_re(m.as_dmatrix(), v)).collect(),
            qp.iter().map(|m| quad_re(m.as_dmatrix(), v)).collect(),
        )
    };
    let eta = |v: &[Complex64], _: &[Complex64], _: usize| {
        let (a, b) = forms(v);
        a.iter().zip(&b).map(|(&x, &y)| uniform_half_sum(levels, x, y)).sum()
    };
    let zeta = |v: &[Complex64], _: &[Complex64], _: usize| {
        let (a, b) = forms(v);
        a.iter().zip(&b).map(|(&x, &y)| half_gap(x, y)).sum()
    };
    let point = |v: &[Complex64], _: &[Complex64]| {
        let (a, b) = forms(v);
        let lhs: f64 = mats.iter().map(|m| quad(m, v).norm().powf(p)).sum();
        let norm_form = coef * quad_re(total.as_dmatrix(), v).max(0.0).powf(1.0 / r);
        let mut uniform = 0.0;
        let mut derived = 0.0;
        let mut single = 0.0;
        let mut first = 0.0;
        for (&x, &y) in a.iter().zip(&b) {
            uniform += uniform_half_sum(levels, x, y);
            derived += refinement_sum(0.5, levels, x, y);
            single += half_gap(x, y);
            first += uniform_half_sum(1, x, y);
        }
        Sample {
            chains: vec![(lhs, norm_form - derived)],
            lhs_candidate: Some(lhs),
            refined: vec![uniform],
            baseline: vec![single],
            first_level: (first - single).abs(),
            evidence: vec![derived],
            evidence_chains: vec![(lhs, norm_form - uniform)],
        }
    };
    let mut spectra: Vec<&PsdMatrix> = vec![&total];
    spectra.extend(pp.iter().chain(&qp));
    let problem = Problem {
        dim,
        components: 1,
        pairwise: false,
        point: &point,
        refined: &eta,
        baseline: Some(&zeta),
        spectra,
        witnesses: vec![(w.witness.clone(), None)],
    };
    let scan = run(&problem, cfg)?;
    let mut variants = BTreeMap::new();
    variants.insert("single_level_refinement".to_string(), scan.evidence_min[0].max(0.0));
    variants.insert("uniform_weight_chain_failures".to_string(), scan.evidence_failures[0] as f64);
    Ok(Assembly {
        theorem,
        dim,
        n_ops: n,
        params: BoundParams {
            nu: fg.power().unwrap_or(params.nu),
            ..*params
        },
        lhs_lower: w.value.powf(p),
        norm_term,
        refinement_upper: scan.refined_min[0].max(0.0),
        baseline_subtracted: scan.baseline_min[0].max(0.0),
        lhs_witness: Some(w.witness),
        lhs_second_witness: None,
        variants,
    }
    .finish(&scan, &cfg.tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::CustomPair;
    use approx::assert_abs_diff_eq;

    fn cfg() -> BoundConfig {
        let mut c = BoundConfig::default();
        c.opt.restarts = 6;
        c
    }

    fn nil() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn eta_scalar_examples() {
        assert_abs_diff_eq!(eta_thm26(&[2.0, 3.0], &[2.0, 3.0], 4).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eta_thm26(&[4.0], &[1.0], 1).unwrap(), 0.5, epsilon = 1e-15);
        assert!(eta_thm26(&[1.0], &[1.0, 2.0], 1).is_err());
        assert!(eta_thm26(&[-1.0], &[1.0], 1).is_err());
        assert!(eta_thm26(&[1.0], &[1.0], 0).is_err());
    }

    #[test]
    fn all_identity_triple() {
        let id = ComplexMatrix::identity(2);
        let tuple = SandwichTuple::new(vec![(id.clone(), id.clone(), id)]).unwrap();
        let p = BoundParams::default().with_p(1.0).with_r(1.0).with_levels(3);
        let rep = bound_thm26(&tuple, &PowerPair::new(0.5).unwrap(), &p, &cfg()).unwrap();
        assert_abs_diff_eq!(rep.lhs_lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.norm_term, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.refinement_upper, 0.0, epsilon = 1e-14);
        assert_eq!(rep.pointwise_violations, 0);
    }

    #[test]
    fn nilpotent_single_triple() {
        let id = ComplexMatrix::identity(2);
        let tuple = SandwichTuple::new(vec![(id.clone(), nil(), id)]).unwrap();
        let p = BoundParams::default().with_p(1.0).with_r(1.0).with_levels(1);
        let rep = bound_thm26(&tuple, &PowerPair::new(0.5).unwrap(), &p, &cfg()).unwrap();
        assert_abs_diff_eq!(rep.lhs_lower, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(rep.norm_term, 0.5, epsilon = 1e-12);
        assert!(rep.refinement_upper < 1e-8);
        assert_abs_diff_eq!(rep.refinement_gain, 0.0, epsilon = 1e-10);
        assert_eq!(rep.pointwise_violations, 0);
        assert_eq!(rep.dominance_violations, 0);
    }

    #[test]
    fn identity_sandwich_matches_operator_tuple_form() {
        let t2 = ComplexMatrix::from_row_major(
            2,
            &[
                Complex64::new(1.0, 0.5),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.2, 1.0),
                Complex64::new(0.0, -0.7),
            ],
        )
        .unwrap();
        let id = ComplexMatrix::identity(2);
        let p = BoundParams::default().with_nu(0.3).with_p(2.0).with_r(2.0).with_levels(2);
        let sandwich = SandwichTuple::new(vec![(id.clone(), nil(), id.clone()), (id.clone(), t2.clone(), id)]).unwrap();
        let a = bound_thm26(&sandwich, &PowerPair::new(0.3).unwrap(), &p, &cfg()).unwrap();
        let b = bound_cor28(&OperatorTuple::new(vec![nil(), t2]).unwrap(), &p, &cfg()).unwrap();
        assert_abs_diff_eq!(a.norm_term, b.norm_term, epsilon = 1e-12);
        assert_abs_diff_eq!(a.refinement_upper, b.refinement_upper, epsilon = 1e-12);
        assert_abs_diff_eq!(a.lhs_lower, b.lhs_lower, epsilon = 1e-12);
        assert_eq!(b.theorem, TheoremId::Cor28);
    }

    #[test]
    fn hermitian_operand_has_no_refinement() {
        let h = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, -1.0]]).unwrap();
        let p = BoundParams::default().with_nu(0.5).with_p(1.0).with_r(1.0).with_levels(3);
        let rep = bound_cor28(&OperatorTuple::new(vec![h]).unwrap(), &p, &cfg()).unwrap();
        assert!(rep.refinement_upper < 1e-12);
        assert_eq!(rep.pointwise_violations, 0);
    }

    #[test]
    fn two_operator_form_matches_general_tuple() {
        let c = ComplexMatrix::real_diag(&[1.0, -2.0]);
        let p = BoundParams::default().with_nu(0.25).with_p(2.0).with_r(1.0).with_levels(1);
        let a = bound_cor210(&nil(), &c, &p.with_levels(3).with_r(2.0), &cfg()).unwrap();
        let b = bound_cor28(&OperatorTuple::new(vec![nil(), c]).unwrap(), &p, &cfg()).unwrap();
        assert_eq!(a.params.levels, 1);
        assert_abs_diff_eq!(a.norm_term, b.norm_term, epsilon = 1e-12);
        assert_abs_diff_eq!(a.rhs_baseline, a.rhs_refined_est, epsilon = 1e-10);
    }

    #[test]
    fn cor27_uses_gram_operands() {
        let a = ComplexMatrix::real_diag(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let p = BoundParams::default().with_p(1.0).with_r(1.0).with_levels(2);
        let rep = bound_cor27(&[(a, b)], &p, &cfg()).unwrap();
        // ½‖|B|² + |A|²‖ = ½‖I + diag(1, 4)‖ = 5/2
        assert_abs_diff_eq!(rep.norm_term, 2.5, epsilon = 1e-12);
        assert_eq!(rep.pointwise_violations, 0);
        assert_eq!(rep.params.nu, 0.5);
    }

    #[test]
    fn custom_pair_is_validated() {
        let id = ComplexMatrix::identity(2);
        let tuple = SandwichTuple::new(vec![(id.clone(), ComplexMatrix::real_diag(&[2.0, 3.0]), id)]).unwrap();
        let p = BoundParams::default().with_p(1.0).with_r(1.0);
        let good = CustomPair {
            f: |t: f64| t.sqrt(),
            g: |t: f64| t.sqrt(),
        };
        assert!(bound_thm26(&tuple, &good, &p, &cfg()).is_ok());
        let bad = CustomPair {
            f: |t: f64| t,
            g: |t: f64| t,
        };
        assert!(matches!(bound_thm26(&tuple, &bad, &p, &cfg()), Err(RadError::Domain(_))));
    }
}
