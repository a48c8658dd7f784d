//! Weighted-mean and Heinz-mean bounds for `w^r(A^ν X B^{1−ν})`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::engine::{run, Assembly, Problem, Sample};
use super::{BoundConfig, BoundParams, BoundReport, TheoremId};
use crate::error::{RadError, Result};
use crate::linalg::{op_norm, psd_power, quad, quad_re, ComplexMatrix, PsdMatrix, UnitVector};
use crate::radius::numerical_radius;
use crate::scalar::{refinement_sum, unscaled_weight_sum};

struct Powers {
    ar: PsdMatrix,
    br: PsdMatrix,
    /// `‖X‖^r`.
    xr: f64,
}

fn prepare(a: &PsdMatrix, b: &PsdMatrix, x: Option<&ComplexMatrix>, params: &BoundParams) -> Result<Powers> {
    params.check_common()?;
    params.require_r_at_least(2.0)?;
    if a.dim() != b.dim() {
        return Err(RadError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let xr = match x {
        Some(x) => {
            if x.dim() != a.dim() {
                return Err(RadError::DimensionMismatch {
                    expected: a.dim(),
                    found: x.dim(),
                });
            }
            op_norm(x)?.powf(params.r)
        }
        None => 1.0,
    };
    Ok(Powers {
        ar: psd_power(a, params.r)?,
        br: psd_power(b, params.r)?,
        xr,
    })
}

fn check_vector(dim: usize, v: &UnitVector) -> Result<()> {
    if v.dim() != dim {
        return Err(RadError::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    Ok(())
}

/// `min{ν, 1−ν} (√a − √b)²`.
pub(crate) fn first_level_form(nu: f64, a: f64, b: f64) -> f64 {
    let d = a.max(0.0).sqrt() - b.max(0.0).sqrt();
    nu.min(1.0 - nu) * d * d
}

/// `η(x) = S_N(ν)` on `a = ⟨A^r x, x⟩`, `b = ⟨B^r x, x⟩`.
pub fn eta_thm23(a: &PsdMatrix, b: &PsdMatrix, params: &BoundParams, x: &UnitVector) -> Result<f64> {
    let pw = prepare(a, b, None, params)?;
    check_vector(a.dim(), x)?;
    let la = quad_re(pw.ar.as_dmatrix(), x.as_slice());
    let lb = quad_re(pw.br.as_dmatrix(), x.as_slice());
    Ok(refinement_sum(params.nu, params.levels, la, lb))
}

/// `ζ(x) = S_N(ν) + S_N(1−ν)` on `a = ⟨A^r x, x⟩`, `b = ⟨B^r x, x⟩`: the sum
/// of the two weighted-mean refinements used for the two Heinz terms.
pub fn zeta_thm25(a: &PsdMatrix, b: &PsdMatrix, params: &BoundParams, x: &UnitVector) -> Result<f64> {
    let pw = prepare(a, b, None, params)?;
    check_vector(a.dim(), x)?;
    let la = quad_re(pw.ar.as_dmatrix(), x.as_slice());
    let lb = quad_re(pw.br.as_dmatrix(), x.as_slice());
    Ok(refinement_sum(params.nu, params.levels, la, lb) + refinement_sum(1.0 - params.nu, params.levels, la, lb))
}

/// `w^r(A^ν X B^{1−ν}) ≤ ‖X‖^r [‖νA^r + (1−ν)B^r‖ − inf η]`.
///
/// Per vector: `|⟨A^ν X B^{1−ν} x, x⟩|^r ≤ ‖X‖^r (ν⟨A^r x,x⟩ + (1−ν)⟨B^r x,x⟩ − η(x))`.
/// The baseline is the same bound without the subtracted term.
pub fn bound_thm23(a: &PsdMatrix, b: &PsdMatrix, x: &ComplexMatrix, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    let pw = prepare(a, b, Some(x), params)?;
    let (nu, r, levels, xr) = (params.nu, params.r, params.levels, pw.xr);
    let m = psd_power(a, nu)?
        .as_complex()
        .mul(x)
        .mul(&psd_power(b, 1.0 - nu)?.as_complex());
    let w = numerical_radius(&m, cfg.resolution)?;
    let mix = pw.ar.as_complex().scale_real(nu).add(&pw.br.as_complex().scale_real(1.0 - nu));
    let norm_term = xr * op_norm(&mix)?;
    let mix_psd = PsdMatrix::from_complex(mix, &cfg.tol)?;

    let (arm, brm, mm) = (pw.ar.as_dmatrix(), pw.br.as_dmatrix(), m.as_dmatrix());
    let eta = |v: &[Complex64], _: &[Complex64], _: usize| refinement_sum(nu, levels, quad_re(arm, v), quad_re(brm, v));
    let point = |v: &[Complex64], _: &[Complex64]| {
        let (la, lb) = (quad_re(arm, v), quad_re(brm, v));
        let e = refinement_sum(nu, levels, la, lb);
        let lhs = quad(mm, v).norm().powf(r);
        Sample {
            chains: vec![(lhs, xr * (nu * la + (1.0 - nu) * lb - e))],
            lhs_candidate: Some(lhs),
            refined: vec![e],
            first_level: (refinement_sum(nu, 1, la, lb) - first_level_form(nu, la, lb)).abs(),
            ..Sample::default()
        }
    };
    let problem = Problem {
        dim: a.dim(),
        components: 1,
        pairwise: false,
        point: &point,
        refined: &eta,
        baseline: None,
        spectra: vec![&pw.ar, &pw.br, &mix_psd],
        witnesses: vec![(w.witness.clone(), None)],
    };
    let scan = run(&problem, cfg)?;
    Ok(Assembly {
        theorem: TheoremId::Thm23,
        dim: a.dim(),
        n_ops: 1,
        params: *params,
        lhs_lower: w.value.powf(r),
        norm_term,
        refinement_upper: xr * scan.refined_min[0].max(0.0),
        baseline_subtracted: 0.0,
        lhs_witness: Some(w.witness),
        lhs_second_witness: None,
        variants: BTreeMap::new(),
    }
    .finish(&scan, &cfg.tol))
}

/// `w^r(H_ν(A, B)) ≤ ‖X‖^r [‖(A^r + B^r)/2‖ − ½ inf ζ]` for the mixed Heinz
/// mean `H_ν = (A^ν X B^{1−ν} + A^{1−ν} X B^ν)/2`.
///
/// `ζ = S_N(ν) + S_N(1−ν)`, which is what averaging the two weighted-mean
/// chains yields. The level sum whose weights drop the factor `ν` is
/// reported under `unscaled_weight_*`; its weights can be negative.
pub fn bound_thm25_heinz(a: &PsdMatrix, b: &PsdMatrix, x: &ComplexMatrix, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    let pw = prepare(a, b, Some(x), params)?;
    let (nu, r, levels, xr) = (params.nu, params.r, params.levels, pw.xr);
    let left = psd_power(a, nu)?.as_complex().mul(x).mul(&psd_power(b, 1.0 - nu)?.as_complex());
    let right = psd_power(a, 1.0 - nu)?.as_complex().mul(x).mul(&psd_power(b, nu)?.as_complex());
    let h = left.add(&right).scale_real(0.5);
    let w = numerical_radius(&h, cfg.resolution)?;
    let mean = pw.ar.as_complex().add(&pw.br.as_complex()).scale_real(0.5);
    let norm_term = xr * op_norm(&mean)?;
    let mean_psd = PsdMatrix::from_complex(mean, &cfg.tol)?;

    let (arm, brm, hm) = (pw.ar.as_dmatrix(), pw.br.as_dmatrix(), h.as_dmatrix());
    let derived = move |la: f64, lb: f64, n: u32| refinement_sum(nu, n, la, lb) + refinement_sum(1.0 - nu, n, la, lb);
    let zeta = |v: &[Complex64], _: &[Complex64], _: usize| derived(quad_re(arm, v), quad_re(brm, v), levels);
    let point = |v: &[Complex64], _: &[Complex64]| {
        let (la, lb) = (quad_re(arm, v), quad_re(brm, v));
        let z = derived(la, lb, levels);
        let unscaled = unscaled_weight_sum(nu, levels, la, lb);
        let lhs = quad(hm, v).norm().powf(r);
        let mean_form = 0.5 * (la + lb);
        Sample {
            chains: vec![(lhs, xr * (mean_form - 0.5 * z))],
            lhs_candidate: Some(lhs),
            refined: vec![z],
            first_level: (derived(la, lb, 1) - 2.0 * first_level_form(nu, la, lb)).abs(),
            evidence: vec![unscaled],
            evidence_chains: vec![(lhs, xr * (mean_form - 0.5 * unscaled))],
            ..Sample::default()
        }
    };
    let problem = Problem {
        dim: a.dim(),
        components: 1,
        pairwise: false,
        point: &point,
        refined: &zeta,
        baseline: None,
        spectra: vec![&pw.ar, &pw.br, &mean_psd],
        witnesses: vec![(w.witness.clone(), None)],
    };
    let scan = run(&problem, cfg)?;
    let mut variants = BTreeMap::new();
    variants.insert("unscaled_weight_refinement".to_string(), xr * 0.5 * scan.evidence_min[0]);
    variants.insert("unscaled_weight_chain_failures".to_string(), scan.evidence_failures[0] as f64);
    Ok(Assembly {
        theorem: TheoremId::Thm25,
        dim: a.dim(),
        n_ops: 1,
        params: *params,
        lhs_lower: w.value.powf(r),
        norm_term,
        refinement_upper: xr * 0.5 * scan.refined_min[0].max(0.0),
        baseline_subtracted: 0.0,
        lhs_witness: Some(w.witness),
        lhs_second_witness: None,
        variants,
    }
    .finish(&scan, &cfg.tol))
}
