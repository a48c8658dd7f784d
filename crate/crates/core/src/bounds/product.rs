//! Product bounds `w_p^r(|T_i|) w_q^r(|T_i*|)` and the Euclidean bound for
//! positive tuples.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::engine::{run, Assembly, Problem, Sample};
use super::young::first_level_form;
use super::{BoundConfig, BoundParams, BoundReport, TheoremId};
use crate::error::{RadError, Result};
use crate::linalg::{abs_pair, bilinear, op_norm, psd_power, quad, quad_re, ComplexMatrix, PsdMatrix, UnitVector};
use crate::radius::{we_radius, wp_radius, OperatorTuple};
use crate::scalar::refinement_sum;

/// Validated exponents `(p, q, r, ν = r/p)`.
fn exponents(params: &BoundParams) -> Result<(f64, f64, f64, f64)> {
    params.check_common()?;
    let (p, r) = (params.p, params.r);
    let q = params
        .q
        .ok_or_else(|| RadError::domain("the exponent q is required"))?;
    if !(q >= 1.0 && p >= q) {
        return Err(RadError::domain(format!("exponents must satisfy p ≥ q ≥ 1, got p = {p}, q = {q}")));
    }
    if !((1.0 / p + 1.0 / q - 1.0 / r).abs() <= 1e-12) {
        return Err(RadError::domain(format!(
            "exponents must satisfy 1/p + 1/q = 1/r, got p = {p}, q = {q}, r = {r}"
        )));
    }
    Ok((p, q, r, r / p))
}

struct Moduli {
    abs: Vec<DMatrix<Complex64>>,
    abs_adj: Vec<DMatrix<Complex64>>,
    sp: PsdMatrix,
    sq: PsdMatrix,
    abs_tuple: OperatorTuple,
    adj_tuple: OperatorTuple,
}

fn moduli(tuple: &OperatorTuple, p: f64, q: f64, cfg: &BoundConfig) -> Result<Moduli> {
    let dim = tuple.dim();
    let (mut sp, mut sq) = (ComplexMatrix::zeros(dim), ComplexMatrix::zeros(dim));
    let (mut abs, mut abs_adj) = (Vec::new(), Vec::new());
    for t in tuple.ops() {
        let (a, b) = abs_pair(t)?;
        sp = sp.add(&psd_power(&a, p)?.as_complex());
        sq = sq.add(&psd_power(&b, q)?.as_complex());
        abs.push(a.as_complex());
        abs_adj.push(b.as_complex());
    }
    Ok(Moduli {
        abs: abs.iter().map(|m| m.as_dmatrix().clone()).collect(),
        abs_adj: abs_adj.iter().map(|m| m.as_dmatrix().clone()).collect(),
        sp: PsdMatrix::from_complex(sp, &cfg.tol)?,
        sq: PsdMatrix::from_complex(sq, &cfg.tol)?,
        abs_tuple: OperatorTuple::new(abs)?,
        adj_tuple: OperatorTuple::new(abs_adj)?,
    })
}

/// `u = Σ|⟨|T_i| x, y⟩|^p` and `v = Σ|⟨|T_i*| x, y⟩|^q`.
fn mixed_forms(m: &Moduli, p: f64, q: f64, x: &[Complex64], y: &[Complex64]) -> (f64, f64) {
    let u = m.abs.iter().map(|a| bilinear(a, x, y).norm().powf(p)).sum();
    let v = m.abs_adj.iter().map(|b| bilinear(b, x, y).norm().powf(q)).sum();
    (u, v)
}

/// `λ(x, y) = S_N(r/p)` on `Σ|⟨|T_i| x, y⟩|^p` and `Σ|⟨|T_i*| x, y⟩|^q`.
pub fn lambda_thm216(tuple: &OperatorTuple, params: &BoundParams, x: &UnitVector, y: &UnitVector) -> Result<f64> {
    let (p, q, _, nu) = exponents(params)?;
    for v in [x, y] {
        if v.dim() != tuple.dim() {
            return Err(RadError::DimensionMismatch {
                expected: tuple.dim(),
                found: v.dim(),
            });
        }
    }
    let mut sum_p = 0.0;
    let mut sum_q = 0.0;
    for t in tuple.ops() {
        let (a, b) = abs_pair(t)?;
        sum_p += bilinear(a.as_dmatrix(), x.as_slice(), y.as_slice()).norm().powf(p);
        sum_q += bilinear(b.as_dmatrix(), x.as_slice(), y.as_slice()).norm().powf(q);
    }
    Ok(refinement_sum(nu, params.levels, sum_p, sum_q))
}

/// `w_p^r(|T_i|) w_q^r(|T_i*|) ≤ (r/p)‖Σ|T_i|^p‖ + (r/q)‖Σ|T_i*|^q‖ − inf λ`
/// for `p ≥ q ≥ 1`, `1/p + 1/q = 1/r`.
///
/// Two chains are checked on every pair `(x, y)`. The mixed chain bounds
/// `u^ν v^{1−ν}` by the averaged quadratic forms minus `λ(x, y)`. The
/// diagonal chain bounds `(Σ⟨|T_i|x,x⟩^p)^ν (Σ⟨|T_i*|y,y⟩^q)^{1−ν}`, whose
/// supremum is the left side. The baseline subtracts `ν(√u − √v)²`.
pub fn bound_thm216(tuple: &OperatorTuple, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    product_report(TheoremId::Thm216, tuple, params, cfg)
}

/// `w_2(|T_i|) w_2(|T_i*|) ≤ ½‖Σ|T_i|² + |T_i*|²‖ − inf λ`: the product
/// bound at `p = q = 2`, `r = 1`.
pub fn bound_cor218(tuple: &OperatorTuple, levels: u32, cfg: &BoundConfig) -> Result<BoundReport> {
    let params = BoundParams::default()
        .with_p(2.0)
        .with_q(2.0)
        .with_r(1.0)
        .with_levels(levels);
    product_report(TheoremId::Cor218, tuple, &params, cfg)
}

fn product_report(theorem: TheoremId, tuple: &OperatorTuple, params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    let (p, q, r, nu) = exponents(params)?;
    let params = params.with_nu(nu);
    let levels = params.levels;
    let m = moduli(tuple, p, q, cfg)?;
    let norm_term = nu * m.sp.max_eigenvalue() + (1.0 - nu) * m.sq.max_eigenvalue();
    let w1 = wp_radius(&m.abs_tuple, p, &cfg.opt)?;
    let w2 = wp_radius(&m.adj_tuple, q, &cfg.opt)?;
    let lhs = w1.value.powf(r) * w2.value.powf(r);

    let lambda = |x: &[Complex64], y: &[Complex64], _: usize| {
        let (u, v) = mixed_forms(&m, p, q, x, y);
        refinement_sum(nu, levels, u, v)
    };
    let delta = |x: &[Complex64], y: &[Complex64], _: usize| {
        let (u, v) = mixed_forms(&m, p, q, x, y);
        first_level_form(nu, u, v)
    };
    let point = |x: &[Complex64], y: &[Complex64]| {
        let (u, v) = mixed_forms(&m, p, q, x, y);
        let l = refinement_sum(nu, levels, u, v);
        let (spx, spy) = (quad_re(m.sp.as_dmatrix(), x), quad_re(m.sp.as_dmatrix(), y));
        let (sqx, sqy) = (quad_re(m.sq.as_dmatrix(), x), quad_re(m.sq.as_dmatrix(), y));
        let mixed = (
            u.powf(nu) * v.powf(1.0 - nu),
            nu * 0.5 * (spx + spy) + (1.0 - nu) * 0.5 * (sqx + sqy) - l,
        );
        let ud: f64 = m.abs.iter().map(|a| quad(a, x).re.max(0.0).powf(p)).sum();
        let vd: f64 = m.abs_adj.iter().map(|b| quad(b, y).re.max(0.0).powf(q)).sum();
        let diag_lhs = ud.powf(nu) * vd.powf(1.0 - nu);
        let diagonal = (diag_lhs, nu * spx + (1.0 - nu) * sqy - refinement_sum(nu, levels, ud, vd));
        let d = first_level_form(nu, u, v);
        Sample {
            chains: vec![mixed, diagonal],
            lhs_candidate: Some(diag_lhs),
            refined: vec![l],
            baseline: vec![d],
            first_level: (refinement_sum(nu, 1, u, v) - d).abs(),
            ..Sample::default()
        }
    };
    let problem = Problem {
        dim: tuple.dim(),
        components: 1,
        pairwise: true,
        point: &point,
        refined: &lambda,
        baseline: Some(&delta),
        spectra: vec![&m.sp, &m.sq],
        witnesses: vec![(w1.witness.clone(), Some(w2.witness.clone()))],
    };
    let scan = run(&problem, cfg)?;
    Ok(Assembly {
        theorem,
        dim: tuple.dim(),
        n_ops: tuple.len(),
        params,
        lhs_lower: lhs,
        norm_term,
        refinement_upper: scan.refined_min[0].max(0.0),
        baseline_subtracted: scan.baseline_min[0].max(0.0),
        lhs_witness: Some(w1.witness),
        lhs_second_witness: Some(w2.witness),
        variants: BTreeMap::new(),
    }
    .finish(&scan, &cfg.tol))
}

/// `w_e(T_1, …, T_n) ≤ ‖Σ T_i²‖^{1/2}` for positive semidefinite `T_i`.
pub fn bound_cor219(tuple: &OperatorTuple, cfg: &BoundConfig) -> Result<BoundReport> {
    let dim = tuple.dim();
    let mut k = ComplexMatrix::zeros(dim);
    let mut mats = Vec::with_capacity(tuple.len());
    for t in tuple.ops() {
        PsdMatrix::from_complex(t.clone(), &cfg.tol)?;
        k = k.add(&t.mul(t));
        mats.push(t.as_dmatrix());
    }
    let norm_term = op_norm(&k)?.sqrt();
    let k = PsdMatrix::from_complex(k, &cfg.tol)?;
    let w = we_radius(tuple, &cfg.opt)?;
    let zero = |_: &[Complex64], _: &[Complex64], _: usize| 0.0;
    let point = |x: &[Complex64], _: &[Complex64]| {
        let lhs = mats.iter().map(|m| quad(m, x).norm_sqr()).sum::<f64>().sqrt();
        Sample {
            chains: vec![(lhs, quad_re(k.as_dmatrix(), x).max(0.0).sqrt())],
            lhs_candidate: Some(lhs),
            ..Sample::default()
        }
    };
    let problem = Problem {
        dim,
        components: 0,
        pairwise: false,
        point: &point,
        refined: &zero,
        baseline: None,
        spectra: vec![&k],
        witnesses: vec![(w.witness.clone(), None)],
    };
    let scan = run(&problem, cfg)?;
    let params = BoundParams::default().with_p(2.0).with_r(1.0).with_levels(1);
    Ok(Assembly {
        theorem: TheoremId::Cor219,
        dim,
        n_ops: tuple.len(),
        params,
        lhs_lower: w.value,
        norm_term,
        refinement_upper: 0.0,
        baseline_subtracted: 0.0,
        lhs_witness: Some(w.witness),
        lhs_second_witness: None,
        variants: BTreeMap::new(),
    }
    .finish(&scan, &cfg.tol))
}
