//! Shared sampling and scanning machinery for the bound evaluators.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{BoundConfig, BoundParams, BoundReport, TheoremId};
use crate::error::Result;
use crate::linalg::{PsdMatrix, UnitVector};
use crate::radius::{minimize_over_sphere, minimize_over_sphere_pair};
use crate::rng::{derive_seed, random_unit, stream_rng};
use crate::tolerance::ToleranceConfig;

/// Number of Gaussian vectors in every sample before padding.
pub(crate) const GAUSSIAN_SAMPLES: usize = 128;

/// Everything a bound reports about one sampled point (or pair of points).
#[derive(Debug, Clone, Default)]
pub(crate) struct Sample {
    /// `(lhs, rhs)` of each per-vector proof chain; a failure is a violation.
    pub chains: Vec<(f64, f64)>,
    /// A feasible value of the bound's left-hand side, if the point yields one.
    pub lhs_candidate: Option<f64>,
    /// Refined subtracted functionals, one per component.
    pub refined: Vec<f64>,
    /// Baseline functionals, paired with `refined` when present.
    pub baseline: Vec<f64>,
    /// Deviation of the one-level refined functional from the closed form.
    pub first_level: f64,
    /// Alternative functionals whose minimum is reported.
    pub evidence: Vec<f64>,
    /// Alternative chains whose failures are reported.
    pub evidence_chains: Vec<(f64, f64)>,
}

pub(crate) type Functional<'a> = &'a dyn Fn(&[Complex64], &[Complex64], usize) -> f64;

pub(crate) struct Problem<'a> {
    pub dim: usize,
    pub components: usize,
    /// Points are independent pairs `(x, y)` rather than `x = y`.
    pub pairwise: bool,
    pub point: &'a dyn Fn(&[Complex64], &[Complex64]) -> Sample,
    pub refined: Functional<'a>,
    pub baseline: Option<Functional<'a>>,
    /// PSD operands whose eigenvectors join the sample.
    pub spectra: Vec<&'a PsdMatrix>,
    /// Left-hand-side witnesses; the second entry is used in pairwise mode.
    pub witnesses: Vec<(UnitVector, Option<UnitVector>)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Scan {
    pub samples: usize,
    pub violations: usize,
    pub dominance_violations: usize,
    pub refined_min: Vec<f64>,
    pub refined_arg: Vec<(usize, usize)>,
    pub baseline_min: Vec<f64>,
    pub first_level: f64,
    pub lhs_best: Option<f64>,
    pub evidence_min: Vec<f64>,
    pub evidence_failures: Vec<usize>,
    pub vectors: Vec<UnitVector>,
}

impl Scan {
    /// Minimizer of the summed refined functional among the samples.
    pub fn inf_witness(&self) -> (Option<UnitVector>, Option<UnitVector>) {
        match self.refined_arg.first() {
            Some(&(i, j)) => (Some(self.vectors[i].clone()), (i != j).then(|| self.vectors[j].clone())),
            None => (None, None),
        }
    }
}

/// Builds the shared candidate set and scans every point.
///
/// The set holds the left-hand-side witnesses, the minimizers found by the
/// sphere optimizer for each refined and baseline component, eigenvectors of
/// the supplied PSD operands, Gaussian vectors, and random padding up to
/// `cfg.samples`. Refined and baseline minima are both taken over this one
/// set.
pub(crate) fn run(problem: &Problem<'_>, cfg: &BoundConfig) -> Result<Scan> {
    let seed = cfg.opt.seed;
    let mut vectors: Vec<UnitVector> = Vec::with_capacity(cfg.samples.max(8));
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let push_pair = |vectors: &mut Vec<UnitVector>, pairs: &mut Vec<(usize, usize)>, x: UnitVector, y: Option<UnitVector>| {
        let ix = vectors.len();
        vectors.push(x);
        match y {
            Some(y) if problem.pairwise => {
                vectors.push(y);
                pairs.push((ix, ix + 1));
            }
            _ => pairs.push((ix, ix)),
        }
    };

    for (x, y) in &problem.witnesses {
        push_pair(&mut vectors, &mut pairs, x.clone(), y.clone());
    }

    let mut functionals: Vec<(u64, Functional<'_>)> = vec![(2, problem.refined)];
    if let Some(b) = problem.baseline {
        functionals.push((3, b));
    }
    for (tag, func) in functionals {
        for c in 0..problem.components {
            let opt = cfg.opt.with_seed(derive_seed(seed, &[tag, c as u64]));
            if problem.pairwise {
                let est = minimize_over_sphere_pair(|x, y| func(x.as_slice(), y.as_slice(), c), problem.dim, &opt)?;
                push_pair(&mut vectors, &mut pairs, est.witness, est.second_witness);
            } else {
                let est = minimize_over_sphere(|x| func(x.as_slice(), x.as_slice(), c), problem.dim, &opt)?;
                push_pair(&mut vectors, &mut pairs, est.witness, None);
            }
        }
    }

    let generic_start = vectors.len();
    let budget = cfg.samples.max(vectors.len());
    let gaussians = GAUSSIAN_SAMPLES.min(budget - vectors.len());
    let eig_room = budget - vectors.len() - gaussians;
    let eigvecs = problem
        .spectra
        .iter()
        .flat_map(|m| (0..m.dim()).map(move |k| m.eigen().vector(k)))
        .take(eig_room);
    vectors.extend(eigvecs);
    let mut rng = stream_rng(derive_seed(seed, &[1]), 0);
    while vectors.len() < budget {
        vectors.push(random_unit(&mut rng, problem.dim));
    }
    let m = vectors.len();
    for k in generic_start..m {
        pairs.push((k, k));
    }
    if problem.pairwise && m > generic_start + 1 {
        let span = m - generic_start;
        for k in 0..span {
            pairs.push((generic_start + k, generic_start + (k + 1) % span));
        }
    }

    scan(problem, vectors, &pairs, &cfg.tol)
}

fn scan(problem: &Problem<'_>, vectors: Vec<UnitVector>, pairs: &[(usize, usize)], tol: &ToleranceConfig) -> Result<Scan> {
    let comps = problem.components;
    let mut out = Scan {
        samples: pairs.len(),
        violations: 0,
        dominance_violations: 0,
        refined_min: vec![f64::INFINITY; comps],
        refined_arg: vec![(0, 0); comps],
        baseline_min: Vec::new(),
        first_level: 0.0,
        lhs_best: None,
        evidence_min: Vec::new(),
        evidence_failures: Vec::new(),
        vectors: Vec::new(),
    };
    for &(i, j) in pairs {
        let s = (problem.point)(vectors[i].as_slice(), vectors[j].as_slice());
        out.violations += s
            .chains
            .iter()
            .filter(|&&(l, r)| !ToleranceConfig::holds(l, r, tol.pointwise_slack))
            .count();
        if let Some(l) = s.lhs_candidate {
            out.lhs_best = Some(out.lhs_best.map_or(l, |b| b.max(l)));
        }
        for (c, &v) in s.refined.iter().enumerate() {
            if v < out.refined_min[c] {
                out.refined_min[c] = v;
                out.refined_arg[c] = (i, j);
            }
        }
        if out.baseline_min.len() < s.baseline.len() {
            out.baseline_min.resize(s.baseline.len(), f64::INFINITY);
        }
        for (c, &v) in s.baseline.iter().enumerate() {
            out.baseline_min[c] = out.baseline_min[c].min(v);
            if let Some(&eta) = s.refined.get(c) {
                if !ToleranceConfig::holds(v, eta, tol.dominance_slack) {
                    out.dominance_violations += 1;
                }
            }
        }
        out.first_level = out.first_level.max(s.first_level);
        if out.evidence_min.len() < s.evidence.len() {
            out.evidence_min.resize(s.evidence.len(), f64::INFINITY);
        }
        for (c, &v) in s.evidence.iter().enumerate() {
            out.evidence_min[c] = out.evidence_min[c].min(v);
        }
        if out.evidence_failures.len() < s.evidence_chains.len() {
            out.evidence_failures.resize(s.evidence_chains.len(), 0);
        }
        for (c, &(l, r)) in s.evidence_chains.iter().enumerate() {
            if !ToleranceConfig::holds(l, r, tol.pointwise_slack) {
                out.evidence_failures[c] += 1;
            }
        }
    }
    if comps == 0 {
        out.refined_arg.clear();
    }
    out.vectors = vectors;
    Ok(out)
}

/// Everything needed to turn a scan into a [`BoundReport`].
pub(crate) struct Assembly {
    pub theorem: TheoremId,
    pub dim: usize,
    pub n_ops: usize,
    pub params: BoundParams,
    pub lhs_lower: f64,
    pub norm_term: f64,
    pub refinement_upper: f64,
    /// Subtracted term of the baseline inequality; zero when it has none.
    pub baseline_subtracted: f64,
    pub lhs_witness: Option<UnitVector>,
    pub lhs_second_witness: Option<UnitVector>,
    pub variants: BTreeMap<String, f64>,
}

impl Assembly {
    pub fn finish(self, scan: &Scan, tol: &ToleranceConfig) -> BoundReport {
        let lhs_lower = scan.lhs_best.map_or(self.lhs_lower, |b| b.max(self.lhs_lower));
        let rhs_refined_est = self.norm_term - self.refinement_upper;
        let rhs_baseline = self.norm_term - self.baseline_subtracted;
        let status = BoundReport::verdict(
            lhs_lower,
            self.norm_term,
            rhs_refined_est,
            self.refinement_upper,
            scan.violations,
            tol,
        );
        let (inf_witness, inf_second_witness) = scan.inf_witness();
        BoundReport {
            theorem: self.theorem,
            dim: self.dim,
            n_ops: self.n_ops,
            params: self.params,
            lhs_lower,
            norm_term: self.norm_term,
            refinement_upper: self.refinement_upper,
            rhs_refined_est,
            rhs_baseline,
            refinement_gain: rhs_baseline - rhs_refined_est,
            status,
            pointwise_samples: scan.samples,
            pointwise_violations: scan.violations,
            dominance_violations: scan.dominance_violations,
            first_level_deviation: scan.first_level,
            lhs_witness: self.lhs_witness,
            lhs_second_witness: self.lhs_second_witness,
            inf_witness,
            inf_second_witness,
            variants: self.variants,
        }
    }
}
