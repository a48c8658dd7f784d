//! Suite execution over theorems, parameter points and random trials.

use std::collections::BTreeMap;
use std::time::Instant;

use super::{gen_matrix, EnsembleKind, EnsembleSpec, ParamGrid, SuiteConfig, SuiteReport, TrialMeta, TrialRecord};
use crate::bounds::{
    bound_cor210, bound_cor215, bound_cor218, bound_cor219, bound_cor27, bound_cor28, bound_thm211, bound_thm213,
    bound_thm216, bound_thm23, bound_thm25_heinz, bound_thm26, BoundConfig, BoundParams, BoundReport, PowerPair,
    SandwichTuple, TheoremId,
};
use crate::error::{RadError, Result};
use crate::linalg::{ComplexMatrix, PsdMatrix};
use crate::radius::{OperatorTuple, DEFAULT_RESOLUTION};
use crate::rng::derive_seed;

/// Theorems whose report carries a baseline to compare against.
pub const COMPARABLE: [TheoremId; 7] = [
    TheoremId::Thm23,
    TheoremId::Thm25,
    TheoremId::Thm26,
    TheoremId::Cor28,
    TheoremId::Thm211,
    TheoremId::Thm213,
    TheoremId::Thm216,
];

/// Theorems whose single-level refinement must equal their baseline.
const SINGLE_LEVEL_REDUCTIONS: [TheoremId; 5] = [
    TheoremId::Thm26,
    TheoremId::Cor28,
    TheoremId::Thm211,
    TheoremId::Thm213,
    TheoremId::Thm216,
];

/// Parameter points `(params, n_ops)` a theorem is run at, filtered to its domain.
pub fn grid_points(theorem: TheoremId, grid: &ParamGrid) -> Vec<(BoundParams, usize)> {
    use TheoremId::*;
    let base = BoundParams::default();
    let mut out = Vec::new();
    match theorem {
        Thm23 | Thm25 => {
            for &nu in &grid.nus {
                for &r in grid.rs.iter().filter(|&&r| r >= 2.0) {
                    for &n in &grid.levels {
                        out.push((base.with_nu(nu).with_r(r).with_levels(n), 1));
                    }
                }
            }
        }
        Thm26 | Cor28 => {
            for &k in &grid.n_ops {
                for &nu in &grid.nus {
                    for &p in &grid.ps {
                        for &r in &grid.rs {
                            for &n in &grid.levels {
                                out.push((base.with_nu(nu).with_p(p).with_r(r).with_levels(n), k));
                            }
                        }
                    }
                }
            }
        }
        Cor27 => {
            for &k in &grid.n_ops {
                for &p in &grid.ps {
                    for &r in &grid.rs {
                        for &n in &grid.levels {
                            out.push((base.with_nu(0.5).with_p(p).with_r(r).with_levels(n), k));
                        }
                    }
                }
            }
        }
        Cor210 => {
            for &nu in &grid.nus {
                for &p in &grid.ps {
                    out.push((base.with_nu(nu).with_p(p).with_r(1.0).with_levels(1), 2));
                }
            }
        }
        Thm211 | Thm213 => {
            let min_p = if theorem == Thm213 { 2.0 } else { 1.0 };
            for &k in &grid.n_ops {
                for &nu in &grid.nus {
                    for &p in grid.ps.iter().filter(|&&p| p >= min_p) {
                        for &n in &grid.levels {
                            out.push((base.with_nu(nu).with_p(p).with_levels(n), k));
                        }
                    }
                }
            }
        }
        Cor215 => {
            for &p in grid.ps.iter().filter(|&&p| p >= 2.0) {
                out.push((base.with_nu(0.5).with_p(p).with_r(1.0).with_levels(1), 2));
            }
        }
        Thm216 => {
            for &k in &grid.n_ops {
                for &p in &grid.ps {
                    for &q in grid.qs.iter().filter(|&&q| q >= 1.0 && q <= p) {
                        let r = p * q / (p + q);
                        for &n in &grid.levels {
                            out.push((base.with_p(p).with_q(q).with_r(r).with_nu(r / p).with_levels(n), k));
                        }
                    }
                }
            }
        }
        Cor218 => {
            for &k in &grid.n_ops {
                for &n in &grid.levels {
                    out.push((base.with_nu(0.5).with_p(2.0).with_q(2.0).with_r(1.0).with_levels(n), k));
                }
            }
        }
        Cor219 => {
            for &k in &grid.n_ops {
                out.push((base.with_p(2.0).with_r(1.0).with_levels(1), k));
            }
        }
    }
    out
}

fn theorem_index(theorem: TheoremId) -> u64 {
    TheoremId::ALL.iter().position(|&t| t == theorem).unwrap_or(0) as u64
}

/// The ensemble actually drawn for an operand that must be positive.
fn positive_kind(kind: EnsembleKind) -> EnsembleKind {
    if kind.is_psd() {
        kind
    } else {
        EnsembleKind::Psd
    }
}

fn run_trial(meta: &TrialMeta, params: &BoundParams, cfg: &SuiteConfig) -> Result<BoundReport> {
    use TheoremId::*;
    let (dim, n, kind) = (meta.dim, meta.n_ops, meta.ensemble);
    let draw = |j: usize, kind: EnsembleKind| gen_matrix(&EnsembleSpec::new(kind, dim, derive_seed(meta.seed, &[j as u64])));
    let psd = |j: usize| PsdMatrix::from_complex(draw(j, positive_kind(kind))?, &cfg.tol);
    let tuple = |k: EnsembleKind| -> Result<OperatorTuple> { OperatorTuple::new((0..n).map(|i| draw(i, k)).collect::<Result<Vec<_>>>()?) };
    let bcfg = BoundConfig {
        opt: cfg.opt.with_seed(meta.seed),
        samples: cfg.samples,
        resolution: DEFAULT_RESOLUTION,
        tol: cfg.tol,
    };
    match meta.theorem {
        Thm23 => bound_thm23(&psd(0)?, &psd(1)?, &draw(2, EnsembleKind::Ginibre)?, params, &bcfg),
        Thm25 => bound_thm25_heinz(&psd(0)?, &psd(1)?, &draw(2, EnsembleKind::Ginibre)?, params, &bcfg),
        Thm26 => {
            let triples = (0..n)
                .map(|i| Ok((draw(3 * i, EnsembleKind::Contraction)?, draw(3 * i + 1, kind)?, draw(3 * i + 2, EnsembleKind::Contraction)?)))
                .collect::<Result<Vec<(ComplexMatrix, ComplexMatrix, ComplexMatrix)>>>()?;
            bound_thm26(&SandwichTuple::new(triples)?, &PowerPair::new(params.nu)?, params, &bcfg)
        }
        Cor27 => {
            let pairs = (0..n)
                .map(|i| Ok((draw(2 * i, kind)?, draw(2 * i + 1, EnsembleKind::Contraction)?)))
                .collect::<Result<Vec<_>>>()?;
            bound_cor27(&pairs, params, &bcfg)
        }
        Cor28 => bound_cor28(&tuple(kind)?, params, &bcfg),
        Cor210 => bound_cor210(&draw(0, kind)?, &draw(1, kind)?, params, &bcfg),
        Thm211 => bound_thm211(&tuple(kind)?, params, &bcfg),
        Thm213 => bound_thm213(&tuple(kind)?, params, &bcfg),
        Cor215 => bound_cor215(&draw(0, kind)?, &draw(1, kind)?, params.p, &bcfg),
        Thm216 => bound_thm216(&tuple(kind)?, params, &bcfg),
        Cor218 => bound_cor218(&tuple(kind)?, params.levels, &bcfg),
        Cor219 => bound_cor219(&tuple(positive_kind(kind))?, &bcfg),
    }
}

fn run_theorems(cfg: &SuiteConfig, theorems: &[TheoremId]) -> Vec<TrialRecord> {
    let (lo, hi) = cfg.dims;
    let mut records = Vec::new();
    for &theorem in theorems {
        for (pi, (params, n_ops)) in grid_points(theorem, &cfg.grid).into_iter().enumerate() {
            for trial in 0..cfg.trials {
                let kind = cfg.kinds[trial % cfg.kinds.len()];
                let meta = TrialMeta {
                    theorem,
                    trial,
                    dim: lo + trial % (hi - lo + 1),
                    n_ops,
                    ensemble: if theorem == TheoremId::Cor219 { positive_kind(kind) } else { kind },
                    seed: derive_seed(cfg.seed, &[theorem_index(theorem), pi as u64, trial as u64]),
                };
                let start = Instant::now();
                let outcome = run_trial(&meta, &params, cfg);
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                records.push(TrialRecord::from_report(&meta, &params, outcome, wall_ms));
            }
        }
    }
    records
}

fn max_first_level(records: &[TrialRecord]) -> f64 {
    records
        .iter()
        .filter(|r| !r.is_error())
        .map(|r| r.first_level_deviation)
        .fold(0.0, f64::max)
}

/// Runs every theorem in `cfg.theorems` over its parameter points and trials.
/// Trial errors become records with status `error`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let records = run_theorems(cfg, &cfg.theorems);
    let mut evidence = BTreeMap::new();
    evidence.insert("max_first_level_deviation".to_string(), max_first_level(&records));
    Ok(SuiteReport::new("bounds", cfg, records, evidence))
}

/// Runs the theorems of `cfg.theorems` that have a baseline and summarizes
/// the gains `rhs_baseline − rhs_refined_est`.
pub fn compare_refinements(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let theorems: Vec<TheoremId> = cfg.theorems.iter().copied().filter(|t| COMPARABLE.contains(t)).collect();
    if theorems.is_empty() {
        return Err(RadError::domain("no theorem with a baseline was selected"));
    }
    let records = run_theorems(cfg, &theorems);
    let ok: Vec<&TrialRecord> = records.iter().filter(|r| !r.is_error()).collect();
    let negative = ok
        .iter()
        .filter(|r| r.refinement_gain < -1e-10 * r.norm_term.abs().max(1.0))
        .count();
    let single_level = ok
        .iter()
        .filter(|r| r.levels == Some(1) && SINGLE_LEVEL_REDUCTIONS.iter().any(|t| t.as_str() == r.theorem))
        .map(|r| r.refinement_gain.abs() / r.norm_term.abs().max(1.0))
        .fold(0.0, f64::max);
    let mut evidence = BTreeMap::new();
    evidence.insert("negative_gain_trials".to_string(), negative as f64);
    evidence.insert("single_level_max_gain".to_string(), single_level);
    evidence.insert("max_first_level_deviation".to_string(), max_first_level(&records));
    Ok(SuiteReport::new("compare", cfg, records, evidence))
}
