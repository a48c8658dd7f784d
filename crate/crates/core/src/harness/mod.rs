//! Random ensembles, parameter grids, suite execution and aggregate reports.

mod lemmas;
mod suite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundParams, BoundReport, Status, TheoremId};
use crate::error::{RadError, Result};
use crate::linalg::{op_norm, ComplexMatrix};
use crate::radius::SphereOptConfig;
use crate::rng::{complex_gaussian, stream_rng};
use crate::tolerance::ToleranceConfig;

pub use lemmas::{lemma_suite, LEMMA_IDS};
pub use suite::{compare_refinements, grid_points, run_suite, COMPARABLE};

/// Version tag written into every report.
pub const FORMAT_VERSION: &str = "1";

/// Random matrix families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Ginibre,
    Hermitian,
    Psd,
    PositiveDefinite,
    Unitary,
    Normal,
    Nilpotent,
    Diagonal,
    Contraction,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 9] = [
        EnsembleKind::Ginibre,
        EnsembleKind::Hermitian,
        EnsembleKind::Psd,
        EnsembleKind::PositiveDefinite,
        EnsembleKind::Unitary,
        EnsembleKind::Normal,
        EnsembleKind::Nilpotent,
        EnsembleKind::Diagonal,
        EnsembleKind::Contraction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Ginibre => "ginibre",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::Psd => "psd",
            EnsembleKind::PositiveDefinite => "positive_definite",
            EnsembleKind::Unitary => "unitary",
            EnsembleKind::Normal => "normal",
            EnsembleKind::Nilpotent => "nilpotent",
            EnsembleKind::Diagonal => "diagonal",
            EnsembleKind::Contraction => "contraction",
        }
    }

    /// Whether every sample is positive semidefinite.
    pub fn is_psd(self) -> bool {
        matches!(self, EnsembleKind::Psd | EnsembleKind::PositiveDefinite)
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = RadError;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| RadError::domain(format!("unknown ensemble kind '{s}'")))
    }
}

/// One draw from an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub scale: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        EnsembleSpec {
            kind,
            dim,
            scale: 1.0,
            seed,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

fn gaussian(dim: usize, rng: &mut impl rand::Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Draws a matrix; deterministic in `spec.seed`.
pub fn gen_matrix(spec: &EnsembleSpec) -> Result<ComplexMatrix> {
    let cap = ToleranceConfig::default().dim_cap;
    if spec.dim == 0 || spec.dim > cap {
        return Err(RadError::domain(format!("dimension must be in 1..={cap}, got {}", spec.dim)));
    }
    if !(spec.scale > 0.0 && spec.scale.is_finite()) {
        return Err(RadError::domain(format!("scale must be positive, got {}", spec.scale)));
    }
    let n = spec.dim;
    let mut rng = stream_rng(spec.seed, 0);
    let g = gaussian(n, &mut rng);
    let m = match spec.kind {
        EnsembleKind::Ginibre => g,
        EnsembleKind::Hermitian => (&g + g.adjoint()) * Complex64::new(0.5, 0.0),
        EnsembleKind::Psd => g.adjoint() * &g / Complex64::new(n as f64, 0.0),
        EnsembleKind::PositiveDefinite => {
            (g.adjoint() * &g + DMatrix::identity(n, n)) / Complex64::new(n as f64, 0.0)
        }
        EnsembleKind::Unitary => {
            let qr = g.qr();
            let r = qr.r();
            let mut q = qr.q();
            for j in 0..n {
                let d = r[(j, j)];
                let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
                for i in 0..n {
                    q[(i, j)] *= phase;
                }
            }
            q
        }
        EnsembleKind::Normal => {
            let u = gen_matrix(&EnsembleSpec::new(EnsembleKind::Unitary, n, spec.seed ^ 0x5eed))?.into_dmatrix();
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| complex_gaussian(&mut rng)));
            &u * d * u.adjoint()
        }
        EnsembleKind::Nilpotent => DMatrix::from_fn(n, n, |i, j| if j > i { g[(i, j)] } else { Complex64::new(0.0, 0.0) }),
        EnsembleKind::Diagonal => DMatrix::from_fn(n, n, |i, j| if i == j { g[(i, j)] } else { Complex64::new(0.0, 0.0) }),
        EnsembleKind::Contraction => {
            let norm = op_norm(&ComplexMatrix::from_dmatrix(g.clone())?)?;
            if norm > 0.0 {
                g / Complex64::new(norm, 0.0)
            } else {
                g
            }
        }
    };
    ComplexMatrix::from_dmatrix(m * Complex64::new(spec.scale, 0.0))
}

/// Value lists expanded per theorem into parameter points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub nus: Vec<f64>,
    pub ps: Vec<f64>,
    pub qs: Vec<f64>,
    pub rs: Vec<f64>,
    pub levels: Vec<u32>,
    pub n_ops: Vec<usize>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        ParamGrid {
            nus: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            ps: vec![1.0, 2.0, 3.0],
            qs: vec![2.0, 3.0],
            rs: vec![1.0, 2.0],
            levels: vec![1, 2, 3],
            n_ops: vec![2],
        }
    }
}

/// Suite settings. `trials` counts trials per parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub theorems: Vec<TheoremId>,
    pub trials: usize,
    pub dims: (usize, usize),
    pub kinds: Vec<EnsembleKind>,
    pub grid: ParamGrid,
    pub opt: SphereOptConfig,
    pub samples: usize,
    pub tol: ToleranceConfig,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            theorems: TheoremId::ALL.to_vec(),
            trials: 50,
            dims: (2, 6),
            kinds: vec![
                EnsembleKind::Ginibre,
                EnsembleKind::Nilpotent,
                EnsembleKind::Normal,
                EnsembleKind::Hermitian,
                EnsembleKind::Contraction,
                EnsembleKind::Unitary,
                EnsembleKind::Diagonal,
                EnsembleKind::Psd,
                EnsembleKind::PositiveDefinite,
            ],
            grid: ParamGrid::default(),
            opt: SphereOptConfig {
                restarts: 4,
                max_iters: 150,
                step_tol: 1e-10,
                seed: 0,
            },
            samples: 256,
            tol: ToleranceConfig::default(),
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.nus.is_empty() || g.ps.is_empty() || g.qs.is_empty() || g.rs.is_empty() || g.levels.is_empty() || g.n_ops.is_empty() {
            return Err(RadError::domain("parameter grids must be nonempty"));
        }
        if self.kinds.is_empty() {
            return Err(RadError::domain("at least one ensemble kind is required"));
        }
        let (lo, hi) = self.dims;
        if lo == 0 || lo > hi || hi > self.tol.dim_cap {
            return Err(RadError::domain(format!(
                "dimension range must satisfy 1 ≤ lo ≤ hi ≤ {}, got {lo}:{hi}",
                self.tol.dim_cap
            )));
        }
        if g.n_ops.contains(&0) {
            return Err(RadError::domain("tuple sizes must be at least 1"));
        }
        Ok(())
    }
}

/// One row of a suite report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub theorem: String,
    pub trial: usize,
    pub dim: usize,
    pub ensemble: String,
    pub nu_or_alpha: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub levels: Option<u32>,
    pub n_ops: usize,
    pub lhs_lower: f64,
    pub norm_term: f64,
    pub refinement_upper: f64,
    pub rhs_refined_est: f64,
    pub rhs_baseline: f64,
    pub refinement_gain: f64,
    pub pointwise_violations: usize,
    pub dominance_violations: usize,
    pub first_level_deviation: f64,
    pub status: String,
    pub error: Option<String>,
    pub seed: u64,
    pub wall_ms: f64,
}

/// Identifies one bound trial.
pub(crate) struct TrialMeta {
    pub theorem: TheoremId,
    pub trial: usize,
    pub dim: usize,
    pub n_ops: usize,
    pub ensemble: EnsembleKind,
    pub seed: u64,
}

/// Status label for trials that raised an error.
pub const ERROR_STATUS: &str = "error";

impl TrialRecord {
    pub(crate) fn from_report(meta: &TrialMeta, params: &BoundParams, outcome: Result<BoundReport>, wall_ms: f64) -> Self {
        let mask = ParamMask::of(meta.theorem);
        let mut rec = TrialRecord {
            theorem: meta.theorem.as_str().to_string(),
            trial: meta.trial,
            dim: meta.dim,
            ensemble: meta.ensemble.to_string(),
            nu_or_alpha: None,
            p: None,
            q: None,
            r: None,
            levels: None,
            n_ops: meta.n_ops,
            lhs_lower: f64::NAN,
            norm_term: f64::NAN,
            refinement_upper: f64::NAN,
            rhs_refined_est: f64::NAN,
            rhs_baseline: f64::NAN,
            refinement_gain: f64::NAN,
            pointwise_violations: 0,
            dominance_violations: 0,
            first_level_deviation: f64::NAN,
            status: ERROR_STATUS.to_string(),
            error: None,
            seed: meta.seed,
            wall_ms,
        };
        let shown = match &outcome {
            Ok(rep) => rep.params,
            Err(_) => *params,
        };
        rec.nu_or_alpha = mask.nu.then_some(shown.nu);
        rec.p = mask.p.then_some(shown.p);
        rec.q = if mask.q { shown.q } else { None };
        rec.r = mask.r.then_some(shown.r);
        rec.levels = mask.levels.then_some(shown.levels);
        match outcome {
            Ok(rep) => {
                rec.lhs_lower = rep.lhs_lower;
                rec.norm_term = rep.norm_term;
                rec.refinement_upper = rep.refinement_upper;
                rec.rhs_refined_est = rep.rhs_refined_est;
                rec.rhs_baseline = rep.rhs_baseline;
                rec.refinement_gain = rep.refinement_gain;
                rec.pointwise_violations = rep.pointwise_violations;
                rec.dominance_violations = rep.dominance_violations;
                rec.first_level_deviation = rep.first_level_deviation;
                rec.status = rep.status.as_str().to_string();
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    }

    pub fn is_error(&self) -> bool {
        self.status == ERROR_STATUS
    }

    pub fn is_certified_violation(&self) -> bool {
        self.status == Status::CertifiedViolation.as_str()
    }
}

/// Which parameters a theorem actually reads.
struct ParamMask {
    nu: bool,
    p: bool,
    q: bool,
    r: bool,
    levels: bool,
}

impl ParamMask {
    fn of(theorem: TheoremId) -> Self {
        use TheoremId::*;
        let all = ParamMask {
            nu: true,
            p: true,
            q: false,
            r: true,
            levels: true,
        };
        match theorem {
            Thm23 | Thm25 => ParamMask { p: false, ..all },
            Thm26 | Cor27 | Cor28 | Cor210 => all,
            Thm211 | Thm213 | Cor215 => ParamMask { r: false, ..all },
            Thm216 | Cor218 => ParamMask { q: true, ..all },
            Cor219 => ParamMask {
                nu: false,
                p: true,
                q: false,
                r: false,
                levels: false,
            },
        }
    }
}

/// Per-theorem summary, a pure fold over the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremAggregate {
    pub theorem: String,
    pub trials: usize,
    pub errors: usize,
    pub pointwise_violations: usize,
    pub dominance_violations: usize,
    pub status_counts: BTreeMap<String, usize>,
    pub min_gain: Option<f64>,
    pub mean_gain: Option<f64>,
    pub max_gain: Option<f64>,
    /// Smallest `rhs_refined_est − lhs_lower`.
    pub min_gap: Option<f64>,
    pub mean_gap: Option<f64>,
}

/// Aggregates in order of first appearance of each theorem label.
pub fn aggregate(records: &[TrialRecord]) -> Vec<TheoremAggregate> {
    let mut order: Vec<String> = Vec::new();
    for r in records {
        if !order.contains(&r.theorem) {
            order.push(r.theorem.clone());
        }
    }
    order
        .into_iter()
        .map(|theorem| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.theorem == theorem).collect();
            let mut status_counts = BTreeMap::new();
            for r in &rows {
                *status_counts.entry(r.status.clone()).or_insert(0) += 1;
            }
            let ok: Vec<&&TrialRecord> = rows.iter().filter(|r| !r.is_error()).collect();
            let gains: Vec<f64> = ok.iter().map(|r| r.refinement_gain).collect();
            let gaps: Vec<f64> = ok.iter().map(|r| r.rhs_refined_est - r.lhs_lower).collect();
            TheoremAggregate {
                theorem,
                trials: rows.len(),
                errors: rows.len() - ok.len(),
                pointwise_violations: rows.iter().map(|r| r.pointwise_violations).sum(),
                dominance_violations: rows.iter().map(|r| r.dominance_violations).sum(),
                status_counts,
                min_gain: fold_min(&gains),
                mean_gain: mean(&gains),
                max_gain: gains.iter().copied().reduce(f64::max),
                min_gap: fold_min(&gaps),
                mean_gap: mean(&gaps),
            }
        })
        .collect()
}

fn fold_min(v: &[f64]) -> Option<f64> {
    v.iter().copied().reduce(f64::min)
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// A suite run: config echo, records, aggregates and side evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub format_version: String,
    pub suite: String,
    pub config: SuiteConfig,
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<TheoremAggregate>,
    /// Counts and extremes for readings that are reported, not asserted.
    pub evidence: BTreeMap<String, f64>,
}

impl SuiteReport {
    pub(crate) fn new(suite: &str, config: &SuiteConfig, records: Vec<TrialRecord>, evidence: BTreeMap<String, f64>) -> Self {
        SuiteReport {
            format_version: FORMAT_VERSION.to_string(),
            suite: suite.to_string(),
            config: config.clone(),
            aggregates: aggregate(&records),
            records,
            evidence,
        }
    }

    pub fn pointwise_violations(&self) -> usize {
        self.records.iter().map(|r| r.pointwise_violations).sum()
    }

    pub fn dominance_violations(&self) -> usize {
        self.records.iter().map(|r| r.dominance_violations).sum()
    }

    pub fn certified_violations(&self) -> usize {
        self.records.iter().filter(|r| r.is_certified_violation()).count()
    }

    pub fn errors(&self) -> usize {
        self.records.iter().filter(|r| r.is_error()).count()
    }

    /// True when no record shows a violation or an error.
    pub fn is_clean(&self) -> bool {
        self.pointwise_violations() == 0 && self.certified_violations() == 0 && self.errors() == 0
    }

    /// Copy with every wall-time field zeroed, for byte comparisons.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.records {
            r.wall_ms = 0.0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PsdMatrix;

    #[test]
    fn generation_is_deterministic() {
        for kind in EnsembleKind::ALL {
            let spec = EnsembleSpec::new(kind, 4, 11);
            assert_eq!(gen_matrix(&spec).unwrap(), gen_matrix(&spec).unwrap(), "{kind}");
        }
        let a = gen_matrix(&EnsembleSpec::new(EnsembleKind::Ginibre, 3, 1)).unwrap();
        let b = gen_matrix(&EnsembleSpec::new(EnsembleKind::Ginibre, 3, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn kind_contracts() {
        let tol = ToleranceConfig::default();
        for seed in 0..5 {
            let n = 2 + seed as usize;
            let psd = gen_matrix(&EnsembleSpec::new(EnsembleKind::Psd, n, seed)).unwrap();
            assert!(PsdMatrix::from_complex(psd, &tol).is_ok());
            let pd = gen_matrix(&EnsembleSpec::new(EnsembleKind::PositiveDefinite, n, seed)).unwrap();
            let pd = PsdMatrix::from_complex(pd, &tol).unwrap();
            assert!(pd.eigen().values[0] >= 1.0 / n as f64 - 1e-12);

            let h = gen_matrix(&EnsembleSpec::new(EnsembleKind::Hermitian, n, seed)).unwrap();
            assert!(h.sub(&h.adjoint()).max_abs() < 1e-15);

            let u = gen_matrix(&EnsembleSpec::new(EnsembleKind::Unitary, n, seed)).unwrap();
            assert!(u.adjoint().mul(&u).sub(&ComplexMatrix::identity(n)).max_abs() < 1e-12);

            let nm = gen_matrix(&EnsembleSpec::new(EnsembleKind::Normal, n, seed)).unwrap();
            let comm = nm.adjoint().mul(&nm).sub(&nm.mul(&nm.adjoint()));
            assert!(comm.max_abs() < 1e-10);

            let c = gen_matrix(&EnsembleSpec::new(EnsembleKind::Contraction, n, seed)).unwrap();
            assert!(op_norm(&c).unwrap() <= 1.0 + 1e-12);

            let d = gen_matrix(&EnsembleSpec::new(EnsembleKind::Diagonal, n, seed)).unwrap();
            let nl = gen_matrix(&EnsembleSpec::new(EnsembleKind::Nilpotent, n, seed)).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert_eq!(d.get(i, j), Complex64::new(0.0, 0.0));
                    }
                    if j <= i {
                        assert_eq!(nl.get(i, j), Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn nilpotent_two_by_two_shape() {
        let m = gen_matrix(&EnsembleSpec::new(EnsembleKind::Nilpotent, 2, 3)).unwrap();
        assert_eq!(m.get(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(m.get(1, 0), Complex64::new(0.0, 0.0));
        assert_eq!(m.get(1, 1), Complex64::new(0.0, 0.0));
        assert_ne!(m.get(0, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn scale_and_domain() {
        let base = EnsembleSpec::new(EnsembleKind::Ginibre, 3, 9);
        let a = gen_matrix(&base).unwrap();
        let b = gen_matrix(&base.with_scale(2.5)).unwrap();
        assert!(b.sub(&a.scale_real(2.5)).max_abs() < 1e-14);
        assert!(gen_matrix(&base.with_scale(0.0)).is_err());
        assert!(gen_matrix(&EnsembleSpec::new(EnsembleKind::Psd, 0, 0)).is_err());
        assert!(gen_matrix(&EnsembleSpec::new(EnsembleKind::Psd, 65, 0)).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in EnsembleKind::ALL {
            assert_eq!(kind.as_str().parse::<EnsembleKind>().unwrap(), kind);
        }
        assert_eq!("positive-definite".parse::<EnsembleKind>().unwrap(), EnsembleKind::PositiveDefinite);
        assert!("gaussian".parse::<EnsembleKind>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let mut c = SuiteConfig::default();
        c.grid.levels.clear();
        assert!(c.validate().is_err());
        let c = SuiteConfig {
            dims: (4, 3),
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
