//! Refined numerical-radius bounds as executable checks.
//!
//! Every bound produces a [`BoundReport`] that pairs a certified,
//! un-subtracted right-hand side with an estimated refinement. The refinement
//! is an infimum over unit vectors, so its estimate (a minimum over a finite
//! candidate set) is an upper bound of the true infimum, and the refined
//! right-hand side is correspondingly under-estimated.
//!
//! Alongside the report each bound walks its per-vector proof chain on a
//! shared sample of unit vectors. Those checks do not depend on optimizer
//! quality.

mod baseline;
mod dispatch;
mod engine;
mod product;
mod sandwich;
mod weighted;
mod young;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{RadError, Result};
use crate::linalg::{spectral_pow, ComplexMatrix, UnitVector};
use crate::radius::{SphereOptConfig, DEFAULT_RESOLUTION};
use crate::scalar::{check_nu, MAX_LEVELS};
use crate::tolerance::ToleranceConfig;

pub use baseline::{baseline_rhs, Baseline, BaselineOperands};
pub use dispatch::{evaluate, operand_shape};
pub use product::{bound_cor218, bound_cor219, bound_thm216, lambda_thm216};
pub use sandwich::{bound_cor210, bound_cor27, bound_cor28, bound_thm26, eta_thm26};
pub use weighted::{bound_cor215, bound_thm211, bound_thm213, cartesian_check, eta_thm211, eta_thm213, CartesianCheck};
pub use young::{bound_thm23, bound_thm25_heinz, eta_thm23, zeta_thm25};

/// Identifier of an executable bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TheoremId {
    Thm23,
    Thm25,
    Thm26,
    Cor27,
    Cor28,
    Cor210,
    Thm211,
    Thm213,
    Cor215,
    Thm216,
    Cor218,
    Cor219,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::Thm23,
        TheoremId::Thm25,
        TheoremId::Thm26,
        TheoremId::Cor27,
        TheoremId::Cor28,
        TheoremId::Cor210,
        TheoremId::Thm211,
        TheoremId::Thm213,
        TheoremId::Cor215,
        TheoremId::Thm216,
        TheoremId::Cor218,
        TheoremId::Cor219,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm23 => "thm2.3",
            TheoremId::Thm25 => "thm2.5",
            TheoremId::Thm26 => "thm2.6",
            TheoremId::Cor27 => "cor2.7",
            TheoremId::Cor28 => "cor2.8",
            TheoremId::Cor210 => "cor2.10",
            TheoremId::Thm211 => "thm2.11",
            TheoremId::Thm213 => "thm2.13",
            TheoremId::Cor215 => "cor2.15",
            TheoremId::Thm216 => "thm2.16",
            TheoremId::Cor218 => "cor2.18",
            TheoremId::Cor219 => "cor2.19",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = RadError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| RadError::domain(format!("unknown theorem id '{s}'")))
    }
}

impl From<TheoremId> for String {
    fn from(t: TheoremId) -> String {
        t.as_str().to_string()
    }
}

impl TryFrom<String> for TheoremId {
    type Error = RadError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Verdict of a single bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// Consistent, no pointwise failure, and nothing was subtracted, so the
    /// refined bound coincides with the certified one.
    #[serde(rename = "verified-pointwise")]
    VerifiedPointwise,
    /// `lhs_lower ≤ rhs_refined_est`.
    #[serde(rename = "consistent")]
    Consistent,
    /// `lhs_lower` exceeds the refined estimate but not the certified bound.
    #[serde(rename = "inconclusive")]
    Inconclusive,
    /// `lhs_lower` exceeds the certified, un-subtracted bound.
    #[serde(rename = "certified-violation")]
    CertifiedViolation,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::VerifiedPointwise => "verified-pointwise",
            Status::Consistent => "consistent",
            Status::Inconclusive => "inconclusive",
            Status::CertifiedViolation => "certified-violation",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exponents and refinement depth shared by all bounds. `nu` doubles as the
/// `α` of the power-function pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub nu: f64,
    pub p: f64,
    pub q: Option<f64>,
    pub r: f64,
    pub levels: u32,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            nu: 0.5,
            p: 2.0,
            q: None,
            r: 2.0,
            levels: 1,
        }
    }
}

impl BoundParams {
    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_levels(mut self, levels: u32) -> Self {
        self.levels = levels;
        self
    }

    pub(crate) fn check_common(&self) -> Result<()> {
        check_nu(self.nu)?;
        if self.levels == 0 || self.levels > MAX_LEVELS {
            return Err(RadError::domain(format!(
                "number of levels must satisfy 1 <= N <= {MAX_LEVELS}, got {}",
                self.levels
            )));
        }
        Ok(())
    }

    pub(crate) fn require_p_at_least(&self, min: f64) -> Result<()> {
        if !(self.p >= min) || !self.p.is_finite() {
            return Err(RadError::domain(format!("exponent must satisfy p ≥ {min}, got p = {}", self.p)));
        }
        Ok(())
    }

    pub(crate) fn require_r_at_least(&self, min: f64) -> Result<()> {
        if !(self.r >= min) || !self.r.is_finite() {
            return Err(RadError::domain(format!("exponent must satisfy r ≥ {min}, got r = {}", self.r)));
        }
        Ok(())
    }
}

/// Settings for a single bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConfig {
    pub opt: SphereOptConfig,
    /// Size of the shared pointwise sample.
    pub samples: usize,
    /// Phase-grid resolution for numerical radii.
    pub resolution: usize,
    pub tol: ToleranceConfig,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            opt: SphereOptConfig::default(),
            samples: 256,
            resolution: DEFAULT_RESOLUTION,
            tol: ToleranceConfig::default(),
        }
    }
}

impl BoundConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.opt.seed = seed;
        self
    }
}

/// Result of one bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub dim: usize,
    pub n_ops: usize,
    pub params: BoundParams,
    /// Lower bound of the true left-hand side.
    pub lhs_lower: f64,
    /// The certified bound without any subtracted term.
    pub norm_term: f64,
    /// Upper bound of the subtracted refinement, in right-hand-side units.
    pub refinement_upper: f64,
    /// `norm_term − refinement_upper`.
    pub rhs_refined_est: f64,
    /// Right-hand side of the unrefined inequality on the same samples.
    pub rhs_baseline: f64,
    /// `rhs_baseline − rhs_refined_est`.
    pub refinement_gain: f64,
    pub status: Status,
    pub pointwise_samples: usize,
    pub pointwise_violations: usize,
    /// Samples where the refined functional falls below the baseline one.
    pub dominance_violations: usize,
    /// Largest sample-wise deviation between the one-level refined
    /// functional and the closed first-level form.
    pub first_level_deviation: f64,
    pub lhs_witness: Option<UnitVector>,
    pub lhs_second_witness: Option<UnitVector>,
    pub inf_witness: Option<UnitVector>,
    pub inf_second_witness: Option<UnitVector>,
    /// Alternative forms of the subtracted functionals, computed on the same
    /// samples and reported as evidence.
    pub variants: BTreeMap<String, f64>,
}

impl BoundReport {
    /// Scale-aware slack used for the status verdict.
    fn verdict(lhs: f64, norm_term: f64, refined: f64, refinement_upper: f64, violations: usize, tol: &ToleranceConfig) -> Status {
        if !ToleranceConfig::holds(lhs, norm_term, tol.certified_slack) {
            Status::CertifiedViolation
        } else if !ToleranceConfig::holds(lhs, refined, tol.pointwise_slack) {
            Status::Inconclusive
        } else if violations == 0 && refinement_upper <= tol.pointwise_slack * norm_term.abs().max(1.0) {
            Status::VerifiedPointwise
        } else {
            Status::Consistent
        }
    }
}

/// Real pair `(f, g)` with `f(t) g(t) = t` on `[0, ∞)`.
pub trait FunctionPair {
    fn f(&self, t: f64) -> f64;
    fn g(&self, t: f64) -> f64;

    /// `α` when the pair is `(t^α, t^{1−α})`.
    fn power(&self) -> Option<f64> {
        None
    }
}

/// `f(t) = t^α`, `g(t) = t^{1−α}` with `0 ≤ α ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPair {
    alpha: f64,
}

impl PowerPair {
    pub fn new(alpha: f64) -> Result<Self> {
        check_nu(alpha)?;
        Ok(PowerPair { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl FunctionPair for PowerPair {
    fn f(&self, t: f64) -> f64 {
        spectral_pow(t, self.alpha)
    }

    fn g(&self, t: f64) -> f64 {
        spectral_pow(t, 1.0 - self.alpha)
    }

    fn power(&self) -> Option<f64> {
        Some(self.alpha)
    }
}

/// Arbitrary pair given by closures; checked against `f(t) g(t) = t` on the
/// operand spectra before use.
pub struct CustomPair<F, G> {
    pub f: F,
    pub g: G,
}

impl<F: Fn(f64) -> f64, G: Fn(f64) -> f64> FunctionPair for CustomPair<F, G> {
    fn f(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn g(&self, t: f64) -> f64 {
        (self.g)(t)
    }
}

/// Operand triples `(A_i, T_i, B_i)` of a sandwiched tuple `A_i* T_i B_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichTuple {
    triples: Vec<(ComplexMatrix, ComplexMatrix, ComplexMatrix)>,
}

impl SandwichTuple {
    pub fn new(triples: Vec<(ComplexMatrix, ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        let first = triples
            .first()
            .ok_or_else(|| RadError::domain("sandwich tuple must contain at least one triple"))?;
        let reference = first.1.clone();
        for (a, t, b) in &triples {
            reference.dim_check(a)?;
            reference.dim_check(t)?;
            reference.dim_check(b)?;
        }
        Ok(SandwichTuple { triples })
    }

    pub fn triples(&self) -> &[(ComplexMatrix, ComplexMatrix, ComplexMatrix)] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.triples[0].1.dim()
    }

    /// The operators `A_i* T_i B_i`.
    pub fn products(&self) -> Vec<ComplexMatrix> {
        self.triples
            .iter()
            .map(|(a, t, b)| a.adjoint().mul(t).mul(b))
            .collect()
    }
}
