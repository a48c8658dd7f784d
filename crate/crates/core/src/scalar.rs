//! Multi-level refinement of the weighted arithmetic–geometric mean
//! inequality
//!
//! ```text
//! a^ν b^{1−ν} ≤ νa + (1−ν)b − S_N(ν),
//! S_N(ν) = Σ_{j=1..N} w_j(ν) · ( b^{(2^{j−1}−k_j)/2^j} a^{k_j/2^j}
//!                               − a^{(k_j+1)/2^j} b^{(2^{j−1}−k_j−1)/2^j} )²
//! ```
//!
//! with `r_j = ⌊2^j ν⌋`, `k_j = ⌊2^{j−1} ν⌋` and
//! `w_j(ν) = (−1)^{r_j} 2^{j−1} ν + (−1)^{r_j+1} ⌊(r_j+1)/2⌋ ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::error::{RadError, Result};

/// Largest admissible number of refinement levels.
pub const MAX_LEVELS: u32 = 32;

/// Weight `ν ∈ [0,1]` and number of levels `N ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementParams {
    pub nu: f64,
    pub levels: u32,
}

impl RefinementParams {
    pub fn new(nu: f64, levels: u32) -> Result<Self> {
        check_nu(nu)?;
        if levels == 0 || levels > MAX_LEVELS {
            return Err(RadError::domain(format!(
                "number of levels must satisfy 1 <= N <= {MAX_LEVELS}, got {levels}"
            )));
        }
        Ok(RefinementParams { nu, levels })
    }
}

/// Floor indices and weight of one refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelIndices {
    pub j: u32,
    pub r: u64,
    pub k: u64,
    pub weight: f64,
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(RadError::domain(format!("weight must satisfy 0 <= nu <= 1, got {nu}")));
    }
    Ok(())
}

/// `⌊x⌋`, snapping to the nearest integer when `x` is within `1e-12` of it.
fn snapped_floor(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-12 * x.abs().max(1.0) {
        nearest as u64
    } else {
        x.floor() as u64
    }
}

pub fn level_indices(j: u32, nu: f64) -> Result<LevelIndices> {
    check_nu(nu)?;
    if j == 0 || j > MAX_LEVELS {
        return Err(RadError::domain(format!("level must satisfy 1 <= j <= {MAX_LEVELS}, got {j}")));
    }
    let half_scale = (1u64 << (j - 1)) as f64;
    let r = snapped_floor(2.0 * half_scale * nu);
    let k = snapped_floor(half_scale * nu);
    Ok(LevelIndices {
        j,
        r,
        k,
        weight: level_weight(r, half_scale * nu),
    })
}

/// `(−1)^r · scaled + (−1)^{r+1} ⌊(r+1)/2⌋`.
fn level_weight(r: u64, scaled: f64) -> f64 {
    let half = r.div_ceil(2) as f64;
    if r.is_multiple_of(2) {
        scaled - half
    } else {
        half - scaled
    }
}

/// The squared bracket of level `j` with floor index `k`, for `a, b ≥ 0`.
pub(crate) fn level_bracket(j: u32, k: u64, a: f64, b: f64) -> f64 {
    let denom = (1u64 << j) as f64;
    let half = (1u64 << (j - 1)) as f64;
    let k = k as f64;
    let first = pow0(b, (half - k) / denom) * pow0(a, k / denom);
    let second = pow0(a, (k + 1.0) / denom) * pow0(b, (half - k - 1.0) / denom);
    let d = first - second;
    d * d
}

/// `t^s` on `t ≥ 0` with `0^0 = 1`; tiny negative inputs count as zero.
#[inline]
pub(crate) fn pow0(t: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if t <= 0.0 {
        0.0
    } else {
        t.powf(s)
    }
}

/// `S_N(ν)` for `a, b ≥ 0`; levels with zero weight are skipped.
pub(crate) fn refinement_sum(nu: f64, levels: u32, a: f64, b: f64) -> f64 {
    let (a, b) = (a.max(0.0), b.max(0.0));
    let mut total = 0.0;
    for j in 1..=levels {
        let idx = level_indices(j, nu).expect("validated parameters");
        if idx.weight <= 0.0 {
            continue;
        }
        total += idx.weight * level_bracket(j, idx.k, a, b);
    }
    total
}

/// `½ Σ_{j≤N}` of the level brackets taken at `ν = ½` with unit weights,
/// i.e. the form where every level carries weight one half.
pub(crate) fn uniform_half_sum(levels: u32, a: f64, b: f64) -> f64 {
    let (a, b) = (a.max(0.0), b.max(0.0));
    let mut total = 0.0;
    for j in 1..=levels {
        let idx = level_indices(j, 0.5).expect("validated parameters");
        total += level_bracket(j, idx.k, a, b);
    }
    0.5 * total
}

/// Level sum whose weight lacks the `ν` factor:
/// `(−1)^{r_j} 2^{j−1} + (−1)^{r_j+1} ⌊(r_j+1)/2⌋`, floor indices at `ν`.
/// These weights can be negative.
pub(crate) fn unscaled_weight_sum(nu: f64, levels: u32, a: f64, b: f64) -> f64 {
    let (a, b) = (a.max(0.0), b.max(0.0));
    let mut total = 0.0;
    for j in 1..=levels {
        let idx = level_indices(j, nu).expect("validated parameters");
        let weight = level_weight(idx.r, (1u64 << (j - 1)) as f64);
        if weight == 0.0 {
            continue;
        }
        total += weight * level_bracket(j, idx.k, a, b);
    }
    total
}

fn check_positive(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(RadError::domain(format!("scalars must be positive, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// `S_N(ν)` evaluated at positive scalars.
pub fn refinement_s(a: f64, b: f64, params: &RefinementParams) -> Result<f64> {
    check_positive(a, b)?;
    Ok(refinement_sum(params.nu, params.levels, a, b))
}

/// `νa + (1−ν)b − S_N(ν) − a^ν b^{1−ν}`; nonnegative for every admissible input.
pub fn young_refined_gap(a: f64, b: f64, params: &RefinementParams) -> Result<f64> {
    let s = refinement_s(a, b, params)?;
    let nu = params.nu;
    Ok(nu * a + (1.0 - nu) * b - s - pow0(a, nu) * pow0(b, 1.0 - nu))
}

/// `(νa^r + (1−ν)b^r)^{1/r}` for `r ≥ 1`.
pub fn power_mean_rhs(a: f64, b: f64, nu: f64, r: f64) -> Result<f64> {
    check_positive(a, b)?;
    check_nu(nu)?;
    if !(r >= 1.0) {
        return Err(RadError::domain(format!("power-mean exponent must satisfy r >= 1, got {r}")));
    }
    if r == 1.0 {
        return Ok(nu * a + (1.0 - nu) * b);
    }
    Ok((nu * a.powf(r) + (1.0 - nu) * b.powf(r)).powf(1.0 / r))
}
