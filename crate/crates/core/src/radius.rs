//! Radius functionals: the numerical radius `w(T)`, the generalized radius
//! `w_p(T_1, …, T_n)` and the Euclidean radius `w_e = w_2`, plus the sphere
//! optimizers that realize every `sup`/`inf` over unit vectors.
//!
//! Each estimate is labelled with the side of the true value it lies on:
//! a supremum evaluated at a feasible point is a lower bound, an infimum
//! evaluated at a feasible point is an upper bound.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{RadError, Result};
use crate::linalg::{euclid, hermitian_eigen, quad, ComplexMatrix, UnitVector};
use crate::rng::{random_unit, stream_rng};

/// Ordered list of same-dimension operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTuple(Vec<ComplexMatrix>);

impl OperatorTuple {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| RadError::domain("operator tuple must contain at least one operator"))?;
        for op in &ops[1..] {
            first.dim_check(op)?;
        }
        Ok(OperatorTuple(ops))
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0[0].dim()
    }
}

/// Multi-start projected descent settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereOptConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for SphereOptConfig {
    fn default() -> Self {
        SphereOptConfig {
            restarts: 64,
            max_iters: 500,
            step_tol: 1e-10,
            seed: 0,
        }
    }
}

impl SphereOptConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSide {
    #[serde(rename = "lower-of-sup")]
    LowerOfSup,
    #[serde(rename = "upper-of-inf")]
    UpperOfInf,
}

impl BoundSide {
    pub fn label(self) -> &'static str {
        match self {
            BoundSide::LowerOfSup => "lower-of-sup",
            BoundSide::UpperOfInf => "upper-of-inf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub witness: UnitVector,
    pub second_witness: Option<UnitVector>,
    pub converged: bool,
    pub bound_side: BoundSide,
}

/// Default number of phase-grid points for [`numerical_radius`].
pub const DEFAULT_RESOLUTION: usize = 720;

/// `w(T) = max_θ λ_max(Re(e^{iθ} T))`.
///
/// A uniform phase grid locates the global maximum; golden-section search
/// then refines inside the brackets of the three best grid points. The
/// returned value is `|⟨Tx, x⟩|` at the top eigenvector of the best phase,
/// which is at least `λ_max` there.
pub fn numerical_radius(t: &ComplexMatrix, resolution: usize) -> Result<RadiusEstimate> {
    if resolution < 3 {
        return Err(RadError::domain(format!("phase grid needs at least 3 points, got {resolution}")));
    }
    let re = t.hermitian_part();
    let im = t.skew_part();
    let curve = |theta: f64| -> Result<f64> {
        let m = re.as_dmatrix() * Complex64::new(theta.cos(), 0.0) - im.as_dmatrix() * Complex64::new(theta.sin(), 0.0);
        top_eigenvalue(m)
    };

    let step = TAU / resolution as f64;
    let grid: Vec<f64> = (0..resolution)
        .map(|k| curve(k as f64 * step))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..resolution).collect();
    order.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]).then(a.cmp(&b)));

    let mut best_theta = order[0] as f64 * step;
    let mut best_val = grid[order[0]];
    for &k in order.iter().take(3) {
        let center = k as f64 * step;
        let (theta, val) = golden_max(&curve, center - step, center + step)?;
        if val > best_val {
            best_val = val;
            best_theta = theta;
        }
    }

    let m = t.rotated_real_part(best_theta);
    let eig = hermitian_eigen(&m)?;
    let witness = eig.vector(eig.values.len() - 1);
    let value = quad(t.as_dmatrix(), witness.as_slice()).norm();
    Ok(RadiusEstimate {
        value,
        witness,
        second_witness: None,
        converged: true,
        bound_side: BoundSide::LowerOfSup,
    })
}

fn top_eigenvalue(m: DMatrix<Complex64>) -> Result<f64> {
    let n = m.nrows();
    let vals = m.symmetric_eigenvalues();
    let top = vals.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !top.is_finite() {
        return Err(RadError::EigenFailure { dim: n });
    }
    Ok(top)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn golden_max(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > 1e-13 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// `w_p(T_1, …, T_n) = sup_{‖x‖=1} (Σ |⟨T_i x, x⟩|^p)^{1/p}`, estimated from below.
pub fn wp_radius(tuple: &OperatorTuple, p: f64, cfg: &SphereOptConfig) -> Result<RadiusEstimate> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(RadError::domain(format!("exponent must satisfy p >= 1, got {p}")));
    }
    let mats: Vec<&DMatrix<Complex64>> = tuple.ops().iter().map(|m| m.as_dmatrix()).collect();
    let objective = |x: &UnitVector| wp_objective(&mats, p, x.as_slice());
    maximize_over_sphere(objective, tuple.dim(), cfg)
}

pub(crate) fn wp_objective(mats: &[&DMatrix<Complex64>], p: f64, x: &[Complex64]) -> f64 {
    if p == 1.0 {
        return mats.iter().map(|m| quad(m, x).norm()).sum();
    }
    if p == 2.0 {
        return mats.iter().map(|m| quad(m, x).norm_sqr()).sum::<f64>().sqrt();
    }
    mats.iter()
        .map(|m| quad(m, x).norm().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Euclidean operator radius, `w_2`.
pub fn we_radius(tuple: &OperatorTuple, cfg: &SphereOptConfig) -> Result<RadiusEstimate> {
    wp_radius(tuple, 2.0, cfg)
}

/// Best-effort supremum of `objective` over the unit sphere of `C^dim`.
pub fn maximize_over_sphere<F>(objective: F, dim: usize, cfg: &SphereOptConfig) -> Result<RadiusEstimate>
where
    F: Fn(&UnitVector) -> f64,
{
    let f = |xs: &[UnitVector]| -objective(&xs[0]);
    let run = descend(&f, dim, 1, cfg)?;
    Ok(run.into_estimate(-1.0, BoundSide::LowerOfSup))
}

/// Best-effort infimum of `objective` over the unit sphere of `C^dim`.
pub fn minimize_over_sphere<F>(objective: F, dim: usize, cfg: &SphereOptConfig) -> Result<RadiusEstimate>
where
    F: Fn(&UnitVector) -> f64,
{
    let f = |xs: &[UnitVector]| objective(&xs[0]);
    let run = descend(&f, dim, 1, cfg)?;
    Ok(run.into_estimate(1.0, BoundSide::UpperOfInf))
}

/// Best-effort infimum over pairs of independent unit vectors.
pub fn minimize_over_sphere_pair<F>(objective: F, dim: usize, cfg: &SphereOptConfig) -> Result<RadiusEstimate>
where
    F: Fn(&UnitVector, &UnitVector) -> f64,
{
    let f = |xs: &[UnitVector]| objective(&xs[0], &xs[1]);
    let run = descend(&f, dim, 2, cfg)?;
    Ok(run.into_estimate(1.0, BoundSide::UpperOfInf))
}

struct Run {
    value: f64,
    point: Vec<UnitVector>,
    converged: bool,
}

impl Run {
    fn into_estimate(self, sign: f64, side: BoundSide) -> RadiusEstimate {
        let mut point = self.point.into_iter();
        RadiusEstimate {
            value: sign * self.value,
            witness: point.next().expect("at least one block"),
            second_witness: point.next(),
            converged: self.converged,
            bound_side: side,
        }
    }
}

const FD_STEP: f64 = 1e-6;

/// Multi-start descent of `f` on a product of `blocks` unit spheres.
///
/// Central finite-difference gradients are projected onto the tangent space
/// of each block; steps follow the normalized negative gradient with
/// backtracking and are retracted by renormalization. Restart `k` draws its
/// start from stream `k` of the configured seed; the best value wins, ties
/// going to the lower restart index.
fn descend(f: &dyn Fn(&[UnitVector]) -> f64, dim: usize, blocks: usize, cfg: &SphereOptConfig) -> Result<Run> {
    if dim == 0 {
        return Err(RadError::domain("sphere dimension must be positive"));
    }
    if cfg.restarts == 0 {
        return Err(RadError::domain("restarts must be at least 1"));
    }
    let mut best: Option<Run> = None;
    for restart in 0..cfg.restarts {
        let mut rng = stream_rng(cfg.seed, restart as u64);
        let start: Vec<UnitVector> = (0..blocks).map(|_| random_unit(&mut rng, dim)).collect();
        let run = descend_from(f, start, cfg)?;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn eval(f: &dyn Fn(&[UnitVector]) -> f64, x: &[UnitVector]) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(RadError::Objective)
    }
}

fn normalize_in_place(v: &mut [Complex64]) {
    let n = euclid(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

#[allow(clippy::needless_range_loop)]
fn descend_from(f: &dyn Fn(&[UnitVector]) -> f64, mut x: Vec<UnitVector>, cfg: &SphereOptConfig) -> Result<Run> {
    let dim = x[0].dim();
    let blocks = x.len();
    let mut fx = eval(f, &x)?;
    let mut work = x.clone();
    let mut grad = vec![vec![Complex64::new(0.0, 0.0); dim]; blocks];
    let mut trial = x.clone();
    let mut t: f64 = 0.5;
    let mut converged = false;

    for _ in 0..cfg.max_iters {
        // gradient in stacked real coordinates, tangent-projected per block
        let mut gnorm2 = 0.0;
        for b in 0..blocks {
            for i in 0..dim {
                let mut g = Complex64::new(0.0, 0.0);
                for imag in [false, true] {
                    let delta = if imag { Complex64::new(0.0, FD_STEP) } else { Complex64::new(FD_STEP, 0.0) };
                    work[b].raw_mut()[i] = x[b].as_slice()[i] + delta;
                    normalize_in_place(work[b].raw_mut());
                    let up = eval(f, &work)?;
                    work[b].raw_mut().copy_from_slice(x[b].as_slice());
                    work[b].raw_mut()[i] = x[b].as_slice()[i] - delta;
                    normalize_in_place(work[b].raw_mut());
                    let down = eval(f, &work)?;
                    work[b].raw_mut().copy_from_slice(x[b].as_slice());
                    let d = (up - down) / (2.0 * FD_STEP);
                    if imag {
                        g.im = d;
                    } else {
                        g.re = d;
                    }
                }
                grad[b][i] = g;
            }
            let radial: f64 = grad[b]
                .iter()
                .zip(x[b].as_slice())
                .map(|(g, xi)| g.re * xi.re + g.im * xi.im)
                .sum();
            for (g, xi) in grad[b].iter_mut().zip(x[b].as_slice()) {
                *g -= xi * radial;
                gnorm2 += g.norm_sqr();
            }
        }
        let gnorm = gnorm2.sqrt();
        if gnorm < 1e-14 {
            converged = true;
            break;
        }

        // backtracking along the normalized descent direction
        t = (2.0 * t).min(1.0);
        let accepted = loop {
            for b in 0..blocks {
                let dst = trial[b].raw_mut();
                for ((d, xi), g) in dst.iter_mut().zip(x[b].as_slice()).zip(&grad[b]) {
                    *d = xi - g * (t / gnorm);
                }
                normalize_in_place(dst);
            }
            let ft = eval(f, &trial)?;
            if ft <= fx - 1e-4 * t * gnorm {
                break Some(ft);
            }
            t *= 0.5;
            if t < 1e-15 {
                break None;
            }
        };
        let Some(ft) = accepted else {
            converged = true;
            break;
        };
        let decrease = fx - ft;
        std::mem::swap(&mut x, &mut trial);
        for b in 0..blocks {
            work[b].raw_mut().copy_from_slice(x[b].as_slice());
        }
        fx = ft;
        if decrease <= cfg.step_tol * fx.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    Ok(Run {
        value: fx,
        point: x,
        converged,
    })
}
