//! Earlier, unrefined bounds, evaluated on a caller-supplied vector sample so
//! they can be compared sample by sample with the refined forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::sandwich::half_gap;
use super::young::first_level_form;
use super::{BoundParams, SandwichTuple};
use crate::error::{RadError, Result};
use crate::linalg::{abs_pair, bilinear, op_norm, psd_power, quad_re, ComplexMatrix, PsdMatrix, UnitVector};
use crate::radius::OperatorTuple;
use crate::tolerance::ToleranceConfig;

/// The baseline inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    /// `w_p^p(A_i* T_i B_i) ≤ c‖Σ P_i^{rp} + Q_i^{rp}‖^{1/r} − inf ½Σ(√⟨P_i^p x,x⟩ − √⟨Q_i^p x,x⟩)²`.
    Sandwich,
    /// `w_p ≤ ½[Σ(‖|T_i|^{2α} + |T_i*|^{2(1−α)}‖ − 2 inf ζ_i)^p]^{1/p}`.
    PerOperator,
    /// `w_p^p ≤ ½‖Σ|T_i|^{2αp} + |T_i*|^{2(1−α)p}‖ − inf ζ`.
    HalfPower,
    /// `w_p^p ≤ ‖Σ α|T_i|^p + (1−α)|T_i*|^p‖ − inf ζ`.
    WeightedAbs,
    /// `w_p^r(|T_i|) w_q^r(|T_i*|) ≤ (r/p)‖Σ|T_i|^p‖ + (r/q)‖Σ|T_i*|^q‖ − inf δ`.
    ProductPair,
    /// `w^r(A^ν X B^{1−ν}) ≤ ‖X‖^r ‖νA^r + (1−ν)B^r‖`.
    WeightedPower,
    /// `w^r(H_ν(A, B)) ≤ ‖X‖^r ‖(A^r + B^r)/2‖`.
    Heinz,
    /// `w_p^p(B, C) ≤ ½‖|B|^p + |B*|^p + |C|^p + |C*|^p‖`.
    CartesianPair,
}

impl Baseline {
    pub const ALL: [Baseline; 8] = [
        Baseline::Sandwich,
        Baseline::PerOperator,
        Baseline::HalfPower,
        Baseline::WeightedAbs,
        Baseline::ProductPair,
        Baseline::WeightedPower,
        Baseline::Heinz,
        Baseline::CartesianPair,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::Sandwich => "sandwich",
            Baseline::PerOperator => "per-operator",
            Baseline::HalfPower => "half-power",
            Baseline::WeightedAbs => "weighted-abs",
            Baseline::ProductPair => "product-pair",
            Baseline::WeightedPower => "weighted-power",
            Baseline::Heinz => "heinz",
            Baseline::CartesianPair => "cartesian-pair",
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Operands in the shape each baseline expects.
#[derive(Debug, Clone)]
pub enum BaselineOperands {
    /// Sandwich triples `(A_i, T_i, B_i)` with `f = t^ν`, `g = t^{1−ν}`.
    Sandwich(SandwichTuple),
    /// A plain operator tuple.
    Tuple(OperatorTuple),
    /// Positive `A`, `B` and the middle operator `X`.
    Mean { a: PsdMatrix, b: PsdMatrix, x: ComplexMatrix },
    /// The two operators `B`, `C`.
    Pair(ComplexMatrix, ComplexMatrix),
}

fn shape_error(which: Baseline) -> RadError {
    RadError::domain(format!("operands do not match the {which} baseline"))
}

fn check_samples(dim: usize, samples: &[UnitVector]) -> Result<()> {
    if samples.is_empty() {
        return Err(RadError::domain("at least one sample vector is required"));
    }
    match samples.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(RadError::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        }),
        None => Ok(()),
    }
}

fn inf_over(samples: &[UnitVector], f: impl Fn(&UnitVector) -> f64) -> f64 {
    samples.iter().map(f).fold(f64::INFINITY, f64::min).max(0.0)
}

/// Right-hand side of `which`, with its subtracted functional minimized over
/// `samples`. `ProductPair` uses the pairs `(x_k, x_k)` and `(x_k, x_{k+1})`.
pub fn baseline_rhs(which: Baseline, operands: &BaselineOperands, params: &BoundParams, samples: &[UnitVector]) -> Result<f64> {
    params.check_common()?;
    let tol = ToleranceConfig::default();
    let (alpha, p) = (params.nu, params.p);
    match (which, operands) {
        (Baseline::Sandwich, BaselineOperands::Sandwich(tuple)) => {
            params.require_p_at_least(1.0)?;
            params.require_r_at_least(1.0)?;
            check_samples(tuple.dim(), samples)?;
            let r = params.r;
            let n = tuple.len();
            let mut total = ComplexMatrix::zeros(tuple.dim());
            let mut forms = Vec::with_capacity(n);
            for (a, t, b) in tuple.triples() {
                let (abs_t, abs_adj) = abs_pair(t)?;
                let f2 = psd_power(&abs_t, 2.0 * alpha)?.as_complex();
                let g2 = psd_power(&abs_adj, 2.0 * (1.0 - alpha))?.as_complex();
                let pm = PsdMatrix::from_complex(b.adjoint().mul(&f2).mul(b), &tol)?;
                let qm = PsdMatrix::from_complex(a.adjoint().mul(&g2).mul(a), &tol)?;
                total = total
                    .add(&psd_power(&pm, p * r)?.as_complex())
                    .add(&psd_power(&qm, p * r)?.as_complex());
                forms.push((psd_power(&pm, p)?, psd_power(&qm, p)?));
            }
            let coef = (n as f64).powf(1.0 - 1.0 / r) / 2f64.powf(1.0 / r);
            let zeta = inf_over(samples, |x| {
                forms
                    .iter()
                    .map(|(a, b)| half_gap(quad_re(a.as_dmatrix(), x.as_slice()), quad_re(b.as_dmatrix(), x.as_slice())))
                    .sum()
            });
            Ok(coef * op_norm(&total)?.powf(1.0 / r) - zeta)
        }
        (Baseline::PerOperator, BaselineOperands::Tuple(tuple)) => {
            params.require_p_at_least(1.0)?;
            check_samples(tuple.dim(), samples)?;
            let mut total = 0.0;
            for t in tuple.ops() {
                let (abs_t, abs_adj) = abs_pair(t)?;
                let f = psd_power(&abs_t, 2.0 * alpha)?;
                let g = psd_power(&abs_adj, 2.0 * (1.0 - alpha))?;
                let n = op_norm(&f.as_complex().add(&g.as_complex()))?;
                let zeta = inf_over(samples, |x| {
                    half_gap(quad_re(f.as_dmatrix(), x.as_slice()), quad_re(g.as_dmatrix(), x.as_slice()))
                });
                total += (n - 2.0 * zeta).max(0.0).powf(p);
            }
            Ok(0.5 * total.powf(1.0 / p))
        }
        (Baseline::HalfPower, BaselineOperands::Tuple(tuple)) => {
            params.require_p_at_least(1.0)?;
            check_samples(tuple.dim(), samples)?;
            let mut total = ComplexMatrix::zeros(tuple.dim());
            let mut forms = Vec::new();
            for t in tuple.ops() {
                let (abs_t, abs_adj) = abs_pair(t)?;
                let f = psd_power(&abs_t, 2.0 * alpha * p)?;
                let g = psd_power(&abs_adj, 2.0 * (1.0 - alpha) * p)?;
                total = total.add(&f.as_complex()).add(&g.as_complex());
                forms.push((f, g));
            }
            let zeta = inf_over(samples, |x| {
                forms
                    .iter()
                    .map(|(a, b)| half_gap(quad_re(a.as_dmatrix(), x.as_slice()), quad_re(b.as_dmatrix(), x.as_slice())))
                    .sum()
            });
            Ok(0.5 * op_norm(&total)? - zeta)
        }
        (Baseline::WeightedAbs, BaselineOperands::Tuple(tuple)) => {
            params.require_p_at_least(1.0)?;
            check_samples(tuple.dim(), samples)?;
            let mut k = ComplexMatrix::zeros(tuple.dim());
            let mut forms = Vec::new();
            for t in tuple.ops() {
                let (abs_t, abs_adj) = abs_pair(t)?;
                let a = psd_power(&abs_t, p)?;
                let b = psd_power(&abs_adj, p)?;
                k = k
                    .add(&a.as_complex().scale_real(alpha))
                    .add(&b.as_complex().scale_real(1.0 - alpha));
                forms.push((a, b));
            }
            let zeta = inf_over(samples, |x| {
                forms
                    .iter()
                    .map(|(a, b)| {
                        first_level_form(alpha, quad_re(a.as_dmatrix(), x.as_slice()), quad_re(b.as_dmatrix(), x.as_slice()))
                    })
                    .sum()
            });
            Ok(op_norm(&k)? - zeta)
        }
        (Baseline::ProductPair, BaselineOperands::Tuple(tuple)) => {
            let q = params
                .q
                .ok_or_else(|| RadError::domain("the exponent q is required"))?;
            let r = params.r;
            if !(q >= 1.0 && p >= q && (1.0 / p + 1.0 / q - 1.0 / r).abs() <= 1e-12) {
                return Err(RadError::domain(format!(
                    "exponents must satisfy p ≥ q ≥ 1 and 1/p + 1/q = 1/r, got p = {p}, q = {q}, r = {r}"
                )));
            }
            check_samples(tuple.dim(), samples)?;
            let nu = r / p;
            let mut sp = ComplexMatrix::zeros(tuple.dim());
            let mut sq = ComplexMatrix::zeros(tuple.dim());
            let mut mods = Vec::new();
            for t in tuple.ops() {
                let (abs_t, abs_adj) = abs_pair(t)?;
                sp = sp.add(&psd_power(&abs_t, p)?.as_complex());
                sq = sq.add(&psd_power(&abs_adj, q)?.as_complex());
                mods.push((abs_t, abs_adj));
            }
            let delta = |x: &UnitVector, y: &UnitVector| {
                let (mut u, mut v) = (0.0, 0.0);
                for (a, b) in &mods {
                    u += bilinear(a.as_dmatrix(), x.as_slice(), y.as_slice()).norm().powf(p);
                    v += bilinear(b.as_dmatrix(), x.as_slice(), y.as_slice()).norm().powf(q);
                }
                first_level_form(nu, u, v)
            };
            let m = samples.len();
            let mut best = f64::INFINITY;
            for k in 0..m {
                best = best.min(delta(&samples[k], &samples[k]));
                if m > 1 {
                    best = best.min(delta(&samples[k], &samples[(k + 1) % m]));
                }
            }
            Ok(nu * op_norm(&sp)? + (1.0 - nu) * op_norm(&sq)? - best.max(0.0))
        }
        (Baseline::WeightedPower | Baseline::Heinz, BaselineOperands::Mean { a, b, x }) => {
            if a.dim() != b.dim() || a.dim() != x.dim() {
                return Err(RadError::DimensionMismatch {
                    expected: a.dim(),
                    found: if a.dim() != b.dim() { b.dim() } else { x.dim() },
                });
            }
            let r = params.r;
            let weight = if which == Baseline::Heinz { 0.5 } else { alpha };
            let ar = psd_power(a, r)?.as_complex();
            let br = psd_power(b, r)?.as_complex();
            let mean = ar.scale_real(weight).add(&br.scale_real(1.0 - weight));
            Ok(op_norm(x)?.powf(r) * op_norm(&mean)?)
        }
        (Baseline::CartesianPair, BaselineOperands::Pair(b, c)) => {
            params.require_p_at_least(2.0)?;
            b.dim_check(c)?;
            let mut total = ComplexMatrix::zeros(b.dim());
            for t in [b, c] {
                let (abs_t, abs_adj) = abs_pair(t)?;
                total = total
                    .add(&psd_power(&abs_t, p)?.as_complex())
                    .add(&psd_power(&abs_adj, p)?.as_complex());
            }
            Ok(0.5 * op_norm(&total)?)
        }
        _ => Err(shape_error(which)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn nil() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    fn basis() -> Vec<UnitVector> {
        vec![UnitVector::basis(2, 0), UnitVector::basis(2, 1)]
    }

    #[test]
    fn heinz_with_identities_is_norm_power() {
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        let ops = BaselineOperands::Mean {
            a: PsdMatrix::identity(2),
            b: PsdMatrix::identity(2),
            x: x.clone(),
        };
        let p = BoundParams::default().with_r(3.0);
        let v = baseline_rhs(Baseline::Heinz, &ops, &p, &basis()).unwrap();
        assert_abs_diff_eq!(v, op_norm(&x).unwrap().powi(3), epsilon = 1e-10);
    }

    #[test]
    fn cartesian_pair_on_nilpotent() {
        let ops = BaselineOperands::Pair(nil(), nil());
        let p = BoundParams::default().with_p(2.0);
        let v = baseline_rhs(Baseline::CartesianPair, &ops, &p, &basis()).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        assert!(baseline_rhs(Baseline::CartesianPair, &ops, &p.with_p(1.5), &basis()).is_err());
    }

    #[test]
    fn half_power_hermitian_has_no_gap() {
        let h1 = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]).unwrap();
        let h2 = ComplexMatrix::real_diag(&[0.5, -2.0]);
        let tuple = OperatorTuple::new(vec![h1.clone(), h2.clone()]).unwrap();
        let p = BoundParams::default().with_nu(0.5).with_p(1.0);
        let v = baseline_rhs(Baseline::HalfPower, &BaselineOperands::Tuple(tuple), &p, &basis()).unwrap();
        let s = abs_pair(&h1).unwrap().0.as_complex().add(&abs_pair(&h2).unwrap().0.as_complex());
        assert_abs_diff_eq!(v, 0.5 * op_norm(&s.scale_real(2.0)).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn mismatched_shape_is_rejected() {
        let ops = BaselineOperands::Pair(nil(), nil());
        let err = baseline_rhs(Baseline::Heinz, &ops, &BoundParams::default(), &basis()).unwrap_err();
        assert!(matches!(err, RadError::Domain(_)));
    }

    #[test]
    fn per_operator_on_nilpotent() {
        // ζ = ½(√⟨|T|x,x⟩ − √⟨|T*|x,x⟩)² is ½ on both basis vectors; ½‖I‖ − 2·½ clamps to 0
        let tuple = OperatorTuple::new(vec![nil()]).unwrap();
        let p = BoundParams::default().with_nu(0.5).with_p(2.0);
        let v = baseline_rhs(Baseline::PerOperator, &BaselineOperands::Tuple(tuple), &p, &basis()).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn product_pair_requires_exponent_relation() {
        let tuple = BaselineOperands::Tuple(OperatorTuple::new(vec![nil()]).unwrap());
        let ok = BoundParams::default().with_p(2.0).with_q(2.0).with_r(1.0);
        assert!(baseline_rhs(Baseline::ProductPair, &tuple, &ok, &basis()).is_ok());
        assert!(baseline_rhs(Baseline::ProductPair, &tuple, &ok.with_r(2.0), &basis()).is_err());
    }
}
