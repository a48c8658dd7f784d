//! Evaluation of any bound from a flat operand list.

use super::{
    bound_cor210, bound_cor215, bound_cor218, bound_cor219, bound_cor27, bound_cor28, bound_thm211, bound_thm213,
    bound_thm216, bound_thm23, bound_thm25_heinz, bound_thm26, BoundConfig, BoundParams, BoundReport, PowerPair,
    SandwichTuple, TheoremId,
};
use crate::error::{RadError, Result};
use crate::linalg::{ComplexMatrix, PsdMatrix};
use crate::radius::OperatorTuple;

/// Operand layout expected by [`evaluate`], as shown in error messages.
pub fn operand_shape(theorem: TheoremId) -> &'static str {
    use TheoremId::*;
    match theorem {
        Thm23 | Thm25 => "A,B,X",
        Thm26 => "A1,T1,B1,...",
        Cor27 => "A1,B1,...",
        Cor210 => "B,C",
        Cor215 => "B,C or a single A",
        Cor219 => "T1,... (positive)",
        Cor28 | Thm211 | Thm213 | Thm216 | Cor218 => "T1,...",
    }
}

fn shape_ok(theorem: TheoremId, n: usize) -> bool {
    use TheoremId::*;
    n > 0
        && match theorem {
            Thm23 | Thm25 => n == 3,
            Thm26 => n.is_multiple_of(3),
            Cor27 => n.is_multiple_of(2),
            Cor210 => n == 2,
            Cor215 => n <= 2,
            _ => true,
        }
}

/// Runs `theorem` on `mats` laid out as in [`operand_shape`].
///
/// For `cor2.15` a single operand `A` is split into `B = Re A`, `C = Im A`.
pub fn evaluate(theorem: TheoremId, mats: &[ComplexMatrix], params: &BoundParams, cfg: &BoundConfig) -> Result<BoundReport> {
    use TheoremId::*;
    if !shape_ok(theorem, mats.len()) {
        return Err(RadError::Domain(format!(
            "{theorem} expects operands {}, got {}",
            operand_shape(theorem),
            mats.len()
        )));
    }
    let psd = |m: &ComplexMatrix| PsdMatrix::from_complex(m.clone(), &cfg.tol);
    let tuple = || OperatorTuple::new(mats.to_vec());
    match theorem {
        Thm23 => bound_thm23(&psd(&mats[0])?, &psd(&mats[1])?, &mats[2], params, cfg),
        Thm25 => bound_thm25_heinz(&psd(&mats[0])?, &psd(&mats[1])?, &mats[2], params, cfg),
        Thm26 => {
            let triples = mats.chunks(3).map(|c| (c[0].clone(), c[1].clone(), c[2].clone())).collect();
            bound_thm26(&SandwichTuple::new(triples)?, &PowerPair::new(params.nu)?, params, cfg)
        }
        Cor27 => {
            let pairs: Vec<_> = mats.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
            bound_cor27(&pairs, params, cfg)
        }
        Cor28 => bound_cor28(&tuple()?, params, cfg),
        Cor210 => bound_cor210(&mats[0], &mats[1], params, cfg),
        Thm211 => bound_thm211(&tuple()?, params, cfg),
        Thm213 => bound_thm213(&tuple()?, params, cfg),
        Cor215 if mats.len() == 1 => {
            let a = &mats[0];
            bound_cor215(&a.hermitian_part().as_complex(), &a.skew_part().as_complex(), params.p, cfg)
        }
        Cor215 => bound_cor215(&mats[0], &mats[1], params.p, cfg),
        Thm216 => bound_thm216(&tuple()?, params, cfg),
        Cor218 => bound_cor218(&tuple()?, params.levels, cfg),
        Cor219 => bound_cor219(&tuple()?, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Status;

    #[test]
    fn shapes_are_enforced() {
        let i = ComplexMatrix::identity(2);
        let cfg = BoundConfig::default();
        let err = evaluate(TheoremId::Thm23, &[i.clone(), i.clone()], &BoundParams::default(), &cfg).unwrap_err();
        assert!(err.to_string().contains("A,B,X"), "{err}");
        assert!(evaluate(TheoremId::Cor28, &[], &BoundParams::default(), &cfg).is_err());
        assert!(evaluate(TheoremId::Cor210, std::slice::from_ref(&i), &BoundParams::default(), &cfg).is_err());
    }

    #[test]
    fn single_operand_cartesian_split() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let cfg = BoundConfig::default();
        let rep = evaluate(TheoremId::Cor215, &[a], &BoundParams::default(), &cfg).unwrap();
        assert_eq!(rep.n_ops, 2);
        assert_ne!(rep.status, Status::CertifiedViolation);
    }
}
