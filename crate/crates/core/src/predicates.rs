//! Tolerance-gated membership tests for the operator classes involved in
//! Reid-type inequalities: positivity, Löwner order, (co-)hyponormality.
//!
//! Every predicate reports the continuous quantity it thresholds alongside the
//! verdict, so callers can rank near-misses.
//!
//! On a finite-dimensional space `trace(T*T - TT*) = 0`, so a hyponormal
//! matrix (self-commutator ≥ 0) has a zero self-commutator and is normal. The
//! hyponormal and co-hyponormal classes therefore both coincide with the
//! normal matrices here; only their tolerance-level behaviour differs.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::{self, eigenvalues_of_hermitian_part, require_hermitian, spectral_radius};
use crate::tolerance::TolerancePolicy;

/// Verdict of a spectral membership test together with the smallest
/// eigenvalue it was decided on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub holds: bool,
    pub lambda_min: f64,
}

/// Spectral summary of a Hermitian defect matrix such as `T*T - TT*`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectReport {
    pub defect_matrix: ComplexMatrix,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub norm: f64,
}

impl DefectReport {
    fn of(defect_matrix: ComplexMatrix) -> Result<Self> {
        let vals = eigenvalues_of_hermitian_part(&defect_matrix)?;
        let lambda_min = vals[0];
        let lambda_max = vals[vals.len() - 1];
        Ok(Self {
            defect_matrix,
            lambda_min,
            lambda_max,
            norm: lambda_min.abs().max(lambda_max.abs()),
        })
    }
}

/// `λ_min(H) >= -(atol + rtol·scale(H))`, with the Hermitian precondition
/// checked at the same scale.
fn psd_membership(h: &ComplexMatrix, tol: &TolerancePolicy) -> Result<(Membership, bool)> {
    let vals = eigenvalues_of_hermitian_part(h)?;
    let norm = spectral_radius(&vals);
    let hermitian = require_hermitian(h, norm, tol).is_ok();
    let lambda_min = vals[0];
    Ok((
        Membership {
            holds: lambda_min >= -tol.floor(norm),
            lambda_min,
        },
        hermitian,
    ))
}

/// Positivity: Hermitian within `tol` and `λ_min >= -floor`.
pub fn is_positive(a: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Membership> {
    a.require_square()?;
    let (m, hermitian) = psd_membership(a, tol)?;
    Ok(Membership {
        holds: m.holds && hermitian,
        lambda_min: m.lambda_min,
    })
}

/// Löwner order `X <= Y`, decided on `λ_min(Y - X)` at the scale of `Y - X`.
pub fn loewner_leq(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Membership> {
    x.require_square()?;
    x.require_same_shape(y)?;
    let xn = spectral::operator_norm(x)?;
    let yn = spectral::operator_norm(y)?;
    require_hermitian(x, xn, tol)?;
    require_hermitian(y, yn, tol)?;
    Ok(psd_membership(&y.try_sub(x)?, tol)?.0)
}

/// Self-commutator `T*T - TT*` and its spectrum.
pub fn normality_defect(t: &ComplexMatrix) -> Result<DefectReport> {
    t.require_square()?;
    let ts = t.adjoint();
    DefectReport::of(ts.try_mul(t)?.try_sub(&t.try_mul(&ts)?)?)
}

/// Hyponormality `TT* <= T*T`. The floor is scaled by the defect matrix, not
/// by `T`.
pub fn is_hyponormal(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Membership> {
    let report = normality_defect(t)?;
    Ok(Membership {
        holds: report.lambda_min >= -tol.floor(report.norm),
        lambda_min: report.lambda_min,
    })
}

/// Co-hyponormality: `T*` is hyponormal.
pub fn is_cohyponormal(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Membership> {
    is_hyponormal(&t.adjoint(), tol)
}

/// `|T| = sqrt(T*T)`.
///
/// Computed from the singular value decomposition of `T`; the explicit square
/// root of `T*T` is the fallback if that fails to converge.
pub fn absolute_value(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ComplexMatrix> {
    t.require_square()?;
    match spectral::modulus(t) {
        Err(Error::NumericalFailure(_)) => {}
        other => return other,
    }
    let gram = t.adjoint().try_mul(t)?.hermitian_part();
    spectral::psd_sqrt(&gram, tol).map_err(|e| match e {
        // T*T is PSD by construction; failure here means the eigensolver lost it.
        Error::NotPositive { .. } | Error::NotHermitian { .. } => Error::NumericalFailure("T*T lost positivity"),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn shift(n: usize) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(n, n);
        for i in 0..n - 1 {
            s[(i + 1, i)] = c(1.0, 0.0);
        }
        s
    }

    fn rotation(theta: f64) -> ComplexMatrix {
        let (s, co) = (libm::sin(theta), libm::cos(theta));
        ComplexMatrix::from_real(2, 2, &[co, -s, s, co]).unwrap()
    }

    #[test]
    fn shift_range_projection_is_positive() {
        let s = shift(5);
        let a = &s * &s.adjoint();
        assert_eq!(a, ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 1.0, 1.0, 1.0]));
        assert!(is_positive(&a, &tol()).unwrap().holds);
    }

    #[test]
    fn indefinite_and_negative_are_not_positive() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        let r = is_positive(&m, &tol()).unwrap();
        assert!(!r.holds);
        assert!((r.lambda_min + 1.0).abs() < 1e-14);
        let neg = ComplexMatrix::identity(3).scale(-1.0);
        assert!(!is_positive(&neg, &tol()).unwrap().holds);
    }

    #[test]
    fn non_hermitian_with_positive_spectrum_is_not_positive() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(!is_positive(&m, &tol()).unwrap().holds);
        assert!(is_positive(&ComplexMatrix::zeros(2, 3), &tol()).is_err());
    }

    #[test]
    fn contraction_instance_of_loewner_order() {
        let s = shift(4);
        let x = &s * &s.adjoint();
        let y = ComplexMatrix::identity(4);
        assert_eq!(&y - &x, ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]));
        assert!(loewner_leq(&x, &y, &tol()).unwrap().holds);
        assert!(loewner_leq(&x, &x, &tol()).unwrap().holds);
        let two = ComplexMatrix::identity(3).scale(2.0);
        let r = loewner_leq(&two, &ComplexMatrix::identity(3), &tol()).unwrap();
        assert!(!r.holds);
        assert!((r.lambda_min + 1.0).abs() < 1e-14);
    }

    #[test]
    fn loewner_rejects_non_hermitian_and_mismatch() {
        let j = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            loewner_leq(&j, &ComplexMatrix::identity(2), &tol()),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            loewner_leq(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shift_self_commutator() {
        let r = normality_defect(&shift(3)).unwrap();
        assert_eq!(r.defect_matrix, ComplexMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]));
        assert!((r.lambda_min + 1.0).abs() < 1e-15);
        assert!((r.norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normal_and_self_adjoint_have_vanishing_defect() {
        let u = rotation(0.7);
        assert!(normality_defect(&u).unwrap().norm <= 1e-12);
        let h = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(2.0, -1.0), c(2.0, 1.0), c(-3.0, 0.0)]).unwrap();
        assert!(normality_defect(&h).unwrap().norm <= 1e-12 * 4.0);
    }

    #[test]
    fn hyponormality_cases() {
        assert!(is_hyponormal(&rotation(1.1), &tol()).unwrap().holds);
        for n in 2..7 {
            let r = is_hyponormal(&shift(n), &tol()).unwrap();
            assert!(!r.holds);
            assert!((r.lambda_min + 1.0).abs() < 1e-14);
        }
        let jordan = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!is_hyponormal(&jordan, &tol()).unwrap().holds);
    }

    #[test]
    fn cohyponormality_cases() {
        assert!(!is_cohyponormal(&shift(4).adjoint(), &tol()).unwrap().holds);
        assert!(is_cohyponormal(&rotation(0.3), &tol()).unwrap().holds);
        assert!(is_cohyponormal(&ComplexMatrix::zeros(3, 3), &tol()).unwrap().holds);
    }

    #[test]
    fn absolute_value_of_diagonal() {
        let d = ComplexMatrix::from_diagonal(&[c(-2.0, 0.0), c(0.0, 3.0)]);
        let abs = absolute_value(&d, &tol()).unwrap();
        assert!(abs.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn absolute_value_of_shift() {
        let abs = absolute_value(&shift(4), &tol()).unwrap();
        assert!(abs.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn absolute_value_of_normal_maps_moduli() {
        let u = rotation(0.4);
        let z: Vec<Complex64> = vec![c(1.0, -2.0), c(0.0, 0.5)];
        let t = &(&u * &ComplexMatrix::from_diagonal(&z)) * &u.adjoint();
        let mods: Vec<f64> = z.iter().map(|w| w.norm()).collect();
        let expected = &(&u * &ComplexMatrix::from_real_diagonal(&mods)) * &u.adjoint();
        assert!(absolute_value(&t, &tol()).unwrap().max_abs_diff(&expected) < 1e-12);
    }
}
