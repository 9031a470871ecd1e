//! Executable checks for each step of the domination argument
//!
//! ```text
//! KK* <= ‖K‖² I
//!   ⟹ |(AK)*|² = AKK*A <= ‖K‖² A²
//!   ⟹ |(AK)*| <= ‖K‖ A                  (square root is operator monotone)
//! |⟨AKx, x⟩| = |⟨(AK)*x, x⟩|            (conjugation)
//!            <= ⟨|(AK)*| x, x⟩           ((AK)* hyponormal)
//!            <= ‖K‖ ⟨Ax, x⟩
//! ```
//!
//! Each step is checked numerically on a concrete `(A, K)`; [`run_proof_chain`]
//! runs them all and closes with the certifier's verdict on the conclusion.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::certifier::{certify_dominated, certify_reid, default_epsilon, CertStatus, GapCertificate, ReidInstance};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::predicates::{absolute_value, is_positive, loewner_leq};
use crate::spectral::{operator_norm, psd_sqrt, quadratic_form};
use crate::tolerance::TolerancePolicy;

/// Default tolerance for the step checks: `1e-8·max(1, ‖·‖)`.
pub const PROOF_STEP_TOLERANCE: TolerancePolicy = TolerancePolicy { atol: 0.0, rtol: 1e-8 };

/// Relative tolerance of the conjugation identity.
pub const CONJUGATION_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ProofStepResult {
    pub step_name: String,
    pub holds: bool,
    /// Non-negative violation measure; `holds` iff `defect <= floor`.
    pub defect: f64,
    pub floor: f64,
    pub detail: String,
}

impl ProofStepResult {
    fn new(step_name: &str, defect: f64, floor: f64, detail: String) -> Self {
        Self {
            step_name: step_name.into(),
            holds: defect <= floor,
            defect,
            floor,
            detail,
        }
    }

    fn from_certificate(step_name: &str, cert: &GapCertificate, what: &str) -> Self {
        Self {
            step_name: step_name.into(),
            holds: cert.status == CertStatus::CertifiedHolds,
            defect: cert.gap_upper.max(0.0),
            floor: cert.floor,
            detail: format!(
                "{what}: {} (gap_upper {:e}, gap_lower {:e})",
                cert.status.as_str(),
                cert.gap_upper,
                cert.gap_lower
            ),
        }
    }
}

fn require_positive(a: &ComplexMatrix, tol: &TolerancePolicy) -> Result<()> {
    let m = is_positive(a, tol)?;
    if m.holds {
        Ok(())
    } else {
        Err(Error::NotPositive {
            lambda_min: m.lambda_min,
            floor: tol.floor(operator_norm(a)?),
        })
    }
}

/// Löwner comparison `X <= Y` as a step result.
fn loewner_step(
    name: &str,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &TolerancePolicy,
    what: &str,
) -> Result<ProofStepResult> {
    let m = loewner_leq(x, y, tol)?;
    let diff_norm = operator_norm(&y.try_sub(x)?)?;
    Ok(ProofStepResult::new(
        name,
        (-m.lambda_min).max(0.0),
        tol.floor(diff_norm),
        format!("{what}: lambda_min = {:e}", m.lambda_min),
    ))
}

/// `KK* <= ‖K‖² I`.
pub fn check_contraction_bound(k: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ProofStepResult> {
    let n = k.require_square()?;
    let c = operator_norm(k)?;
    let kk = k.try_mul(&k.adjoint())?.hermitian_part();
    let bound = ComplexMatrix::identity(n).scale(c * c);
    loewner_step("contraction_bound", &kk, &bound, tol, "lambda_min(|K|^2 I - KK*)")
}

/// `|(AK)*|² = AKK*A`, with `|(AK)*|` from the PSD square root of `AKK*A`'s
/// defining Gram matrix.
pub fn check_abs_adjoint_square(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ProofStepResult> {
    require_positive(a, tol)?;
    abs_adjoint_square(a, k, tol)
}

fn abs_adjoint_square(a: &ComplexMatrix, k: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ProofStepResult> {
    let ak = a.try_mul(k)?;
    let abs = absolute_value(&ak.adjoint(), tol)?;
    let lhs = abs.try_mul(&abs)?;
    let rhs = ak.try_mul(&ak.adjoint())?;
    let defect = operator_norm(&lhs.try_sub(&rhs)?)?;
    Ok(ProofStepResult::new(
        "abs_adjoint_square",
        defect,
        tol.floor(operator_norm(&rhs)?),
        format!("||abs((AK)*)^2 - AKK*A|| = {defect:e}"),
    ))
}

/// `AKK*A <= ‖K‖² A²`.
pub fn check_square_domination(a: &ComplexMatrix, k: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ProofStepResult> {
    require_positive(a, tol)?;
    square_domination(a, k, tol)
}

fn square_domination(a: &ComplexMatrix, k: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ProofStepResult> {
    let (x, y) = squared_pair(a, k)?;
    loewner_step("square_domination", &x, &y, tol, "lambda_min(|K|^2 A^2 - AKK*A)")
}

/// `(AKK*A, ‖K‖² A²)`.
fn squared_pair(a: &ComplexMatrix, k: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let ak = a.try_mul(k)?;
    let c = operator_norm(k)?;
    let x = ak.try_mul(&ak.adjoint())?.hermitian_part();
    let y = a.try_mul(a)?.hermitian_part().scale(c * c);
    Ok((x, y))
}

/// Both sub-checks of the `|(AK)*|² = AKK*A <= ‖K‖²A²` step, merged.
pub fn check_abs_adjoint_identity(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ProofStepResult> {
    let square = check_abs_adjoint_square(a, k, tol)?;
    let domination = check_square_domination(a, k, tol)?;
    Ok(ProofStepResult {
        step_name: "abs_adjoint_identity".into(),
        holds: square.holds && domination.holds,
        defect: (square.defect - square.floor)
            .max(domination.defect - domination.floor)
            .max(0.0),
        floor: 0.0,
        detail: format!("(i) {}; (ii) {}", square.detail, domination.detail),
    })
}

/// Operator monotonicity of the square root: `0 <= X <= Y ⟹ √X <= √Y`.
pub fn check_sqrt_monotone(x: &ComplexMatrix, y: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ProofStepResult> {
    require_positive(x, tol)?;
    require_positive(y, tol)?;
    let order = loewner_leq(x, y, tol)?;
    if !order.holds {
        return Err(Error::OrderViolated {
            lambda_min: order.lambda_min,
        });
    }
    let sx = psd_sqrt(x, tol)?;
    let sy = psd_sqrt(y, tol)?;
    loewner_step("sqrt_monotone", &sx, &sy, tol, "lambda_min(sqrt(Y) - sqrt(X))")
}

/// [`check_sqrt_monotone`] for `X = F*F`, `Y = G*G` given by their factors.
///
/// The roots are taken as `|F|` and `|G|` from singular value decompositions,
/// which stay accurate when `X` and `Y` are singular.
pub fn check_sqrt_monotone_factored(
    f: &ComplexMatrix,
    g: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ProofStepResult> {
    let x = f.adjoint().try_mul(f)?.hermitian_part();
    let y = g.adjoint().try_mul(g)?.hermitian_part();
    let order = loewner_leq(&x, &y, tol)?;
    if !order.holds {
        return Err(Error::OrderViolated {
            lambda_min: order.lambda_min,
        });
    }
    let sx = absolute_value(f, tol)?;
    let sy = absolute_value(g, tol)?;
    loewner_step("sqrt_monotone", &sx, &sy, tol, "lambda_min(sqrt(Y) - sqrt(X))")
}

/// `|⟨AKx, x⟩| = |⟨(AK)*x, x⟩|` within [`CONJUGATION_RTOL`] relative to
/// `max(|⟨AKx,x⟩|, |⟨(AK)*x,x⟩|, ‖AK‖_F·‖x‖²)`.
pub fn check_conjugation_identity(a: &ComplexMatrix, k: &ComplexMatrix, x: &ComplexVector) -> Result<ProofStepResult> {
    let ak = a.try_mul(k)?;
    let lhs = quadratic_form(&ak, x)?.norm();
    let rhs = quadratic_form(&ak.adjoint(), x)?.norm();
    let magnitude = lhs.max(rhs).max(ak.frobenius_norm() * x.norm_sqr());
    Ok(ProofStepResult::new(
        "conjugation_identity",
        (lhs - rhs).abs(),
        CONJUGATION_RTOL * magnitude,
        format!("|<AKx,x>| = {lhs:e}, |<(AK)*x,x>| = {rhs:e}"),
    ))
}

/// Certifies `|⟨Tx, x⟩| <= ⟨|T| x, x⟩` for all `x`.
///
/// Guaranteed for hyponormal (in finite dimension: normal) `T`; other inputs
/// may go either way.
pub fn check_kittaneh(t: &ComplexMatrix, epsilon: f64, tol: &TolerancePolicy) -> Result<GapCertificate> {
    let abs = absolute_value(t, tol)?;
    certify_dominated(t, &abs, epsilon, tol)
}

/// Every step on one instance, closed by the certificate for the conclusion.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofChainReport {
    pub steps: Vec<ProofStepResult>,
    pub kittaneh: GapCertificate,
    pub certificate: GapCertificate,
}

impl ProofChainReport {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn failing_steps(&self) -> impl Iterator<Item = &ProofStepResult> {
        self.steps.iter().filter(|s| !s.holds)
    }
}

/// Runs the full chain on `(A, K)` with probe vector `x`.
///
/// `step_tol` gates the algebraic steps; `cert_tol` is passed to the two
/// certificates.
pub fn run_proof_chain(
    a: &ComplexMatrix,
    k: &ComplexMatrix,
    x: &ComplexVector,
    step_tol: &TolerancePolicy,
    cert_tol: &TolerancePolicy,
) -> Result<ProofChainReport> {
    let inst = ReidInstance::new(a.clone(), k.clone(), cert_tol)?;
    let mut steps = Vec::with_capacity(8);

    steps.push(check_contraction_bound(k, step_tol)?);
    // positivity of A was validated with cert_tol above
    steps.push(abs_adjoint_square(a, k, step_tol)?);
    steps.push(square_domination(a, k, step_tol)?);

    // AKK*A = F*F and ‖K‖²A² = G*G
    let f = inst.product().adjoint();
    let g = a.scale(inst.k_norm());
    steps.push(match check_sqrt_monotone_factored(&f, &g, step_tol) {
        Ok(r) => r,
        Err(e @ (Error::OrderViolated { .. } | Error::NotPositive { .. })) => ProofStepResult {
            step_name: "sqrt_monotone".into(),
            holds: false,
            defect: f64::INFINITY,
            floor: 0.0,
            detail: format!("precondition failed: {e}"),
        },
        Err(e) => return Err(e),
    });

    let abs_adj = absolute_value(&inst.product().adjoint(), step_tol)?;
    steps.push(loewner_step(
        "abs_adjoint_bound",
        &abs_adj,
        &inst.dominating(),
        step_tol,
        "lambda_min(|K| A - abs((AK)*))",
    )?);

    steps.push(check_conjugation_identity(a, k, x)?);

    let t = inst.product().adjoint();
    let kittaneh = check_kittaneh(&t, default_epsilon(&t)?, cert_tol)?;
    steps.push(ProofStepResult::from_certificate(
        "kittaneh_adjoint",
        &kittaneh,
        "|<(AK)*x,x>| <= <abs((AK)*)x,x>",
    ));

    let certificate = certify_reid(&inst, default_epsilon(inst.product())?, cert_tol)?;
    steps.push(ProofStepResult::from_certificate(
        "reid_conclusion",
        &certificate,
        "|<AKx,x>| <= |K| <Ax,x>",
    ));

    Ok(ProofChainReport {
        steps,
        kittaneh,
        certificate,
    })
}
