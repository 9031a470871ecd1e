//! Spectral primitives: Hermitian eigendecomposition, operator norm, PSD
//! square root and quadratic forms.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. At the dimensions
//! this crate targets (n ≤ 64) it is fast enough, and it delivers small
//! eigenvalues with absolute error near `eps·‖H‖`, which the square-root and
//! Löwner-order checks depend on.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::tolerance::TolerancePolicy;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and unitary eigenvectors (as columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `V f(Λ) V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let out = ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * mapped[k] * v[(j, k)].conj()).sum()
        });
        out.hermitian_part()
    }

    /// `V Λ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Frobenius norm of `M - M*`; an upper bound on its operator norm.
pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..m.cols() {
            acc += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    libm::sqrt(acc)
}

/// Checks the Hermitian precondition of `m` against `tol`, scaled by `norm`.
pub(crate) fn require_hermitian(m: &ComplexMatrix, norm: f64, tol: &TolerancePolicy) -> Result<()> {
    let defect = hermitian_defect(m);
    let allowed = tol.floor(norm);
    if defect > allowed {
        return Err(Error::NotHermitian { defect, allowed });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The Hermitian part of `h` is decomposed; the precondition is checked
/// against the resulting operator norm.
pub fn hermitian_eig(h: &ComplexMatrix, tol: &TolerancePolicy) -> Result<SpectralDecomposition> {
    h.require_square()?;
    let (eigenvalues, vectors) = jacobi(&h.hermitian_part(), true)?;
    let norm = spectral_radius(&eigenvalues);
    require_hermitian(h, norm, tol)?;
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: vectors.expect("vectors requested"),
    })
}

/// Ascending eigenvalues of the Hermitian part of `h`, without the
/// Hermitian-ness check. Callers guarantee the precondition.
pub fn eigenvalues_of_hermitian_part(h: &ComplexMatrix) -> Result<Vec<f64>> {
    h.require_square()?;
    Ok(jacobi(&h.hermitian_part(), false)?.0)
}

/// Largest eigenvalue and a unit eigenvector of the Hermitian part of `h`.
pub fn top_eigenpair(h: &ComplexMatrix) -> Result<(f64, ComplexVector)> {
    h.require_square()?;
    let (vals, vecs) = jacobi(&h.hermitian_part(), true)?;
    let last = vals.len() - 1;
    Ok((vals[last], vecs.expect("vectors requested").column(last)))
}

/// Largest eigenvalue of an exactly Hermitian matrix; no checks, no copy of
/// the Hermitian part. Hot path of the certifier.
/// `λ_max` of an exactly Hermitian matrix, by Householder reduction to real
/// tridiagonal form and Sturm-count bisection.
pub(crate) fn lambda_max_exact_hermitian(h: &ComplexMatrix) -> Result<f64> {
    let n = h.require_square()?;
    if h.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (d, e) = tridiagonalize(h);
    Ok(tridiagonal_lambda_max(&d, &e, n))
}

/// Singular values (descending) and right singular vectors of a square `T`,
/// by one-sided Jacobi on the columns of `T`.
///
/// Small singular values come out with absolute error `~ε·‖T‖`, unlike
/// square roots of the eigenvalues of `T*T`.
pub fn right_singular_decomposition(t: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = t.require_square()?;
    if t.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| t.column(j).as_slice().to_vec()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n).map(|j| ComplexVector::basis(n, j).as_slice().to_vec()).collect();
    let norm_sq = |c: &[Complex64]| c.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        converged = true;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sq(&w[p]);
                let beta = norm_sq(&w[q]);
                let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                converged = false;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let tan = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + tan * tan);
                let s = c * tan;
                for cols in [&mut w, &mut v] {
                    let (left, right) = cols.split_at_mut(q);
                    for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let bq = *b * phase;
                        let ap = *a;
                        *a = ap * c - bq * s;
                        *b = ap * s + bq * c;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("one-sided Jacobi did not converge"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<f64> = w.iter().map(|c| libm::sqrt(norm_sq(c))).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let values = order.iter().map(|&i| sigma[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[order[j]][i]);
    Ok((values, vectors))
}

/// `|T| = V Σ V*` from [`right_singular_decomposition`].
pub(crate) fn modulus(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (sigma, v) = right_singular_decomposition(t)?;
    let n = sigma.len();
    let out = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * sigma[k]).sum()
    });
    Ok(out.hermitian_part())
}

/// Diagonal and off-diagonal magnitudes of a tridiagonal matrix unitarily
/// similar to `h`.
fn tridiagonalize(h: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.rows();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    let mut e = Vec::with_capacity(n.saturating_sub(1));
    let mut v = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut w = alloc::vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let lo = k + 1;
        let norm = libm::sqrt((lo..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>());
        let x0 = a[lo * n + k];
        if norm == 0.0 || (lo..n).skip(1).all(|i| a[i * n + k] == Complex64::new(0.0, 0.0)) {
            e.push(x0.norm());
            continue;
        }
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] -= alpha;
        let vn = libm::sqrt((lo..n).map(|i| v[i].norm_sqr()).sum::<f64>());
        for vi in &mut v[lo..n] {
            *vi /= vn;
        }
        // p = Bv, w = p - (v*p) v, B <- B - 2vw* - 2wv*
        for i in lo..n {
            w[i] = (lo..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let kappa: Complex64 = (lo..n).map(|i| v[i].conj() * w[i]).sum();
        for i in lo..n {
            w[i] -= v[i] * kappa.re;
        }
        for i in lo..n {
            for j in lo..n {
                a[i * n + j] -= (v[i] * w[j].conj() + w[i] * v[j].conj()) * 2.0;
            }
        }
        e.push(alpha.norm());
    }
    let d = (0..n).map(|i| a[i * n + i].re).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal `(d, e)` strictly below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -libm::sqrt(f64::MIN_POSITIVE) * (1.0 + x.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiagonal_lambda_max(d: &[f64], e: &[f64], n: usize) -> f64 {
    let radius = |i: usize| {
        let left = if i > 0 { e[i - 1] } else { 0.0 };
        let right = if i + 1 < n { e[i] } else { 0.0 };
        left + right
    };
    if e.iter().all(|&x| x == 0.0) {
        return d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    }
    let mut lo = (0..n).map(|i| d[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..n).map(|i| d[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let span = hi.abs().max(lo.abs());
    hi += f64::EPSILON * span;
    lo -= f64::EPSILON * span;
    let resolution = 0.5 * f64::EPSILON * span;
    while hi - lo > resolution.max(2.0 * f64::EPSILON * hi.abs().max(lo.abs())) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub(crate) fn spectral_radius(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
}

/// Largest singular value, computed as `sqrt(λ_max(T*T))`.
pub fn operator_norm(t: &ComplexMatrix) -> Result<f64> {
    if t.is_zero() {
        return Ok(0.0);
    }
    let gram = t.adjoint().try_mul(t)?;
    let vals = eigenvalues_of_hermitian_part(&gram)?;
    Ok(libm::sqrt(vals[vals.len() - 1].max(0.0)))
}

/// The positive square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-floor, 0)` are clamped to zero, where
/// `floor = atol + rtol·max(1, ‖P‖)`.
pub fn psd_sqrt(p: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(p, tol)?;
    let norm = spectral_radius(&eig.eigenvalues);
    let floor = tol.floor(norm);
    let lambda_min = eig.lambda_min();
    if lambda_min < -floor {
        return Err(Error::NotPositive { lambda_min, floor });
    }
    Ok(eig.map_spectrum(|l| libm::sqrt(l.max(0.0))))
}

/// `⟨Mx, x⟩ = Σ_i conj(x_i) (Mx)_i`.
pub fn quadratic_form(m: &ComplexMatrix, x: &ComplexVector) -> Result<Complex64> {
    m.require_square()?;
    Ok(m.try_mul_vec(x)?.inner(x))
}

/// Cyclic Jacobi on a Hermitian matrix. Returns ascending eigenvalues and,
/// if requested, the matching eigenvectors as columns.
fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = h.rows();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let frob = h.frobenius_norm();
    let target = frob * f64::EPSILON * 1e-2;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), n, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a, n) > target {
        return Err(Error::NumericalFailure("Jacobi eigensolver did not converge"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]));
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    libm::sqrt(acc)
}

/// Annihilates `a[p][q]` with the unitary `J = diag(1, e^{-iφ}) R(c, s)`
/// acting on coordinates `(p, q)`, then sets `a ← J* a J`, `v ← v J`.
fn rotate(a: &mut [Complex64], v: Option<&mut ComplexMatrix>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let alpha = a[p * n + p].re;
    let gamma = a[q * n + q].re;
    let theta = (gamma - alpha) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    let conj_phase = phase.conj();
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = conj_phase * -s;
    let jqq = conj_phase * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * jpp + akq * jqp;
        a[k * n + q] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * jpp + vkq * jqp;
            v[(k, q)] = vkp * jpq + vkq * jqq;
        }
    }
}
