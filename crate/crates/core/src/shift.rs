//! The truncated unilateral shift counterexample.
//!
//! `S e_i = e_{i+1}` for `i < n` and `S e_n = 0` (ones on the subdiagonal).
//! With `A = SS* = diag(0, 1, …, 1)`, `K = S` and `x = (2, 1, 0, …, 0)`:
//!
//! ```text
//! |⟨Sx, x⟩| = 2,   ‖K‖·⟨Ax, x⟩ = ‖S*x‖² = 1
//! ```
//!
//! so the Reid inequality fails. `x` is supported on two coordinates, so
//! every quantity is an integer and independent of the truncation size
//! `n >= 2`. All of it is computed here in `i64` arithmetic.
//!
//! The truncation is *not* hyponormal: `S*S - SS* = diag(1, 0, …, 0, -1)`.
//! Hyponormality of the shift is a property of the infinite-dimensional
//! operator only.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::certifier::{certify_reid, CertStatus, GapCertificate, ReidInstance};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::predicates::{normality_defect, DefectReport};
use crate::tolerance::TolerancePolicy;

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * m.n + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        out.data[i * n + j] += a * rhs.data[k * n + j];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨Mx, x⟩` for a real integer vector.
    pub fn quadratic_form(&self, x: &[i64]) -> i64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| Complex64::new(self.get(i, j) as f64, 0.0))
    }
}

/// `S`, `A = SS*`, `K = S` and `x = (2, 1, 0, …, 0)` at truncation size `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftInstance {
    pub n: usize,
    pub s: IntMatrix,
    pub a: IntMatrix,
    pub x_witness: Vec<i64>,
}

impl ShiftInstance {
    /// `K = S`.
    pub fn k(&self) -> &IntMatrix {
        &self.s
    }

    pub fn x_witness_complex(&self) -> ComplexVector {
        let data = self.x_witness.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
        ComplexVector::new(data).expect("n >= 2")
    }

    pub fn reid_instance(&self) -> Result<ReidInstance> {
        ReidInstance::new(self.a.to_complex(), self.s.to_complex(), &TolerancePolicy::default())
    }
}

pub fn build_shift_instance(n: usize) -> Result<ShiftInstance> {
    if n < 2 {
        return Err(Error::BadDimension { n, min: 2 });
    }
    let mut s = IntMatrix::zeros(n);
    for i in 0..n - 1 {
        s.data[(i + 1) * n + i] = 1;
    }
    let a = s.mul(&s.transpose());
    let mut x_witness = vec![0; n];
    x_witness[0] = 2;
    x_witness[1] = 1;
    Ok(ShiftInstance { n, s, a, x_witness })
}

/// Exact check of `SS*S = S`.
pub fn verify_ak_equals_s(inst: &ShiftInstance) -> bool {
    inst.a.mul(&inst.s) == inst.s
}

/// Exact check of the adjoint identity `S*SS* = S*`.
pub fn verify_adjoint_identity(inst: &ShiftInstance) -> bool {
    let st = inst.s.transpose();
    st.mul(&inst.s).mul(&st) == st
}

/// `‖T‖` in exact arithmetic when `T*T` is diagonal with a perfect-square
/// maximum (true for partial isometries such as `S`).
pub fn exact_norm(t: &IntMatrix) -> Option<i64> {
    let gram = t.transpose().mul(t);
    if !gram.is_diagonal() {
        return None;
    }
    let max = (0..gram.dim()).map(|i| gram.get(i, i)).max()?;
    let root = libm::sqrt(max as f64) as i64;
    (root.checked_mul(root)? == max).then_some(root)
}

/// The counterexample's chain of values and the certifier's verdict on the
/// same instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationReport {
    pub n: usize,
    /// `|⟨Sx, x⟩|`.
    pub lhs: i64,
    /// `‖S*x‖²`, i.e. `⟨Ax, x⟩`.
    pub adjoint_image_norm_sq: i64,
    /// `‖K‖`.
    pub k_norm: i64,
    /// `‖K‖·⟨Ax, x⟩`.
    pub rhs: i64,
    pub gap: i64,
    pub ak_equals_s: bool,
    pub certificate: GapCertificate,
}

impl ViolationReport {
    /// The exact values are `(2, 1, 1)` and the certifier says VIOLATED.
    pub fn agrees(&self) -> bool {
        self.lhs == 2
            && self.rhs == 1
            && self.gap == 1
            && self.ak_equals_s
            && self.certificate.status == CertStatus::Violated
    }
}

pub fn shift_counterexample(n: usize) -> Result<ViolationReport> {
    shift_counterexample_with(n, &TolerancePolicy::default())
}

pub fn shift_counterexample_with(n: usize, tol: &TolerancePolicy) -> Result<ViolationReport> {
    let inst = build_shift_instance(n)?;
    let x = &inst.x_witness;
    let lhs = inst.s.quadratic_form(x).abs();
    let st_x = inst.s.transpose().mul_vec(x);
    let adjoint_image_norm_sq: i64 = st_x.iter().map(|v| v * v).sum();
    let k_norm = exact_norm(inst.k()).ok_or(Error::NumericalFailure("shift norm is not exact"))?;
    let rhs = k_norm * inst.a.quadratic_form(x);
    let reid = inst.reid_instance()?;
    let epsilon = crate::certifier::default_epsilon(reid.product())?;
    let certificate = certify_reid(&reid, epsilon, tol)?;
    Ok(ViolationReport {
        n,
        lhs,
        adjoint_image_norm_sq,
        k_norm,
        rhs,
        gap: lhs - rhs,
        ak_equals_s: verify_ak_equals_s(&inst),
        certificate,
    })
}

/// Self-commutator of the truncated shift: `λ_min = -1` for every `n >= 2`.
pub fn finite_dim_hyponormality_note(inst: &ShiftInstance) -> Result<DefectReport> {
    normality_defect(&inst.s.to_complex())
}
