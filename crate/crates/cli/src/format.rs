//! JSON file formats for matrices and vectors.
//!
//! Matrices are `{"rows": n, "cols": m, "data": [[re, im], ...]}` in row-major
//! order; vectors are `{"dim": n, "data": [[re, im], ...]}`.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use reid_core::{Complex64, ComplexMatrix, ComplexVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

fn pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

fn complexes(p: &[[f64; 2]]) -> Vec<Complex64> {
    p.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: pairs(m.as_slice()),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = reid_core::Error;

    fn try_from(m: MatrixJson) -> reid_core::Result<Self> {
        ComplexMatrix::new(m.rows, m.cols, complexes(&m.data))
    }
}

impl From<&ComplexVector> for VectorJson {
    fn from(v: &ComplexVector) -> Self {
        Self {
            dim: v.dim(),
            data: pairs(v.as_slice()),
        }
    }
}

impl TryFrom<VectorJson> for ComplexVector {
    type Error = reid_core::Error;

    fn try_from(v: VectorJson) -> reid_core::Result<Self> {
        if v.data.len() != v.dim {
            return Err(reid_core::Error::DimensionMismatch {
                expected: v.dim,
                found: v.data.len(),
            });
        }
        ComplexVector::new(complexes(&v.data))
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let raw: MatrixJson = serde_json::from_str(text).context("not a JSON matrix")?;
    Ok(ComplexMatrix::try_from(raw)?)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn matrix_to_string(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrices serialize")
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, matrix_to_string(m) + "\n").with_context(|| format!("writing {}", path.display()))
}
