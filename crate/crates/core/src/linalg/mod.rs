//! Exact rational linear and affine algebra.

mod affine;
mod matrix;
mod scalar;

pub use affine::{
    b_orth_complement, b_project, intersect_affine, project_onto_span, span_affine, AffSub, Ambient,
};
pub use matrix::{nullspace, rows_matrix, rref, solve, Matrix, Vector};
pub use scalar::Scalar;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A symmetric positive-definite bilinear form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramForm {
    m: Matrix,
    inv: Matrix,
}

impl GramForm {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() || !m.is_symmetric() {
            return Err(Error::Internal("gram form must be square and symmetric".into()));
        }
        for k in 1..=m.rows() {
            let minor = Matrix::from_rows((0..k).map(|i| m.row(i)[..k].to_vec()).collect());
            if !minor.determinant().is_positive() {
                return Err(Error::Internal("gram form is not positive definite".into()));
            }
        }
        let inv = m.inverse().expect("positive definite forms are invertible");
        Ok(GramForm { m, inv })
    }

    pub fn standard(n: usize) -> Self {
        GramForm { m: Matrix::identity(n), inv: Matrix::identity(n) }
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inv
    }

    pub fn rank(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// `G v`, the covector `g(v, ·)` in coordinates.
    pub fn apply(&self, v: &Vector) -> Vector {
        self.m.mul_vec(v)
    }

    pub fn inner(&self, a: &Vector, b: &Vector) -> Scalar {
        self.apply(a).dot(b)
    }

    pub fn norm2(&self, a: &Vector) -> Scalar {
        self.inner(a, a)
    }
}

impl std::fmt::Debug for GramForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Gram{:?}", self.m)
    }
}
