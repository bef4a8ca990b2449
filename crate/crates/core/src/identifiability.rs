//! Similarity-transform check for the reduced four-state system above basal
//! glucose, in coordinates `(X, I1, L1, V1)` with `X = G - Gb` observed.
//!
//! For two parameter sets that differ only in θ3, the transform
//!
//! ```text
//!     | 1 0 0 0              |
//! T = | 0 1 0 θ0 (T44 - 1)   |      T44 = (θ3~ + θ0(θ0 - λ5)) / (θ3 + θ0(θ0 - λ5))
//!     | 0 0 1 0              |
//!     | 0 0 0 T44            |
//! ```
//!
//! satisfies `A(θ) T = T A(θ~)` and leaves the observed first row untouched,
//! so θ3 cannot be recovered from glucose alone. θ0 and θ1 admit no such
//! transform.
//!
//! The identity is a statement about system matrices. It does not by itself
//! imply indistinguishable outputs under the fixed OGTT initial state
//! `(X0, 0, 0, V0)`: `T` moves that state through `T24 ≠ 0`.

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// System matrix of the reduced model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSystemMatrix(pub Matrix4<f64>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityTransform(pub Matrix4<f64>);

impl SimilarityTransform {
    pub fn t44(&self) -> f64 {
        self.0[(3, 3)]
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

/// ```text
/// X'  = -I1 + L1 + θ0 V1
/// I1' = θ1 X - λ5 I1 + θ3 V1
/// L1' = -λ7 L1
/// V1' = -θ0 V1
/// ```
pub fn reduced_matrix(
    theta0: f64,
    theta1: f64,
    theta3: f64,
    lambda5: f64,
    lambda7: f64,
) -> ReducedSystemMatrix {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0,    -1.0,     1.0,      theta0,
        theta1, -lambda5, 0.0,      theta3,
        0.0,    0.0,      -lambda7, 0.0,
        0.0,    0.0,      0.0,      -theta0,
    );
    ReducedSystemMatrix(m)
}

pub fn build_transform(
    theta3: f64,
    theta3_tilde: f64,
    theta0: f64,
    lambda5: f64,
) -> Result<SimilarityTransform> {
    let shift = theta0 * (theta0 - lambda5);
    let denominator = theta3 + shift;
    if denominator == 0.0 || !denominator.is_finite() {
        return Err(Error::SingularTransform);
    }
    let t44 = (theta3_tilde + shift) / denominator;
    if t44 == 0.0 {
        return Err(Error::SingularTransform);
    }
    let mut t = Matrix4::identity();
    t[(3, 3)] = t44;
    t[(1, 3)] = theta0 * (t44 - 1.0);
    Ok(SimilarityTransform(t))
}

/// Max-norm of `A T - T Ã`.
pub fn verify_similarity(
    a: &ReducedSystemMatrix,
    a_tilde: &ReducedSystemMatrix,
    t: &SimilarityTransform,
) -> f64 {
    (a.0 * t.0 - t.0 * a_tilde.0).amax()
}
