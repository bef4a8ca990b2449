//! Soft-margin linear SVM in two dimensions,
//!
//! ```text
//! minimize  ½‖w‖² + C Σ max(0, 1 - yᵢ (w·xᵢ + b))
//! ```
//!
//! solved in the dual by sequential minimal optimization with maximal
//! violating pair selection. The solver is deterministic: the working set is
//! chosen by a fixed scan order and ties go to the lowest index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const KKT_TOLERANCE: f64 = 1e-12;
const MAX_ITER_PER_POINT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub w: [f64; 2],
    pub b: f64,
}

impl Hyperplane {
    pub fn decision(&self, x: &[f64; 2]) -> f64 {
        self.w[0] * x[0] + self.w[1] * x[1] + self.b
    }
}

/// Primal objective `½‖w‖² + C Σ hinge`.
pub fn svm_objective(h: &Hyperplane, points: &[[f64; 2]], labels: &[f64], c: f64) -> f64 {
    let hinge: f64 = points
        .iter()
        .zip(labels)
        .map(|(x, y)| (1.0 - y * h.decision(x)).max(0.0))
        .sum();
    0.5 * (h.w[0] * h.w[0] + h.w[1] * h.w[1]) + c * hinge
}

fn dot(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Midpoint of the set of biases minimizing `Σ hinge(1 - yᵢ (w·xᵢ + b))` for
/// fixed `w`. The loss is convex and piecewise linear in `b` with kinks at
/// `yᵢ - w·xᵢ`, so the minimizing interval has kinks as endpoints.
fn optimal_bias_midpoint(w: &[f64; 2], points: &[[f64; 2]], labels: &[f64]) -> f64 {
    let loss = |b: f64| -> f64 {
        points
            .iter()
            .zip(labels)
            .map(|(x, y)| (1.0 - y * (dot(w, x) + b)).max(0.0))
            .sum()
    };
    let kinks: Vec<f64> = points
        .iter()
        .zip(labels)
        .map(|(x, y)| y - dot(w, x))
        .collect();
    let values: Vec<f64> = kinks.iter().map(|b| loss(*b)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * best.abs().max(1.0);
    let (lo, hi) = kinks
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v <= best + tol)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (b, _)| {
            (lo.min(*b), hi.max(*b))
        });
    0.5 * (lo + hi)
}

pub fn train_linear_svm(points: &[[f64; 2]], labels: &[f64], c: f64) -> Result<Hyperplane> {
    let n = points.len();
    if n != labels.len() {
        return Err(Error::Training(format!(
            "{n} points but {} labels",
            labels.len()
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Training(format!("C must be positive, got {c}")));
    }
    if labels.iter().any(|y| *y != 1.0 && *y != -1.0) {
        return Err(Error::Training("labels must be +1 or -1".into()));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Training("non-finite feature value".into()));
    }
    if !labels.contains(&1.0) || !labels.contains(&-1.0) {
        return Err(Error::Training(
            "both classes need at least one point".into(),
        ));
    }
    if points.iter().all(|p| p == &points[0]) {
        return Err(Error::Training("all points are identical".into()));
    }

    let kernel: Vec<Vec<f64>> = points
        .iter()
        .map(|a| points.iter().map(|b| dot(a, b)).collect())
        .collect();
    let mut alpha = vec![0.0; n];
    // gradient of ½αᵀQα - eᵀα with Q_ij = yᵢ yⱼ xᵢ·xⱼ
    let mut grad = vec![-1.0; n];

    let in_up = |a: f64, y: f64| (y > 0.0 && a < c) || (y < 0.0 && a > 0.0);
    let in_low = |a: f64, y: f64| (y > 0.0 && a > 0.0) || (y < 0.0 && a < c);

    for _ in 0..MAX_ITER_PER_POINT * n {
        let mut i = usize::MAX;
        let mut j = usize::MAX;
        let mut up_max = f64::NEG_INFINITY;
        let mut low_min = f64::INFINITY;
        for t in 0..n {
            let v = -labels[t] * grad[t];
            if in_up(alpha[t], labels[t]) && v > up_max {
                up_max = v;
                i = t;
            }
            if in_low(alpha[t], labels[t]) && v < low_min {
                low_min = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || up_max - low_min <= KKT_TOLERANCE {
            break;
        }

        // move along α_i += y_i t, α_j -= y_j t
        let curvature = kernel[i][i] + kernel[j][j] - 2.0 * kernel[i][j];
        let slope = labels[i] * grad[i] - labels[j] * grad[j];
        let bound_i = if labels[i] > 0.0 {
            c - alpha[i]
        } else {
            alpha[i]
        };
        let bound_j = if labels[j] > 0.0 {
            alpha[j]
        } else {
            c - alpha[j]
        };
        let bound = bound_i.min(bound_j);
        let t = if curvature > 0.0 {
            (-slope / curvature).min(bound)
        } else {
            bound
        };
        if t.is_nan() || t <= 0.0 {
            break;
        }
        let di = labels[i] * t;
        let dj = -labels[j] * t;
        alpha[i] = (alpha[i] + di).clamp(0.0, c);
        alpha[j] = (alpha[j] + dj).clamp(0.0, c);
        for k in 0..n {
            grad[k] += labels[k] * (labels[i] * kernel[k][i] * di + labels[j] * kernel[k][j] * dj);
        }
    }

    let mut w = [0.0; 2];
    for t in 0..n {
        w[0] += alpha[t] * labels[t] * points[t][0];
        w[1] += alpha[t] * labels[t] * points[t][1];
    }

    // the bias minimizing the primal for this w; taken from the primal
    // rather than from free support vectors because the optimum can be a
    // whole interval, and its midpoint does not depend on feature scaling
    let b = optimal_bias_midpoint(&w, points, labels);

    if w == [0.0, 0.0] {
        return Err(Error::Training(
            "degenerate solution with zero weight vector".into(),
        ));
    }
    Ok(Hyperplane { w, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_max_margin() {
        let h = train_linear_svm(&[[0.0, 0.0], [2.0, 0.0]], &[-1.0, 1.0], 1e6).unwrap();
        assert!((h.w[0] - 1.0).abs() < 1e-9);
        assert!(h.w[1].abs() < 1e-12);
        assert!((h.b + 1.0).abs() < 1e-9);
        assert!(h.decision(&[1.0, 0.0]).abs() < 1e-9);
    }

    #[test]
    fn label_flip_negates() {
        let pts = [[0.1, 0.3], [0.2, 0.1], [0.5, 0.9], [0.7, 0.6], [0.4, 0.5]];
        let y = [-1.0, -1.0, 1.0, 1.0, -1.0];
        let flipped: Vec<f64> = y.iter().map(|v| -v).collect();
        let a = train_linear_svm(&pts, &y, 3.0).unwrap();
        let b = train_linear_svm(&pts, &flipped, 3.0).unwrap();
        assert!((a.w[0] + b.w[0]).abs() < 1e-8);
        assert!((a.w[1] + b.w[1]).abs() < 1e-8);
        assert!((a.b + b.b).abs() < 1e-8);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            train_linear_svm(&[[1.0, 1.0], [1.0, 1.0]], &[1.0, -1.0], 1.0),
            Err(Error::Training(_))
        ));
        assert!(matches!(
            train_linear_svm(&[[1.0, 1.0], [2.0, 1.0]], &[1.0, 1.0], 1.0),
            Err(Error::Training(_))
        ));
        assert!(train_linear_svm(&[[1.0, 1.0], [2.0, 1.0]], &[1.0, -1.0], 0.0).is_err());
    }

    #[test]
    fn overlapping_classes_stay_finite() {
        let pts = [
            [0.0, 0.0],
            [1.0, 1.0],
            [0.9, 1.1],
            [0.1, -0.1],
            [0.5, 0.5],
            [0.5, 0.5],
        ];
        let y = [-1.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        let h = train_linear_svm(&pts, &y, 1.0).unwrap();
        assert!(h.w.iter().all(|v| v.is_finite()) && h.b.is_finite());
    }
}
