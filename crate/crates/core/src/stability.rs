//! Local attractivity of the two linear modes of the switched system.
//!
//! Above basal glucose the (X, I1, I2) block reduces to the third-order
//! equation `x''' + 4λ5 x'' + 4λ5² x' + 2λ5 θ1 x = f(t)`, whose characteristic
//! polynomial `t³ + 4λ5 t² + 4λ5² t + 2λ5 θ1` is solved here with Cardano's
//! formulas. Below basal glucose the same polynomial appears with
//! `(θ2, λ7)` in place of `(θ1, λ5)`.

use nalgebra::{Complex, SMatrix};

use crate::model::ModelParams;

/// Empirical gain bound under which both modes are attractive for the
/// default clearance rates. Informational only: [`is_locally_attractive`]
/// decides from the roots.
pub const PRACTICAL_GAIN_BOUND: f64 = 29.0;

/// Gain at which the discriminant vanishes, `16/27 λ²`.
pub fn discriminant_root(lambda: f64) -> f64 {
    16.0 / 27.0 * lambda * lambda
}

/// Discriminant `-4 λ² θ (-16 λ² + 27 θ)` of the characteristic cubic.
pub fn cubic_discriminant(theta1: f64, lambda5: f64) -> f64 {
    let l2 = lambda5 * lambda5;
    -4.0 * l2 * theta1 * (-16.0 * l2 + 27.0 * theta1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub roots: [Complex<f64>; 3],
    pub discriminant: f64,
    /// `b² - 3ac = 4λ²`.
    pub delta0: f64,
    /// `2b³ - 9abc + 27a²d = 2λ(-8λ² + 27θ)`.
    pub delta1: f64,
    /// Cardano's `C`, real whenever the discriminant is nonpositive.
    pub c: Complex<f64>,
}

impl CubicRoots {
    pub fn max_real_part(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| r.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_real(&self) -> bool {
        self.roots.iter().all(|r| r.im == 0.0)
    }
}

/// Coefficients `[b, c, d]` of the monic characteristic cubic.
pub fn characteristic_coefficients(theta1: f64, lambda5: f64) -> [f64; 3] {
    [
        4.0 * lambda5,
        4.0 * lambda5 * lambda5,
        2.0 * lambda5 * theta1,
    ]
}

/// Evaluates the characteristic cubic at a complex point.
pub fn characteristic_poly(x: Complex<f64>, theta1: f64, lambda5: f64) -> Complex<f64> {
    let [b, c, d] = characteristic_coefficients(theta1, lambda5);
    ((x + b) * x + c) * x + d
}

/// Roots of `t³ + 4λ5 t² + 4λ5² t + 2λ5 θ1` by Cardano's formulas.
///
/// When `θ1 ≥ 16/27 λ5²` the quantity `C` is real and the conjugate pair is
/// assembled from its real and imaginary parts, so the two complex roots are
/// exact conjugates. Otherwise the three roots are real and the round-off
/// imaginary parts of the complex evaluation are dropped. Real roots are
/// returned in decreasing order.
pub fn characteristic_roots(theta1: f64, lambda5: f64) -> CubicRoots {
    let [b, _, _] = characteristic_coefficients(theta1, lambda5);
    let l2 = lambda5 * lambda5;
    let delta0 = 4.0 * l2;
    let delta1 = 2.0 * lambda5 * (-8.0 * l2 + 27.0 * theta1);
    let discriminant = cubic_discriminant(theta1, lambda5);
    // Δ1² - 4Δ0³ in the factored form 4λ² · 27θ (27θ - 16λ²)
    let inner = 4.0 * l2 * 27.0 * theta1 * (27.0 * theta1 - 16.0 * l2);

    if inner >= 0.0 {
        let c = (0.5 * (delta1 + inner.sqrt())).cbrt();
        let x0 = -(b + c + delta0 / c) / 3.0;
        let re = -(b - 0.5 * c - 0.5 * delta0 / c) / 3.0;
        let im = -(3f64.sqrt() / 2.0) * (c - delta0 / c) / 3.0;
        let roots = if im == 0.0 {
            let mut r = [x0, re, re];
            r.sort_by(|a, b| b.total_cmp(a));
            r.map(|v| Complex::new(v, 0.0))
        } else {
            [
                Complex::new(x0, 0.0),
                Complex::new(re, im),
                Complex::new(re, -im),
            ]
        };
        return CubicRoots {
            roots,
            discriminant,
            delta0,
            delta1,
            c: Complex::new(c, 0.0),
        };
    }

    let sqrt_inner = Complex::new(0.0, (-inner).sqrt());
    let plus = (Complex::new(delta1, 0.0) + sqrt_inner) * 0.5;
    let minus = (Complex::new(delta1, 0.0) - sqrt_inner) * 0.5;
    let radicand = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };
    let c = radicand.cbrt();
    let xi = Complex::new(-0.5, 3f64.sqrt() / 2.0);
    let mut real = [0.0; 3];
    let mut xik = Complex::new(1.0, 0.0);
    for r in &mut real {
        let ck = xik * c;
        *r = (-(Complex::new(b, 0.0) + ck + delta0 / ck) / 3.0).re;
        xik *= xi;
    }
    real.sort_by(|a, b| b.total_cmp(a));
    CubicRoots {
        roots: real.map(|v| Complex::new(v, 0.0)),
        discriminant,
        delta0,
        delta1,
        c,
    }
}

/// The admissible range of Cardano's `C` for which the complex pair has a
/// negative real part, `((4 - 2√3) λ, (4 + 2√3) λ)`.
pub fn attractive_c_interval(lambda5: f64) -> (f64, f64) {
    let s = 2.0 * 3f64.sqrt();
    ((4.0 - s) * lambda5, (4.0 + s) * lambda5)
}

/// True iff every root of both modes has a strictly negative real part.
pub fn is_locally_attractive(theta1: f64, theta2: f64, lambda5: f64, lambda7: f64) -> bool {
    let inputs = [theta1, theta2, lambda5, lambda7];
    if inputs.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return false;
    }
    characteristic_roots(theta1, lambda5).max_real_part() < 0.0
        && characteristic_roots(theta2, lambda7).max_real_part() < 0.0
}

pub type ModeMatrix = SMatrix<f64, 7, 7>;

/// Full 7×7 system matrices of the two linear modes in the coordinates
/// `(X, I1, I2, L1, L2, V1, V2)` with `X = G - Gb`: `(above, below)`.
pub fn mode_matrices(p: &ModelParams) -> (ModeMatrix, ModeMatrix) {
    let k5 = 2.0 * p.lambda5;
    let k7 = 2.0 * p.lambda7;
    let k0 = 2.0 * p.theta0;
    let mut base = ModeMatrix::zeros();
    base[(0, 2)] = -1.0;
    base[(0, 4)] = 1.0;
    base[(0, 6)] = p.theta0;
    base[(1, 1)] = -k5;
    base[(1, 6)] = p.theta3;
    base[(2, 1)] = k5;
    base[(2, 2)] = -k5;
    base[(3, 3)] = -k7;
    base[(4, 3)] = k7;
    base[(4, 4)] = -k7;
    base[(5, 5)] = -k0;
    base[(6, 5)] = k0;
    base[(6, 6)] = -k0;

    let mut above = base;
    above[(1, 0)] = p.theta1;
    let mut below = base;
    below[(3, 0)] = -p.theta2;
    (above, below)
}
