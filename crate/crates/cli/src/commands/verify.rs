//! Numerical checks of the stability and identifiability results.

use std::io::Write;

use ogtt_core::identifiability::{build_transform, reduced_matrix, verify_similarity};
use ogtt_core::model::{ModelParams, HORMONE_CLEARANCE};
use ogtt_core::stability::{
    characteristic_poly, characteristic_roots, cubic_discriminant, discriminant_root,
    is_locally_attractive, mode_matrices, PRACTICAL_GAIN_BOUND,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub draws: usize,
    pub seed: u64,
    pub similarity_tol: f64,
    /// Residual that a perturbed θ0 or θ1 must exceed.
    pub identifiable_min: f64,
    pub root_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            draws: 200,
            seed: 0,
            similarity_tol: 1e-12,
            identifiable_min: 1e-6,
            root_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub detail: String,
    pub pass: bool,
}

fn check(name: &'static str, value: f64, detail: String, pass: bool) -> Check {
    Check {
        name,
        value,
        detail,
        pass,
    }
}

pub fn run_checks(opts: &VerifyOptions) -> Vec<Check> {
    let l = HORMONE_CLEARANCE;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();

    // identifiability: θ3 can be moved by a similarity transform, θ0 and θ1
    // cannot
    let mut worst_same = 0.0f64;
    let mut weakest_moved = f64::INFINITY;
    let mut done = 0;
    while done < opts.draws {
        let theta0 = rng.random_range(0.5..3.0);
        let theta1 = rng.random_range(1.0..20.0);
        let theta3 = rng.random_range(1.0..20.0);
        let theta3_t = rng.random_range(1.0..20.0);
        let delta = rng.random_range(0.01..1.0);
        let Ok(t) = build_transform(theta3, theta3_t, theta0, l) else {
            continue;
        };
        let a = reduced_matrix(theta0, theta1, theta3, l, l);
        let same = reduced_matrix(theta0, theta1, theta3_t, l, l);
        let scale = a.0.amax().max(same.0.amax()).max(t.0.amax());
        worst_same = worst_same.max(verify_similarity(&a, &same, &t) / scale);
        for moved in [
            reduced_matrix(theta0 + delta, theta1, theta3_t, l, l),
            reduced_matrix(theta0, theta1 + delta, theta3_t, l, l),
        ] {
            weakest_moved = weakest_moved.min(verify_similarity(&a, &moved, &t));
        }
        done += 1;
    }
    checks.push(check(
        "similarity residual, theta3 changed",
        worst_same,
        format!(
            "max relative over {} draws, tol {:e}",
            opts.draws, opts.similarity_tol
        ),
        worst_same <= opts.similarity_tol,
    ));
    checks.push(check(
        "similarity residual, theta0 or theta1 changed",
        weakest_moved,
        format!(
            "min over {} draws, must exceed {:e}",
            opts.draws, opts.identifiable_min
        ),
        weakest_moved > opts.identifiable_min,
    ));

    // stability
    let root = discriminant_root(l);
    let at_root = cubic_discriminant(root, l);
    checks.push(check(
        "discriminant at 16/27 lambda5^2",
        at_root,
        format!("theta1 = {}", format::num(root)),
        at_root.abs() <= 1e-12,
    ));

    let sweep: Vec<f64> = (1..=100).map(|k| k as f64 * 0.05).collect();
    let signs: Vec<f64> = sweep
        .iter()
        .map(|t| cubic_discriminant(*t, l).signum())
        .collect();
    let changes: Vec<usize> = (1..signs.len())
        .filter(|&i| signs[i] != signs[i - 1])
        .collect();
    let crossing = changes
        .first()
        .map(|&i| {
            format!(
                "sign change between theta1 = {} and {}",
                format::num(sweep[i - 1]),
                format::num(sweep[i])
            )
        })
        .unwrap_or_else(|| "no sign change".into());
    let pattern_ok = sweep
        .iter()
        .zip(&signs)
        .all(|(t, s)| if *t < root { *s > 0.0 } else { *s < 0.0 });
    checks.push(check(
        "discriminant sign sweep",
        changes.len() as f64,
        crossing,
        pattern_ok && changes.len() == 1,
    ));

    let mut worst_residual = 0.0f64;
    let mut bracketed = true;
    let mut conjugate = true;
    for &theta1 in sweep.iter().chain(&[0.0, root]) {
        let r = characteristic_roots(theta1, l);
        for x in r.roots {
            let scale = x.norm().powi(3).max(1.0);
            worst_residual = worst_residual.max(characteristic_poly(x, theta1, l).norm() / scale);
        }
        if r.discriminant > 0.0 {
            let [x1, x2, x3] = r.roots.map(|z| z.re);
            bracketed &= r.all_real()
                && -2.0 * l / 3.0 < x1
                && x1 < 0.0
                && -2.0 * l < x2
                && x2 < -2.0 * l / 3.0
                && -4.0 * l < x3
                && x3 < -2.0 * l;
        } else if r.discriminant < 0.0 {
            conjugate &= r.roots[1] == r.roots[2].conj() && r.roots[1].im != 0.0;
        }
    }
    checks.push(check(
        "cubic root residual",
        worst_residual,
        format!("relative, tol {:e}", opts.root_tol),
        worst_residual <= opts.root_tol,
    ));
    checks.push(check(
        "real roots bracketed",
        bracketed as u8 as f64,
        "positive discriminant".into(),
        bracketed,
    ));
    checks.push(check(
        "complex roots conjugate",
        conjugate as u8 as f64,
        "negative discriminant".into(),
        conjugate,
    ));

    let mut disagreements = 0;
    for _ in 0..opts.draws {
        let theta = [
            rng.random_range(0.5..3.0),
            rng.random_range(0.01..60.0),
            rng.random_range(0.01..60.0),
            rng.random_range(70.0..110.0),
            rng.random_range(0.1..20.0),
        ];
        let p = ModelParams::from_vector(&theta);
        let (above, below) = mode_matrices(&p);
        let eig_stable = above
            .complex_eigenvalues()
            .iter()
            .chain(below.complex_eigenvalues().iter())
            .all(|e| e.re < 0.0);
        if eig_stable != is_locally_attractive(p.theta1, p.theta2, p.lambda5, p.lambda7) {
            disagreements += 1;
        }
    }
    checks.push(check(
        "attractivity vs 7x7 eigenvalues",
        disagreements as f64,
        format!("disagreements over {} draws", opts.draws),
        disagreements == 0,
    ));

    let bound = PRACTICAL_GAIN_BOUND;
    let below_bound = is_locally_attractive(bound - 1e-9, bound - 1e-9, l, l);
    checks.push(check(
        "gains below 29 attractive",
        bound,
        "informational".into(),
        below_bound,
    ));
    checks
}

pub fn write_table(checks: &[Check], out: &mut dyn Write) -> std::io::Result<()> {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in checks {
        writeln!(
            out,
            "{:<6} {:<width$}  {:>22}  {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            format!("{:e}", c.value),
            c.detail
        )?;
    }
    Ok(())
}
