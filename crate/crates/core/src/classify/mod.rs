//! Diagnostic categories and the insulin-score classifier.
//!
//! Each patient is mapped to the point `(1/θ1, 1/θ3)`: the reciprocal
//! insulin responses to blood and gastrointestinal glucose. One linear SVM is
//! trained per posterior quantile level; their majority vote is the
//! prediction, and disagreement between levels marks a patient as lying in
//! the transition zone between the classes.

pub mod category;
pub mod svm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{PosteriorSummary, QUANTILE_LEVELS};
use crate::model::{IDX_THETA1, IDX_THETA3};

pub use category::{categorize, Category, Class};
pub use svm::{svm_objective, train_linear_svm, Hyperplane};

pub const DEFAULT_SVM_C: f64 = 1.0;

/// Which posterior estimate feeds the insulin scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimate {
    Map,
    Cm,
    Median,
    /// Quantile level in percent, one of [`QUANTILE_LEVELS`].
    Quantile(u32),
}

/// `(1/θ1, 1/θ3)` at the selected estimate.
pub fn insulin_scores(summary: &PosteriorSummary, which: Estimate) -> Result<[f64; 2]> {
    let theta = match which {
        Estimate::Map => &summary.map,
        Estimate::Cm => &summary.cm,
        Estimate::Median => &summary.median,
        Estimate::Quantile(q) => summary
            .quantile(q)
            .ok_or_else(|| Error::InvalidScore(format!("no quantile level {q}")))?,
    };
    let (t1, t3) = (theta[IDX_THETA1], theta[IDX_THETA3]);
    if !(t1 > 0.0 && t3 > 0.0) {
        return Err(Error::InvalidScore(format!(
            "theta1 = {t1} and theta3 = {t3} must be positive"
        )));
    }
    Ok([1.0 / t1, 1.0 / t3])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileHyperplane {
    pub quantile: u32,
    pub w: [f64; 2],
    pub b: f64,
}

impl QuantileHyperplane {
    pub fn hyperplane(&self) -> Hyperplane {
        Hyperplane {
            w: self.w,
            b: self.b,
        }
    }
}

/// One hyperplane per quantile level in `(1/θ1, 1/θ3)` space. Positive
/// decision values point to the impaired class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub c: f64,
    pub hyperplanes: Vec<QuantileHyperplane>,
}

pub fn quantile_ensemble(
    summaries: &[PosteriorSummary],
    categories: &[Category],
    c: f64,
) -> Result<ClassifierModel> {
    quantile_ensemble_at(summaries, categories, c, &QUANTILE_LEVELS)
}

/// Like [`quantile_ensemble`] with a subset of the reported quantile levels.
pub fn quantile_ensemble_at(
    summaries: &[PosteriorSummary],
    categories: &[Category],
    c: f64,
    levels: &[u32],
) -> Result<ClassifierModel> {
    if levels.is_empty() {
        return Err(Error::Training("no quantile levels".into()));
    }
    if let Some(q) = levels.iter().find(|q| !QUANTILE_LEVELS.contains(q)) {
        return Err(Error::Training(format!(
            "quantile level {q} is not reported"
        )));
    }
    if summaries.len() != categories.len() {
        return Err(Error::Training(format!(
            "{} summaries but {} labels",
            summaries.len(),
            categories.len()
        )));
    }
    for class in [Class::Healthy, Class::Impaired] {
        let count = categories.iter().filter(|c| c.class() == class).count();
        if count < 2 {
            return Err(Error::Training(format!(
                "class {class} has {count} patients, need at least 2"
            )));
        }
    }
    let labels: Vec<f64> = categories.iter().map(|c| c.class().label()).collect();

    let train = |q: u32| -> Result<QuantileHyperplane> {
        let points = summaries
            .iter()
            .map(|s| insulin_scores(s, Estimate::Quantile(q)))
            .collect::<Result<Vec<_>>>()?;
        let h = train_linear_svm(&points, &labels, c)
            .map_err(|e| Error::Training(format!("quantile {q}: {e}")))?;
        Ok(QuantileHyperplane {
            quantile: q,
            w: h.w,
            b: h.b,
        })
    };
    let hyperplanes = std::thread::scope(|scope| {
        let handles: Vec<_> = levels
            .iter()
            .map(|&q| scope.spawn(move || train(q)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("training thread panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ClassifierModel { c, hyperplanes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub class: Class,
    /// Decision value per hyperplane, in the model's order.
    pub margins: Vec<f64>,
    pub impaired_votes: usize,
    /// Set when the quantile hyperplanes disagree.
    pub transition: bool,
}

/// Majority vote of the quantile hyperplanes. A point exactly on a
/// hyperplane votes impaired, and so does a tied vote.
pub fn predict(model: &ClassifierModel, summary: &PosteriorSummary) -> Result<Prediction> {
    let margins = model
        .hyperplanes
        .iter()
        .map(|h| {
            Ok(h.hyperplane()
                .decision(&insulin_scores(summary, Estimate::Quantile(h.quantile))?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let impaired_votes = margins.iter().filter(|m| **m >= 0.0).count();
    let healthy_votes = margins.len() - impaired_votes;
    let class = if impaired_votes >= healthy_votes {
        Class::Impaired
    } else {
        Class::Healthy
    };
    Ok(Prediction {
        class,
        transition: impaired_votes > 0 && healthy_votes > 0,
        margins,
        impaired_votes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn summary_at(theta1: f64, theta3: f64) -> PosteriorSummary {
        let v = [1.0, theta1, 10.0, 90.0, theta3];
        PosteriorSummary {
            map: v,
            map_logpost: 0.0,
            cm: v,
            median: v,
            std: [0.0; 5],
            quantiles: vec![v; QUANTILE_LEVELS.len()],
            iat: 1.0,
            iat_per_param: 0.2,
            rmse_at_map: 0.0,
        }
    }

    #[test]
    fn reciprocal_scores() {
        let mut s = summary_at(9.77, 6.77);
        let [a, b] = insulin_scores(&s, Estimate::Map).unwrap();
        assert!((a - 0.1024).abs() < 5e-5);
        assert!((b - 0.1477).abs() < 5e-5);
        s.map = [1.0, 1.0, 1.0, 90.0, 1.0];
        assert_eq!(insulin_scores(&s, Estimate::Map).unwrap(), [1.0, 1.0]);
        s.map[IDX_THETA1] = 0.0;
        assert!(matches!(
            insulin_scores(&s, Estimate::Map),
            Err(Error::InvalidScore(_))
        ));
        assert!(insulin_scores(&s, Estimate::Quantile(15)).is_err());
    }

    #[test]
    fn scores_decrease_with_gain() {
        let lo = insulin_scores(&summary_at(5.0, 5.0), Estimate::Median).unwrap();
        let hi = insulin_scores(&summary_at(6.0, 7.0), Estimate::Median).unwrap();
        assert!(hi[0] < lo[0] && hi[1] < lo[1]);
    }

    fn two_clusters() -> (Vec<PosteriorSummary>, Vec<Category>) {
        let mut s = Vec::new();
        let mut c = Vec::new();
        for k in 0..6 {
            let d = k as f64 * 0.3;
            s.push(summary_at(14.0 + d, 12.0 - d));
            c.push(if k % 2 == 0 {
                Category::Healthy
            } else {
                Category::Ifg
            });
            s.push(summary_at(4.0 + d, 3.0 + 0.5 * d));
            c.push(if k % 3 == 0 {
                Category::T2d
            } else {
                Category::Igt
            });
        }
        (s, c)
    }

    #[test]
    fn identical_quantiles_give_identical_planes() {
        let (s, c) = two_clusters();
        let m = quantile_ensemble(&s, &c, DEFAULT_SVM_C).unwrap();
        assert_eq!(m.hyperplanes.len(), 9);
        for h in &m.hyperplanes[1..] {
            assert!((h.w[0] - m.hyperplanes[0].w[0]).abs() < 1e-9);
            assert!((h.w[1] - m.hyperplanes[0].w[1]).abs() < 1e-9);
            assert!((h.b - m.hyperplanes[0].b).abs() < 1e-9);
        }
    }

    #[test]
    fn cluster_centres_separated() {
        let (s, c) = two_clusters();
        let m = quantile_ensemble(&s, &c, DEFAULT_SVM_C).unwrap();
        let healthy = predict(&m, &summary_at(15.0, 11.0)).unwrap();
        assert_eq!(healthy.class, Class::Healthy);
        assert!(!healthy.transition);
        assert_eq!(healthy.impaired_votes, 0);
        let impaired = predict(&m, &summary_at(4.5, 3.5)).unwrap();
        assert_eq!(impaired.class, Class::Impaired);
        assert!(!impaired.transition);
    }

    #[test]
    fn missing_class_is_an_error() {
        let s = vec![
            summary_at(10.0, 10.0),
            summary_at(11.0, 9.0),
            summary_at(3.0, 3.0),
        ];
        let c = vec![Category::Healthy, Category::Healthy, Category::Igt];
        assert!(matches!(
            quantile_ensemble(&s, &c, 1.0),
            Err(Error::Training(_))
        ));
    }

    fn hand_model(biases: &[f64]) -> ClassifierModel {
        ClassifierModel {
            c: 1.0,
            hyperplanes: biases
                .iter()
                .zip(QUANTILE_LEVELS)
                .map(|(b, q)| QuantileHyperplane {
                    quantile: q,
                    w: [1.0, 0.0],
                    b: *b,
                })
                .collect(),
        }
    }

    #[test]
    fn boundary_votes_impaired() {
        // score 1/θ1 = 0.25 lies exactly on x = 0.25
        let m = hand_model(&[-0.25; 9]);
        let p = predict(&m, &summary_at(4.0, 4.0)).unwrap();
        assert!(p.margins.iter().all(|v| *v == 0.0));
        assert_eq!(p.class, Class::Impaired);
    }

    #[test]
    fn split_vote_sets_transition() {
        // five planes put the point on the impaired side, four on the healthy side
        let m = hand_model(&[-0.2, -0.2, -0.2, -0.2, -0.2, -0.3, -0.3, -0.3, -0.3]);
        let p = predict(&m, &summary_at(4.0, 4.0)).unwrap();
        assert_eq!(p.impaired_votes, 5);
        assert_eq!(p.class, Class::Impaired);
        assert!(p.transition);
    }
}
