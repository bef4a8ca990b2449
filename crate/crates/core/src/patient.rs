use serde::{Deserialize, Serialize};

use crate::classify::{categorize, Category};
use crate::error::{Error, Result};

/// Open range of plausible glucose readings, mg/dl.
pub const GLUCOSE_RANGE: (f64, f64) = (20.0, 600.0);

/// One patient's OGTT: glucose at 0, 30, 60, 90 and 120 minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatientRecord {
    pub id: String,
    pub glucose: [f64; 5],
    pub category: Category,
}

impl PatientRecord {
    pub fn new(id: impl Into<String>, glucose: [f64; 5]) -> Result<Self> {
        let id = id.into();
        let (lo, hi) = GLUCOSE_RANGE;
        if let Some(v) = glucose.iter().find(|v| !(**v > lo && **v < hi)) {
            return Err(Error::InvalidArgument(format!(
                "glucose value {v} outside ({lo}, {hi}) mg/dl"
            )));
        }
        Ok(Self {
            category: categorize(&glucose),
            id,
            glucose,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derives_category() {
        let r = PatientRecord::new("P01", [85.0, 130.0, 120.0, 100.0, 95.0]).unwrap();
        assert_eq!(r.category, Category::Healthy);
        let r = PatientRecord::new("P02", [105.0, 150.0, 140.0, 130.0, 118.0]).unwrap();
        assert_eq!(r.category, Category::Ifg);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PatientRecord::new("x", [20.0, 100.0, 100.0, 100.0, 100.0]).is_err());
        assert!(PatientRecord::new("x", [90.0, 100.0, 600.0, 100.0, 100.0]).is_err());
        assert!(PatientRecord::new("x", [90.0, f64::NAN, 100.0, 100.0, 100.0]).is_err());
    }
}
