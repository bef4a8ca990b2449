use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Fasting glucose at or above which fasting glucose is impaired, mg/dl.
pub const IFG_FASTING: f64 = 100.0;
/// Two-hour glucose at or above which glucose tolerance is impaired, mg/dl.
pub const IGT_TWO_HOUR: f64 = 140.0;
pub const T2D_FASTING: f64 = 126.0;
pub const T2D_TWO_HOUR: f64 = 200.0;

/// Diagnostic category from the OGTT thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    #[serde(rename = "H")]
    Healthy,
    #[serde(rename = "IFG")]
    Ifg,
    #[serde(rename = "IGT")]
    Igt,
    #[serde(rename = "IFG-IGT")]
    IfgIgt,
    #[serde(rename = "T2D")]
    T2d,
}

/// The two classes separated by the SVM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Healthy,
    Impaired,
}

impl Class {
    /// SVM label: impaired is the positive class.
    pub fn label(self) -> f64 {
        match self {
            Class::Healthy => -1.0,
            Class::Impaired => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Class::Healthy => "healthy",
            Class::Impaired => "impaired",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Healthy,
        Category::Ifg,
        Category::Igt,
        Category::IfgIgt,
        Category::T2d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Healthy => "H",
            Category::Ifg => "IFG",
            Category::Igt => "IGT",
            Category::IfgIgt => "IFG-IGT",
            Category::T2d => "T2D",
        }
    }

    /// Impaired fasting glucose alone is grouped with the healthy class.
    pub fn class(self) -> Class {
        match self {
            Category::Healthy | Category::Ifg => Class::Healthy,
            Category::Igt | Category::IfgIgt | Category::T2d => Class::Impaired,
        }
    }

    pub fn has_ifg(self) -> bool {
        matches!(self, Category::Ifg | Category::IfgIgt | Category::T2d)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

/// Category of an OGTT curve sampled at 0, 30, 60, 90 and 120 minutes.
pub fn categorize(glucose: &[f64; 5]) -> Category {
    let fasting = glucose[0];
    let two_hour = glucose[4];
    if fasting >= T2D_FASTING && two_hour >= T2D_TWO_HOUR {
        Category::T2d
    } else if fasting >= IFG_FASTING && two_hour >= IGT_TWO_HOUR {
        Category::IfgIgt
    } else if fasting >= IFG_FASTING {
        Category::Ifg
    } else if two_hour >= IGT_TWO_HOUR {
        Category::Igt
    } else {
        Category::Healthy
    }
}
