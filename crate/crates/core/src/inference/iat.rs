use crate::error::{Error, Result};

pub const MIN_IAT_LEN: usize = 100;

/// Integrated autocorrelation time `1 + 2 Σ_{k≥1} ρ(k)`.
///
/// The sum is truncated with Geyer's initial positive sequence: lags are
/// consumed in pairs `Γ_m = ρ(2m) + ρ(2m+1)` while `Γ_m > 0`, and the estimate
/// is `-1 + 2 Σ Γ_m`.
pub fn iat(series: &[f64]) -> Result<f64> {
    let n = series.len();
    if n < MIN_IAT_LEN {
        return Err(Error::InvalidArgument(format!(
            "IAT needs at least {MIN_IAT_LEN} samples, got {n}"
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::UndefinedIat(
            "series contains non-finite values".into(),
        ));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let autocov = |lag: usize| -> f64 {
        centred[..n - lag]
            .iter()
            .zip(&centred[lag..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    };
    let var = autocov(0);
    if var.is_nan() || var <= 0.0 {
        return Err(Error::UndefinedIat("series is constant".into()));
    }

    let mut total = 0.0;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = (autocov(lag) + autocov(lag + 1)) / var;
        if pair <= 0.0 {
            break;
        }
        total += pair;
        lag += 2;
    }
    Ok((2.0 * total - 1.0).max(1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_short() {
        assert!(matches!(iat(&[1.0; 50]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn constant_series() {
        assert!(matches!(iat(&[3.0; 500]), Err(Error::UndefinedIat(_))));
    }

    #[test]
    fn alternating_series_is_short() {
        let s: Vec<f64> = (0..1000)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let t = iat(&s).unwrap();
        assert!(t > 0.0 && t < 1.0);
    }

    #[test]
    fn blocky_series_is_long() {
        // runs of 10 identical values: IAT close to 10
        let s: Vec<f64> = (0..10_000)
            .map(|i| ((i / 10) % 7) as f64 * 1.3 + ((i / 10) % 3) as f64)
            .collect();
        let t = iat(&s).unwrap();
        assert!(t > 5.0, "iat {t}");
    }
}
