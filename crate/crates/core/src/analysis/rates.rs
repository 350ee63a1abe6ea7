use super::errors::ErrorReport;
use crate::{HhoError, Result};

/// `log(y_{i+1} / y_i) / log(x_{i+1} / x_i)` for consecutive pairs; `None` where
/// an error value is zero or not finite, or the abscissae (nearly) coincide.
pub fn pairwise_rates(x: &[f64], y: &[f64]) -> Result<Vec<Option<f64>>> {
    if x.len() != y.len() {
        return Err(HhoError::InvalidInput(format!(
            "{} abscissae for {} values",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(HhoError::InvalidInput(
            "rates need at least two points".into(),
        ));
    }
    if x.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(HhoError::InvalidInput("abscissae must be positive".into()));
    }
    Ok(x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| {
            let ok =
                ys.iter().all(|v| *v > 0.0 && v.is_finite()) && (xs[1] / xs[0]).ln().abs() > 1e-9;
            ok.then(|| (ys[1] / ys[0]).ln() / (xs[1] / xs[0]).ln())
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairRates {
    pub energy: Option<f64>,
    pub h1: Option<f64>,
    pub l2: Option<f64>,
}

/// Slopes of every error column against `h` for consecutive levels.
pub fn convergence_rates(reports: &[ErrorReport]) -> Result<Vec<PairRates>> {
    if reports.len() < 2 {
        return Err(HhoError::InvalidInput(
            "rates need at least two levels".into(),
        ));
    }
    if reports.windows(2).any(|w| !(w[1].h < w[0].h)) {
        return Err(HhoError::InvalidInput(
            "mesh sizes must be strictly decreasing".into(),
        ));
    }
    let h: Vec<f64> = reports.iter().map(|r| r.h).collect();
    let col = |f: fn(&ErrorReport) -> f64| -> Result<Vec<Option<f64>>> {
        pairwise_rates(&h, &reports.iter().map(f).collect::<Vec<_>>())
    };
    let (e, h1, l2) = (
        col(|r| r.energy_error)?,
        col(|r| r.h1_error)?,
        col(|r| r.l2_error)?,
    );
    Ok((0..e.len())
        .map(|i| PairRates {
            energy: e[i],
            h1: h1[i],
            l2: l2[i],
        })
        .collect())
}

/// Growth rates of `E / h^{k+1}` with respect to the flatness.
pub fn flatness_rates(
    reports: &[ErrorReport],
    error: fn(&ErrorReport) -> f64,
) -> Result<Vec<Option<f64>>> {
    let fl: Vec<f64> = reports.iter().map(|r| r.flatness).collect();
    let y: Vec<f64> = reports
        .iter()
        .map(|r| error(r) / r.h.powi(r.k as i32 + 1))
        .collect();
    pairwise_rates(&fl, &y)
}
