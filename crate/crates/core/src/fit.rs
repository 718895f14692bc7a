//! Distribution identification from an empirical GRAI curve: least-squares
//! shape estimates followed by a maximum-likelihood scale.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::distributions::ParametricFamily;
use crate::error::{finite, Error, Result};
use crate::estimate::{grai_grid, GridSpec, KdeModel};
use crate::grai::GraiCurve;
use crate::numeric::{brent, expand_bracket};
use crate::sample::Sample;

/// Shape of the regression line fitted to the GRAI curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// `L = A`
    Constant,
    /// `L = A + B x`
    Affine,
    /// `L = B x`
    ThroughOrigin,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Constant => "constant",
            Self::Affine => "affine",
            Self::ThroughOrigin => "through-origin",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "constant" => Ok(Self::Constant),
            "affine" => Ok(Self::Affine),
            "through-origin" | "linear" => Ok(Self::ThroughOrigin),
            other => Err(Error::Parse(format!(
                "unknown model `{other}` (expected constant, affine or through-origin)"
            ))),
        }
    }
}

/// Least-squares coefficients; `intercept` is 0 for the through-origin model
/// and `slope` is 0 for the constant model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LsFit {
    pub model: ModelKind,
    pub intercept: f64,
    pub slope: f64,
    pub rms: f64,
    pub points: usize,
}

impl LsFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares of `ys` on `xs`.
pub fn fit_ls_points(xs: &[f64], ys: &[f64], model: ModelKind) -> Result<LsFit> {
    if xs.len() != ys.len() {
        return Err(Error::param(
            "curve",
            "abscissae and values differ in length",
        ));
    }
    let n = xs.len();
    let needed = if model == ModelKind::Constant { 1 } else { 2 };
    if n < needed {
        return Err(Error::InsufficientData(format!(
            "{model} fit needs at least {needed} points, got {n}"
        )));
    }
    let nf = n as f64;
    let (intercept, slope) = match model {
        ModelKind::Constant => (ys.iter().sum::<f64>() / nf, 0.0),
        ModelKind::ThroughOrigin => {
            let sxx: f64 = xs.iter().map(|x| x * x).sum();
            if !(sxx > 0.0) {
                return Err(Error::Degenerate("all abscissae are zero".into()));
            }
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
            (0.0, sxy / sxx)
        }
        ModelKind::Affine => {
            let mx = xs.iter().sum::<f64>() / nf;
            let my = ys.iter().sum::<f64>() / nf;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            if !(sxx > 0.0) {
                return Err(Error::Degenerate("all abscissae are equal".into()));
            }
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let slope = sxy / sxx;
            (my - slope * mx, slope)
        }
    };
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(LsFit {
        model,
        intercept,
        slope,
        rms: (sse / nf).sqrt(),
        points: n,
    })
}

/// Least squares over the nodes of a tabulated curve.
pub fn fit_ls(curve: &GraiCurve, model: ModelKind) -> Result<LsFit> {
    match curve {
        GraiCurve::Tabulated(t) => fit_ls_points(t.xs(), t.values(), model),
        _ => Err(Error::Unsupported(
            "least squares needs a tabulated curve".into(),
        )),
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::param(
            name,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

/// Root in `lambda` of `sum 1 / ((x_i / lambda)^gamma + 1) = N / 2`.
pub fn mle_lambda_invllog(s: &Sample, gamma_hat: f64) -> Result<f64> {
    positive("gamma", gamma_hat)?;
    let ln_x: Vec<f64> = s.values().iter().map(|x| x.ln()).collect();
    let half = s.len() as f64 / 2.0;
    let score = |lambda: f64| -> f64 {
        let ln_l = lambda.ln();
        ln_x.iter()
            .map(|&lx| {
                let z = gamma_hat * (lx - ln_l);
                if z > 0.0 {
                    let e = (-z).exp();
                    e / (1.0 + e)
                } else {
                    1.0 / (1.0 + z.exp())
                }
            })
            .sum::<f64>()
            - half
    };
    let (lo, hi) = expand_bracket(score, s.min() / 100.0, s.max() * 100.0, 10.0, 30)?;
    brent(score, lo, hi, 1e-12, 200)
}

/// `(N / sum exp(-delta x_i) x_i^-gamma)^(1/gamma)`, evaluated in log space.
pub fn mle_lambda_invmw(s: &Sample, gamma_hat: f64, delta_hat: f64) -> Result<f64> {
    positive("gamma", gamma_hat)?;
    if !(delta_hat.is_finite() && delta_hat >= 0.0) {
        return Err(Error::param(
            "delta",
            format!("must be finite and >= 0, got {delta_hat}"),
        ));
    }
    let terms: Vec<f64> = s
        .values()
        .iter()
        .map(|&x| -delta_hat * x - gamma_hat * x.ln())
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_sum = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    let lambda = (((s.len() as f64).ln() - ln_sum) / gamma_hat).exp();
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Degenerate(format!(
            "scale estimate overflowed ({lambda})"
        )));
    }
    Ok(lambda)
}

/// `N / sum x_i^-beta`, the scale MLE of the inverse Weibull with known shape.
pub fn mle_lambda_invw2(s: &Sample, beta_hat: f64) -> Result<f64> {
    positive("beta", beta_hat)?;
    let terms: Vec<f64> = s.values().iter().map(|&x| -beta_hat * x.ln()).collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_sum = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    let lambda = ((s.len() as f64).ln() - ln_sum).exp();
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Degenerate(format!(
            "scale estimate overflowed ({lambda})"
        )));
    }
    Ok(lambda)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct FitConfig {
    /// `None` selects [`crate::estimate::default_bandwidth`].
    pub bandwidth: Option<f64>,
    pub grid: GridSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub alpha: f64,
    pub model: ModelKind,
    pub bandwidth: f64,
    pub grid: GridSpec,
    pub ls: LsFit,
    /// Maximum-likelihood scale, when the family has one.
    pub lambda: Option<f64>,
    pub family: ParametricFamily,
    pub sample_size: usize,
}

fn shape(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Degenerate(format!(
            "fitted {name} = {v} is not a valid positive parameter"
        )))
    }
}

/// Identification from a curve already fitted by least squares.
fn identify(s: &Sample, alpha: f64, ls: &LsFit) -> Result<(ParametricFamily, Option<f64>)> {
    match ls.model {
        ModelKind::Constant if alpha == -1.0 => {
            let gamma = shape("gamma", ls.intercept)?;
            let lambda = mle_lambda_invllog(s, gamma)?;
            Ok((ParametricFamily::inv_log_logistic(gamma, lambda)?, Some(lambda)))
        }
        ModelKind::Constant if alpha == 0.0 => {
            let beta = shape("beta", ls.intercept)?;
            let lambda = mle_lambda_invw2(s, beta)?;
            Ok((ParametricFamily::inv_weibull2(beta, lambda)?, Some(lambda)))
        }
        ModelKind::Affine if alpha == 0.0 => {
            let gamma = shape("gamma", ls.intercept)?;
            if !(ls.slope >= 0.0) {
                return Err(Error::Degenerate(format!(
                    "fitted delta = {} is negative",
                    ls.slope
                )));
            }
            let lambda = mle_lambda_invmw(s, gamma, ls.slope)?;
            Ok((
                ParametricFamily::inv_modified_weibull(gamma, lambda, ls.slope)?,
                Some(lambda),
            ))
        }
        ModelKind::ThroughOrigin if alpha > 0.0 => {
            let rate = shape("B", ls.slope)?;
            Ok((ParametricFamily::exponentiated_exponential(alpha, rate)?, None))
        }
        model => Err(Error::Unsupported(format!(
            "no family is identified by the {model} model at alpha = {alpha}; supported: \
             (alpha=-1, constant), (alpha=0, constant), (alpha=0, affine), (alpha>0, through-origin)"
        ))),
    }
}

/// Empirical GRAI curve, least-squares shape, then the matching scale estimate.
pub fn fit_pipeline(
    s: &Sample,
    alpha: f64,
    model: ModelKind,
    config: &FitConfig,
) -> Result<FitReport> {
    finite("alpha", alpha)?;
    let supported = matches!(
        (model, alpha),
        (ModelKind::Constant, a) if a == -1.0 || a == 0.0
    ) || (model == ModelKind::Affine && alpha == 0.0)
        || (model == ModelKind::ThroughOrigin && alpha > 0.0);
    if !supported {
        return Err(Error::Unsupported(format!(
            "no family is identified by the {model} model at alpha = {alpha}"
        )));
    }
    let kde = match config.bandwidth {
        Some(h) => KdeModel::new(s.clone(), h)?,
        None => KdeModel::with_default_bandwidth(s.clone())?,
    };
    let curve = grai_grid(&kde, alpha, &config.grid)?;
    let ls = fit_ls(&curve, model)?;
    let (family, lambda) = identify(s, alpha, &ls)?;
    Ok(FitReport {
        alpha,
        model,
        bandwidth: kde.bandwidth(),
        grid: config.grid,
        ls,
        lambda,
        family,
        sample_size: s.len(),
    })
}
