//! Gaussian kernel density and distribution estimates, and the plug-in
//! empirical GRAI built from them.

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::grai::{grai_plugin, GraiCurve, TabulatedCurve};
use crate::numeric::special::{normal_cdf, normal_pdf};
use crate::sample::Sample;

/// Kernel terms farther than this many bandwidths are exactly 0 (or 1 for the cdf).
const KERNEL_REACH: f64 = 40.0;

/// Default admissible probability band `[eps, 1 - eps]` for the plug-in estimator.
pub const DEFAULT_EPS: f64 = 1e-6;

/// `min(sd, IQR / 1.349) * (4 / (3 N))^(1/5)`, falling back to `sd` when the IQR is 0.
pub fn default_bandwidth(s: &Sample) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::InsufficientData(
            "bandwidth selection needs at least 2 observations".into(),
        ));
    }
    let sd = s.std_dev();
    let iqr = s.interpolated_quantile(0.75) - s.interpolated_quantile(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.349) } else { sd };
    if !(spread > 0.0) {
        return Err(Error::Degenerate("sample has zero dispersion".into()));
    }
    Ok(spread * (4.0 / (3.0 * s.len() as f64)).powf(0.2))
}

/// Gaussian kernel estimate over a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KdeModel {
    #[serde(skip)]
    sample: Sample,
    bandwidth: f64,
    kernel: &'static str,
}

impl KdeModel {
    pub fn new(sample: Sample, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::param(
                "bandwidth",
                format!("must be finite and > 0, got {bandwidth}"),
            ));
        }
        Ok(Self {
            sample,
            bandwidth,
            kernel: "normal",
        })
    }

    /// Uses [`default_bandwidth`].
    pub fn with_default_bandwidth(sample: Sample) -> Result<Self> {
        let h = default_bandwidth(&sample)?;
        Self::new(sample, h)
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    fn window(&self, x: f64) -> (usize, usize) {
        let v = self.sample.values();
        let reach = KERNEL_REACH * self.bandwidth;
        (
            v.partition_point(|&xj| xj < x - reach),
            v.partition_point(|&xj| xj <= x + reach),
        )
    }
}

pub fn kde_pdf(m: &KdeModel, x: f64) -> Result<f64> {
    finite("x", x)?;
    let (lo, hi) = m.window(x);
    let h = m.bandwidth;
    let sum: f64 = m.sample.values()[lo..hi]
        .iter()
        .map(|&xj| normal_pdf((x - xj) / h))
        .sum();
    Ok(sum / (m.sample.len() as f64 * h))
}

pub fn kde_cdf(m: &KdeModel, x: f64) -> Result<f64> {
    finite("x", x)?;
    let (lo, hi) = m.window(x);
    let h = m.bandwidth;
    let sum: f64 = m.sample.values()[lo..hi]
        .iter()
        .map(|&xj| normal_cdf((x - xj) / h))
        .sum();
    Ok(((lo as f64 + sum) / m.sample.len() as f64).min(1.0))
}

/// Empirical GRAI at `x` with the default probability band.
pub fn empirical_grai(m: &KdeModel, alpha: f64, x: f64) -> Result<f64> {
    empirical_grai_in_band(m, alpha, x, DEFAULT_EPS)
}

/// Empirical GRAI at `x`; a domain error unless `eps <= F(x) <= 1 - eps`.
pub fn empirical_grai_in_band(m: &KdeModel, alpha: f64, x: f64, eps: f64) -> Result<f64> {
    let cdf = kde_cdf(m, x)?;
    if !(cdf >= eps && cdf <= 1.0 - eps) {
        return Err(Error::Domain(format!(
            "estimated F({x}) = {cdf:e} lies outside [{eps:e}, 1 - {eps:e}]"
        )));
    }
    grai_plugin(alpha, x, kde_pdf(m, x)?, cdf)
}

/// Evaluation grid for [`grai_grid`]: `points` equally spaced abscissae
/// between the empirical `p_lo` and `p_hi` quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub p_lo: f64,
    pub p_hi: f64,
    pub points: usize,
    pub eps: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            p_lo: 0.05,
            p_hi: 0.95,
            points: 100,
            eps: DEFAULT_EPS,
        }
    }
}

impl GridSpec {
    pub fn band(p_lo: f64, p_hi: f64) -> Self {
        Self {
            p_lo,
            p_hi,
            ..Self::default()
        }
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.p_lo > 0.0 && self.p_lo < 1.0 && self.p_hi > 0.0 && self.p_hi < 1.0) {
            return Err(Error::param(
                "band",
                format!(
                    "quantile band [{}, {}] must lie inside (0, 1)",
                    self.p_lo, self.p_hi
                ),
            ));
        }
        if self.p_lo >= self.p_hi {
            return Err(Error::param(
                "band",
                format!("empty band [{}, {}]", self.p_lo, self.p_hi),
            ));
        }
        if self.points < 2 {
            return Err(Error::param(
                "points",
                "at least 2 grid points are required",
            ));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 0.5), got {}", self.eps),
            ));
        }
        Ok(())
    }

    /// Abscissae of the grid for sample `s`.
    pub fn abscissae(&self, s: &Sample) -> Result<Vec<f64>> {
        self.validate()?;
        let lo = s.ecdf_quantile(self.p_lo);
        let hi = s.ecdf_quantile(self.p_hi);
        if !(lo < hi) {
            return Err(Error::InsufficientData(format!(
                "the empirical quantile band [{lo}, {hi}] is empty"
            )));
        }
        let n = self.points - 1;
        Ok((0..=n)
            .map(|i| {
                if i == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / n as f64
                }
            })
            .collect())
    }
}

/// Empirical GRAI tabulated over the grid; points whose estimated cdf falls
/// outside `[eps, 1 - eps]` are dropped.
pub fn grai_grid(m: &KdeModel, alpha: f64, spec: &GridSpec) -> Result<GraiCurve> {
    finite("alpha", alpha)?;
    let mut xs = Vec::with_capacity(spec.points);
    let mut values = Vec::with_capacity(spec.points);
    for x in spec.abscissae(&m.sample)? {
        match empirical_grai_in_band(m, alpha, x, spec.eps) {
            Ok(v) => {
                xs.push(x);
                values.push(v);
            }
            Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData(
            "fewer than 2 grid points inside the admissible probability band".into(),
        ));
    }
    Ok(GraiCurve::Tabulated(TabulatedCurve::new(
        Some(alpha),
        xs,
        values,
    )?))
}
