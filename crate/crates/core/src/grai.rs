//! Reversed hazard, the alpha-generalized cumulative reversed hazard, the
//! alpha-generalized reversed aging intensity (GRAI) and its forward
//! counterpart (alpha-AI).
//!
//! For `alpha != 0` the GRAI is
//!
//! ```text
//! L_alpha(x) = alpha x F^(alpha-1)(x) f(x) / (1 - F^alpha(x))
//! ```
//!
//! and `-x f / (F ln F)` at `alpha = 0`. Both branches are evaluated as
//! `x r(x) * alpha / expm1(-alpha ln F)` with `r = f / F`, which is stable
//! for either sign of `alpha` and tends to the `alpha = 0` branch.

use serde::Serialize;

use crate::distributions::{Lifetime, ParametricFamily};
use crate::error::{finite, Error, Result};

/// Below this cdf value intensities are reported as a domain error.
pub const CDF_FLOOR: f64 = 1e-300;
/// Below this survival value intensities are reported as a domain error.
pub const SF_FLOOR: f64 = 1e-15;
/// `|alpha|` below this uses the `alpha = 0` branch.
pub const ALPHA_ZERO_BAND: f64 = 1e-8;

fn ln_cdf_floor() -> f64 {
    CDF_FLOOR.ln()
}

fn ln_sf_floor() -> f64 {
    SF_FLOOR.ln()
}

/// `alpha / expm1(-alpha ln c)`, the factor multiplying `x r(x)`.
fn alpha_factor(alpha: f64, ln_c: f64) -> f64 {
    if alpha.abs() < ALPHA_ZERO_BAND {
        -1.0 / ln_c
    } else {
        alpha / (-alpha * ln_c).exp_m1()
    }
}

/// `(ln F(x), ln(1 - F(x)))`, or a domain error when either is below its floor.
fn interior<D: Lifetime + ?Sized>(d: &D, x: f64) -> Result<(f64, f64)> {
    finite("x", x)?;
    let ln_f = d.ln_cdf(x)?;
    if !(ln_f >= ln_cdf_floor()) {
        return Err(Error::Domain(format!("F({x}) is below {CDF_FLOOR:e}")));
    }
    let ln_s = d.ln_sf(x)?;
    if !(ln_s >= ln_sf_floor()) {
        return Err(Error::Domain(format!("1 - F({x}) is below {SF_FLOOR:e}")));
    }
    Ok((ln_f, ln_s))
}

/// `f(x) / F(x)`.
pub fn reversed_hazard<D: Lifetime + ?Sized>(d: &D, x: f64) -> Result<f64> {
    finite("x", x)?;
    let ln_f = d.ln_cdf(x)?;
    if !(ln_f >= ln_cdf_floor()) {
        return Err(Error::Domain(format!(
            "reversed hazard undefined: F({x}) is below {CDF_FLOOR:e}"
        )));
    }
    Ok((d.ln_pdf(x)? - ln_f).exp())
}

/// `W_alpha^{-1}(1 - F(x))`: `(1 - F^alpha) / alpha`, or `-ln F` at `alpha = 0`.
pub fn cum_reversed_hazard_alpha<D: Lifetime + ?Sized>(d: &D, alpha: f64, x: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    finite("x", x)?;
    let ln_f = d.ln_cdf(x)?;
    if ln_f == f64::NEG_INFINITY && alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "cumulative reversed hazard is infinite at x = {x} (F = 0)"
        )));
    }
    Ok(if alpha.abs() < ALPHA_ZERO_BAND {
        -ln_f
    } else {
        -(alpha * ln_f).exp_m1() / alpha
    })
}

/// GRAI from plug-in values of the density and cdf at `x`.
pub fn grai_plugin(alpha: f64, x: f64, pdf: f64, cdf: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    finite("x", x)?;
    finite("pdf", pdf)?;
    if !(cdf > 0.0 && cdf < 1.0) {
        return Err(Error::Domain(format!(
            "F({x}) = {cdf} is not inside (0, 1)"
        )));
    }
    Ok(x * pdf / cdf * alpha_factor(alpha, cdf.ln()))
}

/// GRAI through the generic formula, ignoring any closed form.
pub fn grai_alpha_generic<D: Lifetime + ?Sized>(d: &D, alpha: f64, x: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    let (ln_f, _) = interior(d, x)?;
    let x_rh = x * (d.ln_pdf(x)? - ln_f).exp();
    Ok(x_rh * alpha_factor(alpha, ln_f))
}

/// Closed-form GRAI for the (family, alpha) pairs that have one.
pub fn grai_closed_form(d: &ParametricFamily, alpha: f64, x: f64) -> Option<f64> {
    let zero = alpha.abs() < ALPHA_ZERO_BAND;
    match *d {
        ParametricFamily::InvWeibull2 { shape, scale } => {
            if zero {
                Some(shape)
            } else {
                let u = scale * alpha * x.powf(-shape);
                Some(shape * u / u.exp_m1())
            }
        }
        ParametricFamily::InvLogLogistic { shape, .. } if alpha == -1.0 => Some(shape),
        ParametricFamily::InvModifiedWeibull { shape, rate, .. } if zero => Some(shape + rate * x),
        ParametricFamily::ExponentiatedExponential { alpha: a0, rate } if alpha == a0 => {
            Some(rate * x)
        }
        ParametricFamily::Exponential { rate } if alpha == 1.0 => Some(rate * x),
        _ => None,
    }
}

/// alpha-generalized reversed aging intensity of a catalog family, using
/// the closed form when one exists.
pub fn grai_alpha(d: &ParametricFamily, alpha: f64, x: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    interior(d, x)?;
    match grai_closed_form(d, alpha, x) {
        Some(v) => Ok(v),
        None => grai_alpha_generic(d, alpha, x),
    }
}

/// alpha-generalized (forward) aging intensity:
/// `alpha x S^(alpha-1) f / (1 - S^alpha)` with `S = 1 - F`,
/// `-x f / (S ln S)` at `alpha = 0`.
pub fn ai_alpha<D: Lifetime + ?Sized>(d: &D, alpha: f64, x: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    let (_, ln_s) = interior(d, x)?;
    let x_h = x * (d.ln_pdf(x)? - ln_s).exp();
    Ok(x_h * alpha_factor(alpha, ln_s))
}

/// G-generalized reversed aging intensity
/// `x f(x) / (g(q) q)` with `q = G^{-1}(1 - F(x))`.
pub fn grai_general<F, G>(f: &F, g: &G, x: f64) -> Result<f64>
where
    F: Lifetime + ?Sized,
    G: Lifetime + ?Sized,
{
    let (ln_f, _) = interior(f, x)?;
    let u = -ln_f.exp_m1();
    let q = g.quantile(u)?;
    let g_q = g.pdf(q)?;
    if !(g_q > 0.0) || q <= 0.0 {
        return Err(Error::Domain(format!(
            "G has zero density at G^-1(1 - F({x})) = {q}"
        )));
    }
    Ok(x * f.pdf(x)? / (g_q * q))
}

/// A GRAI curve handed to the characterization routines.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraiCurve {
    /// The exact GRAI of a catalog family.
    Symbolic {
        family: ParametricFamily,
        alpha: f64,
    },
    /// `L(x) = intercept + slope * x`.
    Affine {
        intercept: f64,
        slope: f64,
    },
    Tabulated(TabulatedCurve),
}

impl GraiCurve {
    pub fn symbolic(family: ParametricFamily, alpha: f64) -> Result<Self> {
        family.validate()?;
        Ok(Self::Symbolic {
            family,
            alpha: finite("alpha", alpha)?,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::affine(value, 0.0)
    }

    pub fn affine(intercept: f64, slope: f64) -> Result<Self> {
        Ok(Self::Affine {
            intercept: finite("intercept", intercept)?,
            slope: finite("slope", slope)?,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        finite("x", x)?;
        if x <= 0.0 {
            return Err(Error::Domain(format!("GRAI curves live on x > 0, got {x}")));
        }
        match self {
            Self::Symbolic { family, alpha } => grai_alpha(family, *alpha, x),
            Self::Affine { intercept, slope } => Ok(intercept + slope * x),
            Self::Tabulated(t) => Ok(t.eval(x)),
        }
    }

    /// Range where the curve can be evaluated without hitting the cdf guards.
    pub fn natural_domain(&self) -> (f64, f64) {
        match self {
            Self::Symbolic { family, .. } => (
                family.quantile(1e-12).unwrap_or(f64::MIN_POSITIVE),
                family.quantile(1.0 - 1e-12).unwrap_or(f64::MAX),
            ),
            Self::Affine { .. } => (f64::MIN_POSITIVE, f64::MAX),
            Self::Tabulated(t) => (t.xs[0], t.xs[t.xs.len() - 1]),
        }
    }
}

/// A GRAI curve sampled on a grid; linear in `(ln x, L)` between nodes and
/// constant beyond them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedCurve {
    alpha: Option<f64>,
    xs: Vec<f64>,
    values: Vec<f64>,
    #[serde(skip)]
    ln_xs: Vec<f64>,
    // cumulative integral of L over ln x from the first node
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl TabulatedCurve {
    pub fn new(alpha: Option<f64>, xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::param(
                "curve",
                "abscissae and values differ in length",
            ));
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientData(
                "a tabulated curve needs at least 2 points".into(),
            ));
        }
        if let Some(a) = alpha {
            finite("alpha", a)?;
        }
        for (i, (&x, &v)) in xs.iter().zip(&values).enumerate() {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::param(
                    "curve",
                    format!("abscissa #{} = {x} must be > 0", i + 1),
                ));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    "curve",
                    format!("value #{} = {v} must be finite and >= 0", i + 1),
                ));
            }
            if i > 0 && xs[i - 1] >= x {
                return Err(Error::param(
                    "curve",
                    "abscissae must be strictly increasing",
                ));
            }
        }
        let ln_xs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let mut cumulative = Vec::with_capacity(xs.len());
        cumulative.push(0.0);
        for i in 1..xs.len() {
            let seg = 0.5 * (values[i] + values[i - 1]) * (ln_xs[i] - ln_xs[i - 1]);
            cumulative.push(cumulative[i - 1] + seg);
        }
        Ok(Self {
            alpha,
            xs,
            values,
            ln_xs,
            cumulative,
        })
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `true` when `x` lies outside the tabulated range (value held constant).
    pub fn is_extrapolated(&self, x: f64) -> bool {
        x < self.xs[0] || x > self.xs[self.xs.len() - 1]
    }

    fn eval_ln(&self, u: f64) -> f64 {
        let n = self.xs.len();
        if u <= self.ln_xs[0] {
            return self.values[0];
        }
        if u >= self.ln_xs[n - 1] {
            return self.values[n - 1];
        }
        let i = self.ln_xs.partition_point(|&v| v <= u) - 1;
        let t = (u - self.ln_xs[i]) / (self.ln_xs[i + 1] - self.ln_xs[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_ln(x.ln())
    }

    // Antiderivative of L(e^u) du, zero at the first node.
    fn antiderivative(&self, u: f64) -> f64 {
        let n = self.xs.len();
        if u <= self.ln_xs[0] {
            return self.values[0] * (u - self.ln_xs[0]);
        }
        if u >= self.ln_xs[n - 1] {
            return self.cumulative[n - 1] + self.values[n - 1] * (u - self.ln_xs[n - 1]);
        }
        let i = self.ln_xs.partition_point(|&v| v <= u) - 1;
        let v = self.eval_ln(u);
        self.cumulative[i] + 0.5 * (self.values[i] + v) * (u - self.ln_xs[i])
    }

    /// Exact `int_{u1}^{u2} L(e^u) du = int_{e^u1}^{e^u2} L(t)/t dt` of the interpolant.
    pub fn log_integral(&self, u1: f64, u2: f64) -> f64 {
        self.antiderivative(u2) - self.antiderivative(u1)
    }

    /// Two-column TSV with a `# grai alpha=<value>` header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        match self.alpha {
            Some(a) => out.push_str(&format!("# grai alpha={}\n", crate::tsv::fmt_f64(a))),
            None => out.push_str("# grai\n"),
        }
        for (x, v) in self.xs.iter().zip(&self.values) {
            out.push_str(&crate::tsv::fmt_f64(*x));
            out.push('\t');
            out.push_str(&crate::tsv::fmt_f64(*v));
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut alpha = None;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(rest) = comment.trim().strip_prefix("grai") {
                    if let Some(a) = rest.trim().strip_prefix("alpha=") {
                        alpha = Some(a.trim().parse::<f64>().map_err(|_| {
                            Error::Parse(format!("line {}: bad alpha `{a}`", lineno + 1))
                        })?);
                    }
                }
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(a), Some(b), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Parse(format!(
                    "line {}: expected two tab-separated columns",
                    lineno + 1
                )));
            };
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("line {}: `{s}` is not a number", lineno + 1))
                })
            };
            xs.push(parse(a)?);
            values.push(parse(b)?);
        }
        Self::new(alpha, xs, values)
    }
}
