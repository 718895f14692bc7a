//! Reconstruction of a distribution function from its GRAI curve.
//!
//! With `I(x) = int_a^x L(t)/t dt`:
//!
//! * `alpha < 0`: `F_k(x) = [1 - k alpha exp(-I(x))]^(1/alpha)`
//! * `alpha = 0`: `F_k(x) = exp(-k exp(-I(x)))`
//! * `alpha > 0`: `F(x) = [1 - exp(-int_0^x L(t)/t dt)]^(1/alpha)`, no anchor.
//!
//! Integrals are taken in `u = ln t`, where `L(t)/t dt = L(e^u) du`.

use std::fmt;

use serde::Serialize;

use crate::distributions::{softplus, Lifetime, ParametricFamily};
use crate::error::{finite, Error, Result};
use crate::grai::{GraiCurve, ALPHA_ZERO_BAND, CDF_FLOOR};
use crate::numeric::{integrate, QuadOptions};

/// Per-panel absolute quadrature tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const TAIL_NEGLIGIBLE: f64 = 1e-14;
const TAIL_PANELS: usize = 3;
const TAIL_LIMIT_U: f64 = -700.0;
const TAIL_GROWTH_LIMIT: f64 = 1e3;

const SCAN_WIDTH: f64 = 0.5;
const SCAN_WINDOWS: usize = 80;

/// Anchor abscissa `a` and family parameter `k` of the `alpha <= 0` families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anchor {
    pub a: f64,
    pub k: f64,
}

impl Anchor {
    pub fn new(a: f64, k: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::param(
                "a",
                format!("anchor must be finite and > 0, got {a}"),
            ));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::param(
                "k",
                format!("must be finite and > 0, got {k}"),
            ));
        }
        Ok(Self { a, k })
    }

    /// Anchor at `a` with `k` chosen so the family member is `d`:
    /// `k = (1 - F^alpha(a)) / alpha`, or `-ln F(a)` at `alpha = 0`.
    pub fn matching<D: Lifetime + ?Sized>(d: &D, alpha: f64, a: f64) -> Result<Self> {
        if alpha > 0.0 {
            return Err(Error::param("alpha", "anchors only apply to alpha <= 0"));
        }
        let ln_f = d.ln_cdf(a)?;
        let k = if alpha.abs() < ALPHA_ZERO_BAND {
            -ln_f
        } else {
            -(alpha * ln_f).exp_m1() / alpha
        };
        Self::new(a, k)
    }

    /// The same family member described from anchor `b`:
    /// `k_b = k exp(-int_a^b L(t)/t dt)`.
    pub fn rebased(&self, curve: &GraiCurve, b: f64) -> Result<Self> {
        let i = integrate_log(curve, self.a, b, DEFAULT_TOLERANCE)?;
        Self::new(b, self.k * (-i).exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Inconclusive => "inconclusive",
        })
    }
}

/// Admissibility of a curve for the characterization at a given alpha.
///
/// `c1`: `L >= 0`. `c2`: behaviour of `int_x^a L(t)/t dt` as `x -> 0`
/// (must diverge for `alpha <= 0`, stay finite for `alpha > 0`).
/// `c3`: `int_a^x L(t)/t dt` diverges as `x -> inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub c1: ConditionStatus,
    pub c2: ConditionStatus,
    pub c3: ConditionStatus,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        [self.c1, self.c2, self.c3]
            .iter()
            .all(|c| *c == ConditionStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        [self.c1, self.c2, self.c3].contains(&ConditionStatus::Fail)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c1={} c2={} c3={}", self.c1, self.c2, self.c3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Converges,
    Diverges,
    Unknown,
}

fn classify(increments: &[f64]) -> Trend {
    let n = increments.len();
    if n < 3 {
        return Trend::Unknown;
    }
    let last = &increments[n - 3..];
    if last.iter().all(|v| v.abs() < TAIL_NEGLIGIBLE) {
        return Trend::Converges;
    }
    let r1 = last[1].abs() / last[0].abs();
    let r2 = last[2].abs() / last[1].abs();
    if r1 <= 0.9 && r2 <= 0.9 {
        Trend::Converges
    } else if r1 >= 0.99 && r2 >= 0.99 && last.iter().all(|v| v.abs() > TAIL_NEGLIGIBLE) {
        Trend::Diverges
    } else {
        Trend::Unknown
    }
}

fn scan_anchor(curve: &GraiCurve) -> f64 {
    match curve {
        GraiCurve::Symbolic { family, .. } => family.quantile(0.5).map(f64::ln).unwrap_or(0.0),
        GraiCurve::Affine { .. } => 0.0,
        GraiCurve::Tabulated(t) => {
            let xs = t.xs();
            xs[xs.len() / 2].ln()
        }
    }
}

fn scan(curve: &GraiCurve, u0: f64, step: f64) -> Vec<f64> {
    let mut increments = Vec::new();
    for j in 0..SCAN_WINDOWS {
        let lo = u0 + step * j as f64;
        let hi = lo + step;
        match log_integral(curve, lo.min(hi), lo.max(hi), DEFAULT_TOLERANCE, 0.0) {
            Ok(v) if v.is_finite() => increments.push(v),
            _ => break,
        }
    }
    increments
}

fn nonnegative(curve: &GraiCurve) -> bool {
    match curve {
        GraiCurve::Affine { intercept, slope } => *intercept >= 0.0 && *slope >= 0.0,
        GraiCurve::Tabulated(t) => t.values().iter().all(|v| *v >= 0.0),
        GraiCurve::Symbolic { .. } => {
            let (lo, hi) = curve.natural_domain();
            let (l0, l1) = (lo.ln(), hi.ln());
            (0..=200).all(|i| {
                let x = (l0 + (l1 - l0) * i as f64 / 200.0).exp();
                curve.eval(x).map(|v| v >= 0.0).unwrap_or(true)
            })
        }
    }
}

/// Checks the admissibility conditions of the characterization theorems.
///
/// Tail behaviour is decided from integrals over successive windows of
/// width 0.5 in `ln x`: geometric decay means convergence, non-decaying
/// increments mean divergence, anything else is inconclusive.
pub fn check_conditions(curve: &GraiCurve, alpha: f64) -> ConditionReport {
    let c1 = if nonnegative(curve) {
        ConditionStatus::Pass
    } else {
        ConditionStatus::Fail
    };
    let u0 = scan_anchor(curve);
    let lower = classify(&scan(curve, u0, -SCAN_WIDTH));
    let upper = classify(&scan(curve, u0, SCAN_WIDTH));
    let c2 = match (alpha > 0.0, lower) {
        (_, Trend::Unknown) => ConditionStatus::Inconclusive,
        (false, Trend::Diverges) | (true, Trend::Converges) => ConditionStatus::Pass,
        _ => ConditionStatus::Fail,
    };
    let c3 = match upper {
        Trend::Diverges => ConditionStatus::Pass,
        Trend::Converges => ConditionStatus::Fail,
        Trend::Unknown => ConditionStatus::Inconclusive,
    };
    ConditionReport { c1, c2, c3 }
}

/// `int_{u1}^{u2} L(e^u) du`, split into unit panels at `offset + n`.
fn log_integral(curve: &GraiCurve, u1: f64, u2: f64, tol: f64, offset: f64) -> Result<f64> {
    if let GraiCurve::Tabulated(t) = curve {
        return Ok(t.log_integral(u1, u2));
    }
    if u1 == u2 {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if u1 < u2 {
        (u1, u2, 1.0)
    } else {
        (u2, u1, -1.0)
    };
    let opts = QuadOptions::with_abs_tol(tol);
    let mut total = 0.0;
    let mut left = lo;
    while left < hi {
        let mut next = (left - offset).floor() + 1.0 + offset;
        if next <= left {
            next = left + 1.0;
        }
        let next = next.min(hi);
        total += integrate(|u| curve.eval(u.exp()), left, next, opts)?.value;
        left = next;
    }
    Ok(sign * total)
}

/// `int_{x1}^{x2} L(t)/t dt`.
pub fn integrate_log(curve: &GraiCurve, x1: f64, x2: f64, tol: f64) -> Result<f64> {
    for (name, x) in [("x1", x1), ("x2", x2)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::param(
                name,
                format!("must be finite and > 0, got {x}"),
            ));
        }
    }
    log_integral(curve, x1.ln(), x2.ln(), tol, 0.0)
}

/// A distribution function rebuilt from a GRAI curve, with cached integrals.
#[derive(Debug, Clone)]
pub struct ReconstructedCdf {
    alpha: f64,
    source: GraiCurve,
    anchor: Option<Anchor>,
    tolerance: f64,
    offset: f64,
    // (ln x, integral) sorted by ln x; the integral runs from ln a for
    // alpha <= 0 and from -inf for alpha > 0
    cache: Vec<(f64, f64)>,
}

impl ReconstructedCdf {
    /// `anchor` is required for `alpha <= 0` and ignored otherwise.
    pub fn new(source: GraiCurve, alpha: f64, anchor: Option<Anchor>) -> Result<Self> {
        finite("alpha", alpha)?;
        if !nonnegative(&source) {
            return Err(Error::ConditionViolation(
                "the GRAI curve takes negative values".into(),
            ));
        }
        let anchor = if alpha > 0.0 {
            None
        } else {
            Some(anchor.ok_or_else(|| Error::param("anchor", "required for alpha <= 0"))?)
        };
        let cache = anchor.map(|a| vec![(a.a.ln(), 0.0)]).unwrap_or_default();
        Ok(Self {
            alpha,
            source,
            anchor,
            tolerance: DEFAULT_TOLERANCE,
            offset: 0.0,
            cache,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::param(
                "tolerance",
                format!("must be > 0, got {tolerance}"),
            ));
        }
        self.tolerance = tolerance;
        self.cache.truncate(usize::from(self.anchor.is_some()));
        Ok(self)
    }

    /// Shifts the unit-panel boundaries of the quadrature by `offset` in `ln x`.
    pub fn with_subdivision_offset(mut self, offset: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&offset) {
            return Err(Error::param(
                "offset",
                format!("must lie in [0, 1), got {offset}"),
            ));
        }
        self.offset = offset;
        self.cache.truncate(usize::from(self.anchor.is_some()));
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn anchor(&self) -> Option<Anchor> {
        self.anchor
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn source(&self) -> &GraiCurve {
        &self.source
    }

    fn integral(&self, u1: f64, u2: f64) -> Result<f64> {
        log_integral(&self.source, u1, u2, self.tolerance, self.offset)
    }

    /// `int_{-inf}^{u} L(e^s) ds`, marching down in unit panels.
    fn lower_tail(&self, u: f64) -> Result<f64> {
        let mut right = u;
        let mut left = (u - self.offset).ceil() - 1.0 + self.offset;
        if left >= right {
            left -= 1.0;
        }
        let mut total = 0.0;
        let mut quiet = 0;
        let mut last = f64::INFINITY;
        loop {
            if right <= TAIL_LIMIT_U {
                return Err(Error::ConditionViolation(format!(
                    "int_0^x L(t)/t dt does not converge: integrand still {last:e} per unit of ln x at x = {:e}",
                    right.exp()
                )));
            }
            match self.integral(left, right) {
                Ok(v) => {
                    total += v;
                    last = v.abs();
                    if last < TAIL_NEGLIGIBLE {
                        quiet += 1;
                        if quiet == TAIL_PANELS {
                            return Ok(total);
                        }
                    } else {
                        quiet = 0;
                    }
                    if total > TAIL_GROWTH_LIMIT {
                        return Err(Error::ConditionViolation(format!(
                            "int_0^x L(t)/t dt diverges (exceeds {TAIL_GROWTH_LIMIT:e} by x = {:e})",
                            left.exp()
                        )));
                    }
                }
                // The curve cannot be evaluated further down; accept the
                // truncation only when the integrand has already died out.
                Err(Error::Domain(_)) if last < 1e-10 => return Ok(total),
                Err(e @ Error::Domain(_)) => {
                    return match self.symbolic_remainder() {
                        Some(rest) if rest <= self.tolerance => {
                            let edge = self.domain_edge(left, right)?;
                            Ok(total + self.integral(edge, right)?)
                        }
                        _ => Err(e),
                    };
                }
                Err(e) => return Err(e),
            }
            right = left;
            left -= 1.0;
        }
    }

    /// For the exact GRAI of a distribution, `int_{-inf}^{ln x} L = -ln(1 - F(x)^alpha)`,
    /// so the part below the cdf floor is bounded by this value.
    fn symbolic_remainder(&self) -> Option<f64> {
        match self.source {
            GraiCurve::Symbolic { alpha, .. } if alpha == self.alpha && alpha > 0.0 => {
                Some(-(-CDF_FLOOR.powf(alpha)).ln_1p())
            }
            _ => None,
        }
    }

    /// Smallest `u` in `(lo, hi]` where the curve still evaluates, to 1e-12.
    fn domain_edge(&self, mut lo: f64, mut hi: f64) -> Result<f64> {
        self.source.eval(hi.exp())?;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            match self.source.eval(mid.exp()) {
                Ok(_) => hi = mid,
                Err(Error::Domain(_)) => lo = mid,
                Err(e) => return Err(e),
            }
        }
        Ok(hi)
    }

    fn integral_at(&mut self, u: f64) -> Result<f64> {
        let pos = self.cache.partition_point(|&(c, _)| c < u);
        if pos < self.cache.len() && self.cache[pos].0 == u {
            return Ok(self.cache[pos].1);
        }
        let value = if self.alpha > 0.0 && pos == 0 {
            // below every cached point: subtracting would lose the small values
            self.lower_tail(u)?
        } else {
            let nearest = match (pos.checked_sub(1), self.cache.get(pos)) {
                (Some(i), Some(&(hi, _))) if hi - u < u - self.cache[i].0 => pos,
                (Some(i), _) => i,
                (None, _) => pos,
            };
            let (uc, ic) = self.cache[nearest];
            ic + self.integral(uc, u)?
        };
        self.cache.insert(pos, (u, value));
        Ok(value)
    }

    pub fn cdf(&mut self, x: f64) -> Result<f64> {
        finite("x", x)?;
        if x <= 0.0 {
            return Ok(0.0);
        }
        let i = self.integral_at(x.ln())?;
        let alpha = self.alpha;
        let ln_f = match self.anchor {
            None => {
                if i <= 0.0 {
                    return Ok(0.0);
                }
                (-(-i).exp_m1()).ln() / alpha
            }
            Some(Anchor { k, .. }) if alpha.abs() < ALPHA_ZERO_BAND => -(k.ln() - i).exp(),
            Some(Anchor { k, .. }) => softplus((-k * alpha).ln() - i) / alpha,
        };
        Ok(ln_f.exp().clamp(0.0, 1.0))
    }

    pub fn cdf_many(&mut self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.cdf(x)).collect()
    }
}

/// `F_k(x)` of the `alpha < 0` family.
pub fn reconstruct_neg(curve: &GraiCurve, alpha: f64, anchor: Anchor, x: f64) -> Result<f64> {
    if !(alpha < 0.0) {
        return Err(Error::param("alpha", format!("must be < 0, got {alpha}")));
    }
    ReconstructedCdf::new(curve.clone(), alpha, Some(anchor))?.cdf(x)
}

/// `F_k(x)` of the `alpha = 0` family.
pub fn reconstruct_zero(curve: &GraiCurve, anchor: Anchor, x: f64) -> Result<f64> {
    ReconstructedCdf::new(curve.clone(), 0.0, Some(anchor))?.cdf(x)
}

/// The unique distribution function with the given GRAI for `alpha > 0`.
pub fn reconstruct_pos(curve: &GraiCurve, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be > 0, got {alpha}")));
    }
    ReconstructedCdf::new(curve.clone(), alpha, None)?.cdf(x)
}

/// Largest `|F_rec(x) - F(x)|` over `grid` when `F_rec` is rebuilt from the
/// exact GRAI of `d`. For `alpha <= 0` the anchor is the median of `d` and `k`
/// is chosen to select `d` from the family.
pub fn roundtrip_error(d: &ParametricFamily, alpha: f64, grid: &[f64]) -> Result<f64> {
    let curve = GraiCurve::symbolic(*d, alpha)?;
    let anchor = if alpha > 0.0 {
        None
    } else {
        Some(Anchor::matching(d, alpha, d.quantile(0.5)?)?)
    };
    let mut rec = ReconstructedCdf::new(curve, alpha, anchor)?;
    let mut worst: f64 = 0.0;
    for &x in grid {
        worst = worst.max((rec.cdf(x)? - d.cdf(x)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn quantile_grid(d: &ParametricFamily, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let p = 0.001 + 0.998 * i as f64 / (n - 1) as f64;
                d.quantile(p).unwrap()
            })
            .collect()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn anchor_value() {
        let curve = GraiCurve::constant(2.0).unwrap();
        let anchor = Anchor::new(1.5, 0.3).unwrap();
        let f = reconstruct_neg(&curve, -2.0, anchor, 1.5).unwrap();
        assert_abs_diff_eq!(f, (1.0f64 + 0.6).powf(-0.5), epsilon = 1e-15);
        let f = reconstruct_zero(&curve, anchor, 1.5).unwrap();
        assert_abs_diff_eq!(f, (-0.3f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn constant_curve_negative_alpha() {
        let curve = GraiCurve::constant(4.0).unwrap();
        let anchor = Anchor::new(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            reconstruct_neg(&curve, -1.0, anchor, 1.0).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        let mut rec = ReconstructedCdf::new(curve, -1.0, Some(anchor)).unwrap();
        for x in log_grid(0.05, 20.0, 40) {
            let expected = 1.0 / (1.0 + x.powf(-4.0));
            assert_abs_diff_eq!(rec.cdf(x).unwrap(), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn constant_curve_zero_alpha() {
        let curve = GraiCurve::constant(1.7).unwrap();
        let anchor = Anchor::new(1.0, 1.0).unwrap();
        let mut rec = ReconstructedCdf::new(curve, 0.0, Some(anchor)).unwrap();
        for x in log_grid(0.2, 30.0, 40) {
            assert_abs_diff_eq!(rec.cdf(x).unwrap(), (-x.powf(-1.7)).exp(), epsilon = 1e-9);
        }
    }

    #[test]
    fn affine_curve_families() {
        let (a_coef, b_coef) = (0.8, 1.3);
        let curve = GraiCurve::affine(a_coef, b_coef).unwrap();
        let anchor = Anchor::new(1.0, 0.7).unwrap();
        let mut zero = ReconstructedCdf::new(curve.clone(), 0.0, Some(anchor)).unwrap();
        let mut neg = ReconstructedCdf::new(curve, -0.5, Some(anchor)).unwrap();
        for x in log_grid(0.05, 8.0, 30) {
            let e = x.powf(-a_coef) * (-b_coef * (x - 1.0)).exp();
            assert_abs_diff_eq!(zero.cdf(x).unwrap(), (-0.7 * e).exp(), epsilon = 1e-9);
            let expected = (1.0 + 0.5 * 0.7 * e).powf(-2.0);
            assert_abs_diff_eq!(neg.cdf(x).unwrap(), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn inverse_weibull_family_negative_alpha() {
        let (alpha, beta, lambda) = (-1.0, 2.0, 1.0);
        let d = ParametricFamily::inv_weibull2(beta, lambda).unwrap();
        let curve = GraiCurve::symbolic(d, alpha).unwrap();
        let a: f64 = 1.3;
        for k in [-1.0 / alpha, 0.4, 2.5] {
            let anchor = Anchor::new(a, k).unwrap();
            let gamma = k / ((-lambda * alpha / a.powf(beta)).exp() - 1.0);
            let mut rec = ReconstructedCdf::new(curve.clone(), alpha, Some(anchor)).unwrap();
            for x in quantile_grid(&d, 40) {
                let closed = (1.0 - gamma * alpha * ((-lambda * alpha / x.powf(beta)).exp() - 1.0))
                    .powf(1.0 / alpha);
                assert_abs_diff_eq!(rec.cdf(x).unwrap(), closed, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn anchor_matching_selects_inverse_weibull() {
        // gamma = -1/alpha picks invW2 itself
        let d = ParametricFamily::inv_weibull2(2.0, 1.0).unwrap();
        let curve = GraiCurve::symbolic(d, -1.0).unwrap();
        let anchor = Anchor::matching(&d, -1.0, 1.0).unwrap();
        let gamma = anchor.k / (1f64.exp() - 1.0);
        assert_abs_diff_eq!(gamma, 1.0, epsilon = 1e-14);
        let mut rec = ReconstructedCdf::new(curve, -1.0, Some(anchor)).unwrap();
        for x in quantile_grid(&d, 25) {
            assert_abs_diff_eq!(rec.cdf(x).unwrap(), (-1.0 / (x * x)).exp(), epsilon = 1e-8);
        }
    }

    #[test]
    fn positive_alpha_examples() {
        let curve = GraiCurve::affine(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            reconstruct_pos(&curve, 1.0, std::f64::consts::LN_2).unwrap(),
            0.5,
            epsilon = 1e-9
        );
        let curve = GraiCurve::affine(0.0, 1.0).unwrap();
        let mut rec = ReconstructedCdf::new(curve, 2.0, None).unwrap();
        let mut prev = 1.0;
        for x in [1e-3, 1e-5, 1e-8, 1e-12] {
            let f = rec.cdf(x).unwrap();
            assert!(f < prev);
            prev = f;
        }
        assert!(prev < 1e-5);

        let d = ParametricFamily::inv_weibull2(2.0, 1.0).unwrap();
        let curve = GraiCurve::symbolic(d, 2.0).unwrap();
        let mut rec = ReconstructedCdf::new(curve, 2.0, None).unwrap();
        for x in quantile_grid(&d, 40) {
            assert_abs_diff_eq!(rec.cdf(x).unwrap(), (-1.0 / (x * x)).exp(), epsilon = 1e-8);
        }
    }

    #[test]
    fn exponentiated_exponential_from_linear_curve() {
        for (alpha, b) in [(0.5, 2.0), (3.0, 0.7)] {
            let curve = GraiCurve::affine(0.0, b).unwrap();
            let mut rec = ReconstructedCdf::new(curve, alpha, None).unwrap();
            for x in log_grid(0.01, 10.0, 30) {
                let expected = (-(-b * x).exp_m1()).powf(1.0 / alpha);
                assert_abs_diff_eq!(rec.cdf(x).unwrap(), expected, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn positive_alpha_divergence_is_reported() {
        let curve = GraiCurve::constant(2.0).unwrap();
        let err = reconstruct_pos(&curve, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::ConditionViolation(_)), "{err}");
        let curve = GraiCurve::constant(1e-3).unwrap();
        let err = reconstruct_pos(&curve, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::ConditionViolation(_)), "{err}");
    }

    #[test]
    fn argument_validation() {
        let curve = GraiCurve::constant(1.0).unwrap();
        let anchor = Anchor::new(1.0, 1.0).unwrap();
        assert!(reconstruct_neg(&curve, 0.0, anchor, 1.0).is_err());
        assert!(reconstruct_pos(&curve, -1.0, 1.0).is_err());
        assert!(ReconstructedCdf::new(curve.clone(), -1.0, None).is_err());
        assert!(Anchor::new(0.0, 1.0).is_err());
        assert!(Anchor::new(1.0, -1.0).is_err());
        let negative = GraiCurve::affine(-1.0, 1.0).unwrap();
        assert!(matches!(
            ReconstructedCdf::new(negative, -1.0, Some(anchor)),
            Err(Error::ConditionViolation(_))
        ));
    }

    #[test]
    fn conditions_examples() {
        use ConditionStatus::*;
        let constant = GraiCurve::constant(3.0).unwrap();
        assert_eq!(
            check_conditions(&constant, -1.0),
            ConditionReport {
                c1: Pass,
                c2: Pass,
                c3: Pass
            }
        );
        assert_eq!(check_conditions(&constant, 1.0).c2, Fail);
        let linear = GraiCurve::affine(0.0, 1.5).unwrap();
        assert!(check_conditions(&linear, 1.0).all_pass());
        assert_eq!(check_conditions(&linear, -1.0).c2, Fail);
        let affine = GraiCurve::affine(1.0, 2.0).unwrap();
        assert!(check_conditions(&affine, 0.0).all_pass());
        assert_eq!(check_conditions(&affine, 0.5).c2, Fail);
        let negative = GraiCurve::affine(2.0, -0.1).unwrap();
        assert_eq!(check_conditions(&negative, -1.0).c1, Fail);
    }

    #[test]
    fn conditions_for_catalog_curves() {
        let d = ParametricFamily::inv_weibull2(2.0, 1.0).unwrap();
        for alpha in [-1.0, 0.0, 1.0, 2.0] {
            let r = check_conditions(&GraiCurve::symbolic(d, alpha).unwrap(), alpha);
            assert!(!r.any_fail(), "alpha {alpha}: {r}");
        }
        let d = ParametricFamily::inv_log_logistic(4.0, 0.5).unwrap();
        let r = check_conditions(&GraiCurve::symbolic(d, -1.0).unwrap(), -1.0);
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn tabulated_reconstruction_uses_interpolant() {
        use crate::grai::TabulatedCurve;
        let xs = log_grid(0.1, 10.0, 7);
        let t = TabulatedCurve::new(Some(-1.0), xs.clone(), vec![2.0; 7]).unwrap();
        let anchor = Anchor::new(1.0, 1.0).unwrap();
        let mut rec = ReconstructedCdf::new(GraiCurve::Tabulated(t), -1.0, Some(anchor)).unwrap();
        // constant extrapolation makes the whole line exact
        for x in log_grid(0.01, 100.0, 20) {
            assert_abs_diff_eq!(
                rec.cdf(x).unwrap(),
                1.0 / (1.0 + x.powf(-2.0)),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn anchor_invariance() {
        let d = ParametricFamily::inv_log_logistic(3.0, 2.0).unwrap();
        let curve = GraiCurve::symbolic(d, -0.5).unwrap();
        let anchor = Anchor::new(1.0, 0.8).unwrap();
        let moved = anchor.rebased(&curve, 3.5).unwrap();
        let mut ra = ReconstructedCdf::new(curve.clone(), -0.5, Some(anchor)).unwrap();
        let mut rb = ReconstructedCdf::new(curve, -0.5, Some(moved)).unwrap();
        for x in quantile_grid(&d, 30) {
            assert_abs_diff_eq!(ra.cdf(x).unwrap(), rb.cdf(x).unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn positive_alpha_independent_of_subdivision() {
        let d = ParametricFamily::inv_log_logistic(2.5, 1.0).unwrap();
        let curve = GraiCurve::symbolic(d, 0.7).unwrap();
        let mut r1 = ReconstructedCdf::new(curve.clone(), 0.7, None).unwrap();
        let mut r2 = ReconstructedCdf::new(curve, 0.7, None)
            .unwrap()
            .with_subdivision_offset(0.37)
            .unwrap();
        for x in quantile_grid(&d, 30) {
            assert_abs_diff_eq!(r1.cdf(x).unwrap(), r2.cdf(x).unwrap(), epsilon = 2e-9);
        }
    }

    #[test]
    fn roundtrip_examples() {
        let cases = [
            (ParametricFamily::inv_weibull2(2.0, 1.0).unwrap(), 1.0),
            (ParametricFamily::inv_log_logistic(4.0, 0.5).unwrap(), -1.0),
            (ParametricFamily::exponential(1.0).unwrap(), 0.0),
        ];
        for (d, alpha) in cases {
            let err = roundtrip_error(&d, alpha, &quantile_grid(&d, 50)).unwrap();
            assert!(err < 1e-6, "{d} alpha {alpha}: {err:e}");
        }
    }

    #[test]
    fn cache_does_not_change_values() {
        let d = ParametricFamily::inv_modified_weibull(0.7, 2.0, 3.0).unwrap();
        let curve = GraiCurve::symbolic(d, 0.0).unwrap();
        let anchor = Anchor::matching(&d, 0.0, 1.0).unwrap();
        let grid = quantile_grid(&d, 20);
        let mut warm = ReconstructedCdf::new(curve.clone(), 0.0, Some(anchor)).unwrap();
        let forward = warm.cdf_many(&grid).unwrap();
        for (i, &x) in grid.iter().enumerate().rev() {
            let cold = reconstruct_zero(&curve, anchor, x).unwrap();
            assert_abs_diff_eq!(forward[i], cold, epsilon = 1e-9);
            assert_abs_diff_eq!(forward[i], d.cdf(x).unwrap(), epsilon = 1e-7);
        }
    }
}
