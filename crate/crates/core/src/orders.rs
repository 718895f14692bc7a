//! alpha-RAI stochastic orders checked on finite grids.
//!
//! `X <=_{alpha RAI} Y` iff `L_{alpha,X}(x) <= L_{alpha,Y}(x)` for all `x > 0`.
//! Every verdict here is evidence on a grid, not a proof.

use serde::Serialize;

use crate::distributions::{Lifetime, ParametricFamily};
use crate::error::{finite, Error, Result};
use crate::grai::{ai_alpha, grai_alpha, grai_alpha_generic};

/// Absolute tolerance for treating two GRAI values as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_GRID_POINTS: usize = 512;

const EVIDENCE: &str = "numerical evidence";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderDirection {
    /// `X <= Y`
    LessEq,
    /// `X >= Y`
    GreaterEq,
    Equal,
    Crossing,
}

impl OrderDirection {
    /// Whether this outcome is consistent with `X <= Y`.
    pub fn implies_less_eq(self) -> bool {
        matches!(self, Self::LessEq | Self::Equal)
    }

    /// Whether this outcome is consistent with `X >= Y`.
    pub fn implies_greater_eq(self) -> bool {
        matches!(self, Self::GreaterEq | Self::Equal)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderCheckResult {
    pub alpha: f64,
    pub direction: OrderDirection,
    /// Approximate abscissae where `L_X - L_Y` changes sign.
    pub crossings: Vec<f64>,
    /// `L_X - L_Y` of largest magnitude over the grid.
    pub max_signed_gap: f64,
    pub grid_points: usize,
    pub grid_lower: f64,
    pub grid_upper: f64,
    pub evidence: &'static str,
}

/// `n` log-spaced points across the intersection of the `[q_0.001, q_0.999]`
/// bands of both distributions.
pub fn joint_grid<X, Y>(dx: &X, dy: &Y, n: usize) -> Result<Vec<f64>>
where
    X: Lifetime + ?Sized,
    Y: Lifetime + ?Sized,
{
    if n < 2 {
        return Err(Error::param("grid", "at least 2 grid points are required"));
    }
    let lo = dx.quantile(0.001)?.max(dy.quantile(0.001)?);
    let hi = dx.quantile(0.999)?.min(dy.quantile(0.999)?);
    if !(lo < hi) {
        return Err(Error::InsufficientData(format!(
            "the interior quantile bands do not overlap ([{lo}, {hi}])"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// Compares the alpha-GRAI of two catalog distributions pointwise on `grid`.
/// Grid points where either curve is undefined are skipped.
pub fn rai_order_check(
    dx: &ParametricFamily,
    dy: &ParametricFamily,
    alpha: f64,
    grid: &[f64],
) -> Result<OrderCheckResult> {
    finite("alpha", alpha)?;
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        match (grai_alpha(dx, alpha, x), grai_alpha(dy, alpha, x)) {
            (Ok(a), Ok(b)) => points.push((x, a - b)),
            (Err(Error::Domain(_)), _) | (_, Err(Error::Domain(_))) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    compare(alpha, &points)
}

fn sign(gap: f64) -> i8 {
    if gap.abs() <= TIE_TOLERANCE {
        0
    } else if gap > 0.0 {
        1
    } else {
        -1
    }
}

fn compare(alpha: f64, points: &[(f64, f64)]) -> Result<OrderCheckResult> {
    if points.is_empty() {
        return Err(Error::InsufficientData("no admissible grid points".into()));
    }
    let mut crossings = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    let (mut pos, mut neg) = (false, false);
    let mut max_signed_gap: f64 = 0.0;
    for &(x, g) in points {
        if g.abs() > max_signed_gap.abs() {
            max_signed_gap = g;
        }
        match sign(g) {
            0 => continue,
            1 => pos = true,
            _ => neg = true,
        }
        if let Some((x0, g0)) = last {
            if sign(g0) != sign(g) {
                // linear interpolation of the gap between the two points
                crossings.push(x0 + (x - x0) * g0 / (g0 - g));
            }
        }
        last = Some((x, g));
    }
    let direction = match (pos, neg) {
        (false, false) => OrderDirection::Equal,
        (false, true) => OrderDirection::LessEq,
        (true, false) => OrderDirection::GreaterEq,
        (true, true) => OrderDirection::Crossing,
    };
    Ok(OrderCheckResult {
        alpha,
        direction,
        crossings,
        max_signed_gap,
        grid_points: points.len(),
        grid_lower: points[0].0,
        grid_upper: points[points.len() - 1].0,
        evidence: EVIDENCE,
    })
}

/// `max |L_{alpha,X}(1/x) - GRAI_{alpha,1/X}(x)|` over `grid`, where
/// `d_recip` is supplied by the caller as the law of `1/X`.
pub fn reciprocal_duality_check<D, R>(d: &D, d_recip: &R, alpha: f64, grid: &[f64]) -> Result<f64>
where
    D: Lifetime + ?Sized,
    R: Lifetime + ?Sized,
{
    finite("alpha", alpha)?;
    if grid.is_empty() {
        return Err(Error::InsufficientData("empty grid".into()));
    }
    let mut worst: f64 = 0.0;
    for &x in grid {
        let lhs = ai_alpha(d, alpha, 1.0 / x)?;
        let rhs = grai_alpha_generic(d_recip, alpha, x)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// One implied order checked at a single alpha.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationCheck {
    pub alpha: f64,
    pub expected: OrderDirection,
    pub observed: OrderDirection,
    pub holds: bool,
    pub max_signed_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub beta: f64,
    /// `F_X >= F_Y` on the grid, i.e. `X <=_st Y`.
    pub stochastic_premise: bool,
    pub beta_order: OrderDirection,
    pub premise_holds: bool,
    pub checks: Vec<ImplicationCheck>,
    /// `None` when the premise fails and nothing is claimed.
    pub conclusion_holds: Option<bool>,
    pub grid_points: usize,
    pub evidence: &'static str,
}

/// Checks the monotonicity cascade: under `X <=_st Y`, `X <=_{beta RAI} Y`
/// implies `X <=_{alpha RAI} Y` for `alpha < beta`, and `X >=_{beta RAI} Y`
/// implies `X >=_{alpha RAI} Y` for `alpha > beta`. Implied orders are
/// spot-checked at `beta - {2, 1, 0.5}` and `beta + {0.5, 1, 2}`.
pub fn implication_report(
    dx: &ParametricFamily,
    dy: &ParametricFamily,
    beta: f64,
    grid: &[f64],
) -> Result<ImplicationReport> {
    finite("beta", beta)?;
    let mut st = true;
    for &x in grid {
        if dx.cdf(x)? < dy.cdf(x)? - TIE_TOLERANCE {
            st = false;
            break;
        }
    }
    let beta_order = rai_order_check(dx, dy, beta, grid)?.direction;
    let premise_holds = st && beta_order != OrderDirection::Crossing;
    let mut checks = Vec::new();
    if premise_holds {
        let mut targets = Vec::new();
        if beta_order.implies_less_eq() {
            targets.extend([-2.0, -1.0, -0.5].map(|d| (beta + d, OrderDirection::LessEq)));
        }
        if beta_order.implies_greater_eq() {
            targets.extend([0.5, 1.0, 2.0].map(|d| (beta + d, OrderDirection::GreaterEq)));
        }
        for (alpha, expected) in targets {
            let r = rai_order_check(dx, dy, alpha, grid)?;
            let holds = match expected {
                OrderDirection::LessEq => r.direction.implies_less_eq(),
                _ => r.direction.implies_greater_eq(),
            };
            checks.push(ImplicationCheck {
                alpha,
                expected,
                observed: r.direction,
                holds,
                max_signed_gap: r.max_signed_gap,
            });
        }
    }
    Ok(ImplicationReport {
        beta,
        stochastic_premise: st,
        beta_order,
        premise_holds,
        conclusion_holds: premise_holds.then(|| checks.iter().all(|c| c.holds)),
        checks,
        grid_points: grid.len(),
        evidence: EVIDENCE,
    })
}
