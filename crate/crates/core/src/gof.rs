//! Chi-square goodness of fit over equal-width classes and the one-sample
//! Kolmogorov-Smirnov test.

use serde::Serialize;

use crate::distributions::Lifetime;
use crate::error::{Error, Result};
use crate::numeric::special::{chi_square_sf, kolmogorov_exact_sf, kolmogorov_sf};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    ChiSquare,
    KolmogorovSmirnov,
}

/// One row of a class table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassRow {
    pub lower: f64,
    pub upper: f64,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub test: TestKind,
    pub statistic: f64,
    /// Degrees of freedom (chi-square only).
    pub dof: Option<usize>,
    pub p_value: f64,
    pub p_value_method: &'static str,
    pub n: u64,
    /// Classes before pooling (chi-square only).
    pub classes: Vec<ClassRow>,
    /// Classes after pooling; the statistic is computed over these.
    pub pooled: Vec<ClassRow>,
}

/// Equal-width classes `[j w, (j + 1) w)`, `j = 0..classes`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareConfig {
    pub classes: usize,
    pub width: f64,
    /// Fitted parameters subtracted from the degrees of freedom.
    pub n_params: usize,
    /// Minimum expected count per pooled class.
    pub merge_threshold: f64,
    /// Count observations at or beyond the last edge in the last class.
    pub fold_overflow: bool,
    /// Add the model's mass beyond the last edge to the last expected count.
    pub tail_in_expected: bool,
}

impl ChiSquareConfig {
    pub fn new(classes: usize, width: f64, n_params: usize) -> Self {
        Self {
            classes,
            width,
            n_params,
            merge_threshold: 5.0,
            fold_overflow: true,
            tail_in_expected: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.classes < 2 {
            return Err(Error::param("classes", "at least 2 classes are required"));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::param(
                "width",
                format!("must be finite and > 0, got {}", self.width),
            ));
        }
        if !(self.merge_threshold.is_finite() && self.merge_threshold >= 0.0) {
            return Err(Error::param("merge_threshold", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Pools low-expectation classes from both ends of the table: while either
/// end class or its inner neighbour has an expected count below `threshold`,
/// the end with the smaller expectation is merged inward.
pub fn pool_classes(rows: &[ClassRow], threshold: f64) -> Vec<ClassRow> {
    let mut rows = rows.to_vec();
    if rows.is_empty() {
        return rows;
    }
    let (mut i, mut j) = (0, rows.len() - 1);
    while i < j
        && (rows[i].expected < threshold
            || rows[j].expected < threshold
            || rows[i + 1].expected < threshold
            || rows[j - 1].expected < threshold)
    {
        if rows[i].expected < rows[j].expected {
            let r = rows[i];
            rows[i + 1].lower = r.lower;
            rows[i + 1].observed += r.observed;
            rows[i + 1].expected += r.expected;
            i += 1;
        } else {
            let r = rows[j];
            rows[j - 1].upper = r.upper;
            rows[j - 1].observed += r.observed;
            rows[j - 1].expected += r.expected;
            j -= 1;
        }
    }
    rows[i..=j].to_vec()
}

/// Chi-square test from a complete class table with expected counts.
pub fn chi_square_table(rows: &[ClassRow], n_params: usize, threshold: f64) -> Result<GofReport> {
    if rows.is_empty() {
        return Err(Error::InsufficientData("empty class table".into()));
    }
    let pooled = pool_classes(rows, threshold);
    if pooled.len() < n_params + 2 {
        return Err(Error::InsufficientData(format!(
            "{} classes after pooling leave no degrees of freedom for {n_params} fitted parameters",
            pooled.len()
        )));
    }
    let dof = pooled.len() - 1 - n_params;
    let mut statistic = 0.0;
    for r in &pooled {
        if !(r.expected > 0.0) {
            return Err(Error::Degenerate(format!(
                "class [{}, {}) has zero expected count",
                r.lower, r.upper
            )));
        }
        statistic += (r.observed as f64 - r.expected).powi(2) / r.expected;
    }
    Ok(GofReport {
        test: TestKind::ChiSquare,
        statistic,
        dof: Some(dof),
        p_value: chi_square_sf(statistic, dof as f64),
        p_value_method: "chi_square_upper_tail",
        n: rows.iter().map(|r| r.observed).sum(),
        classes: rows.to_vec(),
        pooled,
    })
}

/// Chi-square test from observed class counts; `total` is the sample size,
/// which may exceed the sum of counts by the observations beyond the last edge.
pub fn chi_square_counts<D: Lifetime + ?Sized>(
    observed: &[u64],
    total: u64,
    d: &D,
    config: &ChiSquareConfig,
) -> Result<GofReport> {
    config.validate()?;
    if observed.len() != config.classes {
        return Err(Error::param(
            "counts",
            format!(
                "{} counts given for {} classes",
                observed.len(),
                config.classes
            ),
        ));
    }
    let counted: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    if counted > total {
        return Err(Error::param(
            "total",
            format!("{total} is below the sum of counts {counted}"),
        ));
    }
    let n = total as f64;
    let k = config.classes;
    let edges: Vec<f64> = (0..=k).map(|j| j as f64 * config.width).collect();
    let cdfs: Vec<f64> = edges.iter().map(|&x| d.cdf(x)).collect::<Result<_>>()?;
    let mut rows: Vec<ClassRow> = (0..k)
        .map(|j| ClassRow {
            lower: edges[j],
            upper: edges[j + 1],
            observed: observed[j],
            expected: n * (cdfs[j + 1] - cdfs[j]),
        })
        .collect();
    let last = &mut rows[k - 1];
    if config.fold_overflow {
        last.observed += total - counted;
    }
    if config.tail_in_expected {
        last.expected += n * (1.0 - cdfs[k]);
    }
    let mut report = chi_square_table(&rows, config.n_params, config.merge_threshold)?;
    report.n = total;
    Ok(report)
}

/// Class counts of a sample; the second value counts observations beyond the last edge.
pub fn class_counts(s: &Sample, classes: usize, width: f64) -> (Vec<u64>, u64) {
    let mut counts = vec![0u64; classes];
    let mut overflow = 0;
    for &x in s.values() {
        let j = (x / width).floor();
        if j < classes as f64 {
            counts[j as usize] += 1;
        } else {
            overflow += 1;
        }
    }
    (counts, overflow)
}

/// Chi-square test of a sample grouped into the configured classes.
pub fn chi_square<D: Lifetime + ?Sized>(
    s: &Sample,
    d: &D,
    config: &ChiSquareConfig,
) -> Result<GofReport> {
    config.validate()?;
    let (counts, _) = class_counts(s, config.classes, config.width);
    chi_square_counts(&counts, s.len() as u64, d, config)
}

/// How the Kolmogorov-Smirnov p-value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KsPValue {
    /// Limiting distribution at `K (sqrt n + 0.12 + 0.11 / sqrt n)`.
    #[default]
    Stephens,
    /// Exact finite-sample distribution.
    Exact,
}

/// `max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`.
pub fn ks_statistic<D: Lifetime + ?Sized>(s: &Sample, d: &D) -> Result<f64> {
    let n = s.len() as f64;
    let mut k: f64 = 0.0;
    for (i, &x) in s.values().iter().enumerate() {
        let f = d.cdf(x)?;
        k = k.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(k)
}

pub fn ks_test<D: Lifetime + ?Sized>(s: &Sample, d: &D) -> Result<GofReport> {
    ks_test_with(s, d, KsPValue::Stephens)
}

pub fn ks_test_with<D: Lifetime + ?Sized>(
    s: &Sample,
    d: &D,
    method: KsPValue,
) -> Result<GofReport> {
    let k = ks_statistic(s, d)?;
    let n = s.len();
    let (p_value, p_value_method) = match method {
        KsPValue::Stephens => {
            let rn = (n as f64).sqrt();
            (kolmogorov_sf(k * (rn + 0.12 + 0.11 / rn)), "stephens")
        }
        KsPValue::Exact => (kolmogorov_exact_sf(n, k), "exact"),
    };
    Ok(GofReport {
        test: TestKind::KolmogorovSmirnov,
        statistic: k,
        dof: None,
        p_value,
        p_value_method,
        n: n as u64,
        classes: Vec::new(),
        pooled: Vec::new(),
    })
}
