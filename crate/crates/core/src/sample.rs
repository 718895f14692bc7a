use serde::Serialize;

use crate::error::{Error, Result};

/// Validated positive observations, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
    label: String,
}

impl Sample {
    pub fn new(mut values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData("sample is empty".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v <= 0.0)
        {
            return Err(Error::param(
                "sample",
                format!(
                    "observation #{} = {v} is not a positive finite number",
                    i + 1
                ),
            ));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Sample standard deviation (`n - 1` denominator); zero for `n = 1`.
    pub fn std_dev(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        let ss: f64 = self.values.iter().map(|v| (v - m) * (v - m)).sum();
        (ss / (n - 1) as f64).sqrt()
    }

    /// Inverse of the empirical cdf: the smallest order statistic `x_(i)` with
    /// `i / n >= p`; `p = 0` gives the minimum.
    pub fn ecdf_quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let i = (p.clamp(0.0, 1.0) * n as f64).ceil() as usize;
        self.values[i.clamp(1, n) - 1]
    }

    /// Quantile by linear interpolation between order statistics at
    /// positions `(n - 1) p`.
    pub fn interpolated_quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(n - 1);
        self.values[lo] + (h - lo as f64) * (self.values[hi] - self.values[lo])
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Sample::new(
            self.values.iter().map(|v| v * c).collect(),
            self.label.clone(),
        )
    }
}
