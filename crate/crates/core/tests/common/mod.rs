#![allow(dead_code)]

/// Failure times of 20 components.
pub const FAILURE_TIMES: [f64; 20] = [
    0.067, 0.068, 0.076, 0.081, 0.084, 0.085, 0.085, 0.086, 0.089, 0.098, 0.098, 0.114, 0.114,
    0.115, 0.121, 0.125, 0.131, 0.149, 0.160, 0.485,
];

/// Grouped counts of a simulated inverse log-logistic sample, 20 classes of width 0.21.
pub const GROUPED_OBSERVED: [u64; 20] = [
    26, 322, 371, 150, 68, 29, 15, 5, 3, 3, 0, 1, 2, 1, 0, 0, 0, 0, 0, 1,
];

/// Published expected frequencies for the grouped counts.
pub const GROUPED_EXPECTED: [f64; 20] = [
    36.8543, 310.6691, 365.5653, 168.0593, 64.2263, 26.5322, 12.2550, 6.2413, 3.4409, 2.0223,
    1.2522, 0.8095, 0.5425, 0.3749, 0.2660, 0.1931, 0.1430, 0.1078, 0.0826, 0.0641,
];

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
