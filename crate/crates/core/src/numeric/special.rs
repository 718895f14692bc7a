//! Distribution functions used by the estimators and the goodness-of-fit tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Upper tail `P(X > x)` of a chi-square variable with `dof` degrees of freedom.
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    // dof > 0 is checked by callers
    let dist = ChiSquared::new(dof).expect("positive degrees of freedom");
    dist.sf(x).clamp(0.0, 1.0)
}

/// Limiting Kolmogorov upper tail `Q(t) = 2 sum (-1)^(j-1) exp(-2 j^2 t^2)`.
///
/// The alternating series is slow for small `t`, where the Jacobi theta
/// inversion is used instead.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 1.18 {
        let v = PI * PI / (8.0 * t * t);
        let mut s = 0.0;
        for j in 1..=20 {
            let k = (2 * j - 1) as f64;
            let term = (-k * k * v).exp();
            s += term;
            if term < 1e-18 {
                break;
            }
        }
        (1.0 - (2.0 * PI).sqrt() / t * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for j in 1..=100 {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * t * t).exp();
            s += if j % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Exact `P(D_n >= d)` for the one-sample Kolmogorov statistic
/// (Marsaglia, Tsang & Wang matrix-power algorithm).
pub fn kolmogorov_exact_sf(n: usize, d: f64) -> f64 {
    if d <= 0.0 {
        return 1.0;
    }
    if d >= 1.0 {
        return 0.0;
    }
    let nf = n as f64;
    let k = (nf * d) as usize + 1;
    let m = 2 * k - 1;
    let h = k as f64 - nf * d;

    let mut hm = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i + 1 >= j {
                hm[i * m + j] = 1.0;
            }
        }
    }
    for i in 0..m {
        hm[i * m] -= h.powi(i as i32 + 1);
        hm[(m - 1) * m + i] -= h.powi((m - i) as i32);
    }
    if 2.0 * h - 1.0 > 0.0 {
        hm[(m - 1) * m] += (2.0 * h - 1.0).powi(m as i32);
    }
    for i in 0..m {
        for j in 0..m {
            if i + 1 > j {
                for g in 1..=(i + 1 - j) {
                    hm[i * m + j] /= g as f64;
                }
            }
        }
    }

    let (q, mut exp10) = matrix_power(&hm, m, n);
    let mut s = q[(k - 1) * m + (k - 1)];
    for i in 1..=n {
        s = s * i as f64 / nf;
        if s < 1e-140 {
            s *= 1e140;
            exp10 -= 140;
        }
    }
    let cdf = s * 10f64.powi(exp10);
    (1.0 - cdf).clamp(0.0, 1.0)
}

fn matmul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * m];
    for i in 0..m {
        for l in 0..m {
            let ail = a[i * m + l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..m {
                c[i * m + j] += ail * b[l * m + j];
            }
        }
    }
    c
}

// Returns (matrix, decimal exponent) with entries rescaled to avoid overflow.
fn matrix_power(a: &[f64], m: usize, n: usize) -> (Vec<f64>, i32) {
    if n == 1 {
        return (a.to_vec(), 0);
    }
    let (half, e_half) = matrix_power(a, m, n / 2);
    let mut v = matmul(&half, &half, m);
    let mut e = 2 * e_half;
    if n % 2 == 1 {
        v = matmul(a, &v, m);
    }
    if v[(m / 2) * m + m / 2] > 1e140 {
        for x in v.iter_mut() {
            *x *= 1e-140;
        }
        e += 140;
    }
    (v, e)
}
