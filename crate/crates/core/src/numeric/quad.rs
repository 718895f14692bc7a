//! Adaptive Gauss–Kronrod (7/15) quadrature with a global error budget.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center)?;

    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let error = rescale_error(
        (res_k - res_g) * half,
        res_abs * half.abs(),
        res_asc * half.abs(),
    );
    if !value.is_finite() {
        return Err(Error::Domain(format!("integrand not finite on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over `[a, b]` (either orientation) by bisecting the panel
/// with the largest error estimate until the total estimate meets
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("integration bound"));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut panels = vec![kronrod(&mut f, lo, hi)?];
    let mut evaluations = 15;

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            return Ok(QuadResult {
                value: sign * total,
                error: err,
                evaluations,
            });
        }
        if panels.len() >= opts.max_subdivisions {
            return Err(Error::Quadrature {
                lower: lo,
                upper: hi,
                estimate: err,
            });
        }

        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let Panel { a: pa, b: pb, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // no representable bisection point left
            return Err(Error::Quadrature {
                lower: lo,
                upper: hi,
                estimate: err,
            });
        }
        panels.push(kronrod(&mut f, pa, mid)?);
        panels.push(kronrod(&mut f, mid, pb)?);
        evaluations += 30;
    }
}
