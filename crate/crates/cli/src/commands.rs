use std::fs;

use serde::Serialize;

use raintensity::characterize::check_conditions;
use raintensity::estimate::grai_grid;
use raintensity::fit::fit_pipeline;
use raintensity::gof::{chi_square, chi_square_counts, ks_test_with};
use raintensity::grai::grai_alpha;
use raintensity::orders::{implication_report, joint_grid, rai_order_check};
use raintensity::tsv::fmt_f64;
use raintensity::{
    Anchor, ChiSquareConfig, ConditionReport, Error, FitConfig, GraiCurve, GridSpec, KdeModel,
    KsPValue, Lifetime, ParametricFamily, ReconstructedCdf, TabulatedCurve,
};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::io::{ingest_csv, json, xy_tsv, Artifact};
use crate::SCHEMA_VERSION;

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn report<T: Serialize>(body: T) -> String {
    json(&Report {
        schema_version: SCHEMA_VERSION,
        body,
    })
}

pub fn run(command: &Command) -> CliResult<Vec<Artifact>> {
    match command {
        Command::DistEval(a) => dist_eval(a),
        Command::GraiCurve(a) => grai_curve(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Estimate(a) => estimate(a),
        Command::Fit(a) => fit(a),
        Command::Gof(a) => gof(a),
        Command::Order(a) => order(a),
        Command::Simulate(a) => simulate(a),
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> CliResult<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(CliError::Usage(format!(
            "range {lo},{hi} must satisfy 0 < lo < hi < inf"
        )));
    }
    if n < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// `None` where the value is undefined (outside the numerically usable range).
fn defined(v: raintensity::Result<f64>) -> CliResult<Option<f64>> {
    match v {
        Ok(v) => Ok(Some(v)),
        Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct PointEval {
    x: f64,
    cdf: f64,
    sf: f64,
    pdf: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    grai: Option<Option<f64>>,
}

#[derive(Serialize)]
struct QuantileEval {
    p: f64,
    x: f64,
}

#[derive(Serialize)]
struct DistEvalReport {
    spec: String,
    family: ParametricFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    points: Vec<PointEval>,
    quantiles: Vec<QuantileEval>,
}

fn dist_eval(a: &DistEvalArgs) -> CliResult<Vec<Artifact>> {
    let d = a.family;
    if a.x.is_empty() && a.p.is_empty() {
        return Err(CliError::Usage("give --x and/or --p".into()));
    }
    let mut points = Vec::with_capacity(a.x.len());
    for &x in &a.x {
        points.push(PointEval {
            x,
            cdf: d.cdf(x)?,
            sf: d.ln_sf(x)?.exp(),
            pdf: d.pdf(x)?,
            grai: match a.alpha {
                Some(alpha) => Some(defined(grai_alpha(&d, alpha, x))?),
                None => None,
            },
        });
    }
    let quantiles =
        a.p.iter()
            .map(|&p| {
                Ok(QuantileEval {
                    p,
                    x: d.quantile(p)?,
                })
            })
            .collect::<CliResult<_>>()?;
    let body = DistEvalReport {
        spec: d.to_string(),
        family: d,
        alpha: a.alpha,
        points,
        quantiles,
    };
    Ok(vec![Artifact::primary("dist_eval.json", report(body))])
}

fn grai_curve(a: &GraiCurveArgs) -> CliResult<Vec<Artifact>> {
    let d = a.family;
    let (lo, hi) = match a.range {
        Some(r) => r,
        None => (d.quantile(0.001)?, d.quantile(0.999)?),
    };
    let xs = log_spaced(lo, hi, a.points)?;
    let values = xs
        .iter()
        .map(|&x| grai_alpha(&d, a.alpha, x))
        .collect::<raintensity::Result<Vec<_>>>()?;
    let t = TabulatedCurve::new(Some(a.alpha), xs, values)?;
    Ok(vec![Artifact::primary("grai_curve.tsv", t.to_tsv())])
}

#[derive(Serialize)]
struct ReconstructReport {
    alpha: f64,
    source: GraiCurve,
    anchor: Option<Anchor>,
    conditions: ConditionReport,
    points: usize,
}

fn reconstruct(a: &ReconstructArgs) -> CliResult<Vec<Artifact>> {
    let s = &a.source;
    let (curve, file_alpha) = if let Some(path) = &s.curve {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let t = TabulatedCurve::from_tsv(&text)?;
        let alpha = t.alpha();
        (GraiCurve::Tabulated(t), alpha)
    } else if let Some(c) = s.constant {
        (GraiCurve::constant(c)?, None)
    } else if let Some((i, k)) = s.affine {
        (GraiCurve::affine(i, k)?, None)
    } else {
        let family = s.family.expect("clap enforces one source");
        let alpha = a
            .alpha
            .ok_or_else(|| CliError::Usage("--family needs --alpha".into()))?;
        (GraiCurve::symbolic(family, alpha)?, None)
    };
    let alpha = match (a.alpha, file_alpha) {
        (Some(x), Some(y)) if x != y => {
            return Err(CliError::Usage(format!(
                "--alpha {x} disagrees with the curve file (alpha={y})"
            )))
        }
        (Some(x), _) | (None, Some(x)) => x,
        (None, None) => return Err(CliError::Usage("--alpha is required".into())),
    };
    let anchor = match a.anchor {
        Some((at, k)) => Some(Anchor::new(at, k)?),
        None => None,
    };
    let xs = if !a.x.is_empty() {
        a.x.clone()
    } else if let Some((lo, hi)) = a.range {
        log_spaced(lo, hi, a.points)?
    } else {
        match &curve {
            GraiCurve::Tabulated(t) => t.xs().to_vec(),
            GraiCurve::Symbolic { family, .. } => {
                log_spaced(family.quantile(0.001)?, family.quantile(0.999)?, a.points)?
            }
            _ => return Err(CliError::Usage("give --x or --range".into())),
        }
    };
    let conditions = check_conditions(&curve, alpha);
    let mut rec =
        ReconstructedCdf::new(curve.clone(), alpha, anchor)?.with_tolerance(a.tolerance)?;
    let cdf = rec.cdf_many(&xs)?;
    let body = ReconstructReport {
        alpha,
        source: curve,
        anchor: rec.anchor(),
        conditions,
        points: xs.len(),
    };
    Ok(vec![
        Artifact::primary(
            "reconstructed_cdf.tsv",
            xy_tsv(&format!("cdf alpha={alpha}"), &xs, &cdf),
        ),
        Artifact::secondary("reconstruct.json", report(body)),
    ])
}

fn kde(input: &std::path::Path, g: &GridArgs) -> CliResult<(KdeModel, GridSpec)> {
    let s = ingest_csv(input)?;
    let m = match g.bandwidth {
        Some(h) => KdeModel::new(s, h)?,
        None => KdeModel::with_default_bandwidth(s)?,
    };
    let mut spec = GridSpec::band(g.band.0, g.band.1).with_points(g.points);
    spec.eps = g.eps;
    Ok((m, spec))
}

#[derive(Serialize)]
struct EstimateReport {
    alpha: f64,
    sample_size: usize,
    bandwidth: f64,
    grid: GridSpec,
    points: usize,
}

fn estimate(a: &EstimateArgs) -> CliResult<Vec<Artifact>> {
    let (m, spec) = kde(&a.input, &a.grid)?;
    let GraiCurve::Tabulated(t) = grai_grid(&m, a.alpha, &spec)? else {
        unreachable!("grai_grid returns a tabulated curve")
    };
    let body = EstimateReport {
        alpha: a.alpha,
        sample_size: m.sample().len(),
        bandwidth: m.bandwidth(),
        grid: spec,
        points: t.len(),
    };
    Ok(vec![
        Artifact::primary("empirical_grai.tsv", t.to_tsv()),
        Artifact::secondary("estimate.json", report(body)),
    ])
}

fn fit(a: &FitArgs) -> CliResult<Vec<Artifact>> {
    let (m, grid) = kde(&a.input, &a.grid)?;
    let cfg = FitConfig {
        bandwidth: Some(m.bandwidth()),
        grid,
    };
    let r = fit_pipeline(m.sample(), a.alpha, a.model, &cfg)?;
    Ok(vec![Artifact::primary("fit.json", report(r))])
}

fn gof(a: &GofArgs) -> CliResult<Vec<Artifact>> {
    let d = a.family;
    let r = match a.test {
        TestArg::Ks => {
            let path = a
                .input
                .as_ref()
                .ok_or_else(|| CliError::Usage("--test ks needs --input".into()))?;
            let method = match a.ks_pvalue {
                KsMethodArg::Stephens => KsPValue::Stephens,
                KsMethodArg::Exact => KsPValue::Exact,
            };
            ks_test_with(&ingest_csv(path)?, &d, method)?
        }
        TestArg::Chi2 => {
            let width = a
                .width
                .ok_or_else(|| CliError::Usage("--test chi2 needs --width".into()))?;
            let classes = match (a.classes, a.counts.len()) {
                (Some(k), n) if n > 0 && k != n => {
                    return Err(CliError::Usage(format!(
                        "--classes {k} but {n} counts were given"
                    )))
                }
                (Some(k), _) => k,
                (None, 0) => 20,
                (None, n) => n,
            };
            let mut cfg = ChiSquareConfig::new(classes, width, a.nparams);
            cfg.merge_threshold = a.merge_threshold;
            cfg.fold_overflow = !a.no_fold_overflow;
            cfg.tail_in_expected = a.tail_in_expected;
            if !a.counts.is_empty() {
                let total = a.total.expect("clap enforces --total");
                chi_square_counts(&a.counts, total, &d, &cfg)?
            } else if let Some(path) = &a.input {
                chi_square(&ingest_csv(path)?, &d, &cfg)?
            } else {
                return Err(CliError::Usage("give --input or --counts".into()));
            }
        }
    };
    let mut out = Vec::new();
    if a.test == TestArg::Chi2 {
        let mut tsv = String::from("# lower\tupper\tobserved\texpected\n");
        for c in &r.pooled {
            tsv.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                fmt_f64(c.lower),
                fmt_f64(c.upper),
                c.observed,
                fmt_f64(c.expected)
            ));
        }
        out.push(Artifact::secondary("classes.tsv", tsv));
    }
    out.insert(0, Artifact::primary("gof.json", report(r)));
    Ok(out)
}

fn order(a: &OrderArgs) -> CliResult<Vec<Artifact>> {
    let grid = joint_grid(&a.x, &a.y, a.grid)?;
    let body = if a.implication {
        report(implication_report(&a.x, &a.y, a.alpha, &grid)?)
    } else {
        report(rai_order_check(&a.x, &a.y, a.alpha, &grid)?)
    };
    Ok(vec![Artifact::primary("order.json", body)])
}

fn simulate(a: &SimulateArgs) -> CliResult<Vec<Artifact>> {
    let s = a.family.sample(a.n, a.seed)?;
    let mut csv = format!("# {} n={} seed={}\n", a.family, a.n, a.seed);
    for v in s.values() {
        csv.push_str(&fmt_f64(*v));
        csv.push('\n');
    }
    Ok(vec![Artifact::primary("sample.csv", csv)])
}
