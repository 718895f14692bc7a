//! Sample ingestion and artifact output.

use std::fs;
use std::path::{Path, PathBuf};

use raintensity::tsv::fmt_f64;
use raintensity::Sample;

use crate::error::{CliError, CliResult};

/// Reads one positive value per line. `#` starts a comment; a non-numeric
/// first line is taken as a header.
pub fn ingest_csv(path: &Path) -> CliResult<Sample> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_values(&text, path)
}

pub fn parse_values(text: &str, path: &Path) -> CliResult<Sample> {
    let bad = |line: usize, reason: String| CliError::Input {
        path: path.to_owned(),
        line,
        reason,
    };
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw
            .split('#')
            .next()
            .unwrap_or("")
            .trim()
            .trim_end_matches(',');
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if !v.is_finite() => {
                return Err(bad(i + 1, format!("non-finite value `{line}`")))
            }
            Ok(v) if v <= 0.0 => {
                return Err(bad(i + 1, format!("value {v} is not positive")));
            }
            Ok(v) => values.push(v),
            Err(_) if i == 0 => {}
            Err(_) => return Err(bad(i + 1, format!("`{line}` is not a number"))),
        }
    }
    if values.is_empty() {
        return Err(bad(text.lines().count().max(1), "no values found".into()));
    }
    let label = path
        .file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    Ok(Sample::new(values, label)?)
}

/// A file produced by a subcommand. Without an output directory only the
/// primary artifact is printed.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: &'static str,
    pub content: String,
    pub primary: bool,
}

impl Artifact {
    pub fn primary(name: &'static str, content: String) -> Self {
        Self {
            name,
            content,
            primary: true,
        }
    }

    pub fn secondary(name: &'static str, content: String) -> Self {
        Self {
            name,
            content,
            primary: false,
        }
    }
}

pub fn emit(artifacts: &[Artifact], dir: Option<&PathBuf>) -> CliResult<String> {
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| CliError::Io { path, source }
    };
    let Some(dir) = dir else {
        return Ok(artifacts
            .iter()
            .filter(|a| a.primary)
            .map(|a| a.content.as_str())
            .collect());
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    for a in artifacts {
        let path = dir.join(a.name);
        fs::write(&path, &a.content).map_err(io(&path))?;
    }
    Ok(String::new())
}

/// Two-column TSV with a `#` header line.
pub fn xy_tsv(header: &str, xs: &[f64], ys: &[f64]) -> String {
    let mut out = format!("# {header}\n");
    for (x, y) in xs.iter().zip(ys) {
        out.push_str(&format!("{}\t{}\n", fmt_f64(*x), fmt_f64(*y)));
    }
    out
}

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
