//! Matrix and polynomial file readers.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde_json::Value;
use tropspec::assignment::CirculationMatrix;
use tropspec::{Complex64, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    JsonDense,
    CsvDense,
    Coordinate,
}

pub fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn detect(path: &Path, text: &str) -> MatrixFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => MatrixFormat::JsonDense,
        Some("csv") => MatrixFormat::CsvDense,
        Some("coo" | "mtx" | "triplets") => MatrixFormat::Coordinate,
        _ if text.trim_start().starts_with('[') => MatrixFormat::JsonDense,
        _ if text.contains(',') => MatrixFormat::CsvDense,
        _ => MatrixFormat::Coordinate,
    }
}

/// Parses `3`, `-2.5`, `1+2i`, `1e-3-4i`, `-i` and friends.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty entry");
    }
    let bad = || anyhow!("cannot parse {s:?} as a complex number");
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(p) => {
            let re = body[..p].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[p..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn json_complex(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(x) => Ok(Complex64::new(x.as_f64().ok_or_else(|| anyhow!("bad number {x}"))?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => {
            let re = parts[0].as_f64().ok_or_else(|| anyhow!("bad real part {}", parts[0]))?;
            let im = parts[1].as_f64().ok_or_else(|| anyhow!("bad imaginary part {}", parts[1]))?;
            Ok(Complex64::new(re, im))
        }
        Value::String(s) => parse_complex(s),
        other => bail!("expected a number, [re, im] or a string, got {other}"),
    }
}

fn square(rows: Vec<Vec<Complex64>>) -> Result<ComplexMatrix> {
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        bail!("matrix is not square: row {} has {} entries, expected {n}", i + 1, r.len());
    }
    Ok(ComplexMatrix::from_rows(rows)?)
}

fn parse_json_dense(text: &str) -> Result<ComplexMatrix> {
    let v: Value = serde_json::from_str(text).context("invalid JSON")?;
    let Value::Array(rows) = v else { bail!("expected a JSON array of rows") };
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let Value::Array(entries) = r else { bail!("row {} is not an array", i + 1) };
            entries
                .iter()
                .enumerate()
                .map(|(j, e)| json_complex(e).with_context(|| format!("entry ({}, {})", i + 1, j + 1)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    square(rows)
}

fn csv_rows(text: &str) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| Ok(r?.iter().map(str::to_string).collect()))
        .filter(|r: &Result<Vec<String>>| r.as_ref().map_or(true, |v| !(v.len() == 1 && v[0].is_empty())))
        .collect()
}

fn parse_csv_dense(text: &str) -> Result<ComplexMatrix> {
    let rows = csv_rows(text)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| parse_complex(e).with_context(|| format!("entry ({}, {})", i + 1, j + 1)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    square(rows)
}

/// `row col re [im]` lines, 1-indexed; an optional first line holding a
/// single integer fixes the dimension, otherwise the largest index does.
fn parse_coordinate(text: &str) -> Result<ComplexMatrix> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && !t[0].starts_with(['#', '%']))
        .collect();
    let (declared, body) = match lines.first() {
        Some((_, t)) if t.len() <= 2 => {
            let dims = t
                .iter()
                .map(|s| s.parse::<usize>().with_context(|| format!("bad dimension {s:?}")))
                .collect::<Result<Vec<_>>>()?;
            if dims.iter().any(|&d| d != dims[0]) {
                bail!("matrix must be square, header says {}x{}", dims[0], dims[1]);
            }
            (Some(dims[0]), &lines[1..])
        }
        _ => (None, &lines[..]),
    };
    let mut triplets = Vec::with_capacity(body.len());
    let mut seen = HashSet::new();
    for (line, t) in body {
        if !(3..=4).contains(&t.len()) {
            bail!("line {line}: expected `row col re [im]`");
        }
        let idx = |s: &str| -> Result<usize> {
            let v: usize = s.parse().with_context(|| format!("line {line}: bad index {s:?}"))?;
            if v == 0 {
                bail!("line {line}: indices are 1-based");
            }
            Ok(v)
        };
        let (i, j) = (idx(t[0])?, idx(t[1])?);
        let re: f64 = t[2].parse().with_context(|| format!("line {line}: bad value {:?}", t[2]))?;
        let im: f64 = match t.get(3) {
            Some(s) => s.parse().with_context(|| format!("line {line}: bad value {s:?}"))?,
            None => 0.0,
        };
        if !seen.insert((i, j)) {
            bail!("line {line}: duplicate coordinate ({i}, {j})");
        }
        triplets.push((i, j, Complex64::new(re, im)));
    }
    let largest = triplets.iter().map(|&(i, j, _)| i.max(j)).max().unwrap_or(0);
    let n = declared.unwrap_or(largest);
    if largest > n {
        bail!("index {largest} exceeds the declared dimension {n}");
    }
    let mut a = ComplexMatrix::zeros(n);
    for (i, j, z) in triplets {
        a[(i - 1, j - 1)] = z;
    }
    Ok(ComplexMatrix::from_vec(n, a.as_slice().to_vec())?)
}

pub fn read_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<ComplexMatrix> {
    let text = read_source(path)?;
    let format = format.unwrap_or_else(|| detect(path, &text));
    match format {
        MatrixFormat::JsonDense => parse_json_dense(&text),
        MatrixFormat::CsvDense => parse_csv_dense(&text),
        MatrixFormat::Coordinate => parse_coordinate(&text),
    }
    .with_context(|| format!("parsing {}", path.display()))
}

fn poly_tokens(text: &str) -> Result<Vec<Value>> {
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(text).context("invalid JSON")?;
        let Value::Array(items) = v else { bail!("expected a JSON array of coefficients") };
        return Ok(items);
    }
    Ok(text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| Value::String(t.to_string()))
        .collect())
}

/// Complex coefficients `a_0 .. a_n`, lowest degree first.
pub fn read_polynomial(path: &Path) -> Result<Vec<Complex64>> {
    let text = read_source(path)?;
    let coeffs = poly_tokens(&text)?
        .iter()
        .enumerate()
        .map(|(i, v)| json_complex(v).with_context(|| format!("coefficient {i}")))
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("parsing {}", path.display()))?;
    if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        bail!("coefficients must be finite");
    }
    Ok(coeffs)
}

/// Max-plus coefficients, lowest degree first; `"-inf"` marks an absent term.
pub fn read_max_plus(path: &Path) -> Result<Vec<f64>> {
    let text = read_source(path)?;
    poly_tokens(&text)?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::Number(x) => x.as_f64().ok_or_else(|| anyhow!("coefficient {i}: bad number")),
            Value::String(s) => s.trim().parse::<f64>().map_err(|_| anyhow!("coefficient {i}: cannot parse {s:?}")),
            other => bail!("coefficient {i}: expected a number or \"-inf\", got {other}"),
        })
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("parsing {}", path.display()))
}

/// Nonnegative integer matrix as a JSON array of rows or CSV.
pub fn read_integer_matrix(path: &Path) -> Result<CirculationMatrix> {
    let text = read_source(path)?;
    let rows: Vec<Vec<u64>> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).context("expected a JSON array of rows of nonnegative integers")?
    } else {
        csv_rows(&text)?
            .iter()
            .map(|r| r.iter().map(|e| e.parse::<u64>().with_context(|| format!("bad entry {e:?}"))).collect())
            .collect::<Result<_>>()?
    };
    Ok(CirculationMatrix::from_rows(&rows)?)
}
