//! Text encodings: complex literals, matrix JSON and output sinks.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};
use crate::toda::TodaPoint;
use crate::ChevalleyData;

/// Shortest round-trip digits; exponent form outside `[1e-4, 1e16)`.
fn format_real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `re+imj`.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{sign}{}j", format_real(z.re), format_real(z.im.abs()))
}

/// Accepts `1.5`, `2j`, `-1e-3+2.5j`, `0.3-0.2j`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidConfig(format!("cannot parse complex number {s:?}"));
    let t = s.trim();
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return t.parse::<f64>().map(|re| c64(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not an exponent sign or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(c64(re, im))
}

/// A complex number in JSON: a bare real, an `[re, im]` pair or an `re+imj` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ComplexLit {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl ComplexLit {
    pub fn value(&self) -> Result<Complex64> {
        match self {
            ComplexLit::Real(x) => Ok(c64(*x, 0.0)),
            ComplexLit::Pair([re, im]) => Ok(c64(*re, *im)),
            ComplexLit::Text(s) => parse_complex(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointLit {
    pub diag: Vec<ComplexLit>,
    pub roots: Vec<ComplexLit>,
}

impl PointLit {
    pub fn resolve(&self, chev: &ChevalleyData) -> Result<TodaPoint> {
        let diag = self.diag.iter().map(ComplexLit::value).collect::<Result<_>>()?;
        let roots = self.roots.iter().map(ComplexLit::value).collect::<Result<_>>()?;
        TodaPoint::new(chev, diag, roots)
    }
}

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn vector_json(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// A group element, defined up to a scalar.
#[derive(Debug, Serialize)]
pub struct GroupJson {
    pub mod_scalar: bool,
    pub entries: JsonMatrix,
}

impl GroupJson {
    pub fn new(m: &CMatrix) -> Self {
        Self {
            mod_scalar: true,
            entries: matrix_json(m),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PointJson {
    pub diag: Vec<[f64; 2]>,
    pub roots: Vec<[f64; 2]>,
}

impl From<&TodaPoint> for PointJson {
    fn from(p: &TodaPoint) -> Self {
        Self {
            diag: vector_json(&p.diag),
            roots: vector_json(&p.roots),
        }
    }
}

/// Stdout unless a path is given.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    match out {
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Error::InvalidConfig(format!("cannot open {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| io_error(e.into()))?;
    writeln!(w, "{text}").and_then(|_| w.flush()).map_err(io_error)
}

pub fn io_error(e: io::Error) -> Error {
    Error::Output {
        kind: e.kind(),
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_text_roundtrip() {
        for z in [c64(0.3, -0.2), c64(-1e-3, 2.5), c64(1.0, 0.0), c64(0.0, -0.0), c64(2.2e-16, -1e20)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert_eq!(parse_complex("2j").unwrap(), c64(0.0, 2.0));
        assert_eq!(parse_complex("-j").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e+2j").unwrap(), c64(1e-3, 1e2));
        assert_eq!(parse_complex(" 4 ").unwrap(), c64(4.0, 0.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+").is_err());
    }

    #[test]
    fn literals() {
        let lits: Vec<ComplexLit> = serde_json::from_str(r#"[1.5, [0, 2], "1-1j"]"#).unwrap();
        let v: Vec<_> = lits.iter().map(|l| l.value().unwrap()).collect();
        assert_eq!(v, vec![c64(1.5, 0.0), c64(0.0, 2.0), c64(1.0, -1.0)]);
    }
}
