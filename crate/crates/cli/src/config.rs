//! Run configuration: a flat, ordered `key = value` map built from an optional
//! config file and command-line flags (flags win). It is echoed into every
//! output as `#` comment lines and can be read back from such a header.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use nvscatter::Error;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub entries: BTreeMap<String, String>,
}

impl RunConfig {
    /// Parses `key = value` lines. Leading `#` markers are stripped so a
    /// header copied out of an output file reads back as a config.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_start_matches('#').trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                // Non-config comment lines (e.g. the version line) are skipped.
                if raw.trim_start().starts_with('#') {
                    continue;
                }
                return Err(Error::Parse(format!("config line {}: expected key = value, got {raw:?}", n + 1)));
            };
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(RunConfig { entries })
    }

    /// Reads a config file, or the `#` header of a previous output file.
    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        let header: String = if text.lines().next().is_some_and(|l| l.starts_with('#')) {
            text.lines().take_while(|l| l.starts_with('#')).map(|l| format!("{l}\n")).collect()
        } else {
            text
        };
        Self::parse(&header)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn set_default(&mut self, key: &str, value: &str) {
        self.entries.entry(key.to_string()).or_insert_with(|| value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, Error> {
        self.get(key).ok_or_else(|| Error::Parameter(format!("missing required setting {key:?}")))
    }

    /// `#`-prefixed header: a version line followed by the settings.
    pub fn header(&self) -> String {
        let mut out = format!("# nv-scatter {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }

    pub fn grid(&self) -> Result<(f64, usize), Error> {
        let raw = self.require("grid")?;
        let (l, n) = raw
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("grid must be L,N, got {raw:?}")))?;
        Ok((parse_f64("grid L", l)?, n.trim().parse().map_err(|_| Error::Parse(format!("grid N must be an integer, got {n:?}")))?))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, Error> {
        self.get(key).map_or(Ok(default), |s| parse_f64(key, s))
    }

    pub fn out_path(&self) -> Option<PathBuf> {
        let p = PathBuf::from(self.get("out")?);
        if p.is_relative() {
            if let Some(dir) = std::env::var_os("NV_SCATTER_OUT") {
                return Some(PathBuf::from(dir).join(p));
            }
        }
        Some(p)
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

pub fn parse_f64(what: &str, s: &str) -> Result<f64, Error> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("{what}: not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{what}: must be finite, got {s:?}")));
    }
    Ok(v)
}

/// `re,im` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64, Error> {
    match s.split_once(',') {
        Some((a, b)) => Ok(Complex64::new(parse_f64("real part", a)?, parse_f64("imaginary part", b)?)),
        None => Ok(Complex64::new(parse_f64("real value", s)?, 0.0)),
    }
}

/// `;`-separated complex values.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, Error> {
    let v: Vec<Complex64> = s.split(';').filter(|p| !p.trim().is_empty()).map(parse_complex).collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    Ok(v)
}

/// `x0,x1,y0,y1,step`: rows of constant `Im λ`, `Re λ` fastest.
pub fn parse_rect(s: &str) -> Result<Vec<Complex64>, Error> {
    let parts: Vec<f64> = s.split(',').map(|p| parse_f64("lambda-rect", p)).collect::<Result<_, _>>()?;
    let [x0, x1, y0, y1, step] = parts[..] else {
        return Err(Error::Parse(format!("lambda-rect must be x0,x1,y0,y1,step, got {s:?}")));
    };
    if !(step > 0.0 && x1 >= x0 && y1 >= y0) {
        return Err(Error::Parameter(format!("lambda-rect needs x0 ≤ x1, y0 ≤ y1 and step > 0, got {s:?}")));
    }
    let nx = ((x1 - x0) / step + 1e-9).floor() as usize + 1;
    let ny = ((y1 - y0) / step + 1e-9).floor() as usize + 1;
    let mut out = Vec::with_capacity(nx * ny);
    for k in 0..ny {
        for j in 0..nx {
            out.push(Complex64::new(x0 + j as f64 * step, y0 + k as f64 * step));
        }
    }
    Ok(out)
}
