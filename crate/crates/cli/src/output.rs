//! Byte-stable serialization.
//!
//! All floats go through [`fmt_float`], so CSV cells, JSON numbers and
//! checksums agree on the exact digits.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::CliError;

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// A float as a JSON number with [`fmt_float`] digits.
pub fn raw_float(x: f64) -> Box<RawValue> {
    assert!(x.is_finite(), "non-finite value {x} cannot be serialized");
    RawValue::from_string(fmt_float(x)).expect("scientific notation is valid JSON")
}

pub fn raw_floats(xs: &[f64]) -> Vec<Box<RawValue>> {
    xs.iter().map(|&x| raw_float(x)).collect()
}

/// SHA-256 over the formatted values, one per line.
pub fn checksum(xs: &[f64]) -> String {
    let mut h = Sha256::new();
    for &x in xs {
        h.update(fmt_float(x).as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Serializes a slice of pairs as a JSON object, keeping the slice order.
pub struct Ordered<'a, V>(pub &'a [(String, V)]);

impl<V: Serialize> Serialize for Ordered<'_, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// Integrates to one.
    Density,
    /// Non-negative piece of a density, weighted by a polarization entry.
    Partial,
    /// Signed correction term.
    Signed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
    pub kind: SeriesKind,
}

impl Series {
    pub fn new(name: &str, kind: SeriesKind, values: Vec<f64>) -> Self {
        Series {
            name: name.into(),
            values,
            kind,
        }
    }

    pub fn density(name: &str, values: Vec<f64>) -> Self {
        Self::new(name, SeriesKind::Density, values)
    }

    pub fn partial(name: &str, values: Vec<f64>) -> Self {
        Self::new(name, SeriesKind::Partial, values)
    }

    pub fn signed(name: &str, values: Vec<f64>) -> Self {
        Self::new(name, SeriesKind::Signed, values)
    }
}

/// Columns sampled on the phase grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub phi: Vec<f64>,
    pub series: Vec<Series>,
}

impl SeriesTable {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.values.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi");
        for s in &self.series {
            out.push(',');
            out.push_str(&s.name);
        }
        out.push('\n');
        for (j, &phi) in self.phi.iter().enumerate() {
            out.push_str(&fmt_float(phi));
            for s in &self.series {
                out.push(',');
                out.push_str(&fmt_float(s.values[j]));
            }
            out.push('\n');
        }
        out
    }

    /// `{config, series, partial_series, signed_series, checksums}`; `config` is echoed as given.
    pub fn to_json(&self, config: &serde_json::Value) -> String {
        let mut series = vec![("phi".to_string(), raw_floats(&self.phi))];
        let mut sums = vec![("phi".to_string(), checksum(&self.phi))];
        for s in &self.series {
            series.push((s.name.clone(), raw_floats(&s.values)));
            sums.push((s.name.clone(), checksum(&s.values)));
        }
        let names_of = |kind| -> Vec<&str> {
            self.series
                .iter()
                .filter(|s| s.kind == kind)
                .map(|s| s.name.as_str())
                .collect()
        };
        #[derive(Serialize)]
        struct Doc<'a> {
            config: &'a serde_json::Value,
            series: Ordered<'a, Vec<Box<RawValue>>>,
            partial_series: Vec<&'a str>,
            signed_series: Vec<&'a str>,
            checksums: Checksums<'a>,
        }
        #[derive(Serialize)]
        struct Checksums<'a> {
            sha256: Ordered<'a, String>,
        }
        to_pretty(&Doc {
            config,
            series: Ordered(&series),
            partial_series: names_of(SeriesKind::Partial),
            signed_series: names_of(SeriesKind::Signed),
            checksums: Checksums {
                sha256: Ordered(&sums),
            },
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization");
    s.push('\n');
    s
}

/// Single-record CSV: a header line and one value line.
pub fn record_csv(fields: &[(String, String)]) -> String {
    let mut out = String::new();
    let names: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
    let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
    let _ = writeln!(out, "{}", names.join(","));
    let _ = writeln!(out, "{}", values.join(","));
    out
}

/// Writes to `path`, or to stdout when `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(contents.as_bytes()).and_then(|_| out.flush()) {
                // a closed pipe (`| head`) is the reader's choice, not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
            }
        }
    }
}
