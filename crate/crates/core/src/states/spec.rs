//! JSON state-specification documents.
//!
//! ```json
//! {
//!   "cutoff": 40,
//!   "grid_points": 2048,
//!   "omega": 1.0,
//!   "field": { "type": "coherent", "alpha_re": 1.0, "alpha_im": 0.0 },
//!   "polarization": { "type": "horizontal" }
//! }
//! ```
//!
//! Field types: `fock {n}`, `coherent {alpha_re, alpha_im}`,
//! `thermal {mean_photon_number}`, `custom_amplitudes {amplitudes: {re, im}}`
//! and `custom_density {matrix: {re, im}}`. Polarization types: `circular`,
//! `anticircular`, `horizontal`, `vertical`, `unpolarized` and
//! `custom {matrix: {re: [4], im: [4]}}` with entries in row-major
//! `(σ₊, σ₋)` order. Unknown keys are rejected. `im` parts may be omitted.

use serde_json::{Map, Value};

use super::{
    coherent_state, custom_amplitudes, custom_density, fock_state, polarization_state,
    thermal_state, FieldState, PolarizationKind, PolarizationState,
};
use crate::{tol, CMatrix, Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    Fock { n: usize },
    Coherent { alpha: C64 },
    Thermal { mean_photon_number: f64 },
    CustomAmplitudes { amplitudes: Vec<C64> },
    CustomDensity { matrix: CMatrix },
}

impl FieldSpec {
    pub fn build(&self, cutoff: usize) -> Result<FieldState> {
        match self {
            FieldSpec::Fock { n } => fock_state(*n, cutoff),
            FieldSpec::Coherent { alpha } => coherent_state(*alpha, cutoff),
            FieldSpec::Thermal { mean_photon_number } => thermal_state(*mean_photon_number, cutoff),
            FieldSpec::CustomAmplitudes { amplitudes } => custom_amplitudes(amplitudes, cutoff),
            FieldSpec::CustomDensity { matrix } => custom_density(matrix, cutoff),
        }
    }
}

/// A schema-checked but not yet instantiated state document.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub cutoff: Option<usize>,
    pub grid_points: Option<usize>,
    pub omega: Option<f64>,
    pub field: FieldSpec,
    pub polarization: PolarizationKind,
}

/// Run-level settings that take precedence over the document.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpecOverrides {
    pub cutoff: Option<usize>,
    pub grid_points: Option<usize>,
    pub omega: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedSpec {
    pub field: FieldState,
    pub polarization: PolarizationState,
    pub cutoff: usize,
    pub grid_points: usize,
    pub omega: f64,
}

/// Validates `doc` and instantiates its states with defaults applied.
pub fn parse_state_spec(doc: &Value) -> Result<ParsedSpec> {
    StateSpec::from_json(doc)?.build(SpecOverrides::default())
}

impl StateSpec {
    pub fn from_json(doc: &Value) -> Result<Self> {
        let root = object(doc, "$")?;
        reject_unknown(
            root,
            "$",
            &["cutoff", "grid_points", "omega", "field", "polarization"],
        )?;
        let cutoff = root.get("cutoff").map(|v| uint(v, "cutoff")).transpose()?;
        let grid_points = root
            .get("grid_points")
            .map(|v| uint(v, "grid_points"))
            .transpose()?;
        let omega = root.get("omega").map(|v| number(v, "omega")).transpose()?;
        let field = parse_field(root.get("field").ok_or_else(|| missing("field"))?)?;
        let polarization = parse_polarization(
            root.get("polarization")
                .ok_or_else(|| missing("polarization"))?,
        )?;
        Ok(StateSpec {
            cutoff,
            grid_points,
            omega,
            field,
            polarization,
        })
    }

    pub fn build(&self, overrides: SpecOverrides) -> Result<ParsedSpec> {
        let cutoff = overrides
            .cutoff
            .or(self.cutoff)
            .unwrap_or(tol::DEFAULT_CUTOFF);
        let grid_points = overrides
            .grid_points
            .or(self.grid_points)
            .unwrap_or(tol::DEFAULT_GRID_POINTS);
        let omega = overrides.omega.or(self.omega).unwrap_or(1.0);
        if grid_points < 2 * (cutoff + 1) {
            return Err(Error::spec(
                "grid_points",
                format!(
                    "{grid_points} points cannot resolve cutoff {cutoff}; need ≥ {}",
                    2 * (cutoff + 1)
                ),
            ));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::spec(
                "omega",
                format!("must be finite and > 0, got {omega}"),
            ));
        }
        let field = self
            .field
            .build(cutoff)
            .map_err(|e| Error::spec(field_path(&self.field), e.to_string()))?;
        let polarization = polarization_state(&self.polarization)
            .map_err(|e| Error::spec("polarization.matrix", e.to_string()))?;
        Ok(ParsedSpec {
            field,
            polarization,
            cutoff,
            grid_points,
            omega,
        })
    }
}

fn field_path(spec: &FieldSpec) -> &'static str {
    match spec {
        FieldSpec::Fock { .. } => "field.n",
        FieldSpec::Coherent { .. } => "field.alpha_re",
        FieldSpec::Thermal { .. } => "field.mean_photon_number",
        FieldSpec::CustomAmplitudes { .. } => "field.amplitudes",
        FieldSpec::CustomDensity { .. } => "field.matrix",
    }
}

fn parse_field(v: &Value) -> Result<FieldSpec> {
    let obj = object(v, "field")?;
    let kind = string(
        obj.get("type").ok_or_else(|| missing("field.type"))?,
        "field.type",
    )?;
    match kind {
        "fock" => {
            reject_unknown(obj, "field", &["type", "n"])?;
            let n = uint(obj.get("n").ok_or_else(|| missing("field.n"))?, "field.n")?;
            Ok(FieldSpec::Fock { n })
        }
        "coherent" => {
            reject_unknown(obj, "field", &["type", "alpha_re", "alpha_im"])?;
            let re = obj
                .get("alpha_re")
                .map(|v| number(v, "field.alpha_re"))
                .transpose()?
                .unwrap_or(0.0);
            let im = obj
                .get("alpha_im")
                .map(|v| number(v, "field.alpha_im"))
                .transpose()?
                .unwrap_or(0.0);
            Ok(FieldSpec::Coherent {
                alpha: C64::new(re, im),
            })
        }
        "thermal" => {
            reject_unknown(obj, "field", &["type", "mean_photon_number"])?;
            let path = "field.mean_photon_number";
            let mean = number(obj.get("mean_photon_number").ok_or_else(|| missing(path))?, path)?;
            if mean < 0.0 {
                return Err(Error::spec(path, format!("must be ≥ 0, got {mean}")));
            }
            Ok(FieldSpec::Thermal {
                mean_photon_number: mean,
            })
        }
        "custom_amplitudes" => {
            reject_unknown(obj, "field", &["type", "amplitudes"])?;
            let path = "field.amplitudes";
            let amplitudes = complex_vector(obj.get("amplitudes").ok_or_else(|| missing(path))?, path)?;
            if amplitudes.is_empty() {
                return Err(Error::spec(path, "at least one amplitude required"));
            }
            Ok(FieldSpec::CustomAmplitudes { amplitudes })
        }
        "custom_density" => {
            reject_unknown(obj, "field", &["type", "matrix"])?;
            let path = "field.matrix";
            let matrix = complex_matrix(obj.get("matrix").ok_or_else(|| missing(path))?, path, None)?;
            Ok(FieldSpec::CustomDensity { matrix })
        }
        other => Err(Error::spec(
            "field.type",
            format!(
                "unknown field type {other:?}; expected one of fock, coherent, thermal, custom_amplitudes, custom_density"
            ),
        )),
    }
}

fn parse_polarization(v: &Value) -> Result<PolarizationKind> {
    let obj = object(v, "polarization")?;
    let path = "polarization.type";
    let kind = string(obj.get("type").ok_or_else(|| missing(path))?, path)?;
    let simple = |k: PolarizationKind| -> Result<PolarizationKind> {
        reject_unknown(obj, "polarization", &["type"])?;
        Ok(k)
    };
    match kind {
        "circular" => simple(PolarizationKind::Circular),
        "anticircular" => simple(PolarizationKind::Anticircular),
        "horizontal" => simple(PolarizationKind::Horizontal),
        "vertical" => simple(PolarizationKind::Vertical),
        "unpolarized" => simple(PolarizationKind::Unpolarized),
        "custom" => {
            reject_unknown(obj, "polarization", &["type", "matrix"])?;
            let mpath = "polarization.matrix";
            let flat = complex_vector(obj.get("matrix").ok_or_else(|| missing(mpath))?, mpath)?;
            if flat.len() != 4 {
                return Err(Error::spec(
                    mpath,
                    format!("expected 4 entries (row-major 2×2), found {}", flat.len()),
                ));
            }
            Ok(PolarizationKind::Custom(CMatrix::from_row_slice(2, 2, &flat)))
        }
        other => Err(Error::spec(
            path,
            format!(
                "unknown polarization type {other:?}; expected one of circular, anticircular, horizontal, vertical, unpolarized, custom"
            ),
        )),
    }
}

fn missing(path: &str) -> Error {
    Error::spec(path, "required key is missing")
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::spec(path, format!("expected an object, found {}", type_name(v))))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            let full = if path == "$" {
                key.clone()
            } else {
                format!("{path}.{key}")
            };
            return Err(Error::spec(full, "unknown key"));
        }
    }
    Ok(())
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::spec(path, format!("expected a string, found {}", type_name(v))))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| Error::spec(path, format!("expected a number, found {}", type_name(v))))?;
    if !x.is_finite() {
        return Err(Error::spec(path, "number is not finite"));
    }
    Ok(x)
}

fn uint(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::spec(path, format!("expected a non-negative integer, found {v}")))
}

fn real_list(v: &Value, path: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::spec(path, format!("expected an array, found {}", type_name(v))))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

/// `{re: [...], im: [...]}` with `im` optional.
fn complex_vector(v: &Value, path: &str) -> Result<Vec<C64>> {
    let obj = object(v, path)?;
    reject_unknown(obj, path, &["re", "im"])?;
    let re_path = format!("{path}.re");
    let re = real_list(obj.get("re").ok_or_else(|| missing(&re_path))?, &re_path)?;
    let im = match obj.get("im") {
        Some(v) => {
            let im_path = format!("{path}.im");
            let im = real_list(v, &im_path)?;
            if im.len() != re.len() {
                return Err(Error::spec(
                    im_path,
                    format!("length {} differs from re length {}", im.len(), re.len()),
                ));
            }
            im
        }
        None => vec![0.0; re.len()],
    };
    Ok(re
        .into_iter()
        .zip(im)
        .map(|(a, b)| C64::new(a, b))
        .collect())
}

fn real_rows(v: &Value, path: &str) -> Result<Vec<Vec<f64>>> {
    let rows = v.as_array().ok_or_else(|| {
        Error::spec(
            path,
            format!("expected an array of rows, found {}", type_name(v)),
        )
    })?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| real_list(r, &format!("{path}[{i}]")))
        .collect()
}

/// `{re: [[...]], im: [[...]]}`, square.
fn complex_matrix(v: &Value, path: &str, side: Option<usize>) -> Result<CMatrix> {
    let obj = object(v, path)?;
    reject_unknown(obj, path, &["re", "im"])?;
    let re_path = format!("{path}.re");
    let re = real_rows(obj.get("re").ok_or_else(|| missing(&re_path))?, &re_path)?;
    let n = re.len();
    if n == 0 {
        return Err(Error::spec(re_path, "matrix is empty"));
    }
    if let Some(side) = side {
        if n != side {
            return Err(Error::spec(
                re_path,
                format!("expected {side} rows, found {n}"),
            ));
        }
    }
    for (i, row) in re.iter().enumerate() {
        if row.len() != n {
            return Err(Error::spec(
                format!("{re_path}[{i}]"),
                format!("row has {} entries; matrix must be {n}×{n}", row.len()),
            ));
        }
    }
    let im = match obj.get("im") {
        Some(v) => {
            let im_path = format!("{path}.im");
            let im = real_rows(v, &im_path)?;
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(Error::spec(
                    im_path,
                    format!("must match the {n}×{n} shape of re"),
                ));
            }
            im
        }
        None => vec![vec![0.0; n]; n],
    };
    Ok(CMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im[i][j])))
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}
