//! JSON and text formats shared by the library and the command-line tool.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::criteria::{CriterionId, CriterionResult};
use crate::error::{Error, Result};
use crate::gaussian::{BipartiteSplit, CovarianceMatrix};
use crate::scalar::{to_f64, Real};

/// On-disk form of a covariance matrix: `entries` is row-major with
/// `(2·n_modes)²` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceJson {
    pub n_modes: usize,
    pub entries: Vec<f64>,
}

impl CovarianceJson {
    /// Builds the matrix, averaging it with its transpose. The asymmetry that
    /// was removed is kept in [`CovarianceMatrix::symmetry_defect`].
    pub fn to_covariance(&self) -> Result<CovarianceMatrix> {
        if self.n_modes == 0 {
            return Err(Error::Format("n_modes must be positive".into()));
        }
        CovarianceMatrix::from_row_slice(self.n_modes, &self.entries)
    }
}

impl<T: Real> From<&CovarianceMatrix<T>> for CovarianceJson {
    fn from(gamma: &CovarianceMatrix<T>) -> Self {
        Self {
            n_modes: gamma.n_modes(),
            entries: gamma.to_row_major_f64(),
        }
    }
}

pub fn covariance_from_json(text: &str) -> Result<CovarianceMatrix> {
    let parsed: CovarianceJson =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    parsed.to_covariance()
}

pub fn covariance_to_json<T: Real>(gamma: &CovarianceMatrix<T>) -> String {
    serde_json::to_string(&CovarianceJson::from(gamma)).expect("plain numeric struct serializes")
}

/// Formats with 12 significant digits; scientific notation below `1e-3` and
/// from `1e12` upwards.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let ax = x.abs();
    if !(1e-3..1e12).contains(&ax) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - ax.log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Short SHA-256 fingerprint of a covariance matrix and, optionally, a split.
pub fn inputs_hash<T: Real>(gamma: &CovarianceMatrix<T>, split: Option<&BipartiteSplit>) -> String {
    let mut h = Sha256::new();
    h.update((gamma.n_modes() as u64).to_le_bytes());
    for v in gamma.to_row_major_f64() {
        h.update(v.to_le_bytes());
    }
    if let Some(s) = split {
        for &m in s.modes_a() {
            h.update((m as u64).to_le_bytes());
        }
        h.update(u64::MAX.to_le_bytes());
        for &m in s.modes_b() {
            h.update((m as u64).to_le_bytes());
        }
    }
    hex::encode(&h.finalize()[..8])
}

/// A finite number rounded to 12 significant digits, or the string `"inf"`
/// for a diverging trace norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum JsonValue {
    Number(f64),
    Text(&'static str),
}

impl JsonValue {
    fn new(x: f64) -> Self {
        if x.is_finite() {
            JsonValue::Number(fmt_sig12(x).parse().expect("formatted float parses"))
        } else if x > 0.0 {
            JsonValue::Text("inf")
        } else if x < 0.0 {
            JsonValue::Text("-inf")
        } else {
            JsonValue::Text("nan")
        }
    }
}

/// One line of criterion output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub criterion: CriterionId,
    pub value: JsonValue,
    pub threshold: f64,
    pub detected: bool,
    pub inputs_hash: String,
}

impl VerdictRecord {
    pub fn new<T: Real>(result: &CriterionResult<T>, inputs_hash: &str) -> Self {
        Self {
            criterion: result.criterion,
            value: JsonValue::new(to_f64(result.value)),
            threshold: to_f64(result.threshold),
            detected: result.detected,
            inputs_hash: inputs_hash.to_string(),
        }
    }
}
