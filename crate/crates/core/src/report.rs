//! Machine-readable artifacts shared by the CLI and the C interface.

use serde::{Deserialize, Serialize};

use crate::closed_form::SpectrumMulti;
use crate::error::{Error, Result};
use crate::tree_groups::GroupPreset;

/// Decimal string with 15 significant digits; `-0` prints as `0`. Very small
/// or very large magnitudes use exponent notation.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if rounded.abs() < 1e-4 || rounded.abs() >= 1e15 {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub value: String,
    pub mult: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Numeric,
}

/// `{group, level, dim, eigen: [{value, mult}], method}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub group: String,
    pub level: usize,
    pub dim: u64,
    pub eigen: Vec<EigenEntry>,
    pub method: Method,
}

impl SpectrumReport {
    pub fn new(group: GroupPreset, level: usize, spectrum: &SpectrumMulti, method: Method) -> Self {
        Self {
            group: group.tag().to_string(),
            level,
            dim: spectrum.dim,
            eigen: spectrum
                .pairs
                .iter()
                .map(|p| EigenEntry {
                    value: fmt15(p.value),
                    mult: p.mult,
                })
                .collect(),
            method,
        }
    }

    pub fn to_spectrum(&self) -> Result<SpectrumMulti> {
        let pairs = self
            .eigen
            .iter()
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .map(|v| (v, e.mult))
                    .map_err(|_| Error::InvalidInput(format!("bad eigenvalue `{}`", e.value)))
            })
            .collect::<Result<Vec<_>>>()?;
        let s = SpectrumMulti::from_pairs_with_tolerance(pairs, 0.0);
        if s.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: s.dim as usize,
                right: self.dim as usize,
            });
        }
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,mult\n");
        for e in &self.eigen {
            out.push_str(&format!("{},{}\n", e.value, e.mult));
        }
        out
    }
}

/// Closed form against numeric values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub group: String,
    pub level: usize,
    pub dim: usize,
    pub max_deviation: String,
    pub tolerance: String,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::spectrum_g;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(5f64.sqrt()), "2.23606797749979");
        assert_eq!(fmt15(-0.0), "0");
        assert_eq!(fmt15(4.0), "4");
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(2.6645352591003757e-15), "2.66453525910038e-15");
        assert_eq!(fmt15(1e-9), "1e-9");
    }

    #[test]
    fn json_round_trip() {
        let r = SpectrumReport::new(GroupPreset::G, 3, &spectrum_g(3), Method::ClosedForm);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"method\":\"closed-form\""));
        let back: SpectrumReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let s = back.to_spectrum().unwrap();
        assert_eq!(s.dim, 8);
        assert!(s
            .pairs
            .iter()
            .zip(&spectrum_g(3).pairs)
            .all(|(a, b)| (a.value - b.value).abs() < 1e-13));
    }
}
