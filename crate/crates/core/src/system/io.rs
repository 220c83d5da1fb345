//! JSON tensor files.
//!
//! ```json
//! {
//!   "D": 1,
//!   "speeds": ["1"],
//!   "C": [],
//!   "B": [{"I": 1, "J": 1, "K": 1, "a": 0, "b": 0, "value": "1"}]
//! }
//! ```
//!
//! Family indices are one-based, space-time slots `a, b, c` are `0..=3`.
//! Values are exact rational strings (`"3/2"`, `"-1"`, `"0.25"`); bare JSON
//! numbers are accepted and converted exactly from their binary value.
//! Omitted entries are zero.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::RatText;
use super::{SystemError, WaveSystem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(rename = "D")]
    pub d: usize,
    pub speeds: Vec<RatText>,
    #[serde(rename = "C", default)]
    pub c: Vec<CEntry>,
    #[serde(rename = "B", default)]
    pub b: Vec<BEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CEntry {
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: RatText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BEntry {
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub value: RatText,
}

fn check_family(tensor: &'static str, pos: usize, name: &str, v: usize, d: usize) -> Result<usize, SystemError> {
    if v == 0 || v > d {
        return Err(SystemError::IndexOutOfRange {
            tensor,
            detail: format!("record #{pos}: {name} = {v} not in 1..={d}"),
        });
    }
    Ok(v - 1)
}

fn check_slot(tensor: &'static str, pos: usize, name: &str, v: usize) -> Result<usize, SystemError> {
    if v > 3 {
        return Err(SystemError::IndexOutOfRange {
            tensor,
            detail: format!("record #{pos}: {name} = {v} not in 0..=3"),
        });
    }
    Ok(v)
}

impl SystemFile {
    pub fn into_system(self) -> Result<WaveSystem, SystemError> {
        if self.speeds.len() != self.d {
            return Err(SystemError::SpeedCount {
                expected: self.d,
                found: self.speeds.len(),
            });
        }
        let d = self.d;
        let mut sys = WaveSystem::linear(self.speeds.into_iter().map(|r| r.0).collect())?;
        let mut seen_c = std::collections::HashSet::new();
        for (pos, e) in self.c.into_iter().enumerate() {
            let idx = [
                check_family("C", pos, "I", e.i, d)?,
                check_family("C", pos, "J", e.j, d)?,
                check_family("C", pos, "K", e.k, d)?,
                check_slot("C", pos, "a", e.a)?,
                check_slot("C", pos, "b", e.b)?,
                check_slot("C", pos, "c", e.c)?,
            ];
            if !seen_c.insert(idx) {
                return Err(SystemError::Duplicate {
                    tensor: "C",
                    detail: format!("record #{pos}"),
                });
            }
            sys.set_c(idx, e.value.0);
        }
        let mut seen_b = std::collections::HashSet::new();
        for (pos, e) in self.b.into_iter().enumerate() {
            let idx = [
                check_family("B", pos, "I", e.i, d)?,
                check_family("B", pos, "J", e.j, d)?,
                check_family("B", pos, "K", e.k, d)?,
                check_slot("B", pos, "a", e.a)?,
                check_slot("B", pos, "b", e.b)?,
            ];
            if !seen_b.insert(idx) {
                return Err(SystemError::Duplicate {
                    tensor: "B",
                    detail: format!("record #{pos}"),
                });
            }
            sys.set_b(idx, e.value.0);
        }
        Ok(sys)
    }

    /// Sparse canonical form of a system.
    pub fn from_system(sys: &WaveSystem) -> Self {
        let d = sys.families();
        let mut c = Vec::new();
        let mut b = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for a in 0..4 {
                        for bb in 0..4 {
                            for cc in 0..4 {
                                let v = sys.c(i, j, k, a, bb, cc);
                                if !v.is_zero() {
                                    c.push(CEntry {
                                        i: i + 1,
                                        j: j + 1,
                                        k: k + 1,
                                        a,
                                        b: bb,
                                        c: cc,
                                        value: RatText(v.clone()),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for a in 0..4 {
                        for bb in 0..4 {
                            let v = sys.b(i, j, k, a, bb);
                            if !v.is_zero() {
                                b.push(BEntry {
                                    i: i + 1,
                                    j: j + 1,
                                    k: k + 1,
                                    a,
                                    b: bb,
                                    value: RatText(v.clone()),
                                });
                            }
                        }
                    }
                }
            }
        }
        Self {
            d,
            speeds: sys.speeds().iter().cloned().map(RatText).collect(),
            c,
            b,
        }
    }
}

/// Parses a tensor file; syntax errors carry the line and column.
pub fn parse_system(text: &str) -> Result<WaveSystem, SystemError> {
    let file: SystemFile = serde_json::from_str(text).map_err(|e| SystemError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_system()
}

pub fn system_to_json(sys: &WaveSystem) -> String {
    serde_json::to_string_pretty(&SystemFile::from_system(sys)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::rational::{frac, int};

    const Q0: &str = r#"{
        "D": 1,
        "speeds": ["1"],
        "B": [
            {"I": 1, "J": 1, "K": 1, "a": 0, "b": 0, "value": "1"},
            {"I": 1, "J": 1, "K": 1, "a": 1, "b": 1, "value": "-1"},
            {"I": 1, "J": 1, "K": 1, "a": 2, "b": 2, "value": "-1"},
            {"I": 1, "J": 1, "K": 1, "a": 3, "b": 3, "value": -1}
        ]
    }"#;

    #[test]
    fn parses_sparse_records() {
        let sys = parse_system(Q0).unwrap();
        assert_eq!(sys.families(), 1);
        assert_eq!(sys.b(0, 0, 0, 0, 0), &int(1));
        assert_eq!(sys.b(0, 0, 0, 3, 3), &int(-1));
        assert_eq!(sys.b(0, 0, 0, 0, 1), &int(0));
        assert!(sys.cubic_block(0, 0, 0).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn canonical_json_round_trips() {
        let mut sys = parse_system(Q0).unwrap();
        sys.set_c([0, 0, 0, 1, 2, 3], frac(-2, 3));
        let again = parse_system(&system_to_json(&sys)).unwrap();
        assert_eq!(again, sys);
    }

    #[test]
    fn truncated_file_reports_position() {
        let cut = &Q0[..Q0.len() / 2];
        match parse_system(cut).unwrap_err() {
            SystemError::Parse { line, .. } => assert!(line >= 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let bad_index = r#"{"D": 1, "speeds": ["1"], "B": [{"I": 2, "J": 1, "K": 1, "a": 0, "b": 0, "value": "1"}]}"#;
        assert!(matches!(
            parse_system(bad_index),
            Err(SystemError::IndexOutOfRange { .. })
        ));
        let bad_speed = r#"{"D": 1, "speeds": ["-1/2"]}"#;
        assert!(matches!(
            parse_system(bad_speed),
            Err(SystemError::NonPositiveSpeed { .. })
        ));
        let count = r#"{"D": 2, "speeds": ["1"]}"#;
        assert!(matches!(
            parse_system(count),
            Err(SystemError::SpeedCount { .. })
        ));
        let dup = r#"{"D": 1, "speeds": ["1"], "B": [
            {"I": 1, "J": 1, "K": 1, "a": 0, "b": 0, "value": "1"},
            {"I": 1, "J": 1, "K": 1, "a": 0, "b": 0, "value": "2"}]}"#;
        assert!(matches!(parse_system(dup), Err(SystemError::Duplicate { .. })));
        assert!(parse_system(r#"{"D": 1, "speeds": ["x"]}"#).is_err());
    }
}
