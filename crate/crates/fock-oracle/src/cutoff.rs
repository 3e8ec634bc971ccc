use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::operator::FockOperator;

pub const DEFAULT_LADDER: [usize; 3] = [40, 60, 80];
pub const TAIL_TARGET: f64 = 1e-8;

/// Builds a state at increasing cutoffs until its tail is at most
/// `tail_target`. A builder refusing a cutoff for truncation moves on to the
/// next one.
pub fn with_cutoff_ladder(
    ladder: &[usize],
    tail_target: f64,
    mut build: impl FnMut(usize) -> Result<FockOperator>,
) -> Result<FockOperator> {
    let mut last = FockError::EscalationExhausted {
        tail: f64::NAN,
        cutoff: 0,
    };
    for &d in ladder {
        match build(d) {
            Ok(rho) if rho.tail() <= tail_target => return Ok(rho),
            Ok(rho) => {
                last = FockError::EscalationExhausted {
                    tail: rho.tail(),
                    cutoff: d,
                }
            }
            Err(FockError::Truncation { deficit, cutoff }) => {
                last = FockError::EscalationExhausted {
                    tail: deficit,
                    cutoff,
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Summary of one oracle evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub state_id: String,
    #[serde(rename = "D")]
    pub cutoff: usize,
    pub tail: f64,
    #[serde(rename = "trace_R")]
    pub trace_r: f64,
    #[serde(rename = "trace_norm_R")]
    pub trace_norm_r: f64,
    pub schmidt_sum: f64,
}

impl OracleRecord {
    pub fn evaluate(state_id: impl Into<String>, rho: &FockOperator) -> Self {
        Self {
            state_id: state_id.into(),
            cutoff: rho.cutoff(),
            tail: rho.tail(),
            trace_r: rho.trace_r(),
            trace_norm_r: rho.realign().trace_norm(),
            schmidt_sum: rho.schmidt_spectrum().sum,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::tmsv;

    #[test]
    fn ladder_escalates_until_tail_small() {
        let mut tried = Vec::new();
        let rho = with_cutoff_ladder(&[10, 15, 40], 1e-8, |d| {
            tried.push(d);
            tmsv(0.6, d)
        })
        .unwrap();
        assert_eq!(tried, [10, 15, 40]);
        assert_eq!(rho.cutoff(), 40);
        let err = with_cutoff_ladder(&[10], 1e-8, |d| tmsv(0.6, d)).unwrap_err();
        assert!(matches!(
            err,
            FockError::EscalationExhausted { cutoff: 10, .. }
        ));
    }

    #[test]
    fn record_serializes_with_short_keys() {
        let rec = OracleRecord::evaluate("tmsv", &tmsv(0.5, 30).unwrap());
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["D"], 30);
        assert!((rec.trace_r - 3.0).abs() < 1e-8);
        assert!((rec.trace_norm_r - rec.schmidt_sum).abs() < 1e-10);
    }
}
