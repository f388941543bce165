//! Report rows shared by the verification suites and the CLI.

use serde::{Deserialize, Serialize};

/// Exact or floating-point value in a report, kept apart so downstream
/// tooling can diff exact results without parsing floats.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", content = "value")]
pub enum ReportValue {
    #[serde(rename = "rational")]
    Rational(String),
    #[serde(rename = "float")]
    Float(f64),
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified identity instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Which mathematical identity family this check belongs to.
    pub paper_ref: String,
    pub params: String,
    pub residual: ReportValue,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Floating-point residual check against a tolerance.
    pub fn residual(id: &str, family: &str, params: &str, residual: f64, tol: f64) -> Self {
        Check {
            id: id.to_string(),
            paper_ref: family.to_string(),
            params: params.to_string(),
            residual: ReportValue::Float(residual),
            tolerance: tol,
            status: if residual.is_finite() && residual <= tol {
                Status::Pass
            } else {
                Status::Fail
            },
            note: None,
        }
    }

    /// Exact check: passes iff `failures == 0`; the residual column records
    /// the failure count as an exact value.
    pub fn exact(id: &str, family: &str, params: &str, failures: usize) -> Self {
        Check {
            id: id.to_string(),
            paper_ref: family.to_string(),
            params: params.to_string(),
            residual: ReportValue::Rational(failures.to_string()),
            tolerance: 0.0,
            status: if failures == 0 { Status::Pass } else { Status::Fail },
            note: None,
        }
    }

    pub fn skipped(id: &str, family: &str, params: &str, reason: &str) -> Self {
        Check {
            id: id.to_string(),
            paper_ref: family.to_string(),
            params: params.to_string(),
            residual: ReportValue::Float(f64::NAN),
            tolerance: 0.0,
            status: Status::Skipped,
            note: Some(reason.to_string()),
        }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// A check is expected to FAIL in negative-control runs; this flips the
/// bookkeeping so a loud failure is the passing outcome.
pub fn expect_failure(mut check: Check, floor: f64) -> Check {
    let loud = match check.residual {
        ReportValue::Float(r) => r.is_nan() || r > floor,
        ReportValue::Rational(_) => check.status == Status::Fail,
    };
    check.status = if loud { Status::Pass } else { Status::Fail };
    check.tolerance = floor;
    check.id = format!("control/{}", check.id);
    check
}
