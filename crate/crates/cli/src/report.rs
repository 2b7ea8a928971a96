use serde::Serialize;

use laxalg::classify::Relation;
use laxalg::grading::Adjustment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, detail: detail.into(), counterexample: None }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Fail, detail: detail.into(), counterexample: Some(witness.into()) }
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Info, detail: detail.into(), counterexample: None }
    }

    pub fn inconclusive(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Inconclusive, detail: detail.into(), counterexample: None }
    }

    pub fn verdict(name: impl Into<String>, ok: bool, detail: impl Into<String>, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, witness())
        }
    }

    pub fn from_relation(prefix: &str, r: &Relation) -> Self {
        let name = format!("{prefix}{}", r.name);
        let detail = format!("{} checked, {} skipped", r.checked, r.skipped);
        if !r.passed() {
            Self::fail(name, format!("{detail}, {} failed", r.failed), r.failures.join("; "))
        } else if r.checked == 0 {
            Self::inconclusive(name, format!("{detail}: nothing to check inside the window"))
        } else {
            Self::pass(name, detail)
        }
    }
}

/// The outcome of one command. Equal inputs give byte-identical reports, so
/// no timing or host data is recorded.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: String,
    pub inputs_hash: String,
    pub window: [i64; 2],
    pub seed: u64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_s: Option<i64>,
    pub adjustments: Vec<Adjustment>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| matches!(c.status, Status::Fail | Status::Inconclusive))
    }
}

/// 64-bit FNV-1a, used to fingerprint the inputs of a run.
pub fn fingerprint(parts: &[&[u8]]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for b in p.iter().chain(&[0xff]) {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}
