use serde::{Deserialize, Serialize};

use laxalg::cocycles::Cycle;
use laxalg::geometry::GradingPrescription;
use laxalg::laxalgebra::MarkedConfig;

/// How the out-point part of the grading divisors is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrescriptionChoice {
    Standard,
    /// The unique prescription for a single out-point.
    M1,
    Custom(GradingPrescription),
}

fn default_prescription() -> PrescriptionChoice {
    PrescriptionChoice::Standard
}

fn default_window() -> [i64; 2] {
    [-6, 6]
}

fn default_samples() -> usize {
    100
}

/// A run configuration. All scalars in the marked configuration are strings
/// holding exact values; numbers are accepted only for the window, the sample
/// budget and the seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: String,
    pub marked: MarkedConfig,
    #[serde(default = "default_prescription")]
    pub prescription: PrescriptionChoice,
    #[serde(default = "default_window")]
    pub window: [i64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Cycles for the `cocycle` command; all `C_i`, `C*_j` and `C_S` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<Cycle>>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.marked.validate().map_err(|e| ConfigError(format!("marked: {e}")))?;
        let [lo, hi] = self.window;
        if lo > hi {
            return Err(ConfigError(format!("window: start {lo} exceeds end {hi}")));
        }
        let m = &self.marked;
        self.grading().map_err(|e| ConfigError(format!("prescription: {e}")))?;
        if let Some(cs) = &self.cycles {
            for (k, c) in cs.iter().enumerate() {
                c.validate(m).map_err(|e| ConfigError(format!("cycles[{k}]: {e}")))?;
            }
        }
        Ok(())
    }

    pub fn window(&self) -> (i64, i64) {
        (self.window[0], self.window[1])
    }

    pub fn grading(&self) -> laxalg::Result<GradingPrescription> {
        let m = &self.marked;
        let p = match &self.prescription {
            PrescriptionChoice::Standard => GradingPrescription::standard(m.n_in(), m.n_out(), m.genus)?,
            PrescriptionChoice::M1 => {
                if m.n_out() != 1 {
                    return Err(laxalg::MathError::Prescription("m1 needs exactly one out-point".into()));
                }
                GradingPrescription::single_out(m.n_in(), m.genus)
            }
            PrescriptionChoice::Custom(p) => p.clone(),
        };
        p.validate(m.n_in(), m.n_out(), m.genus)?;
        Ok(p)
    }

    /// The requested cycles, or `C_1..C_N`, `C*_1..C*_M` and `C_S`.
    pub fn cycles(&self) -> Vec<Cycle> {
        if let Some(c) = &self.cycles {
            return c.clone();
        }
        let m = &self.marked;
        let mut v: Vec<Cycle> = (0..m.n_in()).map(|i| Cycle::in_point(m, i)).collect();
        v.extend((0..m.n_out()).map(|j| Cycle::out_point(m, j)));
        if m.n_in() > 1 {
            v.push(Cycle::separating(m));
        }
        v
    }
}
