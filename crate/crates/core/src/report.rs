//! Versioned JSON reports with the conventions needed to audit a result.

use serde::{Deserialize, Serialize};

use crate::quad::PAIRING_FACTOR;
use crate::regularize::counterterm_constant;
use crate::weyl::catalog::CATALOG_VERSION;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    /// Factor multiplying Lebesgue measure per complex coordinate.
    pub pairing_factor: String,
    pub branch: String,
    pub singularity_guard: f64,
    /// `c` in `⟨∂_z(1/z̄), ξ⟩ = c·φ(0)`.
    pub delta_constant: String,
    /// Radial-moment factor used by finite-part counterterms.
    pub counterterm_constant: String,
}

impl Default for Conventions {
    fn default() -> Self {
        let k = counterterm_constant();
        Conventions {
            pairing_factor: format!("{}{:+}i", PAIRING_FACTOR.re, PAIRING_FACTOR.im),
            branch: "principal logarithm, f^a = exp(a Log f)".into(),
            singularity_guard: 1e-12,
            delta_constant: "-2*pi*i".into(),
            counterterm_constant: format!("{}{:+}i", k.re, k.im),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    CheckFailed,
    NonConvergent,
    ConfigError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::CheckFailed => 1,
            Outcome::NonConvergent => 2,
            Outcome::ConfigError => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report<C, R> {
    pub schema_version: String,
    pub tool_version: String,
    pub catalog_version: String,
    pub conventions: Conventions,
    pub config: C,
    /// Unix seconds; omitted in deterministic runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub outcome: Outcome,
    pub result: R,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(config: C, outcome: Outcome, result: R, deterministic: bool) -> Self {
        let timestamp = if deterministic {
            None
        } else {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok().map(|d| d.as_secs())
        };
        Report {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            catalog_version: CATALOG_VERSION.into(),
            conventions: Conventions::default(),
            config,
            timestamp,
            outcome,
            result,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
