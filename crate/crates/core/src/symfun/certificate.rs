//! Certificates and their JSON bundle.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational: a derived value is reported next to the expected one.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub status: Status,
    /// `"0"` for an exact pass, otherwise the nonzero residual.
    pub residual: String,
    pub expected_constant: Option<String>,
    pub derived_constant: Option<String>,
}

impl Certificate {
    /// Exact certificate from a list of nonzero residuals.
    pub fn exact(check: String, bad: Vec<String>) -> Self {
        Certificate {
            check,
            status: if bad.is_empty() { Status::Pass } else { Status::Fail },
            residual: if bad.is_empty() { "0".into() } else { bad.join("; ") },
            expected_constant: None,
            derived_constant: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Bundle {
    pub certificates: Vec<Certificate>,
}

impl Bundle {
    pub fn push(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Certificate>) {
        self.certificates.extend(cs);
    }

    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    pub fn failures(&self) -> Vec<&Certificate> {
        self.certificates.iter().filter(|c| !c.passed()).collect()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
