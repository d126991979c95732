//! Pass/fail records for axiom checks.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub passed: bool,
    /// Largest total degree inspected, when the check is degreewise.
    pub max_degree: Option<u32>,
    /// First failing input, with its degree.
    pub witness: Option<String>,
}

impl AxiomReport {
    pub fn pass(axiom: impl Into<String>, max_degree: Option<u32>) -> Self {
        Self { axiom: axiom.into(), passed: true, max_degree, witness: None }
    }

    pub fn fail(axiom: impl Into<String>, max_degree: Option<u32>, witness: impl Into<String>) -> Self {
        Self { axiom: axiom.into(), passed: false, max_degree, witness: Some(witness.into()) }
    }

    /// Builds a report from the first witness, if any.
    pub fn from_witness(axiom: impl Into<String>, max_degree: Option<u32>, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(axiom, max_degree),
            Some(w) => Self::fail(axiom, max_degree, w),
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{status} {}", self.axiom)?;
        if let Some(d) = self.max_degree {
            write!(f, " (degree <= {d})")?;
        }
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

pub fn all_pass(reports: &[AxiomReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
