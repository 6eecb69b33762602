//! Verdicts with witnesses and counterexamples, shared by every checker.

use serde::Serialize;

use crate::arith::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Scalar>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Evidence {
    pub fn detail(detail: impl Into<String>) -> Self {
        Evidence { detail: detail.into(), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub verdict: Verdict,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Evidence>,
}

impl AxiomReport {
    pub fn holds(axiom: &str, cases: u64) -> Self {
        AxiomReport { axiom: axiom.into(), verdict: Verdict::Holds, cases, witness: None, counterexample: None }
    }

    pub fn fails(axiom: &str, cases: u64, counterexample: Evidence) -> Self {
        AxiomReport {
            axiom: axiom.into(),
            verdict: Verdict::Fails,
            cases,
            witness: None,
            counterexample: Some(counterexample),
        }
    }

    pub fn with_witness(mut self, w: Evidence) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn is_holds(&self) -> bool {
        self.verdict.holds()
    }
}
