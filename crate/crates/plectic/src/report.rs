//! Machine-readable verification reports: one named check per line, with
//! witnesses, an input digest and a deterministic JSON rendering.

use crate::lie2::AxiomReport;
use serde::{Deserialize, Serialize};

/// Exit status of a command: pass, verification failure, or input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    VerificationFailure,
    InputError,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::VerificationFailure => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// A deterministic report: identical inputs produce byte-identical JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<CheckResult>,
    pub status: Status,
}

impl Report {
    pub fn new(command: impl Into<String>, input_bytes: &[u8]) -> Self {
        Report {
            command: command.into(),
            inputs_digest: format!("fnv1a:{:016x}", fnv1a(input_bytes)),
            checks: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        if !passed && self.status == Status::Pass {
            self.status = Status::VerificationFailure;
        }
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            witness,
        });
    }

    /// Fold an axiom report in as one check per relation, the first failing
    /// tuple as witness.
    pub fn fold_axioms(&mut self, prefix: &str, axioms: &AxiomReport) {
        for relation in &axioms.relations {
            let witness = relation
                .failures
                .first()
                .map(|f| format!("{} defect {}", f.tuple, f.defect));
            self.check(
                format!("{}{}", prefix, relation.name),
                relation.failures.is_empty(),
                witness,
            );
        }
    }

    pub fn input_error(&mut self, message: String) {
        self.status = Status::InputError;
        self.checks.push(CheckResult {
            name: "input".into(),
            passed: false,
            witness: Some(message),
        });
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Human-readable lines: one check per line, witnesses in parentheses.
    pub fn render_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for check in &self.checks {
            let mark = if check.passed { "pass" } else { "FAIL" };
            match &check.witness {
                Some(w) => out.push(format!("{}: {} ({})", check.name, mark, w)),
                None => out.push(format!("{}: {}", check.name, mark)),
            }
        }
        out
    }
}

/// FNV-1a 64-bit digest; stable, dependency-free fingerprint of inputs.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
