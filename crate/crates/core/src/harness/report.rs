use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::rng::RNG_ALGORITHM;

/// Parameters shared by every suite; unset fields fall back to each
/// suite's own grid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteParams {
    pub p: Option<u32>,
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub budget: Option<u128>,
}

impl SuiteParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn trials_or(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }

    pub fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    pub fn budget_or(&self, default: u128) -> u128 {
        self.budget.unwrap_or(default)
    }
}

/// One verified identity at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub passed: bool,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// SHA-256 of the check name, parameters and counterexample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rng: &'static str,
    pub params: SuiteParams,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn new(suite: &str, params: &SuiteParams) -> Self {
        Self { suite: suite.into(), rng: RNG_ALGORITHM, params: params.clone(), passed: true, checks: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.passed &= record.passed;
        self.checks.push(record);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} (seed {}, {})\n", self.suite, self.params.seed, self.rng);
        for c in &self.checks {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "  {} {} [{}] cases={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.check,
                params.join(" "),
                c.cases
            ));
            if let Some(d) = &c.input_digest {
                out.push_str(&format!(" digest={d}"));
            }
            out.push('\n');
        }
        out.push_str(if self.passed { "result: pass\n" } else { "result: FAIL\n" });
        out
    }
}

/// Builder for a [`CheckRecord`].
#[derive(Clone, Debug)]
pub struct Check {
    name: String,
    params: BTreeMap<String, Value>,
    cases: u64,
    detail: Option<Value>,
    counterexample: Option<Value>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), params: BTreeMap::new(), cases: 0, detail: None, counterexample: None }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.into(), json!(value));
        self
    }

    pub fn detail(mut self, value: impl Serialize) -> Self {
        self.detail = Some(json!(value));
        self
    }

    /// Counts a case; the first failing one is kept.
    pub fn case(&mut self, ok: bool, input: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(input());
        }
    }

    pub fn cases(&mut self, n: u64) {
        self.cases += n;
    }

    pub fn fail(&mut self, input: Value) {
        if self.counterexample.is_none() {
            self.counterexample = Some(input);
        }
    }

    pub fn case_count(&self) -> u64 {
        self.cases
    }

    pub fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    pub fn finish(self) -> CheckRecord {
        let passed = self.counterexample.is_none();
        let input_digest = self.counterexample.as_ref().map(|cx| {
            let payload = json!({ "check": self.name, "params": self.params, "input": cx });
            hex::encode(Sha256::digest(payload.to_string().as_bytes()))
        });
        CheckRecord {
            check: self.name,
            params: self.params,
            passed,
            cases: self.cases,
            detail: self.detail,
            counterexample: self.counterexample,
            input_digest,
        }
    }
}
