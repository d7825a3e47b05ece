//! Machine-readable command reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub results: Value,
    pub assertions: Vec<Assertion>,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Report {
        Report { command: command.into(), seed, results: json!({}), assertions: Vec::new(), timings: BTreeMap::new() }
    }

    /// Sets `results[key]`.
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable result");
        self.results.as_object_mut().expect("results object").insert(key.to_string(), v);
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, lhs: impl Serialize, rhs: impl Serialize) {
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            lhs: serde_json::to_value(lhs).expect("serializable"),
            rhs: serde_json::to_value(rhs).expect("serializable"),
        });
    }

    pub fn check_eq<T: Serialize + PartialEq>(&mut self, name: impl Into<String>, lhs: T, rhs: T) {
        let pass = lhs == rhs;
        self.check(name, pass, lhs, rhs);
    }

    pub fn check_le<T: Serialize + PartialOrd>(&mut self, name: impl Into<String>, lhs: T, rhs: T) {
        let pass = lhs <= rhs;
        self.check(name, pass, lhs, rhs);
    }

    /// Runs `f` and records its wall time under `phase`.
    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.timings.entry(phase.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }

    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without timings, for determinism checks.
    pub fn without_timings(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timings");
        v
    }
}
