//! Verification certificates: one record per check with a verdict, the
//! statement it checks, and a witness on failure.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::field::FieldDescriptor;

pub const SCHEMA_CERTIFICATE: &str = "melikyan.certificate/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The statement being checked.
    pub anchor: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<Value>,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub algebra: Value,
    pub field: FieldDescriptor,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<Value>,
}

impl Certificate {
    pub fn new(command: impl Into<String>, algebra: Value, field: FieldDescriptor, seed: u64, checks: Vec<Check>) -> Self {
        Certificate {
            schema: SCHEMA_CERTIFICATE.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            algebra,
            field,
            seed,
            checks,
            report: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// The JSON with every `wall_time_ms` zeroed; equal commands and seeds
    /// give byte-identical output in this form.
    pub fn to_json_untimed(&self) -> Value {
        let mut c = self.clone();
        for check in &mut c.checks {
            check.wall_time_ms = 0;
        }
        c.to_json()
    }

    /// Plain-text table, one line per check.
    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
        let mut out = format!("{}  seed {}\n", self.command, self.seed);
        out += &format!("{:<width$}  {:<7}  {:>8}  statement\n", "check", "verdict", "ms");
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skip => "skip",
            };
            out += &format!("{:<width$}  {:<7}  {:>8}  {}\n", c.name, v, c.wall_time_ms, c.anchor);
            if let Some(w) = &c.witness {
                out += &format!("{:<width$}    witness: {}\n", "", w);
            }
        }
        let fails = self.failures().count();
        out += &format!("{} checks, {} failed\n", self.checks.len(), fails);
        out
    }
}

/// Result of running one check body.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass(Option<Value>),
    Fail(Value),
    Skip(String),
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome::Pass(None)
    }

    pub fn pass_with(detail: Value) -> Self {
        Outcome::Pass(Some(detail))
    }

    pub fn fail(witness: impl Into<Value>) -> Self {
        Outcome::Fail(witness.into())
    }

    /// Pass iff `ok`; otherwise fail with the given witness.
    pub fn expect(ok: bool, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Outcome::pass()
        } else {
            Outcome::Fail(witness())
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::Fail(Value::String(format!("error: {e}")))
    }
}

pub type CheckBody<'a> = Box<dyn Fn() -> Result<Outcome, Error> + Send + Sync + 'a>;

pub struct CheckSpec<'a> {
    pub name: String,
    pub anchor: String,
    pub body: CheckBody<'a>,
}

impl<'a> CheckSpec<'a> {
    pub fn new(name: &str, anchor: &str, body: impl Fn() -> Result<Outcome, Error> + Send + Sync + 'a) -> Self {
        CheckSpec { name: name.into(), anchor: anchor.into(), body: Box::new(body) }
    }
}

fn empty(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::String(s) => s.is_empty(),
        Value::Array(a) => a.is_empty(),
        Value::Object(o) => o.is_empty(),
        _ => false,
    }
}

/// Runs the checks in parallel and returns the records in input order.
pub fn run_checks(specs: Vec<CheckSpec<'_>>) -> Vec<Check> {
    specs
        .into_par_iter()
        .map(|spec| {
            let start = Instant::now();
            let outcome = (spec.body)().unwrap_or_else(Outcome::from);
            let wall_time_ms = start.elapsed().as_millis() as u64;
            let (verdict, witness, detail) = match outcome {
                Outcome::Pass(d) => (Verdict::Pass, None, d),
                Outcome::Fail(w) => {
                    let w = if empty(&w) { Value::String(format!("{} failed", spec.name)) } else { w };
                    (Verdict::Fail, Some(w), None)
                }
                Outcome::Skip(reason) => (Verdict::Skip, None, Some(Value::String(reason))),
            };
            Check { name: spec.name, anchor: spec.anchor, verdict, witness, detail, wall_time_ms }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn failures_always_carry_witnesses() {
        let checks = run_checks(vec![
            CheckSpec::new("a", "x", || Ok(Outcome::pass())),
            CheckSpec::new("b", "y", || Ok(Outcome::fail(Value::Null))),
            CheckSpec::new("c", "z", || Err(Error::Singular)),
            CheckSpec::new("d", "w", || Ok(Outcome::Skip("n/a".into()))),
        ]);
        assert_eq!(checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["a", "b", "c", "d"]);
        assert_eq!(checks[0].verdict, Verdict::Pass);
        for c in &checks[1..3] {
            assert_eq!(c.verdict, Verdict::Fail);
            assert!(!empty(c.witness.as_ref().unwrap()));
        }
        let f = crate::field::GaloisField::new(5, 1).unwrap();
        let cert = Certificate::new("verify test", json!({}), f.descriptor(), 0, checks);
        assert!(!cert.passed());
        assert!(cert.to_table().contains("FAIL"));
        let back: Certificate = serde_json::from_value(cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }
}
