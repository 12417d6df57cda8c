//! Verification reports: one JSON object per check, newline-delimited for
//! campaigns.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Violated,
    NotApplicable,
    SkippedResource,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
            Verdict::SkippedResource => "skipped-resource",
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Violated
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub lemma_id: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default)]
    pub counts: BTreeMap<String, u64>,
    #[serde(default)]
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn new(lemma_id: impl Into<String>, verdict: Verdict) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            lemma_id: lemma_id.into(),
            params: BTreeMap::new(),
            verdict,
            witness: None,
            counts: BTreeMap::new(),
            elapsed_ms: 0,
            seed: None,
        }
    }

    pub fn not_applicable(lemma_id: impl Into<String>, reason: impl Into<String>) -> Self {
        VerificationReport::new(lemma_id, Verdict::NotApplicable).param("reason", reason.into())
    }

    /// Resource-limit errors become a skipped report; anything else is
    /// handed back to the caller.
    pub fn from_error(lemma_id: impl Into<String>, err: Error) -> Result<Self, Error> {
        match err {
            Error::ResourceLimit {
                what,
                limit,
                partial,
            } => Ok(VerificationReport::new(lemma_id, Verdict::SkippedResource)
                .param("resource", what)
                .count("limit", limit as u64)
                .count("partial", partial as u64)),
            other => Err(other),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn count(mut self, key: &str, value: u64) -> Self {
        self.counts.insert(key.to_string(), value);
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn is_ok(&self) -> bool {
        matches!(self.verdict, Verdict::Verified | Verdict::NotApplicable)
    }

    /// Checks the structural invariant that a violation carries a witness.
    pub fn validate(&self) -> Result<(), Error> {
        if self.verdict == Verdict::Violated && self.witness.is_none() {
            return Err(Error::Internal(format!(
                "violated report {} has no witness",
                self.lemma_id
            )));
        }
        Ok(())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Process exit code for a batch of reports: 1 if anything is violated,
/// otherwise 2 if anything was skipped, otherwise 0.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Violated) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::SkippedResource) {
        2
    } else {
        0
    }
}

/// Reads newline-delimited reports, ignoring blank lines and unknown fields.
pub fn parse_ndjson(text: &str) -> Result<Vec<VerificationReport>, Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l).map_err(|e| Error::invalid(format!("bad report line: {e}")))
        })
        .collect()
}

/// Renders reports as a markdown table.
pub fn to_markdown(reports: &[VerificationReport]) -> String {
    let mut out = String::from("| check | params | verdict | counts |\n|---|---|---|---|\n");
    for r in reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            r.lemma_id,
            params.join(", "),
            r.verdict.as_str(),
            counts.join(", ")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let r = VerificationReport::new("sylow2.census", Verdict::Verified)
            .param("n", 2)
            .param("q", 7)
            .count("involutions", 9)
            .seed(4);
        let line = r.to_json_line();
        assert!(line.contains("\"verdict\":\"verified\""));
        assert!(line.contains("\"schema\":1"));
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn tolerant_reader() {
        let line = r#"{"schema":1,"lemma_id":"x","verdict":"not-applicable","extra":[1,2]}"#;
        let r = parse_ndjson(line).unwrap();
        assert_eq!(r[0].verdict, Verdict::NotApplicable);
        assert!(parse_ndjson("{").is_err());
    }

    #[test]
    fn exit_codes() {
        let ok = VerificationReport::new("a", Verdict::Verified);
        let skip = VerificationReport::new("b", Verdict::SkippedResource);
        let bad = VerificationReport::new("c", Verdict::Violated).witness(json!({"g": 1}));
        assert_eq!(exit_code(&[ok.clone()]), 0);
        assert_eq!(exit_code(&[ok.clone(), skip.clone()]), 2);
        assert_eq!(exit_code(&[ok, skip, bad.clone()]), 1);
        assert!(bad.validate().is_ok());
        assert!(VerificationReport::new("d", Verdict::Violated).validate().is_err());
    }

    #[test]
    fn resource_errors_become_skips() {
        let r = VerificationReport::from_error("x", Error::resource("closure", 10, 10)).unwrap();
        assert_eq!(r.verdict, Verdict::SkippedResource);
        assert_eq!(r.counts["limit"], 10);
        assert!(VerificationReport::from_error("x", Error::invalid("no")).is_err());
    }
}
