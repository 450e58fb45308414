//! Certificate documents: one verdict per check id, with exponents and
//! witness data. Serialization is deterministic (sorted maps, stable check
//! order), so equal inputs give byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA: &str = "glcm-certificate/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Evidence only; never counts as a failure.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub exponents: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub witnesses: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(id: &str, ok: bool) -> Self {
        Check {
            id: id.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            exponents: BTreeMap::new(),
            witnesses: Map::new(),
            note: None,
        }
    }

    pub fn info(id: &str) -> Self {
        Check { verdict: Verdict::Info, ..Check::new(id, true) }
    }

    pub fn exp(mut self, name: &str, value: u64) -> Self {
        self.exponents.insert(name.to_string(), value);
        self
    }

    pub fn wit<T: Serialize>(mut self, key: &str, value: T) -> Self {
        let v = serde_json::to_value(value).expect("witness serializes");
        self.witnesses.insert(key.to_string(), v);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.note = Some(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub subject: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub summary: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl Certificate {
    pub fn new(subject: &str) -> Self {
        Certificate { schema: SCHEMA.to_string(), subject: subject.to_string(), seed: None, summary: Map::new(), checks: Vec::new() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn summarize<T: Serialize>(&mut self, key: &str, value: T) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).expect("summary serializes"));
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    /// Keep only the listed ids (in their original order).
    pub fn retain_ids(&mut self, ids: &[String]) {
        self.checks.retain(|c| ids.iter().any(|i| *i == c.id));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
