//! Obligation reports shared by the checkers and the command line.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Inconclusive: a search bound or the step budget ran out.
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Obligation {
    pub id: String,
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Set when an unknown is caused by the step budget alone.
    #[serde(skip)]
    pub budget: bool,
}

impl Obligation {
    pub fn new(id: impl Into<String>, kind: impl Into<String>, status: Status) -> Self {
        Obligation {
            id: id.into(),
            kind: kind.into(),
            status,
            witness: None,
            budget: false,
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// An unknown caused by budget exhaustion.
    pub fn out_of_budget(id: impl Into<String>, kind: impl Into<String>, budget: usize) -> Self {
        let mut o = Obligation::new(id, kind, Status::Unknown)
            .with_witness(format!("step budget of {budget} exhausted"));
        o.budget = true;
        o
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub obligations: Vec<Obligation>,
    pub counts: Counts,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, o: Obligation) {
        self.obligations.push(o);
        self.recount();
    }

    pub fn extend(&mut self, other: Report) {
        self.obligations.extend(other.obligations);
        self.timings.extend(other.timings);
        self.recount();
    }

    pub fn time(&mut self, label: &str, secs: f64) {
        self.timings.insert(label.to_string(), secs);
    }

    fn recount(&mut self) {
        let mut c = Counts::default();
        for o in &self.obligations {
            match o.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Unknown => c.unknown += 1,
            }
        }
        self.counts = c;
    }

    /// Sort obligations by id so that output is deterministic.
    pub fn finish(mut self) -> Self {
        self.obligations.sort_by(|a, b| a.id.cmp(&b.id));
        self.recount();
        self
    }

    pub fn get(&self, id: &str) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.id == id)
    }

    pub fn all_pass(&self) -> bool {
        self.counts.fail == 0 && self.counts.unknown == 0
    }

    /// 0 when everything passed, 1 on any failure, 3 when the only
    /// shortfall is budget-caused unknowns. Other unknowns count as failures
    /// to establish the property.
    pub fn exit_code(&self) -> i32 {
        if self.counts.fail > 0 {
            return 1;
        }
        let unknown: Vec<&Obligation> = self
            .obligations
            .iter()
            .filter(|o| o.status == Status::Unknown)
            .collect();
        if unknown.is_empty() {
            0
        } else if unknown.iter().all(|o| o.budget) {
            3
        } else {
            1
        }
    }

    /// JSON with or without the (nondeterministic) timings.
    pub fn to_json(&self, timings: bool) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if !timings {
            v.as_object_mut().expect("object").remove("timings");
        }
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.obligations {
            out.push_str(&format!("{:<7} {} [{}]", o.status, o.id, o.kind));
            if let Some(w) = &o.witness {
                out.push_str(&format!("  {w}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} unknown\n",
            self.counts.pass, self.counts.fail, self.counts.unknown
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut r = Report::new();
        r.push(Obligation::new("b", "k", Status::Pass));
        assert_eq!(r.exit_code(), 0);
        r.push(Obligation::out_of_budget("a", "k", 10));
        assert_eq!(r.exit_code(), 3);
        r.push(Obligation::new("c", "k", Status::Unknown));
        assert_eq!(r.exit_code(), 1);
        let r = r.finish();
        assert_eq!(r.obligations[0].id, "a");
        assert_eq!(r.counts, Counts { pass: 1, fail: 0, unknown: 2 });
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new();
        r.push(Obligation::new("x", "eso", Status::Fail).with_witness("w"));
        r.time("total", 0.5);
        let v: serde_json::Value = serde_json::from_str(&r.to_json(false)).unwrap();
        assert_eq!(v["obligations"][0]["status"], "fail");
        assert_eq!(v["counts"]["fail"], 1);
        assert!(v.get("timings").is_none());
        assert!(r.to_json(true).contains("timings"));
    }
}
