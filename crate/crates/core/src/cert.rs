//! Re-checkable equation certificates.

use serde::Serialize;

use crate::cube::{show_map, VarMap};
use crate::error::Result;
use crate::terms::{Node, Normalizer, Term};

/// One checked equation `lhs = rhs`, both sides already restricted to the
/// context the entry describes.
#[derive(Clone, Debug, Serialize)]
pub struct CertEntry {
    pub description: String,
    pub context: String,
    #[serde(serialize_with = "as_string")]
    pub lhs: Term,
    #[serde(serialize_with = "as_string")]
    pub rhs: Term,
    pub lhs_nf: String,
    pub rhs_nf: String,
    pub pass: bool,
}

fn as_string<S: serde::Serializer>(t: &Term, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Certificate {
    pub entries: Vec<CertEntry>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalize `lhs[m]` and `rhs[m]`, record the entry and return whether
    /// they agree.
    pub fn check(
        &mut self,
        n: &Normalizer,
        description: impl Into<String>,
        m: &VarMap,
        lhs: &Term,
        rhs: &Term,
    ) -> Result<bool> {
        let lhs = Term::under(lhs, m);
        let rhs = Term::under(rhs, m);
        let l = n.normalize(&lhs)?;
        let r = n.normalize(&rhs)?;
        let pass = l == r;
        self.entries.push(CertEntry {
            description: description.into(),
            context: show_map(m),
            lhs,
            rhs,
            lhs_nf: l.to_string(),
            rhs_nf: r.to_string(),
            pass,
        });
        Ok(pass)
    }

    pub fn note(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.notes.contains(&text) {
            self.notes.push(text);
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CertEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn extend(&mut self, other: Certificate) {
        self.entries.extend(other.entries);
        for n in other.notes {
            self.note(n);
        }
    }

    /// Normalize every entry again from its stored terms.
    pub fn recheck(&self, n: &Normalizer) -> Result<bool> {
        for e in &self.entries {
            let agree = n.normalize(&e.lhs)? == n.normalize(&e.rhs)?;
            if agree != e.pass {
                return Ok(false);
            }
        }
        Ok(self.passed())
    }

    /// Every glue and ext node occurring in the entries, deduplicated.
    pub fn extension_nodes(&self) -> Vec<Term> {
        let mut out = std::collections::BTreeSet::new();
        for e in &self.entries {
            for side in [&e.lhs, &e.rhs] {
                side.walk(&mut |t| {
                    if matches!(t.node(), Node::GlueOb(_) | Node::ExtSet(_)) {
                        out.insert(t.clone());
                    }
                });
            }
        }
        out.into_iter().collect()
    }
}
