//! Partial elements: one payload per face of a canonical DNF, each payload
//! normalized and invariant under its face's quotient.

use std::fmt;
use std::hash::Hash;

use crate::cofib::{dnf, Cof, Dnf, Face};
use crate::cube::{then, VarMap};
use crate::error::{Error, Result};
use crate::terms::normalize::{Normalizer, Run};
use crate::terms::term::{GluePiece, Term};

/// Something that can sit on a face of a partial element.
pub trait Payload: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {
    /// Normal form after restricting along `m`.
    fn nf_under(&self, n: &Normalizer, m: &VarMap, run: &mut Run) -> Result<Self>;

    fn subterms(&self) -> Vec<&Term>;
}

impl Payload for Term {
    fn nf_under(&self, n: &Normalizer, m: &VarMap, run: &mut Run) -> Result<Self> {
        n.nf_in(self, m, run)
    }

    fn subterms(&self) -> Vec<&Term> {
        vec![self]
    }
}

impl Payload for GluePiece {
    fn nf_under(&self, n: &Normalizer, m: &VarMap, run: &mut Run) -> Result<Self> {
        Ok(GluePiece {
            ob: n.nf_in(&self.ob, m, run)?,
            fwd: n.nf_in(&self.fwd, m, run)?,
            inv: n.nf_in(&self.inv, m, run)?,
        })
    }

    fn subterms(&self) -> Vec<&Term> {
        vec![&self.ob, &self.fwd, &self.inv]
    }
}

/// The payload of a partial element valued in a proposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Unit;

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "()")
    }
}

impl Payload for Unit {
    fn nf_under(&self, _: &Normalizer, _: &VarMap, _: &mut Run) -> Result<Self> {
        Ok(Unit)
    }

    fn subterms(&self) -> Vec<&Term> {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialElement<P> {
    dnf: Dnf,
    payloads: Vec<P>,
}

impl<P> Default for PartialElement<P> {
    fn default() -> Self {
        PartialElement {
            dnf: Dnf::bot(),
            payloads: Vec::new(),
        }
    }
}

impl<P: Payload> PartialElement<P> {
    /// The unique partial element over ⊥.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn dnf(&self) -> &Dnf {
        &self.dnf
    }

    pub fn faces(&self) -> &[Face] {
        self.dnf.faces()
    }

    pub fn payloads(&self) -> &[P] {
        &self.payloads
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Face, &P)> {
        self.dnf.faces().iter().zip(self.payloads.iter())
    }

    pub fn cof(&self) -> Cof {
        self.dnf.to_cof()
    }

    pub fn is_empty(&self) -> bool {
        self.dnf.is_bot()
    }

    /// The payload when the cofibration is ⊤.
    pub fn collapsed(&self) -> Option<&P> {
        self.dnf.is_top().then(|| &self.payloads[0])
    }

    /// Build `[φ₁ ↦ p₁, …, φₙ ↦ pₙ]`. Pieces must agree on every overlap.
    pub fn from_cases(n: &Normalizer, cases: Vec<(Cof, P)>) -> Result<Self> {
        let mut run = n.run();
        let mut entries: Vec<(usize, Face, P)> = Vec::new();
        for (k, (cof, p)) in cases.iter().enumerate() {
            for face in dnf(cof).faces() {
                let q = p.nf_under(n, face.map(), &mut run)?;
                entries.push((k, face.clone(), q));
            }
        }
        for (a, (ka, fa, pa)) in entries.iter().enumerate() {
            for (kb, fb, pb) in &entries[a + 1..] {
                if ka == kb {
                    continue;
                }
                if let Some(meet) = fa.meet(fb) {
                    let left = pa.nf_under(n, meet.map(), &mut run)?;
                    let right = pb.nf_under(n, meet.map(), &mut run)?;
                    if left != right {
                        return Err(Error::IncompatiblePieces {
                            meet: meet.to_string(),
                            left: left.to_string(),
                            right: right.to_string(),
                        });
                    }
                }
            }
        }
        let canon = Dnf::from_faces(entries.iter().map(|(_, f, _)| f.clone()).collect());
        let mut payloads = Vec::with_capacity(canon.faces().len());
        for face in canon.faces() {
            let (_, _, p) = entries
                .iter()
                .find(|(_, f, _)| face.entails(f))
                .expect("every canonical face comes from some case");
            payloads.push(p.nf_under(n, face.map(), &mut run)?);
        }
        Ok(PartialElement {
            dnf: canon,
            payloads,
        })
    }

    /// One payload per canonical face of `cof`, in face order.
    pub fn new(n: &Normalizer, cof: &Cof, payloads: Vec<P>) -> Result<Self> {
        let d = dnf(cof);
        if d.faces().len() != payloads.len() {
            return Err(Error::validation(format!(
                "{} payloads given for {} faces of {cof}",
                payloads.len(),
                d.faces().len()
            )));
        }
        let cases = d
            .faces()
            .iter()
            .map(Face::to_cof)
            .zip(payloads)
            .collect();
        Self::from_cases(n, cases)
    }

    /// Restrict along `m`, re-bucketing payloads onto the new faces: each
    /// new face takes the payload of the first old face it satisfies.
    pub(crate) fn restrict_in(&self, n: &Normalizer, m: &VarMap, run: &mut Run) -> Result<Self> {
        let dnf = self.dnf.restrict(m);
        let mut payloads = Vec::with_capacity(dnf.faces().len());
        for face in dnf.faces() {
            let full = then(m, face.map());
            let k = self
                .dnf
                .faces()
                .iter()
                .position(|old| old.holds_under(&full))
                .expect("restricted faces come from old faces");
            payloads.push(self.payloads[k].nf_under(n, &full, run)?);
        }
        Ok(PartialElement { dnf, payloads })
    }

    /// The partial element restricted along `m`.
    pub fn restrict(&self, n: &Normalizer, m: &VarMap) -> Result<Self> {
        self.restrict_in(n, m, &mut n.run())
    }

    /// Restrict and, if the result is ⊤, return the single payload.
    pub(crate) fn collapse_under(
        &self,
        n: &Normalizer,
        m: &VarMap,
        run: &mut Run,
    ) -> Result<Option<P>> {
        let dnf = self.dnf.restrict(m);
        if !dnf.is_top() {
            return Ok(None);
        }
        let k = self
            .dnf
            .faces()
            .iter()
            .position(|old| old.holds_under(m))
            .expect("a decided restriction satisfies some face");
        self.payloads[k].nf_under(n, m, run).map(Some)
    }

    pub fn map_payloads<Q: Payload>(&self, f: impl Fn(&P) -> Q) -> PartialElement<Q> {
        PartialElement {
            dnf: self.dnf.clone(),
            payloads: self.payloads.iter().map(f).collect(),
        }
    }
}

impl<P: fmt::Display> fmt::Display for PartialElement<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (c, p)) in self.dnf.faces().iter().zip(&self.payloads).enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c} |-> {p}")?;
        }
        write!(f, "]")
    }
}
