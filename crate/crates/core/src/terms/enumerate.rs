//! Bounded enumeration of normal forms.
//!
//! Depth counts nested glue/ext nodes for objects and elements. Homs at depth
//! `d` are the normal forms of composable words of at most `d` atoms between
//! objects of depth at most `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cofib::{Dnf, Face};
use crate::cube::{critical_substitutions, DimCtx, Name};
use crate::error::Result;
use crate::terms::normalize::Normalizer;
use crate::terms::partial::PartialElement;
use crate::terms::presentation::Theory;
use crate::terms::term::{Ext, Glue, GluePiece, Node, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SortKind {
    Ob,
    Elt,
    Hom,
}

/// Every satisfiable face over `ctx`, one per quotient.
pub fn faces_over(ctx: &DimCtx) -> Vec<Face> {
    let mut out: Vec<Face> = critical_substitutions(ctx)
        .iter()
        .map(|q| {
            Face::solve(
                q.map()
                    .iter()
                    .map(|(v, e)| (crate::cube::IntervalExpr::Var(v.clone()), e.clone())),
            )
            .expect("critical substitutions are satisfiable")
        })
        .collect();
    out.sort();
    out
}

/// Every canonical cofibration over `ctx`: antichains of faces.
pub fn canonical_cofs(ctx: &DimCtx) -> Vec<Dnf> {
    let faces = faces_over(ctx);
    let mut out = Vec::new();
    fn go(faces: &[Face], k: usize, chosen: &mut Vec<Face>, out: &mut Vec<Dnf>) {
        if k == faces.len() {
            out.push(Dnf::from_faces(chosen.clone()));
            return;
        }
        go(faces, k + 1, chosen, out);
        let f = &faces[k];
        if chosen.iter().all(|c| !c.entails(f) && !f.entails(c)) {
            chosen.push(f.clone());
            go(faces, k + 1, chosen, out);
            chosen.pop();
        }
    }
    go(&faces, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn quotient_ctx(ctx: &DimCtx, face: &Face) -> DimCtx {
    face.quotient(ctx).expect("face over ctx").dom().clone()
}

/// A hom atom available for building words.
#[derive(Clone, Debug)]
struct Atom {
    term: Term,
    inv: Option<Term>,
    src: Term,
    dst: Term,
}

struct Enumerator<'a> {
    n: &'a Normalizer,
    memo: BTreeMap<(Vec<Name>, usize), Vec<Term>>,
}

impl<'a> Enumerator<'a> {
    fn objects(&mut self, ctx: &DimCtx, depth: usize) -> Result<Vec<Term>> {
        let key = (ctx.names().to_vec(), depth);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let pres = self.n.presentation();
        let mut found: BTreeSet<Term> = pres.objects().iter().cloned().map(Term::gen_name).collect();
        if depth > 0 {
            let lower = self.objects(ctx, depth - 1)?;
            found.extend(lower.iter().cloned());
            let cofs: Vec<Dnf> = canonical_cofs(ctx).into_iter().filter(|d| !d.is_top()).collect();
            for base in &lower {
                for cof in &cofs {
                    for t in self.extensions(ctx, base, cof, depth - 1)? {
                        found.insert(t);
                    }
                }
            }
        }
        let mut v: Vec<Term> = found.into_iter().collect();
        v.sort_by_key(|t| (t.ext_depth(), t.clone()));
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    /// All nodes over `base` with cofibration `cof` whose payloads have depth
    /// below `depth + 1`.
    fn extensions(&mut self, ctx: &DimCtx, base: &Term, cof: &Dnf, depth: usize) -> Result<Vec<Term>> {
        let theory = self.n.presentation().theory();
        let mut options: Vec<Vec<Payload>> = Vec::new();
        for face in cof.faces() {
            let qctx = quotient_ctx(ctx, face);
            let lower = self.objects(&qctx, depth)?;
            let mut opts = Vec::new();
            match theory {
                Theory::Set => opts.extend(lower.into_iter().map(Payload::Elt)),
                Theory::Cat => {
                    let b = self.n.nf_map(base, face.map())?;
                    let atoms = self.atoms(&qctx, depth, true)?;
                    for y in lower {
                        for (fwd, inv) in iso_words(self.n, &atoms, &b, &y, depth.max(1))? {
                            opts.push(Payload::Iso(GluePiece { ob: y.clone(), fwd, inv }));
                        }
                    }
                }
            }
            options.push(opts);
        }
        let mut out = Vec::new();
        let mut choice = Vec::new();
        self.combine(base, cof, &options, &mut choice, &mut out)?;
        Ok(out)
    }

    fn combine(
        &mut self,
        base: &Term,
        cof: &Dnf,
        options: &[Vec<Payload>],
        choice: &mut Vec<Payload>,
        out: &mut Vec<Term>,
    ) -> Result<()> {
        let k = choice.len();
        if k == options.len() {
            let faces = cof.faces();
            let built = match self.n.presentation().theory() {
                Theory::Set => {
                    let cases = faces
                        .iter()
                        .zip(choice.iter())
                        .map(|(f, p)| (f.to_cof(), p.elt().clone()))
                        .collect();
                    PartialElement::from_cases(self.n, cases).map(|pieces| {
                        Term::ext(Arc::new(Ext { base: base.clone(), pieces }))
                    })
                }
                Theory::Cat => {
                    let cases = faces
                        .iter()
                        .zip(choice.iter())
                        .map(|(f, p)| (f.to_cof(), p.iso().clone()))
                        .collect();
                    PartialElement::from_cases(self.n, cases).map(|pieces| {
                        Term::glue_ob(Arc::new(Glue { base: base.clone(), pieces }))
                    })
                }
            };
            match built {
                Ok(t) => out.push(self.n.normalize(&t)?),
                Err(crate::error::Error::IncompatiblePieces { .. }) => {}
                Err(e) => return Err(e),
            }
            return Ok(());
        }
        for p in options[k].clone() {
            choice.push(p);
            self.combine(base, cof, options, choice, out)?;
            choice.pop();
        }
        Ok(())
    }

    fn atoms(&mut self, ctx: &DimCtx, depth: usize, invertible_only: bool) -> Result<Vec<Atom>> {
        let pres = self.n.presentation();
        let mut out = Vec::new();
        let pairs = pres.inverse_pairs(self.n.config().budget);
        for h in pres.homs() {
            let inv = pairs
                .iter()
                .find(|(f, _)| f == &h.name)
                .map(|(_, g)| Term::gen_name(g.clone()));
            if invertible_only && inv.is_none() {
                continue;
            }
            out.push(Atom {
                term: Term::gen_name(h.name.clone()),
                inv,
                src: Term::gen_name(h.src.clone()),
                dst: Term::gen_name(h.dst.clone()),
            });
        }
        for ob in self.objects(ctx, depth)? {
            if let Node::GlueOb(g) = ob.node() {
                let fwd = Term::glue_fwd(g.clone());
                let inv = Term::inv(fwd.clone());
                out.push(Atom {
                    term: fwd.clone(),
                    inv: Some(inv.clone()),
                    src: g.base.clone(),
                    dst: ob.clone(),
                });
                out.push(Atom {
                    term: inv,
                    inv: Some(fwd),
                    src: ob.clone(),
                    dst: g.base.clone(),
                });
            }
        }
        Ok(out)
    }

    fn homs(&mut self, ctx: &DimCtx, depth: usize) -> Result<Vec<Term>> {
        let objects = self.objects(ctx, depth)?;
        let atoms = self.atoms(ctx, depth, false)?;
        let mut found = BTreeSet::new();
        for x in &objects {
            for (word, _) in words_from(&atoms, x, depth) {
                let t = match Term::comps(word.iter().rev().map(|a| a.term.clone()).collect()) {
                    Some(t) => t,
                    None => Term::id(x.clone()),
                };
                found.insert(self.n.normalize(&t)?);
            }
        }
        let mut v: Vec<Term> = found.into_iter().collect();
        v.sort_by_key(|t| (crate::terms::normalize::factors(t).len(), t.clone()));
        Ok(v)
    }
}

#[derive(Clone, Debug)]
enum Payload {
    Elt(Term),
    Iso(GluePiece),
}

impl Payload {
    fn elt(&self) -> &Term {
        match self {
            Payload::Elt(t) => t,
            Payload::Iso(p) => &p.ob,
        }
    }

    fn iso(&self) -> &GluePiece {
        match self {
            Payload::Iso(p) => p,
            Payload::Elt(_) => panic!("element payload in a glue node"),
        }
    }
}

/// Composable paths of at most `max_len` atoms starting at `x`, in
/// diagrammatic order, with their end object. Includes the empty path.
fn words_from<'b>(atoms: &'b [Atom], x: &Term, max_len: usize) -> Vec<(Vec<&'b Atom>, Term)> {
    let mut out = vec![(Vec::new(), x.clone())];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (path, end) in &frontier {
            for a in atoms.iter().filter(|a| &a.src == end) {
                let mut p = path.clone();
                p.push(a);
                next.push((p, a.dst.clone()));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Isos `src → dst` as (forward, inverse) pairs from words of invertible
/// atoms, deduplicated by the normal form of the forward part.
fn iso_words(
    n: &Normalizer,
    atoms: &[Atom],
    src: &Term,
    dst: &Term,
    max_len: usize,
) -> Result<Vec<(Term, Term)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (path, end) in words_from(atoms, src, max_len) {
        if &end != dst {
            continue;
        }
        let (fwd, inv) = if path.is_empty() {
            (Term::id(src.clone()), Term::id(src.clone()))
        } else {
            let fwd = Term::comps(path.iter().rev().map(|a| a.term.clone()).collect()).expect("nonempty");
            let inv = Term::comps(path.iter().map(|a| a.inv.clone().expect("invertible")).collect())
                .expect("nonempty");
            (fwd, inv)
        };
        let fwd = n.normalize(&fwd)?;
        if seen.insert(fwd.clone()) {
            out.push((fwd, n.normalize(&inv)?));
        }
    }
    Ok(out)
}

/// Normal forms of the given kind over `ctx` up to `depth`, deduplicated and
/// in a fixed order.
pub fn enumerate(n: &Normalizer, kind: SortKind, ctx: &DimCtx, depth: usize) -> Result<Vec<Term>> {
    let theory = n.presentation().theory();
    let mut e = Enumerator {
        n,
        memo: BTreeMap::new(),
    };
    match (kind, theory) {
        (SortKind::Ob, Theory::Cat) | (SortKind::Elt, Theory::Set) => e.objects(ctx, depth),
        (SortKind::Hom, Theory::Cat) => e.homs(ctx, depth),
        _ => Ok(Vec::new()),
    }
}

/// Generating arrows at `ctx` and `depth`: base hom generators and glue isos
/// (forward direction only), as `(term, src, dst)`.
pub fn generating_arrows(n: &Normalizer, ctx: &DimCtx, depth: usize) -> Result<Vec<(Term, Term, Term)>> {
    let mut e = Enumerator {
        n,
        memo: BTreeMap::new(),
    };
    Ok(e
        .atoms(ctx, depth, false)?
        .into_iter()
        .filter(|a| !matches!(a.term.node(), Node::Inv(_)))
        .map(|a| (a.term, a.src, a.dst))
        .collect())
}
