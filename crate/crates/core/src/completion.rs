//! The completion of a presentation: its free algebra closed under glue
//! (CAT) or ext (SET) nodes, with the extension operations, witnesses of
//! essential surjectivity, externalization at the empty context, and bounded
//! verification of the completion's properties.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cat::{derive_wcoe_ob, IsoTerm};
use crate::cert::Certificate;
use crate::cofib::Cof;
use crate::cube::{DimCtx, IntervalExpr, Name, VarMap};
use crate::error::{Error, Result};
use crate::kan::{
    center_and_path, fibrancy_from_prg, wcom_from_ext, ExtensionSpace, FillingProblem, PrgInstance,
    TruncationSpace,
};
use crate::report::{Obligation, Report, Status};
use crate::sample::{self, TermSampler};
use crate::terms::enumerate::generating_arrows;
use crate::terms::{
    enumerate, factors, Config, Ext, Glue, GluePiece, Node, Normalizer, PartialElement, Presentation, Sort,
    SortKind, Term, Theory, Unit,
};

type Memo = BTreeMap<(SortKind, Vec<Name>, usize), Arc<Vec<Term>>>;

/// A completed presentation. Immutable apart from its enumeration cache.
pub struct Completion {
    n: Normalizer,
    memo: Mutex<Memo>,
}

pub fn complete(p: Presentation) -> Completion {
    Completion::new(Arc::new(p))
}

impl Completion {
    pub fn new(p: Arc<Presentation>) -> Self {
        Completion {
            n: Normalizer::new(p),
            memo: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_config(p: Arc<Presentation>, config: Config) -> Self {
        Completion {
            n: Normalizer::with_config(p, config),
            memo: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn normalizer(&self) -> &Normalizer {
        &self.n
    }

    pub fn presentation(&self) -> &Presentation {
        self.n.presentation()
    }

    pub fn theory(&self) -> Theory {
        self.presentation().theory()
    }

    /// The inclusion of a base generator.
    pub fn include(&self, g: &str) -> Result<Term> {
        let p = self.presentation();
        if p.is_object(g) || p.hom(g).is_some() {
            Ok(Term::gen(g))
        } else {
            Err(Error::Unbound(crate::cube::name(g)))
        }
    }

    /// Cached normal forms of a sort over `ctx` up to `depth`.
    pub fn enumerate(&self, kind: SortKind, ctx: &DimCtx, depth: usize) -> Result<Arc<Vec<Term>>> {
        let key = (kind, ctx.names().to_vec(), depth);
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(enumerate(&self.n, kind, ctx, depth)?);
        self.memo.lock().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    /// Extend a partial iso out of `x` to a total one: the glue object and
    /// its iso from `x`, collapsed when the cofibration is ⊤.
    pub fn ext_ob(&self, x: &Term, pieces: PartialElement<GluePiece>) -> Result<(Term, IsoTerm)> {
        if self.theory() != Theory::Cat {
            return Err(Error::sort("ext_ob needs a CAT presentation"));
        }
        let x = self.n.normalize(x)?;
        for (face, p) in pieces.iter() {
            let base = self.n.nf_map(&x, face.map())?;
            self.n.check_iso(&base, p)?;
        }
        let g = Arc::new(Glue { base: x, pieces });
        let ob = self.n.normalize(&Term::glue_ob(g.clone()))?;
        let fwd = Term::glue_fwd(g);
        let iso = IsoTerm {
            inv: self.n.normalize(&Term::inv(fwd.clone()))?,
            fwd: self.n.normalize(&fwd)?,
        };
        Ok((ob, iso))
    }

    pub fn ext_ob_cases(&self, x: &Term, cases: Vec<(Cof, GluePiece)>) -> Result<(Term, IsoTerm)> {
        let pieces = PartialElement::from_cases(&self.n, cases)?;
        self.ext_ob(x, pieces)
    }

    /// `ext_ob` together with the boundary equations on each face.
    pub fn ext_ob_certified(
        &self,
        x: &Term,
        pieces: PartialElement<GluePiece>,
    ) -> Result<(Term, IsoTerm, Certificate)> {
        let (ob, iso) = self.ext_ob(x, pieces.clone())?;
        let mut cert = Certificate::new();
        for (face, p) in pieces.iter() {
            let m = face.map();
            cert.check(&self.n, "object restricts to the piece", m, &ob, &p.ob)?;
            cert.check(&self.n, "iso restricts to the piece", m, &iso.fwd, &p.fwd)?;
            cert.check(&self.n, "inverse restricts to the piece", m, &iso.inv, &p.inv)?;
        }
        Ok((ob, iso, cert))
    }

    /// Homs have unique extensions: every piece must already be `f` on its
    /// face, and the extension is `f`.
    pub fn ext_hom(&self, f: &Term, cases: Vec<(Cof, Term)>) -> Result<Term> {
        let f = self.n.normalize(f)?;
        let pieces = PartialElement::from_cases(&self.n, cases)?;
        for (face, p) in pieces.iter() {
            let here = self.n.nf_map(&f, face.map())?;
            if &here != p {
                return Err(Error::NonPropositionalPiece {
                    face: face.to_string(),
                    piece: p.to_string(),
                    hom: here.to_string(),
                });
            }
        }
        Ok(f)
    }

    /// `ext(a, pieces)` in a SET completion.
    pub fn ext_elt(&self, a: &Term, cases: Vec<(Cof, Term)>) -> Result<Term> {
        if self.theory() != Theory::Set {
            return Err(Error::sort("ext_elt needs a SET presentation"));
        }
        let pieces = PartialElement::from_cases(&self.n, cases)?;
        self.n.normalize(&Term::ext(Arc::new(Ext {
            base: a.clone(),
            pieces,
        })))
    }

    /// A base object isomorphic to `ob`, with the iso from it.
    pub fn ess_surj_witness(&self, ob: &Term) -> Result<(Term, IsoTerm)> {
        let ob = self.n.normalize(ob)?;
        match ob.node() {
            Node::Gen(n) if self.presentation().is_object(n) => Ok((ob.clone(), IsoTerm::identity(&ob))),
            Node::GlueOb(g) => {
                let (b, below) = self.ess_surj_witness(&g.base)?;
                let fwd = Term::glue_fwd(g.clone());
                let up = IsoTerm {
                    inv: Term::inv(fwd.clone()),
                    fwd,
                };
                Ok((b, below.then(&up).normalize(&self.n)?))
            }
            _ => Err(Error::sort(format!("`{ob}` is not a normal object"))),
        }
    }

    /// The category fragment at the empty context: objects and homs up to
    /// `depth`, generating arrows and the composition table.
    pub fn externalize(&self, depth: usize) -> Result<Fragment> {
        let ctx = DimCtx::empty();
        let objects: Vec<Term> = match self.theory() {
            Theory::Cat => self.enumerate(SortKind::Ob, &ctx, depth)?.to_vec(),
            Theory::Set => self.enumerate(SortKind::Elt, &ctx, depth)?.to_vec(),
        };
        for o in &objects {
            let mut open = None;
            o.walk(&mut |t| {
                let pieces_top = match t.node() {
                    Node::GlueOb(g) | Node::GlueIsoFwd(g) => !g.pieces.is_empty(),
                    Node::ExtSet(e) => !e.pieces.is_empty(),
                    _ => false,
                };
                if pieces_top {
                    open = Some(t.clone());
                }
            });
            if let Some(t) = open {
                return Err(Error::validation(format!("uncollapsed node at the empty context: {t}")));
            }
        }
        let index: BTreeMap<Term, usize> = objects.iter().cloned().enumerate().map(|(k, t)| (t, k)).collect();
        let mut arrows = Vec::new();
        let mut homs = Vec::new();
        let mut composition = BTreeMap::new();
        if self.theory() == Theory::Cat {
            let pairs: BTreeSet<Name> = self
                .presentation()
                .inverse_pairs(self.n.config().budget)
                .into_iter()
                .map(|(f, _)| f)
                .collect();
            for (t, s, d) in generating_arrows(&self.n, &ctx, depth)? {
                let (Some(&s), Some(&d)) = (index.get(&s), index.get(&d)) else {
                    continue;
                };
                let iso = match t.node() {
                    Node::Gen(n) => pairs.contains(n),
                    _ => true,
                };
                arrows.push(Arrow { term: t, src: s, dst: d, iso });
            }
            for h in self.enumerate(SortKind::Hom, &ctx, depth)?.iter() {
                let Sort::Hom(s, d) = self.n.sort_of(h)? else {
                    continue;
                };
                if let (Some(&s), Some(&d)) = (index.get(&s), index.get(&d)) {
                    homs.push(Arrow { term: h.clone(), src: s, dst: d, iso: false });
                }
            }
            let hom_index: BTreeMap<&Term, usize> = homs.iter().enumerate().map(|(k, a)| (&a.term, k)).collect();
            for (gi, g) in homs.iter().enumerate() {
                for (fi, f) in homs.iter().enumerate() {
                    if f.dst != g.src {
                        continue;
                    }
                    let c = self.n.normalize(&Term::comp(g.term.clone(), f.term.clone()))?;
                    composition.insert((gi, fi), hom_index.get(&c).copied());
                }
            }
        }
        Ok(Fragment {
            depth,
            objects,
            arrows,
            homs,
            composition,
        })
    }

    /// Bounded check that the inclusion of the base is a weak equivalence at
    /// dimension 0.
    pub fn verify_weq_dim0(&self, depth: usize) -> Report {
        let start = Instant::now();
        let mut report = Report::new();
        let budget = self.n.config().budget;
        let ctx = DimCtx::empty();
        let kind = match self.theory() {
            Theory::Cat => SortKind::Ob,
            Theory::Set => SortKind::Elt,
        };
        let objects = match self.enumerate(kind, &ctx, depth) {
            Ok(v) => v,
            Err(e) => {
                report.push(unknown("weq.enumerate", "enumeration", &e, budget));
                return report.finish();
            }
        };
        let width = objects.len().to_string().len().max(3);
        let eso: Vec<Obligation> = objects
            .par_iter()
            .enumerate()
            .map(|(k, ob)| {
                let id = format!("weq.eso.{k:0width$}");
                match self.eso_obligation(ob) {
                    Ok(Some(w)) => Obligation::new(id, "eso", Status::Pass).with_witness(w),
                    Ok(None) => Obligation::new(id, "eso", Status::Fail).with_witness(format!("{ob}")),
                    Err(e) => unknown(&id, "eso", &e, budget),
                }
            })
            .collect();
        for o in eso {
            report.push(o);
        }
        if self.theory() == Theory::Cat {
            for o in self.fullness(depth) {
                report.push(o);
            }
            for o in self.faithfulness(depth) {
                report.push(o);
            }
        }
        report.time("verify_weq_dim0", start.elapsed().as_secs_f64());
        report.finish()
    }

    fn eso_obligation(&self, ob: &Term) -> Result<Option<String>> {
        match self.theory() {
            Theory::Cat => {
                let (b, iso) = self.ess_surj_witness(ob)?;
                let (src, dst) = iso.check_laws(&self.n)?;
                let ok = b.as_gen().is_some() && src == b && dst == self.n.normalize(ob)?;
                Ok(ok.then(|| format!("{ob} ~ {b} via {}", iso.fwd)))
            }
            Theory::Set => {
                // the element's base point, connected to it by a path
                let mut b = self.n.normalize(ob)?;
                while let Node::ExtSet(e) = b.node() {
                    let next = e.base.clone();
                    b = next;
                }
                let space = TruncationSpace { basepoint: b.clone() };
                let cp = center_and_path(&space, &self.n, &DimCtx::empty(), &b, ob)?;
                Ok(cp.cert.passed().then(|| format!("{ob} ~ {b}")))
            }
        }
    }

    /// Every hom between base objects built from at most `depth` atoms
    /// normalizes to a word of base generators.
    fn fullness(&self, depth: usize) -> Vec<Obligation> {
        let budget = self.n.config().budget;
        let homs = match self.enumerate(SortKind::Hom, &DimCtx::empty(), depth) {
            Ok(h) => h,
            Err(e) => return vec![unknown("weq.full", "full", &e, budget)],
        };
        let objs = self.presentation().objects().to_vec();
        let mut out = Vec::new();
        for a in &objs {
            for b in &objs {
                let id = format!("weq.full.{a}.{b}");
                let mut bad = None;
                let mut count = 0;
                for h in homs.iter() {
                    let Ok(Sort::Hom(s, d)) = self.n.sort_of(h) else {
                        continue;
                    };
                    if s.as_gen() != Some(a) || d.as_gen() != Some(b) {
                        continue;
                    }
                    count += 1;
                    let base_word = matches!(h.node(), Node::IdHom(_))
                        || factors(h).iter().all(|f| f.as_gen().is_some());
                    if !base_word {
                        bad = Some(h.clone());
                        break;
                    }
                }
                out.push(match bad {
                    None => Obligation::new(id, "full", Status::Pass).with_witness(format!("{count} homs")),
                    Some(h) => Obligation::new(id, "full", Status::Fail).with_witness(format!("{h}")),
                });
            }
        }
        out
    }

    /// Base words of at most `depth` generators: the completion's normal
    /// form agrees with the base presentation's own reduction.
    fn faithfulness(&self, depth: usize) -> Vec<Obligation> {
        let p = self.presentation();
        let budget = self.n.config().budget;
        let mut words: BTreeMap<(Name, Name), Vec<Vec<Name>>> = BTreeMap::new();
        let mut frontier: Vec<(Name, Name, Vec<Name>)> = Vec::new();
        for h in p.homs() {
            frontier.push((h.src.clone(), h.dst.clone(), vec![h.name.clone()]));
        }
        for _ in 0..depth {
            let mut next = Vec::new();
            for (a, b, w) in &frontier {
                words.entry((a.clone(), b.clone())).or_default().push(w.clone());
                for h in p.homs().iter().filter(|h| &h.src == b) {
                    let mut w2 = vec![h.name.clone()];
                    w2.extend(w.iter().cloned());
                    next.push((a.clone(), h.dst.clone(), w2));
                }
            }
            frontier = next;
        }
        let mut out = Vec::new();
        for a in p.objects() {
            for b in p.objects() {
                let id = format!("weq.faithful.{a}.{b}");
                let ws = words.get(&(a.clone(), b.clone())).cloned().unwrap_or_default();
                let mut verdict = Obligation::new(&id, "faithful", Status::Pass)
                    .with_witness(format!("{} words", ws.len()));
                for w in &ws {
                    let t = Term::comps(w.iter().cloned().map(Term::gen_name).collect()).expect("nonempty");
                    let ours = self.n.normalize(&t).map(|nf| match nf.node() {
                        Node::IdHom(_) => Vec::new(),
                        _ => factors(&nf).iter().map(|f| f.as_gen().cloned()).collect::<Option<Vec<_>>>().unwrap_or_default(),
                    });
                    let theirs = p.reduce_word(w, budget);
                    match (ours, theirs) {
                        (Ok(x), Ok(y)) if x == y => {}
                        (Ok(x), Ok(y)) => {
                            verdict = Obligation::new(&id, "faithful", Status::Fail)
                                .with_witness(format!("{w:?}: completion {x:?}, base {y:?}"));
                            break;
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            verdict = unknown(&id, "faithful", &e, budget);
                            break;
                        }
                    }
                }
                out.push(verdict);
            }
        }
        out
    }

    /// The certificates behind `verify_completeness`, as
    /// `(obligation id, kind, certificate)`.
    pub fn completeness_samples(&self, samples: usize, seed: u64) -> Vec<(String, &'static str, Result<Certificate>)> {
        let width = samples.to_string().len().max(3);
        (0..samples)
            .into_par_iter()
            .flat_map_iter(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
                let tag = format!("{k:0width$}");
                match self.theory() {
                    Theory::Cat => self.cat_sample(&mut rng, &tag),
                    Theory::Set => self.set_sample(&mut rng, &tag),
                }
            })
            .collect()
    }

    /// Seeded samples of the completeness data: extensions with boundary
    /// certificates, paths between extensions, and derived weak composition.
    pub fn verify_completeness(&self, samples: usize, seed: u64) -> Report {
        let start = Instant::now();
        let budget = self.n.config().budget;
        let mut report = Report::new();
        for (id, kind, r) in self.completeness_samples(samples, seed) {
            report.push(match r {
                Ok(cert) if cert.passed() => Obligation::new(id, kind, Status::Pass),
                Ok(cert) => {
                    let w = cert
                        .failures()
                        .next()
                        .map(|e| format!("{} under {}: {} vs {}", e.description, e.context, e.lhs_nf, e.rhs_nf))
                        .unwrap_or_default();
                    Obligation::new(id, kind, Status::Fail).with_witness(w)
                }
                Err(e) if e.is_budget() => Obligation::out_of_budget(id, kind, budget),
                Err(e) => Obligation::new(id, kind, Status::Fail).with_witness(e.to_string()),
            });
        }
        report.time("verify_completeness", start.elapsed().as_secs_f64());
        report.finish()
    }

    fn cat_sample(&self, rng: &mut ChaCha8Rng, tag: &str) -> Vec<(String, &'static str, Result<Certificate>)> {
        let ctx = sample_ctx(rng);
        let s = TermSampler::new(&self.n, 1);
        vec![
            (format!("complete.ext_ob.{tag}"), "ext_ob", self.sample_ext_ob(rng, &s, &ctx)),
            (format!("complete.path.{tag}"), "path", self.sample_path(rng, &s, &ctx)),
            (format!("complete.wcom_ob.{tag}"), "wcom_ob", self.sample_wcom_ob(rng, &s, &ctx)),
            (format!("complete.wcom_hom.{tag}"), "wcom_hom", self.sample_wcom_hom(rng, &s, &ctx)),
        ]
    }

    fn set_sample(&self, rng: &mut ChaCha8Rng, tag: &str) -> Vec<(String, &'static str, Result<Certificate>)> {
        let ctx = sample_ctx(rng);
        let s = TermSampler::new(&self.n, 2);
        vec![
            (format!("complete.path.{tag}"), "path", self.sample_set_path(rng, &s, &ctx)),
            (format!("complete.wcom.{tag}"), "wcom", self.sample_set_wcom(rng, &s, &ctx)),
        ]
    }

    fn random_piece(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx, x: &Term) -> Result<GluePiece> {
        let (ob, fwd, inv) = s.iso_walk(rng, ctx, x, 1, 2)?;
        Ok(GluePiece { ob, fwd, inv })
    }

    fn sample_ext_ob(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx) -> Result<Certificate> {
        let x = s.object(rng, ctx, 1)?;
        let piece = self.random_piece(rng, s, ctx, &x)?;
        let cof = sample::random_face_cof(rng, ctx);
        let pieces = PartialElement::from_cases(&self.n, vec![(cof, piece)])?;
        let (_, _, cert) = self.ext_ob_certified(&x, pieces)?;
        Ok(cert)
    }

    fn sample_path(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx) -> Result<Certificate> {
        let x = self.n.normalize(&s.object(rng, ctx, 1)?)?;
        let space = IsoExtensionSpace { completion: self, base: x.clone() };
        let a = self.random_piece(rng, s, ctx, &x)?;
        let b = self.random_piece(rng, s, ctx, &x)?;
        let cp = center_and_path(&space, &self.n, ctx, &a, &b)?;
        let mut cert = cp.cert;
        // the center extends the empty element: a fresh glue over the base
        let (ob, iso) = (cp.center.ob.clone(), IsoTerm { fwd: cp.center.fwd.clone(), inv: cp.center.inv.clone() });
        let (src, dst) = iso.check_laws(&self.n)?;
        cert.check(&self.n, "center starts at the base", &VarMap::new(), &src, &x)?;
        cert.check(&self.n, "center ends at its object", &VarMap::new(), &dst, &ob)?;
        Ok(cert)
    }

    fn sample_wcom_ob(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx) -> Result<Certificate> {
        let p = sample::random_ob_problem(rng, s, ctx)?;
        let inst = CatObInstance { completion: self };
        Ok(fibrancy_from_prg(&inst, &self.n, &p)?.cert)
    }

    fn sample_wcom_hom(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx) -> Result<Certificate> {
        let (p, x, y) = sample::random_hom_problem(rng, s, ctx)?;
        let inst = CatHomInstance::new(&self.n, &x, &y, &p.dim)?;
        Ok(fibrancy_from_prg(&inst, &self.n, &p)?.cert)
    }

    fn sample_set_path(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx) -> Result<Certificate> {
        let x = self.n.normalize(&s.element(rng, ctx, 2)?)?;
        let y = self.n.normalize(&s.element(rng, ctx, 2)?)?;
        let space = TruncationSpace { basepoint: x.clone() };
        Ok(center_and_path(&space, &self.n, ctx, &x, &y)?.cert)
    }

    fn sample_set_wcom(&self, rng: &mut ChaCha8Rng, s: &TermSampler, ctx: &DimCtx) -> Result<Certificate> {
        let p = sample::random_set_problem(rng, s, ctx)?;
        let direct = wcom_from_ext(&self.n, &p)?;
        let via = fibrancy_from_prg(&crate::kan::SetInstance, &self.n, &p)?;
        let mut cert = direct.cert;
        cert.check(&self.n, "generic construction gives the same filler", &VarMap::new(), &via.filler, &direct.filler)?;
        cert.check(&self.n, "generic construction gives the same path", &VarMap::new(), &via.path, &direct.path)?;
        cert.extend(via.cert);
        Ok(cert)
    }
}

fn unknown(id: &str, kind: &str, e: &Error, budget: usize) -> Obligation {
    if e.is_budget() {
        Obligation::out_of_budget(id, kind, budget)
    } else {
        Obligation::new(id, kind, Status::Unknown).with_witness(e.to_string())
    }
}

/// A random context of at most two dimensions.
fn sample_ctx<R: Rng>(rng: &mut R) -> DimCtx {
    let names: &[&str] = match rng.random_range(0..3) {
        0 => &[],
        1 => &["i"],
        _ => &["i", "j"],
    };
    DimCtx::new(names).expect("distinct")
}

/// A hom or an element as a `(src, dst)`-less arrow of a fragment.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub term: Term,
    pub src: usize,
    pub dst: usize,
    /// Marked invertible (glue isos and base generators with an inverse).
    pub iso: bool,
}

/// A finite piece of the externalized completion.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub depth: usize,
    pub objects: Vec<Term>,
    /// Generating arrows: base hom generators and glue isos.
    pub arrows: Vec<Arrow>,
    /// All enumerated homs.
    pub homs: Vec<Arrow>,
    /// `(g, f) ↦ g ∘ f` by index into `homs`; `None` when the composite
    /// falls outside the fragment.
    pub composition: BTreeMap<(usize, usize), Option<usize>>,
}

impl Fragment {
    pub fn overflow(&self) -> usize {
        self.composition.values().filter(|v| v.is_none()).count()
    }

    /// The objects and generating arrows as a directed graph whose edges are
    /// marked invertible or not.
    pub fn graph(&self) -> petgraph::Graph<(), bool> {
        let mut g = petgraph::Graph::new();
        let nodes: Vec<_> = self.objects.iter().map(|_| g.add_node(())).collect();
        for a in &self.arrows {
            g.add_edge(nodes[a.src], nodes[a.dst], a.iso);
        }
        g
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "depth": self.depth,
            "objects": self.objects.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(|a| serde_json::json!({
                "term": a.term.to_string(), "src": a.src, "dst": a.dst, "iso": a.iso
            })).collect::<Vec<_>>(),
            "homs": self.homs.iter().map(|a| serde_json::json!({
                "term": a.term.to_string(), "src": a.src, "dst": a.dst
            })).collect::<Vec<_>>(),
            "composition": self.composition.iter().map(|((g, f), c)| serde_json::json!([g, f, c])).collect::<Vec<_>>(),
        })
    }
}

/// Iso extensions out of a fixed object: `(y, x ≅ y)` pairs, extended by
/// `ext_ob`.
pub struct IsoExtensionSpace<'a> {
    pub completion: &'a Completion,
    pub base: Term,
}

impl ExtensionSpace for IsoExtensionSpace<'_> {
    type Elem = GluePiece;

    fn extend(&self, _n: &Normalizer, pieces: PartialElement<GluePiece>) -> Result<GluePiece> {
        let (ob, iso) = self.completion.ext_ob(&self.base, pieces)?;
        Ok(iso.into_piece(ob))
    }

    fn components(&self, e: &GluePiece) -> Vec<Term> {
        vec![e.ob.clone(), e.fwd.clone(), e.inv.clone()]
    }
}

/// Weak composition of objects: points are iso extensions of the base,
/// loops are isos that must be identities.
pub struct CatObInstance<'a> {
    pub completion: &'a Completion,
}

fn coerced(n: &Normalizer, line: &Term, dim: &Name, r: &IntervalExpr, s: &IntervalExpr) -> Result<IsoTerm> {
    let line = n.normalize(line)?;
    derive_wcoe_ob(n, &line, dim)?.at(n, r, s)
}

impl PrgInstance for CatObInstance<'_> {
    type Point = GluePiece;
    type Loop = Term;

    fn label(&self) -> &'static str {
        "CAT objects"
    }

    fn coerce(
        &self,
        n: &Normalizer,
        line: &Term,
        dim: &Name,
        r: &IntervalExpr,
        s: &IntervalExpr,
        _cert: &mut Certificate,
    ) -> Result<GluePiece> {
        let iso = coerced(n, line, dim, r, s)?;
        let ob = n.nf_map(line, &VarMap::from([(dim.clone(), s.clone())]))?;
        Ok(iso.into_piece(ob))
    }

    fn coherence(
        &self,
        n: &Normalizer,
        line: &Term,
        dim: &Name,
        r: &IntervalExpr,
        cert: &mut Certificate,
    ) -> Result<Term> {
        let iso = coerced(n, line, dim, r, r)?;
        let x = n.nf_map(line, &VarMap::from([(dim.clone(), r.clone())]))?;
        cert.check(n, "tube coercion r to r is the identity", &VarMap::new(), &iso.fwd, &Term::id(x))?;
        Ok(iso.fwd)
    }

    fn extend_edge(
        &self,
        _n: &Normalizer,
        base: &Term,
        _r: &IntervalExpr,
        _s: &IntervalExpr,
        pieces: PartialElement<GluePiece>,
        cert: &mut Certificate,
    ) -> Result<GluePiece> {
        let (ob, iso, c) = self.completion.ext_ob_certified(base, pieces)?;
        cert.extend(c);
        Ok(iso.into_piece(ob))
    }

    fn extend_loop(
        &self,
        n: &Normalizer,
        base: &Term,
        pieces: PartialElement<Term>,
        cert: &mut Certificate,
    ) -> Result<Term> {
        // the only element is (id, refl); its side condition is that every
        // piece already is the identity
        let id = Term::id(base.clone());
        for (face, d) in pieces.iter() {
            cert.check(n, "loop piece is the identity", face.map(), &id, d)?;
        }
        n.normalize(&id)
    }

    fn loop_point(&self, base: &Term, d: &Term) -> GluePiece {
        GluePiece {
            ob: base.clone(),
            fwd: d.clone(),
            inv: Term::inv(d.clone()),
        }
    }

    fn endpoint(&self, p: &GluePiece) -> Term {
        p.ob.clone()
    }
}

/// Weak composition of homs between two object lines: the edge space over
/// a hom is a proposition, so extensions are unique.
pub struct CatHomInstance {
    src: crate::cat::WCoeStructure,
    dst: crate::cat::WCoeStructure,
}

impl CatHomInstance {
    pub fn new(n: &Normalizer, src_line: &Term, dst_line: &Term, dim: &Name) -> Result<Self> {
        Ok(CatHomInstance {
            src: derive_wcoe_ob(n, &n.normalize(src_line)?, dim)?,
            dst: derive_wcoe_ob(n, &n.normalize(dst_line)?, dim)?,
        })
    }
}

impl PrgInstance for CatHomInstance {
    type Point = Term;
    type Loop = Unit;

    fn label(&self) -> &'static str {
        "CAT homs"
    }

    fn coerce(
        &self,
        n: &Normalizer,
        line: &Term,
        dim: &Name,
        r: &IntervalExpr,
        s: &IntervalExpr,
        cert: &mut Certificate,
    ) -> Result<Term> {
        let Sort::Hom(x, y) = n.sort_of(line)? else {
            return Err(Error::sort(format!("`{line}` is not a hom line")));
        };
        let wx = coerced(n, &x, dim, r, s)?;
        let wy = coerced(n, &y, dim, r, s)?;
        let at = |e: &IntervalExpr| Term::under(line, &VarMap::from([(dim.clone(), e.clone())]));
        cert.check(
            n,
            "tube line commutes with coercion",
            &VarMap::new(),
            &Term::comp(wy.fwd, at(r)),
            &Term::comp(at(s), wx.fwd),
        )?;
        n.normalize(&at(s))
    }

    fn coherence(
        &self,
        _n: &Normalizer,
        _line: &Term,
        _dim: &Name,
        _r: &IntervalExpr,
        _cert: &mut Certificate,
    ) -> Result<Unit> {
        Ok(Unit)
    }

    fn extend_edge(
        &self,
        n: &Normalizer,
        base: &Term,
        r: &IntervalExpr,
        s: &IntervalExpr,
        pieces: PartialElement<Term>,
        cert: &mut Certificate,
    ) -> Result<Term> {
        // the unique element y_e ∘ b ∘ x_e⁻¹
        let x_e = self.src.raw(r, s)?;
        let y_e = self.dst.raw(r, s)?;
        let unique = n.normalize(&Term::comps(vec![y_e.fwd, base.clone(), x_e.inv]).expect("nonempty"))?;
        for (face, p) in pieces.iter() {
            cert.check(n, "hom piece is the unique element", face.map(), &unique, p)?;
        }
        Ok(unique)
    }

    fn extend_loop(
        &self,
        _n: &Normalizer,
        _base: &Term,
        _pieces: PartialElement<Unit>,
        _cert: &mut Certificate,
    ) -> Result<Unit> {
        Ok(Unit)
    }

    fn loop_point(&self, base: &Term, _d: &Unit) -> Term {
        base.clone()
    }

    fn endpoint(&self, p: &Term) -> Term {
        p.clone()
    }
}

/// Check a filling problem's solution through the construction matching
/// the presentation's theory and the problem's sort.
pub fn solve(c: &Completion, p: &FillingProblem) -> Result<crate::kan::Filling> {
    let n = c.normalizer();
    match (c.theory(), n.sort_of(&p.base)?) {
        (Theory::Set, _) => wcom_from_ext(n, p),
        (Theory::Cat, Sort::Ob) => fibrancy_from_prg(&CatObInstance { completion: c }, n, p),
        (Theory::Cat, Sort::Hom(..)) => {
            // the endpoint lines come from any tube face, or the base
            let (x, y) = match p.tube.iter().next() {
                Some((_, t)) if p.tube.dnf().is_top() => match n.sort_of(t)? {
                    Sort::Hom(x, y) => (x, y),
                    _ => return Err(Error::sort("tube is not a hom line")),
                },
                _ => match n.sort_of(&p.base)? {
                    Sort::Hom(x, y) => (x, y),
                    _ => unreachable!(),
                },
            };
            let inst = CatHomInstance::new(n, &x, &y, &p.dim)?;
            fibrancy_from_prg(&inst, n, p)
        }
        (Theory::Cat, Sort::Elt) => Err(Error::sort("elements only exist in SET completions")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_cof, parse_term};
    use crate::terms::library;

    fn iso() -> Completion {
        complete(library::walking_iso())
    }

    #[test]
    fn empty_presentation_has_no_objects() {
        let c = complete(Presentation::empty(Theory::Cat));
        for d in 0..3 {
            assert!(c.enumerate(SortKind::Ob, &DimCtx::empty(), d).unwrap().is_empty());
        }
        let f = c.externalize(2).unwrap();
        assert!(f.objects.is_empty() && f.homs.is_empty());
    }

    #[test]
    fn ext_ob_collapses_on_top() {
        let c = iso();
        let n = c.normalizer();
        let piece = GluePiece { ob: Term::gen("y"), fwd: Term::gen("f"), inv: Term::gen("g") };
        let (ob, i) = c.ext_ob_cases(&Term::gen("x"), vec![(Cof::Top, piece)]).unwrap();
        assert_eq!(ob, Term::gen("y"));
        assert_eq!(i.fwd, Term::gen("f"));
        let (ob, i) = c.ext_ob_cases(&Term::gen("x"), vec![]).unwrap();
        assert_eq!(ob.to_string(), "glue(x, [])");
        i.check_laws(n).unwrap();
    }

    #[test]
    fn ext_ob_boundary_on_face() {
        let c = iso();
        let piece = GluePiece { ob: Term::gen("y"), fwd: Term::gen("f"), inv: Term::gen("g") };
        let pieces = PartialElement::from_cases(c.normalizer(), vec![(parse_cof("(i=0)").unwrap(), piece)]).unwrap();
        let (_, _, cert) = c.ext_ob_certified(&Term::gen("x"), pieces).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.entries.len(), 3);
    }

    #[test]
    fn ext_ob_rejects_non_isos() {
        let c = iso();
        let piece = GluePiece { ob: Term::gen("y"), fwd: Term::gen("f"), inv: Term::gen("f") };
        assert!(c.ext_ob_cases(&Term::gen("x"), vec![(Cof::Top, piece)]).is_err());
    }

    #[test]
    fn ext_hom_is_unique() {
        let c = iso();
        let n = c.normalizer();
        let f = Term::gen("f");
        assert_eq!(c.ext_hom(&f, vec![]).unwrap(), f);
        let padded = parse_term("comp(f, id(x))", n).unwrap();
        assert_eq!(c.ext_hom(&f, vec![(Cof::Top, padded)]).unwrap(), f);
        let other = parse_term("comp(f, comp(g, f))", n).unwrap();
        assert_eq!(c.ext_hom(&f, vec![(Cof::Top, other)]).unwrap(), f);
        let wrong = parse_term("comp(gluefwd(y, []), f)", n).unwrap();
        let err = c.ext_hom(&f, vec![(parse_cof("(i=0)").unwrap(), wrong)]).unwrap_err();
        assert!(matches!(err, Error::NonPropositionalPiece { .. }));
    }

    #[test]
    fn witnesses() {
        let c = iso();
        let n = c.normalizer();
        let (b, i) = c.ess_surj_witness(&Term::gen("x")).unwrap();
        assert_eq!(b, Term::gen("x"));
        assert_eq!(i.fwd, Term::id(Term::gen("x")));
        let g2 = parse_term("glue(glue(x, []), [])", n).unwrap();
        let (b, i) = c.ess_surj_witness(&g2).unwrap();
        assert_eq!(b, Term::gen("x"));
        assert_eq!(i.check_laws(n).unwrap(), (Term::gen("x"), n.normalize(&g2).unwrap()));
    }

    #[test]
    fn walking_iso_depth_one_fragment() {
        let c = iso();
        let f = c.externalize(1).unwrap();
        assert_eq!(f.objects.len(), 4);
        let n = c.normalizer();
        for a in &f.objects {
            for b in &f.objects {
                let (xa, ia) = c.ess_surj_witness(a).unwrap();
                let (xb, ib) = c.ess_surj_witness(b).unwrap();
                // a ≅ xa ≅ xb ≅ b
                let mid = if xa == xb { Term::id(xa.clone()) } else if xa == Term::gen("x") { Term::gen("f") } else { Term::gen("g") };
                let h = Term::comps(vec![ib.fwd.clone(), mid, ia.inv.clone()]).unwrap();
                assert!(n.sort_of(&h).is_ok());
            }
        }
    }

    #[test]
    fn weq_small() {
        for p in [library::walking_iso(), library::walking_arrow(), library::discrete2()] {
            let c = complete(p);
            let r = c.verify_weq_dim0(2);
            assert!(r.all_pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn completeness_small() {
        let r = iso().verify_completeness(6, 3);
        assert!(r.all_pass(), "{}", r.to_text());
        let r = complete(library::truncation(&["a", "b"])).verify_completeness(6, 3);
        assert!(r.all_pass(), "{}", r.to_text());
    }
}
