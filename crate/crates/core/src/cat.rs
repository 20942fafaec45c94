//! Category-level structure: isomorphisms, weak coercions along lines, and
//! bounded checks of the split classes of functors between presentations.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::cert::Certificate;
use crate::cube::{name, DimCtx, IntervalExpr, Name, VarMap};
use crate::error::{Error, Result};
use crate::report::{Obligation, Report, Status};
use crate::terms::{GluePiece, HomGen, Node, Normalizer, Presentation, Rule, Sort, Term, Theory};

/// An isomorphism given by both directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsoTerm {
    pub fwd: Term,
    pub inv: Term,
}

impl IsoTerm {
    pub fn identity(x: &Term) -> Self {
        IsoTerm {
            fwd: Term::id(x.clone()),
            inv: Term::id(x.clone()),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &IsoTerm) -> Self {
        IsoTerm {
            fwd: Term::comp(next.fwd.clone(), self.fwd.clone()),
            inv: Term::comp(self.inv.clone(), next.inv.clone()),
        }
    }

    pub fn inverse(&self) -> Self {
        IsoTerm {
            fwd: self.inv.clone(),
            inv: self.fwd.clone(),
        }
    }

    pub fn normalize(&self, n: &Normalizer) -> Result<Self> {
        Ok(IsoTerm {
            fwd: n.normalize(&self.fwd)?,
            inv: n.normalize(&self.inv)?,
        })
    }

    pub fn under(&self, m: &VarMap) -> Self {
        IsoTerm {
            fwd: Term::under(&self.fwd, m),
            inv: Term::under(&self.inv, m),
        }
    }

    /// `(src, dst)` after checking both composites are identities.
    pub fn check_laws(&self, n: &Normalizer) -> Result<(Term, Term)> {
        let Sort::Hom(x, y) = n.sort_of(&self.fwd)? else {
            return Err(Error::sort(format!("`{}` is not a hom", self.fwd)));
        };
        if n.sort_of(&self.inv)? != Sort::Hom(y.clone(), x.clone()) {
            return Err(Error::sort(format!("`{}` is not a hom {y} -> {x}", self.inv)));
        }
        let left = Term::comp(self.inv.clone(), self.fwd.clone());
        let right = Term::comp(self.fwd.clone(), self.inv.clone());
        if !n.eq_terms(&left, &Term::id(x.clone()))? || !n.eq_terms(&right, &Term::id(y.clone()))? {
            return Err(Error::NotInvertible(self.fwd.to_string()));
        }
        Ok((x, y))
    }

    pub fn into_piece(self, ob: Term) -> GluePiece {
        GluePiece {
            ob,
            fwd: self.fwd,
            inv: self.inv,
        }
    }
}

/// `y_e ∘ f₁ = f₂ ∘ x_e`: the condition for `(f₁, f₂)` to be a hom of the
/// path category over the isos `x_e` and `y_e`.
pub fn commuting_square(n: &Normalizer, x_e: &Term, y_e: &Term, f1: &Term, f2: &Term) -> Result<bool> {
    n.eq_terms(
        &Term::comp(y_e.clone(), f1.clone()),
        &Term::comp(f2.clone(), x_e.clone()),
    )
}

/// The weak coercion structure of an object line, derived by recursion on
/// its normal form.
#[derive(Clone, Debug)]
pub struct WCoeStructure {
    line: Term,
    dim: Name,
}

pub fn derive_wcoe_ob(n: &Normalizer, line: &Term, dim: &Name) -> Result<WCoeStructure> {
    if n.sort_of(line)? != Sort::Ob {
        return Err(Error::sort(format!("`{line}` is not an object line")));
    }
    let nf = n.normalize(line)?;
    if &nf != line {
        return Err(Error::validation(format!("`{line}` is not in normal form")));
    }
    Ok(WCoeStructure {
        line: nf,
        dim: dim.clone(),
    })
}

fn at(dim: &Name, e: &IntervalExpr) -> VarMap {
    VarMap::from([(dim.clone(), e.clone())])
}

impl WCoeStructure {
    pub fn line(&self) -> &Term {
        &self.line
    }

    pub fn dim(&self) -> &Name {
        &self.dim
    }

    /// The line at level `e`, unnormalized.
    pub fn endpoint(&self, e: &IntervalExpr) -> Term {
        Term::under(&self.line, &at(&self.dim, e))
    }

    /// `wcoe^{r→s}` as unnormalized terms.
    pub fn raw(&self, r: &IntervalExpr, s: &IntervalExpr) -> Result<IsoTerm> {
        raw_wcoe(&self.line, &self.dim, r, s)
    }

    pub fn at(&self, n: &Normalizer, r: &IntervalExpr, s: &IntervalExpr) -> Result<IsoTerm> {
        self.raw(r, s)?.normalize(n)
    }

    /// Coherence, iso laws and restriction to glue pieces, at levels drawn
    /// from {0, 1, a generic variable}. `ctx` is the line's context.
    pub fn certify(&self, n: &Normalizer, ctx: &DimCtx) -> Result<Certificate> {
        let mut cert = Certificate::new();
        let levels = generic_levels(ctx, &self.dim);
        let none = VarMap::new();
        for r in &levels.0 {
            let c = self.raw(r, r)?;
            cert.check(n, "coherence: wcoe r to r is the identity", &none, &c.fwd, &Term::id(self.endpoint(r)))?;
            for s in &levels.1 {
                let w = self.raw(r, s)?;
                let x = self.endpoint(r);
                let y = self.endpoint(s);
                cert.check(n, "wcoe inverse after forward", &none, &Term::comp(w.inv.clone(), w.fwd.clone()), &Term::id(x))?;
                cert.check(n, "wcoe forward after inverse", &none, &Term::comp(w.fwd.clone(), w.inv.clone()), &Term::id(y))?;
            }
        }
        restriction_entries(n, &self.line, &self.dim, &levels, &mut cert)?;
        Ok(cert)
    }
}

/// Levels to instantiate `r` and `s` with: both endpoints and a fresh name
/// for each.
fn generic_levels(ctx: &DimCtx, dim: &Name) -> (Vec<IntervalExpr>, Vec<IntervalExpr>) {
    let avoid = BTreeSet::from([dim.clone()]);
    let r = ctx.fresh("r", &avoid);
    let mut avoid = avoid;
    avoid.insert(r.clone());
    let s = ctx.fresh("s", &avoid);
    (
        vec![IntervalExpr::Zero, IntervalExpr::One, IntervalExpr::Var(r)],
        vec![IntervalExpr::Zero, IntervalExpr::One, IntervalExpr::Var(s)],
    )
}

fn raw_wcoe(line: &Term, dim: &Name, r: &IntervalExpr, s: &IntervalExpr) -> Result<IsoTerm> {
    match line.node() {
        Node::Gen(_) => Ok(IsoTerm::identity(line)),
        Node::GlueOb(g) => {
            let inner = raw_wcoe(&g.base, dim, r, s)?;
            let fwd = Term::glue_fwd(g.clone());
            let g_r = Term::under(&fwd, &at(dim, r));
            let g_s = Term::under(&fwd, &at(dim, s));
            Ok(IsoTerm {
                fwd: Term::comps(vec![g_s.clone(), inner.fwd, Term::inv(g_r.clone())]).expect("nonempty"),
                inv: Term::comps(vec![g_r, inner.inv, Term::inv(g_s)]).expect("nonempty"),
            })
        }
        _ => Err(Error::sort(format!("no coercion for `{line}`: not a normal object"))),
    }
}

/// Under each glue face that does not mention the line dimension, the
/// glue's coercion must be the coercion derived for the piece.
fn restriction_entries(
    n: &Normalizer,
    line: &Term,
    dim: &Name,
    levels: &(Vec<IntervalExpr>, Vec<IntervalExpr>),
    cert: &mut Certificate,
) -> Result<()> {
    let Node::GlueOb(g) = line.node() else {
        return Ok(());
    };
    for (face, piece) in g.pieces.iter() {
        if face.mentions(dim) {
            cert.note("faces mentioning the line dimension are skipped by the restriction check");
            continue;
        }
        for r in &levels.0 {
            for s in &levels.1 {
                let whole = raw_wcoe(line, dim, r, s)?;
                let part = raw_wcoe(&piece.ob, dim, r, s)?;
                cert.check(n, "coercion restricts to the piece's coercion", face.map(), &whole.fwd, &part.fwd)?;
            }
        }
        restriction_entries(n, &piece.ob, dim, levels, cert)?;
    }
    restriction_entries(n, &g.base, dim, levels, cert)
}

/// Check `wcoe_Y ∘ f(r) = f(s) ∘ wcoe_X` for a hom line `f : X → Y`, for the
/// whole line and for each factor of its normal form.
pub fn derive_wcoe_hom(n: &Normalizer, line: &Term, dim: &Name, ctx: &DimCtx) -> Result<Certificate> {
    let nf = n.normalize(line)?;
    let mut cert = Certificate::new();
    let levels = generic_levels(ctx, dim);
    let mut pieces = vec![("line", nf.clone())];
    if matches!(nf.node(), Node::Comp(..)) {
        pieces.extend(crate::terms::factors(&nf).into_iter().map(|f| ("factor", f)));
    }
    for (label, f) in pieces {
        let Sort::Hom(x, y) = n.sort_of(&f)? else {
            return Err(Error::sort(format!("`{f}` is not a hom line")));
        };
        let wx = derive_wcoe_ob(n, &x, dim)?;
        let wy = derive_wcoe_ob(n, &y, dim)?;
        for r in &levels.0 {
            for s in &levels.1 {
                let lhs = Term::comp(wy.raw(r, s)?.fwd, Term::under(&f, &at(dim, r)));
                let rhs = Term::comp(Term::under(&f, &at(dim, s)), wx.raw(r, s)?.fwd);
                cert.check(n, format!("{label} commutes with coercion"), &VarMap::new(), &lhs, &rhs)?;
            }
        }
    }
    Ok(cert)
}

/// A functor between presentations, given on generators.
#[derive(Clone, Debug)]
pub struct Functor {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    objects: BTreeMap<Name, Name>,
    homs: BTreeMap<Name, Vec<Name>>,
}

impl Functor {
    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        objects: BTreeMap<Name, Name>,
        homs: BTreeMap<Name, Vec<Name>>,
    ) -> Result<Self> {
        if source.theory() != Theory::Cat || target.theory() != Theory::Cat {
            return Err(Error::validation("functors are between CAT presentations"));
        }
        for x in source.objects() {
            let y = objects
                .get(x)
                .ok_or_else(|| Error::validation(format!("object `{x}` is not mapped")))?;
            if !target.is_object(y) {
                return Err(Error::validation(format!("`{y}` is not a target object")));
            }
        }
        if let Some(k) = objects.keys().find(|k| !source.is_object(k)) {
            return Err(Error::validation(format!("`{k}` is not a source object")));
        }
        for h in source.homs() {
            let w = homs
                .get(&h.name)
                .ok_or_else(|| Error::validation(format!("hom `{}` is not mapped", h.name)))?;
            let (fs, fd) = (&objects[&h.src], &objects[&h.dst]);
            if w.is_empty() {
                if fs != fd {
                    return Err(Error::validation(format!(
                        "`{}` maps to an identity but {fs} != {fd}",
                        h.name
                    )));
                }
            } else if target.word_endpoints(w)? != (fs.clone(), fd.clone()) {
                return Err(Error::validation(format!("image of `{}` is not a hom {fs} -> {fd}", h.name)));
            }
        }
        if let Some(k) = homs.keys().find(|k| source.hom(k).is_none()) {
            return Err(Error::validation(format!("`{k}` is not a source hom")));
        }
        let f = Functor {
            source,
            target,
            objects,
            homs,
        };
        let budget = crate::terms::normalize::budget_from_env();
        for r in f.source.rules() {
            let l = f.target.reduce_word(&f.map_word(&r.lhs), budget)?;
            let rr = f.target.reduce_word(&f.map_word(&r.rhs), budget)?;
            if l != rr {
                return Err(Error::validation(format!("the rule {r} is not respected")));
            }
        }
        Ok(f)
    }

    /// The identity functor.
    pub fn identity(p: Arc<Presentation>) -> Result<Self> {
        let objects = p.objects().iter().map(|x| (x.clone(), x.clone())).collect();
        let homs = p.homs().iter().map(|h| (h.name.clone(), vec![h.name.clone()])).collect();
        Functor::new(p.clone(), p, objects, homs)
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn object(&self, x: &Name) -> &Name {
        &self.objects[x]
    }

    /// The image of a word, unreduced.
    pub fn map_word(&self, w: &[Name]) -> Vec<Name> {
        w.iter().flat_map(|h| self.homs[h].iter().cloned()).collect()
    }
}

type HomSets = BTreeMap<(Name, Name), BTreeSet<Vec<Name>>>;

/// Reduced words of at most `depth` generators, grouped by endpoints.
fn hom_sets(p: &Presentation, depth: usize, budget: usize) -> Result<HomSets> {
    let mut out: HomSets = BTreeMap::new();
    let mut frontier: Vec<(Name, Name, Vec<Name>)> = Vec::new();
    for x in p.objects() {
        out.entry((x.clone(), x.clone())).or_default().insert(Vec::new());
        frontier.push((x.clone(), x.clone(), Vec::new()));
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for (a, b, w) in &frontier {
            for h in p.homs().iter().filter(|h| &h.src == b) {
                let mut word = vec![h.name.clone()];
                word.extend(w.iter().cloned());
                let nf = p.reduce_word(&word, budget)?;
                out.entry((a.clone(), h.dst.clone())).or_default().insert(nf);
                next.push((a.clone(), h.dst.clone(), word));
            }
        }
        frontier = next;
    }
    Ok(out)
}

fn show_word(w: &[Name], obj: &Name) -> String {
    if w.is_empty() {
        format!("id_{obj}")
    } else {
        w.iter().map(|n| &**n).collect::<Vec<_>>().join(".")
    }
}

fn compose(p: &Presentation, outer: &[Name], inner: &[Name], budget: usize) -> Result<Vec<Name>> {
    let mut w = outer.to_vec();
    w.extend(inner.iter().cloned());
    p.reduce_word(&w, budget)
}

/// Isos `a ≅ b` found among words of bounded length, as `(fwd, inv)`.
fn isos(p: &Presentation, hs: &HomSets, a: &Name, b: &Name, budget: usize) -> Result<Vec<(Vec<Name>, Vec<Name>)>> {
    let empty = BTreeSet::new();
    let ab = hs.get(&(a.clone(), b.clone())).unwrap_or(&empty);
    let ba = hs.get(&(b.clone(), a.clone())).unwrap_or(&empty);
    let mut out = Vec::new();
    for u in ab {
        for v in ba {
            if compose(p, v, u, budget)?.is_empty() && compose(p, u, v, budget)?.is_empty() {
                out.push((u.clone(), v.clone()));
                break;
            }
        }
    }
    Ok(out)
}

struct Searcher<'a> {
    f: &'a Functor,
    budget: usize,
    src: HomSets,
    tgt: HomSets,
    src_saturated: bool,
    tgt_saturated: bool,
}

impl Searcher<'_> {
    fn image(&self, w: &[Name]) -> Result<Vec<Name>> {
        self.f.target.reduce_word(&self.f.map_word(w), self.budget)
    }

    fn missing(saturated: bool) -> Status {
        if saturated {
            Status::Fail
        } else {
            Status::Unknown
        }
    }

    fn eso(&self, y: &Name) -> Result<Obligation> {
        for x in self.f.source.objects() {
            let fx = self.f.object(x);
            if let Some((u, _)) = isos(&self.f.target, &self.tgt, fx, y, self.budget)?.first() {
                return Ok(Obligation::new(format!("weq.eso.{y}"), "eso", Status::Pass)
                    .with_witness(format!("F({x}) = {fx} ~ {y} via {}", show_word(u, fx))));
            }
        }
        Ok(Obligation::new(format!("weq.eso.{y}"), "eso", Self::missing(self.tgt_saturated))
            .with_witness("no object maps isomorphically onto it"))
    }

    fn full(&self, prefix: &str, a: &Name, b: &Name) -> Result<Obligation> {
        let id = format!("{prefix}.full.{a}.{b}");
        let (fa, fb) = (self.f.object(a), self.f.object(b));
        let empty = BTreeSet::new();
        let images: BTreeSet<Vec<Name>> = self
            .src
            .get(&(a.clone(), b.clone()))
            .unwrap_or(&empty)
            .iter()
            .map(|w| self.image(w))
            .collect::<Result<_>>()?;
        for h in self.tgt.get(&(fa.clone(), fb.clone())).unwrap_or(&empty) {
            if !images.contains(h) {
                return Ok(Obligation::new(id, "full", Self::missing(self.src_saturated))
                    .with_witness(format!("no preimage for {}", show_word(h, fa))));
            }
        }
        Ok(Obligation::new(id, "full", Status::Pass))
    }

    fn faithful(&self, prefix: &str, kind: &str, a: &Name, b: &Name) -> Result<Obligation> {
        let id = format!("{prefix}.{kind}.{a}.{b}");
        let mut seen: BTreeMap<Vec<Name>, &Vec<Name>> = BTreeMap::new();
        if let Some(ws) = self.src.get(&(a.clone(), b.clone())) {
            for w in ws {
                let img = self.image(w)?;
                if let Some(other) = seen.insert(img.clone(), w) {
                    return Ok(Obligation::new(id, kind, Status::Fail).with_witness(format!(
                        "{} and {} both map to {}",
                        show_word(other, a),
                        show_word(w, a),
                        show_word(&img, self.f.object(a))
                    )));
                }
            }
        }
        Ok(Obligation::new(id, kind, Status::Pass))
    }

    fn surj(&self, y: &Name) -> Obligation {
        let id = format!("tfib.surj.{y}");
        match self.f.source.objects().iter().find(|x| self.f.object(x) == y) {
            Some(x) => Obligation::new(id, "surj", Status::Pass).with_witness(format!("F({x})")),
            None => Obligation::new(id, "surj", Status::Fail).with_witness("not in the image"),
        }
    }

    fn lifts(&self, a: &Name, y: &Name) -> Result<Vec<Obligation>> {
        let fa = self.f.object(a);
        let mut out = Vec::new();
        for (e, _) in isos(&self.f.target, &self.tgt, fa, y, self.budget)? {
            let id = format!("fib.lift.{a}.{}", show_word(&e, fa));
            let mut found = None;
            for a2 in self.f.source.objects().iter().filter(|a2| self.f.object(a2) == y) {
                for (e2, _) in isos(&self.f.source, &self.src, a, a2, self.budget)? {
                    if self.image(&e2)? == e {
                        found = Some(format!("{} : {a} -> {a2}", show_word(&e2, a)));
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            out.push(match found {
                Some(w) => Obligation::new(id, "iso-lift", Status::Pass).with_witness(w),
                None => Obligation::new(id, "iso-lift", Self::missing(self.src_saturated))
                    .with_witness("no source iso maps onto it"),
            });
        }
        Ok(out)
    }
}

/// Bounded dimension-0 check of the split weak equivalence, split trivial
/// fibration and split fibration conditions.
///
/// A missing witness is a failure when the relevant hom sets are saturated
/// (words one generator longer add no new normal forms), and unknown
/// otherwise.
pub fn check_split_classes(f: &Functor, depth: usize) -> Report {
    let budget = crate::terms::normalize::budget_from_env();
    check_split_classes_with(f, depth, budget)
}

pub fn check_split_classes_with(f: &Functor, depth: usize, budget: usize) -> Report {
    let start = std::time::Instant::now();
    let mut report = Report::new();
    let sets = (|| -> Result<_> {
        let src = hom_sets(&f.source, depth, budget)?;
        let tgt = hom_sets(&f.target, depth, budget)?;
        let src_saturated = hom_sets(&f.source, depth + 1, budget)? == src;
        let tgt_saturated = hom_sets(&f.target, depth + 1, budget)? == tgt;
        Ok((src, tgt, src_saturated, tgt_saturated))
    })();
    let (src, tgt, src_saturated, tgt_saturated) = match sets {
        Ok(v) => v,
        Err(e) if e.is_budget() => {
            report.push(Obligation::out_of_budget("hom-sets", "enumeration", budget));
            return report.finish();
        }
        Err(e) => {
            report.push(Obligation::new("hom-sets", "enumeration", Status::Unknown).with_witness(e.to_string()));
            return report.finish();
        }
    };
    let s = Searcher {
        f,
        budget,
        src,
        tgt,
        src_saturated,
        tgt_saturated,
    };
    let objs = f.source.objects();
    let pairs: Vec<(Name, Name)> = objs
        .iter()
        .flat_map(|a| objs.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let guard = |id: String, kind: &str, r: Result<Vec<Obligation>>| -> Vec<Obligation> {
        match r {
            Ok(v) => v,
            Err(e) if e.is_budget() => vec![Obligation::out_of_budget(id, kind, budget)],
            Err(e) => vec![Obligation::new(id, kind, Status::Unknown).with_witness(e.to_string())],
        }
    };
    let mut obligations: Vec<Obligation> = pairs
        .par_iter()
        .flat_map_iter(|(a, b)| {
            let mut v = Vec::new();
            for prefix in ["weq", "tfib"] {
                v.extend(guard(format!("{prefix}.full.{a}.{b}"), "full", s.full(prefix, a, b).map(|o| vec![o])));
            }
            v.extend(guard(format!("weq.faithful.{a}.{b}"), "faithful", s.faithful("weq", "faithful", a, b).map(|o| vec![o])));
            v.extend(guard(format!("tfib.eqhom.{a}.{b}"), "eqhom", s.faithful("tfib", "eqhom", a, b).map(|o| vec![o])));
            v
        })
        .collect();
    let targets = f.target.objects();
    obligations.extend(targets.par_iter().flat_map_iter(|y| {
        let mut v = guard(format!("weq.eso.{y}"), "eso", s.eso(y).map(|o| vec![o]));
        v.push(s.surj(y));
        v
    }).collect::<Vec<_>>());
    let lift_pairs: Vec<(Name, Name)> = objs
        .iter()
        .flat_map(|a| targets.iter().map(move |y| (a.clone(), y.clone())))
        .collect();
    obligations.extend(
        lift_pairs
            .par_iter()
            .flat_map_iter(|(a, y)| guard(format!("fib.lift.{a}.{y}"), "iso-lift", s.lifts(a, y)))
            .collect::<Vec<_>>(),
    );
    for o in obligations {
        report.push(o);
    }
    report.time("check_split_classes", start.elapsed().as_secs_f64());
    report.finish()
}

/// The reflexive-loop presentation of `c` and its projection to `c`.
///
/// An object `rl_x` is an object `x` with a loop `x_e` and a proof that
/// `x_e = id`; loops are searched among isos of length up to `depth` and
/// kept only when the proof exists, so only the identity survives. A hom
/// `rl_f` is `f` with the commuting square between the trivial loops.
pub fn refl_loop_projection(c: Arc<Presentation>, depth: usize) -> Result<Functor> {
    refl_loop_projection_with(c, depth, crate::terms::normalize::budget_from_env())
}

/// [`refl_loop_projection`] with an explicit step budget.
pub fn refl_loop_projection_with(c: Arc<Presentation>, depth: usize, budget: usize) -> Result<Functor> {
    let hs = hom_sets(&c, depth, budget)?;
    let rl = |n: &Name| name(&format!("rl_{n}"));
    let mut objects = Vec::new();
    let mut ob_map = BTreeMap::new();
    for x in c.objects() {
        for (loop_word, _) in isos(&c, &hs, x, x, budget)? {
            if c.reduce_word(&loop_word, budget)?.is_empty() {
                objects.push(rl(x));
                ob_map.insert(rl(x), x.clone());
            }
        }
    }
    let mut homs = Vec::new();
    let mut hom_map = BTreeMap::new();
    for h in c.homs() {
        // the square id ∘ f = f ∘ id holds by reduction
        homs.push(HomGen {
            name: rl(&h.name),
            src: rl(&h.src),
            dst: rl(&h.dst),
        });
        hom_map.insert(rl(&h.name), vec![h.name.clone()]);
    }
    let rules = c
        .rules()
        .iter()
        .map(|r| Rule {
            lhs: r.lhs.iter().map(rl).collect(),
            rhs: r.rhs.iter().map(rl).collect(),
            src: rl(&r.src),
            dst: rl(&r.dst),
        })
        .collect();
    let source = Presentation::new(Theory::Cat, objects, homs, rules)?;
    Functor::new(Arc::new(source), c, ob_map, hom_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cofib::Cof;
    use crate::syntax::parse_term;
    use crate::terms::library;

    fn iso_n() -> Normalizer {
        Normalizer::new(Arc::new(library::walking_iso()))
    }

    #[test]
    fn constant_line_has_identity_coercion() {
        let n = iso_n();
        let w = derive_wcoe_ob(&n, &Term::gen("x"), &name("z")).unwrap();
        let c = w.at(&n, &IntervalExpr::Zero, &IntervalExpr::One).unwrap();
        assert_eq!(c.fwd, Term::id(Term::gen("x")));
        let cert = w.certify(&n, &DimCtx::new(["z"]).unwrap()).unwrap();
        assert!(cert.passed());
    }

    #[test]
    fn glue_line_coercion() {
        let n = iso_n();
        let line = parse_term("glue(x, [(z=0) |-> (y, f, g)])", &n).unwrap();
        let line = n.normalize(&line).unwrap();
        let w = derive_wcoe_ob(&n, &line, &name("z")).unwrap();
        let c = w.at(&n, &IntervalExpr::Zero, &IntervalExpr::One).unwrap();
        // g(1) ∘ id ∘ g(0)⁻¹ with g(0) = f
        let g1 = n
            .nf_map(&Term::glue_fwd(match line.node() {
                Node::GlueOb(g) => g.clone(),
                _ => unreachable!(),
            }), &at(&name("z"), &IntervalExpr::One))
            .unwrap();
        let want = n.normalize(&Term::comp(g1, Term::gen("g"))).unwrap();
        assert_eq!(c.fwd, want);
        let cert = w.certify(&n, &DimCtx::new(["z"]).unwrap()).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
    }

    #[test]
    fn glue_off_line_restricts_to_piece() {
        let n = iso_n();
        let line = parse_term("glue(x, [(i=0) |-> (y, f, g)])", &n).unwrap();
        let line = n.normalize(&line).unwrap();
        let w = derive_wcoe_ob(&n, &line, &name("z")).unwrap();
        let cert = w.certify(&n, &DimCtx::new(["i", "z"]).unwrap()).unwrap();
        assert!(cert.passed());
        assert!(cert.entries.iter().any(|e| e.description.contains("restricts")));
    }

    #[test]
    fn hom_lines_commute() {
        let n = iso_n();
        let ctx = DimCtx::new(["z"]).unwrap();
        for src in ["id(x)", "f", "comp(g, f)", "gluefwd(x, [(z=0) |-> (y, f, g)])"] {
            let t = parse_term(src, &n).unwrap();
            let cert = derive_wcoe_hom(&n, &t, &name("z"), &ctx).unwrap();
            assert!(cert.passed(), "{src}");
        }
    }

    #[test]
    fn non_normal_line_rejected() {
        let n = iso_n();
        let t = Term::restrict(Term::gen("x"), crate::cube::Substitution::identity(&DimCtx::empty()));
        assert!(derive_wcoe_ob(&n, &t, &name("z")).is_err());
        let _ = Cof::Top;
    }

    #[test]
    fn identity_functor_passes() {
        let f = Functor::identity(Arc::new(library::walking_iso())).unwrap();
        for d in 1..=3 {
            let r = check_split_classes(&f, d);
            assert!(r.all_pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn arrow_into_iso_is_not_full() {
        let objects = [("x", "x"), ("y", "y")].iter().map(|(a, b)| (name(a), name(b))).collect();
        let homs = BTreeMap::from([(name("f"), vec![name("f")])]);
        let f = Functor::new(
            Arc::new(library::walking_arrow()),
            Arc::new(library::walking_iso()),
            objects,
            homs,
        )
        .unwrap();
        let r = check_split_classes(&f, 3);
        assert_eq!(r.get("weq.full.y.x").unwrap().status, Status::Fail);
        assert_eq!(r.get("weq.full.x.y").unwrap().status, Status::Pass);
        assert_eq!(r.get("weq.faithful.x.y").unwrap().status, Status::Pass);
        assert_eq!(r.get("weq.eso.y").unwrap().status, Status::Pass);
    }

    #[test]
    fn refl_loop_projection_is_trivial_fibration() {
        let pi = refl_loop_projection(Arc::new(library::walking_iso()), 3).unwrap();
        let r = check_split_classes(&pi, 3);
        assert!(r.obligations.iter().filter(|o| o.id.starts_with("tfib")).all(|o| o.status == Status::Pass));
    }

    #[test]
    fn functor_validation() {
        let objects: BTreeMap<Name, Name> = [("x", "x"), ("y", "x")].iter().map(|(a, b)| (name(a), name(b))).collect();
        let homs = BTreeMap::from([(name("f"), vec![name("f")])]);
        let err = Functor::new(
            Arc::new(library::walking_arrow()),
            Arc::new(library::walking_iso()),
            objects,
            homs,
        );
        assert!(err.is_err());
    }
}
