//! The rewrite engine.
//!
//! Restrictions are pushed to the leaves as a pending variable map, glue and
//! ext nodes collapse when their cofibration becomes ⊤, and homs are
//! flattened into words of atoms which are then reduced by inverse
//! cancellation and the presentation's rules.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{then, Name, Substitution, VarMap};
use crate::error::{Error, Result};
use crate::terms::partial::{Payload, PartialElement};
use crate::terms::presentation::{Presentation, Theory};
use crate::terms::term::{Ext, Glue, GluePiece, Node, Sort, Term};

pub const DEFAULT_STEP_BUDGET: usize = 100_000;

/// The step budget, overridable through `RF_STEP_BUDGET`.
pub fn budget_from_env() -> usize {
    std::env::var("RF_STEP_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_STEP_BUDGET)
}

/// Which redex of a word to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct Config {
    pub strategy: Strategy,
    /// Test for a decided cofibration before normalizing a node's base.
    pub eager_collapse: bool,
    /// Rewrite steps allowed per top-level call.
    pub budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            strategy: Strategy::Leftmost,
            eager_collapse: true,
            budget: budget_from_env(),
        }
    }
}

/// Per-call bookkeeping: step count and, for seeded strategies, the RNG.
pub struct Run {
    steps: usize,
    budget: usize,
    rng: Option<ChaCha8Rng>,
}

impl Run {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Atom {
    Gen(Name),
    /// A glue iso, inverted when the flag is set.
    Glue(Arc<Glue>, bool),
}

struct HomNf {
    word: Vec<Atom>,
    src: Term,
    dst: Term,
}

enum Collapse<P> {
    Done(P),
    Node(Term, PartialElement<P>),
}

#[derive(Clone, Debug)]
pub struct Normalizer {
    pres: Arc<Presentation>,
    config: Config,
}

impl Normalizer {
    pub fn new(pres: Arc<Presentation>) -> Self {
        Normalizer {
            pres,
            config: Config::default(),
        }
    }

    pub fn with_config(pres: Arc<Presentation>, config: Config) -> Self {
        Normalizer { pres, config }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn shared_presentation(&self) -> Arc<Presentation> {
        self.pres.clone()
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn run(&self) -> Run {
        let rng = match self.config.strategy {
            Strategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Run {
            steps: 0,
            budget: self.config.budget,
            rng,
        }
    }

    pub fn normalize(&self, t: &Term) -> Result<Term> {
        self.nf_in(t, &VarMap::new(), &mut self.run())
    }

    /// Normal form of `t` restricted along a raw variable map.
    pub fn nf_map(&self, t: &Term, m: &VarMap) -> Result<Term> {
        self.nf_in(t, m, &mut self.run())
    }

    /// Normal form of `t[f]`.
    pub fn restrict_nf(&self, t: &Term, f: &Substitution) -> Result<Term> {
        self.nf_map(t, f.map())
    }

    pub fn eq_terms(&self, a: &Term, b: &Term) -> Result<bool> {
        Ok(self.normalize(a)? == self.normalize(b)?)
    }

    pub fn sort_of(&self, t: &Term) -> Result<Sort> {
        self.sort_in(t, &VarMap::new(), &mut self.run())
    }

    fn base_sort(&self) -> Sort {
        match self.pres.theory() {
            Theory::Set => Sort::Elt,
            Theory::Cat => Sort::Ob,
        }
    }

    fn sort_in(&self, t: &Term, m: &VarMap, run: &mut Run) -> Result<Sort> {
        match t.node() {
            Node::Restrict(s, f) => self.sort_in(s, &then(f.map(), m), run),
            Node::Gen(n) if self.pres.is_object(n) => Ok(self.base_sort()),
            Node::GlueOb(_) => Ok(Sort::Ob),
            Node::ExtSet(_) => Ok(Sort::Elt),
            _ => {
                let h = self.hom_in(t, m, false, run)?;
                Ok(Sort::Hom(h.src, h.dst))
            }
        }
    }

    pub(crate) fn nf_in(&self, t: &Term, m: &VarMap, run: &mut Run) -> Result<Term> {
        match t.node() {
            Node::Gen(n) => {
                if self.pres.is_object(n) {
                    Ok(t.clone())
                } else if self.pres.hom(n).is_some() {
                    let h = self.hom_in(t, m, false, run)?;
                    self.hom_term(h, run)
                } else {
                    Err(Error::sort(format!("unknown generator `{n}`")))
                }
            }
            Node::GlueOb(g) => Ok(match self.node_in(&g.base, &g.pieces, m, run)? {
                Collapse::Done(p) => p.ob,
                Collapse::Node(base, pieces) => Term::glue_ob(Arc::new(Glue { base, pieces })),
            }),
            Node::ExtSet(e) => Ok(match self.node_in(&e.base, &e.pieces, m, run)? {
                Collapse::Done(p) => p,
                Collapse::Node(base, pieces) => Term::ext(Arc::new(Ext { base, pieces })),
            }),
            Node::Restrict(s, f) => self.nf_in(s, &then(f.map(), m), run),
            Node::IdHom(_) | Node::Comp(..) | Node::Inv(_) | Node::GlueIsoFwd(_) => {
                let h = self.hom_in(t, m, false, run)?;
                self.hom_term(h, run)
            }
        }
    }

    fn node_in<P: Payload>(
        &self,
        base: &Term,
        pieces: &PartialElement<P>,
        m: &VarMap,
        run: &mut Run,
    ) -> Result<Collapse<P>> {
        if self.config.eager_collapse {
            if let Some(p) = pieces.collapse_under(self, m, run)? {
                run.tick()?;
                return Ok(Collapse::Done(p));
            }
        }
        let base = self.nf_in(base, m, run)?;
        let pieces = pieces.restrict_in(self, m, run)?;
        if let Some(p) = pieces.collapsed() {
            run.tick()?;
            return Ok(Collapse::Done(p.clone()));
        }
        Ok(Collapse::Node(base, pieces))
    }

    fn is_object_nf(&self, t: &Term) -> bool {
        match t.node() {
            Node::Gen(n) => self.pres.is_object(n),
            Node::GlueOb(_) => true,
            _ => false,
        }
    }

    fn hom_in(&self, t: &Term, m: &VarMap, inverted: bool, run: &mut Run) -> Result<HomNf> {
        match t.node() {
            Node::Gen(n) => {
                let h = self
                    .pres
                    .hom(n)
                    .ok_or_else(|| Error::sort(format!("`{n}` is not a hom")))?;
                if inverted {
                    return Err(Error::NotInvertible(n.to_string()));
                }
                Ok(HomNf {
                    word: vec![Atom::Gen(n.clone())],
                    src: Term::gen_name(h.src.clone()),
                    dst: Term::gen_name(h.dst.clone()),
                })
            }
            Node::IdHom(x) => {
                let x = self.nf_in(x, m, run)?;
                if !self.is_object_nf(&x) {
                    return Err(Error::sort(format!("id of non-object `{x}`")));
                }
                Ok(HomNf {
                    word: Vec::new(),
                    src: x.clone(),
                    dst: x,
                })
            }
            Node::Comp(a, b) => {
                let (first, second) = if inverted { (b, a) } else { (a, b) };
                let x = self.hom_in(first, m, inverted, run)?;
                let mut y = self.hom_in(second, m, inverted, run)?;
                if x.src != y.dst {
                    return Err(Error::sort(format!(
                        "cannot compose: `{}` ends at {} but `{}` starts at {}",
                        second, y.dst, first, x.src
                    )));
                }
                let mut word = x.word;
                word.append(&mut y.word);
                Ok(HomNf {
                    word,
                    src: y.src,
                    dst: x.dst,
                })
            }
            Node::Inv(h) => self.hom_in(h, m, !inverted, run),
            Node::GlueIsoFwd(g) => match self.node_in(&g.base, &g.pieces, m, run)? {
                Collapse::Done(p) => {
                    let h = if inverted { &p.inv } else { &p.fwd };
                    self.hom_in(h, &VarMap::new(), false, run)
                }
                Collapse::Node(base, pieces) => {
                    let g = Arc::new(Glue { base, pieces });
                    let ob = Term::glue_ob(g.clone());
                    let base = g.base.clone();
                    let (src, dst) = if inverted { (ob, base) } else { (base, ob) };
                    Ok(HomNf {
                        word: vec![Atom::Glue(g, inverted)],
                        src,
                        dst,
                    })
                }
            },
            Node::Restrict(s, f) => self.hom_in(s, &then(f.map(), m), inverted, run),
            Node::GlueOb(_) | Node::ExtSet(_) => {
                Err(Error::sort(format!("expected a hom, found `{t}`")))
            }
        }
    }

    fn hom_term(&self, h: HomNf, run: &mut Run) -> Result<Term> {
        let word = self.reduce(h.word, run)?;
        if word.is_empty() {
            return Ok(Term::id(h.src));
        }
        let atoms = word
            .into_iter()
            .map(|a| match a {
                Atom::Gen(n) => Term::gen_name(n),
                Atom::Glue(g, false) => Term::glue_fwd(g),
                Atom::Glue(g, true) => Term::inv(Term::glue_fwd(g)),
            })
            .collect();
        Ok(Term::comps(atoms).expect("nonempty"))
    }

    fn redexes(&self, w: &[Atom]) -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::new();
        for k in 0..w.len() {
            if let (Some(Atom::Glue(a, p)), Some(Atom::Glue(b, q))) = (w.get(k), w.get(k + 1)) {
                if p != q && a == b {
                    out.push((k, None));
                }
            }
            for (ri, r) in self.pres.rules().iter().enumerate() {
                let n = r.lhs.len();
                if k + n <= w.len()
                    && w[k..k + n]
                        .iter()
                        .zip(&r.lhs)
                        .all(|(a, l)| matches!(a, Atom::Gen(g) if g == l))
                {
                    out.push((k, Some(ri)));
                }
            }
        }
        out
    }

    fn reduce(&self, mut w: Vec<Atom>, run: &mut Run) -> Result<Vec<Atom>> {
        loop {
            let rs = self.redexes(&w);
            if rs.is_empty() {
                return Ok(w);
            }
            let pick = match self.config.strategy {
                Strategy::Leftmost => 0,
                Strategy::Rightmost => rs.len() - 1,
                Strategy::Seeded(_) => run
                    .rng
                    .as_mut()
                    .expect("seeded runs carry an rng")
                    .random_range(0..rs.len()),
            };
            run.tick()?;
            match rs[pick] {
                (k, None) => {
                    w.drain(k..k + 2);
                }
                (k, Some(ri)) => {
                    let r = &self.pres.rules()[ri];
                    let rhs = r.rhs.iter().cloned().map(Atom::Gen);
                    w.splice(k..k + r.lhs.len(), rhs);
                }
            }
        }
    }

    /// Deep well-sortedness check, including the iso laws of glue pieces.
    pub fn check(&self, t: &Term) -> Result<Sort> {
        let mut err = None;
        t.walk(&mut |s| {
            if err.is_some() {
                return;
            }
            let r = match s.node() {
                Node::GlueOb(g) | Node::GlueIsoFwd(g) => self.check_glue(g),
                Node::ExtSet(e) => self.check_ext(e),
                _ => Ok(()),
            };
            if let Err(e) = r {
                err = Some(e);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        self.sort_of(t)
    }

    fn check_glue(&self, g: &Glue) -> Result<()> {
        if self.pres.theory() != Theory::Cat {
            return Err(Error::sort("glue objects only exist in CAT completions"));
        }
        if self.sort_of(&g.base)? != Sort::Ob {
            return Err(Error::sort(format!("glue base `{}` is not an object", g.base)));
        }
        for (face, p) in g.pieces.iter() {
            let base = self.nf_map(&g.base, face.map())?;
            self.check_iso(&base, p)
                .map_err(|e| Error::sort(format!("piece on {face}: {e}")))?;
        }
        Ok(())
    }

    /// `p.fwd : base → p.ob` and `p.inv` its two-sided inverse.
    pub fn check_iso(&self, base: &Term, p: &GluePiece) -> Result<()> {
        if self.sort_of(&p.ob)? != Sort::Ob {
            return Err(Error::sort(format!("`{}` is not an object", p.ob)));
        }
        let ob = self.normalize(&p.ob)?;
        let want_fwd = Sort::Hom(base.clone(), ob.clone());
        let want_inv = Sort::Hom(ob.clone(), base.clone());
        if self.sort_of(&p.fwd)? != want_fwd {
            return Err(Error::sort(format!("`{}` is not a hom {base} -> {ob}", p.fwd)));
        }
        if self.sort_of(&p.inv)? != want_inv {
            return Err(Error::sort(format!("`{}` is not a hom {ob} -> {base}", p.inv)));
        }
        let left = Term::comp(p.inv.clone(), p.fwd.clone());
        let right = Term::comp(p.fwd.clone(), p.inv.clone());
        if !self.eq_terms(&left, &Term::id(base.clone()))? || !self.eq_terms(&right, &Term::id(ob))? {
            return Err(Error::sort(format!("`{}` and `{}` are not mutually inverse", p.fwd, p.inv)));
        }
        Ok(())
    }

    fn check_ext(&self, e: &Ext) -> Result<()> {
        if self.pres.theory() != Theory::Set {
            return Err(Error::sort("ext elements only exist in SET completions"));
        }
        if self.sort_of(&e.base)? != Sort::Elt {
            return Err(Error::sort(format!("ext base `{}` is not an element", e.base)));
        }
        for (face, p) in e.pieces.iter() {
            if self.sort_of(p)? != Sort::Elt {
                return Err(Error::sort(format!("piece on {face} is not an element")));
            }
        }
        Ok(())
    }
}

/// The factors of a right-nested composite, outermost first.
pub fn factors(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = t.clone();
    loop {
        match cur.node() {
            Node::Comp(a, b) => {
                out.push(a.clone());
                let next = b.clone();
                cur = next;
            }
            _ => {
                out.push(cur);
                return out;
            }
        }
    }
}
