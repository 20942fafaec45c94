//! Exhaustive corpora and seeded random generators, used by the tests, the
//! acceptance suite and the examples.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::cofib::Cof;
use crate::cube::{name, DimCtx, IntervalExpr, Name, Substitution, VarMap};
use crate::error::Result;
use crate::kan::FillingProblem;
use crate::terms::{Ext, Glue, GluePiece, Normalizer, PartialElement, Term, Theory};

const BINDERS: [&str; 4] = ["k", "l", "m", "n"];

fn binder_names(vars: &[&str]) -> Vec<Name> {
    let mut out: Vec<Name> = BINDERS
        .iter()
        .filter(|b| !vars.contains(b))
        .map(|b| name(b))
        .collect();
    let mut k = 0;
    while out.len() < 8 {
        let c = format!("b{k}");
        if !vars.contains(&c.as_str()) {
            out.push(name(&c));
        }
        k += 1;
    }
    out
}

fn exprs(scope: &[Name]) -> Vec<IntervalExpr> {
    let mut out = vec![IntervalExpr::Zero, IntervalExpr::One];
    out.extend(scope.iter().cloned().map(IntervalExpr::Var));
    out
}

fn atoms(scope: &[Name]) -> Vec<Cof> {
    let es = exprs(scope);
    let mut out = vec![Cof::Top, Cof::Bot];
    for a in &es {
        for b in &es {
            out.push(Cof::Eq(a.clone(), b.clone()));
        }
    }
    out
}

/// Every formula of at most `max_size` nodes over `vars`. Atoms are ⊤, ⊥ and
/// equations between any two of 0, 1 and the variables in scope; bound
/// variables are named by nesting depth (`k`, `l`, `m`, `n`, ...).
pub fn cof_corpus(vars: &[&str], max_size: usize) -> Vec<Cof> {
    let binders = binder_names(vars);
    let scope: Vec<Name> = vars.iter().map(|v| name(v)).collect();
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(of_size(&scope, &binders, 0, size));
    }
    out
}

fn of_size(scope: &[Name], binders: &[Name], depth: usize, size: usize) -> Vec<Cof> {
    if size == 0 {
        return Vec::new();
    }
    if size == 1 {
        return atoms(scope);
    }
    let mut out = Vec::new();
    for left in 1..size - 1 {
        let right = size - 1 - left;
        let ls = of_size(scope, binders, depth, left);
        let rs = of_size(scope, binders, depth, right);
        for a in &ls {
            for b in &rs {
                out.push(Cof::and(a.clone(), b.clone()));
                out.push(Cof::or(a.clone(), b.clone()));
            }
        }
    }
    if let Some(k) = binders.get(depth) {
        let mut inner = scope.to_vec();
        inner.push(k.clone());
        for body in of_size(&inner, binders, depth + 1, size - 1) {
            out.push(Cof::forall(k.clone(), body));
        }
    }
    out
}

/// A random formula over `vars` of roughly `size` nodes.
pub fn random_cof<R: Rng>(rng: &mut R, vars: &[&str], size: usize) -> Cof {
    let binders = binder_names(vars);
    let scope: Vec<Name> = vars.iter().map(|v| name(v)).collect();
    random_cof_in(rng, &scope, &binders, 0, size.max(1))
}

fn random_cof_in<R: Rng>(rng: &mut R, scope: &[Name], binders: &[Name], depth: usize, size: usize) -> Cof {
    if size <= 1 {
        return atoms(scope).choose(rng).expect("nonempty").clone();
    }
    match rng.random_range(0..5) {
        0 if depth < binders.len() => {
            let mut inner = scope.to_vec();
            inner.push(binders[depth].clone());
            Cof::forall(
                binders[depth].clone(),
                random_cof_in(rng, &inner, binders, depth + 1, size - 1),
            )
        }
        k => {
            let left = rng.random_range(1..size.max(2));
            let a = random_cof_in(rng, scope, binders, depth, left);
            let b = random_cof_in(rng, scope, binders, depth, size.saturating_sub(left + 1).max(1));
            if k % 2 == 0 {
                Cof::and(a, b)
            } else {
                Cof::or(a, b)
            }
        }
    }
}

/// A random interval expression over `ctx`.
pub fn random_expr<R: Rng>(rng: &mut R, ctx: &DimCtx) -> IntervalExpr {
    exprs(ctx.names()).choose(rng).expect("nonempty").clone()
}

/// A random substitution `dom → cod`.
pub fn random_subst<R: Rng>(rng: &mut R, dom: &DimCtx, cod: &DimCtx) -> Substitution {
    let map: VarMap = cod
        .names()
        .iter()
        .map(|v| (v.clone(), random_expr(rng, dom)))
        .collect();
    Substitution::new(dom.clone(), cod.clone(), map).expect("values drawn from dom")
}

/// A random cofibration over `ctx` made of one or two atoms, biased towards
/// proper faces.
pub fn random_face_cof<R: Rng>(rng: &mut R, ctx: &DimCtx) -> Cof {
    let atom = |rng: &mut R| {
        let v = ctx.names().choose(rng).expect("nonempty context").clone();
        let e = random_expr(rng, ctx);
        Cof::Eq(IntervalExpr::Var(v), e)
    };
    if ctx.is_empty() {
        return if rng.random_bool(0.5) { Cof::Top } else { Cof::Bot };
    }
    match rng.random_range(0..6) {
        0 => Cof::Bot,
        1 => Cof::or(atom(rng), atom(rng)),
        2 => Cof::and(atom(rng), atom(rng)),
        _ => atom(rng),
    }
}

/// Random terms over a fixed presentation.
pub struct TermSampler<'a> {
    pub n: &'a Normalizer,
    /// Nesting bound for glue and ext nodes.
    pub depth: usize,
}

impl<'a> TermSampler<'a> {
    pub fn new(n: &'a Normalizer, depth: usize) -> Self {
        TermSampler { n, depth }
    }

    fn base_gen<R: Rng>(&self, rng: &mut R) -> Term {
        Term::gen_name(self.n.presentation().objects().choose(rng).expect("objects").clone())
    }

    /// A random element of a SET completion over `ctx`, built from `ext`
    /// nodes whose pieces are restrictions of one global element, so that
    /// they are always compatible.
    pub fn element<R: Rng>(&self, rng: &mut R, ctx: &DimCtx, depth: usize) -> Result<Term> {
        if depth == 0 || rng.random_bool(0.3) {
            return Ok(self.base_gen(rng));
        }
        let base = self.element(rng, ctx, depth - 1)?;
        let global = self.element(rng, ctx, depth - 1)?;
        let cof = random_face_cof(rng, ctx);
        let pieces = PartialElement::from_cases(self.n, vec![(cof, global)])?;
        Ok(Term::ext(Arc::new(Ext { base, pieces })))
    }

    /// A random object of a CAT completion over `ctx`, as a glue tower.
    pub fn object<R: Rng>(&self, rng: &mut R, ctx: &DimCtx, depth: usize) -> Result<Term> {
        if depth == 0 || rng.random_bool(0.3) {
            return Ok(self.base_gen(rng));
        }
        let base = self.object(rng, ctx, depth - 1)?;
        self.glue_over(rng, ctx, &base, depth - 1)
    }

    /// A random glue object over `base`: one iso walk from `base` restricted
    /// to each face of a random cofibration.
    pub fn glue_over<R: Rng>(&self, rng: &mut R, ctx: &DimCtx, base: &Term, depth: usize) -> Result<Term> {
        let (ob, fwd, inv) = self.iso_walk(rng, ctx, base, depth, 2)?;
        let cof = random_face_cof(rng, ctx);
        let pieces = PartialElement::from_cases(self.n, vec![(cof, GluePiece { ob, fwd, inv })])?;
        Ok(Term::glue_ob(Arc::new(Glue {
            base: base.clone(),
            pieces,
        })))
    }

    /// A random iso out of `x`, as `(target, fwd, inv)`.
    pub fn iso_walk<R: Rng>(
        &self,
        rng: &mut R,
        ctx: &DimCtx,
        x: &Term,
        depth: usize,
        steps: usize,
    ) -> Result<(Term, Term, Term)> {
        let x = self.n.normalize(x)?;
        let mut cur = x.clone();
        let mut fwd = Term::id(x.clone());
        let mut inv = Term::id(x);
        let pairs = self.n.presentation().inverse_pairs(self.n.config().budget);
        for _ in 0..steps {
            let mut moves: Vec<(Term, Term, Term)> = Vec::new();
            for (f, g) in &pairs {
                let h = self.n.presentation().hom(f).expect("generator");
                if cur.as_gen() == Some(&h.src) {
                    moves.push((Term::gen_name(h.dst.clone()), Term::gen_name(f.clone()), Term::gen_name(g.clone())));
                }
            }
            if let crate::terms::Node::GlueOb(g) = cur.node() {
                let up = Term::glue_fwd(g.clone());
                moves.push((g.base.clone(), Term::inv(up.clone()), up));
            }
            if depth > 0 {
                let glued = self.n.normalize(&self.glue_over(rng, ctx, &cur, depth - 1)?)?;
                // a glue over ⊤ collapses to its piece, which is no move
                match glued.node() {
                    crate::terms::Node::GlueOb(g) if g.base == cur => {
                        let up = Term::glue_fwd(g.clone());
                        moves.push((glued.clone(), up.clone(), Term::inv(up)));
                    }
                    _ => {}
                }
            }
            let Some((next, f, g)) = moves.choose(rng).cloned() else {
                break;
            };
            fwd = Term::comp(f, fwd);
            inv = Term::comp(inv, g);
            cur = self.n.normalize(&next)?;
        }
        Ok((cur, self.n.normalize(&fwd)?, self.n.normalize(&inv)?))
    }

    /// A random hom out of `x` over `ctx`, mixing composition, inverses,
    /// identities and restrictions along substitutions into a fresh
    /// dimension. Returns the term (unnormalized) and its target.
    pub fn hom<R: Rng>(&self, rng: &mut R, ctx: &DimCtx, x: &Term, steps: usize) -> Result<(Term, Term)> {
        let x = self.n.normalize(x)?;
        let mut term = Term::id(x.clone());
        let mut cur = x;
        for _ in 0..steps {
            let (piece, next) = match rng.random_range(0..6) {
                0 => {
                    // a segment built one dimension up and restricted back
                    let fresh = ctx.fresh("u", &Default::default());
                    let big = ctx.extend(fresh.clone()).expect("fresh");
                    let (t, end) = self.hom(rng, &big, &cur, 1)?;
                    let mut map: VarMap = ctx
                        .names()
                        .iter()
                        .map(|v| (v.clone(), IntervalExpr::Var(v.clone())))
                        .collect();
                    map.insert(fresh, random_expr(rng, ctx));
                    let f = Substitution::new(ctx.clone(), big, map).expect("valid");
                    let end = self.n.restrict_nf(&end, &f)?;
                    (Term::restrict(t, f), end)
                }
                1 => {
                    // an invertible segment t as t ∘ t⁻¹ ∘ t
                    let (end, f, g) = self.iso_walk(rng, ctx, &cur, self.depth.min(1), 1)?;
                    let t = Term::comps(vec![f.clone(), g, f]).expect("nonempty");
                    (t, end)
                }
                2 => (Term::id(cur.clone()), cur.clone()),
                _ => {
                    let pres = self.n.presentation();
                    let mut options: Vec<(Term, Term)> = pres
                        .homs()
                        .iter()
                        .filter(|h| cur.as_gen() == Some(&h.src))
                        .map(|h| (Term::gen_name(h.name.clone()), Term::gen_name(h.dst.clone())))
                        .collect();
                    let (end, f, _) = self.iso_walk(rng, ctx, &cur, self.depth, 1)?;
                    options.push((f, end));
                    options.choose(rng).cloned().expect("nonempty")
                }
            };
            term = Term::comp(piece, term);
            cur = self.n.normalize(&next)?;
        }
        Ok((term, cur))
    }

    /// A random well-sorted term over `ctx`: an element, object or hom
    /// according to the presentation's theory.
    pub fn term<R: Rng>(&self, rng: &mut R, ctx: &DimCtx) -> Result<Term> {
        match self.n.presentation().theory() {
            Theory::Set => self.element(rng, ctx, self.depth),
            Theory::Cat => {
                if rng.random_bool(0.3) {
                    self.object(rng, ctx, self.depth)
                } else {
                    let x = self.object(rng, ctx, self.depth)?;
                    let steps = rng.random_range(1..=4);
                    Ok(self.hom(rng, ctx, &x, steps)?.0)
                }
            }
        }
    }
}

/// The line dimension used by random filling problems.
pub const LINE_DIM: &str = "z";

fn line_ctx(ctx: &DimCtx) -> DimCtx {
    ctx.extend(name(LINE_DIM)).expect("line dimension is fresh")
}

fn problem_from_line<R: Rng>(
    rng: &mut R,
    n: &Normalizer,
    ctx: &DimCtx,
    line: &Term,
    base: impl FnOnce(&mut R, &Cof, &Term) -> Result<Term>,
) -> Result<FillingProblem> {
    let cof = random_face_cof(rng, ctx);
    let tube = PartialElement::from_cases(n, vec![(cof.clone(), line.clone())])?;
    let r = random_expr(rng, ctx);
    let s = random_expr(rng, ctx);
    let at_r = n.nf_map(line, &VarMap::from([(name(LINE_DIM), r.clone())]))?;
    let base = base(rng, &cof, &at_r)?;
    FillingProblem::new(n, ctx.clone(), name(LINE_DIM), r, s, cof, tube, base)
}

/// A random SET filling problem over `ctx` in the line dimension `z`. The
/// base is `t(r)` or an ext node pinned to `t(r)` on the cofibration.
pub fn random_set_problem<R: Rng>(rng: &mut R, s: &TermSampler, ctx: &DimCtx) -> Result<FillingProblem> {
    let line = s.n.normalize(&s.element(rng, &line_ctx(ctx), s.depth)?)?;
    problem_from_line(rng, s.n, ctx, &line, |rng, cof, at_r| {
        if rng.random_bool(0.5) {
            return Ok(at_r.clone());
        }
        let a = s.element(rng, ctx, 1)?;
        let pieces = PartialElement::from_cases(s.n, vec![(cof.clone(), at_r.clone())])?;
        Ok(Term::ext(Arc::new(Ext { base: a, pieces })))
    })
}

/// A random filling problem for objects of a CAT completion. The base is
/// `t(r)` or a glue over it by the identity on the cofibration.
pub fn random_ob_problem<R: Rng>(rng: &mut R, s: &TermSampler, ctx: &DimCtx) -> Result<FillingProblem> {
    let line = s.n.normalize(&s.object(rng, &line_ctx(ctx), s.depth)?)?;
    problem_from_line(rng, s.n, ctx, &line, |rng, cof, at_r| {
        if rng.random_bool(0.5) {
            return Ok(at_r.clone());
        }
        let id = Term::id(at_r.clone());
        let piece = GluePiece { ob: at_r.clone(), fwd: id.clone(), inv: id };
        let pieces = PartialElement::from_cases(s.n, vec![(cof.clone(), piece)])?;
        Ok(Term::glue_ob(Arc::new(Glue { base: at_r.clone(), pieces })))
    })
}

/// A random filling problem for homs of a CAT completion, together with the
/// normalized source and target lines of the hom line.
pub fn random_hom_problem<R: Rng>(
    rng: &mut R,
    s: &TermSampler,
    ctx: &DimCtx,
) -> Result<(FillingProblem, Term, Term)> {
    let big = line_ctx(ctx);
    let x = s.n.normalize(&s.object(rng, &big, s.depth)?)?;
    let steps = rng.random_range(1..=3);
    let (h, y) = s.hom(rng, &big, &x, steps)?;
    let h = s.n.normalize(&h)?;
    let p = problem_from_line(rng, s.n, ctx, &h, |_, _, at_r| Ok(at_r.clone()))?;
    Ok((p, x, s.n.normalize(&y)?))
}
