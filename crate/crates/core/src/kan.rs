//! Weak composition: filling problems, the direct SET solution by ext, and
//! the general construction from pseudo-reflexive graph data.

use std::collections::BTreeSet;

use crate::cert::Certificate;
use crate::cofib::{dnf, Cof};
use crate::cube::{then, DimCtx, IntervalExpr, Name, VarMap};
use crate::error::{Error, Result};
use crate::terms::{Ext, Normalizer, PartialElement, Payload, Term, Unit};

/// An open box: a line `tube` in `dim` over the faces of `cof`, and a `base`
/// agreeing with the tube at level `r`.
#[derive(Clone, Debug)]
pub struct FillingProblem {
    pub ctx: DimCtx,
    pub dim: Name,
    pub r: IntervalExpr,
    pub s: IntervalExpr,
    pub cof: Cof,
    pub tube: PartialElement<Term>,
    pub base: Term,
}

impl FillingProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: &Normalizer,
        ctx: DimCtx,
        dim: Name,
        r: IntervalExpr,
        s: IntervalExpr,
        cof: Cof,
        tube: PartialElement<Term>,
        base: Term,
    ) -> Result<Self> {
        if ctx.contains(&dim) {
            return Err(Error::Collision(dim));
        }
        for e in [&r, &s] {
            if let Some(v) = e.as_var() {
                if !ctx.contains(v) {
                    return Err(Error::Unbound(v.clone()));
                }
            }
        }
        cof.check_scope(&ctx)?;
        if tube.dnf() != &dnf(&cof) {
            return Err(Error::validation(format!(
                "tube is defined on {} but the cofibration is {cof}",
                tube.dnf()
            )));
        }
        n.sort_of(&base)?;
        let base = n.normalize(&base)?;
        let p = FillingProblem {
            ctx,
            dim,
            r,
            s,
            cof,
            tube,
            base,
        };
        let at_r = p.tube_at(n, &p.r)?;
        for (face, t) in at_r.iter() {
            let b = n.nf_map(&p.base, face.map())?;
            if &b != t {
                return Err(Error::IncompatiblePieces {
                    meet: face.to_string(),
                    left: b.to_string(),
                    right: t.to_string(),
                });
            }
        }
        Ok(p)
    }

    /// The tube with its line dimension set to `e`.
    pub fn tube_at(&self, n: &Normalizer, e: &IntervalExpr) -> Result<PartialElement<Term>> {
        let m = VarMap::from([(self.dim.clone(), e.clone())]);
        self.tube.restrict(n, &m)
    }

    /// A name for the path dimension, fresh for the problem.
    pub fn path_dim(&self) -> Name {
        self.ctx.fresh("i", &BTreeSet::from([self.dim.clone()]))
    }

    /// Assignments of the variables among `r` and `s` to 0, 1 or themselves.
    pub fn instantiations(&self) -> Vec<VarMap> {
        let mut vars: Vec<Name> = [&self.r, &self.s]
            .into_iter()
            .filter_map(|e| e.as_var().cloned())
            .collect();
        vars.dedup();
        let mut out = vec![VarMap::new()];
        for v in vars {
            let mut next = Vec::new();
            for m in &out {
                next.push(m.clone());
                for c in [IntervalExpr::Zero, IntervalExpr::One] {
                    let mut m = m.clone();
                    m.insert(v.clone(), c);
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }
}

/// A solution of a filling problem: the filler at level `s`, the filler at
/// level `r`, and a path in `path_dim` from the latter to the base that is
/// constant on the cofibration.
#[derive(Clone, Debug)]
pub struct Filling {
    pub filler: Term,
    pub filler_rr: Term,
    pub path: Term,
    pub path_dim: Name,
    pub cert: Certificate,
}

/// Record the boundary equations of a filling at every instantiation of the
/// problem's symbolic levels.
fn boundary_entries(n: &Normalizer, p: &FillingProblem, f: &mut Filling) -> Result<()> {
    let i = f.path_dim.clone();
    let at_s = p.tube_at(n, &p.s)?;
    for sigma in p.instantiations() {
        let tube = at_s.restrict(n, &sigma)?;
        for (face, t) in tube.iter() {
            let m = then(&sigma, face.map());
            f.cert
                .check(n, "filler agrees with the tube at s", &m, &f.filler, t)?;
        }
        let at0 = then(&sigma, &VarMap::from([(i.clone(), IntervalExpr::Zero)]));
        f.cert
            .check(n, "path at 0 is the r-to-r filler", &at0, &f.path, &f.filler_rr)?;
        let at1 = then(&sigma, &VarMap::from([(i.clone(), IntervalExpr::One)]));
        f.cert.check(n, "path at 1 is the base", &at1, &f.path, &p.base)?;
        for face in dnf(&p.cof.subst_map(&sigma)).faces() {
            let m = then(&sigma, face.map());
            f.cert
                .check(n, "path is constant on the cofibration", &m, &f.path, &p.base)?;
        }
    }
    Ok(())
}

fn face_case(i: &Name, e: IntervalExpr) -> Cof {
    Cof::Eq(IntervalExpr::Var(i.clone()), e)
}

fn ext_nf(n: &Normalizer, base: &Term, pieces: PartialElement<Term>) -> Result<Term> {
    n.normalize(&Term::ext(std::sync::Arc::new(Ext {
        base: base.clone(),
        pieces,
    })))
}

/// Weak composition in a SET completion, built directly from `ext`.
pub fn wcom_from_ext(n: &Normalizer, p: &FillingProblem) -> Result<Filling> {
    let filler = ext_nf(n, &p.base, p.tube_at(n, &p.s)?)?;
    let filler_rr = ext_nf(n, &p.base, p.tube_at(n, &p.r)?)?;
    let i = p.path_dim();
    let mut cases: Vec<(Cof, Term)> = p.tube.faces().iter().map(|f| (f.to_cof(), p.base.clone())).collect();
    cases.push((face_case(&i, IntervalExpr::Zero), filler_rr.clone()));
    cases.push((face_case(&i, IntervalExpr::One), p.base.clone()));
    let path = ext_nf(n, &p.base, PartialElement::from_cases(n, cases)?)?;
    let mut f = Filling {
        filler,
        filler_rr,
        path,
        path_dim: i,
        cert: Certificate::new(),
    };
    f.cert.note(
        "the path starts at the level-r filler ext(b, [cof |-> t(r)]), which is what \
         makes it agree with the base under the cofibration",
    );
    boundary_entries(n, p, &mut f)?;
    Ok(f)
}

/// A space in which every partial element extends: the data needed for
/// a canonical center and paths between any two elements.
pub trait ExtensionSpace {
    type Elem: Payload;

    fn extend(&self, n: &Normalizer, pieces: PartialElement<Self::Elem>) -> Result<Self::Elem>;

    /// The terms that identify an element, compared componentwise.
    fn components(&self, e: &Self::Elem) -> Vec<Term>;
}

#[derive(Clone, Debug)]
pub struct CenterPath<E> {
    pub center: E,
    pub path: E,
    pub path_dim: Name,
    pub cert: Certificate,
}

/// The center (extension of the empty element) and a path from `x` to `y`
/// (extension of `[(i=0) ↦ x, (i=1) ↦ y]`).
pub fn center_and_path<S: ExtensionSpace>(
    space: &S,
    n: &Normalizer,
    ctx: &DimCtx,
    x: &S::Elem,
    y: &S::Elem,
) -> Result<CenterPath<S::Elem>> {
    let center = space.extend(n, PartialElement::empty())?;
    let i = ctx.fresh("i", &BTreeSet::new());
    let pieces = PartialElement::from_cases(
        n,
        vec![
            (face_case(&i, IntervalExpr::Zero), x.clone()),
            (face_case(&i, IntervalExpr::One), y.clone()),
        ],
    )?;
    let path = space.extend(n, pieces)?;
    let mut cert = Certificate::new();
    for (end, e, label) in [(x, IntervalExpr::Zero, "path at 0"), (y, IntervalExpr::One, "path at 1")] {
        let m = VarMap::from([(i.clone(), e)]);
        for (a, b) in space.components(&path).iter().zip(space.components(end)) {
            cert.check(n, label, &m, a, &b)?;
        }
    }
    Ok(CenterPath {
        center,
        path,
        path_dim: i,
        cert,
    })
}

/// The ext-completion of a set with a chosen basepoint: every partial element
/// extends to `ext(basepoint, pieces)`.
#[derive(Clone, Debug)]
pub struct TruncationSpace {
    pub basepoint: Term,
}

impl ExtensionSpace for TruncationSpace {
    type Elem = Term;

    fn extend(&self, n: &Normalizer, pieces: PartialElement<Term>) -> Result<Term> {
        ext_nf(n, &self.basepoint, pieces)
    }

    fn components(&self, e: &Term) -> Vec<Term> {
        vec![e.clone()]
    }
}

/// The data of a pseudo-reflexive graph over a base line, from which weak
/// composition is assembled.
///
/// `Point` is an element of `(b₂ : B) × E(b, b₂)`, an endpoint together with
/// an edge to it; `Loop` is an edge from `b` to itself together with its
/// reflexivity witness.
pub trait PrgInstance {
    type Point: Payload;
    type Loop: Payload;

    fn label(&self) -> &'static str;

    /// The coercion of one tube line from level `r` to level `s`.
    fn coerce(
        &self,
        n: &Normalizer,
        line: &Term,
        dim: &Name,
        r: &IntervalExpr,
        s: &IntervalExpr,
        cert: &mut Certificate,
    ) -> Result<Self::Point>;

    /// The coercion from `r` to `r` of one tube line, as a loop.
    fn coherence(
        &self,
        n: &Normalizer,
        line: &Term,
        dim: &Name,
        r: &IntervalExpr,
        cert: &mut Certificate,
    ) -> Result<Self::Loop>;

    /// Extend a partial point over `base`, for edges from level `r` to `s`.
    fn extend_edge(
        &self,
        n: &Normalizer,
        base: &Term,
        r: &IntervalExpr,
        s: &IntervalExpr,
        pieces: PartialElement<Self::Point>,
        cert: &mut Certificate,
    ) -> Result<Self::Point>;

    fn extend_loop(
        &self,
        n: &Normalizer,
        base: &Term,
        pieces: PartialElement<Self::Loop>,
        cert: &mut Certificate,
    ) -> Result<Self::Loop>;

    /// The point `(b, d)` of a loop `d` on `b`.
    fn loop_point(&self, base: &Term, d: &Self::Loop) -> Self::Point;

    /// The endpoint of a point.
    fn endpoint(&self, p: &Self::Point) -> Term;
}

/// Weak composition from pseudo-reflexive graph data.
pub fn fibrancy_from_prg<I: PrgInstance>(inst: &I, n: &Normalizer, p: &FillingProblem) -> Result<Filling> {
    let mut cert = Certificate::new();
    let mut to_s = Vec::new();
    let mut to_r = Vec::new();
    let mut loops = Vec::new();
    for (face, t) in p.tube.iter() {
        let r = p.r.apply(face.map());
        let s = p.s.apply(face.map());
        let c = face.to_cof();
        to_s.push((c.clone(), inst.coerce(n, t, &p.dim, &r, &s, &mut cert)?));
        to_r.push((c.clone(), inst.coerce(n, t, &p.dim, &r, &r, &mut cert)?));
        loops.push((c, inst.coherence(n, t, &p.dim, &r, &mut cert)?));
    }
    let w_s = inst.extend_edge(n, &p.base, &p.r, &p.s, PartialElement::from_cases(n, to_s)?, &mut cert)?;
    let w_r = inst.extend_edge(
        n,
        &p.base,
        &p.r,
        &p.r,
        PartialElement::from_cases(n, to_r.clone())?,
        &mut cert,
    )?;
    let d = inst.extend_loop(n, &p.base, PartialElement::from_cases(n, loops)?, &mut cert)?;
    let i = p.path_dim();
    let mut cases = to_r;
    cases.push((face_case(&i, IntervalExpr::Zero), w_r.clone()));
    cases.push((face_case(&i, IntervalExpr::One), inst.loop_point(&p.base, &d)));
    let w_line = inst.extend_edge(n, &p.base, &p.r, &p.r, PartialElement::from_cases(n, cases)?, &mut cert)?;
    cert.note(format!(
        "{}: the path's (i=0) end is the level-r filler w(r), so that it meets the \
         cofibration's pieces at level r",
        inst.label()
    ));
    let mut f = Filling {
        filler: inst.endpoint(&w_s),
        filler_rr: inst.endpoint(&w_r),
        path: inst.endpoint(&w_line),
        path_dim: i,
        cert,
    };
    boundary_entries(n, p, &mut f)?;
    Ok(f)
}

/// The SET instance: edges are trivial, so points are elements.
#[derive(Clone, Copy, Debug, Default)]
pub struct SetInstance;

impl PrgInstance for SetInstance {
    type Point = Term;
    type Loop = Unit;

    fn label(&self) -> &'static str {
        "SET"
    }

    fn coerce(
        &self,
        n: &Normalizer,
        line: &Term,
        dim: &Name,
        _r: &IntervalExpr,
        s: &IntervalExpr,
        _cert: &mut Certificate,
    ) -> Result<Term> {
        n.nf_map(line, &VarMap::from([(dim.clone(), s.clone())]))
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
        _r: &IntervalExpr,
        _s: &IntervalExpr,
        pieces: PartialElement<Term>,
        _cert: &mut Certificate,
    ) -> Result<Term> {
        ext_nf(n, base, pieces)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::name;
    use crate::syntax::{parse_cof, parse_term};
    use crate::terms::library;
    use std::sync::Arc;

    fn setup() -> Normalizer {
        Normalizer::new(Arc::new(library::truncation(&["a", "b"])))
    }

    fn problem(n: &Normalizer, cof: &str, tube: &[(&str, &str)], base: &str) -> FillingProblem {
        let ctx = DimCtx::new(["i", "j"]).unwrap();
        let cases = tube
            .iter()
            .map(|(c, t)| (parse_cof(c).unwrap(), parse_term(t, n).unwrap()))
            .collect();
        let tube = PartialElement::from_cases(n, cases).unwrap();
        FillingProblem::new(
            n,
            ctx,
            name("z"),
            IntervalExpr::Zero,
            IntervalExpr::One,
            parse_cof(cof).unwrap(),
            tube,
            parse_term(base, n).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn empty_tube_gives_empty_extension() {
        let n = setup();
        let p = problem(&n, "F", &[], "a");
        let f = wcom_from_ext(&n, &p).unwrap();
        assert_eq!(f.filler.to_string(), "ext(a, [])");
        assert!(f.cert.passed());
    }

    #[test]
    fn full_tube_collapses() {
        let n = setup();
        let p = problem(&n, "T", &[("T", "ext(a, [(z=1) |-> b])")], "ext(a, [])");
        let f = wcom_from_ext(&n, &p).unwrap();
        assert_eq!(f.filler, Term::gen("b"));
        assert!(f.cert.passed(), "{:?}", f.cert.failures().collect::<Vec<_>>());
    }

    #[test]
    fn face_tube_matches_prg() {
        let n = setup();
        let p = problem(&n, "(i=0)", &[("(i=0)", "ext(a, [(z=1) |-> b])")], "ext(b, [(i=0) |-> ext(a, [])])");
        let direct = wcom_from_ext(&n, &p).unwrap();
        let via = fibrancy_from_prg(&SetInstance, &n, &p).unwrap();
        assert!(direct.cert.passed());
        assert!(via.cert.passed());
        assert_eq!(direct.filler, via.filler);
        assert_eq!(direct.path, via.path);
        assert!(direct.cert.recheck(&n).unwrap());
    }

    #[test]
    fn disagreeing_base_is_rejected() {
        let n = setup();
        let ctx = DimCtx::new(["i"]).unwrap();
        let cases = vec![(parse_cof("(i=0)").unwrap(), Term::gen("b"))];
        let tube = PartialElement::from_cases(&n, cases).unwrap();
        let err = FillingProblem::new(
            &n,
            ctx,
            name("z"),
            IntervalExpr::Zero,
            IntervalExpr::One,
            parse_cof("(i=0)").unwrap(),
            tube,
            Term::gen("a"),
        )
        .unwrap_err();
        assert!(matches!(err, Error::IncompatiblePieces { .. }));
    }

    #[test]
    fn truncation_center_and_path() {
        let n = setup();
        let space = TruncationSpace { basepoint: Term::gen("a") };
        let cp = center_and_path(&space, &n, &DimCtx::empty(), &Term::gen("a"), &Term::gen("b")).unwrap();
        assert_eq!(cp.center.to_string(), "ext(a, [])");
        assert!(cp.cert.passed());
        assert_eq!(cp.cert.entries.len(), 2);
    }
}
