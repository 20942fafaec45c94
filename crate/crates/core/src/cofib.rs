//! Cofibrations: formulas over dimension variables denoting sieves.
//!
//! Membership of the identity ([`Cof::decided`]) is the ground truth; the
//! normal form, quantifier elimination and entailment are all checked against
//! it through [`oracle_entails`].

use std::collections::BTreeSet;
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::cube::{critical_substitutions, name, DimCtx, IntervalExpr, Name, Substitution, VarMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cof {
    Eq(IntervalExpr, IntervalExpr),
    Top,
    Bot,
    And(Box<Cof>, Box<Cof>),
    Or(Box<Cof>, Box<Cof>),
    Forall(Name, Box<Cof>),
}

impl Cof {
    pub fn eq(a: IntervalExpr, b: IntervalExpr) -> Cof {
        Cof::Eq(a, b)
    }

    pub fn and(a: Cof, b: Cof) -> Cof {
        Cof::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Cof, b: Cof) -> Cof {
        Cof::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(binder: Name, body: Cof) -> Cof {
        Cof::Forall(binder, Box::new(body))
    }

    /// `(v = 0)` and friends, for tests and examples.
    pub fn var_eq(v: &str, e: IntervalExpr) -> Cof {
        Cof::Eq(IntervalExpr::var(v), e)
    }

    pub fn big_or(items: impl IntoIterator<Item = Cof>) -> Cof {
        items
            .into_iter()
            .reduce(Cof::or)
            .unwrap_or(Cof::Bot)
    }

    pub fn big_and(items: impl IntoIterator<Item = Cof>) -> Cof {
        items
            .into_iter()
            .reduce(Cof::and)
            .unwrap_or(Cof::Top)
    }

    /// Number of AST nodes; binary connectives and binders count one plus
    /// their children.
    pub fn size(&self) -> usize {
        match self {
            Cof::Eq(..) | Cof::Top | Cof::Bot => 1,
            Cof::And(a, b) | Cof::Or(a, b) => 1 + a.size() + b.size(),
            Cof::Forall(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            Cof::Eq(a, b) => {
                out.extend(a.as_var().cloned());
                out.extend(b.as_var().cloned());
            }
            Cof::Top | Cof::Bot => {}
            Cof::And(a, b) | Cof::Or(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Cof::Forall(v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.free_vars().contains(v)
    }

    /// Check that every free variable is bound in `ctx` and that binders do
    /// not shadow context variables.
    pub fn check_scope(&self, ctx: &DimCtx) -> Result<()> {
        match self {
            Cof::Eq(a, b) => {
                for e in [a, b] {
                    if let IntervalExpr::Var(v) = e {
                        if !ctx.contains(v) {
                            return Err(Error::Unbound(v.clone()));
                        }
                    }
                }
                Ok(())
            }
            Cof::Top | Cof::Bot => Ok(()),
            Cof::And(a, b) | Cof::Or(a, b) => {
                a.check_scope(ctx)?;
                b.check_scope(ctx)
            }
            Cof::Forall(v, body) => body.check_scope(&ctx.extend(v.clone())?),
        }
    }

    /// Capture-avoiding replacement of free variables. Variables missing from
    /// `m` stay as they are.
    pub fn subst_map(&self, m: &VarMap) -> Cof {
        match self {
            Cof::Eq(a, b) => Cof::Eq(a.apply(m), b.apply(m)),
            Cof::Top => Cof::Top,
            Cof::Bot => Cof::Bot,
            Cof::And(a, b) => Cof::and(a.subst_map(m), b.subst_map(m)),
            Cof::Or(a, b) => Cof::or(a.subst_map(m), b.subst_map(m)),
            Cof::Forall(v, body) => {
                let mut inner = m.clone();
                inner.remove(v);
                let mut fv = body.free_vars();
                fv.remove(v);
                let range: BTreeSet<Name> = fv
                    .iter()
                    .filter_map(|w| match inner.get(w) {
                        Some(e) => e.as_var().cloned(),
                        None => Some(w.clone()),
                    })
                    .collect();
                if range.contains(v) {
                    let mut avoid = range;
                    avoid.extend(fv);
                    avoid.extend(inner.keys().cloned());
                    let fresh = DimCtx::empty().fresh(v, &avoid);
                    inner.insert(v.clone(), IntervalExpr::Var(fresh.clone()));
                    Cof::forall(fresh, body.subst_map(&inner))
                } else {
                    Cof::forall(v.clone(), body.subst_map(&inner))
                }
            }
        }
    }

    /// Restriction along `f: J → I` of a cofibration over `I`.
    pub fn subst(&self, f: &Substitution) -> Result<Cof> {
        self.check_scope(f.cod())?;
        Ok(self.subst_map(f.map()))
    }

    /// Whether the identity lies in the sieve: equations hold syntactically.
    pub fn decided(&self) -> bool {
        match self {
            Cof::Eq(a, b) => a == b,
            Cof::Top => true,
            Cof::Bot => false,
            Cof::And(a, b) => a.decided() && b.decided(),
            Cof::Or(a, b) => a.decided() || b.decided(),
            Cof::Forall(_, body) => body.decided(),
        }
    }

    /// Remove every quantifier, innermost first.
    pub fn eliminate_foralls(&self) -> Cof {
        match self {
            Cof::Eq(..) | Cof::Top | Cof::Bot => self.clone(),
            Cof::And(a, b) => Cof::and(a.eliminate_foralls(), b.eliminate_foralls()),
            Cof::Or(a, b) => Cof::or(a.eliminate_foralls(), b.eliminate_foralls()),
            Cof::Forall(v, body) => forall_elim(v, &body.eliminate_foralls()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Cof::Or(..) => 0,
            Cof::And(..) => 1,
            Cof::Forall(..) => 0,
            _ => 2,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, level: u8, left: bool) -> fmt::Result {
        // a binder to the left of a connective would swallow it when reparsed
        let parens = self.precedence() < level || (left && matches!(self, Cof::Forall(..)));
        if parens {
            write!(f, "(")?;
        }
        match self {
            Cof::Eq(a, b) => write!(f, "({a}={b})")?,
            Cof::Top => write!(f, "T")?,
            Cof::Bot => write!(f, "F")?,
            Cof::And(a, b) => {
                a.fmt_at(f, 1, true)?;
                write!(f, " /\\ ")?;
                b.fmt_at(f, 2, false)?;
            }
            Cof::Or(a, b) => {
                a.fmt_at(f, 0, true)?;
                write!(f, " \\/ ")?;
                b.fmt_at(f, 1, false)?;
            }
            Cof::Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                body.fmt_at(f, 0, false)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Cof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0, false)
    }
}

/// `∀ binder. body` as an equivalent quantifier-free formula.
///
/// Expects `body` to be quantifier-free already (see
/// [`Cof::eliminate_foralls`]); nested binders are handled by eliminating
/// them first.
pub fn forall_elim(binder: &str, body: &Cof) -> Cof {
    match body {
        Cof::Eq(a, b) => {
            if !a.mentions(binder) && !b.mentions(binder) {
                body.clone()
            } else if a == b {
                Cof::Top
            } else {
                Cof::Bot
            }
        }
        Cof::Top | Cof::Bot => body.clone(),
        Cof::And(a, b) => Cof::and(forall_elim(binder, a), forall_elim(binder, b)),
        Cof::Or(a, b) => Cof::or(forall_elim(binder, a), forall_elim(binder, b)),
        Cof::Forall(v, inner) => {
            let inner = forall_elim(v, &inner.eliminate_foralls());
            forall_elim(binder, &inner)
        }
    }
}

/// A satisfiable conjunction of equations in solved form: every eliminated
/// variable points at the representative of its class, which is a constant
/// when the class contains one and the least variable name otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    map: VarMap,
}

/// The raw conjunct systems produced by distribution, before solving.
pub type ConjunctSystem = Vec<(IntervalExpr, IntervalExpr)>;

impl Face {
    pub fn top() -> Face {
        Face::default()
    }

    pub fn is_top(&self) -> bool {
        self.map.is_empty()
    }

    /// Solve a system of equations with union-find; `None` when it forces
    /// `0 = 1`.
    pub fn solve<I>(eqs: I) -> Option<Face>
    where
        I: IntoIterator<Item = (IntervalExpr, IntervalExpr)>,
    {
        let eqs: Vec<_> = eqs.into_iter().collect();
        let mut vars: Vec<Name> = eqs
            .iter()
            .flat_map(|(a, b)| [a.as_var().cloned(), b.as_var().cloned()])
            .flatten()
            .collect();
        vars.sort();
        vars.dedup();
        let index = |e: &IntervalExpr| match e {
            IntervalExpr::Zero => 0,
            IntervalExpr::One => 1,
            IntervalExpr::Var(v) => 2 + vars.binary_search(v).expect("collected"),
        };
        let mut uf = UnionFind::<usize>::new(vars.len() + 2);
        for (a, b) in &eqs {
            uf.union(index(a), index(b));
        }
        if uf.equiv(0, 1) {
            return None;
        }
        let mut map = VarMap::new();
        // vars are sorted, so the first member met in each class is its least
        for (k, v) in vars.iter().enumerate() {
            let root = uf.find(k + 2);
            let rep = if uf.find(0) == root {
                IntervalExpr::Zero
            } else if uf.find(1) == root {
                IntervalExpr::One
            } else {
                let first = (0..vars.len())
                    .find(|&m| uf.find(m + 2) == root)
                    .expect("class is nonempty");
                IntervalExpr::Var(vars[first].clone())
            };
            if !rep.mentions(v) {
                map.insert(v.clone(), rep);
            }
        }
        Some(Face { map })
    }

    /// The quotient map as a raw assignment (eliminated variable ↦ rep).
    pub fn map(&self) -> &VarMap {
        &self.map
    }

    pub fn equations(&self) -> impl Iterator<Item = (IntervalExpr, IntervalExpr)> + '_ {
        self.map
            .iter()
            .map(|(v, e)| (IntervalExpr::Var(v.clone()), e.clone()))
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.map
            .iter()
            .any(|(w, e)| &**w == v || e.mentions(v))
    }

    /// Every equation of `self` holds after applying `m`.
    pub fn holds_under(&self, m: &VarMap) -> bool {
        self.map
            .iter()
            .all(|(v, e)| IntervalExpr::Var(v.clone()).apply(m) == e.apply(m))
    }

    /// `[self] ⊆ [other]`.
    pub fn entails(&self, other: &Face) -> bool {
        other.holds_under(&self.map)
    }

    pub fn meet(&self, other: &Face) -> Option<Face> {
        Face::solve(self.equations().chain(other.equations()))
    }

    /// Restrict along a raw map and re-solve.
    pub fn restrict(&self, m: &VarMap) -> Option<Face> {
        Face::solve(self.equations().map(|(a, b)| (a.apply(m), b.apply(m))))
    }

    /// The quotient substitution `ctx/self → ctx`.
    pub fn quotient(&self, ctx: &DimCtx) -> Result<Substitution> {
        let names: Vec<&str> = ctx
            .names()
            .iter()
            .filter(|v| !self.map.contains_key(*v))
            .map(|v| &**v)
            .collect();
        let dom = DimCtx::new(names)?;
        let assignment = ctx
            .names()
            .iter()
            .map(|v| {
                let e = self
                    .map
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| IntervalExpr::Var(v.clone()));
                (v.clone(), e)
            })
            .collect();
        Substitution::new(dom, ctx.clone(), assignment)
    }

    pub fn to_cof(&self) -> Cof {
        // a variable class prints with its representative first: (i=j), not (j=i)
        Cof::big_and(self.equations().map(|(a, b)| match b {
            IntervalExpr::Var(_) => Cof::Eq(b, a),
            _ => Cof::Eq(a, b),
        }))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cof())
    }
}

/// Canonical disjunctive normal form: solved faces, sorted, with no face
/// contained in another. Equal sieves give equal values.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dnf {
    faces: Vec<Face>,
}

impl Dnf {
    pub fn bot() -> Dnf {
        Dnf { faces: Vec::new() }
    }

    pub fn top() -> Dnf {
        Dnf {
            faces: vec![Face::top()],
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_top(&self) -> bool {
        self.faces.len() == 1 && self.faces[0].is_top()
    }

    pub fn is_bot(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn from_faces(mut faces: Vec<Face>) -> Dnf {
        faces.sort();
        faces.dedup();
        let keep: Vec<bool> = faces
            .iter()
            .enumerate()
            .map(|(k, c)| {
                !faces
                    .iter()
                    .enumerate()
                    .any(|(m, d)| m != k && c.entails(d))
            })
            .collect();
        let faces = faces
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect();
        Dnf { faces }
    }

    pub fn from_cof(c: &Cof) -> Dnf {
        let systems = distribute(&c.eliminate_foralls());
        Dnf::from_faces(systems.into_iter().filter_map(Face::solve).collect())
    }

    pub fn to_cof(&self) -> Cof {
        Cof::big_or(self.faces.iter().map(Face::to_cof))
    }

    pub fn restrict(&self, m: &VarMap) -> Dnf {
        Dnf::from_faces(self.faces.iter().filter_map(|c| c.restrict(m)).collect())
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.faces.iter().any(|c| c.mentions(v))
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cof())
    }
}

/// Distribute ∧ over ∨ in a quantifier-free formula.
fn distribute(c: &Cof) -> Vec<ConjunctSystem> {
    match c {
        Cof::Eq(a, b) => vec![vec![(a.clone(), b.clone())]],
        Cof::Top => vec![vec![]],
        Cof::Bot => vec![],
        Cof::Or(a, b) => {
            let mut out = distribute(a);
            out.extend(distribute(b));
            out
        }
        Cof::And(a, b) => {
            let left = distribute(a);
            let right = distribute(b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut sys = l.clone();
                    sys.extend(r.iter().cloned());
                    out.push(sys);
                }
            }
            out
        }
        Cof::Forall(..) => distribute(&c.eliminate_foralls()),
    }
}

/// Canonical DNF of a cofibration.
pub fn dnf(c: &Cof) -> Dnf {
    Dnf::from_cof(c)
}

/// The most general unifier of a conjunct system over `ctx`.
pub fn quotient(sys: &ConjunctSystem, ctx: &DimCtx) -> Result<Option<Substitution>> {
    match Face::solve(sys.iter().cloned()) {
        Some(face) => face.quotient(ctx).map(Some),
        None => Ok(None),
    }
}

/// `[a] ⊆ [b]`: `b` holds after every face quotient of `a`.
pub fn entails(a: &Cof, b: &Cof) -> bool {
    dnf(a)
        .faces()
        .iter()
        .all(|c| b.subst_map(c.map()).decided())
}

/// Brute force: membership compared at every critical substitution.
pub fn oracle_entails(ctx: &DimCtx, a: &Cof, b: &Cof) -> bool {
    critical_substitutions(ctx)
        .iter()
        .all(|q| !a.subst_map(q.map()).decided() || b.subst_map(q.map()).decided())
}

/// Membership of each critical substitution of `ctx`, in enumeration order.
pub fn oracle_signature(ctx: &DimCtx, a: &Cof) -> Vec<bool> {
    critical_substitutions(ctx)
        .iter()
        .map(|q| a.subst_map(q.map()).decided())
        .collect()
}

/// `(v = e)` for the common case in tests and examples.
pub fn atom(v: &str, e: &str) -> Cof {
    let rhs = match e {
        "0" => IntervalExpr::Zero,
        "1" => IntervalExpr::One,
        other => IntervalExpr::Var(name(other)),
    };
    Cof::Eq(IntervalExpr::var(v), rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::name;

    fn ctx(ns: &[&str]) -> DimCtx {
        DimCtx::new(ns.iter().copied()).unwrap()
    }

    fn c(s: &str) -> Cof {
        crate::syntax::parse_cof(s).unwrap()
    }

    fn faces(s: &str) -> Vec<Vec<(String, String)>> {
        dnf(&c(s))
            .faces()
            .iter()
            .map(|f| {
                f.equations()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect()
            })
            .collect()
    }

    fn sieve_equal(ctx: &DimCtx, a: &Cof, b: &Cof) -> bool {
        oracle_signature(ctx, a) == oracle_signature(ctx, b)
    }

    #[test]
    fn subst_examples() {
        let f = Substitution::new(
            ctx(&[]),
            ctx(&["i", "j"]),
            [(name("i"), IntervalExpr::Zero), (name("j"), IntervalExpr::Zero)]
                .into_iter()
                .collect(),
        )
        .unwrap();
        assert_eq!(c("(i=j)").subst(&f).unwrap(), c("(0=0)"));

        let f = Substitution::point(&ctx(&["i"]), "i", IntervalExpr::Zero).unwrap();
        assert_eq!(c("forall k. (k=i)").subst(&f).unwrap(), c("forall k. (k=0)"));

        let f = Substitution::new(
            ctx(&["j"]),
            ctx(&["i"]),
            [(name("i"), IntervalExpr::var("j"))].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(
            c("(i=0) \\/ (i=1)").subst(&f).unwrap(),
            c("(j=0) \\/ (j=1)")
        );
        assert!(matches!(c("(k=0)").subst(&f), Err(Error::Unbound(_))));
    }

    #[test]
    fn subst_avoids_capture() {
        // substituting i:=k under a k-binder must rename the binder
        let m: VarMap = [(name("i"), IntervalExpr::var("k"))].into_iter().collect();
        let out = c("forall k. (k=i)").subst_map(&m);
        match &out {
            Cof::Forall(b, body) => {
                assert_ne!(&**b, "k");
                assert_eq!(**body, Cof::Eq(IntervalExpr::Var(b.clone()), IntervalExpr::var("k")));
            }
            _ => panic!("binder lost: {out}"),
        }
        assert!(!out.decided());
    }

    #[test]
    fn decided_examples() {
        assert!(c("(i=i)").decided());
        assert!(!c("(0=1)").decided());
        assert!(!c("forall i. (i=j)").decided());
        assert!(!c("forall i. (j=1) \\/ (j=0)").decided());
        assert_eq!(Cof::Top.decided(), c("(0=0)").decided());
        assert_eq!(Cof::Bot.decided(), c("(0=1)").decided());
        // cross-check the last two against the sieve-membership oracle
        let j = ctx(&["j"]);
        assert!(!oracle_signature(&j, &c("forall i. (i=j)"))[2]);
        assert!(!oracle_signature(&j, &c("forall i. (j=1) \\/ (j=0)"))[2]);
    }

    #[test]
    fn dnf_examples() {
        let s = |a: &str, b: &str| (a.to_string(), b.to_string());
        assert_eq!(
            faces("(i=0) \\/ ((i=1) /\\ (j=0))"),
            vec![vec![s("i", "0")], vec![s("i", "1"), s("j", "0")]]
        );
        assert_eq!(
            faces("((i=0) \\/ (i=1)) /\\ (j=k)"),
            vec![vec![s("i", "0"), s("k", "j")], vec![s("i", "1"), s("k", "j")]]
        );
        assert_eq!(faces("forall k. ((k=0) \\/ (i=1))"), vec![vec![s("i", "1")]]);
        let i = ctx(&["i"]);
        assert!(sieve_equal(
            &i,
            &c("forall k. ((k=0) \\/ (i=1))"),
            &dnf(&c("forall k. ((k=0) \\/ (i=1))")).to_cof()
        ));
        assert!(dnf(&Cof::Top).is_top());
        assert!(dnf(&c("(0=0)")).is_top());
        assert!(dnf(&Cof::Bot).is_bot());
        assert!(dnf(&c("(0=1)")).is_bot());
        // subsumed faces are dropped
        assert_eq!(dnf(&c("(i=0) \\/ ((i=0) /\\ (j=1))")), dnf(&c("(i=0)")));
    }

    #[test]
    fn forall_elim_examples() {
        assert_eq!(forall_elim("i", &c("(j=1)")), c("(j=1)"));
        assert_eq!(forall_elim("i", &c("(i=i)")), Cof::Top);
        assert_eq!(forall_elim("i", &c("(i=0)")), Cof::Bot);
        let out = forall_elim("i", &c("(i=j) \\/ (j=0)"));
        let j = ctx(&["j"]);
        assert!(sieve_equal(&j, &out, &c("(j=0)")));
        assert!(sieve_equal(&j, &out, &c("forall i. (i=j) \\/ (j=0)")));
    }

    #[test]
    fn entails_examples() {
        let ij = ctx(&["i", "j"]);
        let cases = [
            ("(i=0) /\\ (j=0)", "(i=j)", true),
            ("(i=j)", "(i=0) \\/ (i=1)", false),
            ("T", "(i=0)", false),
            ("F", "(i=0)", true),
            ("(i=0)", "T", true),
        ];
        for (a, b, want) in cases {
            assert_eq!(entails(&c(a), &c(b)), want, "{a} |- {b}");
            assert_eq!(oracle_entails(&ij, &c(a), &c(b)), want, "{a} |- {b} (oracle)");
        }
        // the failing witness for (i=j) |- (i=0) \/ (i=1) is the diagonal
        let diag = critical_substitutions(&ij)
            .into_iter()
            .find(|q| q.to_string() == "{i:=i, j:=i}")
            .unwrap();
        assert!(c("(i=j)").subst(&diag).unwrap().decided());
        assert!(!c("(i=0) \\/ (i=1)").subst(&diag).unwrap().decided());
    }

    #[test]
    fn quotient_examples() {
        let ij = ctx(&["i", "j"]);
        let sys = vec![
            (IntervalExpr::var("i"), IntervalExpr::Zero),
            (IntervalExpr::var("j"), IntervalExpr::Zero),
        ];
        assert_eq!(quotient(&sys, &ij).unwrap().unwrap().to_string(), "{i:=0, j:=0}");
        let sys = vec![
            (IntervalExpr::var("i"), IntervalExpr::Zero),
            (IntervalExpr::var("i"), IntervalExpr::One),
        ];
        assert_eq!(quotient(&sys, &ctx(&["i"])).unwrap(), None);
        let ijk = ctx(&["i", "j", "k"]);
        let sys = vec![(IntervalExpr::var("i"), IntervalExpr::var("j"))];
        let q = quotient(&sys, &ijk).unwrap().unwrap();
        assert_eq!(q.to_string(), "{i:=i, j:=i, k:=k}");
        // most general: any unifier factors through q
        for f in critical_substitutions(&ijk) {
            let unifies = f.apply(&IntervalExpr::var("i")) == f.apply(&IntervalExpr::var("j"));
            if unifies {
                let m: VarMap = q.dom().names().iter().map(|v| (v.clone(), f.apply(&IntervalExpr::Var(v.clone())))).collect();
                let r = Substitution::new(f.dom().clone(), q.dom().clone(), m).unwrap();
                assert_eq!(q.compose(&r).unwrap(), f);
            }
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "(i=0) \\/ (i=1) /\\ (j=k)",
            "((i=0) \\/ (i=1)) /\\ (j=k)",
            "forall k. (k=0) \\/ (i=1)",
            "(i=0) /\\ (forall k. (k=i))",
            "T \\/ F",
        ] {
            let a = c(s);
            assert_eq!(c(&a.to_string()), a, "{s}");
        }
    }

    #[test]
    fn small_corpus_properties() {
        let ij = ctx(&["i", "j"]);
        let corpus = crate::sample::cof_corpus(&["i", "j"], 3);
        for a in &corpus {
            // forall elimination preserves sieves
            assert!(sieve_equal(&ij, a, &a.eliminate_foralls()), "{a}");
            assert!(sieve_equal(&ij, a, &dnf(a).to_cof()), "{a}");
            assert!(entails(a, a));
            // substitution stability
            if a.decided() {
                for q in critical_substitutions(&ij) {
                    assert!(a.subst_map(q.map()).decided());
                }
            }
        }
        for a in &corpus {
            for b in &corpus {
                assert_eq!(entails(a, b), oracle_entails(&ij, a, b), "{a} |- {b}");
                if entails(a, b) && entails(b, a) {
                    assert_eq!(dnf(a), dnf(b), "{a} ~ {b}");
                }
            }
        }
    }

    #[test]
    fn entails_is_transitive_on_small_corpus() {
        let corpus = crate::sample::cof_corpus(&["i", "j"], 1);
        for a in &corpus {
            for b in &corpus {
                if !entails(a, b) {
                    continue;
                }
                for d in &corpus {
                    if entails(b, d) {
                        assert!(entails(a, d), "{a} |- {b} |- {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn forall_adjunction() {
        // entails_I(b, forall k. a) iff entails_{I+k}(b, a)
        let i = ctx(&["i"]);
        let ik = ctx(&["i", "k"]);
        let bodies = crate::sample::cof_corpus(&["i", "k"], 3);
        let bs = crate::sample::cof_corpus(&["i"], 3);
        for a in &bodies {
            let all = Cof::forall(name("k"), a.clone());
            for b in &bs {
                let lhs = oracle_entails(&i, b, &all);
                let rhs = oracle_entails(&ik, b, a);
                assert_eq!(lhs, rhs, "{b} |- {all}");
                assert_eq!(entails(b, &all), entails(b, a), "{b} |- {all}");
            }
        }
    }
}
