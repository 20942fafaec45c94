//! The cartesian cube category: dimension contexts, interval expressions and
//! substitutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An interned dimension (or generator) name.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A raw variable assignment. Variables missing from the map are left alone.
///
/// Used internally wherever the ambient contexts are already known to be
/// consistent; the checked counterpart is [`Substitution`].
pub type VarMap = BTreeMap<Name, IntervalExpr>;

/// An object of the cube category: an ordered list of distinct names.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimCtx {
    names: Vec<Name>,
}

impl DimCtx {
    pub fn empty() -> Self {
        DimCtx { names: Vec::new() }
    }

    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut ctx = DimCtx::empty();
        for n in names {
            ctx = ctx.extend(name(n.as_ref()))?;
        }
        Ok(ctx)
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, n: &str) -> bool {
        self.names.iter().any(|m| &**m == n)
    }

    pub fn extend(&self, n: Name) -> Result<Self> {
        if self.contains(&n) {
            return Err(Error::Collision(n));
        }
        let mut names = self.names.clone();
        names.push(n);
        Ok(DimCtx { names })
    }

    /// A name based on `base` that is not bound here nor in `avoid`.
    pub fn fresh(&self, base: &str, avoid: &BTreeSet<Name>) -> Name {
        if !self.contains(base) && !avoid.contains(base) {
            return name(base);
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|c| !self.contains(c) && !avoid.contains(c.as_str()))
            .map(|c| name(&c))
            .expect("unbounded search")
    }

    /// The context with `n` removed, if present.
    pub fn without(&self, n: &str) -> DimCtx {
        DimCtx {
            names: self.names.iter().filter(|m| &***m != n).cloned().collect(),
        }
    }
}

impl fmt::Display for DimCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, n) in self.names.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

/// An element of the interval: an endpoint or a dimension variable.
///
/// The derived order puts constants before variables, which is what the face
/// solver relies on when it picks class representatives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntervalExpr {
    Zero,
    One,
    Var(Name),
}

impl IntervalExpr {
    pub fn var(n: &str) -> Self {
        IntervalExpr::Var(name(n))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            IntervalExpr::Var(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        !matches!(self, IntervalExpr::Var(_))
    }

    pub fn mentions(&self, n: &str) -> bool {
        matches!(self, IntervalExpr::Var(m) if &**m == n)
    }

    pub fn apply(&self, map: &VarMap) -> IntervalExpr {
        match self {
            IntervalExpr::Var(n) => map.get(n).cloned().unwrap_or_else(|| self.clone()),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for IntervalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalExpr::Zero => write!(f, "0"),
            IntervalExpr::One => write!(f, "1"),
            IntervalExpr::Var(n) => write!(f, "{n}"),
        }
    }
}

/// `first` followed by `second`: the map sending `v` to `second(first(v))`.
///
/// Reading maps as cube morphisms this is the composite `first ∘ second`.
pub fn then(first: &VarMap, second: &VarMap) -> VarMap {
    let mut out: VarMap = first
        .iter()
        .map(|(v, e)| (v.clone(), e.apply(second)))
        .collect();
    for (v, e) in second {
        out.entry(v.clone()).or_insert_with(|| e.clone());
    }
    out
}

/// A morphism `dom → cod` of the cube category, stored as an assignment of
/// interval expressions over `dom` to the variables of `cod`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    dom: DimCtx,
    cod: DimCtx,
    map: VarMap,
}

impl Substitution {
    pub fn new(dom: DimCtx, cod: DimCtx, assignment: VarMap) -> Result<Self> {
        for v in assignment.keys() {
            if !cod.contains(v) {
                return Err(Error::Unbound(v.clone()));
            }
        }
        let mut map = VarMap::new();
        for v in cod.names() {
            let e = assignment
                .get(v)
                .cloned()
                .ok_or_else(|| Error::validation(format!("no assignment for `{v}`")))?;
            if let IntervalExpr::Var(w) = &e {
                if !dom.contains(w) {
                    return Err(Error::Unbound(w.clone()));
                }
            }
            map.insert(v.clone(), e);
        }
        Ok(Substitution { dom, cod, map })
    }

    pub fn identity(ctx: &DimCtx) -> Self {
        let map = ctx
            .names()
            .iter()
            .map(|n| (n.clone(), IntervalExpr::Var(n.clone())))
            .collect();
        Substitution {
            dom: ctx.clone(),
            cod: ctx.clone(),
            map,
        }
    }

    /// The projection `ctx → ctx \ {n}` that forgets nothing but the name.
    pub fn weakening(ctx: &DimCtx, n: &str) -> Self {
        let small = ctx.without(n);
        let map = small
            .names()
            .iter()
            .map(|m| (m.clone(), IntervalExpr::Var(m.clone())))
            .collect();
        Substitution {
            dom: ctx.clone(),
            cod: small,
            map,
        }
    }

    /// A substitution read off a raw map: the codomain is the set of mapped
    /// names and the domain the variables occurring in the values, both in
    /// name order.
    pub fn from_map(m: &VarMap) -> Self {
        let cod = DimCtx {
            names: m.keys().cloned().collect(),
        };
        let mut dom: Vec<Name> = m.values().filter_map(|e| e.as_var().cloned()).collect();
        dom.sort();
        dom.dedup();
        Substitution {
            dom: DimCtx { names: dom },
            cod,
            map: m.clone(),
        }
    }

    /// Replace the single variable `n` of `ctx` by `e`, an expression over the
    /// remaining variables.
    pub fn point(ctx: &DimCtx, n: &str, e: IntervalExpr) -> Result<Self> {
        let dom = ctx.without(n);
        let mut map = Substitution::identity(&dom).map;
        map.insert(name(n), e);
        Substitution::new(dom, ctx.clone(), map)
    }

    pub fn dom(&self) -> &DimCtx {
        &self.dom
    }

    pub fn cod(&self) -> &DimCtx {
        &self.cod
    }

    pub fn map(&self) -> &VarMap {
        &self.map
    }

    pub fn get(&self, v: &str) -> Option<&IntervalExpr> {
        self.map.get(v)
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().all(|(v, e)| e.mentions(v))
    }

    /// Interpret an expression over `cod` as one over `dom`.
    pub fn apply(&self, e: &IntervalExpr) -> IntervalExpr {
        e.apply(&self.map)
    }

    /// `self ∘ g` for `self: J → I` and `g: K → J`.
    pub fn compose(&self, g: &Substitution) -> Result<Substitution> {
        if self.dom != g.cod {
            return Err(Error::ContextMismatch {
                expected: self.dom.to_string(),
                found: g.cod.to_string(),
            });
        }
        let map = self
            .map
            .iter()
            .map(|(v, e)| (v.clone(), g.apply(e)))
            .collect();
        Ok(Substitution {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            map,
        })
    }

    /// Extend `self` by a variable mapped to itself on both sides.
    pub fn weaken(&self, fresh: Name) -> Result<Substitution> {
        let dom = self.dom.extend(fresh.clone())?;
        let cod = self.cod.extend(fresh.clone())?;
        let mut map = self.map.clone();
        map.insert(fresh.clone(), IntervalExpr::Var(fresh));
        Ok(Substitution { dom, cod, map })
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.cod.names().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}:={}", self.map[v])?;
        }
        write!(f, "}}")
    }
}

/// Print a raw map in substitution syntax.
pub fn show_map(map: &VarMap) -> String {
    let body: Vec<String> = map.iter().map(|(v, e)| format!("{v}:={e}")).collect();
    format!("{{{}}}", body.join(", "))
}

/// One representative of every class of maps out of `ctx`, up to renaming of
/// the target: each variable goes to 0, 1 or a block of a partition, and a
/// block is named after its first member.
pub fn critical_substitutions(ctx: &DimCtx) -> Vec<Substitution> {
    let names = ctx.names();
    let mut out = Vec::new();
    let mut assign: Vec<IntervalExpr> = Vec::with_capacity(names.len());
    fn go(
        names: &[Name],
        ctx: &DimCtx,
        assign: &mut Vec<IntervalExpr>,
        out: &mut Vec<Substitution>,
    ) {
        let k = assign.len();
        if k == names.len() {
            let blocks: Vec<Name> = names
                .iter()
                .zip(assign.iter())
                .filter(|(n, e)| e.mentions(n))
                .map(|(n, _)| n.clone())
                .collect();
            let dom = DimCtx { names: blocks };
            let map = names.iter().cloned().zip(assign.iter().cloned()).collect();
            out.push(Substitution {
                dom,
                cod: ctx.clone(),
                map,
            });
            return;
        }
        let mut options = vec![IntervalExpr::Zero, IntervalExpr::One];
        for (n, e) in names[..k].iter().zip(assign.iter()) {
            if e.mentions(n) {
                options.push(e.clone());
            }
        }
        options.push(IntervalExpr::Var(names[k].clone()));
        for o in options {
            assign.push(o);
            go(names, ctx, assign, out);
            assign.pop();
        }
    }
    go(names, ctx, &mut assign, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(ns: &[&str]) -> DimCtx {
        DimCtx::new(ns.iter().copied()).unwrap()
    }

    fn sub(dom: &[&str], cod: &[&str], pairs: &[(&str, IntervalExpr)]) -> Substitution {
        let map = pairs.iter().map(|(v, e)| (name(v), e.clone())).collect();
        Substitution::new(ctx(dom), ctx(cod), map).unwrap()
    }

    /// All maps `dom → cod`, by brute force over every assignment.
    fn all_maps(dom: &DimCtx, cod: &DimCtx) -> Vec<Substitution> {
        let mut values = vec![IntervalExpr::Zero, IntervalExpr::One];
        values.extend(dom.names().iter().cloned().map(IntervalExpr::Var));
        let mut out = vec![VarMap::new()];
        for v in cod.names() {
            out = out
                .into_iter()
                .flat_map(|m| {
                    values.iter().map(move |e| {
                        let mut m = m.clone();
                        m.insert(v.clone(), e.clone());
                        m
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|m| Substitution::new(dom.clone(), cod.clone(), m).unwrap())
            .collect()
    }

    fn small_ctxs() -> Vec<DimCtx> {
        vec![ctx(&[]), ctx(&["a"]), ctx(&["a", "b"])]
    }

    #[test]
    fn compose_examples() {
        let f = sub(&["j"], &["i"], &[("i", IntervalExpr::var("j"))]);
        let g = sub(&[], &["j"], &[("j", IntervalExpr::Zero)]);
        assert_eq!(
            f.compose(&g).unwrap(),
            sub(&[], &["i"], &[("i", IntervalExpr::Zero)])
        );

        let id = Substitution::identity(&ctx(&["i"]));
        let g = sub(&["k"], &["i"], &[("i", IntervalExpr::var("k"))]);
        assert_eq!(id.compose(&g).unwrap(), g);

        let f = sub(
            &["j"],
            &["i", "i'"],
            &[("i", IntervalExpr::var("j")), ("i'", IntervalExpr::var("j"))],
        );
        let g = sub(&[], &["j"], &[("j", IntervalExpr::One)]);
        let fg = f.compose(&g).unwrap();
        // pointwise: evaluate f(v) and then g on the result
        for v in ["i", "i'"] {
            let expected = g.apply(f.get(v).unwrap());
            assert_eq!(fg.get(v), Some(&expected));
            assert_eq!(expected, IntervalExpr::One);
        }
    }

    #[test]
    fn compose_rejects_mismatch() {
        let f = sub(&["j"], &["i"], &[("i", IntervalExpr::var("j"))]);
        assert!(matches!(
            f.compose(&f),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn compose_is_associative_and_unital() {
        let cs = small_ctxs();
        for i in &cs {
            for j in &cs {
                for k in &cs {
                    let l = &cs[1];
                    for f in all_maps(j, i) {
                        assert_eq!(Substitution::identity(i).compose(&f).unwrap(), f);
                        assert_eq!(f.compose(&Substitution::identity(j)).unwrap(), f);
                        for g in all_maps(k, j) {
                            let fg = f.compose(&g).unwrap();
                            for h in all_maps(l, k) {
                                assert_eq!(
                                    fg.compose(&h).unwrap(),
                                    f.compose(&g.compose(&h).unwrap()).unwrap()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weaken_examples() {
        let f = sub(&[], &["i"], &[("i", IntervalExpr::Zero)]);
        let w = f.weaken(name("k")).unwrap();
        assert_eq!(
            w,
            sub(
                &["k"],
                &["i", "k"],
                &[("i", IntervalExpr::Zero), ("k", IntervalExpr::var("k"))]
            )
        );
        let id0 = Substitution::identity(&DimCtx::empty());
        assert_eq!(
            id0.weaken(name("i")).unwrap(),
            Substitution::identity(&ctx(&["i"]))
        );

        let f = sub(&["j"], &["i"], &[("i", IntervalExpr::var("j"))]);
        let g = sub(&[], &["j"], &[("j", IntervalExpr::One)]);
        let lhs = f.compose(&g).unwrap().weaken(name("k")).unwrap();
        let rhs = f
            .weaken(name("k"))
            .unwrap()
            .compose(&g.weaken(name("k")).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(f.weaken(name("j")), Err(Error::Collision(_))));
    }

    #[test]
    fn weaken_identity_is_identity() {
        for c in small_ctxs() {
            let w = Substitution::identity(&c).weaken(name("z")).unwrap();
            assert_eq!(w, Substitution::identity(&c.extend(name("z")).unwrap()));
        }
    }

    /// Reference count: assignments into {0,1} ∪ blocks, blocks up to renaming.
    /// Sum over the number c of variables sent to constants of
    /// C(n,c) 2^c Bell(n-c).
    fn expected_count(n: usize) -> usize {
        let bell = [1usize, 1, 2, 5, 15];
        let binom = |n: usize, k: usize| -> usize {
            (0..k).fold(1, |acc, x| acc * (n - x) / (x + 1))
        };
        (0..=n).map(|c| binom(n, c) * (1 << c) * bell[n - c]).sum()
    }

    #[test]
    fn critical_counts() {
        assert_eq!(critical_substitutions(&ctx(&[])).len(), 1);
        assert_eq!(
            critical_substitutions(&ctx(&[]))[0],
            Substitution::identity(&ctx(&[]))
        );
        assert_eq!(critical_substitutions(&ctx(&["i"])).len(), 3);
        assert_eq!(critical_substitutions(&ctx(&["i", "j"])).len(), 10);
        for n in 0..=4 {
            let names: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
            let c = DimCtx::new(names.iter()).unwrap();
            assert_eq!(critical_substitutions(&c).len(), expected_count(n));
        }
    }

    #[test]
    fn every_map_factors_through_a_critical_one() {
        for i in small_ctxs() {
            let crit = critical_substitutions(&i);
            for j in small_ctxs().into_iter().filter(|j| j.len() <= i.len()) {
                for f in all_maps(&j, &i) {
                    let found = crit.iter().any(|q| {
                        all_maps(&j, q.dom())
                            .iter()
                            .any(|r| q.compose(r).unwrap() == f)
                    });
                    assert!(found, "{f} does not factor");
                }
            }
        }
    }

    #[test]
    fn display() {
        let f = sub(
            &["k"],
            &["i", "j"],
            &[("i", IntervalExpr::Zero), ("j", IntervalExpr::var("k"))],
        );
        assert_eq!(f.to_string(), "{i:=0, j:=k}");
    }
}
