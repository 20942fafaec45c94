//! Finite presentations of sets and categories.

use std::collections::BTreeSet;
use std::fmt;

use crate::cube::{name, Name};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theory {
    Set,
    Cat,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theory::Set => write!(f, "SET"),
            Theory::Cat => write!(f, "CAT"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomGen {
    pub name: Name,
    pub src: Name,
    pub dst: Name,
}

/// An oriented rule `lhs → rhs` between composable words of generators.
///
/// Words are listed in composition order: `[g, f]` is `g ∘ f`. An empty
/// right-hand side is the identity on `src`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Vec<Name>,
    pub rhs: Vec<Name>,
    pub src: Name,
    pub dst: Name,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &[Name], obj: &Name| {
            if w.is_empty() {
                format!("id_{obj}")
            } else {
                w.iter().map(|n| &**n).collect::<Vec<_>>().join(".")
            }
        };
        write!(f, "{} -> {}", show(&self.lhs, &self.src), show(&self.rhs, &self.src))
    }
}

/// A validated presentation. For `SET` the objects are the elements and
/// there are no homs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    theory: Theory,
    objects: Vec<Name>,
    homs: Vec<HomGen>,
    rules: Vec<Rule>,
}

impl Presentation {
    pub fn new(
        theory: Theory,
        objects: Vec<Name>,
        homs: Vec<HomGen>,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for n in objects.iter().chain(homs.iter().map(|h| &h.name)) {
            if n.starts_with("id_") || !seen.insert(n.clone()) {
                return Err(Error::validation(format!("generator name `{n}` is reserved or repeated")));
            }
        }
        if theory == Theory::Set && (!homs.is_empty() || !rules.is_empty()) {
            return Err(Error::validation("SET presentations have no homs or rules"));
        }
        let p = Presentation {
            theory,
            objects,
            homs,
            rules: Vec::new(),
        };
        for h in &p.homs {
            for end in [&h.src, &h.dst] {
                if !p.is_object(end) {
                    return Err(Error::validation(format!("hom `{}` has unknown endpoint `{end}`", h.name)));
                }
            }
        }
        for r in &rules {
            if r.lhs.is_empty() {
                return Err(Error::validation(format!("rule `{r}` has an empty left-hand side")));
            }
            let l = p.word_endpoints(&r.lhs)?;
            let rr = if r.rhs.is_empty() {
                (r.src.clone(), r.src.clone())
            } else {
                p.word_endpoints(&r.rhs)?
            };
            if l != rr || l != (r.src.clone(), r.dst.clone()) {
                return Err(Error::validation(format!("rule `{r}` relates homs with different endpoints")));
            }
        }
        Ok(Presentation { rules, ..p })
    }

    pub fn empty(theory: Theory) -> Self {
        Presentation {
            theory,
            objects: Vec::new(),
            homs: Vec::new(),
            rules: Vec::new(),
        }
    }

    /// A SET presentation with the given elements.
    pub fn set(elements: &[&str]) -> Result<Self> {
        Presentation::new(Theory::Set, elements.iter().map(|e| name(e)).collect(), Vec::new(), Vec::new())
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn objects(&self) -> &[Name] {
        &self.objects
    }

    pub fn homs(&self) -> &[HomGen] {
        &self.homs
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_object(&self, n: &str) -> bool {
        self.objects.iter().any(|o| &**o == n)
    }

    pub fn hom(&self, n: &str) -> Option<&HomGen> {
        self.homs.iter().find(|h| &*h.name == n)
    }

    /// `(src, dst)` of a nonempty composable word.
    pub fn word_endpoints(&self, word: &[Name]) -> Result<(Name, Name)> {
        let gens: Vec<&HomGen> = word
            .iter()
            .map(|n| {
                self.hom(n)
                    .ok_or_else(|| Error::validation(format!("unknown hom generator `{n}`")))
            })
            .collect::<Result<_>>()?;
        let first = gens.first().ok_or_else(|| Error::validation("empty word"))?;
        let last = gens.last().expect("nonempty");
        for pair in gens.windows(2) {
            if pair[0].src != pair[1].dst {
                return Err(Error::validation(format!(
                    "`{}` and `{}` are not composable",
                    pair[0].name, pair[1].name
                )));
            }
        }
        Ok((last.src.clone(), first.dst.clone()))
    }

    /// Normal form of a word of generators using only the presentation's
    /// rules, always rewriting the leftmost redex. Independent of the term
    /// normalizer; used to cross-check it.
    pub fn reduce_word(&self, word: &[Name], budget: usize) -> Result<Vec<Name>> {
        let mut w = word.to_vec();
        let mut steps = 0;
        'outer: loop {
            for k in 0..w.len() {
                for r in &self.rules {
                    if w[k..].starts_with(&r.lhs) {
                        steps += 1;
                        if steps > budget {
                            return Err(Error::BudgetExceeded(budget));
                        }
                        w.splice(k..k + r.lhs.len(), r.rhs.iter().cloned());
                        continue 'outer;
                    }
                }
            }
            return Ok(w);
        }
    }

    /// Pairs `(f, g)` of generators with `g ∘ f` and `f ∘ g` both reducing to
    /// identities.
    pub fn inverse_pairs(&self, budget: usize) -> Vec<(Name, Name)> {
        let mut out = Vec::new();
        for f in &self.homs {
            for g in &self.homs {
                if f.src != g.dst || f.dst != g.src {
                    continue;
                }
                let gf = self.reduce_word(&[g.name.clone(), f.name.clone()], budget);
                let fg = self.reduce_word(&[f.name.clone(), g.name.clone()], budget);
                if matches!((gf, fg), (Ok(a), Ok(b)) if a.is_empty() && b.is_empty()) {
                    out.push((f.name.clone(), g.name.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {}", self.theory)?;
        match self.theory {
            Theory::Set => writeln!(f, "[elements]")?,
            Theory::Cat => writeln!(f, "[objects]")?,
        }
        for o in &self.objects {
            writeln!(f, "{o}")?;
        }
        if self.theory == Theory::Cat {
            writeln!(f, "[homs]")?;
            for h in &self.homs {
                writeln!(f, "{} : {} -> {}", h.name, h.src, h.dst)?;
            }
            writeln!(f, "[rules]")?;
            for r in &self.rules {
                writeln!(f, "{r}")?;
            }
        }
        Ok(())
    }
}

/// Small presentations used throughout the tests and examples.
pub mod library {
    use super::*;

    fn hom(n: &str, s: &str, d: &str) -> HomGen {
        HomGen {
            name: name(n),
            src: name(s),
            dst: name(d),
        }
    }

    fn rule(lhs: &[&str], rhs: &[&str], src: &str, dst: &str) -> Rule {
        Rule {
            lhs: lhs.iter().map(|n| name(n)).collect(),
            rhs: rhs.iter().map(|n| name(n)).collect(),
            src: name(src),
            dst: name(dst),
        }
    }

    /// `f : x → y`, `g : y → x` with `g.f = id_x` and `f.g = id_y`.
    pub fn walking_iso() -> Presentation {
        Presentation::new(
            Theory::Cat,
            vec![name("x"), name("y")],
            vec![hom("f", "x", "y"), hom("g", "y", "x")],
            vec![rule(&["g", "f"], &[], "x", "x"), rule(&["f", "g"], &[], "y", "y")],
        )
        .expect("valid")
    }

    /// A single arrow `f : x → y`.
    pub fn walking_arrow() -> Presentation {
        Presentation::new(
            Theory::Cat,
            vec![name("x"), name("y")],
            vec![hom("f", "x", "y")],
            Vec::new(),
        )
        .expect("valid")
    }

    /// Two objects and nothing else.
    pub fn discrete2() -> Presentation {
        Presentation::new(Theory::Cat, vec![name("x"), name("y")], Vec::new(), Vec::new())
            .expect("valid")
    }

    pub fn truncation(elements: &[&str]) -> Presentation {
        Presentation::set(elements).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let p = library::walking_iso();
        assert_eq!(p.word_endpoints(&[name("g"), name("f")]).unwrap(), (name("x"), name("x")));
        assert!(p.word_endpoints(&[name("f"), name("f")]).is_err());
        let bad = Presentation::new(
            Theory::Cat,
            vec![name("x"), name("x")],
            Vec::new(),
            Vec::new(),
        );
        assert!(bad.is_err());
        let bad = Presentation::new(
            Theory::Cat,
            vec![name("x"), name("y")],
            vec![HomGen { name: name("f"), src: name("x"), dst: name("y") }],
            vec![Rule { lhs: vec![name("f")], rhs: vec![], src: name("x"), dst: name("y") }],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn reduce_word_and_inverses() {
        let p = library::walking_iso();
        let w: Vec<Name> = ["f", "g", "f", "g", "f"].iter().map(|n| name(n)).collect();
        assert_eq!(p.reduce_word(&w, 100).unwrap(), vec![name("f")]);
        assert_eq!(p.inverse_pairs(100).len(), 2);
        assert!(library::walking_arrow().inverse_pairs(100).is_empty());
    }
}
