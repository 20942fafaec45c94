use std::fmt;
use std::sync::Arc;

use crate::cofib::Face;
use crate::cube::{name, Name, Substitution, VarMap};
use crate::terms::partial::{Payload, PartialElement};

/// A term of the free algebra. Cheap to clone; structurally compared.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Arc<Node>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    /// A generator of the base presentation (object, element or hom).
    Gen(Name),
    IdHom(Term),
    /// `Comp(a, b)` is `a ∘ b`: first `b`, then `a`.
    Comp(Term, Term),
    Inv(Term),
    GlueOb(Arc<Glue>),
    GlueIsoFwd(Arc<Glue>),
    ExtSet(Arc<Ext>),
    Restrict(Term, Substitution),
}

/// Shared payload of a glue object and its iso `base → glue`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Glue {
    pub base: Term,
    pub pieces: PartialElement<GluePiece>,
}

/// An object together with an iso from the glue base to it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GluePiece {
    pub ob: Term,
    pub fwd: Term,
    pub inv: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ext {
    pub base: Term,
    pub pieces: PartialElement<Term>,
}

/// The sort of a term, with normal-form endpoints for homs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Ob,
    Elt,
    Hom(Term, Term),
}

impl Term {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn gen(n: &str) -> Term {
        Term(Arc::new(Node::Gen(name(n))))
    }

    pub fn gen_name(n: Name) -> Term {
        Term(Arc::new(Node::Gen(n)))
    }

    pub fn id(x: Term) -> Term {
        Term(Arc::new(Node::IdHom(x)))
    }

    pub fn comp(a: Term, b: Term) -> Term {
        Term(Arc::new(Node::Comp(a, b)))
    }

    /// Right-nested composite of a nonempty list.
    pub fn comps(items: Vec<Term>) -> Option<Term> {
        items.into_iter().rev().reduce(|acc, t| Term::comp(t, acc))
    }

    pub fn inv(h: Term) -> Term {
        Term(Arc::new(Node::Inv(h)))
    }

    pub fn glue_ob(g: Arc<Glue>) -> Term {
        Term(Arc::new(Node::GlueOb(g)))
    }

    pub fn glue_fwd(g: Arc<Glue>) -> Term {
        Term(Arc::new(Node::GlueIsoFwd(g)))
    }

    pub fn ext(e: Arc<Ext>) -> Term {
        Term(Arc::new(Node::ExtSet(e)))
    }

    pub fn restrict(t: Term, f: Substitution) -> Term {
        Term(Arc::new(Node::Restrict(t, f)))
    }

    /// `t` restricted along a raw map; `t` itself when the map is empty.
    pub fn under(t: &Term, m: &VarMap) -> Term {
        if m.is_empty() {
            t.clone()
        } else {
            Term::restrict(t.clone(), Substitution::from_map(m))
        }
    }

    pub fn as_gen(&self) -> Option<&Name> {
        match self.node() {
            Node::Gen(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_restrict_free(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |t| {
            if matches!(t.node(), Node::Restrict(..)) {
                ok = false;
            }
        });
        ok
    }

    /// Pre-order traversal of every subterm, including glue and ext payloads.
    pub fn walk(&self, visit: &mut dyn FnMut(&Term)) {
        visit(self);
        match self.node() {
            Node::Gen(_) => {}
            Node::IdHom(x) | Node::Inv(x) | Node::Restrict(x, _) => x.walk(visit),
            Node::Comp(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Node::GlueOb(g) | Node::GlueIsoFwd(g) => {
                g.base.walk(visit);
                for p in g.pieces.payloads() {
                    for t in p.subterms() {
                        t.walk(visit);
                    }
                }
            }
            Node::ExtSet(e) => {
                e.base.walk(visit);
                for p in e.pieces.payloads() {
                    p.walk(visit);
                }
            }
        }
    }

    /// Nesting depth of glue and ext nodes (generators have depth 0).
    pub fn ext_depth(&self) -> usize {
        match self.node() {
            Node::Gen(_) => 0,
            Node::IdHom(x) | Node::Inv(x) | Node::Restrict(x, _) => x.ext_depth(),
            Node::Comp(a, b) => a.ext_depth().max(b.ext_depth()),
            Node::GlueOb(g) | Node::GlueIsoFwd(g) => {
                let inner = g
                    .pieces
                    .payloads()
                    .iter()
                    .flat_map(|p| p.subterms())
                    .map(Term::ext_depth)
                    .max()
                    .unwrap_or(0);
                1 + g.base.ext_depth().max(inner)
            }
            Node::ExtSet(e) => {
                let inner = e
                    .pieces
                    .payloads()
                    .iter()
                    .map(Term::ext_depth)
                    .max()
                    .unwrap_or(0);
                1 + e.base.ext_depth().max(inner)
            }
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_cases<P: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    faces: &[Face],
    payloads: &[P],
) -> fmt::Result {
    write!(f, "[")?;
    for (k, (c, p)) in faces.iter().zip(payloads).enumerate() {
        if k > 0 {
            write!(f, "; ")?;
        }
        write!(f, "{c} |-> {p}")?;
    }
    write!(f, "]")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Gen(n) => write!(f, "{n}"),
            Node::IdHom(x) => write!(f, "id({x})"),
            Node::Comp(a, b) => write!(f, "comp({a}, {b})"),
            Node::Inv(h) => write!(f, "inv({h})"),
            Node::GlueOb(g) => {
                write!(f, "glue({}, ", g.base)?;
                fmt_cases(f, g.pieces.faces(), g.pieces.payloads())?;
                write!(f, ")")
            }
            Node::GlueIsoFwd(g) => {
                write!(f, "gluefwd({}, ", g.base)?;
                fmt_cases(f, g.pieces.faces(), g.pieces.payloads())?;
                write!(f, ")")
            }
            Node::ExtSet(e) => {
                write!(f, "ext({}, ", e.base)?;
                fmt_cases(f, e.pieces.faces(), e.pieces.payloads())?;
                write!(f, ")")
            }
            Node::Restrict(t, s) => write!(f, "restrict({t}, {s})"),
        }
    }
}

impl fmt::Display for GluePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.ob, self.fwd, self.inv)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Ob => write!(f, "Ob"),
            Sort::Elt => write!(f, "Elt"),
            Sort::Hom(x, y) => write!(f, "Hom({x}, {y})"),
        }
    }
}
