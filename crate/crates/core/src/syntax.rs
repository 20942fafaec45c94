//! Text formats: cofibrations, substitutions, terms, presentations, functor
//! files and filling problems.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::cat::Functor;
use crate::cofib::Cof;
use crate::cube::{name, DimCtx, IntervalExpr, Name, Substitution, VarMap};
use crate::error::{Error, Result};
use crate::kan::FillingProblem;
use crate::terms::{Ext, Glue, GluePiece, HomGen, Normalizer, PartialElement, Presentation, Rule, Term, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Eq,
    Assign,
    MapsTo,
    Arrow,
    And,
    Or,
    Colon,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line, col });
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let rest: String = chars[k..chars.len().min(k + 3)].iter().collect();
        if rest.starts_with("|->") {
            push(&mut out, Tok::MapsTo);
            k += 3;
        } else if rest.starts_with("->") {
            push(&mut out, Tok::Arrow);
            k += 2;
        } else if rest.starts_with(":=") {
            push(&mut out, Tok::Assign);
            k += 2;
        } else if rest.starts_with("/\\") {
            push(&mut out, Tok::And);
            k += 2;
        } else if rest.starts_with("\\/") {
            push(&mut out, Tok::Or);
            k += 2;
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                k += 1;
            }
            let word: String = chars[start..k].iter().collect();
            push(&mut out, Tok::Ident(word));
        } else {
            let tok = match c {
                '0' => Tok::Zero,
                '1' => Tok::One,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '.' => Tok::Dot,
                '=' => Tok::Eq,
                ':' => Tok::Colon,
                '∧' => Tok::And,
                '∨' => Tok::Or,
                '⊤' => Tok::Ident("T".into()),
                '⊥' => Tok::Ident("F".into()),
                '∀' => Tok::Ident("forall".into()),
                _ => {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            };
            push(&mut out, tok);
            k += 1;
        }
    }
    Ok(out)
}

fn describe<T: std::fmt::Debug>(t: Option<T>) -> String {
    match t {
        Some(t) => format!("{t:?}"),
        None => "end of input".into(),
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
    norm: Option<&'a Normalizer>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, line: usize, col0: usize, norm: Option<&'a Normalizer>) -> Result<Self> {
        Ok(Parser {
            toks: lex(src, line, col0)?,
            pos: 0,
            line,
            end_col: col0 + src.chars().count(),
            norm,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.line, self.end_col),
        };
        Err(Error::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {t:?}, found {}", describe(self.peek())))
        }
    }

    fn eat(&mut self, t: Tok) -> bool {
        if self.peek() == Some(&t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            other => self.err(format!("expected a name, found {}", describe(other))),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return self.err(format!("unexpected trailing {:?}", self.peek()));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<IntervalExpr> {
        match self.peek().cloned() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(IntervalExpr::Zero)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(IntervalExpr::One)
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(IntervalExpr::Var(name(&s)))
            }
            other => self.err(format!("expected 0, 1 or a dimension, found {}", describe(other))),
        }
    }

    fn cof(&mut self) -> Result<Cof> {
        let mut acc = self.conj()?;
        while self.eat(Tok::Or) {
            acc = Cof::or(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Cof> {
        let mut acc = self.unary()?;
        while self.eat(Tok::And) {
            acc = Cof::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Cof> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "forall" => {
                self.pos += 1;
                let v = self.ident()?;
                self.expect(Tok::Dot)?;
                Ok(Cof::forall(name(&v), self.cof()?))
            }
            Some(Tok::Ident(s)) if s == "T" => {
                self.pos += 1;
                Ok(Cof::Top)
            }
            Some(Tok::Ident(s)) if s == "F" => {
                self.pos += 1;
                Ok(Cof::Bot)
            }
            Some(Tok::LParen) => {
                let is_eq = matches!(
                    (self.peek_at(1), self.peek_at(2)),
                    (Some(Tok::Zero | Tok::One | Tok::Ident(_)), Some(Tok::Eq))
                );
                self.pos += 1;
                if is_eq {
                    let a = self.expr()?;
                    self.expect(Tok::Eq)?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Cof::Eq(a, b))
                } else {
                    let c = self.cof()?;
                    self.expect(Tok::RParen)?;
                    Ok(c)
                }
            }
            other => self.err(format!("expected a cofibration, found {}", describe(other))),
        }
    }

    fn subst(&mut self) -> Result<VarMap> {
        self.expect(Tok::LBrace)?;
        let mut m = VarMap::new();
        if self.eat(Tok::RBrace) {
            return Ok(m);
        }
        loop {
            let v = self.ident()?;
            self.expect(Tok::Assign)?;
            let e = self.expr()?;
            if m.insert(name(&v), e).is_some() {
                return self.err(format!("`{v}` assigned twice"));
            }
            if self.eat(Tok::RBrace) {
                return Ok(m);
            }
            self.expect(Tok::Comma)?;
        }
    }

    fn norm(&self) -> Result<&'a Normalizer> {
        match self.norm {
            Some(n) => Ok(n),
            None => self.err("glue and ext nodes need a presentation"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut parts = vec![self.primary()?];
        while self.eat(Tok::Dot) {
            parts.push(self.primary()?);
        }
        Ok(Term::comps(parts).expect("nonempty"))
    }

    fn args_end(&mut self) -> Result<()> {
        self.expect(Tok::RParen)
    }

    fn primary(&mut self) -> Result<Term> {
        let head = self.ident()?;
        if self.peek() != Some(&Tok::LParen) {
            if let Some(x) = head.strip_prefix("id_") {
                return Ok(Term::id(Term::gen(x)));
            }
            return Ok(Term::gen(&head));
        }
        self.pos += 1;
        let t = match head.as_str() {
            "id" => Term::id(self.term()?),
            "comp" => {
                let mut parts = vec![self.term()?];
                while self.eat(Tok::Comma) {
                    parts.push(self.term()?);
                }
                if parts.len() < 2 {
                    return self.err("comp needs at least two arguments");
                }
                Term::comps(parts).expect("nonempty")
            }
            "inv" => Term::inv(self.term()?),
            "glue" | "gluefwd" => {
                let base = self.term()?;
                self.expect(Tok::Comma)?;
                let cases = self.cases(|p| p.glue_payload())?;
                let pieces = PartialElement::from_cases(self.norm()?, cases)?;
                let g = Arc::new(Glue { base, pieces });
                if head == "glue" {
                    Term::glue_ob(g)
                } else {
                    Term::glue_fwd(g)
                }
            }
            "ext" => {
                let base = self.term()?;
                self.expect(Tok::Comma)?;
                let cases = self.cases(|p| p.term())?;
                let pieces = PartialElement::from_cases(self.norm()?, cases)?;
                Term::ext(Arc::new(Ext { base, pieces }))
            }
            "restrict" => {
                let t = self.term()?;
                self.expect(Tok::Comma)?;
                let m = self.subst()?;
                let dom = vars_of(&m);
                let cod = DimCtx::new(m.keys().map(|k| &**k))?;
                Term::restrict(t, Substitution::new(dom, cod, m)?)
            }
            other => return self.err(format!("unknown constructor `{other}`")),
        };
        self.args_end()?;
        Ok(t)
    }

    fn cases<P>(&mut self, mut payload: impl FnMut(&mut Self) -> Result<P>) -> Result<Vec<(Cof, P)>> {
        self.expect(Tok::LBrack)?;
        let mut out = Vec::new();
        if self.eat(Tok::RBrack) {
            return Ok(out);
        }
        loop {
            let c = self.cof()?;
            self.expect(Tok::MapsTo)?;
            out.push((c, payload(self)?));
            if self.eat(Tok::RBrack) {
                return Ok(out);
            }
            self.expect(Tok::Semi)?;
        }
    }

    fn glue_payload(&mut self) -> Result<GluePiece> {
        self.expect(Tok::LParen)?;
        let ob = self.term()?;
        self.expect(Tok::Comma)?;
        let fwd = self.term()?;
        let inv = if self.eat(Tok::Comma) {
            self.term()?
        } else {
            Term::inv(fwd.clone())
        };
        self.expect(Tok::RParen)?;
        Ok(GluePiece { ob, fwd, inv })
    }
}

/// The variables in the range of a map, as a context in name order.
fn vars_of(m: &VarMap) -> DimCtx {
    let mut vs: Vec<Name> = m.values().filter_map(|e| e.as_var().cloned()).collect();
    vs.sort();
    vs.dedup();
    DimCtx::new(vs.iter().map(|v| &**v)).expect("deduplicated")
}

pub fn parse_cof(src: &str) -> Result<Cof> {
    let mut p = Parser::new(src, 1, 1, None)?;
    let c = p.cof()?;
    p.done()?;
    Ok(c)
}

pub fn parse_expr(src: &str) -> Result<IntervalExpr> {
    let mut p = Parser::new(src, 1, 1, None)?;
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

/// Parse `{i:=0, j:=k}` as a raw assignment.
pub fn parse_subst_map(src: &str) -> Result<VarMap> {
    let mut p = Parser::new(src, 1, 1, None)?;
    let m = p.subst()?;
    p.done()?;
    Ok(m)
}

/// Parse a substitution `dom → cod`.
pub fn parse_subst(src: &str, dom: &DimCtx, cod: &DimCtx) -> Result<Substitution> {
    Substitution::new(dom.clone(), cod.clone(), parse_subst_map(src)?)
}

/// Parse a term; glue and ext pieces are validated against `n`.
pub fn parse_term(src: &str, n: &Normalizer) -> Result<Term> {
    parse_term_at(src, n, 1, 1)
}

fn parse_term_at(src: &str, n: &Normalizer, line: usize, col: usize) -> Result<Term> {
    let mut p = Parser::new(src, line, col, Some(n))?;
    let t = p.term()?;
    p.done()?;
    Ok(t)
}

fn parse_cof_at(src: &str, line: usize, col: usize) -> Result<Cof> {
    let mut p = Parser::new(src, line, col, None)?;
    let c = p.cof()?;
    p.done()?;
    Ok(c)
}

/// A line of an input file with its 1-based number and starting column.
#[derive(Clone, Debug)]
struct Line {
    no: usize,
    col: usize,
    text: String,
}

#[derive(Default, Debug)]
struct Sections {
    header: Vec<Line>,
    named: Vec<(String, Line, Vec<Line>)>,
}

fn split_sections(text: &str) -> Sections {
    let mut s = Sections::default();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = 1 + body.len() - body.trim_start().len();
        let line = Line {
            no: k + 1,
            col,
            text: trimmed.to_string(),
        };
        if trimmed.starts_with('[') && trimmed.ends_with(']') {
            let title = trimmed[1..trimmed.len() - 1].trim().to_string();
            s.named.push((title, line, Vec::new()));
        } else if let Some(last) = s.named.last_mut() {
            last.2.push(line);
        } else {
            s.header.push(line);
        }
    }
    s
}

fn perr<T>(line: &Line, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: line.no,
        col: line.col,
        msg: msg.into(),
    })
}

fn names_on(line: &Line) -> Result<Vec<Name>> {
    let toks = lex(&line.text, line.no, line.col)?;
    let mut out = Vec::new();
    for t in toks {
        match t.tok {
            Tok::Ident(s) => out.push(name(&s)),
            Tok::Comma => {}
            other => {
                return Err(Error::Parse {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected a generator name, found {}", describe(Some(other))),
                })
            }
        }
    }
    Ok(out)
}

fn word_on(line: &Line, src: &str, col: usize) -> Result<Vec<Name>> {
    let src = src.trim();
    if src.starts_with("id_") && !src.contains('.') {
        return Ok(Vec::new());
    }
    src.split('.')
        .map(|w| {
            let w = w.trim();
            if w.is_empty() || !w.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                Err(Error::Parse {
                    line: line.no,
                    col,
                    msg: format!("malformed word `{src}`"),
                })
            } else {
                Ok(name(w))
            }
        })
        .collect()
}

fn split_arrow(line: &Line) -> Result<(&str, &str, usize)> {
    match line.text.find("->") {
        Some(k) => Ok((&line.text[..k], &line.text[k + 2..], line.col + k + 2)),
        None => perr(line, "expected `->`"),
    }
}

fn presentation_from(sections: &Sections, extra_ok: &[&str]) -> Result<Presentation> {
    let mut theory = None;
    for line in &sections.header {
        let mut words = line.text.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("theory"), Some("CAT"), None) => theory = Some(Theory::Cat),
            (Some("theory"), Some("SET"), None) => theory = Some(Theory::Set),
            (Some("theory"), _, _) => return perr(line, "theory must be CAT or SET"),
            _ if extra_ok.contains(&"header") => {}
            _ => return perr(line, format!("unexpected line `{}`", line.text)),
        }
    }
    let theory = match theory {
        Some(t) => t,
        None => {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "missing `theory CAT|SET` line".into(),
            })
        }
    };
    let mut objects = Vec::new();
    let mut homs = Vec::new();
    let mut rule_lines = Vec::new();
    let mut hom_lines = Vec::new();
    for (title, head, lines) in &sections.named {
        match title.as_str() {
            "objects" | "elements" => {
                if title == "elements" && theory != Theory::Set {
                    return perr(head, "[elements] is only allowed in SET presentations");
                }
                for l in lines {
                    objects.extend(names_on(l)?);
                }
            }
            "homs" => {
                for l in lines {
                    let (lhs, rhs, col) = split_arrow(l)?;
                    let mut parts = lhs.split(':');
                    let (Some(n), Some(src), None) = (parts.next(), parts.next(), parts.next()) else {
                        return perr(l, "expected `f : x -> y`");
                    };
                    let (n, src, dst) = (n.trim(), src.trim(), rhs.trim());
                    if n.is_empty() || src.is_empty() || dst.is_empty() {
                        return Err(Error::Parse {
                            line: l.no,
                            col,
                            msg: "expected `f : x -> y`".into(),
                        });
                    }
                    homs.push(HomGen {
                        name: name(n),
                        src: name(src),
                        dst: name(dst),
                    });
                    hom_lines.push(l.clone());
                }
            }
            "rules" => rule_lines.extend(lines.iter().cloned()),
            other if extra_ok.contains(&other) => {}
            other => return perr(head, format!("unknown section [{other}]")),
        }
    }
    for (h, l) in homs.iter().zip(&hom_lines) {
        for end in [&h.src, &h.dst] {
            if !objects.contains(end) {
                return perr(l, format!("hom `{}` has unknown endpoint `{end}`", h.name));
            }
        }
    }
    let skeleton = Presentation::new(theory, objects.clone(), homs.clone(), Vec::new())
        .map_err(|e| Error::Parse {
            line: 1,
            col: 1,
            msg: e.to_string(),
        })?;
    let mut rules = Vec::new();
    for l in &rule_lines {
        let (lhs, rhs, col) = split_arrow(l)?;
        let lw = word_on(l, lhs, l.col)?;
        let rw = word_on(l, rhs, col)?;
        let (src, dst) = skeleton
            .word_endpoints(&lw)
            .or_else(|e| perr(l, e.to_string()))?;
        if rw.is_empty() {
            let obj = rhs.trim().trim_start_matches("id_");
            if obj != &*src || src != dst {
                return Err(Error::Parse {
                    line: l.no,
                    col,
                    msg: format!("identity `{}` does not match {src} -> {dst}", rhs.trim()),
                });
            }
        }
        rules.push(Rule {
            lhs: lw,
            rhs: rw,
            src,
            dst,
        });
    }
    Presentation::new(theory, objects, homs, rules).map_err(|e| Error::Parse {
        line: rule_lines.first().map(|l| l.no).unwrap_or(1),
        col: 1,
        msg: e.to_string(),
    })
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    presentation_from(&split_sections(text), &[])
}

pub fn load_presentation(path: &Path) -> Result<Presentation> {
    parse_presentation(&std::fs::read_to_string(path)?)
}

/// Parse a functor file. `source`/`target` paths are resolved relative to
/// `base_dir`.
pub fn parse_functor(text: &str, base_dir: &Path) -> Result<Functor> {
    let sections = split_sections(text);
    let mut source = None;
    let mut target = None;
    for line in &sections.header {
        let (key, rest) = line.text.split_once(char::is_whitespace).unwrap_or((&line.text, ""));
        let path = base_dir.join(rest.trim());
        match key {
            "source" => source = Some(load_presentation(&path).or_else(|e| perr(line, e.to_string()))?),
            "target" => target = Some(load_presentation(&path).or_else(|e| perr(line, e.to_string()))?),
            _ => return perr(line, format!("unexpected line `{}`", line.text)),
        }
    }
    let (Some(source), Some(target)) = (source, target) else {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "functor files need `source` and `target` lines".into(),
        });
    };
    let mut objects = BTreeMap::new();
    let mut homs = BTreeMap::new();
    for (title, head, lines) in &sections.named {
        for l in lines {
            let (lhs, rhs, col) = split_arrow(l)?;
            match title.as_str() {
                "objects" => {
                    objects.insert(name(lhs.trim()), name(rhs.trim()));
                }
                "homs" => {
                    homs.insert(name(lhs.trim()), word_on(l, rhs, col)?);
                }
                other => return perr(head, format!("unknown section [{other}]")),
            }
        }
    }
    Functor::new(Arc::new(source), Arc::new(target), objects, homs).map_err(|e| Error::Parse {
        line: 1,
        col: 1,
        msg: e.to_string(),
    })
}

pub fn load_functor(path: &Path) -> Result<Functor> {
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_functor(&std::fs::read_to_string(path)?, dir)
}

/// Parse a filling problem: a presentation followed by a `[problem]`
/// section of `key = value` lines (context, dim, r, s, cof, tube, base).
pub fn parse_problem(text: &str) -> Result<(Arc<Presentation>, FillingProblem)> {
    let sections = split_sections(text);
    let pres = Arc::new(presentation_from(&sections, &["problem"])?);
    let n = Normalizer::new(pres.clone());
    let Some((_, head, lines)) = sections.named.iter().find(|(t, _, _)| t == "problem") else {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "missing [problem] section".into(),
        });
    };
    let mut fields: BTreeMap<&str, &Line> = BTreeMap::new();
    for l in lines {
        let Some((k, _)) = l.text.split_once('=') else {
            return perr(l, "expected `key = value`");
        };
        fields.insert(k.trim(), l);
    }
    let value = |key: &str| -> Result<(String, usize, usize)> {
        let l = fields.get(key).copied().ok_or_else(|| Error::Parse {
            line: head.no,
            col: head.col,
            msg: format!("missing `{key}`"),
        })?;
        let (k, v) = l.text.split_once('=').expect("checked");
        Ok((v.to_string(), l.no, l.col + k.len() + 1))
    };
    let ctx_names = match fields.get("context") {
        Some(l) => {
            let (_, v) = l.text.split_once('=').expect("checked");
            names_on(&Line {
                no: l.no,
                col: l.col,
                text: v.trim().to_string(),
            })?
        }
        None => Vec::new(),
    };
    let ctx = DimCtx::new(ctx_names.iter().map(|n| &**n))?;
    let (dim, _, _) = value("dim")?;
    let dim = name(dim.trim());
    let (r, rl, rc) = value("r")?;
    let r = {
        let mut p = Parser::new(&r, rl, rc, None)?;
        let e = p.expr()?;
        p.done()?;
        e
    };
    let (s, sl, sc) = value("s")?;
    let s = {
        let mut p = Parser::new(&s, sl, sc, None)?;
        let e = p.expr()?;
        p.done()?;
        e
    };
    let (cof, cl, cc) = value("cof")?;
    let cof = parse_cof_at(&cof, cl, cc)?;
    let (tube, tl, tc) = value("tube")?;
    let tube_cases = {
        let mut p = Parser::new(&tube, tl, tc, Some(&n))?;
        let cases = p.cases(|p| p.term())?;
        p.done()?;
        cases
    };
    let (base, bl, bc) = value("base")?;
    let base = parse_term_at(&base, &n, bl, bc)?;
    let tube = PartialElement::from_cases(&n, tube_cases)?;
    let problem = FillingProblem::new(&n, ctx, dim, r, s, cof, tube, base)?;
    Ok((pres, problem))
}

pub fn load_problem(path: &Path) -> Result<(Arc<Presentation>, FillingProblem)> {
    parse_problem(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::library;

    #[test]
    fn cof_grammar() {
        let c = parse_cof("(i=0) /\\ (j=k) \\/ forall l. (l=l)").unwrap();
        assert_eq!(c.size(), 6);
        assert!(parse_cof("(i=0) /\\").is_err());
        match parse_cof("(i=0) /\\ (j=)") {
            Err(Error::Parse { line: 1, col: 13, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_cof("∀i. (i=0) ∨ ⊤").unwrap(), parse_cof("forall i. (i=0) \\/ T").unwrap());
    }

    #[test]
    fn subst_grammar() {
        let m = parse_subst_map("{i:=0, j:=k}").unwrap();
        assert_eq!(crate::cube::show_map(&m), "{i:=0, j:=k}");
        assert!(parse_subst_map("{i:=0, i:=1}").is_err());
    }

    #[test]
    fn presentation_round_trip() {
        let p = library::walking_iso();
        let q = parse_presentation(&p.to_string()).unwrap();
        assert_eq!(p, q);
        let text = "theory CAT\n[objects]\nx, y\n[homs]\nf : x -> y\n[rules]\nf -> id_x\n";
        match parse_presentation(text) {
            Err(Error::Parse { line: 7, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_presentation("theory CAT\n[objects]\nx\n[homs]\nf x -> y\n") {
            Err(Error::Parse { line: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_presentation("theory SET\n[elements]\na b\n").is_ok());
    }

    #[test]
    fn term_grammar_round_trip() {
        let n = Normalizer::new(Arc::new(library::walking_iso()));
        for s in [
            "comp(f, g)",
            "g.f",
            "id_x",
            "glue(x, [(i=0) |-> (y, f, g)])",
            "inv(gluefwd(x, []))",
            "restrict(glue(x, [(i=0) |-> (y, f, g)]), {i:=0})",
        ] {
            let t = parse_term(s, &n).unwrap();
            let again = parse_term(&t.to_string(), &n).unwrap();
            assert_eq!(t, again, "{s}");
        }
        assert!(parse_term("glue(x, [(i=0) |-> (y, f, g); (i=0) |-> (x, id_x, id_x)])", &n).is_err());
    }
}
