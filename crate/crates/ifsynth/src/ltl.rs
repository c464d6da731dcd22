//! LTL syntax, negation normal form and the syntactic safety check.

use std::fmt;

use crate::error::{Error, Result};
use crate::vars::{is_identifier, VarId, VarSet, VarTable};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Ltl {
    True,
    False,
    Var(VarId),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Globally(Box<Ltl>),
    Finally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    WeakUntil(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

use Ltl::*;

fn b(f: Ltl) -> Box<Ltl> {
    Box::new(f)
}

impl Ltl {
    pub fn var(v: VarId) -> Ltl {
        Var(v)
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        Not(b(f))
    }
    pub fn and(l: Ltl, r: Ltl) -> Ltl {
        And(b(l), b(r))
    }
    pub fn or(l: Ltl, r: Ltl) -> Ltl {
        Or(b(l), b(r))
    }
    pub fn iff(l: Ltl, r: Ltl) -> Ltl {
        Iff(b(l), b(r))
    }
    pub fn next(f: Ltl) -> Ltl {
        Next(b(f))
    }
    pub fn globally(f: Ltl) -> Ltl {
        Globally(b(f))
    }
    pub fn weak_until(l: Ltl, r: Ltl) -> Ltl {
        WeakUntil(b(l), b(r))
    }
    pub fn release(l: Ltl, r: Ltl) -> Ltl {
        Release(b(l), b(r))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj<I: IntoIterator<Item = Ltl>>(fs: I) -> Ltl {
        fs.into_iter().reduce(Ltl::and).unwrap_or(True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj<I: IntoIterator<Item = Ltl>>(fs: I) -> Ltl {
        fs.into_iter().reduce(Ltl::or).unwrap_or(False)
    }

    fn children(&self) -> Vec<&Ltl> {
        match self {
            True | False | Var(_) => vec![],
            Not(a) | Next(a) | Globally(a) | Finally(a) => vec![a],
            And(a, c) | Or(a, c) | Implies(a, c) | Iff(a, c) | Until(a, c) | WeakUntil(a, c)
            | Release(a, c) => vec![a, c],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Ltl::size).sum::<usize>()
    }

    pub fn atoms(&self) -> VarSet {
        match self {
            Var(v) => VarSet::singleton(*v),
            _ => self.children().into_iter().fold(VarSet::EMPTY, |s, c| s.union(c.atoms())),
        }
    }

    /// Negation normal form; the result uses only literals, `&`, `|`, `X`, `G`,
    /// `F`, `U`, `W` and `R`.
    pub fn nnf(&self) -> Ltl {
        nnf(self, true)
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Not(a) => matches!(**a, Var(_)),
            Implies(..) | Iff(..) => false,
            _ => self.children().into_iter().all(Ltl::is_nnf),
        }
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> Display<'a> {
        Display { f: self, vars }
    }
}

fn nnf(f: &Ltl, pos: bool) -> Ltl {
    match (f, pos) {
        (True, true) | (False, false) => True,
        (True, false) | (False, true) => False,
        (Var(v), true) => Var(*v),
        (Var(v), false) => Ltl::not(Var(*v)),
        (Not(a), _) => nnf(a, !pos),
        (And(a, c), true) => Ltl::and(nnf(a, true), nnf(c, true)),
        (And(a, c), false) => Ltl::or(nnf(a, false), nnf(c, false)),
        (Or(a, c), true) => Ltl::or(nnf(a, true), nnf(c, true)),
        (Or(a, c), false) => Ltl::and(nnf(a, false), nnf(c, false)),
        (Implies(a, c), true) => Ltl::or(nnf(a, false), nnf(c, true)),
        (Implies(a, c), false) => Ltl::and(nnf(a, true), nnf(c, false)),
        (Iff(a, c), true) => Ltl::or(
            Ltl::and(nnf(a, true), nnf(c, true)),
            Ltl::and(nnf(a, false), nnf(c, false)),
        ),
        (Iff(a, c), false) => Ltl::or(
            Ltl::and(nnf(a, true), nnf(c, false)),
            Ltl::and(nnf(a, false), nnf(c, true)),
        ),
        (Next(a), _) => Ltl::next(nnf(a, pos)),
        (Globally(a), true) => Ltl::globally(nnf(a, true)),
        (Globally(a), false) => Finally(b(nnf(a, false))),
        (Finally(a), true) => Finally(b(nnf(a, true))),
        (Finally(a), false) => Ltl::globally(nnf(a, false)),
        (Until(a, c), true) => Until(b(nnf(a, true)), b(nnf(c, true))),
        (Until(a, c), false) => Ltl::release(nnf(a, false), nnf(c, false)),
        (WeakUntil(a, c), true) => Ltl::weak_until(nnf(a, true), nnf(c, true)),
        (WeakUntil(a, c), false) => {
            Until(b(nnf(c, false)), b(Ltl::and(nnf(a, false), nnf(c, false))))
        }
        (Release(a, c), true) => Ltl::release(nnf(a, true), nnf(c, true)),
        (Release(a, c), false) => Until(b(nnf(a, false)), b(nnf(c, false))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SafetyVerdict {
    Safety,
    Rejected(String),
}

/// Syntactic safety: after NNF no `F` or `U` may remain.
pub fn check_safety(f: &Ltl) -> SafetyVerdict {
    fn find(f: &Ltl) -> Option<&'static str> {
        match f {
            Finally(_) => Some("F under positive polarity"),
            Until(..) => Some("U under positive polarity"),
            _ => f.children().into_iter().find_map(find),
        }
    }
    match find(&f.nnf()) {
        None => SafetyVerdict::Safety,
        Some(r) => SafetyVerdict::Rejected(r.to_string()),
    }
}

pub struct Display<'a> {
    f: &'a Ltl,
    vars: &'a VarTable,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn d<'a>(g: &'a Ltl, vars: &'a VarTable) -> Display<'a> {
            Display { f: g, vars }
        }
        match self.f {
            True => write!(out, "true"),
            False => write!(out, "false"),
            Var(v) => write!(out, "{}", self.vars.name(*v)),
            Not(a) => write!(out, "!{}", d(a, self.vars)),
            Next(a) => write!(out, "X {}", d(a, self.vars)),
            Globally(a) => write!(out, "G {}", d(a, self.vars)),
            Finally(a) => write!(out, "F {}", d(a, self.vars)),
            And(a, c) => write!(out, "({} & {})", d(a, self.vars), d(c, self.vars)),
            Or(a, c) => write!(out, "({} | {})", d(a, self.vars), d(c, self.vars)),
            Implies(a, c) => write!(out, "({} -> {})", d(a, self.vars), d(c, self.vars)),
            Iff(a, c) => write!(out, "({} <-> {})", d(a, self.vars), d(c, self.vars)),
            Until(a, c) => write!(out, "({} U {})", d(a, self.vars), d(c, self.vars)),
            WeakUntil(a, c) => write!(out, "({} W {})", d(a, self.vars), d(c, self.vars)),
            Release(a, c) => write!(out, "({} R {})", d(a, self.vars), d(c, self.vars)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    X,
    G,
    F,
    U,
    W,
    R,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                "X" => Tok::X,
                "G" => Tok::G,
                "F" => Tok::F,
                "U" => Tok::U,
                "W" => Tok::W,
                "R" => Tok::R,
                _ => Tok::Ident(word.to_string()),
            };
            toks.push((start, tok));
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else if rest.starts_with("&&") {
            (Tok::And, 2)
        } else if rest.starts_with("||") {
            (Tok::Or, 2)
        } else {
            match c {
                '!' | '~' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") }),
            }
        };
        toks.push((start, tok));
        i += len;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn iff(&mut self) -> Result<Ltl> {
        let mut l = self.implies()?;
        while self.eat(&Tok::Iff) {
            l = Ltl::iff(l, self.implies()?);
        }
        Ok(l)
    }

    fn implies(&mut self) -> Result<Ltl> {
        let l = self.or()?;
        if self.eat(&Tok::Implies) {
            return Ok(Implies(b(l), b(self.implies()?)));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Ltl> {
        let mut l = self.and()?;
        while self.eat(&Tok::Or) {
            l = Ltl::or(l, self.and()?);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut l = self.temporal()?;
        while self.eat(&Tok::And) {
            l = Ltl::and(l, self.temporal()?);
        }
        Ok(l)
    }

    fn temporal(&mut self) -> Result<Ltl> {
        let l = self.unary()?;
        let op = match self.peek() {
            Some(Tok::U) => Until,
            Some(Tok::W) => WeakUntil,
            Some(Tok::R) => Release,
            _ => return Ok(l),
        };
        self.pos += 1;
        Ok(op(b(l), b(self.temporal()?)))
    }

    fn unary(&mut self) -> Result<Ltl> {
        let op: fn(Box<Ltl>) -> Ltl = match self.peek() {
            Some(Tok::Not) => Not,
            Some(Tok::X) => Next,
            Some(Tok::G) => Globally,
            Some(Tok::F) => Finally,
            _ => return self.atom(),
        };
        self.pos += 1;
        Ok(op(b(self.unary()?)))
    }

    fn atom(&mut self) -> Result<Ltl> {
        match self.peek().cloned() {
            Some(Tok::True) => {
                self.pos += 1;
                Ok(True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(False)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.vars.id(&name).map(Var).ok_or(Error::UnknownVariable(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(f)
            }
            Some(_) => self.err("expected a formula"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text`, resolving identifiers in `vars`.
pub fn parse(text: &str, vars: &VarTable) -> Result<Ltl> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len(), vars };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Whether `name` can be used as a variable name in formulas.
pub fn is_variable_name(name: &str) -> bool {
    is_identifier(name) && !matches!(name, "true" | "false" | "X" | "G" | "F" | "U" | "W" | "R")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> VarTable {
        VarTable::from_names(&["a", "b", "c", "b_in", "b_out"]).unwrap()
    }

    #[test]
    fn sizes() {
        let t = table();
        assert_eq!(parse("G (b_in <-> X b_out)", &t).unwrap().size(), 5);
        assert_eq!(parse("G(a <-> X X X b)", &t).unwrap().size(), 7);
    }

    #[test]
    fn precedence() {
        let t = table();
        let f = parse("a | b & c -> G a U b <-> c", &t).unwrap();
        assert_eq!(f.display(&t).to_string(), "(((a | (b & c)) -> (G a U b)) <-> c)");
        let g = parse("a -> b -> c", &t).unwrap();
        assert_eq!(g.display(&t).to_string(), "(a -> (b -> c))");
        let h = parse("!X a W b", &t).unwrap();
        assert_eq!(h.display(&t).to_string(), "(!X a W b)");
    }

    #[test]
    fn display_roundtrips() {
        let t = table();
        for s in ["G (a <-> X b)", "!(a W (b R c)) | F a", "true & (false -> a)"] {
            let f = parse(s, &t).unwrap();
            let again = parse(&f.display(&t).to_string(), &t).unwrap();
            assert_eq!(f, again);
        }
    }

    #[test]
    fn errors() {
        let t = table();
        assert!(matches!(parse("G (a", &t), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("G zz", &t), Err(Error::UnknownVariable(n)) if n == "zz"));
        assert!(matches!(parse("a $ b", &t), Err(Error::Parse { pos: 2, .. })));
        assert!(parse("a b", &t).is_err());
    }

    #[test]
    fn safety_check() {
        let t = table();
        let ok = |s: &str| check_safety(&parse(s, &t).unwrap());
        assert_eq!(ok("G (b_in <-> X b_out)"), SafetyVerdict::Safety);
        assert_eq!(ok("a W b"), SafetyVerdict::Safety);
        assert_eq!(ok("!(a U b)"), SafetyVerdict::Safety);
        assert_eq!(ok("!G !b_out"), SafetyVerdict::Rejected("F under positive polarity".into()));
        assert_eq!(ok("a U b"), SafetyVerdict::Rejected("U under positive polarity".into()));
        assert_eq!(ok("!(a W b)"), SafetyVerdict::Rejected("U under positive polarity".into()));
    }

    #[test]
    fn nnf_shape() {
        let t = table();
        for s in ["!(a <-> X b)", "!(a -> G !b)", "!(a W b) & !(a R c)"] {
            let f = parse(s, &t).unwrap();
            assert!(f.nnf().is_nnf());
            assert_eq!(f.nnf().atoms(), f.atoms());
        }
    }
}
