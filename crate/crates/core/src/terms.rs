//! Term syntax for Boole's signature `{+, -, *, 0, 1}` plus integer literals.
//!
//! Grammar (juxtaposition is multiplication, `*` binds tighter than `+`/`-`,
//! all binary operators associate to the left):
//!
//! ```text
//! term := sum
//! sum  := prod (('+' | '-') prod)*
//! prod := atom ('*'? atom)*
//! atom := ident | intlit | '(' sum ')'
//! ```
//!
//! There is no unary minus and no exponent syntax: `-x` is written `0 - x`
//! and `x²` is written `x*x`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

/// Name of the hole in congruence contexts. It is not a valid identifier of
/// the term grammar, so it never collides with a user variable.
pub const HOLE: &str = "_";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Non-negative literal. `0` and `1` are the signature constants; larger
    /// literals are integer sugar (`2x`).
    Int(BigUint),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn int(n: u64) -> Term {
        Term::Int(BigUint::from(n))
    }

    pub fn zero() -> Term {
        Term::int(0)
    }

    pub fn one() -> Term {
        Term::int(1)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    /// Variables occurring in the term, in name order.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Int(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    /// Height of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Int(_) => 0,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Replaces every occurrence of the variable `name` by `with`.
    pub fn substitute(&self, name: &str, with: &Term) -> Term {
        match self {
            Term::Var(v) if v == name => with.clone(),
            Term::Var(_) | Term::Int(_) => self.clone(),
            Term::Add(a, b) => Term::add(a.substitute(name, with), b.substitute(name, with)),
            Term::Sub(a, b) => Term::sub(a.substitute(name, with), b.substitute(name, with)),
            Term::Mul(a, b) => Term::mul(a.substitute(name, with), b.substitute(name, with)),
        }
    }

    /// Calls `f` on this term and every subterm, parents first.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Var(_) | Term::Int(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if let Term::Var(v) = t {
                found |= v == name;
            }
        });
        found
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// A ground or open equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = self.lhs.variables();
        self.rhs.collect_variables(&mut out);
        out
    }

    /// `lhs - rhs`, the term whose vanishing the equation asserts.
    pub fn difference(&self) -> Term {
        Term::sub(self.lhs.clone(), self.rhs.clone())
    }

    pub fn flipped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A ground equational argument: premisses `e1, ..., ek` and a conclusion `e`,
/// all over class-symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Argument {
    pub premisses: Vec<Equation>,
    pub conclusion: Equation,
}

impl Argument {
    pub fn new(premisses: Vec<Equation>, conclusion: Equation) -> Self {
        Argument {
            premisses,
            conclusion,
        }
    }

    /// Every class-symbol mentioned anywhere in the argument, in name order.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = self.conclusion.variables();
        for p in &self.premisses {
            p.lhs.collect_variables(&mut out);
            p.rhs.collect_variables(&mut out);
        }
        out
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let premisses: Vec<String> = self.premisses.iter().map(ToString::to_string).collect();
        if premisses.is_empty() {
            write!(f, "⊢ {}", self.conclusion)
        } else {
            write!(f, "{} ⊢ {}", premisses.join(", "), self.conclusion)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigUint),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Equals,
    Hole,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("literal `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Hole => "`_`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str, allow_hole: bool) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigUint>().expect("ascii digits");
            toks.push((Tok::Int(n), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' | '≈' => Tok::Equals,
            '_' if allow_hole => Tok::Hole,
            other => {
                return Err(ParseError {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((tok, col));
        i += 1;
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.prod()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Term::add(acc, self.prod()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = Term::sub(acc, self.prod()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = Term::mul(acc, self.atom()?);
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen | Tok::Hole => {
                    acc = Term::mul(acc, self.atom()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::Var(name))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::Hole => {
                self.bump();
                Ok(Term::Var(HOLE.to_string()))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if *self.peek() != Tok::RParen {
                    return self.error(format!("expected `)`, found {}", self.peek().describe()));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Minus => self.error("unary minus is not supported; write `0 - t` instead of `-t`"),
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            other => self.error(format!("unexpected {}", other.describe())),
        }
    }
}

fn parser(text: &str, allow_hole: bool) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text, allow_hole)?,
        pos: 0,
    })
}

pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = parser(text, false)?;
    let t = p.sum()?;
    p.expect_end()?;
    Ok(t)
}

/// Parses `lhs = rhs`; `≈` is accepted in place of `=`.
pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let mut p = parser(text, false)?;
    let lhs = p.sum()?;
    if *p.peek() != Tok::Equals {
        return p.error(format!("expected `=`, found {}", p.peek().describe()));
    }
    p.bump();
    let rhs = p.sum()?;
    p.expect_end()?;
    Ok(Equation::new(lhs, rhs))
}

/// Parses a one-hole context: a term in which `_` marks the hole.
pub fn parse_context(text: &str) -> Result<Term, ParseError> {
    let mut p = parser(text, true)?;
    let t = p.sum()?;
    p.expect_end()?;
    if !t.contains_var(HOLE) {
        return Err(ParseError {
            column: 1,
            message: "context must contain the hole `_`".into(),
        });
    }
    Ok(t)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Prod,
    Atom,
}

fn prec(t: &Term) -> Prec {
    match t {
        Term::Add(..) | Term::Sub(..) => Prec::Sum,
        Term::Mul(..) => Prec::Prod,
        Term::Var(_) | Term::Int(_) => Prec::Atom,
    }
}

fn write_at(t: &Term, min: Prec, out: &mut String) {
    if prec(t) < min {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Int(n) => out.push_str(&n.to_string()),
        Term::Add(a, b) => {
            write_at(a, Prec::Sum, out);
            out.push_str(" + ");
            write_at(b, Prec::Prod, out);
        }
        Term::Sub(a, b) => {
            write_at(a, Prec::Sum, out);
            out.push_str(" - ");
            write_at(b, Prec::Prod, out);
        }
        Term::Mul(a, b) => {
            write_at(a, Prec::Prod, out);
            out.push('*');
            write_at(b, Prec::Atom, out);
        }
    }
}

/// Renders with the fewest parentheses that still parse back to the same tree.
pub fn pretty(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}
