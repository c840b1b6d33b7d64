//! Universal Horn sentences, relativization to a one-variable formula, and
//! bounded searches over total models.
//!
//! Theory files hold one sentence per line:
//!
//! ```text
//! # comments and blank lines are ignored
//! -> x + y = y + x
//! x + x = 0 -> x = 0
//! 0 = 1 -> false
//! ```
//!
//! Model search fills operation tables cell by cell. The signature is put in
//! canonical order (constants by value, then `+`, `-`, `*`, then any other
//! symbol by name); cells are enumerated row-major per operation and each
//! cell tries carrier elements in order. The first model found in this order
//! is the reported one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use thiserror::Error;

use crate::algebra::{self, AlgebraError, CompiledSentence, FinitePartialAlgebra, HornVerdict};
use crate::par;
use crate::terms::{parse_equation, Equation, ParseError, Term};
use crate::CapExceeded;

/// Default bound on the carrier size explored by model searches.
pub const DEFAULT_MAX_MODEL_SIZE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HornError {
    #[error("variable `{0}` is not quantified")]
    UnboundVariable(String),
    #[error("variable `{0}` is quantified twice")]
    DuplicateVariable(String),
    #[error("a sentence with consequent `false` needs at least one antecedent")]
    FalsumWithoutAntecedent,
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid relativizing formula: {0}")]
    InvalidDelta(String),
    #[error("operation `{0}` cannot be written as a term")]
    Inexpressible(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Consequent {
    Equation(Equation),
    /// The empty disjunction; `ante -> false` negates the antecedents.
    Falsum,
}

/// `(∀ vars)(antecedents → consequent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HornSentence {
    vars: Vec<String>,
    antecedents: Vec<Equation>,
    consequent: Consequent,
}

impl HornSentence {
    pub fn new(
        vars: Vec<String>,
        antecedents: Vec<Equation>,
        consequent: Consequent,
    ) -> Result<Self, HornError> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(HornError::DuplicateVariable(v.clone()));
            }
        }
        let s = HornSentence {
            vars,
            antecedents,
            consequent,
        };
        if let Some(v) = s.free_variables().into_iter().find(|v| !seen.contains(v)) {
            return Err(HornError::UnboundVariable(v));
        }
        if s.consequent == Consequent::Falsum && s.antecedents.is_empty() {
            return Err(HornError::FalsumWithoutAntecedent);
        }
        Ok(s)
    }

    /// Quantifies exactly the variables that occur, in name order.
    pub fn from_parts(antecedents: Vec<Equation>, consequent: Consequent) -> Result<Self, HornError> {
        let mut vars = BTreeSet::new();
        for e in &antecedents {
            vars.extend(e.variables());
        }
        if let Consequent::Equation(e) = &consequent {
            vars.extend(e.variables());
        }
        HornSentence::new(vars.into_iter().collect(), antecedents, consequent)
    }

    /// The identity `(∀x⃗) lhs = rhs`.
    pub fn identity(eq: Equation) -> Self {
        HornSentence::from_parts(Vec::new(), Consequent::Equation(eq)).expect("identities are well formed")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn antecedents(&self) -> &[Equation] {
        &self.antecedents
    }

    pub fn consequent(&self) -> &Consequent {
        &self.consequent
    }

    fn equations(&self) -> impl Iterator<Item = &Equation> {
        self.antecedents.iter().chain(match &self.consequent {
            Consequent::Equation(e) => Some(e),
            Consequent::Falsum => None,
        })
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for e in self.equations() {
            out.extend(e.variables());
        }
        out
    }

    /// Every term appearing in the sentence, in order of appearance.
    pub fn terms(&self) -> Vec<&Term> {
        self.equations().flat_map(|e| [&e.lhs, &e.rhs]).collect()
    }

    /// Operation symbols with arities.
    pub fn symbols(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        for t in self.terms() {
            t.visit(&mut |s| {
                if let Some(name) = algebra::symbol_of(s) {
                    let arity = if matches!(s, Term::Int(_)) { 0 } else { 2 };
                    out.insert((name, arity));
                }
            });
        }
        out
    }

    /// Parses one theory-file line: `a & b -> c`, `-> c`, `a -> false`, or a
    /// bare equation (an identity).
    pub fn parse(line: &str) -> Result<Self, HornError> {
        let perr = |column: usize, message: String| HornError::Parse {
            line: 1,
            column,
            message,
        };
        let at = |offset: usize, e: ParseError| perr(char_col(line, offset) + e.column - 1, e.message);
        let (lhs, rhs, rhs_off) = match line.find("->") {
            Some(i) => (&line[..i], &line[i + 2..], i + 2),
            None => ("", line, 0),
        };
        if rhs.contains("->") {
            return Err(perr(char_col(line, rhs_off + rhs.find("->").unwrap()), "more than one `->`".into()));
        }
        let mut antecedents = Vec::new();
        if !lhs.trim().is_empty() {
            let mut off = 0;
            for piece in lhs.split('&') {
                antecedents.push(parse_equation(piece).map_err(|e| at(off, e))?);
                off += piece.len() + 1;
            }
        }
        let consequent = match rhs.trim() {
            "false" | "⊥" => Consequent::Falsum,
            _ => Consequent::Equation(parse_equation(rhs).map_err(|e| at(rhs_off, e))?),
        };
        HornSentence::from_parts(antecedents, consequent)
    }
}

fn char_col(line: &str, byte_offset: usize) -> usize {
    line[..byte_offset].chars().count() + 1
}

impl fmt::Display for HornSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante: Vec<String> = self.antecedents.iter().map(ToString::to_string).collect();
        if !ante.is_empty() {
            write!(f, "{} ", ante.join(" & "))?;
        }
        match &self.consequent {
            Consequent::Equation(e) => write!(f, "-> {e}"),
            Consequent::Falsum => f.write_str("-> false"),
        }
    }
}

/// Parses a theory file; line numbers in errors are 1-based file lines.
pub fn parse_theory(text: &str) -> Result<Vec<HornSentence>, HornError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        out.push(HornSentence::parse(line).map_err(|e| match e {
            HornError::Parse { column, message, .. } => HornError::Parse {
                line: i + 1,
                column,
                message,
            },
            other => other,
        })?);
    }
    Ok(out)
}

pub fn render_theory(sigma: &[HornSentence]) -> String {
    sigma.iter().map(|s| format!("{s}\n")).collect()
}

/// A conjunction of atomic formulas in a single variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    var: String,
    atoms: Vec<Equation>,
}

impl Delta {
    pub fn new(var: &str, atoms: Vec<Equation>) -> Result<Self, HornError> {
        if atoms.is_empty() {
            return Err(HornError::InvalidDelta("needs at least one atom".into()));
        }
        let mut vars = BTreeSet::new();
        for a in &atoms {
            vars.extend(a.variables());
        }
        if vars.len() != 1 || !vars.contains(var) {
            return Err(HornError::InvalidDelta(format!(
                "exactly one free variable `{var}` required, found {{{}}}",
                vars.into_iter().collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(Delta {
            var: var.to_string(),
            atoms,
        })
    }

    /// `x*x = x`.
    pub fn idempotent() -> Self {
        let x = Term::var("x");
        Delta::new("x", vec![Equation::new(Term::mul(x.clone(), x.clone()), x)]).expect("valid")
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn atoms(&self) -> &[Equation] {
        &self.atoms
    }

    /// The atoms with the free variable renamed to `name`.
    pub fn instantiate(&self, name: &str) -> Vec<Equation> {
        let target = Term::var(name);
        self.atoms
            .iter()
            .map(|e| Equation::new(e.lhs.substitute(&self.var, &target), e.rhs.substitute(&self.var, &target)))
            .collect()
    }

    /// `(∀x) δ(x)` as a sentence.
    pub fn as_sentence(&self) -> HornSentence {
        let mut atoms = self.atoms.clone();
        let last = atoms.pop().expect("nonempty");
        HornSentence::new(vec![self.var.clone()], atoms, Consequent::Equation(last)).expect("valid")
    }

    /// One sentence per atom; their conjunction is `(∀x) δ(x)` as a set of
    /// identities.
    pub fn as_identities(&self) -> Vec<HornSentence> {
        self.atoms.iter().map(|a| HornSentence::identity(a.clone())).collect()
    }
}

/// `σ|_δ`: `δ(x_i)` prepended to the antecedents for every quantified `x_i`,
/// in quantifier order.
pub fn relativize(s: &HornSentence, delta: &Delta) -> HornSentence {
    let mut antecedents: Vec<Equation> = s.vars.iter().flat_map(|v| delta.instantiate(v)).collect();
    antecedents.extend(s.antecedents.iter().cloned());
    HornSentence {
        vars: s.vars.clone(),
        antecedents,
        consequent: s.consequent.clone(),
    }
}

/// Classical satisfaction in a total algebra.
pub fn holds_total(alg: &FinitePartialAlgebra, s: &HornSentence) -> Result<HornVerdict, HornError> {
    if let Some(gap) = alg.first_gap() {
        return Err(AlgebraError::NotTotal(gap).into());
    }
    Ok(algebra::holds(alg, s)?)
}

fn symbol_rank(name: &str, arity: usize) -> (u8, Option<BigUint>, String) {
    let class = match (arity, name) {
        (0, _) => 0,
        (_, "+") => 1,
        (_, "-") => 2,
        (_, "*") => 3,
        _ => 4,
    };
    (class, name.parse::<BigUint>().ok(), name.to_string())
}

/// Canonical signature order: constants (numerals by value), `+`, `-`, `*`,
/// then the rest by name.
pub fn canonical_signature(symbols: impl IntoIterator<Item = (String, usize)>) -> Vec<(String, usize)> {
    let mut sig: Vec<(String, usize)> = symbols
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    sig.sort_by_key(|(n, a)| (symbol_rank(n, *a), *a));
    sig
}

/// Symbols of a theory in canonical order.
pub fn theory_signature(sigma: &[HornSentence]) -> Vec<(String, usize)> {
    canonical_signature(sigma.iter().flat_map(|s| s.symbols()))
}

fn check_size(size: usize, cap: usize) -> Result<(), HornError> {
    if size > cap {
        return Err(CapExceeded {
            what: "model size",
            requested: size,
            cap,
        }
        .into());
    }
    Ok(())
}

fn element_names(size: usize) -> Vec<String> {
    (0..size).map(|i| i.to_string()).collect()
}

/// Backtracking over total tables with every sentence instance checked as
/// soon as all the cells it reads are filled.
struct ModelSearch {
    sentences: Vec<CompiledSentence>,
    /// sentences to recheck after filling a cell of operation `i`
    watchers: Vec<Vec<usize>>,
    cells: Vec<(usize, usize)>,
    size: usize,
}

impl ModelSearch {
    fn new(sigma: &[HornSentence], start: &FinitePartialAlgebra) -> Result<Self, HornError> {
        let sig = start.signature();
        let sentences: Vec<CompiledSentence> = sigma
            .iter()
            .map(|s| CompiledSentence::new(&sig, s))
            .collect::<Result<_, _>>()?;
        let watchers = sig
            .iter()
            .map(|(name, arity)| {
                sigma
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.symbols().contains(&(name.clone(), *arity)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let n = start.size();
        let cells = start
            .operations()
            .iter()
            .enumerate()
            .flat_map(|(oi, o)| {
                let slots = n.pow(o.arity() as u32);
                (0..slots)
                    .filter(move |&slot| {
                        let args = algebra::decode_assignment(slot, n, o.arity());
                        start.apply(oi, &args).is_none()
                    })
                    .map(move |slot| (oi, slot))
            })
            .collect();
        Ok(ModelSearch {
            sentences,
            watchers,
            cells,
            size: n,
        })
    }

    /// No fully determined instance of the given sentences is false.
    fn consistent(&self, alg: &FinitePartialAlgebra, which: impl Iterator<Item = usize>) -> bool {
        which.into_iter().all(|si| {
            let s = &self.sentences[si];
            let total = self.size.pow(s.arity as u32);
            (0..total).all(|i| {
                s.eval(alg, &algebra::decode_assignment(i, self.size, s.arity)) != Some(false)
            })
        })
    }

    fn run(
        &self,
        alg: &mut FinitePartialAlgebra,
        depth: usize,
        visit: &mut dyn FnMut(&FinitePartialAlgebra) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(&(op, slot)) = self.cells.get(depth) else {
            return visit(alg);
        };
        for v in 0..self.size {
            alg.set_slot(op, slot, Some(v));
            if self.consistent(alg, self.watchers[op].iter().copied()) {
                self.run(alg, depth + 1, visit)?;
            }
        }
        alg.set_slot(op, slot, None);
        ControlFlow::Continue(())
    }

    /// First completion in canonical order. The first free cell's values are
    /// explored as independent branches; the earliest successful branch wins.
    fn first(&self, start: &FinitePartialAlgebra) -> Option<FinitePartialAlgebra> {
        if !self.consistent(start, 0..self.sentences.len()) {
            return None;
        }
        let first_of = |alg: &mut FinitePartialAlgebra, depth: usize| {
            let mut found = None;
            let _ = self.run(alg, depth, &mut |m| {
                found = Some(m.clone());
                ControlFlow::Break(())
            });
            found
        };
        let Some(&(op, slot)) = self.cells.first() else {
            return first_of(&mut start.clone(), 0);
        };
        par::map_range(self.size, |v| {
            let mut alg = start.clone();
            alg.set_slot(op, slot, Some(v));
            if self.consistent(&alg, self.watchers[op].iter().copied()) {
                first_of(&mut alg, 1)
            } else {
                None
            }
        })
        .into_iter()
        .flatten()
        .next()
    }
}

/// First total model of `sigma` with `size` elements, in canonical order.
pub fn search_total_model(
    sigma: &[HornSentence],
    size: usize,
    cap: usize,
) -> Result<Option<FinitePartialAlgebra>, HornError> {
    check_size(size, cap)?;
    if size == 0 {
        return Ok(None);
    }
    let sig = theory_signature(sigma);
    let start = empty_algebra(element_names(size), &sig)?;
    Ok(ModelSearch::new(sigma, &start)?.first(&start))
}

fn empty_algebra(carrier: Vec<String>, sig: &[(String, usize)]) -> Result<FinitePartialAlgebra, HornError> {
    let sig_ref: Vec<(&str, usize)> = sig.iter().map(|(n, a)| (n.as_str(), *a)).collect();
    Ok(FinitePartialAlgebra::new(carrier, &sig_ref)?)
}

/// Calls `visit` on every total model of `sigma` with `size` elements, in
/// canonical order, until it breaks. Returns the number of models visited.
pub fn for_each_total_model(
    sigma: &[HornSentence],
    size: usize,
    cap: usize,
    mut visit: impl FnMut(&FinitePartialAlgebra) -> ControlFlow<()>,
) -> Result<usize, HornError> {
    check_size(size, cap)?;
    if size == 0 {
        return Ok(0);
    }
    let sig = theory_signature(sigma);
    let mut start = empty_algebra(element_names(size), &sig)?;
    let search = ModelSearch::new(sigma, &start)?;
    let mut count = 0;
    if search.consistent(&start, 0..search.sentences.len()) {
        let _ = search.run(&mut start, 0, &mut |m| {
            count += 1;
            visit(m)
        });
    }
    Ok(count)
}

/// Outcome of checking one sentence across every total model of a theory up to
/// a size bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSweep {
    /// `models[k - 1]` = number of models of size `k` examined.
    pub models: Vec<usize>,
    /// First model (and assignment) where the sentence fails.
    pub counterexample: Option<(FinitePartialAlgebra, algebra::Assignment)>,
}

impl ModelSweep {
    pub fn holds_everywhere(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `s` in every total model of `sigma` of size `1..=max_size`. The
/// signature is that of `sigma` together with the symbols of `s`.
pub fn sweep_total_models(
    sigma: &[HornSentence],
    s: &HornSentence,
    max_size: usize,
    cap: usize,
) -> Result<ModelSweep, HornError> {
    check_size(max_size, cap)?;
    // an identity carrying the symbols of `s` widens the signature without
    // constraining models
    let mut theory = sigma.to_vec();
    for t in s.terms() {
        theory.push(HornSentence::identity(Equation::new(t.clone(), t.clone())));
    }
    let mut models = Vec::new();
    let mut counterexample = None;
    let mut err = None;
    for size in 1..=max_size {
        let n = for_each_total_model(&theory, size, cap, |m| match holds_total(m, s) {
            Ok(HornVerdict::Holds) => ControlFlow::Continue(()),
            Ok(HornVerdict::Fails(a)) => {
                counterexample = Some((m.clone(), a));
                ControlFlow::Break(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        models.push(n);
        if counterexample.is_some() {
            break;
        }
    }
    Ok(ModelSweep {
        models,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbedVerdict {
    /// A total model `model` of the theory and an embedding of the partial
    /// algebra into it (images by carrier index).
    Witness {
        model: FinitePartialAlgebra,
        embedding: Vec<usize>,
    },
    /// No total model with at most this many elements receives the algebra.
    NoneUpTo(usize),
}

/// Searches models of `Σ ∪ Diag⁺(P) ∪ Distinct(P)` of each size from `|P|` to
/// `max_size`. Elements of `P` are placed first (identity embedding), so any
/// model that receives `P` is found up to renaming of the remaining
/// elements.
pub fn embeds_into_mod_bounded(
    p: &FinitePartialAlgebra,
    sigma: &[HornSentence],
    max_size: usize,
    cap: usize,
) -> Result<EmbedVerdict, HornError> {
    check_size(max_size, cap)?;
    let sig = canonical_signature(theory_signature(sigma).into_iter().chain(p.signature()));
    for size in p.size()..=max_size {
        let mut carrier: Vec<String> = p.carrier().to_vec();
        let mut next = 0usize;
        while carrier.len() < size {
            let name = loop {
                let candidate = format!("q{next}");
                next += 1;
                if !carrier.contains(&candidate) {
                    break candidate;
                }
            };
            carrier.push(name);
        }
        let mut start = empty_algebra(carrier, &sig)?;
        for o in p.operations() {
            for (args, v) in o.entries(p.size()) {
                start.set(o.name(), &args, v)?;
            }
        }
        if let Some(model) = ModelSearch::new(sigma, &start)?.first(&start) {
            return Ok(EmbedVerdict::Witness {
                model,
                embedding: (0..p.size()).collect(),
            });
        }
    }
    Ok(EmbedVerdict::NoneUpTo(max_size))
}

fn term_for(op: &str, args: Vec<Term>) -> Result<Term, HornError> {
    let mut args = args.into_iter();
    match (op, args.len()) {
        ("+", 2) | ("-", 2) | ("*", 2) => {
            let (a, b) = (args.next().unwrap(), args.next().unwrap());
            Ok(match op {
                "+" => Term::add(a, b),
                "-" => Term::sub(a, b),
                _ => Term::mul(a, b),
            })
        }
        (c, 0) => c
            .parse::<BigUint>()
            .map(Term::Int)
            .map_err(|_| HornError::Inexpressible(c.to_string())),
        (other, _) => Err(HornError::Inexpressible(other.to_string())),
    }
}

/// The sentence `(∀x⃗)(Ω(x⃗) → x_i = x_j)` where `Ω` is the positive diagram
/// of `p` with element `k` replaced by the variable `x{k+1}`. Whenever no
/// model of `Σ` receives `p`, `Σ` proves this sentence for some `i ≠ j`, and
/// it fails in `p` at the identity assignment.
pub fn diagram_sentence(p: &FinitePartialAlgebra, i: usize, j: usize) -> Result<HornSentence, HornError> {
    let var = |k: usize| format!("x{}", k + 1);
    let pres = algebra::presentation(p);
    let antecedents = pres
        .diag_plus
        .iter()
        .map(|d| {
            let args = d.args.iter().map(|&a| Term::var(var(a))).collect();
            Ok(Equation::new(term_for(&d.op, args)?, Term::var(var(d.value))))
        })
        .collect::<Result<Vec<_>, HornError>>()?;
    HornSentence::new(
        (0..p.size()).map(var).collect(),
        antecedents,
        Consequent::Equation(Equation::new(Term::var(var(i)), Term::var(var(j)))),
    )
}

/// Symbols by name, for diagnostics.
pub fn describe_signature(sig: &[(String, usize)]) -> String {
    let m: BTreeMap<usize, Vec<&str>> = sig.iter().fold(BTreeMap::new(), |mut m, (n, a)| {
        m.entry(*a).or_insert_with(Vec::new).push(n.as_str());
        m
    });
    m.iter()
        .map(|(a, names)| format!("{}/{a}", names.join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}
