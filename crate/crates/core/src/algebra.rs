//! Finite partial algebras with strict undefinedness.
//!
//! Elements are referred to by their position in the carrier. Operation tables
//! are dense and row-major (first argument most significant), one `Option`
//! per argument tuple.
//!
//! Text format, used by the CLI and reproduced byte for byte by
//! [`FinitePartialAlgebra::to_text`]:
//!
//! ```text
//! carrier: 0 1
//! op +/2:
//! 0 0 -> 0
//! 1 1 -> 1
//! ```
//!
//! Omitted entries are undefined; constants are `op c/0:` blocks with a single
//! `-> e` line. Blank lines and `#` comments are ignored when parsing.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::horn::{Consequent, HornSentence};
use crate::par;
use crate::terms::{Equation, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("duplicate carrier element `{0}`")]
    DuplicateElement(String),
    #[error("invalid element name `{0}`")]
    InvalidElementName(String),
    #[error("duplicate operation `{0}`")]
    DuplicateOperation(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownOperation(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation `{op}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("conflicting entries for {0}")]
    ConflictingEntry(String),
    #[error("signatures differ: {0}")]
    SignatureMismatch(String),
    #[error("mapping must assign all {expected} elements, got {found}")]
    MappingNotTotal { expected: usize, found: usize },
    #[error("mapping target {0} is outside the codomain")]
    MappingOutOfRange(usize),
    #[error("algebra is not total: {0} is undefined")]
    NotTotal(String),
    #[error("{0} assignments exceed the enumeration limit")]
    TooManyAssignments(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operation {
    name: String,
    arity: usize,
    table: Vec<Option<usize>>,
}

impl Operation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn slot(&self, size: usize, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * size + a)
    }

    /// Defined entries `(arguments, value)` in row-major order.
    pub fn entries(&self, size: usize) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        let arity = self.arity;
        self.table.iter().enumerate().filter_map(move |(slot, v)| {
            v.map(|v| (unslot(slot, size, arity), v))
        })
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }
}

fn unslot(mut slot: usize, size: usize, arity: usize) -> Vec<usize> {
    let mut args = vec![0; arity];
    for i in (0..arity).rev() {
        args[i] = slot % size;
        slot /= size;
    }
    args
}

/// Operation symbol used for a term constructor.
pub fn symbol_of(t: &Term) -> Option<String> {
    match t {
        Term::Var(_) => None,
        Term::Int(n) => Some(n.to_string()),
        Term::Add(..) => Some("+".into()),
        Term::Sub(..) => Some("-".into()),
        Term::Mul(..) => Some("*".into()),
    }
}

fn valid_element_name(name: &str) -> bool {
    !name.is_empty()
        && name != "->"
        && !name.contains('#')
        && !name.chars().any(char::is_whitespace)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePartialAlgebra {
    carrier: Vec<String>,
    ops: Vec<Operation>,
}

impl FinitePartialAlgebra {
    /// An algebra with the given carrier and signature and all tables empty.
    pub fn new<S: Into<String>>(
        carrier: impl IntoIterator<Item = S>,
        signature: &[(&str, usize)],
    ) -> Result<Self, AlgebraError> {
        let carrier: Vec<String> = carrier.into_iter().map(Into::into).collect();
        if carrier.is_empty() {
            return Err(AlgebraError::EmptyCarrier);
        }
        let mut seen = HashSet::new();
        for e in &carrier {
            if !valid_element_name(e) {
                return Err(AlgebraError::InvalidElementName(e.clone()));
            }
            if !seen.insert(e.as_str()) {
                return Err(AlgebraError::DuplicateElement(e.clone()));
            }
        }
        let mut alg = FinitePartialAlgebra {
            carrier,
            ops: Vec::new(),
        };
        for &(name, arity) in signature {
            alg.add_operation(name, arity)?;
        }
        Ok(alg)
    }

    pub fn add_operation(&mut self, name: &str, arity: usize) -> Result<usize, AlgebraError> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(AlgebraError::UnknownOperation(name.to_string()));
        }
        if self.op_index(name).is_some() {
            return Err(AlgebraError::DuplicateOperation(name.to_string()));
        }
        let cells = self
            .size()
            .checked_pow(arity as u32)
            .ok_or_else(|| AlgebraError::TooManyAssignments(format!("table of `{name}`")))?;
        self.ops.push(Operation {
            name: name.to_string(),
            arity,
            table: vec![None; cells],
        });
        Ok(self.ops.len() - 1)
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn element_name(&self, e: usize) -> &str {
        &self.carrier[e]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.carrier.iter().position(|c| c == name)
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn signature(&self) -> Vec<(String, usize)> {
        self.ops.iter().map(|o| (o.name.clone(), o.arity)).collect()
    }

    fn op_checked(&self, name: &str, args: usize) -> Result<usize, AlgebraError> {
        let i = self
            .op_index(name)
            .ok_or_else(|| AlgebraError::UnknownOperation(name.to_string()))?;
        if self.ops[i].arity != args {
            return Err(AlgebraError::ArityMismatch {
                op: name.to_string(),
                expected: self.ops[i].arity,
                found: args,
            });
        }
        Ok(i)
    }

    /// Value of operation `op` (by index) at `args`, if defined.
    pub fn apply(&self, op: usize, args: &[usize]) -> Option<usize> {
        let o = &self.ops[op];
        o.table[o.slot(self.size(), args)]
    }

    pub fn get(&self, op: &str, args: &[usize]) -> Option<usize> {
        self.op_index(op).and_then(|i| self.apply(i, args))
    }

    /// Defines `op(args) = value`, overwriting any previous entry.
    pub fn set(&mut self, op: &str, args: &[usize], value: usize) -> Result<(), AlgebraError> {
        let i = self.op_checked(op, args.len())?;
        let n = self.size();
        if let Some(&bad) = args.iter().chain([&value]).find(|&&a| a >= n) {
            return Err(AlgebraError::UnknownElement(bad.to_string()));
        }
        let slot = self.ops[i].slot(n, args);
        self.ops[i].table[slot] = Some(value);
        Ok(())
    }

    pub(crate) fn set_slot(&mut self, op: usize, slot: usize, value: Option<usize>) {
        self.ops[op].table[slot] = value;
    }

    /// Same as [`set`](Self::set) with elements given by name.
    pub fn define(&mut self, op: &str, args: &[&str], value: &str) -> Result<(), AlgebraError> {
        let lookup = |n: &str| {
            self.element(n)
                .ok_or_else(|| AlgebraError::UnknownElement(n.to_string()))
        };
        let args: Vec<usize> = args.iter().map(|a| lookup(a)).collect::<Result<_, _>>()?;
        let value = lookup(value)?;
        self.set(op, &args, value)
    }

    pub fn is_total(&self) -> bool {
        self.ops.iter().all(Operation::is_total)
    }

    /// First undefined entry, rendered, if the algebra is not total.
    pub fn first_gap(&self) -> Option<String> {
        for o in &self.ops {
            if let Some(slot) = o.table.iter().position(Option::is_none) {
                let args = unslot(slot, self.size(), o.arity);
                return Some(self.render_application(&o.name, &args));
            }
        }
        None
    }

    pub fn render_application(&self, op: &str, args: &[usize]) -> String {
        let names: Vec<&str> = args.iter().map(|&a| self.element_name(a)).collect();
        match names.as_slice() {
            [] => op.to_string(),
            [a, b] => format!("{a} {op} {b}"),
            _ => format!("{op}({})", names.join(", ")),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("carrier: {}\n", self.carrier.join(" "));
        for o in &self.ops {
            out.push_str(&format!("op {}/{}:\n", o.name, o.arity));
            for (args, v) in o.entries(self.size()) {
                let mut line: Vec<&str> = args.iter().map(|&a| self.element_name(a)).collect();
                line.push("->");
                line.push(self.element_name(v));
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, AlgebraError> {
        let perr = |line: usize, message: String| AlgebraError::Parse { line, message };
        let mut alg: Option<FinitePartialAlgebra> = None;
        let mut current: Option<usize> = None;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(a) = alg.as_mut() else {
                let rest = line
                    .strip_prefix("carrier:")
                    .ok_or_else(|| perr(ln, "expected `carrier:` header".into()))?;
                let elems: Vec<&str> = rest.split_whitespace().collect();
                alg = Some(
                    FinitePartialAlgebra::new(elems, &[]).map_err(|e| perr(ln, e.to_string()))?,
                );
                continue;
            };
            if let Some(rest) = line.strip_prefix("op ") {
                let head = rest
                    .trim()
                    .strip_suffix(':')
                    .ok_or_else(|| perr(ln, "operation header must end with `:`".into()))?;
                let (name, arity) = head
                    .rsplit_once('/')
                    .ok_or_else(|| perr(ln, "operation header must be `op NAME/ARITY:`".into()))?;
                let arity: usize = arity
                    .parse()
                    .map_err(|_| perr(ln, format!("invalid arity `{arity}`")))?;
                current = Some(a.add_operation(name, arity).map_err(|e| perr(ln, e.to_string()))?);
                continue;
            }
            let op = current.ok_or_else(|| perr(ln, "table entry before any `op` header".into()))?;
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| perr(ln, "table entry must contain `->`".into()))?;
            let find = |n: &str| {
                a.element(n)
                    .ok_or_else(|| perr(ln, format!("unknown element `{n}`")))
            };
            let args: Vec<usize> = lhs.split_whitespace().map(find).collect::<Result<_, _>>()?;
            let outs: Vec<&str> = rhs.split_whitespace().collect();
            let [out] = outs.as_slice() else {
                return Err(perr(ln, "exactly one result element expected after `->`".into()));
            };
            let value = find(out)?;
            let (name, arity) = (a.ops[op].name.clone(), a.ops[op].arity);
            if args.len() != arity {
                return Err(perr(
                    ln,
                    format!("operation `{name}` has arity {arity}, got {} arguments", args.len()),
                ));
            }
            if a.apply(op, &args).is_some() {
                return Err(perr(
                    ln,
                    format!("duplicate entry for {}", a.render_application(&name, &args)),
                ));
            }
            a.set(&name, &args, value).map_err(|e| perr(ln, e.to_string()))?;
        }
        alg.ok_or_else(|| perr(1, "missing `carrier:` header".into()))
    }
}

impl fmt::Display for FinitePartialAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for FinitePartialAlgebra {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FinitePartialAlgebra::from_text(s)
    }
}

/// Values of a fixed list of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub vars: Vec<String>,
    pub values: Vec<usize>,
}

impl Assignment {
    pub fn new(vars: Vec<String>, values: Vec<usize>) -> Self {
        assert_eq!(vars.len(), values.len());
        Assignment { vars, values }
    }

    pub fn from_pairs(pairs: &[(&str, usize)]) -> Self {
        Assignment {
            vars: pairs.iter().map(|(v, _)| v.to_string()).collect(),
            values: pairs.iter().map(|&(_, e)| e).collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var).map(|i| self.values[i])
    }

    /// `{x↦a, y↦b}` with element names taken from `alg`.
    pub fn render(&self, alg: &FinitePartialAlgebra) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.values)
            .map(|(v, &e)| format!("{v}↦{}", alg.element_name(e)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HornVerdict {
    Holds,
    /// Least assignment in the domain of the sentence that falsifies it.
    Fails(Assignment),
}

impl HornVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, HornVerdict::Holds)
    }
}

/// A term with variables resolved to slots and symbols to operation indices.
#[derive(Clone, Debug)]
pub(crate) enum Node {
    Var(usize),
    App(usize, Vec<Node>),
    /// An integer literal without a table in the algebra.
    Undefined,
}

pub(crate) fn compile_term(
    sig: &[(String, usize)],
    t: &Term,
    vars: &[String],
) -> Result<Node, AlgebraError> {
    let op = |name: &str, arity: usize| -> Result<Option<usize>, AlgebraError> {
        match sig.iter().position(|(n, _)| n == name) {
            Some(i) if sig[i].1 == arity => Ok(Some(i)),
            Some(i) => Err(AlgebraError::ArityMismatch {
                op: name.to_string(),
                expected: sig[i].1,
                found: arity,
            }),
            None => Ok(None),
        }
    };
    Ok(match t {
        Term::Var(v) => Node::Var(
            vars.iter()
                .position(|x| x == v)
                .ok_or_else(|| AlgebraError::UnknownVariable(v.clone()))?,
        ),
        Term::Int(n) => match op(&n.to_string(), 0)? {
            Some(i) => Node::App(i, Vec::new()),
            None if *n <= BigUint::from(1u8) => {
                return Err(AlgebraError::UnknownOperation(n.to_string()))
            }
            None => Node::Undefined,
        },
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            let name = symbol_of(t).expect("compound term");
            let i = op(&name, 2)?.ok_or(AlgebraError::UnknownOperation(name))?;
            Node::App(
                i,
                vec![compile_term(sig, a, vars)?, compile_term(sig, b, vars)?],
            )
        }
    })
}

impl Node {
    /// Strict evaluation: undefined as soon as any argument is.
    pub(crate) fn eval(&self, alg: &FinitePartialAlgebra, values: &[usize]) -> Option<usize> {
        match self {
            Node::Var(i) => Some(values[*i]),
            Node::Undefined => None,
            Node::App(op, args) => match args.as_slice() {
                [] => alg.apply(*op, &[]),
                [a, b] => {
                    let (a, b) = (a.eval(alg, values)?, b.eval(alg, values)?);
                    alg.apply(*op, &[a, b])
                }
                _ => {
                    let vals: Option<Vec<usize>> =
                        args.iter().map(|a| a.eval(alg, values)).collect();
                    alg.apply(*op, &vals?)
                }
            },
        }
    }
}

/// A Horn sentence compiled against a signature.
#[derive(Clone, Debug)]
pub(crate) struct CompiledSentence {
    pub arity: usize,
    pub antecedents: Vec<(Node, Node)>,
    pub consequent: Option<(Node, Node)>,
}

impl CompiledSentence {
    pub(crate) fn new(sig: &[(String, usize)], s: &HornSentence) -> Result<Self, AlgebraError> {
        let vars = s.vars();
        let eq = |e: &Equation| -> Result<(Node, Node), AlgebraError> {
            Ok((compile_term(sig, &e.lhs, vars)?, compile_term(sig, &e.rhs, vars)?))
        };
        Ok(CompiledSentence {
            arity: vars.len(),
            antecedents: s.antecedents().iter().map(eq).collect::<Result<_, _>>()?,
            consequent: match s.consequent() {
                Consequent::Equation(e) => Some(eq(e)?),
                Consequent::Falsum => None,
            },
        })
    }

    /// `None` outside the domain of the sentence; otherwise whether the
    /// matrix is true.
    pub(crate) fn eval(&self, alg: &FinitePartialAlgebra, values: &[usize]) -> Option<bool> {
        let mut antecedents_true = true;
        for (l, r) in &self.antecedents {
            let (l, r) = (l.eval(alg, values)?, r.eval(alg, values)?);
            antecedents_true &= l == r;
        }
        let consequent = match &self.consequent {
            Some((l, r)) => l.eval(alg, values)? == r.eval(alg, values)?,
            None => false,
        };
        Some(!antecedents_true || consequent)
    }
}

fn assignment_count(size: usize, arity: usize) -> Result<usize, AlgebraError> {
    size.checked_pow(arity as u32)
        .ok_or_else(|| AlgebraError::TooManyAssignments(format!("{size}^{arity}")))
}

/// Assignment number `index` in lexicographic order (first variable most
/// significant, elements in carrier order).
pub(crate) fn decode_assignment(index: usize, size: usize, arity: usize) -> Vec<usize> {
    unslot(index, size, arity)
}

pub fn eval_term(
    alg: &FinitePartialAlgebra,
    t: &Term,
    a: &Assignment,
) -> Result<Option<usize>, AlgebraError> {
    let node = compile_term(&alg.signature(), t, &a.vars)?;
    Ok(node.eval(alg, &a.values))
}

/// Whether the matrix of `s` is true at `a`; `None` when `a` lies outside the
/// domain of `s` (some term of `s` is undefined).
pub fn holds_at(
    alg: &FinitePartialAlgebra,
    s: &HornSentence,
    a: &Assignment,
) -> Result<Option<bool>, AlgebraError> {
    let values: Vec<usize> = s
        .vars()
        .iter()
        .map(|v| a.get(v).ok_or_else(|| AlgebraError::UnknownVariable(v.clone())))
        .collect::<Result<_, _>>()?;
    Ok(CompiledSentence::new(&alg.signature(), s)?.eval(alg, &values))
}

/// Partial-algebra satisfaction: the matrix must hold at every assignment
/// under which every term of the sentence is defined.
pub fn holds(alg: &FinitePartialAlgebra, s: &HornSentence) -> Result<HornVerdict, AlgebraError> {
    let compiled = CompiledSentence::new(&alg.signature(), s)?;
    let n = alg.size();
    let total = assignment_count(n, compiled.arity)?;
    let bad = par::find_first(total, |i| {
        compiled.eval(alg, &decode_assignment(i, n, compiled.arity)) == Some(false)
    });
    Ok(match bad {
        None => HornVerdict::Holds,
        Some(i) => HornVerdict::Fails(Assignment::new(
            s.vars().to_vec(),
            decode_assignment(i, n, compiled.arity),
        )),
    })
}

/// All assignments in the domain of `s`, in lexicographic order.
pub fn domain(alg: &FinitePartialAlgebra, s: &HornSentence) -> Result<Vec<Assignment>, AlgebraError> {
    let compiled = CompiledSentence::new(&alg.signature(), s)?;
    let n = alg.size();
    let total = assignment_count(n, compiled.arity)?;
    Ok((0..total)
        .map(|i| decode_assignment(i, n, compiled.arity))
        .filter(|v| compiled.eval(alg, v).is_some())
        .map(|v| Assignment::new(s.vars().to_vec(), v))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No(String),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }
}

fn same_signature(p: &FinitePartialAlgebra, q: &FinitePartialAlgebra) -> Result<(), AlgebraError> {
    let a: BTreeSet<(String, usize)> = p.signature().into_iter().collect();
    let b: BTreeSet<(String, usize)> = q.signature().into_iter().collect();
    if a != b {
        let only: Vec<String> = a
            .symmetric_difference(&b)
            .map(|(n, k)| format!("{n}/{k}"))
            .collect();
        return Err(AlgebraError::SignatureMismatch(format!(
            "operations not shared: {}",
            only.join(", ")
        )));
    }
    Ok(())
}

/// For every defined entry of `p`, its image under `map` must be defined in
/// `q` with the mapped value.
fn preserves_entries(
    p: &FinitePartialAlgebra,
    q: &FinitePartialAlgebra,
    map: &[usize],
) -> Verdict {
    for o in p.operations() {
        let qi = q.op_index(o.name()).expect("signatures checked");
        for (args, v) in o.entries(p.size()) {
            let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            let got = q.apply(qi, &image);
            if got != Some(map[v]) {
                let found = match got {
                    Some(w) => format!("= {}", q.element_name(w)),
                    None => "undefined".to_string(),
                };
                return Verdict::No(format!(
                    "entry {} = {} maps to {} which is {found}, expected {}",
                    p.render_application(o.name(), &args),
                    p.element_name(v),
                    q.render_application(o.name(), &image),
                    q.element_name(map[v]),
                ));
            }
        }
    }
    Verdict::Yes
}

/// `p ⊑ q`: carrier containment (by element name) and agreement of every
/// operation wherever `p` defines it.
pub fn is_weak_subalgebra(
    p: &FinitePartialAlgebra,
    q: &FinitePartialAlgebra,
) -> Result<Verdict, AlgebraError> {
    same_signature(p, q)?;
    let mut map = Vec::with_capacity(p.size());
    for e in p.carrier() {
        match q.element(e) {
            Some(i) => map.push(i),
            None => return Ok(Verdict::No(format!("element `{e}` is not in the larger carrier"))),
        }
    }
    Ok(preserves_entries(p, q, &map))
}

/// Whether `alpha` (image of each element of `p`, by index into `q`'s
/// carrier) is an embedding.
pub fn check_embedding(
    p: &FinitePartialAlgebra,
    q: &FinitePartialAlgebra,
    alpha: &[usize],
) -> Result<Verdict, AlgebraError> {
    same_signature(p, q)?;
    if alpha.len() != p.size() {
        return Err(AlgebraError::MappingNotTotal {
            expected: p.size(),
            found: alpha.len(),
        });
    }
    if let Some(&bad) = alpha.iter().find(|&&a| a >= q.size()) {
        return Err(AlgebraError::MappingOutOfRange(bad));
    }
    let mut seen = HashSet::new();
    for (i, &a) in alpha.iter().enumerate() {
        if !seen.insert(a) {
            return Ok(Verdict::No(format!(
                "not injective: `{}` and another element both map to `{}`",
                p.element_name(i),
                q.element_name(a)
            )));
        }
    }
    Ok(preserves_entries(p, q, alpha))
}

/// Lexicographically first embedding of `p` into `q`, by backtracking over
/// injective maps with entries checked as soon as all their elements are
/// mapped.
pub fn search_embedding(
    p: &FinitePartialAlgebra,
    q: &FinitePartialAlgebra,
) -> Result<Option<Vec<usize>>, AlgebraError> {
    same_signature(p, q)?;
    // entries grouped by the largest element they mention
    let mut by_last: Vec<Vec<(usize, Vec<usize>, usize)>> = vec![Vec::new(); p.size()];
    for o in p.operations() {
        let qi = q.op_index(o.name()).expect("signatures checked");
        for (args, v) in o.entries(p.size()) {
            let last = args.iter().copied().chain([v]).max().expect("nonempty");
            by_last[last].push((qi, args, v));
        }
    }
    let mut alpha = Vec::with_capacity(p.size());
    let mut used = vec![false; q.size()];
    Ok(extend_embedding(q, &by_last, &mut alpha, &mut used).then_some(alpha))
}

fn extend_embedding(
    q: &FinitePartialAlgebra,
    by_last: &[Vec<(usize, Vec<usize>, usize)>],
    alpha: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let k = alpha.len();
    if k == by_last.len() {
        return true;
    }
    for cand in 0..q.size() {
        if used[cand] {
            continue;
        }
        alpha.push(cand);
        let ok = by_last[k].iter().all(|(qi, args, v)| {
            let image: Vec<usize> = args.iter().map(|&a| alpha[a]).collect();
            q.apply(*qi, &image) == Some(alpha[*v])
        });
        if ok {
            used[cand] = true;
            if extend_embedding(q, by_last, alpha, used) {
                return true;
            }
            used[cand] = false;
        }
        alpha.pop();
    }
    false
}

/// Ground equation `f(p⃗) = p` recording one table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramEquation {
    pub op: String,
    pub args: Vec<usize>,
    pub value: usize,
}

/// Positive diagram and distinctness disequations of a finite partial algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub diag_plus: Vec<DiagramEquation>,
    /// Unordered pairs `(p, q)` with `p < q`.
    pub distinct: Vec<(usize, usize)>,
}

impl Presentation {
    pub fn render(&self, alg: &FinitePartialAlgebra) -> Vec<String> {
        let mut out: Vec<String> = self
            .diag_plus
            .iter()
            .map(|d| {
                format!(
                    "{} ≈ {}",
                    alg.render_application(&d.op, &d.args),
                    alg.element_name(d.value)
                )
            })
            .collect();
        out.extend(
            self.distinct
                .iter()
                .map(|&(a, b)| format!("{} ≉ {}", alg.element_name(a), alg.element_name(b))),
        );
        out
    }

    /// Number of diagram equations per operation symbol.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for d in &self.diag_plus {
            *out.entry(d.op.clone()).or_default() += 1;
        }
        out
    }
}

pub fn presentation(alg: &FinitePartialAlgebra) -> Presentation {
    let diag_plus = alg
        .operations()
        .iter()
        .flat_map(|o| {
            o.entries(alg.size()).map(|(args, value)| DiagramEquation {
                op: o.name().to_string(),
                args,
                value,
            })
        })
        .collect();
    let n = alg.size();
    let distinct = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    Presentation {
        diag_plus,
        distinct,
    }
}
