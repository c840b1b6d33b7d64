//! Multilinear integer polynomials: the normal form of terms modulo the
//! commutative-ring laws together with `x*x = x` for every class-symbol.
//!
//! Vertices of `{0,1}^m` are indexed by `usize` with the first variable as the
//! most significant bit, so ascending indices enumerate vertices in
//! lexicographic order (`00 < 01 < 10 < 11`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::par;
use crate::terms::{Argument, Equation, Term};
use crate::CapExceeded;

/// Default bound on the number of variables enumerated by vertex-based
/// procedures.
pub const DEFAULT_MAX_VARS: usize = 20;

/// A squarefree monomial: a set of variable names. Ordered degree-first, then
/// lexicographically by the sorted names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<String>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        Monomial(set.into_iter().collect())
    }

    pub fn variables(&self) -> &[String] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn union(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(self.0[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Bitmask over `vars` (first variable = most significant bit).
    fn mask(&self, index: &BTreeMap<&str, usize>, m: usize) -> usize {
        self.0
            .iter()
            .map(|v| 1usize << (m - 1 - index[v.as_str()]))
            .fold(0, |a, b| a | b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&self.0.join("*"))
        }
    }
}

/// Integer polynomial with every exponent at most one.
///
/// `vars` is the declared variable scope; equality compares coefficients only,
/// so `x - x` over `{x}` equals the constant `0` over `{}`.
#[derive(Clone, Debug, Default)]
pub struct MultilinearPoly {
    vars: BTreeSet<String>,
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for MultilinearPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for MultilinearPoly {}

impl MultilinearPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.vars.insert(name.to_string());
        p.add_term(Monomial::new([name]), BigInt::one());
        p
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs; repeated
    /// monomials are summed and the scope is the set of variables mentioned.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.vars.extend(m.0.iter().cloned());
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    /// Widens the declared scope; coefficients are unchanged.
    pub fn with_vars<I, S>(mut self, extra: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vars.extend(extra.into_iter().map(Into::into));
        self
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients in degree-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self {
            vars: self.vars.clone(),
            coeffs: BTreeMap::new(),
        };
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Value at the 0/1 point where exactly the variables in `ones` are 1.
    pub fn eval_at(&self, ones: &BTreeSet<String>) -> BigInt {
        self.coeffs
            .iter()
            .filter(|(m, _)| m.0.iter().all(|v| ones.contains(v)))
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// Converts back into a term (sum of scaled monomials).
    pub fn to_term(&self) -> Term {
        let mut acc: Option<Term> = None;
        for (m, c) in &self.coeffs {
            let mut mono: Option<Term> = None;
            let mag = c.magnitude().clone();
            if !mag.is_one() || m.0.is_empty() {
                mono = Some(Term::Int(mag));
            }
            for v in &m.0 {
                let x = Term::var(v.clone());
                mono = Some(match mono {
                    None => x,
                    Some(t) => Term::mul(t, x),
                });
            }
            let mono = mono.expect("monomial has a factor");
            acc = Some(match (acc, c.is_negative()) {
                (None, false) => mono,
                (None, true) => Term::sub(Term::zero(), mono),
                (Some(a), false) => Term::add(a, mono),
                (Some(a), true) => Term::sub(a, mono),
            });
        }
        acc.unwrap_or_else(Term::zero)
    }
}

impl fmt::Display for MultilinearPoly {
    /// Printed in term syntax, so the output parses back to an equal
    /// polynomial. A leading negative coefficient is written `0 - ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            let mag = c.magnitude();
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("0 - ")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if m.0.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn add(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        let mut out = self.clone();
        out.vars.extend(rhs.vars.iter().cloned());
        for (m, c) in &rhs.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn sub(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        let mut out = self.clone();
        out.vars.extend(rhs.vars.iter().cloned());
        for (m, c) in &rhs.coeffs {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MultilinearPoly {
    type Output = MultilinearPoly;
    /// Ring product followed by `x*x = x` on every variable.
    fn mul(self, rhs: &MultilinearPoly) -> MultilinearPoly {
        let mut out = MultilinearPoly {
            vars: self.vars.union(&rhs.vars).cloned().collect(),
            coeffs: BTreeMap::new(),
        };
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &rhs.coeffs {
                out.add_term(m1.union(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultilinearPoly {
    type Output = MultilinearPoly;
    fn neg(self) -> MultilinearPoly {
        self.scale(&BigInt::from(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultilinearPoly {
            type Output = MultilinearPoly;
            fn $f(self, rhs: MultilinearPoly) -> MultilinearPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// The unique multilinear polynomial equal to `t` in every commutative ring
/// with unity when each variable denotes an idempotent. The scope is exactly
/// the variables of `t`.
pub fn normalize(t: &Term) -> MultilinearPoly {
    match t {
        Term::Var(v) => MultilinearPoly::var(v),
        Term::Int(n) => MultilinearPoly::constant(BigInt::from(n.clone())),
        Term::Add(a, b) => &normalize(a) + &normalize(b),
        Term::Sub(a, b) => &normalize(a) - &normalize(b),
        Term::Mul(a, b) => &normalize(a) * &normalize(b),
    }
}

/// Normal form of `lhs - rhs`.
pub fn normalize_equation(eq: &Equation) -> MultilinearPoly {
    &normalize(&eq.lhs) - &normalize(&eq.rhs)
}

/// A 0/1 point, values listed in the order of the owning variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub Vec<bool>);

impl Vertex {
    pub fn from_index(index: usize, m: usize) -> Self {
        Vertex((0..m).map(|i| index >> (m - 1 - i) & 1 == 1).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    /// `"101"`-style label.
    pub fn label(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Names of the variables set to 1.
    pub fn ones(&self, vars: &[String]) -> BTreeSet<String> {
        vars.iter()
            .zip(&self.0)
            .filter(|(_, &b)| b)
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// The constituent `∏ x (over ones) ∏ (1 - x) (over zeros)` as a term.
    pub fn constituent(&self, vars: &[String]) -> Term {
        let mut acc: Option<Term> = None;
        for (v, &b) in vars.iter().zip(&self.0) {
            let factor = if b {
                Term::var(v.clone())
            } else {
                Term::sub(Term::one(), Term::var(v.clone()))
            };
            acc = Some(match acc {
                None => factor,
                Some(t) => Term::mul(t, factor),
            });
        }
        acc.unwrap_or_else(Term::one)
    }
}

/// Boole's development: the coefficient of every constituent, equivalently
/// the value of the polynomial at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstituentExpansion {
    vars: Vec<String>,
    coeffs: Vec<BigInt>,
}

impl ConstituentExpansion {
    /// `coeffs[i]` belongs to the vertex with index `i`.
    pub fn new(vars: Vec<String>, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), 1usize << vars.len(), "one coefficient per vertex");
        ConstituentExpansion { vars, coeffs }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn coeff_at(&self, v: &Vertex) -> &BigInt {
        &self.coeffs[v.index()]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `(vertex, coefficient)` in lexicographic vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &BigInt)> {
        let m = self.vars.len();
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (Vertex::from_index(i, m), c))
    }
}

fn var_index(vars: &[String]) -> BTreeMap<&str, usize> {
    vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect()
}

/// Expansion of `p` over its own scope.
pub fn expand(p: &MultilinearPoly) -> ConstituentExpansion {
    let vars: Vec<String> = p.vars.iter().cloned().collect();
    expand_over(p, &vars)
}

/// Expansion over a variable list that contains the scope of `p`.
///
/// Computed with the subset-sum (zeta) transform over the monomial lattice.
pub fn expand_over(p: &MultilinearPoly, vars: &[String]) -> ConstituentExpansion {
    let m = vars.len();
    let index = var_index(vars);
    let mut table = vec![BigInt::zero(); 1usize << m];
    for (mono, c) in &p.coeffs {
        assert!(
            mono.0.iter().all(|v| index.contains_key(v.as_str())),
            "expansion variables must cover the polynomial"
        );
        table[mono.mask(&index, m)] += c;
    }
    for bit in 0..m {
        let b = 1usize << bit;
        for mask in 0..table.len() {
            if mask & b != 0 {
                let lower = table[mask ^ b].clone();
                table[mask] += lower;
            }
        }
    }
    ConstituentExpansion::new(vars.to_vec(), table)
}

/// Inverse of [`expand`]: `Σ_v coeff(v) · constituent_v`, normalized. Uses the
/// Möbius transform, the inverse of the zeta transform in [`expand_over`].
pub fn unexpand(e: &ConstituentExpansion) -> MultilinearPoly {
    let m = e.vars.len();
    let mut table = e.coeffs.clone();
    for bit in 0..m {
        let b = 1usize << bit;
        for mask in 0..table.len() {
            if mask & b != 0 {
                let lower = table[mask ^ b].clone();
                table[mask] -= lower;
            }
        }
    }
    let mut p = MultilinearPoly {
        vars: e.vars.iter().cloned().collect(),
        coeffs: BTreeMap::new(),
    };
    for (mask, c) in table.into_iter().enumerate() {
        let names = (0..m)
            .filter(|i| mask >> (m - 1 - i) & 1 == 1)
            .map(|i| e.vars[i].clone());
        p.add_term(Monomial::new(names), c);
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpretability {
    /// Every constituent coefficient is 0 or 1: the term denotes a class.
    Interpretable,
    /// Vertices whose coefficient lies outside `{0, 1}`; those constituents
    /// must be empty for a class reading.
    ConditionallyInterpretable(Vec<Vertex>),
    /// Every coefficient lies outside `{0, 1}`.
    Never,
}

pub fn interpretability(p: &MultilinearPoly) -> Interpretability {
    let e = expand(p);
    let bad: Vec<Vertex> = e
        .iter()
        .filter(|(_, c)| !(c.is_zero() || c.is_one()))
        .map(|(v, _)| v)
        .collect();
    if bad.is_empty() {
        Interpretability::Interpretable
    } else if bad.len() == e.coeffs.len() {
        Interpretability::Never
    } else {
        Interpretability::ConditionallyInterpretable(bad)
    }
}

/// A polynomial prepared for repeated evaluation at vertex indices.
#[derive(Clone, Debug)]
pub(crate) struct VertexEvaluator {
    terms: Vec<(usize, BigInt)>,
}

impl VertexEvaluator {
    pub(crate) fn new(p: &MultilinearPoly, vars: &[String]) -> Self {
        let m = vars.len();
        let index = var_index(vars);
        VertexEvaluator {
            terms: p.coeffs.iter().map(|(mono, c)| (mono.mask(&index, m), c.clone())).collect(),
        }
    }

    pub(crate) fn eval(&self, vertex: usize) -> BigInt {
        self.terms
            .iter()
            .filter(|(mask, _)| mask & !vertex == 0)
            .map(|(_, c)| c)
            .sum()
    }
}

/// The vertex form of a ground argument: premiss differences `g_j` and the
/// conclusion difference `f`, all over the union of the argument's variables.
#[derive(Clone, Debug)]
pub(crate) struct VertexForm {
    pub vars: Vec<String>,
    pub premisses: Vec<VertexEvaluator>,
    pub conclusion: VertexEvaluator,
}

impl VertexForm {
    pub(crate) fn new(arg: &Argument, max_vars: usize) -> Result<Self, CapExceeded> {
        let vars: Vec<String> = arg.variables().into_iter().collect();
        if vars.len() > max_vars {
            return Err(CapExceeded {
                what: "variables",
                requested: vars.len(),
                cap: max_vars,
            });
        }
        let premisses = arg
            .premisses
            .iter()
            .map(|e| VertexEvaluator::new(&normalize_equation(e), &vars))
            .collect();
        let conclusion = VertexEvaluator::new(&normalize_equation(&arg.conclusion), &vars);
        Ok(VertexForm {
            vars,
            premisses,
            conclusion,
        })
    }

    pub(crate) fn num_vertices(&self) -> usize {
        1usize << self.vars.len()
    }

    pub(crate) fn premisses_vanish(&self, v: usize) -> bool {
        self.premisses.iter().all(|g| g.eval(v).is_zero())
    }

    pub(crate) fn is_counterexample(&self, v: usize) -> bool {
        self.premisses_vanish(v) && !self.conclusion.eval(v).is_zero()
    }
}

/// A vertex together with the variable names it assigns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWitness {
    pub vars: Vec<String>,
    pub vertex: Vertex,
}

impl fmt::Display for VertexWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.vertex.0)
            .map(|(v, &b)| format!("{v}↦{}", b as u8))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Valid,
    /// Least vertex where every premiss vanishes and the conclusion does not.
    Invalid(VertexWitness),
}

impl OracleVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, OracleVerdict::Valid)
    }
}

/// Rule of 0 and 1: the argument is valid iff the conclusion difference
/// vanishes at every 0/1 vertex where all premiss differences vanish.
pub fn boole_oracle(arg: &Argument, max_vars: usize) -> Result<OracleVerdict, CapExceeded> {
    let form = VertexForm::new(arg, max_vars)?;
    Ok(
        match par::find_first(form.num_vertices(), |v| form.is_counterexample(v)) {
            None => OracleVerdict::Valid,
            Some(v) => OracleVerdict::Invalid(VertexWitness {
                vertex: Vertex::from_index(v, form.vars.len()),
                vars: form.vars,
            }),
        },
    )
}

/// Polynomial over non-idempotent indeterminates: the normal form modulo the
/// commutative-ring laws alone.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RingPoly {
    coeffs: BTreeMap<Vec<(String, u32)>, BigInt>,
}

impl RingPoly {
    fn add_term(&mut self, m: Vec<(String, u32)>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(m).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.retain(|_, c| !c.is_zero());
        }
    }

    fn combine(&self, other: &RingPoly, sign: i32) -> RingPoly {
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c * sign);
        }
        out
    }

    fn product(&self, other: &RingPoly) -> RingPoly {
        let mut out = RingPoly::default();
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                let mut exps: BTreeMap<String, u32> = m1.iter().cloned().collect();
                for (v, e) in m2 {
                    *exps.entry(v.clone()).or_default() += e;
                }
                out.add_term(exps.into_iter().collect(), c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

pub fn ring_normalize(t: &Term) -> RingPoly {
    match t {
        Term::Var(v) => {
            let mut p = RingPoly::default();
            p.add_term(vec![(v.clone(), 1)], BigInt::one());
            p
        }
        Term::Int(n) => {
            let mut p = RingPoly::default();
            p.add_term(Vec::new(), BigInt::from(n.clone()));
            p
        }
        Term::Add(a, b) => ring_normalize(a).combine(&ring_normalize(b), 1),
        Term::Sub(a, b) => ring_normalize(a).combine(&ring_normalize(b), -1),
        Term::Mul(a, b) => ring_normalize(a).product(&ring_normalize(b)),
    }
}
