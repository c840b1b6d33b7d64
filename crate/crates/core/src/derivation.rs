//! Derivability of ground arguments, in two checkable forms.
//!
//! A [`Certificate`] is a multiplier `n ≥ 1` and one multilinear cofactor
//! `λ_j` per premiss with
//!
//! ```text
//! n·(lhs − rhs) = Σ_j λ_j·(lhs_j − rhs_j)      (modulo x² = x)
//! ```
//!
//! Ring reasoning turns the premisses into `n·(lhs − rhs) = 0`, and the
//! no-nilpotent rule `n·t = 0 ⟹ t = 0` discharges `n`.
//!
//! A [`DerivationTrace`] is a numbered list of equations, each justified by
//! one rule. Trace files use one step per line:
//!
//! ```text
//! 1: (2x)*(2x) = 2x [DeltaIdempotence 2x]
//! 2: 4x = 2x [IntegerSimplification 1]
//! 3: 2x = 0 [IntegerSimplification 2]
//! 4: x = 0 [NoNilpotent 3 2]
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::par;
use crate::polynomial::{
    boole_oracle, normalize, normalize_equation, ring_normalize, unexpand, ConstituentExpansion,
    Monomial, MultilinearPoly, VertexForm,
};
use crate::terms::{parse_context, parse_equation, Argument, Equation, Term, HOLE};
use crate::CapExceeded;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("certificate has {found} cofactors but the argument has {expected} premisses")]
    CofactorCountMismatch { expected: usize, found: usize },
    #[error("certificate multiplier must be at least 1, got {0}")]
    InvalidMultiplier(BigInt),
    #[error("step {step} cites step {cited}, which is not an earlier step")]
    MalformedReference { step: usize, cited: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("certificate JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub multiplier: BigInt,
    pub cofactors: Vec<MultilinearPoly>,
}

fn big_number(n: &BigInt) -> Value {
    // exact for any size: the number is kept as its decimal text
    serde_json::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

fn parse_big(v: &Value, what: &str) -> Result<BigInt, DerivationError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| DerivationError::Json(format!("{what} must be an integer, got {n}"))),
        other => Err(DerivationError::Json(format!("{what} must be an integer, got {other}"))),
    }
}

/// `[{"monomial": [...], "coeff": c}, ...]` in degree-lexicographic order.
pub fn poly_to_json(p: &MultilinearPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!({"monomial": m.variables(), "coeff": big_number(c)}))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value) -> Result<MultilinearPoly, DerivationError> {
    let records = v
        .as_array()
        .ok_or_else(|| DerivationError::Json("polynomial must be an array of records".into()))?;
    let mut terms = Vec::new();
    for r in records {
        let names = r
            .get("monomial")
            .and_then(Value::as_array)
            .ok_or_else(|| DerivationError::Json("record needs a `monomial` array".into()))?;
        let names: Vec<&str> = names
            .iter()
            .map(|n| {
                n.as_str()
                    .ok_or_else(|| DerivationError::Json("monomial entries must be strings".into()))
            })
            .collect::<Result<_, _>>()?;
        let coeff = parse_big(r.get("coeff").unwrap_or(&Value::Null), "coeff")?;
        terms.push((Monomial::new(names), coeff));
    }
    Ok(MultilinearPoly::from_terms(terms))
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "n": big_number(&self.multiplier),
            "cofactors": self.cofactors.iter().map(poly_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, DerivationError> {
        let multiplier = parse_big(v.get("n").unwrap_or(&Value::Null), "n")?;
        let cofactors = v
            .get("cofactors")
            .and_then(Value::as_array)
            .ok_or_else(|| DerivationError::Json("missing `cofactors` array".into()))?
            .iter()
            .map(poly_from_json)
            .collect::<Result<_, _>>()?;
        Ok(Certificate {
            multiplier,
            cofactors,
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n = {}", self.multiplier)?;
        for (j, c) in self.cofactors.iter().enumerate() {
            write!(f, ", λ{} = {c}", j + 1)?;
        }
        Ok(())
    }
}

/// `(g, x, y)` with `g = a·x + b·y` and `g ≥ 0`.
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, s0, s1, t0, t1) = (r1, r2, s1, s2, t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// `(d, u)` with `d = gcd(values) ≥ 0` and `Σ u_j·values_j = d`.
fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut d = BigInt::zero();
    let mut u: Vec<BigInt> = Vec::with_capacity(values.len());
    for g in values {
        let (nd, x, y) = extended_gcd(&d, g);
        for c in u.iter_mut() {
            *c *= &x;
        }
        u.push(y);
        d = nd;
    }
    (d, u)
}

/// Builds a certificate through the constituent basis, or `None` when the
/// argument fails the 0/1 vertex test.
///
/// At every vertex `v` let `d_v = gcd_j g_j(v)`. The multiplier is the least
/// common multiple of `d_v / gcd(d_v, f(v))`, and the cofactor values at `v`
/// are Bézout coefficients scaled so that `Σ_j λ_j(v)·g_j(v) = n·f(v)`.
pub fn certify_consequence(arg: &Argument, max_vars: usize) -> Result<Option<Certificate>, CapExceeded> {
    if !boole_oracle(arg, max_vars)?.is_valid() {
        return Ok(None);
    }
    let form = VertexForm::new(arg, max_vars)?;
    let values: Vec<(Vec<BigInt>, BigInt)> = par::map_range(form.num_vertices(), |v| {
        (
            form.premisses.iter().map(|g| g.eval(v)).collect(),
            form.conclusion.eval(v),
        )
    });
    let bezouts: Vec<(BigInt, Vec<BigInt>)> = par::map_slice(&values, |(g, _)| bezout(g));
    let mut multiplier = BigInt::one();
    for ((d, _), (_, f)) in bezouts.iter().zip(&values) {
        if !d.is_zero() && !f.is_zero() {
            multiplier = multiplier.lcm(&(d / d.gcd(f)));
        }
    }
    let k = arg.premisses.len();
    let mut per_premiss = vec![Vec::with_capacity(values.len()); k];
    for ((d, u), (_, f)) in bezouts.iter().zip(&values) {
        let scale = if d.is_zero() {
            // every premiss vanishes here, and so does f
            BigInt::zero()
        } else {
            &multiplier * f / d
        };
        for (j, uj) in u.iter().enumerate() {
            per_premiss[j].push(uj * &scale);
        }
    }
    let cofactors = per_premiss
        .into_iter()
        .map(|vals| unexpand(&ConstituentExpansion::new(form.vars.clone(), vals)))
        .collect();
    Ok(Some(Certificate {
        multiplier,
        cofactors,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateVerdict {
    Verified,
    /// `n·f − Σ λ_j·g_j` in normal form; nonzero.
    Rejected(MultilinearPoly),
}

impl CertificateVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, CertificateVerdict::Verified)
    }
}

/// Checks the certificate identity by normalization alone.
pub fn verify_certificate(arg: &Argument, cert: &Certificate) -> Result<CertificateVerdict, DerivationError> {
    if cert.cofactors.len() != arg.premisses.len() {
        return Err(DerivationError::CofactorCountMismatch {
            expected: arg.premisses.len(),
            found: cert.cofactors.len(),
        });
    }
    if cert.multiplier < BigInt::one() {
        return Err(DerivationError::InvalidMultiplier(cert.multiplier.clone()));
    }
    let mut residual = normalize_equation(&arg.conclusion).scale(&cert.multiplier);
    for (lambda, premiss) in cert.cofactors.iter().zip(&arg.premisses) {
        residual = &residual - &(lambda * &normalize_equation(premiss));
    }
    Ok(if residual.is_zero() {
        CertificateVerdict::Verified
    } else {
        CertificateVerdict::Rejected(residual)
    })
}

/// Which terms the idempotent law may be applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Only class-symbols (variables) are idempotent.
    Hailperin,
    /// `x*x = x` for every term. Unsound for classes: it proves `x = 0`.
    Sigma1,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hailperin" => Ok(Mode::Hailperin),
            "sigma1" => Ok(Mode::Sigma1),
            other => Err(format!("unknown mode `{other}` (expected hailperin or sigma1)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Hailperin => "hailperin",
            Mode::Sigma1 => "sigma1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Premiss,
    /// Both sides agree as polynomials over non-idempotent indeterminates.
    RingAxiomInstance,
    /// The step is `t*t = t`.
    DeltaIdempotence(Term),
    Refl,
    Sym(usize),
    Trans(usize, usize),
    /// From `a = b`, `C[a] = C[b]` for a context `C` with hole `_`.
    Congruence(usize, Term),
    /// From `n·t = 0` (up to normalization), `t = 0`.
    NoNilpotent(usize, BigInt),
    /// Same equation up to normalization of `lhs − rhs` (and its sign).
    IntegerSimplification(usize),
}

impl Rule {
    fn cited(&self) -> Vec<usize> {
        match self {
            Rule::Sym(i) | Rule::Congruence(i, _) | Rule::NoNilpotent(i, _) | Rule::IntegerSimplification(i) => {
                vec![*i]
            }
            Rule::Trans(i, j) => vec![*i, *j],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Premiss => f.write_str("Premiss"),
            Rule::RingAxiomInstance => f.write_str("RingAxiomInstance"),
            Rule::DeltaIdempotence(t) => write!(f, "DeltaIdempotence {t}"),
            Rule::Refl => f.write_str("Refl"),
            Rule::Sym(i) => write!(f, "Sym {i}"),
            Rule::Trans(i, j) => write!(f, "Trans {i} {j}"),
            Rule::Congruence(i, c) => write!(f, "Congruence {i} {c}"),
            Rule::NoNilpotent(i, n) => write!(f, "NoNilpotent {i} {n}"),
            Rule::IntegerSimplification(i) => write!(f, "IntegerSimplification {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub number: usize,
    pub equation: Equation,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DerivationTrace {
    pub steps: Vec<Step>,
}

impl DerivationTrace {
    /// Equations introduced by `Premiss` steps.
    pub fn premisses(&self) -> Vec<Equation> {
        self.steps
            .iter()
            .filter(|s| s.rule == Rule::Premiss)
            .map(|s| s.equation.clone())
            .collect()
    }

    pub fn conclusion(&self) -> Option<&Equation> {
        self.steps.last().map(|s| &s.equation)
    }

    /// The ground argument the trace claims to establish.
    pub fn argument(&self) -> Option<Argument> {
        self.conclusion()
            .map(|c| Argument::new(self.premisses(), c.clone()))
    }

    pub fn parse(text: &str) -> Result<Self, DerivationError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            steps.push(parse_step(line).map_err(|message| DerivationError::Parse {
                line: i + 1,
                message,
            })?);
        }
        Ok(DerivationTrace { steps })
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{}: {} [{}]", s.number, s.equation, s.rule)?;
        }
        Ok(())
    }
}

fn parse_step(line: &str) -> Result<Step, String> {
    let (num, rest) = line.split_once(':').ok_or("expected `k: equation [Rule args]`")?;
    let number: usize = num.trim().parse().map_err(|_| format!("invalid step number `{}`", num.trim()))?;
    let rest = rest.trim();
    let open = rest.rfind('[').ok_or("missing `[Rule ...]`")?;
    let rule_text = rest[open + 1..].strip_suffix(']').ok_or("rule must end with `]`")?.trim();
    let equation = parse_equation(&rest[..open]).map_err(|e| format!("equation: {e}"))?;
    let (name, args) = rule_text.split_once(char::is_whitespace).unwrap_or((rule_text, ""));
    let args = args.trim();
    let step_ref = |s: &str| -> Result<usize, String> {
        s.parse().map_err(|_| format!("invalid step reference `{s}`"))
    };
    let words: Vec<&str> = args.split_whitespace().collect();
    let want = |n: usize| -> Result<(), String> {
        if words.len() == n {
            Ok(())
        } else {
            Err(format!("rule `{name}` takes {n} argument(s), got {}", words.len()))
        }
    };
    let rule = match name {
        "Premiss" => want(0).map(|_| Rule::Premiss)?,
        "RingAxiomInstance" | "Ring" => want(0).map(|_| Rule::RingAxiomInstance)?,
        "Refl" => want(0).map(|_| Rule::Refl)?,
        "DeltaIdempotence" => Rule::DeltaIdempotence(
            crate::terms::parse(args).map_err(|e| format!("DeltaIdempotence target: {e}"))?,
        ),
        "Sym" => {
            want(1)?;
            Rule::Sym(step_ref(words[0])?)
        }
        "Trans" => {
            want(2)?;
            Rule::Trans(step_ref(words[0])?, step_ref(words[1])?)
        }
        "Congruence" => {
            let (i, ctx) = args
                .split_once(char::is_whitespace)
                .ok_or("Congruence takes a step and a context")?;
            Rule::Congruence(
                step_ref(i)?,
                parse_context(ctx.trim()).map_err(|e| format!("context: {e}"))?,
            )
        }
        "NoNilpotent" => {
            want(2)?;
            Rule::NoNilpotent(
                step_ref(words[0])?,
                words[1].parse().map_err(|_| format!("invalid multiplier `{}`", words[1]))?,
            )
        }
        "IntegerSimplification" => {
            want(1)?;
            Rule::IntegerSimplification(step_ref(words[0])?)
        }
        other => return Err(format!("unknown rule `{other}`")),
    };
    Ok(Step {
        number,
        equation,
        rule,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceVerdict {
    Accepted,
    Rejected { step: usize, reason: String },
}

impl TraceVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, TraceVerdict::Accepted)
    }
}

fn same_up_to_sign(a: &MultilinearPoly, b: &MultilinearPoly) -> bool {
    a == b || *a == -b
}

fn check_step<'a>(step: &Step, cite: &dyn Fn(usize) -> &'a Equation, mode: Mode) -> Result<(), String> {
    let eq = &step.equation;
    match &step.rule {
        Rule::Premiss => Ok(()),
        Rule::Refl => (eq.lhs == eq.rhs)
            .then_some(())
            .ok_or_else(|| "Refl needs identical sides".to_string()),
        Rule::RingAxiomInstance => (ring_normalize(&eq.lhs) == ring_normalize(&eq.rhs))
            .then_some(())
            .ok_or_else(|| "sides differ as commutative-ring polynomials".to_string()),
        Rule::DeltaIdempotence(t) => {
            if mode == Mode::Hailperin && !matches!(t, Term::Var(_)) {
                return Err(format!(
                    "idempotent law applied to `{t}`, which is not a class-symbol"
                ));
            }
            let expected = Equation::new(Term::mul(t.clone(), t.clone()), t.clone());
            (*eq == expected)
                .then_some(())
                .ok_or_else(|| format!("expected `{expected}`"))
        }
        Rule::Sym(i) => (*eq == cite(*i).flipped())
            .then_some(())
            .ok_or_else(|| format!("not the mirror of step {i}")),
        Rule::Trans(i, j) => {
            let (a, b) = (cite(*i), cite(*j));
            if a.rhs != b.lhs {
                return Err(format!("right side of step {i} differs from left side of step {j}"));
            }
            (eq.lhs == a.lhs && eq.rhs == b.rhs)
                .then_some(())
                .ok_or_else(|| format!("expected `{} = {}`", a.lhs, b.rhs))
        }
        Rule::Congruence(i, ctx) => {
            let a = cite(*i);
            let expected = Equation::new(ctx.substitute(HOLE, &a.lhs), ctx.substitute(HOLE, &a.rhs));
            (*eq == expected)
                .then_some(())
                .ok_or_else(|| format!("expected `{expected}`"))
        }
        Rule::NoNilpotent(i, n) => {
            if *n < BigInt::one() {
                return Err("multiplier must be at least 1".into());
            }
            let scaled = normalize_equation(eq).scale(n);
            same_up_to_sign(&normalize_equation(cite(*i)), &scaled)
                .then_some(())
                .ok_or_else(|| format!("step {i} is not {n} times this equation"))
        }
        Rule::IntegerSimplification(i) => {
            same_up_to_sign(&normalize_equation(cite(*i)), &normalize_equation(eq))
                .then_some(())
                .ok_or_else(|| format!("not a rearrangement of step {i}"))
        }
    }
}

/// Validates every step against its rule. References to missing or later
/// steps are errors rather than rejections.
pub fn check_trace(tr: &DerivationTrace, mode: Mode) -> Result<TraceVerdict, DerivationError> {
    let mut index = std::collections::HashMap::new();
    for (pos, step) in tr.steps.iter().enumerate() {
        for cited in step.rule.cited() {
            if !index.contains_key(&cited) {
                return Err(DerivationError::MalformedReference {
                    step: step.number,
                    cited,
                });
            }
        }
        if index.insert(step.number, pos).is_some() {
            return Err(DerivationError::MalformedReference {
                step: step.number,
                cited: step.number,
            });
        }
    }
    let cite = |n: usize| &tr.steps[index[&n]].equation;
    for step in &tr.steps {
        if let Err(reason) = check_step(step, &cite, mode) {
            return Ok(TraceVerdict::Rejected {
                step: step.number,
                reason,
            });
        }
    }
    Ok(TraceVerdict::Accepted)
}

/// Polynomial identity used in reports: `normalize(t)`.
pub fn normal_form(t: &Term) -> MultilinearPoly {
    normalize(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{barbara, CX_TRACE};
    use crate::polynomial::normalize;
    use crate::terms::parse;

    fn p(s: &str) -> MultilinearPoly {
        normalize(&parse(s).unwrap())
    }

    fn arg(premisses: &[&str], conclusion: &str) -> Argument {
        Argument::new(
            premisses.iter().map(|e| parse_equation(e).unwrap()).collect(),
            parse_equation(conclusion).unwrap(),
        )
    }

    #[test]
    fn bezout_identity() {
        let vals: Vec<BigInt> = [6, -10, 15, 0].iter().map(|&v| BigInt::from(v)).collect();
        let (d, u) = bezout(&vals);
        assert_eq!(d, BigInt::from(1));
        let sum: BigInt = u.iter().zip(&vals).map(|(a, b)| a * b).sum();
        assert_eq!(sum, d);
        let (d, _) = bezout(&[BigInt::from(-4)]);
        assert_eq!(d, BigInt::from(4));
        assert_eq!(bezout(&[BigInt::zero(), BigInt::zero()]).0, BigInt::zero());
    }

    #[test]
    fn barbara_certificates() {
        let b = barbara();
        let cert = certify_consequence(&b, 20).unwrap().expect("valid");
        assert_eq!(cert.multiplier, BigInt::one());
        assert_eq!(verify_certificate(&b, &cert), Ok(CertificateVerdict::Verified));
        let compact = Certificate {
            multiplier: BigInt::one(),
            cofactors: vec![p("1 - z"), p("x")],
        };
        assert_eq!(verify_certificate(&b, &compact), Ok(CertificateVerdict::Verified));
        let wrong = Certificate {
            multiplier: BigInt::one(),
            cofactors: vec![p("1"), p("x")],
        };
        assert_eq!(
            verify_certificate(&b, &wrong),
            Ok(CertificateVerdict::Rejected(p("x*y*z - x*z")))
        );
    }

    #[test]
    fn trivial_certificate() {
        let a = arg(&[], "x - x = 0");
        let cert = certify_consequence(&a, 20).unwrap().unwrap();
        assert_eq!(cert.multiplier, BigInt::one());
        assert!(cert.cofactors.is_empty());
        assert_eq!(verify_certificate(&a, &cert), Ok(CertificateVerdict::Verified));
    }

    #[test]
    fn torsion_multiplier() {
        let a = arg(&["2*x = 0"], "x = 0");
        let cert = certify_consequence(&a, 20).unwrap().unwrap();
        assert_eq!(cert.multiplier, BigInt::from(2));
        assert_eq!(verify_certificate(&a, &cert), Ok(CertificateVerdict::Verified));
        let simple = Certificate {
            multiplier: BigInt::from(2),
            cofactors: vec![p("1")],
        };
        assert_eq!(verify_certificate(&a, &simple), Ok(CertificateVerdict::Verified));
    }

    #[test]
    fn no_certificate_for_invalid_arguments() {
        assert_eq!(certify_consequence(&arg(&["x*y = 0"], "x = 0"), 20), Ok(None));
    }

    #[test]
    fn verify_errors() {
        let b = barbara();
        let short = Certificate {
            multiplier: BigInt::one(),
            cofactors: vec![p("1")],
        };
        assert_eq!(
            verify_certificate(&b, &short),
            Err(DerivationError::CofactorCountMismatch { expected: 2, found: 1 })
        );
        let zero = Certificate {
            multiplier: BigInt::zero(),
            cofactors: vec![p("1"), p("1")],
        };
        assert!(matches!(verify_certificate(&b, &zero), Err(DerivationError::InvalidMultiplier(_))));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = Certificate {
            multiplier: "123456789012345678901234567890".parse().unwrap(),
            cofactors: vec![p("1 - z"), p("0 - 3x*y + 2")],
        };
        let v = cert.to_json();
        assert_eq!(
            v["cofactors"][0],
            json!([{"monomial": [], "coeff": 1}, {"monomial": ["z"], "coeff": -1}])
        );
        assert_eq!(v["n"].to_string(), "123456789012345678901234567890");
        assert_eq!(Certificate::from_json(&v), Ok(cert));
        assert!(Certificate::from_json(&json!({"n": "x", "cofactors": []})).is_err());
        assert!(Certificate::from_json(&json!({"n": 1})).is_err());
    }

    #[test]
    fn cx_trace_modes() {
        let tr = DerivationTrace::parse(CX_TRACE).unwrap();
        assert_eq!(tr.steps.len(), 4);
        assert_eq!(DerivationTrace::parse(&tr.to_string()).unwrap(), tr);
        assert_eq!(check_trace(&tr, Mode::Sigma1), Ok(TraceVerdict::Accepted));
        match check_trace(&tr, Mode::Hailperin).unwrap() {
            TraceVerdict::Rejected { step, reason } => {
                assert_eq!(step, 1);
                assert!(reason.contains("class-symbol"), "{reason}");
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(tr.conclusion().unwrap().to_string(), "x = 0");
        assert!(tr.premisses().is_empty());
    }

    #[test]
    fn single_refl_step() {
        let tr = DerivationTrace::parse("1: x = x [Refl]").unwrap();
        assert_eq!(check_trace(&tr, Mode::Hailperin), Ok(TraceVerdict::Accepted));
    }

    #[test]
    fn every_rule_in_hailperin_mode() {
        let text = "\
1: x - x*y = 0 [Premiss]
2: y - y*z = 0 [Premiss]
3: x*(y - y*z) = x*0 [Congruence 2 x*_]
4: x*0 = 0 [Ring]
5: x*(y - y*z) = 0 [Trans 3 4]
6: x - x*z = 0 [IntegerSimplification 5]
7: 0 = x - x*z [Sym 6]
8: x*x = x [DeltaIdempotence x]
";
        let tr = DerivationTrace::parse(text).unwrap();
        // step 6 alone is not a rearrangement of step 5: it needs step 1 too
        assert!(matches!(
            check_trace(&tr, Mode::Hailperin),
            Ok(TraceVerdict::Rejected { step: 6, .. })
        ));
        let fixed = text
            .replace("6: x - x*z = 0", "6: x*y - x*y*z = 0")
            .replace("7: 0 = x - x*z", "7: 0 = x*y - x*y*z");
        let tr = DerivationTrace::parse(&fixed).unwrap();
        assert_eq!(check_trace(&tr, Mode::Hailperin), Ok(TraceVerdict::Accepted));
    }

    #[test]
    fn rejections_name_the_step() {
        let cases = [
            ("1: x = y [Refl]", 1),
            ("1: x*y = y*x*x [Ring]", 1),
            ("1: x = y [Premiss]\n2: x = y [Sym 1]", 2),
            ("1: 2x = 0 [Premiss]\n2: x = 0 [NoNilpotent 1 3]", 2),
            ("1: x = y [Premiss]\n2: y = z [Premiss]\n3: x = y [Trans 1 2]", 3),
            ("1: x = y [Premiss]\n2: x + 1 = y [Congruence 1 _ + 1]", 2),
            ("1: x*x = y [DeltaIdempotence x]", 1),
        ];
        for (text, step) in cases {
            let tr = DerivationTrace::parse(text).unwrap();
            match check_trace(&tr, Mode::Sigma1).unwrap() {
                TraceVerdict::Rejected { step: s, .. } => assert_eq!(s, step, "{text}"),
                v => panic!("{text}: {v:?}"),
            }
        }
    }

    #[test]
    fn malformed_references_are_errors() {
        let tr = DerivationTrace::parse("1: x = x [Sym 2]\n2: x = x [Refl]").unwrap();
        assert_eq!(
            check_trace(&tr, Mode::Hailperin),
            Err(DerivationError::MalformedReference { step: 1, cited: 2 })
        );
        let dup = DerivationTrace::parse("1: x = x [Refl]\n1: x = x [Refl]").unwrap();
        assert!(check_trace(&dup, Mode::Hailperin).is_err());
    }

    #[test]
    fn trace_parse_errors() {
        for (text, line) in [
            ("1 x = x [Refl]", 1),
            ("1: x = x", 1),
            ("1: x = x [Frobnicate]", 1),
            ("\n1: x = x [Sym]", 2),
            ("1: x = [Refl]", 1),
            ("1: x = x [Congruence 1 x]", 1),
        ] {
            match DerivationTrace::parse(text) {
                Err(DerivationError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
