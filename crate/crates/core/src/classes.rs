//! Boole's algebras of classes `P_U` over finite universes `U = {0, …, n-1}`
//! and the characteristic-function embedding into `Z^U`.
//!
//! Subsets are bitmasks (bit `i` set iff `i ∈ A`), and the carrier of `P_U`
//! lists them in increasing bitmask order, so element index = bitmask.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, CompiledSentence, FinitePartialAlgebra};
use crate::horn::{Consequent, HornSentence};
use crate::par;
use crate::terms::Argument;
use crate::CapExceeded;

/// Default bound on the universe size.
pub const DEFAULT_MAX_UNIVERSE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("the universe must be nonempty")]
    EmptyUniverse,
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn check_universe(n: usize, cap: usize) -> Result<(), ClassError> {
    if n == 0 {
        return Err(ClassError::EmptyUniverse);
    }
    if n > cap {
        return Err(CapExceeded {
            what: "universe size",
            requested: n,
            cap,
        }
        .into());
    }
    Ok(())
}

/// `∅`, `U`, or `{i,j,…}`.
pub fn class_label(mask: usize, n: usize) -> String {
    if mask == 0 {
        "∅".to_string()
    } else if mask == (1 << n) - 1 {
        "U".to_string()
    } else {
        let members: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
        format!("{{{}}}", members.join(","))
    }
}

/// `P_U`: `·` is intersection, `+` is union of disjoint classes, `-` is
/// difference of a class and one of its subclasses, `0 = ∅`, `1 = U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassAlgebra {
    n: usize,
    algebra: FinitePartialAlgebra,
}

impl ClassAlgebra {
    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &FinitePartialAlgebra {
        &self.algebra
    }

    pub fn full(&self) -> usize {
        (1 << self.n) - 1
    }
}

pub fn build_pu(n: usize, cap: usize) -> Result<ClassAlgebra, ClassError> {
    check_universe(n, cap)?;
    let size = 1usize << n;
    let full = size - 1;
    let carrier: Vec<String> = (0..size).map(|m| class_label(m, n)).collect();
    let mut alg = FinitePartialAlgebra::new(carrier, &[("+", 2), ("-", 2), ("*", 2), ("0", 0), ("1", 0)])?;
    for a in 0..size {
        for b in 0..size {
            alg.set("*", &[a, b], a & b)?;
            if a & b == 0 {
                alg.set("+", &[a, b], a | b)?;
            }
            if b & !a == 0 {
                alg.set("-", &[a, b], a & !b)?;
            }
        }
    }
    alg.set("0", &[], 0)?;
    alg.set("1", &[], full)?;
    Ok(ClassAlgebra { n, algebra: alg })
}

/// An element of `Z^U` with componentwise ring operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn zero(n: usize) -> Self {
        IntVector(vec![BigInt::zero(); n])
    }

    pub fn one(n: usize) -> Self {
        IntVector(vec![BigInt::one(); n])
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.0.len(), other.0.len());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &IntVector {
    type Output = IntVector;
    fn mul(self, rhs: &IntVector) -> IntVector {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Characteristic function of the class with bitmask `a`.
pub fn chi(a: usize, n: usize) -> IntVector {
    IntVector((0..n).map(|i| BigInt::from((a >> i) & 1)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChiVerdict {
    /// χ is injective and preserves every defined entry; `entries` counts the
    /// entries checked.
    Yes { entries: usize },
    No(String),
}

impl ChiVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, ChiVerdict::Yes { .. })
    }
}

/// Checks that χ embeds `P_U` into `Z^U`: injectivity, and for every defined
/// entry of `+`, `-`, `·`, `0`, `1` the ring operation of `Z^U` on χ-images
/// gives the χ-image of the result.
pub fn verify_chi_embedding(n: usize, cap: usize) -> Result<ChiVerdict, ClassError> {
    let pu = build_pu(n, cap)?;
    let alg = pu.algebra();
    let images: Vec<IntVector> = (0..alg.size()).map(|a| chi(a, n)).collect();
    let distinct: HashSet<&IntVector> = images.iter().collect();
    if distinct.len() != images.len() {
        return Ok(ChiVerdict::No("χ is not injective".into()));
    }
    let mut entries = 0;
    for o in alg.operations() {
        for (args, v) in o.entries(alg.size()) {
            let image = match (o.name(), args.as_slice()) {
                ("+", [a, b]) => &images[*a] + &images[*b],
                ("-", [a, b]) => &images[*a] - &images[*b],
                ("*", [a, b]) => &images[*a] * &images[*b],
                ("0", []) => IntVector::zero(n),
                ("1", []) => IntVector::one(n),
                _ => unreachable!("P_U has no other operations"),
            };
            if image != images[v] {
                return Ok(ChiVerdict::No(format!(
                    "{} = {}: image {image} differs from χ = {}",
                    alg.render_application(o.name(), &args),
                    alg.element_name(v),
                    images[v]
                )));
            }
            entries += 1;
        }
    }
    Ok(ChiVerdict::Yes { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticVerdict {
    /// No counter-assignment in any `P_U` with `|U| ≤ max_n`.
    Valid { max_n: usize },
    /// Least counter-assignment: smallest universe, then lexicographic on the
    /// bitmasks of the variables in name order.
    Invalid {
        n: usize,
        assignment: Vec<(String, usize)>,
    },
}

impl SemanticVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, SemanticVerdict::Valid { .. })
    }

    pub fn render_assignment(&self) -> Option<String> {
        match self {
            SemanticVerdict::Valid { .. } => None,
            SemanticVerdict::Invalid { n, assignment } => {
                let parts: Vec<String> = assignment
                    .iter()
                    .map(|(v, m)| format!("{v}↦{}", class_label(*m, *n)))
                    .collect();
                Some(format!("{{{}}}", parts.join(", ")))
            }
        }
    }
}

/// The argument read as the sentence `(∀x⃗)(ε₁ ∧ … ∧ ε_k → ε)` over every
/// class-symbol of the argument.
pub fn argument_sentence(arg: &Argument) -> HornSentence {
    HornSentence::new(
        arg.variables().into_iter().collect(),
        arg.premisses.clone(),
        Consequent::Equation(arg.conclusion.clone()),
    )
    .expect("argument variables are quantified")
}

/// Searches every `P_U` with `1 ≤ |U| ≤ max_n` for an assignment of classes at
/// which every term of the argument is defined, the premisses hold and the
/// conclusion fails.
pub fn semantic_consequence(arg: &Argument, max_n: usize, cap: usize) -> Result<SemanticVerdict, ClassError> {
    check_universe(max_n, cap)?;
    let sentence = argument_sentence(arg);
    for n in 1..=max_n {
        let pu = build_pu(n, cap)?;
        let compiled = CompiledSentence::new(&pu.algebra().signature(), &sentence)?;
        let k = sentence.vars().len();
        let size = 1usize << n;
        let total = size
            .checked_pow(k as u32)
            .filter(|&t| t <= 1 << 32)
            .ok_or(CapExceeded {
                what: "class assignments",
                requested: usize::MAX,
                cap: 1 << 32,
            })?;
        let decode = |i: usize| crate::algebra::decode_assignment(i, size, k);
        if let Some(i) = par::find_first(total, |i| compiled.eval(pu.algebra(), &decode(i)) == Some(false)) {
            return Ok(SemanticVerdict::Invalid {
                n,
                assignment: sentence.vars().iter().cloned().zip(decode(i)).collect(),
            });
        }
    }
    Ok(SemanticVerdict::Valid { max_n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_equation;

    fn arg(premisses: &[&str], conclusion: &str) -> Argument {
        Argument::new(
            premisses.iter().map(|p| parse_equation(p).unwrap()).collect(),
            parse_equation(conclusion).unwrap(),
        )
    }

    fn count(alg: &FinitePartialAlgebra, op: &str) -> usize {
        let o = &alg.operations()[alg.op_index(op).unwrap()];
        o.entries(alg.size()).count()
    }

    #[test]
    fn pu_examples() {
        let p1 = build_pu(1, 5).unwrap();
        assert_eq!(p1.algebra().carrier(), ["∅", "U"]);
        assert_eq!(count(p1.algebra(), "+"), 3);
        assert_eq!(p1.algebra().get("+", &[1, 1]), None);
        assert_eq!(count(p1.algebra(), "*"), 4);
        let p2 = build_pu(2, 5).unwrap();
        assert_eq!(p2.algebra().size(), 4);
        assert_eq!(count(p2.algebra(), "-"), 9);
        assert_eq!(p2.algebra().carrier(), ["∅", "{0}", "{1}", "U"]);
    }

    #[test]
    fn pu_rejections() {
        assert_eq!(build_pu(0, 5), Err(ClassError::EmptyUniverse));
        assert!(matches!(build_pu(6, 5), Err(ClassError::Cap(_))));
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0b00, 2).to_string(), "(0,0)");
        assert_eq!(chi(0b11, 2).to_string(), "(1,1)");
        assert_eq!(chi(0b01, 2).to_string(), "(1,0)");
    }

    #[test]
    fn chi_embedding() {
        // n = 1: 3 entries for +, 3 for -, 4 for *, 2 constants
        assert_eq!(verify_chi_embedding(1, 5), Ok(ChiVerdict::Yes { entries: 12 }));
        assert!(verify_chi_embedding(2, 5).unwrap().is_yes());
        assert!(verify_chi_embedding(3, 5).unwrap().is_yes());
    }

    #[test]
    fn semantic_examples() {
        assert_eq!(
            semantic_consequence(&arg(&["x*y = 0"], "(x + y)*x = x"), 3, 5),
            Ok(SemanticVerdict::Valid { max_n: 3 })
        );
        assert_eq!(
            semantic_consequence(&arg(&["x + y = x", "x + y = y"], "x = y"), 3, 5),
            Ok(SemanticVerdict::Valid { max_n: 3 })
        );
        let v = semantic_consequence(&arg(&[], "x = 0"), 1, 5).unwrap();
        assert_eq!(
            v,
            SemanticVerdict::Invalid {
                n: 1,
                assignment: vec![("x".into(), 1)]
            }
        );
        assert_eq!(v.render_assignment().unwrap(), "{x↦U}");
    }

    #[test]
    fn semantic_uses_dom() {
        // x + x is defined only at ∅, so the law holds in every P_U even though
        // 2x ≠ x over the integers
        assert!(semantic_consequence(&arg(&[], "x + x = x"), 3, 5).unwrap().is_valid());
        let v = semantic_consequence(&arg(&[], "x*y = x"), 2, 5).unwrap();
        assert_eq!(
            v,
            SemanticVerdict::Invalid {
                n: 1,
                assignment: vec![("x".into(), 1), ("y".into(), 0)]
            }
        );
    }
}
