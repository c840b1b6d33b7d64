//! Named algebras, theories and arguments used by the demonstrations, the CLI
//! and the tests.

use crate::algebra::FinitePartialAlgebra;
use crate::horn::{parse_theory, HornSentence};
use crate::terms::{parse_equation, Argument, Term};

fn two_element(entries: &[(&str, &str, &str)]) -> FinitePartialAlgebra {
    let mut a = FinitePartialAlgebra::new(["0", "1"], &[("+", 2)]).expect("valid carrier");
    for (x, y, v) in entries {
        a.define("+", &[x, y], v).expect("valid entry");
    }
    a
}

/// `⟨{0,1}, +⟩` with `0+0 = 0`, `1+1 = 1` and `+` otherwise undefined.
pub fn p_intro() -> FinitePartialAlgebra {
    two_element(&[("0", "0", "0"), ("1", "1", "1")])
}

/// `⟨{0,1}, max⟩`.
pub fn q_max() -> FinitePartialAlgebra {
    two_element(&[("0", "0", "0"), ("0", "1", "1"), ("1", "0", "1"), ("1", "1", "1")])
}

/// `⟨{0,1}, xor⟩`.
pub fn q_xor() -> FinitePartialAlgebra {
    two_element(&[("0", "0", "0"), ("0", "1", "1"), ("1", "0", "1"), ("1", "1", "0")])
}

/// `{x + y = x, x + y = y}` as identities.
pub fn sigma_intro() -> Vec<HornSentence> {
    parse_theory("-> x + y = x\n-> x + y = y\n").expect("valid theory")
}

/// `n·x` written as the left-nested sum `x + x + ... + x`.
pub fn repeated_sum(x: &Term, n: usize) -> Term {
    assert!(n >= 1);
    (1..n).fold(x.clone(), |acc, _| Term::add(acc, x.clone()))
}

/// Commutative rings with unity in the signature `{+, -, *, 0, 1}`, the
/// disequation `0 ≠ 1`, and "no additive nilpotents" `n·x = 0 → x = 0` for
/// `n = 2..=max_multiplier`.
///
/// A finite model with `k` elements has additive characteristic at most `k`,
/// so multipliers up to `k` already exclude every model of size `k`.
pub fn hailperin_sigma(max_multiplier: usize) -> Vec<HornSentence> {
    let mut sigma = parse_theory(
        "-> x + (y + z) = (x + y) + z\n\
         -> x + y = y + x\n\
         -> x + 0 = x\n\
         -> (x - y) + y = x\n\
         -> x*(y*z) = (x*y)*z\n\
         -> x*y = y*x\n\
         -> x*1 = x\n\
         -> x*(y + z) = x*y + x*z\n\
         0 = 1 -> false\n",
    )
    .expect("valid theory");
    let x = Term::var("x");
    for n in 2..=max_multiplier {
        sigma.push(
            HornSentence::parse(&format!("{} = 0 -> x = 0", repeated_sum(&x, n)))
                .expect("valid sentence"),
        );
    }
    sigma
}

fn argument(premisses: &[&str], conclusion: &str) -> Argument {
    Argument::new(
        premisses
            .iter()
            .map(|p| parse_equation(p).expect("valid premiss"))
            .collect(),
        parse_equation(conclusion).expect("valid conclusion"),
    )
}

/// All x are y, all y are z, hence all x are z.
pub fn barbara() -> Argument {
    argument(&["x - x*y = 0", "y - y*z = 0"], "x - x*z = 0")
}

/// The two intro equations as premisses, `x = y` as conclusion.
pub fn intro_argument() -> Argument {
    argument(&["x + y = x", "x + y = y"], "x = y")
}

/// `⊢ x = 0`, the conclusion reached from `(2x)(2x) = 2x`.
pub fn cx_argument() -> Argument {
    argument(&[], "x = 0")
}

/// The derivation `(2x)(2x) = 2x ⟹ 4x = 2x ⟹ 2x = 0 ⟹ x = 0`, using the
/// idempotent law on the compound term `2x`.
pub const CX_TRACE: &str = "\
1: (2x)*(2x) = 2x [DeltaIdempotence 2x]
2: 4x = 2x [IntegerSimplification 1]
3: 2x = 0 [IntegerSimplification 2]
4: x = 0 [NoNilpotent 3 2]
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hailperin_sigma_shape() {
        let s = hailperin_sigma(4);
        assert_eq!(s.len(), 9 + 3);
        assert_eq!(s.last().unwrap().to_string(), "x + x + x + x = 0 -> x = 0");
    }

    #[test]
    fn intro_algebras() {
        assert!(!p_intro().is_total());
        assert!(q_max().is_total());
        assert_eq!(q_xor().get("+", &[1, 1]), Some(0));
    }
}
