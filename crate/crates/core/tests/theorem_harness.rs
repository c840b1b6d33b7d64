//! Randomized harnesses for the embedding criterion (sufficiency direction)
//! and for the soundness of the derivation-trace checker.

mod common;

use boolelab::algebra::{domain, holds};
use boolelab::derivation::{certify_consequence, check_trace, Rule, Step, TraceVerdict};
use boolelab::horn::{embeds_into_mod_bounded, holds_total, relativize, EmbedVerdict};
use boolelab::polynomial::{boole_oracle, normalize_equation, Monomial, MultilinearPoly};
use boolelab::terms::parse_equation;
use boolelab::{Consequent, Delta, DerivationTrace, Equation, FinitePartialAlgebra, HornSentence, Mode, Term};
use boolelab::classes::{semantic_consequence, SemanticVerdict};
use boolelab::OracleVerdict;
use common::{binary, random_argument, random_term, set_eval};
use std::collections::BTreeMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_plus_term(rng: &mut StdRng) -> Term {
    let leaf = |rng: &mut StdRng| Term::var(["x", "y"][rng.random_range(0..2)]);
    if rng.random_bool(0.4) {
        leaf(rng)
    } else {
        Term::add(leaf(rng), leaf(rng))
    }
}

fn random_plus_equation(rng: &mut StdRng) -> Equation {
    Equation::new(random_plus_term(rng), random_plus_term(rng))
}

/// A universal Horn sentence in `+` with at most two atoms.
fn random_sentence(rng: &mut StdRng) -> HornSentence {
    let shape = rng.random_range(0..4);
    let (ante, cons) = match shape {
        0 => (vec![], Consequent::Equation(random_plus_equation(rng))),
        1 => (vec![random_plus_equation(rng)], Consequent::Equation(random_plus_equation(rng))),
        2 => (vec![random_plus_equation(rng)], Consequent::Falsum),
        _ => (
            vec![random_plus_equation(rng), random_plus_equation(rng)],
            Consequent::Falsum,
        ),
    };
    HornSentence::new(vec!["x".into(), "y".into()], ante, cons).unwrap()
}

fn random_partial_algebra(rng: &mut StdRng) -> FinitePartialAlgebra {
    let carrier: &[&str] = if rng.random_bool(0.3) { &["0"] } else { &["0", "1"] };
    let n = carrier.len();
    let mut a = FinitePartialAlgebra::new(carrier.to_vec(), &[("+", 2)]).unwrap();
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(0.6) {
                a.set("+", &[i, j], rng.random_range(0..n)).unwrap();
            }
        }
    }
    a
}

#[test]
fn embedding_criterion_sufficiency() {
    let deltas: Vec<Delta> = ["x = x", "x + x = x", "x + x = x + x"]
        .iter()
        .map(|d| Delta::new("x", vec![parse_equation(d).unwrap()]).unwrap())
        .collect();
    let mut rng = StdRng::seed_from_u64(22);
    let (mut cases, mut applicable, mut nonvacuous) = (0, 0, 0);
    // draw until 500 cases satisfy the hypotheses
    while applicable < 500 {
        assert!(cases < 50_000, "only {applicable} of {cases} draws met the hypotheses");
        let p = random_partial_algebra(&mut rng);
        let sigma: Vec<HornSentence> = (0..rng.random_range(0..=2)).map(|_| random_sentence(&mut rng)).collect();
        let s = random_sentence(&mut rng);
        let delta = &deltas[rng.random_range(0..deltas.len())];
        cases += 1;
        let delta_sentence = delta.as_sentence();
        let delta_total = domain(&p, &delta_sentence).unwrap().len() == p.size();
        if !delta_total || !holds(&p, &delta_sentence).unwrap().holds() {
            continue;
        }
        let EmbedVerdict::Witness { model, .. } = embeds_into_mod_bounded(&p, &sigma, 3, 4).unwrap() else {
            continue;
        };
        if !holds_total(&model, &relativize(&s, delta)).unwrap().holds() {
            continue;
        }
        applicable += 1;
        let verdict = holds(&p, &s).unwrap();
        assert!(
            verdict.holds(),
            "σ = {s} fails in P at {verdict:?} although σ|δ holds in a total model of Σ receiving P\nP:\n{p}\nQ:\n{model}"
        );
        if !domain(&p, &s).unwrap().is_empty() {
            nonvacuous += 1;
        }
    }
    assert!(nonvacuous >= 100, "only {nonvacuous} of {applicable} cases had a nonempty domain");
}

/// Builds traces from random rule applications, some of them corrupted.
struct TraceBuilder<'a> {
    rng: &'a mut StdRng,
    steps: Vec<Step>,
}

impl TraceBuilder<'_> {
    fn push(&mut self, equation: Equation, rule: Rule) {
        let number = self.steps.len() + 1;
        self.steps.push(Step { number, equation, rule });
    }

    fn pick(&mut self) -> usize {
        self.rng.random_range(0..self.steps.len())
    }

    fn term(&mut self) -> Term {
        random_term(self.rng, &["x", "y"], 1)
    }

    fn step(&mut self) {
        let vars = ["x", "y"];
        match self.rng.random_range(0..8) {
            0 => {
                let t = self.term();
                self.push(Equation::new(t.clone(), t), Rule::Refl);
            }
            1 => {
                let i = self.pick();
                let e = self.steps[i].equation.flipped();
                self.push(e, Rule::Sym(i + 1));
            }
            2 => {
                let found = (0..self.steps.len())
                    .flat_map(|i| (0..self.steps.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| self.steps[i].equation.rhs == self.steps[j].equation.lhs);
                if let Some((i, j)) = found {
                    let e = Equation::new(self.steps[i].equation.lhs.clone(), self.steps[j].equation.rhs.clone());
                    self.push(e, Rule::Trans(i + 1, j + 1));
                }
            }
            3 => {
                let i = self.pick();
                let other = self.term();
                let op = ["+", "-", "*"][self.rng.random_range(0..3)];
                let hole = Term::var("_");
                let ctx = if self.rng.random_bool(0.5) {
                    binary(op, hole, other)
                } else {
                    binary(op, other, hole)
                };
                let e = &self.steps[i].equation;
                let eq = Equation::new(ctx.substitute("_", &e.lhs), ctx.substitute("_", &e.rhs));
                self.push(eq, Rule::Congruence(i + 1, ctx));
            }
            4 => {
                let i = self.pick();
                let p = normalize_equation(&self.steps[i].equation);
                let eq = if self.rng.random_bool(0.5) {
                    Equation::new(p.to_term(), Term::zero())
                } else {
                    Equation::new(Term::zero(), p.to_term())
                };
                self.push(eq, Rule::IntegerSimplification(i + 1));
            }
            5 => {
                let (a, b, c) = (self.term(), self.term(), self.term());
                let eq = match self.rng.random_range(0..3) {
                    0 => Equation::new(Term::add(a.clone(), b.clone()), Term::add(b, a)),
                    1 => Equation::new(
                        Term::mul(a.clone(), Term::add(b.clone(), c.clone())),
                        Term::add(Term::mul(a.clone(), b), Term::mul(a, c)),
                    ),
                    _ => Equation::new(Term::sub(Term::add(a.clone(), b.clone()), b), a),
                };
                self.push(eq, Rule::RingAxiomInstance);
            }
            6 => {
                let x = Term::var(vars[self.rng.random_range(0..2)]);
                self.push(Equation::new(Term::mul(x.clone(), x.clone()), x.clone()), Rule::DeltaIdempotence(x));
            }
            _ => {
                let i = self.pick();
                let p = normalize_equation(&self.steps[i].equation);
                let g = p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
                if g > BigInt::from(1) {
                    let reduced = MultilinearPoly::from_terms(
                        p.terms().map(|(m, c)| (m.clone(), c / &g)).collect::<Vec<(Monomial, BigInt)>>(),
                    );
                    self.push(Equation::new(reduced.to_term(), Term::zero()), Rule::NoNilpotent(i + 1, g.abs()));
                }
            }
        }
    }
}

#[test]
fn accepted_traces_are_sound() {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut accepted, mut corrupted_rejected) = (0, 0);
    for round in 0..400 {
        let mut premisses = Vec::new();
        for _ in 0..rng.random_range(0..=2) {
            let t = random_term(&mut rng, &["x", "y"], 2);
            let e = if rng.random_bool(0.4) {
                let c = Term::int(rng.random_range(2..=3));
                Equation::new(Term::mul(c, t), Term::zero())
            } else {
                Equation::new(t, random_term(&mut rng, &["x", "y"], 1))
            };
            premisses.push(e);
        }
        let mut b = TraceBuilder { rng: &mut rng, steps: Vec::new() };
        for p in premisses {
            b.push(p, Rule::Premiss);
        }
        if b.steps.is_empty() {
            b.push(parse_equation("x = x").unwrap(), Rule::Refl);
        }
        for _ in 0..6 {
            b.step();
        }
        let corrupt = round % 5 == 0;
        if corrupt {
            let i = b.rng.random_range(0..b.steps.len());
            let t = random_term(b.rng, &["x", "y"], 1);
            b.steps[i].equation.rhs = t;
        }
        let trace = DerivationTrace { steps: b.steps };
        let verdict = check_trace(&trace, Mode::Hailperin).unwrap();
        if !corrupt {
            assert_eq!(verdict, TraceVerdict::Accepted, "honest trace rejected:\n{trace}");
        }
        if verdict.is_accepted() {
            accepted += 1;
            // every prefix is itself a trace, so every step must be a consequence
            for k in 1..=trace.steps.len() {
                let prefix = DerivationTrace { steps: trace.steps[..k].to_vec() };
                let arg = prefix.argument().unwrap();
                assert!(boole_oracle(&arg, 20).unwrap().is_valid(), "accepted trace proves {arg}\n{trace}");
                assert!(certify_consequence(&arg, 20).unwrap().is_some(), "no certificate for {arg}");
            }
        } else {
            corrupted_rejected += 1;
        }
    }
    assert!(accepted >= 300, "only {accepted} traces accepted");
    assert!(corrupted_rejected > 0);
}

/// The 0/1 vertex test against `P_U` with `|U| = 1`, whose classes are exactly
/// `∅` and `U`. A vertex where every term is defined is a counter-assignment
/// in `P_U`, so oracle validity implies semantic validity. The converse can
/// fail, and each such discrepancy must come from a vertex where some term is
/// undefined.
#[test]
fn rule_of_zero_one_agreement() {
    let mut rng = StdRng::seed_from_u64(1847);
    let mut discrepancies = Vec::new();
    for _ in 0..500 {
        let arg = random_argument(&mut rng);
        let oracle = boole_oracle(&arg, 20).unwrap();
        let semantic = semantic_consequence(&arg, 1, 5).unwrap();
        match (&oracle, &semantic) {
            (OracleVerdict::Valid, SemanticVerdict::Invalid { .. }) => {
                panic!("{arg}: the vertex test accepts, yet |U| = 1 refutes it: {semantic:?}")
            }
            (OracleVerdict::Invalid(w), SemanticVerdict::Valid { .. }) => {
                let env: BTreeMap<String, u32> =
                    w.vars.iter().cloned().zip(w.vertex.0.iter().map(|&b| u32::from(b))).collect();
                let terms = arg.premisses.iter().chain([&arg.conclusion]).flat_map(|e| [&e.lhs, &e.rhs]);
                let undefined = terms.filter(|t| set_eval(t, &env, 1).is_none()).count();
                assert!(undefined > 0, "{arg}: every term is defined at the witness vertex");
                discrepancies.push(arg.to_string());
            }
            _ => {}
        }
    }
    println!("{} of 500 arguments fail the vertex test only where a term is undefined:", discrepancies.len());
    for d in &discrepancies {
        println!("  {d}");
    }
}
