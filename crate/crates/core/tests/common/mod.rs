//! Shared helpers for the integration tests: independent evaluators used as
//! oracles, term enumeration, random generators, and CLI invocation.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use boolelab::{Argument, Equation, Term};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Runs the built binary and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    cli_env(args, &[])
}

pub fn cli_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_boolelab"));
    cmd.args(args).current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    for var in ["BOOLELAB_MAX_VARS", "BOOLELAB_MAX_UNIVERSE", "BOOLELAB_MAX_MODEL_SIZE"] {
        cmd.env_remove(var);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

/// Total evaluation over the integers, with no normal forms involved.
pub fn int_eval(t: &Term, env: &BTreeMap<String, i64>) -> BigInt {
    match t {
        Term::Var(v) => BigInt::from(env[v]),
        Term::Int(n) => BigInt::from(n.clone()),
        Term::Add(a, b) => int_eval(a, env) + int_eval(b, env),
        Term::Sub(a, b) => int_eval(a, env) - int_eval(b, env),
        Term::Mul(a, b) => int_eval(a, env) * int_eval(b, env),
    }
}

/// Boole's reading of a term on subsets of `{0..n-1}` (bitmasks): `+` needs
/// disjoint summands, `-` needs the subtrahend inside the minuend, and no
/// integer other than 0 and 1 names a class.
pub fn set_eval(t: &Term, env: &BTreeMap<String, u32>, full: u32) -> Option<u32> {
    match t {
        Term::Var(v) => Some(env[v]),
        Term::Int(n) => match n.to_u32() {
            Some(0) => Some(0),
            Some(1) => Some(full),
            _ => None,
        },
        Term::Add(a, b) => {
            let (a, b) = (set_eval(a, env, full)?, set_eval(b, env, full)?);
            (a & b == 0).then_some(a | b)
        }
        Term::Sub(a, b) => {
            let (a, b) = (set_eval(a, env, full)?, set_eval(b, env, full)?);
            (b & !a == 0).then_some(a & !b)
        }
        Term::Mul(a, b) => Some(set_eval(a, env, full)? & set_eval(b, env, full)?),
    }
}

/// Brute-force search for a counter-assignment in `P_U`, `1 ≤ |U| ≤ max_n`,
/// at which every term of the argument is defined.
pub fn set_counterexample(arg: &Argument, max_n: usize) -> Option<(usize, BTreeMap<String, u32>)> {
    let vars: Vec<String> = arg.variables().into_iter().collect();
    let eqs: Vec<&Equation> = arg.premisses.iter().chain([&arg.conclusion]).collect();
    for n in 1..=max_n {
        let full = (1u32 << n) - 1;
        let classes = 1u64 << n;
        for code in 0..classes.pow(vars.len() as u32) {
            let mut env = BTreeMap::new();
            let mut c = code;
            for v in vars.iter().rev() {
                env.insert(v.clone(), (c % classes) as u32);
                c /= classes;
            }
            let values: Option<Vec<(u32, u32)>> = eqs
                .iter()
                .map(|e| Some((set_eval(&e.lhs, &env, full)?, set_eval(&e.rhs, &env, full)?)))
                .collect();
            let Some(values) = values else { continue };
            let (last, rest) = values.split_last().unwrap();
            if rest.iter().all(|(a, b)| a == b) && last.0 != last.1 {
                return Some((n, env));
            }
        }
    }
    None
}

/// The 0/1 vertex test computed by direct integer evaluation.
pub fn vertex_counterexample(arg: &Argument) -> Option<BTreeMap<String, i64>> {
    let vars: Vec<String> = arg.variables().into_iter().collect();
    let m = vars.len();
    (0..1u32 << m).find_map(|bits| {
        let env: BTreeMap<String, i64> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i64::from(bits >> (m - 1 - i) & 1)))
            .collect();
        let diff = |e: &Equation| int_eval(&e.lhs, &env) - int_eval(&e.rhs, &env);
        let premisses_hold = arg.premisses.iter().all(|p| diff(p) == BigInt::from(0));
        (premisses_hold && diff(&arg.conclusion) != BigInt::from(0)).then_some(env)
    })
}

/// Every term of height at most `depth` built from `atoms` with the binary
/// constructors in `ops` ("+", "-", "*").
pub fn enumerate_terms(atoms: &[Term], ops: &[&str], depth: usize) -> Vec<Term> {
    let mut all: Vec<Term> = atoms.to_vec();
    // terms of height exactly d start at `starts[d]`
    let mut starts = vec![0usize];
    for _ in 0..depth {
        let prev_start = *starts.last().unwrap();
        let end = all.len();
        let mut next = Vec::new();
        for i in 0..end {
            for j in 0..end {
                if i < prev_start && j < prev_start {
                    continue;
                }
                for op in ops {
                    next.push(binary(op, all[i].clone(), all[j].clone()));
                }
            }
        }
        starts.push(end);
        all.extend(next);
    }
    all
}

pub fn binary(op: &str, a: Term, b: Term) -> Term {
    match op {
        "+" => Term::add(a, b),
        "-" => Term::sub(a, b),
        "*" => Term::mul(a, b),
        other => panic!("unknown operation {other}"),
    }
}

/// Random term over `vars` with constants 0, 1, 2.
pub fn random_term(rng: &mut StdRng, vars: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.random_bool(0.3) {
        if rng.random_bool(0.75) {
            Term::var(vars[rng.random_range(0..vars.len())])
        } else {
            Term::int(rng.random_range(0..3))
        }
    } else {
        let op = ["+", "-", "*"][rng.random_range(0..3)];
        binary(op, random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1))
    }
}

fn random_equation(rng: &mut StdRng, vars: &[&str], depth: usize) -> Equation {
    Equation::new(random_term(rng, vars, depth), random_term(rng, vars, depth))
}

/// A random ground argument with at most three class-symbols and two
/// premisses. A third are unconstrained, a third have a conclusion that is a
/// polynomial combination of the premisses, and a third discharge an integer
/// multiple.
pub fn random_argument(rng: &mut StdRng) -> Argument {
    let all = ["x", "y", "z"];
    let vars = &all[..rng.random_range(1..=3)];
    let k = rng.random_range(0..=2);
    let premisses: Vec<Equation> = (0..k).map(|_| random_equation(rng, vars, 2)).collect();
    match rng.random_range(0..3) {
        0 => Argument::new(premisses, random_equation(rng, vars, 2)),
        1 => {
            let combination = premisses.iter().fold(Term::zero(), |acc, p| {
                Term::add(acc, Term::mul(random_term(rng, vars, 1), p.difference()))
            });
            Argument::new(premisses, Equation::new(combination, Term::zero()))
        }
        _ => {
            let t = random_equation(rng, vars, 1);
            let c = Term::int(rng.random_range(2..=3));
            let mut premisses = premisses;
            premisses.truncate(1);
            premisses.push(Equation::new(Term::mul(c, t.difference()), Term::zero()));
            Argument::new(premisses, t)
        }
    }
}
