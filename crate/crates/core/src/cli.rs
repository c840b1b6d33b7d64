//! The `boolelab` command line.
//!
//! Every subcommand builds a [`Report`]: a deterministic text rendering and a
//! JSON document (`"schema": "boolelab/1"`, see `schema/report.schema.json`).
//! Exit codes: 0 affirmative, 1 negative, 2 usage or format error, 3 cap
//! exceeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{self, AlgebraError, FinitePartialAlgebra, HornVerdict};
use crate::catalog;
use crate::classes::{self, ChiVerdict, ClassError, SemanticVerdict, DEFAULT_MAX_UNIVERSE};
use crate::derivation::{
    certify_consequence, check_trace, poly_to_json, verify_certificate, Certificate,
    CertificateVerdict, DerivationError, DerivationTrace, Mode, TraceVerdict,
};
use crate::horn::{
    self, parse_theory, Consequent, EmbedVerdict, HornError, HornSentence, DEFAULT_MAX_MODEL_SIZE,
};
use crate::polynomial::{
    boole_oracle, expand, interpretability, normalize, Interpretability, OracleVerdict,
    DEFAULT_MAX_VARS,
};
use crate::terms::{self, parse_equation, pretty, Argument, Equation};
use crate::CapExceeded;

pub const SCHEMA: &str = "boolelab/1";

/// Universe bound for semantic checks when neither the problem file nor the
/// command line gives one.
pub const DEFAULT_MAX_N: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "boolelab", version, about = "Boole's partial algebra of classes")]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of class-symbols for 0/1 vertex enumeration.
    #[arg(long, global = true, env = "BOOLELAB_MAX_VARS", default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Largest universe for the class algebras P_U.
    #[arg(long, global = true, env = "BOOLELAB_MAX_UNIVERSE", default_value_t = DEFAULT_MAX_UNIVERSE)]
    max_universe: usize,
    /// Largest carrier for total-model searches.
    #[arg(long, global = true, env = "BOOLELAB_MAX_MODEL_SIZE", default_value_t = DEFAULT_MAX_MODEL_SIZE)]
    max_model_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the multilinear normal form of a term.
    Normalize { term: String },
    /// Print the constituent coefficients of a term.
    Expand { term: String },
    /// Decide whether a term denotes a class, and where it fails to.
    Interpret { term: String },
    /// Run the consequence pipelines on a problem file.
    Check(CheckArgs),
    /// Check an embedding into a class of total algebras.
    Embed(EmbedArgs),
    /// Check every sentence of a theory file in a partial algebra.
    Holds { algebra: PathBuf, theory: PathBuf },
    /// Find the first total model of a theory with a given size.
    ModelSearch {
        theory: PathBuf,
        #[arg(long)]
        size: usize,
    },
    /// Replay one of the built-in counterexamples.
    Counterexample {
        #[arg(value_enum)]
        which: Example,
    },
    /// Both directions of the embedding criterion on the built-in examples.
    TheoremDemo,
}

#[derive(Args, Debug)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = CheckMode::All)]
    mode: CheckMode,
    /// Largest universe for the semantic check (overrides `max_n:`).
    #[arg(long)]
    max_n: Option<usize>,
    /// Derivation trace to check against the problem.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Certificate JSON to verify instead of constructing one.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Verify the characteristic-function embedding of P_U, |U| = n, into Z^U.
    #[arg(long, conflicts_with_all = ["algebra", "theory"])]
    boole: Option<usize>,
    /// Partial algebra to embed into a total model of `--theory`.
    #[arg(long, requires = "theory")]
    algebra: Option<PathBuf>,
    #[arg(long, requires = "algebra")]
    theory: Option<PathBuf>,
    /// Largest model size to search (defaults to the model-size cap).
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckMode {
    Oracle,
    Certificate,
    Semantic,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Example {
    Intro,
    Cx,
}

#[derive(Clone, Copy, Debug)]
struct Caps {
    max_vars: usize,
    max_universe: usize,
    max_model_size: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(CapExceeded),
}

impl From<CapExceeded> for CliError {
    fn from(e: CapExceeded) -> Self {
        CliError::Cap(e)
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::Cap(c) => CliError::Cap(c),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<HornError> for CliError {
    fn from(e: HornError) -> Self {
        match e {
            HornError::Cap(c) => CliError::Cap(c),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<DerivationError> for CliError {
    fn from(e: DerivationError) -> Self {
        match e {
            DerivationError::Cap(c) => CliError::Cap(c),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn in_file(path: &Path, e: impl Into<CliError>) -> CliError {
    match e.into() {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        cap => cap,
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// A ground argument read from a problem file:
///
/// ```text
/// vars: x y z
/// premiss: x - x*y = 0
/// premiss: y - y*z = 0
/// conclude: x - x*z = 0
/// mode: hailperin
/// max_n: 3
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub vars: Option<Vec<String>>,
    pub argument: Argument,
    pub mode: Mode,
    pub max_n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProblemError {
    pub line: usize,
    pub message: String,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let mut vars = None;
        let mut premisses = Vec::new();
        let mut conclusion: Option<Equation> = None;
        let mut mode = None;
        let mut max_n = None;
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last = line;
            let err = |message: String| ProblemError { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once(':')
                .ok_or_else(|| err("expected `key: value`".into()))?;
            let value = value.trim();
            let equation = || parse_equation(value).map_err(|e| err(e.to_string()));
            match key.trim() {
                "vars" => {
                    if vars.is_some() {
                        return Err(err("duplicate `vars:` line".into()));
                    }
                    vars = Some(value.split_whitespace().map(str::to_string).collect::<Vec<_>>());
                }
                "premiss" => premisses.push(equation()?),
                "conclude" => {
                    if conclusion.is_some() {
                        return Err(err("a problem has exactly one `conclude:` line".into()));
                    }
                    conclusion = Some(equation()?);
                }
                "mode" => {
                    if mode.is_some() {
                        return Err(err("duplicate `mode:` line".into()));
                    }
                    mode = Some(value.parse::<Mode>().map_err(err)?);
                }
                "max_n" => {
                    let n: usize = value
                        .parse()
                        .ok()
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| err(format!("max_n must be a positive integer, got `{value}`")))?;
                    max_n = Some(n);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let conclusion = conclusion.ok_or(ProblemError {
            line: last.max(1),
            message: "missing `conclude:` line".into(),
        })?;
        let argument = Argument::new(premisses, conclusion);
        if let Some(declared) = &vars {
            if let Some(v) = argument.variables().into_iter().find(|v| !declared.contains(v)) {
                return Err(ProblemError {
                    line: 1 + text.lines().position(|l| l.trim_start().starts_with("vars")).unwrap_or(0),
                    message: format!("variable `{v}` is used but not declared"),
                });
            }
        }
        Ok(ProblemFile {
            vars,
            argument,
            mode: mode.unwrap_or(Mode::Hailperin),
            max_n,
        })
    }
}

/// A rendered result: text for people, JSON for programs.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub affirmative: bool,
    pub text: String,
    pub result: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.affirmative {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self, elapsed_ms: f64) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "answer": if self.affirmative { "affirmative" } else { "negative" },
            "exit_code": self.exit_code(),
            "elapsed_ms": elapsed_ms,
            "result": self.result,
        })
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
            return code;
        }
    };
    let caps = Caps {
        max_vars: cli.max_vars,
        max_universe: cli.max_universe,
        max_model_size: cli.max_model_size,
    };
    let start = Instant::now();
    match execute(&cli.command, caps) {
        Ok(report) => {
            let out = if cli.json {
                let elapsed = start.elapsed().as_secs_f64() * 1000.0;
                let mut s = serde_json::to_string_pretty(&report.to_json(elapsed)).expect("serializable");
                s.push('\n');
                s
            } else {
                report.text.clone()
            };
            let _ = stdout.write_all(out.as_bytes());
            report.exit_code()
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(CliError::Cap(c)) => {
            let _ = writeln!(stderr, "error: {c}");
            3
        }
    }
}

fn execute(cmd: &Command, caps: Caps) -> Result<Report, CliError> {
    match cmd {
        Command::Normalize { term } => cmd_normalize(term),
        Command::Expand { term } => cmd_expand(term, caps),
        Command::Interpret { term } => cmd_interpret(term, caps),
        Command::Check(a) => cmd_check(a, caps),
        Command::Embed(a) => cmd_embed(a, caps),
        Command::Holds { algebra, theory } => cmd_holds(algebra, theory),
        Command::ModelSearch { theory, size } => cmd_model_search(theory, *size, caps),
        Command::Counterexample { which: Example::Intro } => cmd_intro(),
        Command::Counterexample { which: Example::Cx } => cmd_cx(caps),
        Command::TheoremDemo => cmd_theorem_demo(caps),
    }
}

fn parse_term(text: &str) -> Result<terms::Term, CliError> {
    terms::parse(text).map_err(|e| CliError::Usage(format!("`{text}`: {e}")))
}

fn check_vars(n: usize, caps: Caps) -> Result<(), CliError> {
    if n > caps.max_vars {
        return Err(CliError::Cap(CapExceeded {
            what: "variables",
            requested: n,
            cap: caps.max_vars,
        }));
    }
    Ok(())
}

fn cmd_normalize(text: &str) -> Result<Report, CliError> {
    let t = parse_term(text)?;
    let p = normalize(&t);
    Ok(Report {
        command: "normalize",
        affirmative: true,
        text: format!("{p}\n"),
        result: json!({
            "term": pretty(&t),
            "normal_form": p.to_string(),
            "polynomial": poly_to_json(&p),
        }),
    })
}

fn cmd_expand(text: &str, caps: Caps) -> Result<Report, CliError> {
    let t = parse_term(text)?;
    let vars: Vec<String> = t.variables().into_iter().collect();
    check_vars(vars.len(), caps)?;
    let e = crate::polynomial::expand_over(&normalize(&t), &vars);
    let mut out = format!("vars: {}\n", vars.join(" "));
    let mut rows = Vec::new();
    for (v, c) in e.iter() {
        let constituent = pretty(&v.constituent(&vars));
        let _ = writeln!(out, "{}  {c}  {constituent}", v.label());
        rows.push(json!({"vertex": v.label(), "coeff": json_int(c), "constituent": constituent}));
    }
    Ok(Report {
        command: "expand",
        affirmative: true,
        text: out,
        result: json!({"term": pretty(&t), "vars": vars, "coefficients": rows}),
    })
}

fn json_int(n: &num_bigint::BigInt) -> Value {
    serde_json::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

fn cmd_interpret(text: &str, caps: Caps) -> Result<Report, CliError> {
    let t = parse_term(text)?;
    let p = normalize(&t);
    check_vars(p.vars().len(), caps)?;
    let vars: Vec<String> = p.vars().iter().cloned().collect();
    let e = expand(&p);
    let (verdict, bad) = match interpretability(&p) {
        Interpretability::Interpretable => ("interpretable", Vec::new()),
        Interpretability::ConditionallyInterpretable(bad) => ("conditionally-interpretable", bad),
        Interpretability::Never => (
            "never",
            e.iter().map(|(v, _)| v).collect(),
        ),
    };
    let mut out = format!("{verdict}\n");
    let mut rows = Vec::new();
    for v in &bad {
        let c = e.coeff_at(v);
        let constituent = pretty(&v.constituent(&vars));
        let _ = writeln!(out, "bad constituent {}  {c}  {constituent}", v.label());
        rows.push(json!({"vertex": v.label(), "coeff": json_int(c), "constituent": constituent}));
    }
    Ok(Report {
        command: "interpret",
        affirmative: verdict == "interpretable",
        text: out,
        result: json!({
            "term": pretty(&t),
            "vars": vars,
            "verdict": verdict,
            "bad_constituents": rows,
        }),
    })
}

fn oracle_json(v: &OracleVerdict) -> Value {
    match v {
        OracleVerdict::Valid => json!({"status": "valid"}),
        OracleVerdict::Invalid(w) => {
            let mut m = Map::new();
            for (name, &b) in w.vars.iter().zip(&w.vertex.0) {
                m.insert(name.clone(), json!(b as u8));
            }
            json!({"status": "invalid", "witness": m, "witness_text": w.to_string()})
        }
    }
}

fn semantic_json(v: &SemanticVerdict) -> Value {
    match v {
        SemanticVerdict::Valid { max_n } => json!({"status": "valid", "max_n": max_n}),
        SemanticVerdict::Invalid { n, assignment } => {
            let mut m = Map::new();
            for (name, mask) in assignment {
                m.insert(name.clone(), json!(classes::class_label(*mask, *n)));
            }
            json!({
                "status": "invalid",
                "n": n,
                "assignment": m,
                "witness_text": v.render_assignment().unwrap_or_default(),
            })
        }
    }
}

fn semantic_text(v: &SemanticVerdict) -> String {
    match v {
        SemanticVerdict::Valid { max_n } => format!("Valid (|U| ≤ {max_n})"),
        SemanticVerdict::Invalid { n, .. } => {
            format!("Fails at n={n} with {}", v.render_assignment().unwrap_or_default())
        }
    }
}

fn skipped() -> Value {
    json!({"status": "skipped"})
}

fn trace_premisses_covered(trace: &DerivationTrace, arg: &Argument) -> bool {
    trace.premisses().iter().all(|p| arg.premisses.contains(p))
        && trace.conclusion() == Some(&arg.conclusion)
}

fn cmd_check(a: &CheckArgs, caps: Caps) -> Result<Report, CliError> {
    let text = read_file(&a.file)?;
    let problem = ProblemFile::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.file.display())))?;
    let arg = &problem.argument;
    let max_n = a.max_n.or(problem.max_n).unwrap_or(DEFAULT_MAX_N);
    let run = |m: CheckMode| a.mode == CheckMode::All || a.mode == m;

    let mut out = format!("argument: {arg}\n");
    let mut results = Map::new();
    let mut all_affirmative = true;
    let mut derivable = None::<&'static str>;

    let oracle = if run(CheckMode::Oracle) {
        let v = boole_oracle(arg, caps.max_vars)?;
        let _ = match &v {
            OracleVerdict::Valid => writeln!(out, "oracle:      Valid"),
            OracleVerdict::Invalid(w) => writeln!(out, "oracle:      Invalid at vertex {w}"),
        };
        results.insert("oracle".into(), oracle_json(&v));
        all_affirmative &= v.is_valid();
        if v.is_valid() {
            derivable = Some("the 0/1 vertex test accepts the argument");
        }
        Some(v)
    } else {
        let _ = writeln!(out, "oracle:      skipped");
        results.insert("oracle".into(), skipped());
        None
    };

    if run(CheckMode::Certificate) {
        let (cert, source) = match &a.certificate {
            Some(path) => {
                let raw = read_file(path)?;
                let v: Value = serde_json::from_str(&raw)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                (Some(Certificate::from_json(&v).map_err(|e| in_file(path, e))?), "supplied")
            }
            None => (certify_consequence(arg, caps.max_vars)?, "constructed"),
        };
        match cert {
            Some(cert) => match verify_certificate(arg, &cert).map_err(|e| match &a.certificate {
                Some(p) => in_file(p, e),
                None => e.into(),
            })? {
                CertificateVerdict::Verified => {
                    let _ = writeln!(out, "certificate: Verified ({source}: {cert})");
                    results.insert(
                        "certificate".into(),
                        json!({"status": "verified", "source": source, "certificate": cert.to_json()}),
                    );
                    derivable.get_or_insert("a consequence certificate verifies");
                }
                CertificateVerdict::Rejected(residual) => {
                    all_affirmative = false;
                    let _ = writeln!(out, "certificate: Rejected ({source}), residual {residual}");
                    results.insert(
                        "certificate".into(),
                        json!({
                            "status": "rejected",
                            "source": source,
                            "certificate": cert.to_json(),
                            "residual": poly_to_json(&residual),
                            "residual_text": residual.to_string(),
                        }),
                    );
                }
            },
            None => {
                all_affirmative = false;
                let _ = writeln!(out, "certificate: none (the argument fails the 0/1 vertex test)");
                results.insert("certificate".into(), json!({"status": "none"}));
            }
        }
    } else {
        let _ = writeln!(out, "certificate: skipped");
        results.insert("certificate".into(), skipped());
    }

    let semantic = if run(CheckMode::Semantic) {
        let v = classes::semantic_consequence(arg, max_n, caps.max_universe)?;
        let _ = writeln!(out, "semantic:    {}", semantic_text(&v));
        results.insert("semantic".into(), semantic_json(&v));
        all_affirmative &= v.is_valid();
        Some(v)
    } else {
        let _ = writeln!(out, "semantic:    skipped");
        results.insert("semantic".into(), skipped());
        None
    };

    match &a.trace {
        Some(path) => {
            let trace = DerivationTrace::parse(&read_file(path)?).map_err(|e| in_file(path, e))?;
            let verdict = check_trace(&trace, problem.mode).map_err(|e| in_file(path, e))?;
            let matches = trace_premisses_covered(&trace, arg);
            let label = match problem.mode {
                Mode::Hailperin => "hailperin",
                Mode::Sigma1 => "sigma1, unsound for classes",
            };
            let mut j = json!({"mode": problem.mode.to_string(), "concludes_problem": matches});
            match &verdict {
                TraceVerdict::Accepted => {
                    let _ = writeln!(out, "trace:       Accepted ({label})");
                    j["status"] = json!("accepted");
                    if matches {
                        derivable.get_or_insert(if problem.mode == Mode::Sigma1 {
                            "a sigma1 derivation trace is accepted"
                        } else {
                            "a derivation trace is accepted"
                        });
                    }
                }
                TraceVerdict::Rejected { step, reason } => {
                    let _ = writeln!(out, "trace:       Rejected at step {step} ({label}): {reason}");
                    j["status"] = json!("rejected");
                    j["step"] = json!(step);
                    j["reason"] = json!(reason);
                }
            }
            if !matches {
                let _ = writeln!(out, "             the trace does not derive this problem's conclusion from its premisses");
            }
            all_affirmative &= verdict.is_accepted() && matches;
            results.insert("trace".into(), j);
        }
        None => {
            results.insert("trace".into(), skipped());
        }
    }

    let divergence = match (&semantic, derivable) {
        (Some(s @ SemanticVerdict::Invalid { .. }), Some(why)) => Some(format!(
            "{why}, yet the argument fails in P_U: {}",
            semantic_text(s)
        )),
        (Some(SemanticVerdict::Valid { max_n }), _) if oracle.as_ref().is_some_and(|o| !o.is_valid()) => {
            Some(format!(
                "the 0/1 vertex test rejects the argument, yet no P_U with |U| ≤ {max_n} refutes it (its terms are undefined wherever the vertex test fails)"
            ))
        }
        _ => None,
    };
    if let Some(d) = &divergence {
        let _ = writeln!(out, "!! DIVERGENCE: {d}");
    }
    let mut result = json!({
        "argument": arg.to_string(),
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "max_n": max_n,
        "divergence": divergence,
    });
    result["verdicts"] = Value::Object(results);
    Ok(Report {
        command: "check",
        affirmative: all_affirmative,
        text: out,
        result,
    })
}

fn cmd_embed(a: &EmbedArgs, caps: Caps) -> Result<Report, CliError> {
    if let Some(n) = a.boole {
        let v = classes::verify_chi_embedding(n, caps.max_universe)?;
        let (text, result) = match &v {
            ChiVerdict::Yes { entries } => (
                format!("χ embeds P_U into Z^U for |U| = {n}: Yes ({entries} entries checked)\n"),
                json!({"kind": "boole", "n": n, "status": "yes", "entries": entries}),
            ),
            ChiVerdict::No(why) => (
                format!("χ embeds P_U into Z^U for |U| = {n}: No ({why})\n"),
                json!({"kind": "boole", "n": n, "status": "no", "reason": why}),
            ),
        };
        return Ok(Report {
            command: "embed",
            affirmative: v.is_yes(),
            text,
            result,
        });
    }
    let (Some(alg_path), Some(theory_path)) = (&a.algebra, &a.theory) else {
        return Err(CliError::Usage("embed needs --boole <n> or --algebra <file> --theory <file>".into()));
    };
    let p: FinitePartialAlgebra = read_file(alg_path)?.parse().map_err(|e: AlgebraError| in_file(alg_path, e))?;
    let sigma = parse_theory(&read_file(theory_path)?).map_err(|e| in_file(theory_path, e))?;
    let max_size = a.max_size.unwrap_or(caps.max_model_size);
    let v = horn::embeds_into_mod_bounded(&p, &sigma, max_size, caps.max_model_size)?;
    Ok(match v {
        EmbedVerdict::Witness { model, embedding } => {
            let map: Vec<String> = embedding
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{}↦{}", p.element_name(i), model.element_name(j)))
                .collect();
            Report {
                command: "embed",
                affirmative: true,
                text: format!(
                    "witness: total model of size {} with embedding {{{}}}\n{}",
                    model.size(),
                    map.join(", "),
                    model.to_text()
                ),
                result: json!({
                    "kind": "model",
                    "status": "witness",
                    "model": model.to_text(),
                    "embedding": embedding,
                }),
            }
        }
        EmbedVerdict::NoneUpTo(k) => Report {
            command: "embed",
            affirmative: false,
            text: format!("no total model of the theory with at most {k} elements receives the algebra\n"),
            result: json!({"kind": "model", "status": "none", "max_size": k}),
        },
    })
}

/// `(∀x,y) a ∧ b → c`.
pub fn render_sentence(s: &HornSentence) -> String {
    let mut out = String::new();
    if !s.vars().is_empty() {
        let _ = write!(out, "(∀{}) ", s.vars().join(","));
    }
    let ante: Vec<String> = s.antecedents().iter().map(ToString::to_string).collect();
    if !ante.is_empty() {
        let _ = write!(out, "{} → ", ante.join(" ∧ "));
    }
    match s.consequent() {
        Consequent::Equation(e) => {
            let _ = write!(out, "{e}");
        }
        Consequent::Falsum => out.push('⊥'),
    }
    out
}

fn holds_lines(
    alg: &FinitePartialAlgebra,
    sigma: &[HornSentence],
    out: &mut String,
) -> Result<(Vec<Value>, Vec<bool>), CliError> {
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for s in sigma {
        let v = algebra::holds(alg, s)?;
        let (status, witness) = match &v {
            HornVerdict::Holds => ("holds", Value::Null),
            HornVerdict::Fails(a) => ("fails", json!(a.render(alg))),
        };
        let _ = match &v {
            HornVerdict::Holds => writeln!(out, "{}: Holds", render_sentence(s)),
            HornVerdict::Fails(a) => writeln!(out, "{}: Fails {}", render_sentence(s), a.render(alg)),
        };
        rows.push(json!({"sentence": s.to_string(), "status": status, "witness": witness}));
        verdicts.push(v.holds());
    }
    Ok((rows, verdicts))
}

fn cmd_holds(alg_path: &Path, theory_path: &Path) -> Result<Report, CliError> {
    let alg: FinitePartialAlgebra = read_file(alg_path)?.parse().map_err(|e: AlgebraError| in_file(alg_path, e))?;
    let sigma = parse_theory(&read_file(theory_path)?).map_err(|e| in_file(theory_path, e))?;
    let mut out = String::new();
    let (rows, verdicts) = holds_lines(&alg, &sigma, &mut out).map_err(|e| in_file(theory_path, e))?;
    Ok(Report {
        command: "holds",
        affirmative: verdicts.iter().all(|&h| h),
        text: out,
        result: json!({"sentences": rows}),
    })
}

fn cmd_model_search(theory: &Path, size: usize, caps: Caps) -> Result<Report, CliError> {
    let sigma = parse_theory(&read_file(theory)?).map_err(|e| in_file(theory, e))?;
    let model = horn::search_total_model(&sigma, size, caps.max_model_size)?;
    let sig = horn::describe_signature(&horn::theory_signature(&sigma));
    Ok(match model {
        Some(m) => Report {
            command: "model-search",
            affirmative: true,
            text: format!("model of size {size} over {sig}:\n{}", m.to_text()),
            result: json!({"size": size, "status": "found", "model": m.to_text()}),
        },
        None => Report {
            command: "model-search",
            affirmative: false,
            text: format!("no model of size {size} over {sig}\n"),
            result: json!({"size": size, "status": "none", "model": Value::Null}),
        },
    })
}

fn cmd_intro() -> Result<Report, CliError> {
    let p = catalog::p_intro();
    let mut sigma = catalog::sigma_intro();
    sigma.push(HornSentence::parse("-> x = y").expect("valid sentence"));
    let mut out = format!("partial algebra P:\n{}\n", p.to_text());
    let (rows, verdicts) = holds_lines(&p, &sigma, &mut out)?;
    let reproduced = verdicts == [true, true, false];
    let _ = writeln!(
        out,
        "!! x = y follows from the two laws by total equational reasoning, yet fails in P"
    );
    Ok(Report {
        command: "counterexample",
        affirmative: reproduced,
        text: out,
        result: json!({"example": "intro", "algebra": p.to_text(), "sentences": rows}),
    })
}

fn cmd_cx(caps: Caps) -> Result<Report, CliError> {
    let trace = DerivationTrace::parse(catalog::CX_TRACE)?;
    let sigma1 = check_trace(&trace, Mode::Sigma1)?;
    let hailperin = check_trace(&trace, Mode::Hailperin)?;
    let arg = catalog::cx_argument();
    let max_n = DEFAULT_MAX_N.min(caps.max_universe);
    let semantic = classes::semantic_consequence(&arg, max_n, caps.max_universe)?;
    let mut out = String::from("derivation trace (idempotent law applied to the compound term 2x):\n");
    for line in catalog::CX_TRACE.lines() {
        let _ = writeln!(out, "  {line}");
    }
    let trace_json = |v: &TraceVerdict, mode: Mode| match v {
        TraceVerdict::Accepted => json!({"mode": mode.to_string(), "status": "accepted"}),
        TraceVerdict::Rejected { step, reason } => {
            json!({"mode": mode.to_string(), "status": "rejected", "step": step, "reason": reason})
        }
    };
    let trace_text = |v: &TraceVerdict| match v {
        TraceVerdict::Accepted => "Accepted".to_string(),
        TraceVerdict::Rejected { step, reason } => format!("Rejected at step {step}: {reason}"),
    };
    let _ = writeln!(out, "sigma1 mode (unsound for classes): {}", trace_text(&sigma1));
    let _ = writeln!(out, "hailperin mode: {}", trace_text(&hailperin));
    let _ = writeln!(out, "semantic check of ⊢ x = 0: {}", semantic_text(&semantic));
    let _ = writeln!(
        out,
        "!! DIVERGENCE: the sigma1 derivation concludes x = 0, yet x = 0 fails in P_U"
    );
    let reproduced = sigma1.is_accepted()
        && matches!(hailperin, TraceVerdict::Rejected { step: 1, .. })
        && !semantic.is_valid();
    Ok(Report {
        command: "counterexample",
        affirmative: reproduced,
        text: out,
        result: json!({
            "example": "cx",
            "trace": catalog::CX_TRACE,
            "conclusion": "x = 0",
            "traces": [trace_json(&sigma1, Mode::Sigma1), trace_json(&hailperin, Mode::Hailperin)],
            "semantic": semantic_json(&semantic),
        }),
    })
}

fn cmd_theorem_demo(caps: Caps) -> Result<Report, CliError> {
    let mut out = String::from("(⇐) the class algebras embed into total commutative rings via χ:\n");
    let mut chi_rows = Vec::new();
    let mut ok = true;
    for n in 1..=3.min(caps.max_universe) {
        let v = classes::verify_chi_embedding(n, caps.max_universe)?;
        let _ = match &v {
            ChiVerdict::Yes { entries } => writeln!(out, "  |U| = {n}: Yes ({entries} entries checked)"),
            ChiVerdict::No(why) => writeln!(out, "  |U| = {n}: No ({why})"),
        };
        ok &= v.is_yes();
        chi_rows.push(match v {
            ChiVerdict::Yes { entries } => json!({"n": n, "status": "yes", "entries": entries}),
            ChiVerdict::No(why) => json!({"n": n, "status": "no", "reason": why}),
        });
    }

    let p = catalog::p_intro();
    let sigma = catalog::sigma_intro();
    let k = caps.max_model_size;
    let _ = writeln!(out, "(⇒) the intro algebra P against Σ = {{x + y = x, x + y = y}}:");
    let embed = horn::embeds_into_mod_bounded(&p, &sigma, k, caps.max_model_size)?;
    let none = matches!(embed, EmbedVerdict::NoneUpTo(_));
    let _ = match &embed {
        EmbedVerdict::NoneUpTo(k) => writeln!(out, "  embedding into a total model of Σ with ≤ {k} elements: none"),
        EmbedVerdict::Witness { model, .. } => {
            writeln!(out, "  embedding into a total model of Σ: witness of size {}", model.size())
        }
    };
    let sentence = HornSentence::parse("-> x = y").expect("valid sentence");
    let sweep = horn::sweep_total_models(&sigma, &sentence, k, caps.max_model_size)?;
    let counts: Vec<String> = sweep.models.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "  total models of Σ by size 1..{k}: {}", counts.join(", "));
    let _ = writeln!(
        out,
        "  σ = {}: {} in every one of them",
        render_sentence(&sentence),
        if sweep.holds_everywhere() { "holds" } else { "fails" }
    );
    let in_p = algebra::holds(&p, &sentence)?;
    let _ = match &in_p {
        HornVerdict::Holds => writeln!(out, "  σ in P: Holds"),
        HornVerdict::Fails(a) => writeln!(out, "  σ in P: Fails {}", a.render(&p)),
    };
    let failure = none && sweep.holds_everywhere() && !in_p.holds();
    if failure {
        let _ = writeln!(
            out,
            "!! Principles failure: σ follows by total reasoning from Σ, yet fails in P"
        );
    }
    Ok(Report {
        command: "theorem-demo",
        affirmative: ok && failure,
        text: out,
        result: json!({
            "chi": chi_rows,
            "intro": {
                "embedding": match &embed {
                    EmbedVerdict::NoneUpTo(k) => json!({"status": "none", "max_size": k}),
                    EmbedVerdict::Witness { model, embedding } => json!({
                        "status": "witness", "model": model.to_text(), "embedding": embedding,
                    }),
                },
                "models_by_size": sweep.models,
                "sigma": sentence.to_string(),
                "holds_in_models": sweep.holds_everywhere(),
                "holds_in_p": match &in_p {
                    HornVerdict::Holds => json!({"status": "holds"}),
                    HornVerdict::Fails(a) => json!({"status": "fails", "witness": a.render(&p)}),
                },
                "principles_failure": failure,
            },
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["boolelab"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn normalize_command() {
        assert_eq!(run_str(&["normalize", "x*x - x"]), (0, "0\n".into(), String::new()));
        assert_eq!(run_str(&["normalize", "x + y - x*y"]).1, "x + y - x*y\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_str(&["normalize", "x +"]);
        assert_eq!(code, 2);
        assert!(err.contains("column"), "{err}");
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["check", "/nonexistent.prob"]).0, 2);
    }

    #[test]
    fn caps_exit_3() {
        assert_eq!(run_str(&["--max-vars", "1", "expand", "x + y"]).0, 3);
        assert_eq!(run_str(&["embed", "--boole", "6"]).0, 3);
    }

    #[test]
    fn interpret_command() {
        assert_eq!(run_str(&["interpret", "x*y"]).0, 0);
        let (code, out, _) = run_str(&["interpret", "x + y"]);
        assert_eq!(code, 1);
        assert_eq!(out, "conditionally-interpretable\nbad constituent 11  2  x*y\n");
        assert!(run_str(&["interpret", "2x + 2"]).1.starts_with("never\n"));
    }

    #[test]
    fn problem_file_parsing() {
        let p = ProblemFile::parse(
            "# Barbara\nvars: x y z\npremiss: x - x*y = 0\npremiss: y - y*z = 0\nconclude: x - x*z = 0\nmax_n: 2\n",
        )
        .unwrap();
        assert_eq!(p.argument, catalog::barbara());
        assert_eq!(p.max_n, Some(2));
        assert_eq!(p.mode, Mode::Hailperin);
        for (text, line) in [
            ("premiss: x = y", 1),
            ("conclude: x = \n", 1),
            ("conclude: x = y\nconclude: y = x", 2),
            ("vars: x\nconclude: x = y", 1),
            ("conclude: x = y\nmode: classical", 2),
            ("\nmax_n: 0\nconclude: x = x", 2),
            ("frob: 1", 1),
        ] {
            assert_eq!(ProblemFile::parse(text).unwrap_err().line, line, "{text}");
        }
    }

    #[test]
    fn sentence_rendering() {
        let s = HornSentence::parse("x + y = x & x + y = y -> x = y").unwrap();
        assert_eq!(render_sentence(&s), "(∀x,y) x + y = x ∧ x + y = y → x = y");
        assert_eq!(render_sentence(&HornSentence::parse("0 = 1 -> false").unwrap()), "0 = 1 → ⊥");
    }
}
