//! The `sapp` command line, runnable in-process for tests.
//!
//! Exit codes: 0 for Valid / true / all checks passed, 1 for Invalid /
//! false / some check failed, 2 for errors. Errors are reported on stderr as
//! a single JSON record and never come with a verdict.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::checks::{self, Suite};
use crate::decider::{
    DirectDecider, TranslationDecider, Verdict, DEFAULT_DIRECT_CAP, DEFAULT_TRANSLATION_CAP,
};
use crate::efgame::{self, ef_equivalent, gen_s_lines, pure_equality};
use crate::formula::{axiom_text, canonicalize, parse, print, AxiomName, Formula, Term};
use crate::geometry::{
    eval_finite, read_line_set, sample_fq, to_structure, write_line_set, FiniteStructure, Valuation,
};
use crate::translate::translate;

#[derive(Parser, Debug)]
#[command(
    name = "sapp",
    version,
    about = "Decide and explore the first-order theory of perpendicular lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Engine used by `decide`.
    #[arg(long, value_enum, default_value_t = Engine::Both, global = true)]
    engine: Engine,
    /// Quantifier cap for the selected engine(s) [default: 8 direct, 4 translation].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    /// Seed for sampled structures and random check corpora.
    #[arg(long, default_value_t = checks::DEFAULT_SEED, global = true)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Print the canonical form, translation and search statistics.
    #[arg(long, global = true)]
    trace: bool,
    /// Add wall-clock time to records. Output is then no longer reproducible.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a sentence is valid.
    Decide { formula: String },
    /// Print the pure-equality translation of a sentence.
    Translate { formula: String },
    /// Evaluate a formula in a finite structure file.
    Eval {
        formula: String,
        /// Line-set JSONL or abstract structure JSON.
        model: String,
        /// Assign a free variable to an element, e.g. `--let x=3`.
        #[arg(long = "let", value_name = "VAR=INDEX")]
        bindings: Vec<String>,
    },
    /// Play the k-round Ehrenfeucht–Fraïssé game between two structure files.
    Ef {
        a: String,
        b: String,
        #[arg(long)]
        k: usize,
    },
    /// Generate a structure: `s` (needs --k), `fq` (needs --n) or `eq` (needs --n).
    Gen {
        #[arg(value_enum)]
        structure: Generated,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Print an axiom instance.
    Axiom {
        name: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run a self-check suite, or all of them.
    Check {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Engine {
    Direct,
    Translation,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Records,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "lower")]
enum Generated {
    #[value(alias = "S")]
    S,
    #[value(alias = "FQ")]
    Fq,
    #[value(alias = "EQ")]
    Eq,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

fn fail(kind: &'static str, message: impl ToString) -> Failure {
    Failure {
        kind,
        message: message.to_string(),
    }
}

#[derive(Serialize)]
struct Record<'a> {
    command: &'a str,
    input_hash: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    engine: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

struct Ctx {
    cli_format: Format,
    timing: bool,
    started: Instant,
    command: &'static str,
    input_hash: String,
    out: String,
    warnings: String,
}

impl Ctx {
    fn records(&self) -> bool {
        self.cli_format == Format::Records
    }

    fn record(&mut self, verdict: Option<String>, engine: Option<&str>, output: Option<Value>) {
        let elapsed_ms = self
            .timing
            .then(|| self.started.elapsed().as_secs_f64() * 1000.0);
        let r = Record {
            command: self.command,
            input_hash: &self.input_hash,
            verdict,
            engine,
            output,
            elapsed_ms,
        };
        let line = serde_json::to_string(&r).expect("records serialize");
        self.out.push_str(&line);
        self.out.push('\n');
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.out.push_str(text.as_ref());
        self.out.push('\n');
    }
}

fn hash(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decide { .. } => "decide",
        Command::Translate { .. } => "translate",
        Command::Eval { .. } => "eval",
        Command::Ef { .. } => "ef",
        Command::Gen { .. } => "gen",
        Command::Axiom { .. } => "axiom",
        Command::Check { .. } => "check",
    }
}

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: error_record("cli", "", "usage", rendered.trim_end()),
                }
            };
        }
    };
    let mut ctx = Ctx {
        cli_format: cli.format,
        timing: cli.timing,
        started: Instant::now(),
        command: command_name(&cli.command),
        input_hash: String::new(),
        out: String::new(),
        warnings: String::new(),
    };
    match dispatch(&cli, &mut ctx) {
        Ok(code) => Outcome {
            code,
            stdout: ctx.out,
            stderr: ctx.warnings,
        },
        Err(f) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!(
                "{}{}",
                ctx.warnings,
                error_record(ctx.command, &ctx.input_hash, f.kind, &f.message)
            ),
        },
    }
}

fn error_record(command: &str, input_hash: &str, kind: &str, message: &str) -> String {
    let v = json!({
        "command": command,
        "input_hash": input_hash,
        "error": { "kind": kind, "message": message },
    });
    format!("{v}\n")
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<i32, Failure> {
    match &cli.command {
        Command::Decide { formula } => decide(cli, ctx, formula),
        Command::Translate { formula } => cmd_translate(cli, ctx, formula),
        Command::Eval {
            formula,
            model,
            bindings,
        } => eval(ctx, formula, model, bindings),
        Command::Ef { a, b, k } => ef(ctx, a, b, *k),
        Command::Gen { structure, k, n } => gen(cli, ctx, *structure, *k, *n),
        Command::Axiom { name, n } => cmd_axiom(ctx, name, *n),
        Command::Check { suite } => check(cli, ctx, suite),
    }
}

fn parse_sentence(text: &str) -> Result<Formula, Failure> {
    let f = parse(text).map_err(|e| fail("parse", e))?;
    canonicalize(&f).map_err(|e| fail("not-a-sentence", e))?;
    Ok(f)
}

fn cap_or(cli: &Cli, default: usize) -> usize {
    cli.cap.map_or(default, |c| c as usize)
}

fn decide(cli: &Cli, ctx: &mut Ctx, text: &str) -> Result<i32, Failure> {
    ctx.input_hash = hash(&[text.as_bytes()]);
    let f = parse_sentence(text)?;
    let direct = DirectDecider::new(cap_or(cli, DEFAULT_DIRECT_CAP));
    let translation = TranslationDecider::new(cap_or(cli, DEFAULT_TRANSLATION_CAP));
    let q = f.quantifier_count();

    let direct_result = match cli.engine {
        Engine::Translation => None,
        _ => Some(
            direct
                .decide_with_stats(&f)
                .map_err(|e| fail("decide", e))?,
        ),
    };
    let run_translation = match cli.engine {
        Engine::Direct => false,
        Engine::Translation => true,
        // Skip rather than fail when only the cross-check is out of reach.
        Engine::Both => q <= translation.quantifier_cap,
    };
    let translation_result = if run_translation {
        Some(translation.run(&f).map_err(|e| fail("decide", e))?)
    } else {
        None
    };

    let verdict = match (&direct_result, &translation_result) {
        (Some((d, _)), Some(t)) if *d != t.verdict => {
            return Err(fail(
                "engine-disagreement",
                format!("direct engine says {d}, translation says {}", t.verdict),
            ))
        }
        (Some((d, _)), _) => *d,
        (None, Some(t)) => t.verdict,
        (None, None) => unreachable!("some engine always runs"),
    };

    if ctx.records() {
        if let Some((d, _)) = &direct_result {
            ctx.record(Some(d.to_string()), Some("direct"), None);
        }
        if let Some(t) = &translation_result {
            ctx.record(Some(t.verdict.to_string()), Some("translation"), None);
        }
    } else {
        ctx.line(verdict.to_string());
        if let Some((d, _)) = &direct_result {
            ctx.line(format!("direct: {d}"));
        }
        match &translation_result {
            Some(t) => ctx.line(format!("translation: {}", t.verdict)),
            None if cli.engine == Engine::Both => ctx.line(format!(
                "translation: skipped ({q} quantifiers, cap {})",
                translation.quantifier_cap
            )),
            None => {}
        }
    }
    if cli.trace {
        let canonical = canonicalize(&f).map_err(|e| fail("not-a-sentence", e))?;
        let mut trace = format!("canonical: {}\n", print(&canonical));
        if let Some((_, s)) = &direct_result {
            let _ = writeln!(
                trace,
                "direct search: {} branches, {} memo entries",
                s.branches, s.memo_entries
            );
        }
        if let Some(t) = &translation_result {
            let _ = writeln!(
                trace,
                "translated ({} quantifiers): {}",
                t.translated.quantifier_count(),
                print(&t.translated)
            );
            let _ = writeln!(
                trace,
                "translation search: {} branches, {} memo entries",
                t.stats.branches, t.stats.memo_entries
            );
        }
        if ctx.records() {
            ctx.record(None, None, Some(Value::String(trace)));
        } else {
            ctx.out.push_str(&trace);
        }
    }
    Ok(match verdict {
        Verdict::Valid => 0,
        Verdict::Invalid => 1,
    })
}

fn cmd_translate(cli: &Cli, ctx: &mut Ctx, text: &str) -> Result<i32, Failure> {
    ctx.input_hash = hash(&[text.as_bytes()]);
    let f = parse_sentence(text)?;
    let cap = cap_or(cli, DEFAULT_TRANSLATION_CAP);
    if f.quantifier_count() > cap {
        return Err(fail(
            "quantifier-cap",
            format!(
                "{} quantifiers exceed the cap of {cap}",
                f.quantifier_count()
            ),
        ));
    }
    let canonical = canonicalize(&f).map_err(|e| fail("not-a-sentence", e))?;
    let out = print(&translate(&canonical).map_err(|e| fail("translate", e))?);
    if ctx.records() {
        ctx.record(None, None, Some(Value::String(out)));
    } else {
        ctx.line(out);
    }
    Ok(0)
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail("io", format!("{path}: {e}")))
}

/// Load either format; abstract structures are recognised by their
/// `"domain"` key.
fn load_structure(ctx: &mut Ctx, path: &str, text: &str) -> Result<FiniteStructure, Failure> {
    let is_abstract = serde_json::from_str::<Value>(text)
        .ok()
        .is_some_and(|v| v.get("domain").is_some());
    if is_abstract {
        let (m, fix) =
            efgame::read_structure(text).map_err(|e| fail("model", format!("{path}: {e}")))?;
        if !fix.added_symmetric.is_empty() {
            let _ = writeln!(
                ctx.warnings,
                "warning: {path}: relation was not symmetric; added {:?}",
                fix.added_symmetric
            );
        }
        if !fix.removed_reflexive.is_empty() {
            let _ = writeln!(
                ctx.warnings,
                "warning: {path}: dropped reflexive pairs at {:?}",
                fix.removed_reflexive
            );
        }
        Ok(m)
    } else {
        let lines = read_line_set(text).map_err(|e| fail("model", format!("{path}: {e}")))?;
        to_structure(&lines).map_err(|e| fail("model", format!("{path}: {e}")))
    }
}

fn eval(ctx: &mut Ctx, text: &str, path: &str, bindings: &[String]) -> Result<i32, Failure> {
    let model_text = read_file(path)?;
    let joined = bindings.join("\n");
    ctx.input_hash = hash(&[text.as_bytes(), model_text.as_bytes(), joined.as_bytes()]);
    let f = parse(text).map_err(|e| fail("parse", e))?;
    let m = load_structure(ctx, path, &model_text)?;
    let free = f.free_variables();
    let mut v = Valuation::new();
    for b in bindings {
        let (name, index) = b
            .split_once('=')
            .ok_or_else(|| fail("binding", format!("expected VAR=INDEX, got `{b}`")))?;
        let index: usize = index
            .trim()
            .parse()
            .map_err(|_| fail("binding", format!("`{index}` is not an element index")))?;
        let term = free
            .iter()
            .find(|t| t.as_var().and_then(|v| v.name()) == Some(name.trim()))
            .ok_or_else(|| fail("binding", format!("`{name}` is not a free variable")))?;
        v.insert(term.clone(), index);
    }
    let holds = eval_finite(&f, &m, &v).map_err(|e| fail("eval", describe_eval_error(e, &free)))?;
    if ctx.records() {
        ctx.record(Some(holds.to_string()), None, None);
    } else {
        ctx.line(holds.to_string());
    }
    Ok(if holds { 0 } else { 1 })
}

fn describe_eval_error(
    e: crate::geometry::EvalError,
    free: &std::collections::BTreeSet<Term>,
) -> String {
    let mut s = e.to_string();
    if !free.is_empty() {
        let names: Vec<String> = free.iter().map(ToString::to_string).collect();
        let _ = write!(s, " (free variables: {})", names.join(", "));
    }
    s
}

fn ef(ctx: &mut Ctx, a: &str, b: &str, k: usize) -> Result<i32, Failure> {
    let (ta, tb) = (read_file(a)?, read_file(b)?);
    ctx.input_hash = hash(&[ta.as_bytes(), tb.as_bytes(), &k.to_le_bytes()]);
    let ma = load_structure(ctx, a, &ta)?;
    let mb = load_structure(ctx, b, &tb)?;
    let eq = ef_equivalent(&ma, &mb, k).map_err(|e| fail("ef", e))?;
    if ctx.records() {
        ctx.record(Some(eq.to_string()), None, None);
    } else {
        ctx.line(eq.to_string());
    }
    Ok(if eq { 0 } else { 1 })
}

fn gen(
    cli: &Cli,
    ctx: &mut Ctx,
    what: Generated,
    k: Option<usize>,
    n: Option<usize>,
) -> Result<i32, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.filter(|&v| v >= 1)
            .ok_or_else(|| fail("usage", format!("this structure needs a positive --{flag}")))
    };
    let text = match what {
        Generated::S => write_line_set(&gen_s_lines(need(k, "k")?)),
        Generated::Fq => write_line_set(&sample_fq(cli.seed, need(n, "n")?)),
        Generated::Eq => format!(
            "{}\n",
            efgame::write_structure(&pure_equality(need(n, "n")?))
        ),
    };
    ctx.input_hash = hash(&[text.as_bytes()]);
    if ctx.records() {
        ctx.record(None, None, Some(Value::String(text)));
    } else {
        ctx.out.push_str(&text);
    }
    Ok(0)
}

fn cmd_axiom(ctx: &mut Ctx, name: &str, n: Option<usize>) -> Result<i32, Failure> {
    ctx.input_hash = hash(&[name.as_bytes(), &n.unwrap_or(0).to_le_bytes()]);
    let name: AxiomName = name.parse().map_err(|e| fail("axiom", e))?;
    let text = axiom_text(name, n).map_err(|e| fail("axiom", e))?;
    if ctx.records() {
        ctx.record(None, None, Some(Value::String(text)));
    } else {
        ctx.line(text);
    }
    Ok(0)
}

fn check(cli: &Cli, ctx: &mut Ctx, suite: &str) -> Result<i32, Failure> {
    ctx.input_hash = hash(&[suite.as_bytes(), &cli.seed.to_le_bytes()]);
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e| fail("usage", e))?]
    };
    let reports: Vec<_> = suites
        .iter()
        .map(|s| checks::run_suite(*s, cli.seed))
        .collect();
    let passed = reports.iter().all(|r| r.passed());
    if ctx.records() {
        for r in &reports {
            let output = serde_json::to_value(r).expect("reports serialize");
            ctx.record(
                Some(if r.passed() { "pass" } else { "fail" }.into()),
                None,
                Some(output),
            );
        }
    } else {
        ctx.out.push_str(&checks::render(&reports));
    }
    Ok(if passed { 0 } else { 1 })
}
