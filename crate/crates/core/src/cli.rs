//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a gating law or table check failed, 2 bad input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::braid::{parse_word, BraidWord};
use crate::hidden::{default_probe_floor, laurent_json, poly_json, HiddenPolynomial, DEFAULT_VERIFY_EXTRA};
use crate::laws::{self, FuzzSpec};
use crate::par;
use crate::ring::{binom_poly, rat, LaurentA, PolyT};
use crate::skein::{Engine, EvalConfig, LeafConvention, Strategy};
use crate::tree::replay_tree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hidden-homfly", version, about = "Exact transverse HOMFLYPT invariants of closed braids")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Forced)]
    pub convention: ConventionArg,
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Staircase)]
    pub strategy: StrategyArg,
    /// Worker threads for batch work; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Forced,
    Paper,
}

impl From<ConventionArg> for LeafConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Forced => LeafConvention::Forced,
            ConventionArg::Paper => LeafConvention::Paper,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Staircase,
    Negfirst,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Staircase => Strategy::StaircaseFirst,
            StrategyArg::Negfirst => Strategy::NegativeElimFirst,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeFormat {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate F, the coefficient table and Q for one word.
    Eval {
        /// Space-separated signed generator indices, e.g. "1 -2 1".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        strands: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        tmin: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 6)]
        tmax: i64,
        /// Lowest T probed when locating T0.
        #[arg(long, allow_hyphen_values = true)]
        probe_floor: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_VERIFY_EXTRA)]
        verify_extra: usize,
    },
    /// Q for the two-strand family sigma_1^k, checked against closed forms.
    Table {
        #[arg(long, default_value = "two-strand")]
        family: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = -6)]
        kmin: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 7)]
        kmax: i64,
    },
    /// Write the computation tree of a word.
    Tree {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        strands: usize,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run law suites over a seeded random corpus.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 6)]
        max_strands: usize,
        #[arg(long, default_value_t = 12)]
        max_length: usize,
        /// Directory for one JSON report per law.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a corpus file, one JSON line per entry.
    Corpus {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    }
}

fn config(cli: &Cli) -> EvalConfig {
    EvalConfig::default().with_convention(cli.convention.into()).with_strategy(cli.strategy.into())
}

/// Runs a parsed command, writing results to `out`. `Err` is an input error.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<i32, String> {
    let engine = Engine::new();
    let cfg = config(cli);
    let mut buf: Vec<u8> = Vec::new();
    let code = par::with_threads(cli.threads, || dispatch(cli, &engine, &cfg, &mut buf))?;
    out.write_all(&buf).map_err(io_err)?;
    Ok(code)
}

fn dispatch(cli: &Cli, engine: &Engine, cfg: &EvalConfig, out: &mut Vec<u8>) -> Result<i32, String> {
    match &cli.command {
        Command::Eval { word, strands, tmin, tmax, probe_floor, verify_extra } => {
            let w = parse_word(word, *strands).map_err(|e| e.to_string())?;
            cmd_eval(engine, cfg, cli.emit, &w, (*tmin, *tmax), *probe_floor, *verify_extra, out)
        }
        Command::Table { family, kmin, kmax } => {
            if family != "two-strand" {
                return Err(format!("unknown family {family:?}"));
            }
            cmd_table(engine, cfg, cli.emit, *kmin, *kmax, out)
        }
        Command::Tree { word, strands, format, out: path } => {
            let w = parse_word(word, *strands).map_err(|e| e.to_string())?;
            cmd_tree(engine, cfg, &w, *format, path.as_deref(), out)
        }
        Command::Verify { suite, seed, cases, max_strands, max_length, out: dir } => {
            let spec = FuzzSpec {
                seed: *seed,
                case_count: *cases,
                max_strands: *max_strands,
                max_length: *max_length,
                ..FuzzSpec::default()
            };
            cmd_verify(engine, cfg, cli.emit, suite, &spec, dir.as_deref(), out)
        }
        Command::Corpus { path, out: dest } => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let lines = cmd_corpus(engine, cfg, &text);
            write_or_print(dest.as_deref(), &lines, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn io_err(e: std::io::Error) -> String {
    e.to_string()
}

fn write_or_print<W: Write>(dest: Option<&Path>, text: &str, out: &mut W) -> Result<(), String> {
    match dest {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval<W: Write>(
    engine: &Engine,
    cfg: &EvalConfig,
    emit: Emit,
    w: &BraidWord,
    (tmin, tmax): (i64, i64),
    probe_floor: Option<i64>,
    verify_extra: usize,
    out: &mut W,
) -> Result<i32, String> {
    let started = Instant::now();
    let (f, _) = engine.eval_f(w, cfg);
    let table = engine.c_table(w, tmin, tmax, cfg).map_err(|e| e.to_string())?;
    let floor = probe_floor.unwrap_or_else(|| default_probe_floor(w));
    let q = engine.recover_q_with_floor(w, cfg, verify_extra, floor).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let stats = engine.f_stats();
    eprintln!(
        "time {:.3} ms, memo entries {}, hits {}, misses {}",
        elapsed.as_secs_f64() * 1e3,
        stats.entries,
        stats.hits,
        stats.misses
    );
    match emit {
        Emit::Json => {
            let c: Vec<Value> = (tmin..=tmax).map(|t| json!([t, laurent_json(table.get(t).expect("in range"))])).collect();
            let doc = json!({
                "word": w.letters(),
                "strands": w.strands(),
                "F": {"numerator": f.num().to_string(), "dpow": f.dpow()},
                "c": c,
                "Q": q.to_json(),
                "Q_text": q.poly.to_string(),
                "degree": q.degree(),
                "self_linking": w.self_linking(),
                "strategy": cfg.strategy.name(),
            });
            writeln!(out, "{doc}").map_err(io_err)?;
        }
        Emit::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "word          {w}");
            let _ = writeln!(s, "convention    {}", cfg.convention.name());
            let _ = writeln!(s, "F numerator   {}", f.num());
            let _ = writeln!(s, "F dpow        {}", f.dpow());
            for t in tmin..=tmax {
                let _ = writeln!(s, "c[{t}]{:pad$}{}", "", table.get(t).expect("in range"), pad = 10usize.saturating_sub(format!("c[{t}]").len()) + 4);
            }
            let _ = writeln!(s, "Q             {}", q.poly);
            let _ = writeln!(s, "components    {}", q.components);
            let _ = writeln!(s, "deg_T Q       {}", q.degree().map_or("-".into(), |d| d.to_string()));
            let _ = writeln!(s, "T0            {}", q.empirical_t0.expect("reported"));
            let _ = writeln!(s, "self-linking  {}", w.self_linking());
            out.write_all(s.as_bytes()).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

/// Closed form of `Q(sigma_1^k)` on two strands.
pub fn two_strand_closed_form(k: i64, convention: LeafConvention) -> PolyT {
    if k.rem_euclid(2) == 1 {
        let m = (k - 1) / 2;
        let c = LaurentA::monomial(rat(m), 2 * m as i32) + LaurentA::monomial(rat(m + 1), 2 * m as i32 - 1);
        PolyT::constant(c)
    } else {
        let m = k / 2;
        let shift = match convention {
            LeafConvention::Paper => -m,
            LeafConvention::Forced => -m + 1,
        };
        let scale = &LaurentA::alpha(2 * m as i32 - 1) * &(LaurentA::one() + LaurentA::alpha(-1));
        binom_poly(shift, 1).scale_laurent(&scale)
    }
}

/// `Q_n = a^2 Q_{n-2}(T-1) + a (Q_{n-1}(T) - Q_{n-1}(T-1))`.
pub fn two_strand_recurrence(q_prev2: &PolyT, q_prev: &PolyT) -> PolyT {
    let a = q_prev2.shift(-1).scale_laurent(&LaurentA::alpha(2));
    let b = (q_prev - &q_prev.shift(-1)).scale_laurent(&LaurentA::alpha(1));
    &a + &b
}

fn two_strand(k: i64) -> BraidWord {
    let letter = if k >= 0 { 1 } else { -1 };
    BraidWord::new(2, vec![letter; k.unsigned_abs() as usize]).expect("valid letters")
}

fn cmd_table<W: Write>(engine: &Engine, cfg: &EvalConfig, emit: Emit, kmin: i64, kmax: i64, out: &mut W) -> Result<i32, String> {
    if kmin > kmax {
        return Err(format!("empty range {kmin}..{kmax}"));
    }
    let ks: Vec<i64> = (kmin..=kmax).collect();
    let qs = par::map_indexed(&ks, |_, &k| engine.recover_q(&two_strand(k), cfg, DEFAULT_VERIFY_EXTRA));
    let mut qs_ok: Vec<PolyT> = Vec::with_capacity(qs.len());
    for q in qs {
        qs_ok.push(q.map_err(|e| e.to_string())?.poly);
    }
    let mut bad = false;
    let mut rows = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let q = &qs_ok[i];
        let closed = *q == two_strand_closed_form(k, cfg.convention);
        let recurrence = (i >= 2).then(|| *q == two_strand_recurrence(&qs_ok[i - 2], &qs_ok[i - 1]));
        bad |= !closed || recurrence == Some(false);
        rows.push((k, q, closed, recurrence));
    }
    let mut s = String::new();
    match emit {
        Emit::Json => {
            for (k, q, closed, rec) in rows {
                let line = json!({"k": k, "Q": poly_json(q), "Q_text": q.to_string(), "closed_form": closed, "recurrence": rec});
                let _ = writeln!(s, "{line}");
            }
        }
        Emit::Text => {
            let _ = writeln!(s, "two-strand family, convention {}", cfg.convention.name());
            let _ = writeln!(s, "{:>4}  {:<6} {:<10} Q", "k", "closed", "recurrence");
            for (k, q, closed, rec) in rows {
                let mark = |b: bool| if b { "ok" } else { "MISMATCH" };
                let _ = writeln!(s, "{k:>4}  {:<6} {:<10} {q}", mark(closed), rec.map_or("-", mark));
            }
        }
    }
    out.write_all(s.as_bytes()).map_err(io_err)?;
    Ok(if bad { EXIT_LAW_FAILURE } else { EXIT_OK })
}

fn cmd_tree<W: Write>(
    engine: &Engine,
    cfg: &EvalConfig,
    w: &BraidWord,
    format: TreeFormat,
    dest: Option<&Path>,
    out: &mut W,
) -> Result<i32, String> {
    let (f, tree) = engine.eval_f(w, &cfg.recording());
    let tree = tree.expect("recording requested");
    let replayed = replay_tree(&tree, cfg.convention).map_err(|e| e.to_string())?;
    if replayed != f {
        return Err("replayed tree disagrees with direct evaluation".into());
    }
    let text = match format {
        TreeFormat::Json => tree.to_json() + "\n",
        TreeFormat::Dot => tree.to_dot(),
    };
    write_or_print(dest, &text, out)?;
    Ok(EXIT_OK)
}

fn cmd_verify<W: Write>(
    engine: &Engine,
    cfg: &EvalConfig,
    emit: Emit,
    suite: &str,
    spec: &FuzzSpec,
    dir: Option<&Path>,
    out: &mut W,
) -> Result<i32, String> {
    let reports = laws::run_suite(engine, suite, spec, cfg)
        .ok_or_else(|| format!("unknown suite {suite:?}; expected all or one of {}", laws::SUITES.join(", ")))?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        for r in &reports {
            let path = dir.join(format!("{}.json", r.law));
            fs::write(&path, r.to_json() + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    let mut s = String::new();
    match emit {
        Emit::Json => {
            for r in &reports {
                let _ = writeln!(s, "{}", serde_json::to_string(r).expect("reports serialize"));
            }
        }
        Emit::Text => {
            let _ = writeln!(s, "{}", laws::table_header());
            for r in &reports {
                let _ = writeln!(s, "{}", r.table_row());
                for f in r.failures.iter().take(5) {
                    let _ = writeln!(s, "    case {} seed {} {:?} on {}: {}", f.case, f.seed, f.word, f.strands, f.detail);
                }
            }
        }
    }
    out.write_all(s.as_bytes()).map_err(io_err)?;
    let failed = reports.iter().any(|r| !r.passed());
    Ok(if failed { EXIT_LAW_FAILURE } else { EXIT_OK })
}

/// One parsed corpus line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub word: BraidWord,
    pub expected: Option<String>,
}

/// `name ; strands ; letters ; [expected-Q]`.
pub fn parse_corpus_line(line: &str) -> Result<CorpusEntry, String> {
    let fields: Vec<&str> = line.split(';').map(str::trim).collect();
    if fields.len() < 3 || fields.len() > 4 {
        return Err(format!("expected 3 or 4 ';'-separated fields, found {}", fields.len()));
    }
    let strands = fields[1].parse::<usize>().map_err(|_| format!("bad strand count {:?}", fields[1]))?;
    let word = parse_word(fields[2], strands).map_err(|e| e.to_string())?;
    let expected = fields.get(3).filter(|e| !e.is_empty()).map(|e| e.to_string());
    Ok(CorpusEntry { name: fields[0].to_string(), word, expected })
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn corpus_result(engine: &Engine, cfg: &EvalConfig, lineno: usize, line: &str) -> Value {
    let entry = match parse_corpus_line(line) {
        Ok(e) => e,
        Err(msg) => return json!({"line": lineno, "error": msg}),
    };
    let q: Result<HiddenPolynomial, _> = engine.recover_q(&entry.word, cfg, DEFAULT_VERIFY_EXTRA);
    match q {
        Err(e) => json!({"line": lineno, "name": entry.name, "error": e.to_string()}),
        Ok(q) => {
            let rendered = q.poly.to_string();
            let matches = entry.expected.as_ref().map(|e| squash(e) == squash(&rendered));
            json!({
                "line": lineno,
                "name": entry.name,
                "strands": entry.word.strands(),
                "word": entry.word.letters(),
                "Q": q.to_json(),
                "Q_text": rendered,
                "expected": entry.expected,
                "matches_expected": matches,
            })
        }
    }
}

/// JSON lines for every non-comment line of a corpus, in input order.
pub fn cmd_corpus(engine: &Engine, cfg: &EvalConfig, text: &str) -> String {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let results = par::map_indexed(&lines, |_, (n, l)| corpus_result(engine, cfg, *n, l));
    let mut s = String::new();
    for r in results {
        let _ = writeln!(s, "{r}");
    }
    s
}
