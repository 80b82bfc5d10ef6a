//! `kodaira`: classification, real-part tables, splitting decisions, period
//! domain checks and the self-test suite.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 inadmissible input,
//! 3 difference against a golden table, 4 failed property check.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kodaira_core::classify::{brute_force_involutions, classify, enumerate_cases, extension_of, splitting_witness, CaseLabel};
use kodaira_core::moduli::exchange_check;
use kodaira_core::reallocus::{full_table, published_table, real_part};
use kodaira_core::realstruct::{LinearCase, RealStructure};
use kodaira_core::selftest::{self, SelfTestConfig, Suite};

const EXIT_PARSE: u8 = 1;
const EXIT_INADMISSIBLE: u8 = 2;
const EXIT_GOLDEN: u8 = 3;
const EXIT_PROPERTY: u8 = 4;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "kodaira", version, about = "Real structures on primary Kodaira surfaces, in exact arithmetic")]
struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Report timing on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

/// A structure given by a parameter file or by a catalog representative.
#[derive(Args, Debug)]
struct Source {
    /// Parameter file with keys case, m, delta1, eps1, delta3, eps3, delta4, eps4, f1, f2, d1, gamma1.
    #[arg(long, conflicts_with = "case")]
    input: Option<PathBuf>,
    /// Catalog label such as "1A1ai'"; uses the built-in representative.
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    m: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a structure to its normal form and report its case.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Print the structure as a parameter file instead of classifying it.
        #[arg(long)]
        print_input: bool,
    },
    /// The real part of every catalog case for one m.
    Table {
        #[arg(long)]
        m: i64,
        /// Compare against the published table, or against a golden file.
        #[arg(long, num_args = 0..=1, default_missing_value = "embedded")]
        golden: Option<String>,
    },
    /// Decide whether the orbifold extension splits, for one structure or a whole catalog.
    Splitting(Source),
    /// Period domain checks: action, exchange automorphisms, reality loci.
    ModuliCheck {
        #[arg(long, default_value_t = 1)]
        m: i64,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long)]
        only: Option<String>,
        /// Break one check in every suite.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn positive_m(m: i64) -> Result<i64, Failure> {
    if m >= 1 {
        Ok(m)
    } else {
        Err(fail(EXIT_PARSE, format!("m must be a positive integer, got {m}")))
    }
}

fn seed() -> Result<u64, Failure> {
    match std::env::var("KODAIRA_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| fail(EXIT_PARSE, format!("KODAIRA_SEED must be a decimal integer, got {s:?}"))),
        Err(_) => Ok(SelfTestConfig::default().seed),
    }
}

fn load(src: &Source) -> Result<Option<RealStructure>, Failure> {
    if let Some(path) = &src.input {
        let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        let parsed = input::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        if let Some(m) = src.m {
            if m != parsed.params.m {
                return Err(fail(EXIT_PARSE, format!("--m {m} disagrees with m = {} in the file", parsed.params.m)));
            }
        }
        let rs = RealStructure::new(parsed.params, parsed.lifting)
            .map_err(|e| fail(EXIT_INADMISSIBLE, format!("inadmissible: {e}")))?;
        return Ok(Some(rs));
    }
    if let Some(name) = &src.case {
        let label: CaseLabel = name.parse().map_err(|e| fail(EXIT_PARSE, format!("{e}")))?;
        let m = positive_m(src.m.ok_or_else(|| fail(EXIT_PARSE, "--case needs --m"))?)?;
        if !label.occurs(m) {
            return Err(fail(EXIT_PARSE, format!("case {label} does not occur for m = {m}")));
        }
        return Ok(Some(label.representative(m)));
    }
    Ok(None)
}

fn cmd_classify(src: &Source) -> Result<Value, Failure> {
    let rs = load(src)?.ok_or_else(|| fail(EXIT_PARSE, "classify needs --input or --case"))?;
    let red = classify(&rs).map_err(|e| fail(EXIT_INADMISSIBLE, format!("inadmissible: {e}")))?;
    let witness = splitting_witness(&red.reduced).map_err(|e| fail(EXIT_INADMISSIBLE, e.to_string()))?;
    let real = real_part(&rs).map_err(|e| fail(EXIT_INADMISSIBLE, e.to_string()))?;
    let mut v = report::reduction(&red);
    let obj = v.as_object_mut().expect("object");
    obj.insert("m".into(), json!(rs.m()));
    obj.insert("splits".into(), json!(witness.is_some()));
    obj.insert("witness".into(), witness.as_ref().map(report::word).unwrap_or(Value::Null));
    obj.insert("real_part".into(), json!(real.summary()));
    Ok(v)
}

fn parse_golden(text: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut parts = s.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(t), None) => rows.push((l.to_string(), t.to_string())),
            _ => return Err(fail(EXIT_PARSE, format!("golden line {}: expected `LABEL SUMMARY`", i + 1))),
        }
    }
    Ok(rows)
}

fn summary_of(tori: usize) -> String {
    match tori {
        0 => "∅".into(),
        1 => "T".into(),
        n => format!("{n}T"),
    }
}

fn cmd_table(m: i64, golden: Option<&str>) -> Result<(Value, u8), Failure> {
    let m = positive_m(m)?;
    let table = full_table(m).map_err(|e| fail(EXIT_INADMISSIBLE, e.to_string()))?;
    let rows: Vec<Value> = table.iter().map(report::real_part).collect();
    let mut v = json!({ "m": m, "rows": rows });
    let Some(source) = golden else {
        return Ok((v, 0));
    };
    let expected: Vec<(String, String)> = if source == "embedded" {
        published_table(m).into_iter().map(|(l, t)| (l.to_string(), summary_of(t))).collect()
    } else {
        let text = std::fs::read_to_string(source).map_err(|e| fail(EXIT_PARSE, format!("{source}: {e}")))?;
        parse_golden(&text)?
    };
    let computed: Vec<(String, String)> = table
        .iter()
        .map(|r| (r.label.map(|l| l.to_string()).unwrap_or_default(), r.summary()))
        .collect();
    let mut diffs = Vec::new();
    for (l, want) in &expected {
        match computed.iter().find(|(c, _)| c == l) {
            None => diffs.push(format!("{l}: missing, golden {want}")),
            Some((_, got)) if got != want => diffs.push(format!("{l}: computed {got}, golden {want}")),
            _ => {}
        }
    }
    for (l, got) in &computed {
        if !expected.iter().any(|(e, _)| e == l) {
            diffs.push(format!("{l}: computed {got}, not in golden"));
        }
    }
    let code = if diffs.is_empty() { 0 } else { EXIT_GOLDEN };
    v.as_object_mut()
        .expect("object")
        .insert("golden".into(), json!({ "source": source, "diffs": diffs }));
    Ok((v, code))
}

fn splitting_row(label: Option<CaseLabel>, rs: &RealStructure) -> Result<Value, Failure> {
    let e = extension_of(rs);
    let w = splitting_witness(&e).map_err(|err| fail(EXIT_INADMISSIBLE, err.to_string()))?;
    let found = !brute_force_involutions(&e, 3).is_empty();
    Ok(json!({
        "label": label.map(|l| l.to_string()),
        "splits": w.is_some(),
        "witness": w.as_ref().map(report::word),
        "search_agrees": found == w.is_some(),
    }))
}

fn cmd_splitting(src: &Source) -> Result<(Value, u8), Failure> {
    let rows = match load(src)? {
        Some(rs) => {
            let label = classify(&rs).ok().map(|r| r.label);
            vec![splitting_row(label, &rs)?]
        }
        None => {
            let m = positive_m(src.m.ok_or_else(|| fail(EXIT_PARSE, "splitting needs --input, --case or --m"))?)?;
            let entries = enumerate_cases(m).map_err(|e| fail(EXIT_INADMISSIBLE, e.to_string()))?;
            entries
                .iter()
                .map(|e| splitting_row(Some(e.label), &e.structure))
                .collect::<Result<_, _>>()?
        }
    };
    let ok = rows.iter().all(|r| r["search_agrees"] == json!(true));
    Ok((json!({ "rows": rows }), if ok { 0 } else { EXIT_PROPERTY }))
}

fn suite_json(r: &selftest::SuiteReport) -> Value {
    json!({
        "suite": r.suite.name(),
        "checks": r.checks,
        "failures": r.failures,
        "passed": r.passed(),
    })
}

fn cmd_moduli(m: i64) -> Result<(Value, u8), Failure> {
    let m = positive_m(m)?;
    let mut exchange = serde_json::Map::new();
    let mut ok = true;
    for case in [LinearCase::A, LinearCase::B] {
        for f2_zero in [true, false] {
            let pass = exchange_check(case, f2_zero, m);
            ok &= pass;
            exchange.insert(format!("{case} f2{}", if f2_zero { "=0" } else { "!=0" }), json!(pass));
        }
    }
    let cfg = SelfTestConfig {
        seed: seed()?,
        only: Some(Suite::Moduli),
        corrupt: false,
    };
    let suite = &selftest::run(&cfg)[0];
    ok &= suite.passed();
    Ok((
        json!({ "m": m, "exchange": exchange, "properties": suite_json(suite) }),
        if ok { 0 } else { EXIT_PROPERTY },
    ))
}

fn cmd_selftest(only: Option<&str>, corrupt: bool) -> Result<(Value, u8), Failure> {
    let only = only
        .map(|s| s.parse::<Suite>().map_err(|e| fail(EXIT_PARSE, e)))
        .transpose()?;
    let cfg = SelfTestConfig {
        seed: seed()?,
        only,
        corrupt,
    };
    let reports = selftest::run(&cfg);
    let ok = reports.iter().all(|r| r.passed());
    let checks: usize = reports.iter().map(|r| r.checks).sum();
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    Ok((
        json!({
            "seed": cfg.seed,
            "suites": reports.iter().map(suite_json).collect::<Vec<_>>(),
            "checks": checks,
            "failures": failures,
            "passed": ok,
        }),
        if ok { 0 } else { EXIT_PROPERTY },
    ))
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    match &cli.command {
        Command::Classify { source, print_input: false } => cmd_classify(source).map(|v| (v, 0)),
        Command::Classify { source, print_input: true } => {
            let rs = load(source)?.ok_or_else(|| fail(EXIT_PARSE, "classify needs --input or --case"))?;
            Ok((Value::String(input::render(&rs.params, &rs.lifting)), 0))
        }
        Command::Table { m, golden } => cmd_table(*m, golden.as_deref()),
        Command::Splitting(src) => cmd_splitting(src),
        Command::ModuliCheck { m } => cmd_moduli(*m),
        Command::Selftest { only, corrupt } => cmd_selftest(only.as_deref(), *corrupt),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = std::time::Instant::now();
    let outcome = run(&cli);
    if cli.verbose > 0 {
        eprintln!("kodaira: {:?} finished in {:.3?}", cli.command, start.elapsed());
    }
    match outcome {
        Ok((v, code)) => {
            let text = match cli.format {
                _ if v.is_string() => v.as_str().unwrap_or_default().to_string(),
                Format::Json => report::to_json(&v) + "\n",
                Format::Human => report::to_human(&v),
            };
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
