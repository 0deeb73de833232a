use std::path::PathBuf;
use std::process::ExitCode;

use brcalc::corpus::{builtin_corpus, load_corpus, symmetry_pairs, CorpusError, Germ};
use brcalc::invariants::{
    full_report, report_with, GermPair, HypersurfaceData, InvariantError, ReportOptions, Value,
    DEFAULT_DRAWS, DEFAULT_SEED,
};
use brcalc::oracle::DEFAULT_CAP;
use brcalc::report::ReportDocument;
use brcalc::verify::{
    linear_test_forms, replay_records, report_value, symmetry_check, verify_germ, Check,
    OracleCheck, OracleSummary, VerifyOptions,
};
use brcalc::{parse_polynomial, parse_vars, ParseError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "brcalc",
    version,
    about = "Bruce-Roberts, Milnor and Tjurina numbers of hypersurface germs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All invariants of one pair (X = {phi = 0}, f).
    Report {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "cli")]
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Assert every identity on a corpus and replay colengths through the oracle.
    Verify {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Reports for every pair of a corpus; fails on expected-value mismatches.
    Corpus {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Tjurina number against dim dp(Θ_X)/dp(Θ_X^T) for linear forms p.
    TauRoutes {
        #[arg(long)]
        vars: String,
        /// Equation of the hypersurface.
        #[arg(long)]
        phi: String,
        /// Linear form; repeatable. Defaults to coordinates and sums.
        #[arg(long = "p")]
        ps: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Replay every colength of a report through the jet oracle.
    OracleCheck {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Comma-separated variable names.
    #[arg(long)]
    vars: String,
    /// Equation of the hypersurface, e.g. "x^3+y^2".
    #[arg(long)]
    phi: String,
    /// Function on it.
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct CorpusArgs {
    /// `builtin` or a path to a JSON corpus file.
    #[arg(long, default_value = "builtin")]
    corpus: String,
    /// Worker threads; 0 means one per core.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Clone, Copy)]
struct Common {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    draws: usize,
    /// Degree cap of the jet oracle.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include per-route timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn opts(&self) -> ReportOptions {
        ReportOptions {
            seed: self.seed,
            draws: self.draws,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means an assertion failed.
fn run(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Report { pair, name, common } => {
            let g = parse_pair(&pair)?;
            let r = full_report(&g, common.opts());
            let oracle = OracleSummary::of(&replay_records(&r.records, common.cap));
            let mut doc = ReportDocument::new(&name, &g, &r, common.opts()).with_oracle(oracle);
            if common.timings {
                doc = doc.with_timings(&r);
            }
            match common.format {
                Format::Json => println!("{}", doc.to_json()),
                Format::Text => print!("{}", doc.to_text()),
            }
            Ok(true)
        }
        Command::Verify { corpus, common } => cmd_verify(&corpus, &common),
        Command::Corpus { corpus, common } => cmd_corpus(&corpus, &common),
        Command::TauRoutes {
            vars,
            phi,
            ps,
            common,
        } => cmd_tau_routes(&vars, &phi, &ps, &common),
        Command::OracleCheck { pair, common } => {
            let g = parse_pair(&pair)?;
            let r = full_report(&g, common.opts());
            let checks = replay_records(&r.records, common.cap);
            let ok = checks.iter().all(OracleCheck::passed);
            match common.format {
                Format::Json => {
                    let rows: Vec<_> = checks.iter().map(oracle_json).collect();
                    let out = json!({ "checks": rows, "passed": ok });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
                Format::Text => {
                    for c in &checks {
                        let (oracle, cert) = match &c.oracle {
                            Ok(j) => (j.colength.to_string(), j.certificate.degree.to_string()),
                            Err(e) => (e.to_string(), "-".into()),
                        };
                        println!(
                            "{}  {:<16} rank {}  engine {:>4}  oracle {:>4}  certificate {}",
                            pass(c.passed()),
                            c.label,
                            c.rank,
                            c.engine,
                            oracle,
                            cert
                        );
                    }
                }
            }
            Ok(ok)
        }
    }
}

fn parse_pair(a: &PairArgs) -> Result<GermPair, CliError> {
    let vars = parse_vars(&a.vars)?;
    let phi = parse_polynomial(&a.phi, &vars)?;
    let f = parse_polynomial(&a.f, &vars)?;
    Ok(GermPair::new(vars, phi, f)?)
}

fn load(a: &CorpusArgs) -> Result<(Vec<Germ>, bool), CliError> {
    if a.corpus == "builtin" {
        Ok((builtin_corpus(), true))
    } else {
        Ok((load_corpus(&PathBuf::from(&a.corpus))?, false))
    }
}

/// Maps `work` over `items` on `jobs` threads, keeping input order.
fn parallel<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    work: impl Fn(&T) -> R + Sync + Send,
) -> Result<Vec<R>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| items.par_iter().map(work).collect()))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn oracle_json(c: &OracleCheck) -> serde_json::Value {
    let (oracle, cert) = match &c.oracle {
        Ok(j) => (json!(j.colength), json!(j.certificate.degree)),
        Err(e) => (json!(e.to_string()), serde_json::Value::Null),
    };
    json!({
        "label": c.label,
        "rank": c.rank,
        "engine": c.engine,
        "oracle": oracle,
        "certificate": cert,
        "replayed": c.replayed,
        "passed": c.passed(),
    })
}

fn cmd_verify(a: &CorpusArgs, common: &Common) -> Result<bool, CliError> {
    let (germs, builtin) = load(a)?;
    let opts = VerifyOptions {
        report: common.opts(),
        oracle_cap: Some(common.cap),
    };
    let results = parallel(&germs, a.jobs, |g| verify_germ(g, &opts))?;
    let mut symmetry = Vec::new();
    if builtin {
        for (vars, f, phi) in symmetry_pairs() {
            let (check, records) = symmetry_check(&vars, &f, &phi, common.opts())?;
            symmetry.push((check, replay_records(&records, common.cap)));
        }
    }
    let mut all_ok = true;
    let mut germ_rows = Vec::new();
    for res in results {
        let v = res?;
        let summary = OracleSummary::of(&v.oracle);
        let ok = v.passed();
        all_ok &= ok;
        match common.format {
            Format::Json => germ_rows.push(json!({
                "name": v.name,
                "passed": ok,
                "checks": v.checks,
                "oracle": summary,
            })),
            Format::Text => {
                for c in &v.checks {
                    print_check(&v.name, c);
                }
                println!(
                    "{}  {:<16} oracle {}/{} agree, {} certificates replayed",
                    pass(summary.all_passed()),
                    v.name,
                    summary.agreed,
                    summary.checked,
                    summary.certificates_replayed
                );
            }
        }
    }
    let mut sym_rows = Vec::new();
    for (c, oracle) in &symmetry {
        let summary = OracleSummary::of(oracle);
        all_ok &= c.passed && summary.all_passed();
        match common.format {
            Format::Json => sym_rows.push(json!({ "check": c, "oracle": summary })),
            Format::Text => print_check("symmetry", c),
        }
    }
    match common.format {
        Format::Json => {
            let out = json!({ "germs": germ_rows, "symmetry": sym_rows, "passed": all_ok });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Text => println!(
            "{}",
            if all_ok {
                "all checks passed"
            } else {
                "some checks failed"
            }
        ),
    }
    Ok(all_ok)
}

fn print_check(germ: &str, c: &Check) {
    let target =
        c.f.as_deref()
            .map(|f| format!(" f={f}"))
            .unwrap_or_default();
    println!(
        "{}  {:<16} {}{}: {}",
        pass(c.passed),
        germ,
        c.name,
        target,
        c.detail
    );
}

fn cmd_corpus(a: &CorpusArgs, common: &Common) -> Result<bool, CliError> {
    let (germs, _) = load(a)?;
    let opts = common.opts();
    let results = parallel(&germs, a.jobs, |g| -> Result<_, InvariantError> {
        let data = HypersurfaceData::new(&g.phi, opts)?;
        Ok(g.pairs()
            .into_iter()
            .map(|(src, pair)| {
                let r = report_with(&data, &pair);
                let mut failed = Vec::new();
                if r.finitely_determined && !r.routes_agree {
                    failed.push("routes_agree".to_string());
                }
                for (k, v) in g.spec.expected.iter().flatten() {
                    if report_value(&r, k) != Some(Value::Finite(*v)) {
                        failed.push(format!("expected[{k}]"));
                    }
                }
                let mut doc = ReportDocument::new(g.name(), &pair, &r, opts);
                if common.timings {
                    doc = doc.with_timings(&r);
                }
                (src, doc, failed)
            })
            .collect::<Vec<_>>())
    })?;
    let mut all_ok = true;
    let mut docs = Vec::new();
    for res in results {
        for (src, doc, failed) in res? {
            for k in &failed {
                eprintln!("FAIL  {} f={src}: {k}", doc.name);
            }
            all_ok &= failed.is_empty();
            docs.push(doc);
        }
    }
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&docs).unwrap()),
        Format::Text => {
            for d in &docs {
                println!("{}", d.to_text());
            }
        }
    }
    Ok(all_ok)
}

fn cmd_tau_routes(vars: &str, phi: &str, ps: &[String], common: &Common) -> Result<bool, CliError> {
    let vars = parse_vars(vars)?;
    let phi = parse_polynomial(phi, &vars)?;
    let forms = if ps.is_empty() {
        linear_test_forms(&vars)
    } else {
        ps.iter()
            .map(|s| Ok((s.clone(), parse_polynomial(s, &vars)?)))
            .collect::<Result<Vec<_>, ParseError>>()?
    };
    let data = HypersurfaceData::new(&phi, common.opts())?;
    let tau: Value = data.tau.into();
    let theta: Value = data.theta_quotient.clone().into();
    let mut rows = Vec::new();
    for (src, p) in &forms {
        let value: Value = data.tjurina_via_linear(p).map(|(c, _)| c).into();
        let fd = GermPair::new(vars.clone(), phi.clone(), p.clone())
            .map(|g| brcalc::invariants::is_finitely_determined(&g))?;
        rows.push((src.clone(), value, fd));
    }
    match common.format {
        Format::Json => {
            let rs: Vec<_> = rows
                .iter()
                .map(|(p, v, fd)| json!({ "p": p, "quotient": v, "finitely_determined": fd, "equals_tau": *v == tau }))
                .collect();
            let out = json!({
                "phi": phi.render(&vars),
                "tau_X": tau,
                "theta_quotient": theta,
                "routes": rs,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Text => {
            println!("tau_X           {tau}");
            println!("theta_quotient  {theta}");
            let w = rows.iter().map(|(p, _, _)| p.len()).max().unwrap_or(0);
            for (p, v, fd) in &rows {
                println!(
                    "p = {p:<w$}  {v:>9}  {}  finitely_determined={fd}",
                    if *v == tau { "= tau" } else { "!= tau" }
                );
            }
        }
    }
    Ok(true)
}
