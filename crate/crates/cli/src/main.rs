use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use glcover::asympt::{check_estimates, l_of_q, Verdict, DEFAULT_TERMS};
use glcover::census::{census_row, omega_closed, CensusRow};
use glcover::clique::{clique_omega, SearchBudget};
use glcover::exactalg::{decimal_string, parse_rational};
use glcover::oracle::{
    block_orders, count_cyclic_centralizers, cyclic_proportion, enumerate_gl, irreducible_polys, jm_block,
    acyclic_centralizer_check, acyclic_centralizer_matrix, Budget, FqPoly, GlGroup,
};
use glcover::qseries::{build_f1, build_f2, build_fbar_form, Form, Target, DEFAULT_U_ORDER};
use glcover::verify::{verify_all, Goldens, Level, Status, VerifyOptions};

#[derive(Parser)]
#[command(name = "glcover", version, about = "Abelian covers and clique numbers of finite general linear groups")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = glcover::verify::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest group the oracle may enumerate, in elements.
    #[arg(long, global = true, default_value_t = Budget::default().elements)]
    budget: u64,
    /// Elementary step limit for oracle scans.
    #[arg(long, global = true, default_value_t = Budget::default().steps)]
    step_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cover sizes, b_n and class counts.
    Census(CensusArgs),
    /// Generating-function expansions.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Certified bounds on the limit l(q).
    #[command(subcommand)]
    Limit(LimitCommand),
    /// Brute-force checks over a small GL_n(q).
    Oracle(OracleArgs),
    /// Clique numbers of non-commuting graphs.
    #[command(subcommand)]
    Clique(CliqueCommand),
    /// Run the verification suite against the golden files.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// Evaluate at this prime power.
    #[arg(long)]
    q: Option<u64>,
    /// One row per n = 1..=N.
    #[arg(long)]
    table: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "F1")]
    F1,
    #[value(name = "F2")]
    F2,
    #[value(name = "Fbar")]
    Fbar,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Exp,
    Sum,
    Product,
}

#[derive(Subcommand)]
enum SeriesCommand {
    /// Coefficients of t^0..t^N. Products and an explicit --u-order give q^-1 expansions.
    Expand {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value = "exp")]
        form: FormArg,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        u_order: Option<usize>,
    },
}

#[derive(Subcommand)]
enum LimitCommand {
    /// Interval enclosing l(q).
    Lq {
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
    /// Verdicts for the numeric estimates on l(q).
    Check {
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    CyclicProportion,
    CentralizerCount,
    RegularUnipotent,
    RemarkMatrix,
    JmCheck,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum)]
    task: Task,
}

#[derive(Subcommand)]
enum CliqueCommand {
    /// Exact clique number of GL_n(q).
    Omega {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Search time limit in seconds.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
        /// Write the witness, one matrix per line.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "fast")]
    level: LevelArg,
    /// Read golden files from this directory instead of the built-in copies.
    #[arg(long)]
    goldens: Option<PathBuf>,
}

/// What a subcommand produced: a JSON value, its text rendering, and whether
/// every check it made passed.
struct Output {
    value: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new(value: Value, text: String) -> Self {
        Self { value, text, ok: true }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let budget = Budget {
        elements: cli.budget,
        steps: cli.step_budget,
    };
    match run(&cli, &budget) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.value).expect("json")
            } else {
                out.text.trim_end().to_string()
            };
            // A closed pipe downstream is not an error for us.
            let _ = writeln!(std::io::stdout(), "{body}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn run(cli: &Cli, budget: &Budget) -> Res<Output> {
    match &cli.command {
        Command::Census(a) => census(a),
        Command::Series(SeriesCommand::Expand { which, form, order, u_order }) => series(*which, *form, *order, *u_order),
        Command::Limit(LimitCommand::Lq { q, terms }) => limit_lq(q, *terms),
        Command::Limit(LimitCommand::Check { q, terms }) => limit_check(q, *terms),
        Command::Oracle(a) => oracle(a, budget),
        Command::Clique(CliqueCommand::Omega { n, q, timeout, emit_witness }) => {
            clique(*n, *q, *timeout, emit_witness.as_deref(), budget)
        }
        Command::Verify(a) => verify(a, cli.seed, budget),
    }
}

fn evaluations(row: &CensusRow, q: u64) -> Value {
    let qb = BigInt::from(q);
    let cover = row.a_poly.eval_int(&qb);
    let b = row.b_n.eval(&BigRational::from_integer(qb)).map(|v| v.to_string()).ok();
    let omega = match omega_closed(row.n, q) {
        Ok(w) => json!({"value": w.to_string(), "regime": if q as usize > row.n { "exact: q > n" } else { "exact: q = n" }}),
        Err(e) => json!({"value": null, "regime": e.to_string()}),
    };
    let regime = if q == 2 { "upper bound" } else { "exact" };
    json!({"q": q, "cover": cover.to_string(), "cover_regime": regime, "b_n": b, "omega": omega})
}

fn census(a: &CensusArgs) -> Res<Output> {
    let ns: Vec<usize> = if a.table { (1..=a.n).collect() } else { vec![a.n] };
    if let Some(q) = a.q {
        glcover::exactalg::prime_power(q).ok_or(format!("{q} is not a prime power"))?;
    }
    let mut values = Vec::new();
    let mut text = String::new();
    if a.table {
        text.push_str(&format!("{:>3}  {:>7}  cover size\n", "n", "classes"));
    }
    for n in ns {
        let row = census_row(n)?;
        let mut v = to_value(&row);
        v["a_poly_text"] = json!(row.a_poly.to_string());
        v["b_n_text"] = json!(row.b_n.to_string());
        if a.table {
            text.push_str(&format!("{:>3}  {:>7}  {}\n", n, row.class_count, row.a_poly));
        } else {
            text.push_str(&format!(
                "n = {n}\nclasses: {}\nb_n = {}\ncover = {}\n",
                row.class_count, row.b_n, row.a_poly
            ));
        }
        if let Some(q) = a.q {
            let e = evaluations(&row, q);
            if !a.table {
                text.push_str(&format!(
                    "at q = {q}: cover {} ({}), omega {} ({})\n",
                    e["cover"].as_str().unwrap_or(""),
                    e["cover_regime"].as_str().unwrap_or(""),
                    e["omega"]["value"].as_str().unwrap_or("-"),
                    e["omega"]["regime"].as_str().unwrap_or(""),
                ));
            }
            v["at_q"] = e;
        }
        values.push(v);
    }
    let value = if a.table { Value::Array(values) } else { values.pop().expect("one row") };
    Ok(Output::new(value, text))
}

fn series(which: Which, form: FormArg, order: usize, u_order: Option<usize>) -> Res<Output> {
    let form = match form {
        FormArg::Exp => Form::Exp,
        FormArg::Sum => Form::Sum,
        FormArg::Product => Form::Product,
    };
    let target = match (form, u_order) {
        (_, Some(u)) => Target::Useries { u_order: u },
        (Form::Product, None) => Target::Useries { u_order: DEFAULT_U_ORDER },
        _ => Target::Ratfunc,
    };
    let s = match which {
        Which::F1 => build_f1(order, form, target)?,
        Which::F2 => build_f2(order, form, target)?,
        Which::Fbar => build_fbar_form(order, form, target)?,
    };
    let value = s.to_json();
    let text = serde_json::to_string_pretty(&value)?;
    Ok(Output::new(value, text))
}

fn rational_arg(s: &str) -> Res<BigRational> {
    Ok(parse_rational(s)?)
}

fn limit_lq(q: &str, terms: usize) -> Res<Output> {
    let i = l_of_q(&rational_arg(q)?, terms)?;
    let text = format!(
        "l({q}) in [{}, {}] (K = {terms})",
        decimal_string(&i.lo, 10),
        decimal_string(&i.hi, 10)
    );
    Ok(Output::new(to_value(&i), text))
}

fn limit_check(q: &str, terms: usize) -> Res<Output> {
    let r = check_estimates(&rational_arg(q)?, terms)?;
    let mut text = format!(
        "l({q}) in [{}, {}] (K = {terms})\n",
        decimal_string(&r.interval.lo, 10),
        decimal_string(&r.interval.hi, 10)
    );
    for (name, v) in r.verdicts() {
        text.push_str(&format!("{name}: {v:?}\n"));
    }
    let ok = r.verdicts().iter().all(|(_, v)| *v != Verdict::Fails);
    Ok(Output { value: to_value(&r), text, ok })
}

fn oracle(a: &OracleArgs, budget: &Budget) -> Res<Output> {
    if let Task::RemarkMatrix = a.task {
        let r = acyclic_centralizer_check(budget)?;
        let ok = r.centralizer_order == 16 && r.cyclic_members == 0 && r.scan_agrees;
        let text = format!(
            "matrix: {}\ncentralizer order {} (expected 16), cyclic members {} (expected 0)",
            acyclic_centralizer_matrix(),
            r.centralizer_order,
            r.cyclic_members
        );
        return Ok(Output { value: json!({"task": "remark-matrix", "report": r, "pass": ok}), text, ok });
    }
    let g = enumerate_gl(a.n, a.q, budget)?;
    let (task, report, ok, text) = match a.task {
        Task::CyclicProportion => {
            let c = cyclic_proportion(&g);
            let ok = c.holds && c.two_sided;
            let text = format!(
                "cyclic {}/{} = {}\nlower bound {}\nexpanded lower bound {}",
                c.cyclic, c.total, c.proportion, c.limit_lower, c.expanded_lower
            );
            ("cyclic-proportion", to_value(&c), ok, text)
        }
        Task::CentralizerCount => {
            let c = count_cyclic_centralizers(&g, budget)?;
            let cover = glcover::census::a_polynomial(a.n)?.eval_int(&BigInt::from(a.q));
            let count = BigInt::from(c.count);
            let relation = if count == cover { "equal" } else if count < cover { "less" } else { "greater" };
            let expected = if a.q as usize > a.n && a.q > 2 { "equal" } else { "less" };
            let ok = c.partition_ok && c.abelian_small && c.lower_bound_ok && relation == expected;
            let mut v = to_value(&c);
            v["cover"] = json!(cover.to_string());
            v["relation"] = json!(relation);
            let text = format!("distinct cyclic centralizers: {count}\ncover size: {cover} ({relation})");
            ("centralizer-count", v, ok, text)
        }
        Task::RegularUnipotent => {
            let b = block_orders(&g, &FqPoly::linear(g.field(), 1));
            let text = format!(
                "centralizer {} (expected {}), normalizer {} (expected {})",
                b.centralizer, b.centralizer_expected, b.normalizer, b.normalizer_expected
            );
            ("regular-unipotent", to_value(&b), b.matches(), text)
        }
        Task::JmCheck => jm_check(&g),
        Task::RemarkMatrix => unreachable!(),
    };
    Ok(Output {
        value: json!({"task": task, "n": a.n, "q": a.q, "report": report, "pass": ok}),
        text,
        ok,
    })
}

fn jm_check(g: &GlGroup) -> (&'static str, Value, bool, String) {
    let f = g.field();
    let n = g.n();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let m = n / d;
        for p in irreducible_polys(f, d).into_iter().filter(|p| p.coeffs()[0] != 0) {
            let b = block_orders(g, &p);
            let min_poly_ok = jm_block(&p, m, f).min_poly(f) == p.pow(m, f);
            ok &= b.matches() && min_poly_ok;
            text.push_str(&format!(
                "f = {:?}, m = {m}: centralizer {} normalizer {} min poly {}\n",
                p.coeffs(),
                b.centralizer,
                b.normalizer,
                if min_poly_ok { "f^m" } else { "wrong" }
            ));
            rows.push(json!({"f": p.coeffs(), "orders": b, "min_poly_ok": min_poly_ok}));
        }
    }
    ("jm-check", Value::Array(rows), ok, text)
}

fn clique(n: usize, q: u64, timeout: u64, witness: Option<&std::path::Path>, budget: &Budget) -> Res<Output> {
    let g = enumerate_gl(n, q, budget)?;
    let search = SearchBudget {
        time: Duration::from_secs(timeout),
        ..SearchBudget::default()
    };
    let r = clique_omega(&g, budget, search)?;
    if let Some(path) = witness {
        let lines: Vec<String> = r.witness.iter().map(|&i| g.element(i).to_string()).collect();
        std::fs::write(path, lines.join("\n") + "\n")?;
    }
    let value = json!({
        "n": n,
        "q": q,
        "omega": r.omega,
        "optimal": r.optimal,
        "seed_size": r.seed_size,
        "upper_bound": r.upper_bound,
        "steps": r.steps,
    });
    let text = format!(
        "omega(GL_{n}({q})) {} {}\nseed {}, cover bound {}",
        if r.optimal { "=" } else { ">=" },
        r.omega,
        r.seed_size,
        r.upper_bound.map_or("none".to_string(), |u| u.to_string())
    );
    Ok(Output::new(value, text))
}

fn verify(a: &VerifyArgs, seed: u64, budget: &Budget) -> Res<Output> {
    let level = match a.level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let mut opts = VerifyOptions::new(level);
    opts.seed = seed;
    opts.oracle_budget = *budget;
    if let Some(dir) = &a.goldens {
        opts.goldens = Goldens::from_dir(dir)?;
    }
    let report = verify_all(&opts);
    let mut text = String::new();
    for c in &report.checks {
        let s = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skipped => "SKIPPED",
        };
        text.push_str(&format!("{s:<12} {:<26} {:>7} ms  {}\n", c.id, c.millis, c.detail));
    }
    let failed = report.failures().count();
    text.push_str(&format!("{} checks, {failed} failed, {} ms\n", report.checks.len(), report.millis));
    let mut value = to_value(&report);
    value["command"] = json!(format!("verify --level {}", if level == Level::Full { "full" } else { "fast" }));
    Ok(Output {
        value,
        text,
        ok: report.success(),
    })
}
