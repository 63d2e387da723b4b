//! Command line front end for the Weyl algebra engine: element evaluation,
//! left Groebner bases, Eulerian index tests, graded local cohomology
//! models, homology jobs with concentration verdicts, and the bundled
//! verification suites.
//!
//! Exit codes: 0 pass, 1 usage or construction error, 2 counterexample,
//! 3 inconclusive.  Reports go to stdout (or `--output`); timings go to
//! stderr only.

pub mod descriptor;
pub mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weyl_core::grammar::parse_element;
use weyl_core::groebner::{buchberger, eulerian_index, free_resolution, GroebnerBasis};
use weyl_core::homology::{
    derivative_ops, ext_dim_over_weyl, koszul_homology_dim, tor_dim_with_polynomials,
    HomologyError,
};
use weyl_core::model::cech_local_cohomology_model;
use weyl_core::order::BaseOrder;
use weyl_core::suite::{run_suite, suite_names};
use weyl_core::Degree;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser)]
#[command(name = "weyl", version, about = "Exact graded computations in the Weyl algebra")]
pub struct Cli {
    /// Flat key=value file supplying defaults for any flag; flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutFormat>,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse an element and print its canonical form and degree
    Eval {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Reduced left Groebner basis of the ideal spanned by the generators
    Gb {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
    },
    /// Least a with the a-th power of the Euler operator in the ideal
    EulerianTest {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
        #[arg(long)]
        amax: Option<u32>,
    },
    /// Graded local cohomology model: dimensions and Eulerian report
    Localcoh {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        amax: Option<u32>,
    },
    /// Homology of the derivative Koszul complex on a model
    Derham {
        #[arg(long, allow_hyphen_values = true)]
        model: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<i64>,
    },
    /// Graded Ext of a presented module with coefficients in a model
    Ext {
        #[arg(long = "M", allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long = "N", allow_hyphen_values = true)]
        coeff: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<i64>,
    },
    /// Graded Tor of a model against the polynomial quotient
    Tor {
        #[arg(long = "M", allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<i64>,
    },
    /// Run a bundled verification suite
    Verify { suite: Option<String> },
}

pub struct Failure {
    pub code: i32,
    pub msg: String,
}

fn usage(msg: String) -> Failure {
    Failure { code: EXIT_USAGE, msg }
}

struct Job {
    json: Value,
    csv: Option<String>,
    code: i32,
}

type Cfg = BTreeMap<String, String>;

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(f) = validate_threads() {
        eprintln!("error: {}", f.msg);
        return f.code;
    }
    let cfg = match load_config(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            return f.code;
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    match dispatch(&cli.command, &cfg) {
        Ok(job) => {
            eprintln!("{} finished in {} ms", name, started.elapsed().as_millis());
            match emit(&cli, &cfg, &job) {
                Ok(()) => job.code,
                Err(f) => {
                    eprintln!("error: {}", f.msg);
                    f.code
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Gb { .. } => "gb",
        Command::EulerianTest { .. } => "eulerian-test",
        Command::Localcoh { .. } => "localcoh",
        Command::Derham { .. } => "derham",
        Command::Ext { .. } => "ext",
        Command::Tor { .. } => "tor",
        Command::Verify { .. } => "verify",
    }
}

fn validate_threads() -> Result<(), Failure> {
    let Some(raw) = std::env::var_os("WEYL_THREADS") else {
        return Ok(());
    };
    match raw.to_str().and_then(|s| s.trim().parse::<usize>().ok()) {
        Some(t) if t >= 1 => Ok(()),
        _ => Err(usage("WEYL_THREADS must be an integer >= 1".to_string())),
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<Cfg, Failure> {
    let mut cfg = Cfg::new();
    let Some(path) = path else {
        return Ok(cfg);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {}", path.display(), e)))?;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!(
                "config {} line {}: expected key=value",
                path.display(),
                idx + 1
            )));
        };
        cfg.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(cfg)
}

fn pick<T, F>(flag: Option<T>, cfg: &Cfg, key: &str, parse: F) -> Result<Option<T>, Failure>
where
    F: FnOnce(&str) -> Result<T, String>,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(key) {
        Some(raw) => parse(raw)
            .map(Some)
            .map_err(|e| usage(format!("config key '{}': {}", key, e))),
        None => Ok(None),
    }
}

fn parsed<T: std::str::FromStr>(raw: &str) -> Result<T, String> {
    raw.parse::<T>().map_err(|_| format!("invalid value '{}'", raw))
}

fn need<T>(v: Option<T>, key: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("missing --{}", key)))
}

pub fn parse_window(text: &str) -> Result<(i64, i64), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("window '{}' must look like -10..5", text))?;
    let lo = a.trim().parse::<i64>().map_err(|_| format!("bad window endpoint '{}'", a))?;
    let hi = b.trim().parse::<i64>().map_err(|_| format!("bad window endpoint '{}'", b))?;
    if lo > hi {
        return Err(format!("window '{}' is empty", text));
    }
    Ok((lo, hi))
}

pub fn parse_index_range(text: &str) -> Result<(usize, usize), String> {
    if let Some((a, b)) = text.split_once("..") {
        let lo = a.trim().parse::<usize>().map_err(|_| format!("bad index '{}'", a))?;
        let hi = b.trim().parse::<usize>().map_err(|_| format!("bad index '{}'", b))?;
        if lo > hi {
            return Err(format!("index range '{}' is empty", text));
        }
        return Ok((lo, hi));
    }
    let single = text.trim().parse::<usize>().map_err(|_| format!("bad index '{}'", text))?;
    Ok((single, single))
}

fn parse_order(text: &str) -> Result<BaseOrder, String> {
    match text {
        "degrevlex" => Ok(BaseOrder::DegRevLex),
        "deglex" => Ok(BaseOrder::DegLex),
        other => Err(format!("unknown order '{}'; use degrevlex or deglex", other)),
    }
}

fn take_window(flag: &Option<String>, cfg: &Cfg) -> Result<(i64, i64), Failure> {
    let raw = need(pick(flag.clone(), cfg, "window", parsed::<String>)?, "window")?;
    parse_window(&raw).map_err(usage)
}

fn gb_from(
    n: Option<usize>,
    gens: &Option<String>,
    order: BaseOrder,
    cfg: &Cfg,
) -> Result<(usize, GroebnerBasis), Failure> {
    let n = need(pick(n, cfg, "n", parsed::<usize>)?, "n")?;
    if n == 0 {
        return Err(usage("ambient n must be at least 1".to_string()));
    }
    let raw = need(pick(gens.clone(), cfg, "gens", parsed::<String>)?, "gens")?;
    let gens = descriptor::parse_element_list(n, &raw).map_err(usage)?;
    let gb = buchberger(n, &gens, order).map_err(|e| usage(e.to_string()))?;
    Ok((n, gb))
}

fn basis_strings(gb: &GroebnerBasis) -> Vec<String> {
    gb.elems.iter().map(|m| format!("{}", m.comp(0))).collect()
}

fn dispatch(command: &Command, cfg: &Cfg) -> Result<Job, Failure> {
    match command {
        Command::Eval { n, expr } => cmd_eval(*n, expr, cfg),
        Command::Gb { n, order, gens } => cmd_gb(*n, order, gens, cfg),
        Command::EulerianTest { n, gens, amax } => cmd_eulerian_test(*n, gens, *amax, cfg),
        Command::Localcoh { n, ideal, i, window, amax } => {
            cmd_localcoh(*n, ideal, *i, window, *amax, cfg)
        }
        Command::Derham { model, window, expect } => cmd_derham(model, window, *expect, cfg),
        Command::Ext { m, coeff, nu, window, expect } => {
            cmd_ext(m, coeff, nu, window, *expect, cfg)
        }
        Command::Tor { m, nu, window, expect } => cmd_tor(m, nu, window, *expect, cfg),
        Command::Verify { suite } => cmd_verify(suite, cfg),
    }
}

fn cmd_eval(n: Option<usize>, expr: &Option<String>, cfg: &Cfg) -> Result<Job, Failure> {
    let n = need(pick(n, cfg, "n", parsed::<usize>)?, "n")?;
    if n == 0 {
        return Err(usage("ambient n must be at least 1".to_string()));
    }
    let raw = need(pick(expr.clone(), cfg, "expr", parsed::<String>)?, "expr")?;
    let element = parse_element(n, &raw).map_err(|e| usage(e.to_string()))?;
    let degree = match element.degree() {
        None => Value::Null,
        Some(Degree::Homogeneous(d)) => json!(d),
        Some(Degree::Inhomogeneous) => json!("inhomogeneous"),
    };
    let mut body = report::base("eval");
    body.insert("canonical".to_string(), json!(format!("{}", element)));
    body.insert("degree".to_string(), degree);
    body.insert("input".to_string(), json!(raw));
    body.insert("n".to_string(), json!(n));
    Ok(Job { json: Value::Object(body), csv: None, code: EXIT_PASS })
}

fn cmd_gb(
    n: Option<usize>,
    order: &Option<String>,
    gens: &Option<String>,
    cfg: &Cfg,
) -> Result<Job, Failure> {
    let order_name =
        pick(order.clone(), cfg, "order", parsed::<String>)?.unwrap_or_else(|| "degrevlex".into());
    let order = parse_order(&order_name).map_err(usage)?;
    let (n, gb) = gb_from(n, gens, order, cfg)?;
    let mut body = report::base("gb");
    body.insert("basis".to_string(), json!(basis_strings(&gb)));
    body.insert(
        "gens".to_string(),
        json!(gb.input.iter().map(|m| format!("{}", m.comp(0))).collect::<Vec<_>>()),
    );
    body.insert("n".to_string(), json!(n));
    body.insert("order".to_string(), json!(order_name));
    Ok(Job { json: Value::Object(body), csv: None, code: EXIT_PASS })
}

fn cmd_eulerian_test(
    n: Option<usize>,
    gens: &Option<String>,
    amax: Option<u32>,
    cfg: &Cfg,
) -> Result<Job, Failure> {
    let amax = pick(amax, cfg, "amax", parsed::<u32>)?.unwrap_or(10);
    let (n, gb) = gb_from(n, gens, BaseOrder::DegRevLex, cfg)?;
    let index = eulerian_index(&gb, amax);
    let mut body = report::base("eulerian-test");
    body.insert("amax".to_string(), json!(amax));
    body.insert("basis".to_string(), json!(basis_strings(&gb)));
    body.insert("index".to_string(), json!(index));
    body.insert("n".to_string(), json!(n));
    let code = if index.is_some() { EXIT_PASS } else { EXIT_INCONCLUSIVE };
    Ok(Job { json: Value::Object(body), csv: None, code })
}

fn cmd_localcoh(
    n: Option<usize>,
    ideal: &Option<String>,
    index: Option<usize>,
    window: &Option<String>,
    amax: Option<u32>,
    cfg: &Cfg,
) -> Result<Job, Failure> {
    let n = need(pick(n, cfg, "n", parsed::<usize>)?, "n")?;
    if n == 0 {
        return Err(usage("ambient n must be at least 1".to_string()));
    }
    let raw_ideal = need(pick(ideal.clone(), cfg, "ideal", parsed::<String>)?, "ideal")?;
    let index = need(pick(index, cfg, "i", parsed::<usize>)?, "i")?;
    let (lo, hi) = take_window(window, cfg)?;
    let amax = pick(amax, cfg, "amax", parsed::<u32>)?.unwrap_or(4);
    let (monos, labels) = descriptor::parse_monomial_list(n, &raw_ideal).map_err(usage)?;
    let model = cech_local_cohomology_model(n, &monos, index).map_err(|e| usage(e.to_string()))?;
    let dims: Vec<(i64, usize)> = (lo..=hi).map(|d| (d, model.dim(d))).collect();
    let eulerian = model
        .check_generalized_eulerian(lo, hi, amax)
        .map_err(|e| usage(e.to_string()))?;
    let code = if eulerian.holds() {
        EXIT_PASS
    } else if eulerian.only_inconclusive_failures() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_COUNTEREXAMPLE
    };
    let mut body = report::base("localcoh");
    body.insert(
        "descriptor".to_string(),
        json!({"constructor": "localcoh", "n": n, "ideal": labels, "index": index}),
    );
    body.insert("dims".to_string(), report::dims_json(&dims));
    body.insert("eulerian".to_string(), report::eulerian_json(&eulerian));
    body.insert("window".to_string(), report::window_json(lo, hi));
    Ok(Job { json: Value::Object(body), csv: Some(report::csv_dims(&dims)), code })
}

fn cmd_derham(
    model: &Option<String>,
    window: &Option<String>,
    expect: Option<i64>,
    cfg: &Cfg,
) -> Result<Job, Failure> {
    let raw = need(pick(model.clone(), cfg, "model", parsed::<String>)?, "model")?;
    let (lo, hi) = take_window(window, cfg)?;
    let expect = pick(expect, cfg, "expect", parsed::<i64>)?;
    let built = descriptor::parse_model(&raw).map_err(usage)?;
    let n = built.model.n();
    let ops = derivative_ops(n);
    let mut rows = Vec::new();
    for nu in 0..=n {
        let position = n - nu;
        for d in lo..=hi {
            let dim = koszul_homology_dim(&built.model, &ops, position, d - position as i64)
                .map_err(|e| usage(e.to_string()))?;
            rows.push((nu, d, dim));
        }
    }
    concentration_job("derham", built.provenance, lo, hi, rows, expect)
}

fn cmd_ext(
    m: &Option<String>,
    coeff: &Option<String>,
    nu: &Option<String>,
    window: &Option<String>,
    expect: Option<i64>,
    cfg: &Cfg,
) -> Result<Job, Failure> {
    let raw_m = need(pick(m.clone(), cfg, "M", parsed::<String>)?, "M")?;
    let raw_n = need(pick(coeff.clone(), cfg, "N", parsed::<String>)?, "N")?;
    let (lo, hi) = take_window(window, cfg)?;
    let expect = pick(expect, cfg, "expect", parsed::<i64>)?;
    let pres = descriptor::parse_presentation(&raw_m).map_err(usage)?;
    let built = descriptor::parse_model(&raw_n).map_err(usage)?;
    if pres.n != built.model.n() {
        return Err(usage("presentation and coefficients have different ambients".to_string()));
    }
    let (nu_lo, nu_hi) = match pick(nu.clone(), cfg, "nu", parsed::<String>)? {
        Some(raw) => parse_index_range(&raw).map_err(usage)?,
        None => (0, built.model.n()),
    };
    let res = free_resolution(&pres.gb, pres.shift, nu_hi + 2)
        .map_err(|e| usage(e.to_string()))?;
    let mut rows = Vec::new();
    for nu in nu_lo..=nu_hi {
        for d in lo..=hi {
            let dim = ext_dim_over_weyl(&res, &built.model, nu, d).map_err(|e| match e {
                HomologyError::TruncatedResolution => Failure {
                    code: EXIT_INCONCLUSIVE,
                    msg: format!("resolution truncated before homological index {}", nu),
                },
                other => usage(other.to_string()),
            })?;
            rows.push((nu, d, dim));
        }
    }
    let mut body = report::base("ext");
    body.insert("M".to_string(), pres.provenance);
    body.insert("N".to_string(), built.provenance);
    finish_concentration(&mut body, "ext", lo, hi, rows, expect)
}

fn cmd_tor(
    m: &Option<String>,
    nu: &Option<String>,
    window: &Option<String>,
    expect: Option<i64>,
    cfg: &Cfg,
) -> Result<Job, Failure> {
    let raw_m = need(pick(m.clone(), cfg, "M", parsed::<String>)?, "M")?;
    let (lo, hi) = take_window(window, cfg)?;
    let expect = pick(expect, cfg, "expect", parsed::<i64>)?;
    let built = descriptor::parse_model(&raw_m).map_err(usage)?;
    let (nu_lo, nu_hi) = match pick(nu.clone(), cfg, "nu", parsed::<String>)? {
        Some(raw) => parse_index_range(&raw).map_err(usage)?,
        None => (0, built.model.n()),
    };
    let mut rows = Vec::new();
    for nu in nu_lo..=nu_hi {
        for d in lo..=hi {
            let dim = tor_dim_with_polynomials(&built.model, nu, d)
                .map_err(|e| usage(e.to_string()))?;
            rows.push((nu, d, dim));
        }
    }
    concentration_job("tor", built.provenance, lo, hi, rows, expect)
}

fn concentration_job(
    command: &str,
    provenance: Value,
    lo: i64,
    hi: i64,
    rows: Vec<(usize, i64, usize)>,
    expect: Option<i64>,
) -> Result<Job, Failure> {
    let mut body = report::base(command);
    body.insert("M".to_string(), provenance);
    finish_concentration(&mut body, command, lo, hi, rows, expect)
}

fn finish_concentration(
    body: &mut serde_json::Map<String, Value>,
    invariant: &str,
    lo: i64,
    hi: i64,
    rows: Vec<(usize, i64, usize)>,
    expect: Option<i64>,
) -> Result<Job, Failure> {
    let (verdict, concentrated) = report::concentration_verdict(&rows, expect);
    body.insert("invariant".to_string(), json!(invariant));
    body.insert("table".to_string(), report::table_json(&rows));
    body.insert("verdict".to_string(), verdict);
    body.insert("window".to_string(), report::window_json(lo, hi));
    let code = if concentrated { EXIT_PASS } else { EXIT_COUNTEREXAMPLE };
    Ok(Job {
        json: Value::Object(std::mem::take(body)),
        csv: Some(report::csv_table(&rows)),
        code,
    })
}

fn cmd_verify(suite: &Option<String>, cfg: &Cfg) -> Result<Job, Failure> {
    let name = need(pick(suite.clone(), cfg, "suite", parsed::<String>)?, "suite")?;
    let Some(rep) = run_suite(&name) else {
        return Err(usage(format!(
            "unknown suite '{}' (available: {})",
            name,
            suite_names().join(", ")
        )));
    };
    let mut body = report::base("verify");
    body.insert("report".to_string(), report::suite_json(&rep));
    body.insert("suite".to_string(), json!(rep.suite));
    let code = if rep.passed() { EXIT_PASS } else { EXIT_COUNTEREXAMPLE };
    Ok(Job { json: Value::Object(body), csv: Some(report::csv_checks(&rep)), code })
}

fn emit(cli: &Cli, cfg: &Cfg, job: &Job) -> Result<(), Failure> {
    let format = match pick(cli.out, cfg, "out", |raw| match raw {
        "json" => Ok(OutFormat::Json),
        "csv" => Ok(OutFormat::Csv),
        other => Err(format!("unknown format '{}'", other)),
    })? {
        Some(f) => f,
        None => OutFormat::Json,
    };
    let text = match format {
        OutFormat::Json => report::render(&job.json),
        OutFormat::Csv => job
            .csv
            .clone()
            .ok_or_else(|| usage("csv output is only available for table jobs".to_string()))?,
    };
    let path = pick(cli.output.clone(), cfg, "output", |raw| Ok(PathBuf::from(raw)))?;
    match path {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| usage(format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}
