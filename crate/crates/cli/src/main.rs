//! `polybound` command-line driver.
//!
//! Decision modes answer through the exit code: 0 yes, 1 no, 2 usage or input
//! error, 3 super-polynomial growth where a polynomial bound is required.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use polybound::closure::{classify, sem_s, ClosureConfig, GrowthClass};
use polybound::engine::{EngineConfig, Outcome, UniVal};
use polybound::error::AnalysisError;
use polybound::hardness::{reduce, BoolProgram};
use polybound::lang::{parse, worst_case, ExecConfig, ParseOptions, Program};
use polybound::multi::{attainable_monomials, cap_for};
use polybound::poly::{DegreeCap, Monomial};
use polybound::polyhedron::{decide_multivariate, generate_multivariate};
use polybound::uni::{decide_univariate, generate_univariate, random_walk};
use serde_json::{json, Value};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "polybound", version, about = "Tight polynomial bounds for bounded-loop programs")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args)]
struct Options {
    /// Accept `X := 0` and `X := *`.
    #[arg(long, global = true)]
    ext: bool,
    /// Degree cap for the symbolic analyses.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    /// Most variables whose zeroing subsets are enumerated exhaustively.
    #[arg(long, global = true, default_value_t = 12)]
    zmax: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for `gen-uni --walk`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct UniQuery {
    /// Program file, or `-` for standard input.
    file: PathBuf,
    /// Initial degrees, e.g. `1,2,1`.
    #[arg(long)]
    init: String,
    /// Queried variable, numbered from 1.
    #[arg(long)]
    var: usize,
    #[arg(long)]
    degree: u32,
}

#[derive(Subcommand)]
enum Mode {
    /// Tag every variable as polynomially or super-polynomially bounded.
    Classify { file: PathBuf },
    /// Print the symbolic abstraction as a sorted set of AMPs.
    Closure { file: PathBuf },
    /// Can the variable reach the degree from the given univariate state?
    CheckUni(UniQuery),
    /// Produce a witness outcome for a univariate query.
    GenUni {
        #[command(flatten)]
        query: UniQuery,
        /// Follow one seeded random path instead.
        #[arg(long)]
        walk: bool,
    },
    /// Is the monomial an attainable lower bound for the variable?
    Check {
        file: PathBuf,
        #[arg(long)]
        monomial: String,
        /// Defaults to the last variable.
        #[arg(long)]
        var: Option<usize>,
    },
    /// Tight upper bound of a variable as a maximum of attainable monomials.
    Bounds {
        file: PathBuf,
        #[arg(long)]
        var: usize,
        #[arg(long)]
        max_degree: u32,
    },
    /// Attainable degree vectors of a variable.
    Monomials {
        file: PathBuf,
        #[arg(long)]
        var: usize,
    },
    /// Concrete worst case by exhaustive execution.
    Oracle {
        file: PathBuf,
        /// Initial values, e.g. `3,5`.
        #[arg(long)]
        init: String,
        #[arg(long)]
        var: usize,
        /// Iterations allowed per loop entry.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Compile a Boolean program into a degree query.
    Harden {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    SuperPoly(String),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::SuperPolyDetected(_) => Failure::SuperPoly(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Exit code, JSON body and text body of a finished run.
struct Report {
    code: u8,
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let mut body = r.json;
            if let Value::Object(map) = &mut body {
                map.insert("schema".into(), json!(SCHEMA));
            }
            match cli.opts.format {
                Format::Json => println!("{body}"),
                Format::Text => print!("{}", r.text),
            }
            ExitCode::from(r.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::SuperPoly(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    let res = if path == Path::new("-") { std::io::read_to_string(std::io::stdin()) } else { fs::read_to_string(path) };
    res.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, opts: &Options) -> Result<Program, Failure> {
    parse(&read(path)?, ParseOptions { ext: opts.ext }).map_err(|e| Failure::Usage(e.to_string()))
}

fn var_index(prog: &Program, var: usize) -> Result<usize, Failure> {
    if var == 0 || var > prog.n() {
        return Err(Failure::Usage(format!("--var {var} out of range 1..={}", prog.n())));
    }
    Ok(var - 1)
}

fn closure_config(opts: &Options) -> ClosureConfig {
    ClosureConfig { cap: opts.cap.map(DegreeCap::saturate), ..ClosureConfig::default() }
}

fn engine_config(opts: &Options) -> EngineConfig {
    EngineConfig { zmax: opts.zmax, ..EngineConfig::default() }
}

fn mono_cap(prog: &Program, opts: &Options) -> u64 {
    opts.cap.unwrap_or_else(|| cap_for(prog))
}

fn yes_no(b: bool) -> u8 {
    if b {
        0
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let opts = &cli.opts;
    match &cli.mode {
        Mode::Classify { file } => run_classify(&load(file, opts)?, opts),
        Mode::Closure { file } => run_closure(&load(file, opts)?, opts),
        Mode::CheckUni(q) => run_check_uni(q, opts),
        Mode::GenUni { query, walk } => run_gen_uni(query, *walk, opts),
        Mode::Check { file, monomial, var } => run_check(&load(file, opts)?, monomial, *var, opts),
        Mode::Bounds { file, var, max_degree } => run_bounds(&load(file, opts)?, *var, *max_degree, opts),
        Mode::Monomials { file, var } => run_monomials(&load(file, opts)?, *var, opts),
        Mode::Oracle { file, init, var, budget } => run_oracle(&load(file, opts)?, init, *var, *budget),
        Mode::Harden { input, out } => run_harden(input, out.as_deref()),
    }
}

fn run_classify(prog: &Program, opts: &Options) -> Result<Report, Failure> {
    let c = classify(prog, &closure_config(opts));
    let mut text = String::new();
    let mut vars = Vec::new();
    for (i, class) in c.classes.iter().enumerate() {
        let name = &prog.names[i];
        match class {
            GrowthClass::Poly(d) => {
                text.push_str(&format!("{name}: polynomial, degree {d}\n"));
                vars.push(json!({"var": name, "class": "poly", "degree": d}));
            }
            GrowthClass::SuperPoly => {
                text.push_str(&format!("{name}: super-polynomial\n"));
                vars.push(json!({"var": name, "class": "superpoly"}));
            }
        }
    }
    for w in &c.warnings {
        eprintln!("warning: {w}");
    }
    let json = json!({"mode": "classify", "vars": vars, "cap": c.cap.cap, "warnings": c.warnings});
    Ok(Report { code: 0, json, text })
}

fn run_closure(prog: &Program, opts: &Options) -> Result<Report, Failure> {
    let amps = sem_s(prog, &closure_config(opts))?;
    let lines: Vec<String> = amps.iter().map(ToString::to_string).collect();
    let text = lines.iter().map(|l| format!("{l}\n")).collect();
    Ok(Report { code: 0, json: json!({"mode": "closure", "amps": lines}), text })
}

fn parse_init(prog: &Program, csv: &str, ext: bool) -> Result<Vec<UniVal>, Failure> {
    let init = csv
        .split(',')
        .map(|t| t.parse::<UniVal>().map_err(|e| Failure::Usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if init.len() != prog.n() {
        return Err(Failure::Usage(format!("--init has {} entries, program has {} variables", init.len(), prog.n())));
    }
    if !ext && init.iter().any(|v| v.degree().is_none()) {
        return Err(Failure::Usage("special initial values need --ext".into()));
    }
    Ok(init)
}

fn uni_json(v: &UniVal) -> Value {
    match v.degree() {
        Some(d) => json!(d),
        None => json!(v.to_string()),
    }
}

fn uni_text(s: &[UniVal]) -> String {
    s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn outcome_json(o: &Outcome<UniVal>) -> (Value, Value) {
    (Value::Array(o.state.iter().map(uni_json).collect()), json!(o.matrix.to_string()))
}

fn run_check_uni(q: &UniQuery, opts: &Options) -> Result<Report, Failure> {
    let prog = load(&q.file, opts)?;
    let init = parse_init(&prog, &q.init, opts.ext)?;
    let j = var_index(&prog, q.var)?;
    let ans = decide_univariate(&prog, &init, j, q.degree, engine_config(opts))?;
    if ans.heuristic_used {
        eprintln!("warning: zeroing subsets were sampled; a negative answer may be incomplete");
    }
    let witness = match &ans.witness {
        Some(o) => Some(o.clone()),
        None if ans.answer && !ans.unbounded => generate_univariate(&prog, &init, j, q.degree, engine_config(opts))?,
        None => None,
    };
    let (ws, wm) = match &witness {
        Some(o) => outcome_json(o),
        None => (Value::Null, Value::Null),
    };
    let json = json!({
        "mode": "check-uni",
        "answer": ans.answer,
        "unbounded": ans.unbounded,
        "witness_state": ws,
        "witness_matrix": wm,
    });
    let text =
        format!("{}{}\n", if ans.answer { "yes" } else { "no" }, if ans.unbounded { " (unbounded)" } else { "" });
    Ok(Report { code: yes_no(ans.answer), json, text })
}

fn run_gen_uni(q: &UniQuery, walk: bool, opts: &Options) -> Result<Report, Failure> {
    let prog = load(&q.file, opts)?;
    let init = parse_init(&prog, &q.init, opts.ext)?;
    let j = var_index(&prog, q.var)?;
    let (found, reaches) = if walk {
        let limit = q.degree.max(init.iter().filter_map(UniVal::degree).max().unwrap_or(1));
        let o = random_walk(&prog, &init, limit, opts.seed);
        let reaches = matches!(o.state[j], UniVal::Star) || o.state[j].degree().is_some_and(|d| d >= q.degree);
        (Some(o), reaches)
    } else {
        let o = generate_univariate(&prog, &init, j, q.degree, engine_config(opts))?;
        let reaches = o.is_some();
        (o, reaches)
    };
    let (json, text) = match &found {
        Some(o) => {
            let (s, m) = outcome_json(o);
            let json = json!({"mode": "gen-uni", "found": reaches, "state": s, "matrix": m});
            (json, format!("state {}\nmatrix {}\n", uni_text(&o.state), o.matrix))
        }
        None => (json!({"mode": "gen-uni", "found": false}), "none\n".to_string()),
    };
    Ok(Report { code: yes_no(reaches), json, text })
}

fn run_check(prog: &Program, monomial: &str, var: Option<usize>, opts: &Options) -> Result<Report, Failure> {
    let m: Monomial = monomial.parse().map_err(|e: polybound::error::TextError| Failure::Usage(e.to_string()))?;
    let j = var_index(prog, var.unwrap_or(prog.n()))?;
    let ans = decide_multivariate(prog, j, &m, mono_cap(prog, opts))?;
    let json = json!({"mode": "check", "attainable": ans.attainable, "unbounded": ans.unbounded});
    let text = format!("{}\n", if ans.attainable { "attainable" } else { "not attainable" });
    Ok(Report { code: yes_no(ans.attainable), json, text })
}

fn run_bounds(prog: &Program, var: usize, max_degree: u32, opts: &Options) -> Result<Report, Failure> {
    let j = var_index(prog, var)?;
    let b = generate_multivariate(prog, j, max_degree, mono_cap(prog, opts))?;
    if b.unbounded {
        return Err(Failure::SuperPoly(format!("{} is not polynomially bounded", prog.names[j])));
    }
    let upper = b.upper_bound();
    let json = json!({
        "mode": "bounds",
        "vertices": b.vertices.iter().collect::<Vec<_>>(),
        "interior": b.interior.iter().collect::<Vec<_>>(),
        "upper_bound": upper,
    });
    Ok(Report { code: 0, json, text: format!("{upper}\n") })
}

fn run_monomials(prog: &Program, var: usize, opts: &Options) -> Result<Report, Failure> {
    let j = var_index(prog, var)?;
    let att = attainable_monomials(prog, j, mono_cap(prog, opts))?;
    if att.unbounded {
        return Err(Failure::SuperPoly(format!("{} is not polynomially bounded", prog.names[j])));
    }
    let text = att
        .vectors
        .iter()
        .map(|v| format!("{}\n", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")))
        .collect();
    let json = json!({"mode": "monomials", "vectors": att.vectors.iter().collect::<Vec<_>>()});
    Ok(Report { code: 0, json, text })
}

fn run_oracle(prog: &Program, init: &str, var: usize, budget: Option<u64>) -> Result<Report, Failure> {
    let j = var_index(prog, var)?;
    let s = init
        .split(',')
        .map(|t| t.trim().parse::<BigUint>().map_err(|e| Failure::Usage(format!("--init `{t}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = ExecConfig { iter_budget: budget.unwrap_or(u64::MAX), ..ExecConfig::default() };
    let w = worst_case(prog, &s, cfg, j).map_err(|e| Failure::Usage(e.to_string()))?;
    let json = json!({"mode": "oracle", "worst_case": w.to_string()});
    Ok(Report { code: 0, json, text: format!("{w}\n") })
}

fn run_harden(input: &Path, out: Option<&Path>) -> Result<Report, Failure> {
    let b: BoolProgram =
        read(input)?.parse().map_err(|e: polybound::error::BoolProgramError| Failure::Usage(e.to_string()))?;
    let inst = reduce(&b);
    let src = inst.program.to_source();
    if let Some(path) = out {
        fs::write(path, &src).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let query = format!("var {} degree {}", inst.query_var + 1, inst.degree);
    let json = json!({
        "mode": "harden",
        "variables": inst.program.n(),
        "query_var": inst.query_var + 1,
        "degree": inst.degree,
        "program": out.is_none().then(|| src.clone()),
    });
    let text = if out.is_some() { format!("{query}\n") } else { format!("# {query}\n{src}") };
    Ok(Report { code: 0, json, text })
}
