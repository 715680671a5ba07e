//! Subcommand implementations. Each returns its standard output text or an error
//! carrying the exit status.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use omt_core::arith::{parse_rational, Rational};
use omt_core::encoders::{encode_lgdp, encode_maxsmt, encode_pb, gen_jobshop, gen_strip_packing, LgdpModel, MaxSmtFile, PbFile};
use omt_core::omt::{certify, optimize, OmtConfig, OmtProblem, Schema, Strategy};
use thiserror::Error;

use crate::problem::{parse_problem, print_problem, ProblemFile};
use crate::report::{schema_name, strategy_name, RunReport, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    /// The command ran but its verdict is negative; the text is still printed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Failed(_) => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

pub fn load_problem(path: &Path) -> Result<ProblemFile, CliError> {
    parse_problem(&read(path)?).map_err(|e| CliError::Input(format!("{}:{}", path.display(), e)))
}

fn rational_flag(name: &str, v: &Option<String>) -> Result<Option<Rational>, CliError> {
    match v {
        None => Ok(None),
        Some(t) => parse_rational(t).map(Some).ok_or_else(|| CliError::Usage(format!("{} expects a rational, got `{}`", name, t))),
    }
}

pub fn config(schema: Schema, strategy: Strategy, seed: Option<u64>, timeout: Option<f64>) -> Result<OmtConfig, CliError> {
    if schema == Schema::Offline && strategy == Strategy::Adaptive {
        return Err(CliError::Usage("adaptive search is only available with the inline algorithm".into()));
    }
    let mut cfg = OmtConfig::new(schema, strategy);
    cfg.seed = seed;
    cfg.timeout = match timeout {
        Some(t) if !(t > 0.0 && t.is_finite()) => return Err(CliError::Usage(format!("--timeout must be positive, got {}", t))),
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    Ok(cfg)
}

pub struct SolveArgs {
    pub file: PathBuf,
    pub schema: Schema,
    pub strategy: Strategy,
    pub lower: Option<String>,
    pub upper: Option<String>,
    pub timeout: Option<f64>,
    pub seed: Option<u64>,
    pub stats: bool,
}

pub fn solve_problem(pf: &ProblemFile, cfg: &OmtConfig, stats: bool) -> Result<RunReport, CliError> {
    let p = pf.to_problem();
    let r = optimize(&p, cfg).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(RunReport::from_result(pf, cfg, &r, stats))
}

pub fn solve(a: &SolveArgs) -> Result<String, CliError> {
    let cfg = config(a.schema, a.strategy, a.seed, a.timeout)?;
    let lower = rational_flag("--lower-bound", &a.lower)?;
    let upper = rational_flag("--upper-bound", &a.upper)?;
    let mut pf = load_problem(&a.file)?;
    if lower.is_some() {
        pf.lower = lower;
    }
    if upper.is_some() {
        pf.upper = upper;
    }
    Ok(solve_problem(&pf, &cfg, a.stats)?.render())
}

pub fn certify_report(pf: &ProblemFile, report: &RunReport) -> Result<String, CliError> {
    if report.status != Status::Optimal {
        return Err(CliError::Usage(format!("only optimal reports can be certified, got status {}", report.status.as_str())));
    }
    let value = report.solver_value(pf).ok_or_else(|| CliError::Usage("optimal report without a finite objective".into()))?;
    let mut bounded = pf.clone();
    bounded.lower = report.lower.clone();
    bounded.upper = report.upper.clone();
    let p = bounded.to_problem();
    let c = certify::certify_value(&p, &value).map_err(|e| CliError::Input(e.to_string()))?;
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    let mut out = String::new();
    out += &format!("below: {} ({} must be unsatisfiable)\n", verdict(c.below.passed), c.below.query);
    out += &format!("attained: {} ({} must be satisfiable)\n", verdict(c.attained.passed), c.attained.query);
    out += &format!("certificate: {}\n", verdict(c.passed()));
    if c.passed() {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

pub fn certify_files(problem: &Path, report: &Path) -> Result<String, CliError> {
    let pf = load_problem(problem)?;
    let r = RunReport::parse(&read(report)?).map_err(|e| CliError::Input(format!("{}: {}", report.display(), e)))?;
    certify_report(&pf, &r)
}

pub const ALL_CONFIGS: [(Schema, Strategy); 5] = [
    (Schema::Offline, Strategy::Linear),
    (Schema::Offline, Strategy::Binary),
    (Schema::Inline, Strategy::Linear),
    (Schema::Inline, Strategy::Binary),
    (Schema::Inline, Strategy::Adaptive),
];

pub fn config_label(c: (Schema, Strategy)) -> String {
    format!("{}-{}", schema_name(c.0), strategy_name(c.1))
}

pub fn parse_config_label(s: &str) -> Option<(Schema, Strategy)> {
    ALL_CONFIGS.iter().copied().find(|c| config_label(*c) == s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub file: String,
    pub config: String,
    /// `optimal`, `unsat`, `unbounded`, `timeout` or `error`.
    pub status: String,
    pub objective: String,
    pub time_ms: u128,
    pub smt_calls: u64,
    pub minimize_calls: u64,
}

/// Files whose completed runs report more than one objective.
pub fn disagreements(rows: &[BenchRow]) -> Vec<String> {
    let mut seen: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for r in rows {
        if r.status == "timeout" || r.status == "error" {
            continue;
        }
        let v = seen.entry(&r.file).or_default();
        if !v.contains(&r.objective.as_str()) {
            v.push(&r.objective);
        }
    }
    seen.into_iter().filter(|(_, v)| v.len() > 1).map(|(f, _)| f.to_string()).collect()
}

pub struct BenchArgs {
    pub dir: PathBuf,
    pub jobs: usize,
    pub timeout: f64,
    pub configs: Vec<(Schema, Strategy)>,
}

fn bench_one(pf: &Result<ProblemFile, String>, file: &str, c: (Schema, Strategy), timeout: f64) -> BenchRow {
    let mut row = BenchRow {
        file: file.to_string(),
        config: config_label(c),
        status: "error".into(),
        objective: "none".into(),
        time_ms: 0,
        smt_calls: 0,
        minimize_calls: 0,
    };
    let pf = match pf {
        Ok(pf) => pf,
        Err(e) => {
            row.objective = e.clone();
            return row;
        }
    };
    let result = config(c.0, c.1, None, Some(timeout)).and_then(|cfg| solve_problem(pf, &cfg, true));
    match result {
        Ok(rep) => {
            row.status = rep.status.as_str().into();
            row.objective = rep.objective.render();
            let s = rep.stats.expect("stats requested");
            row.time_ms = s.time_ms;
            row.smt_calls = s.smt_calls;
            row.minimize_calls = s.minimize_calls;
        }
        Err(e) => row.objective = e.to_string(),
    }
    row
}

pub fn bench_rows(a: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let entries = std::fs::read_dir(&a.dir).map_err(|e| CliError::Input(format!("{}: {}", a.dir.display(), e)))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().map_or(false, |x| x == "omt"))
        .collect();
    files.sort();
    let parsed: Vec<(String, Result<ProblemFile, String>)> = files
        .iter()
        .map(|f| {
            let name = f.file_name().unwrap().to_string_lossy().into_owned();
            (name, load_problem(f).map_err(|e| e.to_string()))
        })
        .collect();
    let tasks: Vec<(usize, (Schema, Strategy))> = (0..parsed.len()).flat_map(|i| a.configs.iter().map(move |c| (i, *c))).collect();
    let next = AtomicUsize::new(0);
    let rows = Mutex::new(Vec::with_capacity(tasks.len()));
    std::thread::scope(|s| {
        for _ in 0..a.jobs.max(1).min(tasks.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(i, c)) = tasks.get(k) else { break };
                let row = bench_one(&parsed[i].1, &parsed[i].0, c, a.timeout);
                rows.lock().unwrap().push(row);
            });
        }
    });
    let mut rows = rows.into_inner().unwrap();
    let order = |c: &str| a.configs.iter().position(|x| config_label(*x) == c);
    rows.sort_by(|x, y| x.file.cmp(&y.file).then(order(&x.config).cmp(&order(&y.config))));
    Ok(rows)
}

pub fn render_bench(rows: &[BenchRow]) -> (String, bool) {
    let bad = disagreements(rows);
    let mut out = String::from("file\tconfig\tstatus\tobjective\ttime-ms\tsmt-calls\tminimize-calls\tagreement\n");
    for r in rows {
        let flag = if bad.contains(&r.file) { "DISAGREE" } else { "ok" };
        out += &format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.file, r.config, r.status, r.objective, r.time_ms, r.smt_calls, r.minimize_calls, flag
        );
    }
    let errors = rows.iter().filter(|r| r.status == "error").count();
    let timeouts = rows.iter().filter(|r| r.status == "timeout").count();
    out += &format!("runs: {}, timeouts: {}, errors: {}\n", rows.len(), timeouts, errors);
    if bad.is_empty() {
        out += "agreement: pass\n";
    } else {
        out += &format!("agreement: FAIL on {}\n", bad.join(", "));
    }
    (out, bad.is_empty())
}

pub fn bench(a: &BenchArgs) -> Result<String, CliError> {
    let rows = bench_rows(a)?;
    let (text, ok) = render_bench(&rows);
    if ok {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}

/// Description files are JSON; leading lines starting with `//` are comments.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read(path)?;
    let body: String = text.lines().skip_while(|l| l.trim_start().starts_with("//")).collect::<Vec<_>>().join("\n");
    serde_json::from_str(&body).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))
}

fn with_header(header: &[String], comment: &str, body: &str) -> String {
    let mut out = String::new();
    for h in header {
        out += &format!("{} {}\n", comment, h);
    }
    out + body
}

pub fn problem_text(header: &[String], p: &OmtProblem) -> String {
    with_header(header, ";", &print_problem(&ProblemFile::from_problem(p)))
}

fn lgdp_output(header: Vec<String>, m: &LgdpModel, lgdp_format: bool) -> Result<String, CliError> {
    if lgdp_format {
        let json = serde_json::to_string_pretty(m).expect("model serializes");
        Ok(with_header(&header, "//", &(json + "\n")))
    } else {
        let enc = encode_lgdp(m).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(problem_text(&header, &enc.problem))
    }
}

pub fn gen_strip(n: usize, height: &str, seed: u64, lgdp_format: bool) -> Result<String, CliError> {
    let h = parse_rational(height).filter(|h| *h > Rational::from_integer(0.into())).ok_or_else(|| CliError::Usage(format!("--height expects a positive rational, got `{}`", height)))?;
    let header = vec![
        format!("omt gen strip-packing --n {} --height {} --seed {}", n, height, seed),
        "canonical strip-packing disjunctive model: one left/right/below/above disjunction per rectangle pair".into(),
    ];
    lgdp_output(header, &gen_strip_packing(n, &h, seed), lgdp_format)
}

pub fn gen_jobshop_text(jobs: usize, stages: usize, seed: u64, lgdp_format: bool) -> Result<String, CliError> {
    if jobs == 0 || stages == 0 {
        return Err(CliError::Usage("--jobs and --stages must be at least 1".into()));
    }
    let header = vec![
        format!("omt gen jobshop --jobs {} --stages {} --seed {}", jobs, stages, seed),
        "canonical zero-wait job-shop disjunctive model: each job visits every machine once".into(),
    ];
    lgdp_output(header, &gen_jobshop(jobs, stages, seed), lgdp_format)
}

pub fn encode_pb_file(path: &Path) -> Result<String, CliError> {
    let f: PbFile = read_json(path)?;
    let o = f.to_objective().map_err(|e| CliError::Input(e.to_string()))?;
    let p = encode_pb(&o).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(problem_text(&[format!("omt gen encode-pb {}", path.display())], &p))
}

pub fn encode_maxsmt_file(path: &Path) -> Result<String, CliError> {
    let f: MaxSmtFile = read_json(path)?;
    let m = f.to_instance().map_err(|e| CliError::Input(e.to_string()))?;
    let enc = encode_maxsmt(&m).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(problem_text(&[format!("omt gen encode-maxsmt {}", path.display())], &enc.problem))
}

pub fn encode_lgdp_file(path: &Path) -> Result<String, CliError> {
    let m: LgdpModel = read_json(path)?;
    lgdp_output(vec![format!("omt gen encode-lgdp {}", path.display())], &m, false)
}
