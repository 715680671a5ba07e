//! Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use omt_cli::commands::{certify_report, solve_problem, CliError};
use omt_cli::problem::{parse_problem, print_problem, ProblemFile};
use omt_cli::report::ObjValue;
use omt_core::arith::{concretization_epsilon, int, rat, DeltaRational, Rational};
use omt_core::ast::{Formula, LinAtom};
use omt_core::encoders::{
    encode_lgdp, encode_maxsmt, encode_pb, gen_jobshop_jobs, gen_strip_rects, jobshop_model, pb_to_maxsmt, strip_packing_model,
};
use omt_core::euf::EGraph;
use omt_core::lra::{LraSolver, MinResult};
use omt_core::omt::dtc::mincost_of_assignment;
use omt_core::omt::{normalize_strict, omt_dtc, optimize, smt_check, Ext, OmtConfig, OmtProblem, Outcome, Schema, SmtOutcome, Strategy};
use omt_core::sat::{Lit, SatSolver, SolveResult};
use omt_testkit::{gen, oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn configs() -> Vec<OmtConfig> {
    [
        (Schema::Offline, Strategy::Linear),
        (Schema::Offline, Strategy::Binary),
        (Schema::Inline, Strategy::Linear),
        (Schema::Inline, Strategy::Binary),
        (Schema::Inline, Strategy::Adaptive),
    ]
    .into_iter()
    .map(|(s, t)| OmtConfig::new(s, t))
    .collect()
}

fn label(c: &OmtConfig) -> String {
    format!("{:?}/{:?}", c.schema, c.strategy)
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    if start.elapsed() > budget {
        return Err(format!("{} took {:.1?}, budget {:?}", what, start.elapsed(), budget));
    }
    Ok(())
}

/// Problems with a finite optimum, collected for the certification criterion.
#[derive(Default)]
struct Optima {
    problems: Vec<OmtProblem>,
}

fn oracle_equivalence(optima: &mut Optima) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let (mut finite, mut strict, mut infinite) = (0, 0, 0);
    for i in 0..500 {
        let p = gen::random_omt(&mut rng);
        let want = oracle::omt_oracle(&p);
        for cfg in configs() {
            let got = optimize(&p, &cfg).map_err(|e| format!("instance {}: {}", i, e))?.outcome.ext();
            if got != Some(want.clone()) {
                return Err(format!("instance {} under {}: got {:?}, oracle {:?}", i, label(&cfg), got, want));
            }
        }
        match &want {
            Ext::Finite(v) => {
                finite += 1;
                if !v.delta.is_zero() {
                    strict += 1;
                }
                optima.problems.push(p);
            }
            _ => infinite += 1,
        }
    }
    within(start, Duration::from_secs(300), "oracle equivalence")?;
    Ok(format!("500 instances x 5 configs ({} finite, {} strict, {} infinite) in {:.1?}", finite, strict, infinite, start.elapsed()))
}

fn dtc_correctness(optima: &mut Optima) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut finite = 0;
    for i in 0..200 {
        let p = gen::random_euf_omt(&mut rng);
        let want = oracle::dtc_oracle(&p);
        for strategy in [Strategy::Linear, Strategy::Binary, Strategy::Adaptive] {
            let got = omt_dtc(&p, strategy).map_err(|e| format!("instance {}: {}", i, e))?.outcome.ext();
            if got != Some(want.clone()) {
                return Err(format!("instance {} under {:?}: got {:?}, oracle {:?}", i, strategy, got, want));
            }
        }
        if matches!(want, Ext::Finite(_)) {
            finite += 1;
            optima.problems.push(p);
        }
    }
    for i in 0..200 {
        let mu = gen::random_edi(&mut rng);
        let want = oracle::dispatch_oracle(&mu, gen::COST);
        let got = mincost_of_assignment(&mu, gen::COST);
        if got != want {
            return Err(format!("assignment {}: got {:?}, dispatch table {:?}", i, got, want));
        }
    }
    within(start, Duration::from_secs(300), "combination")?;
    Ok(format!("200 instances x 3 strategies ({} finite), 200 assignments in {:.1?}", finite, start.elapsed()))
}

fn certification(optima: &Optima) -> Verdict {
    let start = Instant::now();
    let cfg = OmtConfig::new(Schema::Inline, Strategy::Linear);
    let seventh = rat(1, 7);
    let (mut strict, mut mutants) = (0, 0);
    for (i, p) in optima.problems.iter().enumerate() {
        let text = print_problem(&ProblemFile::from_problem(p));
        let pf = parse_problem(&text).map_err(|e| format!("optimum {}: {}", i, e))?;
        let report = solve_problem(&pf, &cfg, false).map_err(|e| format!("optimum {}: {}", i, e))?;
        let ObjValue::Finite(v, is_strict) = &report.objective else {
            return Err(format!("optimum {}: report has no finite objective", i));
        };
        strict += *is_strict as usize;
        certify_report(&pf, &report).map_err(|e| format!("optimum {} ({}) not certified: {}", i, report.objective.render(), e))?;
        for delta in [seventh.clone(), -seventh.clone()] {
            let mut bad = report.clone();
            bad.objective = ObjValue::Finite(v + &delta, *is_strict);
            match certify_report(&pf, &bad) {
                Err(CliError::Failed(_)) => mutants += 1,
                other => return Err(format!("optimum {}: value {} + {} was not rejected: {:?}", i, v, delta, other)),
            }
        }
    }
    if strict == 0 {
        return Err("no strict optimum exercised".into());
    }
    within(start, Duration::from_secs(120), "certification")?;
    Ok(format!("{} optima certified ({} strict), {}/{} mutants rejected in {:.1?}", optima.problems.len(), strict, mutants, mutants, start.elapsed()))
}

fn extremes() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    for (kind, want) in [("unsat", Ext::PosInf), ("unbounded", Ext::NegInf)] {
        for i in 0..50 {
            let p = if kind == "unsat" { gen::unsat_instance(&mut rng) } else { gen::unbounded_instance(&mut rng) };
            for cfg in configs() {
                let got = optimize(&p, &cfg).map_err(|e| e.to_string())?.outcome.ext();
                if got != Some(want.clone()) {
                    return Err(format!("{} instance {} under {}: got {:?}", kind, i, label(&cfg), got));
                }
            }
        }
    }
    within(start, Duration::from_secs(60), "extremes")?;
    Ok(format!("50 unsat + 50 unbounded x 5 configs in {:.1?}", start.elapsed()))
}

fn exact_optimum(p: &OmtProblem) -> Result<Option<Rational>, String> {
    match optimize(p, &OmtConfig::new(Schema::Inline, Strategy::Binary)).map_err(|e| e.to_string())?.outcome {
        Outcome::Optimum { value, .. } if value.delta.is_zero() => Ok(Some(value.real)),
        Outcome::Unsat => Ok(None),
        other => Err(format!("unexpected outcome {:?}", other)),
    }
}

fn encoder_semantics() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    for i in 0..200 {
        let o = gen::random_pb(&mut rng, false);
        let got = exact_optimum(&encode_pb(&o).map_err(|e| e.to_string())?)?;
        if got != oracle::pb_brute(&o) {
            return Err(format!("pb instance {}: got {:?}, brute force {:?}", i, got, oracle::pb_brute(&o)));
        }
    }
    for i in 0..200 {
        let m = gen::random_maxsmt(&mut rng);
        let got = exact_optimum(&encode_maxsmt(&m).map_err(|e| e.to_string())?.problem)?;
        if got != oracle::maxsmt_brute(&m) {
            return Err(format!("maxsmt instance {}: got {:?}, brute force {:?}", i, got, oracle::maxsmt_brute(&m)));
        }
    }
    for i in 0..200 {
        let o = gen::random_pb(&mut rng, true);
        let direct = exact_optimum(&encode_pb(&o).map_err(|e| e.to_string())?)?;
        let back = encode_maxsmt(&pb_to_maxsmt(&o).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let via = exact_optimum(&back.problem)?;
        if direct != via || direct != oracle::pb_brute(&o) {
            return Err(format!("round trip {}: direct {:?}, via soft clauses {:?}", i, direct, via));
        }
    }
    within(start, Duration::from_secs(120), "encoders")?;
    Ok(format!("200 pb + 200 maxsmt + 200 round trips in {:.1?}", start.elapsed()))
}

fn as_i64(r: &Rational) -> i64 {
    r.to_integer().to_i64().unwrap()
}

fn lgdp_desk_scale() -> Verdict {
    let start = Instant::now();
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    let mut timed = |f: &mut dyn FnMut() -> Result<(), String>| -> Result<(), String> {
        let t = Instant::now();
        f()?;
        slowest = slowest.max(t.elapsed());
        count += 1;
        if t.elapsed() > Duration::from_secs(10) {
            return Err(format!("instance took {:.1?}", t.elapsed()));
        }
        Ok(())
    };
    for n in 1..=4 {
        for seed in 0..4 {
            let height = int(3);
            let rects = gen_strip_rects(n, &height, seed);
            timed(&mut || {
                let enc = encode_lgdp(&strip_packing_model(&rects, &height)).map_err(|e| e.to_string())?;
                let want = oracle::strip_brute(&rects.iter().map(|(w, h)| (as_i64(w), as_i64(h))).collect::<Vec<_>>(), 3);
                let got = optimize(&enc.problem, &OmtConfig::new(Schema::Inline, Strategy::Binary)).map_err(|e| e.to_string())?.outcome;
                if got.ext() != Some(Ext::Finite(DeltaRational::from_rational(int(want)))) {
                    return Err(format!("strip n={} seed={}: got {:?}, placer {}", n, seed, got.ext(), want));
                }
                if let Outcome::Optimum { model, .. } = &got {
                    if enc.decode(model).chosen.iter().any(|c| c.len() != 1) {
                        return Err(format!("strip n={} seed={}: not exactly one disjunct per pair", n, seed));
                    }
                }
                Ok(())
            })?;
        }
    }
    for jobs in 1..=3 {
        for machines in 1..=2 {
            for seed in 0..3 {
                let js = gen_jobshop_jobs(jobs, machines, seed);
                timed(&mut || {
                    let enc = encode_lgdp(&jobshop_model(&js)).map_err(|e| e.to_string())?;
                    let ints: Vec<Vec<(usize, i64)>> = js.iter().map(|j| j.iter().map(|(m, d)| (*m, as_i64(d))).collect()).collect();
                    let want = oracle::jobshop_brute(&ints);
                    let got = optimize(&enc.problem, &OmtConfig::new(Schema::Inline, Strategy::Linear)).map_err(|e| e.to_string())?.outcome.ext();
                    if got != Some(Ext::Finite(DeltaRational::from_rational(int(want)))) {
                        return Err(format!("jobshop {}x{} seed={}: got {:?}, ordering search {}", jobs, machines, seed, got, want));
                    }
                    Ok(())
                })?;
            }
        }
    }
    Ok(format!("{} instances, slowest {:.1?}, total {:.1?}", count, slowest, start.elapsed()))
}

fn lra_minimum(lits: &[(LinAtom, bool)]) -> Ext {
    let mut s = LraSolver::new();
    s.var(gen::COST);
    for (i, (a, pos)) in lits.iter().enumerate() {
        if s.assert_atom(a, *pos, Lit::pos(i as u32 + 1)).is_err() {
            return Ext::PosInf;
        }
    }
    if s.check().is_err() {
        return Ext::PosInf;
    }
    match s.minimize(gen::COST).unwrap() {
        MinResult::Unbounded => Ext::NegInf,
        MinResult::Minimum { value, .. } => Ext::Finite(normalize_strict(value)),
    }
}

fn component_suites() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    for i in 0..1000 {
        let n = rng.gen_range(1..=15);
        let clauses = gen::random_cnf(&mut rng, n);
        let mut s = SatSolver::new();
        s.ensure_vars(n);
        for c in &clauses {
            s.add_clause(&c.iter().map(|&l| Lit::from_dimacs(l as i64)).collect::<Vec<_>>());
        }
        let want = oracle::brute_sat(n, &clauses).is_some();
        let got = match s.solve(&[]) {
            SolveResult::Sat => {
                let m = s.model();
                if !clauses.iter().all(|c| c.iter().any(|&l| m[l.unsigned_abs() as usize - 1] == (l > 0))) {
                    return Err(format!("cnf {}: model violates a clause", i));
                }
                true
            }
            SolveResult::Unsat(_) => false,
            other => return Err(format!("cnf {}: {:?}", i, other)),
        };
        if got != want {
            return Err(format!("cnf {}: solver {}, enumeration {}", i, got, want));
        }
    }
    for i in 0..500 {
        let lits = gen::random_lp(&mut rng, false);
        let (got, want) = (lra_minimum(&lits), oracle::lp_min(&lits, gen::COST));
        if got != want {
            return Err(format!("lp {}: simplex {:?}, vertices {:?}", i, got, want));
        }
    }
    for i in 0..200 {
        let lits = gen::random_euf_literals(&mut rng);
        let phi = Formula::and(lits.iter().map(|(l, r, p)| gen::euf_literal(l, r, *p)).collect());
        let mut g = EGraph::new();
        let mut consistent = true;
        for (k, (l, r, p)) in lits.iter().enumerate() {
            if g.assert_terms(l, r, *p, Lit::pos(k as u32 + 1)).map_err(|e| e.to_string())?.is_err() {
                consistent = false;
                break;
            }
        }
        if consistent != oracle::euf_formula_sat(&phi) {
            return Err(format!("euf literal set {}: congruence closure says {}", i, consistent));
        }
        let f = gen::random_euf_formula(&mut rng);
        let got = match smt_check(&f).map_err(|e| e.to_string())? {
            SmtOutcome::Sat(_) => true,
            SmtOutcome::Unsat => false,
            SmtOutcome::Unknown => return Err(format!("euf formula {}: unknown", i)),
        };
        if got != oracle::euf_formula_sat(&f) {
            return Err(format!("euf formula {}: solver says {}", i, got));
        }
    }
    for i in 0..10_000 {
        let vals = gen::random_delta_set(&mut rng);
        let eps = concretization_epsilon(&vals);
        let conc: Vec<Rational> = vals.iter().map(|v| v.concretize(&eps)).collect();
        for a in 0..vals.len() {
            for b in 0..vals.len() {
                if vals[a].cmp(&vals[b]) != conc[a].cmp(&conc[b]) {
                    return Err(format!("delta set {}: order of {} and {} changed", i, vals[a], vals[b]));
                }
            }
        }
    }
    within(start, Duration::from_secs(600), "component suites")?;
    Ok(format!("1000 cnf, 500 lp, 200+200 euf, 10000 delta sets in {:.1?}", start.elapsed()))
}

fn write_corpus(dir: &Path) -> Result<usize, String> {
    let bin = env!("CARGO_BIN_EXE_omt");
    let mut files = 0;
    let mut emit = |name: String, text: String| -> Result<(), String> {
        std::fs::write(dir.join(name), text).map_err(|e| e.to_string())?;
        files += 1;
        Ok(())
    };
    let gen_cmd = |args: &[&str]| -> Result<String, String> {
        let out = Command::new(bin).arg("gen").args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("omt gen {:?} failed: {}", args, String::from_utf8_lossy(&out.stderr)));
        }
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    };
    for n in 1..=4 {
        for seed in 0..3 {
            let (n, seed) = (n.to_string(), seed.to_string());
            emit(format!("strip_{}_{}.omt", n, seed), gen_cmd(&["strip-packing", "--n", &n, "--height", "3", "--seed", &seed])?)?;
        }
    }
    for jobs in 1..=3 {
        for stages in 1..=2 {
            let (j, s) = (jobs.to_string(), stages.to_string());
            emit(format!("jobshop_{}_{}.omt", j, s), gen_cmd(&["jobshop", "--jobs", &j, "--stages", &s, "--seed", "0"])?)?;
            let json = gen_cmd(&["jobshop", "--jobs", &j, "--stages", &s, "--seed", "1", "--format", "lgdp"])?;
            let path = dir.join(format!("jobshop_{}_{}.json", j, s));
            std::fs::write(&path, json).map_err(|e| e.to_string())?;
            emit(format!("jobshop_lgdp_{}_{}.omt", j, s), gen_cmd(&["encode-lgdp", path.to_str().unwrap()])?)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    for k in 0..8 {
        let atoms: Vec<String> = (0..rng.gen_range(2..=5)).map(|i| format!("X{}", i)).collect();
        let lit = |rng: &mut ChaCha8Rng| format!("{}{}", if rng.gen_bool(0.4) { "-" } else { "" }, atoms[rng.gen_range(0..atoms.len())]);
        let clause = |rng: &mut ChaCha8Rng| format!("[{}]", (0..rng.gen_range(1..=3)).map(|_| format!("\"{}\"", lit(rng))).collect::<Vec<_>>().join(", "));
        let terms: Vec<String> = atoms.iter().map(|a| format!("[\"{}\", \"{}/{}\"]", a, rng.gen_range(-5..=9), rng.gen_range(1..=3))).collect();
        let clauses: Vec<String> = (0..rng.gen_range(1..=5)).map(|_| clause(&mut rng)).collect();
        let pb = dir.join(format!("pb_{}.json", k));
        std::fs::write(&pb, format!("{{\"terms\": [{}], \"clauses\": [{}]}}", terms.join(", "), clauses.join(", "))).map_err(|e| e.to_string())?;
        emit(format!("pb_{}.omt", k), gen_cmd(&["encode-pb", pb.to_str().unwrap()])?)?;
        let hard: Vec<String> = (0..rng.gen_range(0..=3)).map(|_| clause(&mut rng)).collect();
        let soft: Vec<String> = (0..rng.gen_range(1..=5)).map(|_| format!("{{\"clause\": {}, \"weight\": \"{}\"}}", clause(&mut rng), rng.gen_range(1..=9))).collect();
        let ms = dir.join(format!("maxsmt_{}.json", k));
        std::fs::write(&ms, format!("{{\"hard\": [{}], \"soft\": [{}]}}", hard.join(", "), soft.join(", "))).map_err(|e| e.to_string())?;
        emit(format!("maxsmt_{}.omt", k), gen_cmd(&["encode-maxsmt", ms.to_str().unwrap()])?)?;
    }
    let text = |p: &OmtProblem| print_problem(&ProblemFile::from_problem(p));
    for k in 0..30 {
        emit(format!("lra_{:02}.omt", k), text(&gen::random_omt(&mut rng)))?;
    }
    for k in 0..15 {
        emit(format!("euf_{:02}.omt", k), text(&gen::random_euf_omt(&mut rng)))?;
    }
    for k in 0..5 {
        emit(format!("unsat_{}.omt", k), text(&gen::unsat_instance(&mut rng)))?;
        emit(format!("unbounded_{}.omt", k), text(&gen::unbounded_instance(&mut rng)))?;
    }
    Ok(files)
}

fn bench_agreement() -> Verdict {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let files = write_corpus(dir.path())?;
    let out = Command::new(env!("CARGO_BIN_EXE_omt"))
        .args(["bench", dir.path().to_str().unwrap(), "--jobs", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rows = stdout.lines().skip(1).filter(|l| l.split('\t').count() == 8).count();
    if !out.status.success() {
        let bad: Vec<&str> = stdout.lines().filter(|l| l.ends_with("DISAGREE") || l.starts_with("agreement")).collect();
        return Err(format!("bench exited with {:?}: {}", out.status.code(), bad.join(" | ")));
    }
    if rows != files * 5 {
        return Err(format!("expected {} rows, got {}", files * 5, rows));
    }
    let summary = stdout.lines().find(|l| l.starts_with("runs:")).unwrap_or("");
    if !summary.ends_with("errors: 0") {
        let rows: Vec<&str> = stdout.lines().filter(|l| l.split('\t').nth(2) == Some("error")).collect();
        return Err(format!("bench reported errors: {}: {}", summary, rows.join(" | ")));
    }
    Ok(format!("{} files x 5 configs, {}, agreement pass in {:.1?}", files, summary, start.elapsed()))
}

fn main() {
    let mut optima = Optima::default();
    let results: Vec<(&str, Verdict)> = vec![
        ("oracle equivalence", oracle_equivalence(&mut optima)),
        ("combination with uninterpreted functions", dtc_correctness(&mut optima)),
        ("certification", certification(&optima)),
        ("unsat and unbounded extremes", extremes()),
        ("encoder semantics", encoder_semantics()),
        ("disjunctive programs at desk scale", lgdp_desk_scale()),
        ("component suites", component_suites()),
        ("configuration agreement over the corpus", bench_agreement()),
    ];
    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        match v {
            Ok(detail) => println!("criterion {} ({}): PASS: {}", i + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({}): FAIL: {}", i + 1, name, why);
            }
        }
    }
    if failed > 0 {
        println!("{} of {} criteria failed", failed, results.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
