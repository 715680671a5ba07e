//! Subcommands through the library entry point and the built binary.

use std::path::Path;
use std::process::Command;

use omt_cli::commands::{disagreements, render_bench, BenchRow};
use omt_cli::problem::{parse_problem, print_problem, ProblemFile};
use omt_cli::report::RunReport;
use omt_core::omt::{optimize, OmtConfig, Schema, Strategy};
use omt_testkit::gen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn omt(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["omt"];
    full.extend_from_slice(args);
    let code = omt_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const AT_LEAST_3: &str = "(declare-fun cost () Real)\n(assert (>= cost 3))\n(minimize cost)\n";
const STRICT: &str = "(declare-fun x () Real)(declare-fun A () Bool)\n(assert (or A (>= x 3)))(assert (=> A (> x 1)))\n(minimize x)\n";

#[test]
fn solve_reports_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.omt", AT_LEAST_3);
    let (code, out, _) = omt(&["solve", "--algorithm", "inline", "--search", "bin", &f]);
    assert_eq!(code, 0);
    assert!(out.starts_with("status: optimal\nobjective: 3/1\nalgorithm: inline\nsearch: bin\n"), "{}", out);
    assert!(out.contains("model.cost: 3/1\n"));
}

#[test]
fn solve_maximize_reports_in_file_direction() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "m.omt", "(declare-fun x () Real)(assert (<= x 3))(maximize x)");
    let (code, out, _) = omt(&["solve", &f]);
    assert_eq!(code, 0);
    assert!(out.contains("objective: 3/1\n"), "{}", out);
    assert!(out.contains("model.x: 3/1\n"));
    let unb = write(dir.path(), "u.omt", "(declare-fun x () Real)(assert (>= x 3))(maximize x)");
    let (code, out, _) = omt(&["solve", &unb]);
    assert_eq!(code, 0);
    assert!(out.contains("status: unbounded\nobjective: +inf\n"), "{}", out);
}

#[test]
fn solve_unsat_is_an_answer() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "u.omt", "(declare-fun x () Real)(assert (and (> x 1) (< x 0)))(minimize x)");
    let (code, out, _) = omt(&["solve", "--algorithm", "offline", &f]);
    assert_eq!(code, 0);
    assert!(out.starts_with("status: unsat\nobjective: +inf\n"), "{}", out);
}

#[test]
fn solve_rejects_offline_adaptive() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.omt", AT_LEAST_3);
    let (code, out, err) = omt(&["solve", "--algorithm", "offline", "--search", "ada", &f]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("usage error"));
}

#[test]
fn solve_parse_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.omt", "(declare-fun x () Real)\n(minimize y)\n");
    let (code, _, err) = omt(&["solve", &f]);
    assert_eq!(code, 1);
    assert!(err.contains(":2:11:") && err.contains("`y`"), "{}", err);
    let (code, _, _) = omt(&["solve", "--search", "fast", &f]);
    assert_eq!(code, 2);
    let (code, _, _) = omt(&["solve", &dir.path().join("missing.omt").to_string_lossy()]);
    assert_eq!(code, 1);
}

#[test]
fn solve_bound_flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.omt", "(declare-fun x () Real)(assert (>= x -5))(minimize x)(set-lower-bound -10)");
    let (_, out, _) = omt(&["solve", &f]);
    assert!(out.contains("objective: -5/1\n") && out.contains("lower-bound: -10/1\n"), "{}", out);
    let (_, out, _) = omt(&["solve", "--lower-bound", "-2", "--upper-bound", "7/2", &f]);
    assert!(out.contains("objective: -2/1\n") && out.contains("upper-bound: 7/2\n"), "{}", out);
    let (_, out, _) = omt(&["solve", "--upper-bound", "-6", &f]);
    assert!(out.contains("status: unsat\n"), "{}", out);
}

#[test]
fn same_input_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..20 {
        let p = gen::random_omt(&mut rng);
        let f = write(dir.path(), &format!("p{}.omt", i), &print_problem(&ProblemFile::from_problem(&p)));
        for search in ["lin", "bin", "ada"] {
            let args = ["solve", "--search", search, "--seed", "7", "--stats", &f];
            let untimed = |s: String| RunReport::parse(&s).unwrap().render_untimed();
            let (a, b) = (omt(&args), omt(&args));
            assert_eq!(a.0, 0);
            assert_eq!(untimed(a.1), untimed(b.1));
        }
    }
}

#[test]
fn printed_problems_reparse_identically() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for i in 0..150 {
        let p = if i % 3 == 0 { gen::random_euf_omt(&mut rng) } else { gen::random_omt(&mut rng) };
        let pf = ProblemFile::from_problem(&p);
        let text = print_problem(&pf);
        let back = parse_problem(&text).unwrap_or_else(|e| panic!("{}\n{}", e, text));
        assert_eq!(back, pf, "{}", text);
        assert_eq!(print_problem(&back), text);
        let q = back.to_problem();
        let cfg = OmtConfig::new(Schema::Inline, Strategy::Binary);
        assert_eq!(optimize(&q, &cfg).unwrap().outcome.ext(), optimize(&p, &cfg).unwrap().outcome.ext());
    }
}

#[test]
fn certify_accepts_optima_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("a.omt", AT_LEAST_3), ("s.omt", STRICT)] {
        let f = write(dir.path(), name, text);
        let (_, report, _) = omt(&["solve", &f]);
        let r = write(dir.path(), &format!("{}.report", name), &report);
        let (code, out, _) = omt(&["certify", &f, &r]);
        assert_eq!(code, 0, "{}", out);
        assert!(out.contains("below: pass") && out.contains("attained: pass"));
        let tampered = report.replace("objective: 3/1", "objective: 2/1").replace("objective: 1/1", "objective: 0/1");
        let t = write(dir.path(), &format!("{}.bad", name), &tampered);
        let (code, out, _) = omt(&["certify", &f, &t]);
        assert_eq!(code, 1);
        assert!(out.contains("attained: FAIL"), "{}", out);
    }
    let strict = dir.path().join("s.omt.report");
    assert!(std::fs::read_to_string(&strict).unwrap().contains("objective: 1/1 (strict)"));
}

#[test]
fn certify_requires_an_optimal_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "u.omt", "(declare-fun x () Real)(assert (< x 0))(assert (> x 0))(minimize x)");
    let (_, report, _) = omt(&["solve", &f]);
    let r = write(dir.path(), "u.report", &report);
    let (code, _, err) = omt(&["certify", &f, &r]);
    assert_eq!(code, 2);
    assert!(err.contains("unsat"));
    let junk = write(dir.path(), "junk.report", "hello");
    assert_eq!(omt(&["certify", &f, &junk]).0, 1);
}

#[test]
fn bench_runs_every_file_under_every_config() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.omt", AT_LEAST_3);
    write(dir.path(), "b.omt", STRICT);
    write(dir.path(), "c.omt", "(declare-fun x () Real)(assert (<= x 3))(maximize x)");
    write(dir.path(), "notes.txt", "ignored");
    let (code, out, _) = omt(&["bench", dir.path().to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(code, 0, "{}", out);
    let rows: Vec<&str> = out.lines().filter(|l| l.ends_with("\tok")).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows[0].starts_with("a.omt\toffline-lin\toptimal\t3/1\t"));
    assert!(rows[14].starts_with("c.omt\tinline-ada\t"));
    assert!(out.ends_with("agreement: pass\n"));
    let (code, out, _) = omt(&["bench", dir.path().to_str().unwrap(), "--configs", "inline-bin,offline-lin"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.ends_with("\tok")).count(), 6);
    assert_eq!(omt(&["bench", dir.path().to_str().unwrap(), "--configs", "offline-ada"]).0, 2);
}

#[test]
fn bench_on_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = omt(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.contains("runs: 0"));
}

#[test]
fn bench_flags_disagreeing_configs() {
    let row = |file: &str, config: &str, obj: &str, status: &str| BenchRow {
        file: file.into(),
        config: config.into(),
        status: status.into(),
        objective: obj.into(),
        time_ms: 0,
        smt_calls: 1,
        minimize_calls: 1,
    };
    let rows = vec![
        row("a.omt", "inline-lin", "3/1", "optimal"),
        row("a.omt", "inline-bin", "5/2", "optimal"),
        row("b.omt", "inline-lin", "1/1", "optimal"),
        row("b.omt", "inline-bin", "none", "timeout"),
    ];
    assert_eq!(disagreements(&rows), vec!["a.omt".to_string()]);
    let (text, ok) = render_bench(&rows);
    assert!(!ok);
    assert!(text.contains("a.omt\tinline-bin\toptimal\t5/2\t0\t1\t1\tDISAGREE\n"));
    assert!(text.contains("b.omt\tinline-bin\ttimeout\tnone\t0\t1\t1\tok\n"));
    assert!(text.ends_with("agreement: FAIL on a.omt\n"));
}

#[test]
fn generators_are_deterministic_and_solvable() {
    let strip = ["gen", "strip-packing", "--n", "3", "--height", "3", "--seed", "5"];
    let (code, a, _) = omt(&strip);
    assert_eq!(code, 0);
    assert_eq!(a, omt(&strip).1);
    assert!(a.starts_with("; omt gen strip-packing --n 3 --height 3 --seed 5\n"));
    assert_ne!(a, omt(&["gen", "strip-packing", "--n", "3", "--height", "3", "--seed", "6"]).1);
    assert!(parse_problem(&a).is_ok());

    let dir = tempfile::tempdir().unwrap();
    let (code, json, _) = omt(&["gen", "jobshop", "--jobs", "2", "--stages", "2", "--seed", "1", "--format", "lgdp"]);
    assert_eq!(code, 0);
    assert!(json.starts_with("// omt gen jobshop --jobs 2 --stages 2 --seed 1\n"));
    let jf = write(dir.path(), "j.json", &json);
    let (code, encoded, _) = omt(&["gen", "encode-lgdp", &jf]);
    assert_eq!(code, 0);
    let (_, direct, _) = omt(&["gen", "jobshop", "--jobs", "2", "--stages", "2", "--seed", "1"]);
    let body = |s: &str| s.lines().filter(|l| !l.starts_with(';')).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&encoded), body(&direct));
    assert_eq!(omt(&["gen", "jobshop", "--jobs", "0", "--stages", "2"]).0, 2);
    assert_eq!(omt(&["gen", "strip-packing", "--n", "2", "--height", "abc"]).0, 2);
}

#[test]
fn encoders_from_description_files() {
    let dir = tempfile::tempdir().unwrap();
    let pb = write(dir.path(), "pb.json", r#"{"terms": [["X1", "3"], ["X2", "2"], ["X3", "5/2"]], "clauses": [["X1", "X2"], ["X2", "X3"], ["-X2", "X1"]]}"#);
    let (code, text, _) = omt(&["gen", "encode-pb", &pb]);
    assert_eq!(code, 0, "{}", text);
    let f = write(dir.path(), "pb.omt", &text);
    assert!(omt(&["solve", &f]).1.contains("objective: 5/1\n"));

    let ms = write(
        dir.path(),
        "ms.json",
        "// two soft clauses, one must break\n{\"hard\": [[\"-A\", \"-B\"]], \"soft\": [{\"clause\": [\"A\"], \"weight\": \"2\"}, {\"clause\": [\"B\"], \"weight\": \"3\"}]}",
    );
    let (code, text, _) = omt(&["gen", "encode-maxsmt", &ms]);
    assert_eq!(code, 0, "{}", text);
    let f = write(dir.path(), "ms.omt", &text);
    assert!(omt(&["solve", "--search", "bin", &f]).1.contains("objective: 2/1\n"));

    let bad = write(dir.path(), "bad.json", "{\"terms\": [[\"X\", \"two\"]]}");
    assert_eq!(omt(&["gen", "encode-pb", &bad]).0, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_omt");
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.omt", AT_LEAST_3);
    let out = Command::new(bin).args(["solve", &f]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("objective: 3/1"));
    let out = Command::new(bin).args(["solve", "--algorithm", "offline", "--search", "ada", &f]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
