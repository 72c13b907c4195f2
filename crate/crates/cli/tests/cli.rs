use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/scenarios").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circstab"))
        .args(args)
        .env_remove("CIRCSTAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn stability_scenarios() {
    let sum = scenario("sum_z1_z2.json");
    let out = run(&["stability", "--poly", &sum, "--domain", "halfplane:0", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no zero found"));
    let diff = scenario("diff_z1_z2.json");
    let out = run(&["stability", "--poly", &diff, "--domain", "halfplane:0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("certified zero"));
}

#[test]
fn lee_yang_scenarios() {
    let out = run(&["lee-yang", "--system", &scenario("ferromagnet.json"), "--tol", "1e-8", "--exterior"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("max | |root| - 1 |"));
    assert_eq!(code(&["lee-yang", "--system", &scenario("antiferromagnet.json")]), 1);
}

#[test]
fn classify_scenarios() {
    let out = run(&["classify", "--op", &scenario("asano.json"), "--domain", "disc"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("z1*z3*w1*w2*w3 + z1*w1*w2 + z3*w3 + 1"));
    assert_eq!(code(&["classify", "--op", &scenario("rotation.json"), "--domain", "halfplane:0"]), 1);
    assert_eq!(code(&["classify", "--builtin", "edge:1,2,0.7", "--kappa", "1,1", "--domain", "halfplane:1.5707963267948966"]), 0);
    assert_eq!(code(&["classify", "--builtin", "derivative:1", "--kappa", "2", "--domain", "halfplane:0", "--ladder"]), 0);
}

#[test]
fn graph_circle_and_compose_scenarios() {
    assert_eq!(code(&["matching", "--graph", &scenario("graph.json")]), 0);
    assert_eq!(code(&["circle", "--couplings", &scenario("circle.json")]), 0);
    let f = scenario("compose_f.json");
    let out = run(&["compose", "--f", &f, "--g", &f, "--kappa", "1", "--domain", "halfplane:0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("z1 + w1 + 2i"));
}

#[test]
fn apolarity_scenario() {
    let out = run(&[
        "apolarity", "--f", &scenario("grace_f.json"), "--g", &scenario("grace_g.json"), "--kappa", "2", "--domain", "disc",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("14.35"));
}

#[test]
fn input_errors_exit_with_two() {
    let out = run(&["stability", "--poly", &scenario("malformed.json"), "--domain", "disc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2 column"));
    let out = run(&["classify", "--builtin", "identity", "--kappa", "64,64,64,64,64", "--domain", "disc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
    assert_eq!(code(&["stability", "--poly", &scenario("sum_z1_z2.json")]), 2);
    assert_eq!(code(&["stability", "--poly", &scenario("sum_z1_z2.json"), "--domain", "annulus"]), 2);
    assert_eq!(code(&["lee-yang", "--system", &scenario("ferromagnet.json"), "--tol", "-1"]), 2);
    assert_eq!(code(&["stability", "--poly", "/nonexistent.json", "--domain", "disc"]), 2);
    assert_eq!(code(&[]), 2);
}

#[test]
fn json_artifacts_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec!["stability", "--poly", &scenario("diff_z1_z2.json"), "--domain", "disc:0.5,0,2", "--seed", "3"],
        vec!["apolarity", "--campaign", "disc", "--pairs", "20", "--seed", "5"],
        vec!["lee-yang", "--system", &scenario("ferromagnet.json"), "--exterior", "--slices", "50"],
    ]
    .map(|v| v.into_iter().map(str::to_string).collect::<Vec<_>>());
    for (k, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{k}-{rep}.json"));
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            let p = path.display().to_string();
            a.extend(["--json", &p]);
            run(&a);
            texts.push(fs::read(&path).unwrap());
        }
        assert!(!texts[0].is_empty());
        assert_eq!(texts[0], texts[1], "run {k}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let poly = scenario("diff_z1_z2.json");
    let mut outputs = Vec::new();
    for (env, flag) in [(Some("9"), None), (None, Some("9")), (None, Some("10"))] {
        let path = dir.path().join("out.json").display().to_string();
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_circstab"));
        cmd.args(["stability", "--poly", &poly, "--domain", "disc", "--json", &path]).env_remove("CIRCSTAB_SEED");
        if let Some(e) = env {
            cmd.env("CIRCSTAB_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        cmd.output().unwrap();
        outputs.push(fs::read_to_string(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[1], outputs[2]);
}

#[test]
fn csv_zero_lists() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    let p = path.display().to_string();
    assert_eq!(code(&["lee-yang", "--system", &scenario("ferromagnet.json"), "--csv", &p]), 0);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,modulus"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert!((r[2] - 1.0).abs() < 1e-8);
        assert!((r[0].hypot(r[1]) - r[2]).abs() < 1e-15);
    }
}

#[test]
fn help_documents_every_flag() {
    let text = stdout(&run(&["stability", "--help"]));
    for flag in ["--poly", "--domain", "--seed", "--slices", "--json", "--csv", "CIRCSTAB_SEED"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
    let top = stdout(&run(&["--help"]));
    for sub in ["stability", "symbol", "classify", "moebius", "compose", "apolarity", "lee-yang", "matching", "circle"] {
        assert!(top.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn symbol_and_moebius_commands() {
    let out = run(&["symbol", "--builtin", "map", "--kappa", "2,2", "--kind", "transcendental-plus", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("z1*z2*w1*w2 + z1*w1 + z2*w2 + 1"));
    let out = run(&["moebius", "--from", "disc", "--to", "halfplane:0", "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("-> 0.000000000000+1.000000000000i"));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json").display().to_string();
    let sum = scenario("sum_z1_z2.json");
    assert_eq!(code(&["moebius", "--from", "disc", "--to", "halfplane:0", "--poly", &sum, "--json", &p]), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(json["transported"]["nvars"], 2);
}
