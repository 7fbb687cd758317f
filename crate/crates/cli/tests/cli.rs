use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn secant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("secant-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn acceptance(name: &str) -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../acceptance/").to_string() + name
}

#[test]
fn betti_smoke() {
    let o = secant(&["betti", "--curve", "fermat-quartic-101", "--L", "H*2", "--pmax", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("L = 2*H"));
    // K_{1,1}(H, 2H) row on the quartic: 0 7 8.
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["1", "0", "7", "8"]), "{out}");
}

#[test]
fn betti_csv_and_json() {
    let o = secant(&["betti", "--L", "H", "--pmax", "1", "--qmin", "3", "--qmax", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "q,p=0,p=1\n3,0,1\n");
    let o = secant(&["--format", "json", "betti", "--L", "H", "--pmax", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["curve"], "fermat-quartic-101");
    assert!(v["cells"].as_array().unwrap().len() == 4);
}

#[test]
fn unknown_curve_names_catalog() {
    let o = secant(&["betti", "--curve", "no-such-curve", "--L", "H"]);
    assert_eq!(code(&o), 4);
    let err = stderr(&o);
    assert!(err.contains("no-such-curve") && err.contains("curves.toml"), "{err}");

    let path = scratch("catalog.toml");
    fs::write(&path, "").unwrap();
    let o = secant(&["--catalog", path.to_str().unwrap(), "--curve", "fermat-quartic-101", "points"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("catalog.toml"));
}

#[test]
fn malformed_divisor_is_usage_error() {
    let o = secant(&["betti", "--L", "2*H +", "--pmax", "1"]);
    assert_eq!(code(&o), 2);
    let o = secant(&["rr", "--D", "P(1,2)"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn point_off_curve_is_data_error() {
    let o = secant(&["rr", "--D", "P(1,1,1)"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&secant(&[])), 2);
    assert_eq!(code(&secant(&["betti"])), 2);
    assert_eq!(code(&secant(&["betti", "--L", "H", "--format", "xml"])), 2);
}

#[test]
fn size_cap_exits_three() {
    let o = secant(&["betti", "--L", "3*H", "--pmax", "3", "--cap-entries", "10"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("skipped"));
}

#[test]
fn rr_reports_riemann_roch() {
    let o = secant(&["--format", "json", "rr", "--D", "2*H"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["h0"], 6);
    assert_eq!(v["h1"], 0);
    assert_eq!(v["degree"], 8);
}

#[test]
fn catalog_lists_shipped_curves() {
    let o = secant(&["catalog", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for name in ["fermat-quartic-101", "fermat-quartic-1009", "fermat-sextic-1009", "random-quartic-1009", "random-sextic-1009"] {
        assert!(out.contains(name), "{name}");
    }
    let o = secant(&["catalog", "--show", "--curve", "fermat-sextic-1009"]);
    assert!(stdout(&o).contains("genus 10"));
}

#[test]
fn points_lie_on_curve() {
    let o = secant(&["--format", "json", "points", "--count", "5", "--curve", "fermat-quartic-101"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 5);
    for p in pts {
        let coords: Vec<u64> =
            p.as_str().unwrap().trim_matches(|c| c == '(' || c == ')').split(':').map(|s| s.parse().unwrap()).collect();
        let s: u64 = coords.iter().map(|c| c.pow(4) % 101).sum();
        assert_eq!(s % 101, 0, "{p}");
    }
}

#[test]
fn probe_and_np() {
    let o = secant(&["--format", "json", "probe", "--L", "2*H", "--k", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["verdict"], "CERTIFIED_SUCCESS");
    // Four collinear points: the canonical quartic is not 3-very ample.
    let o = secant(&["--format", "json", "probe", "--L", "H", "--k", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["verdict"], "CERTIFIED_FAILURE");

    let o = secant(&["np", "--L", "2*H", "--p", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("HOLDS"));
}

#[test]
fn check_c2_fiber_config() {
    let out = scratch("c2.json");
    let o = secant(&["check", &acceptance("c2_fiber_g10_p6.toml"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 10);
    assert!(recs.iter().all(|r| r["status"] == "PASS" && r["dims"]["K_2,1(K-L,L-D)"] == 1));

    let o = secant(&["summarize", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("matches records"));
}

#[test]
fn check_empty_config() {
    let cfg = scratch("empty.toml");
    fs::write(&cfg, "curve = \"fermat-quartic-101\"\nc = 1\np = 1\ntrials = 3\nchecks = []\n").unwrap();
    let o = secant(&["--format", "json", "check", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["records"].as_array().unwrap().is_empty());
}

#[test]
fn check_guards() {
    let cfg = scratch("unasserted.toml");
    fs::write(&cfg, "curve = \"random-quartic-1009\"\nc = 2\np = 1\ntrials = 1\nchecks = [\"secant_forward\"]\n")
        .unwrap();
    let o = secant(&["check", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("non_bielliptic"), "{}", stderr(&o));

    let cfg = scratch("typo.toml");
    fs::write(&cfg, "curve = \"fermat-quartic-101\"\nc = 1\np = 1\ntrials = 1\nchekcs = []\n").unwrap();
    assert_eq!(code(&secant(&["check", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&secant(&["check", "/nonexistent/config.toml"])), 2);
}

#[test]
fn summarize_flags_tampered_reports() {
    let out = scratch("tamper.json");
    let o = secant(&["check", &acceptance("secant_converse_quartic.toml"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let clean: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();

    let mut v = clean.clone();
    v["records"][0]["status"] = "FAIL".into();
    fs::write(&out, serde_json::to_string(&v).unwrap()).unwrap();
    let o = secant(&["summarize", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("DIFFERS"));

    let mut v = clean;
    v["summary"]["pass"] = 0.into();
    fs::write(&out, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&secant(&["summarize", out.to_str().unwrap()])), 4);
}

#[test]
fn seeds_are_reproducible() {
    let run = |seed: &str| {
        let o = secant(&["--format", "json", "--seed", seed, "check", &acceptance("duality_quartic.toml")]);
        assert_eq!(code(&o), 0);
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("seconds");
        for r in v["records"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("seconds");
        }
        v
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7")["records"], run("8")["records"]);
}
