use std::path::Path;
use std::process::{Command, Output};

fn qwsearch(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwsearch")).args(args).env("QWSEARCH_OUT_DIR", out_dir).output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn column(csv_text: &str, name: &str) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = reader.headers().unwrap().iter().position(|h| h == name).unwrap();
    reader.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn measures_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", stderr(out));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn interpolated_sweep_is_monotone_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "interp.cfg",
        "experiment.id = interp\nrun.variant = skw1\nrun.n = 8\nrun.seeds = 0\nstate.family = interpolated\nstate.t = 0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1\n",
    );
    let out = qwsearch(&["run", &cfg], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let csv_text = std::fs::read_to_string(dir.path().join("interp.csv")).unwrap();
    let p: Vec<f64> = column(&csv_text, "p_avg").iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(p.len(), 11);
    let f_c: Vec<f64> = column(&csv_text, "f_c").iter().map(|v| v.parse().unwrap()).collect();
    // t runs from the uniform state toward a basis state: coherence and
    // success probability fall together.
    assert!(f_c.windows(2).all(|w| w[1] < w[0]), "{f_c:?}");
    assert!(p.windows(2).all(|w| w[1] < w[0]), "{p:?}");
    assert_eq!(column(&csv_text, "tau")[0], "18");

    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("interp.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["aggregates"]["rows"], 11);
    assert_eq!(summary["deviation_check"]["within_bound"], true);
}

#[test]
fn oskw_and_mixed_configs_run() {
    let dir = tempfile::tempdir().unwrap();
    let oskw = write_config(
        dir.path(),
        "oskw.cfg",
        "experiment.id = oskw\nrun.variant = oskw1\nrun.n = 5\nrun.seeds = 1, 2\nstate.family = haar_random\n",
    );
    let out = qwsearch(&["run", &oskw, "--threads", "2"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("oskw.csv")).unwrap();
    assert_eq!(column(&text, "variant"), ["oskw1", "oskw1"]);
    assert!(column(&text, "leaked_weight").iter().all(|w| !w.is_empty()));

    let mixed = write_config(
        dir.path(),
        "mixed.cfg",
        "experiment.id = mixed\nrun.variant = skw1\nrun.n = 6\nrun.seeds = 0\nstate.family = mixed_ensemble\n\
         state.member.0.weight = 0.25\nstate.member.0.family = uniform\n\
         state.member.1.weight = 0.75\nstate.member.1.family = basis\nstate.member.1.index = 5\n",
    );
    let out = qwsearch(&["run", &mixed], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("mixed.csv")).unwrap();
    let f_c: f64 = column(&text, "f_c")[0].parse().unwrap();
    assert!((f_c - (0.25 + 0.75 / 64.0)).abs() < 1e-12);
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("unknown.cfg", "experiment.id = x\nrun.variant = skw1\nrun.n = 4\nstate.family = uniform\nrun.colour = blue\n"),
        ("nokey.cfg", "this line has no equals sign\n"),
        ("variant.cfg", "experiment.id = x\nrun.variant = skw9\nrun.n = 4\nstate.family = uniform\n"),
    ] {
        let cfg = write_config(dir.path(), name, text);
        let out = qwsearch(&["run", &cfg], dir.path());
        assert_eq!(out.status.code(), Some(2), "{name}: {}", stderr(&out));
    }
    let out = qwsearch(&["run", "/nonexistent/config.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn exceeded_bound_is_an_invariant_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "tight.cfg",
        "experiment.id = tight\nrun.variant = skw1\nrun.n = 6\nrun.seeds = 0\nstate.family = uniform\nrun.enforce_bound = true\ntolerance.deviation_constant = 0.001\n",
    );
    let out = qwsearch(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("invariant violated: deviation bound"), "{}", stderr(&out));
}

#[test]
fn measures_known_states() {
    let dir = tempfile::tempdir().unwrap();
    let ghz = measures_json(&qwsearch(&["measures", "ghz n=3"], dir.path()));
    assert!((ghz["E_g"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-6);

    let eta = measures_json(&qwsearch(&["measures", "uniform n=4"], dir.path()));
    assert!((eta["f_c"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((eta["C_f"].as_f64().unwrap() - (15.0f64 / 16.0).sqrt()).abs() < 1e-12);
    assert!(eta["E_g"].as_f64().unwrap().abs() < 1e-6);

    let basis = measures_json(&qwsearch(&["measures", "basis index=3 n=4"], dir.path()));
    assert!((basis["f_c"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
    assert!(basis["C_f"].as_f64().unwrap().abs() < 1e-12);

    let explicit = measures_json(&qwsearch(&["measures", "explicit_amplitudes amplitudes=0.7071067811865476,0,0,0.7071067811865476"], dir.path()));
    assert_eq!(explicit["n"], 2);

    for bad in ["ghz", "nonsense n=3", "basis index=99 n=3"] {
        assert_eq!(qwsearch(&["measures", bad], dir.path()).status.code(), Some(2), "{bad}");
    }
}

#[test]
fn verify_respects_guard() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwsearch(&["verify", "--max-n", "4", "--trials", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));
    assert_eq!(qwsearch(&["verify", "--max-n", "7"], dir.path()).status.code(), Some(2));
}

#[test]
fn sweep_writes_under_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwsearch(&["sweep-fig4", "--n", "4", "--samples", "3", "--out", "curves/sweep.csv"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("curves/sweep.csv")).unwrap();
    assert_eq!(column(&text, "series").len(), 9);
    assert_eq!(qwsearch(&["sweep-fig4", "--samples", "1"], dir.path()).status.code(), Some(2));
}
