use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_la-nodal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

#[test]
fn frequency_csv_is_constant_for_homogeneous_field() {
    let o = run(&["frequency", "--field", "poly:even:4", "--a", "1/3", "--radii", "geometric:1,0.01,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,H,E,N,W_k,M"));
    let rows: Vec<&str> = lines.clone().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        let n: f64 = r.split(',').nth(3).unwrap().parse().unwrap();
        assert!((n - 4.0).abs() < 1e-8, "{r}");
    }
    let verdict = text.lines().last().unwrap().strip_prefix("# ").unwrap();
    let v: serde_json::Value = serde_json::from_str(verdict).unwrap();
    assert_eq!(v["frequency_monotone"]["monotone"], true);
}

#[test]
fn poly_verify_reports_zero_residual() {
    let o = run(&["poly", "--family", "even", "--k", "4", "--a", "1/3", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["residual"], "0");
    assert_eq!(v["polynomial"]["header"]["a"], "1/3");
    let o = run(&["poly", "--family", "ext", "--monomial", "2,1", "--a", "symbolic", "--verify"]);
    assert_eq!(json(&o)["residual"], "0");
}

#[test]
fn blowup_of_mixed_field() {
    let o = run(&["blowup", "--field", "poly:odd:3+0.5*anti:1", "--a", "-1/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v[0]["k_snapped"], 2.5);
    assert_eq!(v[0]["parity"], "mixed");
    assert_eq!(v[0]["stratum"], "gamma-a-2.5");
}

#[test]
fn outputs_are_deterministic_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["solve", "--field", "poly:even:2", "--a", "1/4", "--nx", "17", "--perturb", "0.05", "--seed", "11", "--out", d];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let csv = std::fs::read(Path::new(d).join("grid.csv")).unwrap();
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(csv, std::fs::read(Path::new(d).join("grid.csv")).unwrap());
    let header = String::from_utf8(csv).unwrap();
    assert!(header.starts_with("x,y,value\n"), "{}", &header[..40]);
    // 17 significant digits
    let first_value = header.lines().nth(1).unwrap().split(',').next().unwrap();
    assert_eq!(first_value.split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
    let other = run(&["solve", "--field", "poly:even:2", "--a", "1/4", "--nx", "17", "--perturb", "0.05", "--seed", "12"]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"subcommand":"check-frac","parameters":{"s":"1/3","x":[0,0.25],"tol":1e-20}}"#).unwrap();
    let c = cfg.to_str().unwrap();
    // the configured tolerance is too strict; the command line relaxes it
    assert_eq!(run(&["--config", c]).status.code(), Some(1));
    let o = run(&["--config", c, "--tol", "1e-5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json(&o)["points"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_and_numerical_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"subcommand":"frequency","parameters":{"radius":1}}"#).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parameters.radius"));

    assert_eq!(run(&["frequency", "--field", "poly:even:2", "--a", "1/4", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(run(&["frequency", "--field", "poly:even:3", "--a", "1/4"]).status.code(), Some(2));
    assert_eq!(run(&["frequency", "--field", "poly:even:2", "--a", "-3/2"]).status.code(), Some(2));

    let o = run(&["solve", "--field", "poly:even:2", "--a", "1/4", "--nx", "33", "--max-iter", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"]["kind"], "NoConvergence");
}

#[test]
fn construct1d_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["construct1d", "--order", "2", "--s", "1/2", "--samples", "11", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for f in ["g.json", "u.csv", "report.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let u = std::fs::read_to_string(dir.path().join("u.csv")).unwrap();
    assert_eq!(u.lines().count(), 12);

    let v = json(&run(&["report", "--n", "1", "--s", "1/2"]));
    assert!((v["dtn_factor"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert!((v["sphere_measure_const"].as_f64().unwrap() - std::f64::consts::TAU).abs() < 1e-12);
}

#[test]
fn corpus_listing_and_nodal_length() {
    let o = run(&["corpus", "list", "--a", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("planar_even_2\t")));
    let v = json(&run(&["corpus", "dump", "--a", "1/4", "--name", "linear_x"]));
    assert_eq!(v[0]["name"], "linear_x");

    let v = json(&run(&["nodal", "--field", "poly:planar:1", "--a", "0", "--cells", "64"]));
    assert!((v["boxcount"]["extrapolated"].as_f64().unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn acceptance_subset() {
    let o = run(&["acceptance", "--only", "2,11"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert_eq!(run(&["acceptance", "--only", "14"]).status.code(), Some(2));
}
