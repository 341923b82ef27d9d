use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ldata::spec_doc::DatumSpecDocument;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn ldata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldata")).args(args).output().expect("run ldata")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn verify_exit_codes() {
    let zeta = spec("zeta.spec");
    let ok = ldata(&["verify", zeta.to_str().unwrap(), "--X", "1", "--tol", "1e-4"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(field(&stdout(&ok), "residual").parse::<f64>().unwrap() < 1e-4);

    let strict = ldata(&["verify", zeta.to_str().unwrap(), "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(1));

    let trivial = ldata(&["verify", spec("trivial-combo.spec").to_str().unwrap()]);
    assert_eq!(trivial.status.code(), Some(0));
    assert!(field(&stdout(&trivial), "residual").parse::<f64>().unwrap() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    let missing = ldata(&["verify", "/nonexistent/zeta.spec"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());

    let zeta = spec("zeta.spec");
    let mismatch = ldata(&["twist", zeta.to_str().unwrap(), "--alphas", "1,0.5", "--cs", "1", "--z", "0,1"]);
    assert_eq!(mismatch.status.code(), Some(2));

    let lower = ldata(&["twist", zeta.to_str().unwrap(), "--alphas", "1", "--cs", "1", "--z", "0,-1"]);
    assert_eq!(lower.status.code(), Some(2));

    assert_eq!(ldata(&["gate", "--", "-1"]).status.code(), Some(2));
}

#[test]
fn reports() {
    let zeta = spec("zeta.spec");
    let z = zeta.to_str().unwrap();
    assert_eq!(field(&stdout(&ldata(&["degree", z])), "value"), "1.0");
    assert_eq!(field(&stdout(&ldata(&["degree", spec("degree-two.spec").to_str().unwrap()])), "value"), "2.0");
    let half = stdout(&ldata(&["degree", spec("half-gl3.spec").to_str().unwrap(), "--richardson"]));
    assert!((field(&half, "value").parse::<f64>().unwrap() - 1.5).abs() < 1e-4);

    let coeffs = stdout(&ldata(&["coeffs", z, "10"]));
    let rows: Vec<&str> = coeffs.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for (i, r) in rows.iter().enumerate() {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols[0].parse::<usize>().unwrap(), i + 1);
        assert!((cols[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }

    let classify = stdout(&ldata(&["classify", spec("dirichlet-q4.spec").to_str().unwrap()]));
    assert_eq!(field(&classify, "category"), "dirichlet");
    assert_eq!(field(&classify, "character.modulus"), "4");
    assert_eq!(field(&classify, "character.t"), "0.0");

    let axioms = stdout(&ldata(&["axioms", z, "1000"]));
    assert_eq!(field(&axioms, "all_pass"), "true");
}

#[test]
fn twist_grid() {
    let z = spec("zeta.spec");
    let out = stdout(&ldata(&[
        "twist", z.to_str().unwrap(), "--alphas", "1", "--cs", "1", "--z", "0,0.5", "--z", "0,1", "--z", "0,2",
    ]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for (r, y) in rows.iter().zip([0.5f64, 1.0, 2.0]) {
        let re: f64 = r.split(',').nth(2).unwrap().parse().unwrap();
        assert!((re - 1.0 / (2.0 * std::f64::consts::PI * y).exp_m1()).abs() < 1e-12);
    }

    let empty = ldata(&["twist", z.to_str().unwrap(), "--alphas", "1", "--cs", "1"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty), "re_z,im_z,re_S,im_S,tail_bound\n");
}

#[test]
fn output_is_deterministic() {
    let z = spec("zeta.spec");
    let z = z.to_str().unwrap();
    for args in [
        vec!["verify", z],
        vec!["classify", z],
        vec!["asymptotics", z],
        vec!["twist", z, "--alphas", "1,0.5", "--cs", "1,2", "--z", "0.3,0.7"],
    ] {
        let a = ldata(&args);
        let b = ldata(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn formats() {
    let z = spec("zeta.spec");
    let json = stdout(&ldata(&["--out", "structured", "conductor", z.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!((v["f1"].as_f64().unwrap() - 2.6860917096128327).abs() < 1e-13);
    let csv = stdout(&ldata(&["--out", "csv", "vanishing", "163", "82"]));
    assert!(csv.starts_with("key,value\n"));
    assert!(csv.contains("holds,true"));
}

#[test]
fn echo_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("coeffs.txt"), "2 -0.3\n3 0.1 0.2\n").unwrap();
    let doc = r#"{"kind": "combo", "terms": [
        {"weight": 0.5, "spec": {"kind": "gamma_spec", "log_q": 1.2, "shifts": [0, [1, 2]], "coeff_file": "coeffs.txt", "t_max": 0}},
        {"weight": 1.0, "spec": {"kind": "combo", "terms": [{"weight": -2.0, "spec": {"kind": "dirichlet", "q": 5, "index": 1}}]}}
    ]}"#;
    let original = dir.path().join("combo.spec");
    std::fs::write(&original, doc).unwrap();

    let out = ldata(&["echo", original.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let elsewhere = tempfile::tempdir().unwrap();
    let echoed = elsewhere.path().join("echoed.spec");
    std::fs::write(&echoed, out.stdout.clone()).unwrap();
    let again = ldata(&["echo", echoed.to_str().unwrap()]);
    assert_eq!(again.stdout, out.stdout);

    let a = DatumSpecDocument::read(&original).unwrap().build().unwrap();
    let b = DatumSpecDocument::read(&echoed).unwrap().build().unwrap();
    assert!((a.degree().unwrap() - b.degree().unwrap()).abs() < 1e-12);
    assert!((a.conductor() - b.conductor()).abs() < 1e-12 * a.conductor());
    for n in 1..=20 {
        assert_eq!(a.f().get(n), b.f().get(n));
    }
}
