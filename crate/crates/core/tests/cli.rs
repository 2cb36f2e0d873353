use hardy_quad::cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hardy-quad").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn nodes_gh_ten() {
    let (code, out, err) = invoke(&["nodes", "--rule", "gh", "--n", "10", "--out", "-"]);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    for i in 0..10 {
        assert_eq!(rows[i][0], (i + 1) as f64);
        assert!((rows[i][1] + rows[9 - i][1]).abs() < 1e-13);
    }
}

#[test]
fn nonexistent_weight_is_a_computation_error() {
    let (code, out, err) = invoke(&["validate", "--d", "1", "--weight", "de:beta1=1,beta2=1,gamma=1.6"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert_eq!(err, "NonexistentWeight gamma=1.6 > pi/(2d)=1.5708\n");
}

#[test]
fn validate_accepts_boundaries() {
    let (code, out, _) = invoke(&["validate", "--d", "1", "--weight", "de:beta1=1,beta2=1,gamma=0.5", "--L", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok "));
    let (code, _, err) = invoke(&["validate", "--weight", "de:beta1=1,beta2=1,gamma=0.5", "--L", "1.5"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("InvalidParameter L=1.5"), "{err}");
}

#[test]
fn prop22_bound_as_json() {
    let (code, out, err) = invoke(&[
        "bound", "--kind", "prop22", "--rule", "trap", "--m", "8", "--d", "1", "--weight", "se:beta=1,rho=1",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "Prop22");
    assert_eq!(v["up_to_constant"], false);
    assert!(v["log_value"].as_f64().unwrap().is_finite());
    assert!(v["meta"].is_object());
}

#[test]
fn closed_form_bounds() {
    let (code, out, _) = invoke(&["bound", "--kind", "bernstein", "--rule", "gl", "--n", "16", "--T", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["log_value"].as_f64().unwrap() + 7.140_593_642_054_712).abs() < 1e-12);
    assert_eq!(v["up_to_constant"], true);

    let (code, out, _) = invoke(&["bound", "--kind", "traprate", "--n", "100"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["log_value"].as_f64().unwrap() + 17.724_538_509_055_16).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        &["nodes", "--rule", "simpson", "--n", "3"][..],
        &["frobnicate"][..],
        &["nodes", "--rule", "gh"][..],
        &["sweep", "--rule", "gh", "--n-list", "5,4,10"][..],
        &["nodes", "--rule", "gh", "--n", "4", "--weight", "xx:beta=1"][..],
        &["bound", "--kind", "cor42", "--rule", "gl", "--n", "8"][..],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn computation_errors_exit_one_with_one_line() {
    for args in [
        &["bound", "--kind", "cor41", "--m", "2", "--weight", "se:beta=1,rho=3"][..],
        &["nodes", "--rule", "gh", "--n", "501"][..],
        &["nodes", "--rule", "gl", "--n", "8", "--L", "0.5", "--weight", "de:beta1=1,beta2=1,gamma=1"][..],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, 1, "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("sweep"));
}

#[test]
fn sweep_then_fit_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gh.csv");
    let csv_s = csv.to_str().unwrap();
    let args = [
        "sweep", "--rule", "gh", "--weight", "se:beta=1,rho=2", "--n-list", "5,10,20,40,80,160",
        "--rel-tol", "1e-8", "--out", csv_s,
    ];
    let (code, out, err) = invoke(&args);
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty());
    let first = std::fs::read(&csv).unwrap();
    assert_eq!(String::from_utf8_lossy(&first).lines().count(), 7);

    // same argv, same bytes
    invoke(&args);
    assert_eq!(std::fs::read(&csv).unwrap(), first);

    let (code, out, err) = invoke(&["fit", "--input", csv_s, "--field", "log_prop22", "--model", "sqrt_2n_plus_1"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n_lo"], 20);
    assert_eq!(v["n_hi"], 160);
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 0.3);

    let (code, out, _) = invoke(&["fit", "--input", csv_s, "--model", "best_power", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("power:p=0.5"), "{out}");
}

#[test]
fn sweep_json_and_trapezoidal_sizes() {
    let (code, out, err) = invoke(&["sweep", "--rule", "trap", "--m-list", "2,4", "--format", "json", "--rel-tol", "1e-8"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows[0]["n"], 5);
    assert_eq!(rows[1]["n"], 9);
}
