//! The command-line surface, driven in-process through `cli::run`.

use solvable::cli::{fmt_g, run};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("solvable").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn csv(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn g_formatting() {
    assert_eq!(fmt_g(2.0), "2");
    assert_eq!(fmt_g(-0.5), "-0.5");
    assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
    assert_eq!(fmt_g(1.5e-7), "1.5e-07");
    assert_eq!(fmt_g(1e12), "1e+12");
    assert_eq!(fmt_g(123456789012.0), "123456789012");
    assert_eq!(fmt_g(f64::INFINITY), "inf");
}

#[test]
fn families_lists_six_descriptors() {
    let v = json(&["families"]);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 6);
    let s2 = json(&["families", "--family", "s2", "--alpha", "-7", "--beta", "1"]);
    assert_eq!(s2["case"], "s^2");
    assert_eq!(s2["interval"], serde_json::json!([0, "inf"]));
    assert_eq!(s2["Lambda"], 4);
    assert_eq!(s2["L"], 3);
}

#[test]
fn generate_cube_root_ground_state() {
    let v = json(&["generate", "--c1", "1", "--c2", "0", "--n", "0", "--branch", "+", "--which", "cuberoot"]);
    assert_eq!(v["energy"], 2);
    assert_eq!(v["admissible"], true);
    assert!(v["psi_expr"].as_str().unwrap().starts_with("r^(1/6)*exp("));
    let v = json(&["generate", "--c1", "1", "--c2", "-5", "--n", "1"]);
    assert_eq!(v["admissible"], false);
    let v = json(&["generate", "--c1", "-1", "--c2", "-6.75", "--n", "3", "--which", "sqrt"]);
    assert_eq!(v["energy"], -1);
}

#[test]
fn solve_params_reports_every_root() {
    let v = json(&["solve-params", "--mode", "quantsys", "--c1", "1", "--c2", "-5", "--n", "1"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["admissible"] == false));
    let v = json(&["solve-params", "--mode", "invsqrt", "--c1", "0", "--c2", "-3", "--n", "1"]);
    let roots = v.as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots.iter().filter(|r| r["admissible"] == true).count(), 1);
}

#[test]
fn oscillator_spectrum_via_verify() {
    let (code, out, _) = call(&["verify", "spectrum", "--family", "one", "--alpha", "-2", "--beta", "0", "--m", "0", "--grid", "4000"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("index,E_numeric,E_analytic,abs_err\n"));
    let rows = csv(&out);
    assert!(rows.len() >= 5);
    for row in &rows[..5] {
        assert!(row[3].parse::<f64>().unwrap() < 5e-4, "{row:?}");
    }
}

#[test]
fn cube_root_spectrum_via_verify() {
    let (code, out, _) = call(&["verify", "spectrum", "--system", "cuberoot", "--c1", "1", "--c2", "0", "--grid", "4000", "--emax", "5"]);
    assert_eq!(code, 0);
    let rows = csv(&out);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() < 2e-3), "{out}");
}

#[test]
fn residual_and_orthogonality_tables() {
    let (code, out, _) = call(&["verify", "residual", "--family", "s", "--alpha", "-1", "--beta", "2", "--ell", "3", "--m", "1", "--grid", "50"]);
    assert_eq!(code, 0);
    assert!(csv(&out).iter().all(|r| r[1].parse::<f64>().unwrap().abs() < 1e-8));
    let (code, out, _) = call(&["verify", "residual", "--system", "cuberoot", "--c1", "1", "--c2", "0", "--ell", "2", "--random-points", "40"]);
    assert_eq!(code, 0);
    assert_eq!(csv(&out).len(), 40);
    assert!(csv(&out).iter().all(|r| r[1].parse::<f64>().unwrap().abs() < 1e-8));
    let (code, out, _) = call(&["verify", "orthogonality", "--family", "one-minus-s2", "--alpha", "-5", "--beta", "1", "--m", "1", "--max-ell", "4"]);
    assert_eq!(code, 0);
    let rows = csv(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap().abs() < 1e-8));
}

#[test]
fn plot_tables_have_headers_and_sizes() {
    let (_, out, _) = call(&["poly", "--family", "one", "--alpha", "-2", "--beta", "0", "--ell", "2"]);
    assert_eq!(out, "ell,j,c_j\n0,0,1\n1,0,0\n1,1,1\n2,0,-0.5\n2,1,0\n2,2,1\n");
    let (_, out, _) = call(&["specfun", "eval", "--family", "one", "--alpha", "-2", "--beta", "0", "--ell", "2", "--m", "1", "--grid", "3", "--smin", "0", "--smax", "1"]);
    assert_eq!(out, "s,value\n0,0\n0.5,1\n1,2\n");
    let (_, out, _) = call(&["potential", "--family", "one-minus-s2", "--alpha", "-5", "--beta", "1", "--grid", "11"]);
    assert!(out.starts_with("x,V\n"));
    let rows = csv(&out);
    assert_eq!(rows.len(), 11);
    // Endpoints are pulled inside (-π/2, π/2).
    assert!(rows[0][0].parse::<f64>().unwrap() > -std::f64::consts::FRAC_PI_2);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap().is_finite()));
    let (_, out, _) = call(&["eigenfunction", "--family", "one", "--alpha", "-2", "--beta", "0", "--ell", "0", "--grid", "3", "--xmin", "-1", "--xmax", "1"]);
    assert_eq!(csv(&out)[1], vec!["0".to_string(), "1".to_string()]);
}

#[test]
fn reproduce_dw_reads_back_the_pattern() {
    let v = json(&["reproduce-dw", "--theta", "1", "--rho", "0", "--lambda", "-1", "--which", "2"]);
    assert_eq!(v["pattern"]["theta2"], 1);
    assert_eq!(v["pattern"]["lambda"], -1);
    assert_eq!(v["pattern"]["unexpected"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["poly", "--family", "s2-minus-one", "--alpha", "-3", "--beta", "1", "--ell", "1"]).0, 1);
    let (code, _, err) = call(&["families", "--family", "s", "--alpha", "1", "--beta", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("alpha < 0"), "{err}");
    assert_eq!(call(&["poly", "--frobnicate"]).0, 2);
    assert_eq!(call(&["no-such-command"]).0, 2);
    assert_eq!(call(&["verify", "spectrum", "--system", "family"]).0, 2);
    let (code, out, _) = call(&["generate", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("--which"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["families"][..],
        &["verify", "residual", "--system", "cuberoot", "--c1", "1", "--c2", "0", "--random-points", "25"][..],
        &["solve-params", "--mode", "invsqrt", "--c1", "-1", "--c2", "0", "--n", "0"][..],
    ] {
        assert_eq!(call(args), call(args));
    }
    let a = call(&["--seed", "7", "verify", "residual", "--system", "cuberoot", "--c1", "1", "--c2", "0", "--random-points", "5"]);
    let b = call(&["--seed", "8", "verify", "residual", "--system", "cuberoot", "--c1", "1", "--c2", "0", "--random-points", "5"]);
    assert_ne!(a.1, b.1);
}

#[test]
fn acceptance_exit_status_tracks_the_table() {
    let (code, out, _) = call(&["acceptance"]);
    let lines: Vec<&str> =
        out.lines().filter(|l| l.starts_with("PASS [") || l.starts_with("FAIL [")).collect();
    assert_eq!(lines.len(), 10, "{out}");
    let failed = lines.iter().any(|l| l.starts_with("FAIL"));
    assert_eq!(code, i32::from(failed));
}
