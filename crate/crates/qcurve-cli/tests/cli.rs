use std::process::{Command, Output};

use qcurve::algebra::{Field, RatFunc};
use qcurve::curves::{rf, spectral_data, TABLE1};
use qcurve_cli::report::{Elem, Report};
use qcurve_cli::run::{emit_plotdata, run_analyze, run_toprec, run_wkb, Options};
use qcurve_cli::spec::{builtin_spec, load_curve, parse_curve_spec};

fn qcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report_of(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("report JSON")
}

const HERMITE_MATRIX: &str = r#"{
  "name": "hermite-from-file",
  "higgs": [
    [{"num": ["0"]}, {"num": ["1"]}],
    [{"num": ["-1"]}, {"num": ["0", "-1"]}]
  ]
}"#;

#[test]
fn builtin_airy_coefficients() {
    let c = load_curve("airy").unwrap();
    assert!(c.data.a1.f.is_zero());
    assert_eq!(c.data.a2.f, rf(&[0, -1], &[1]));
}

#[test]
fn matrix_mode_gives_hermite() {
    let c = parse_curve_spec(HERMITE_MATRIX).unwrap();
    assert_eq!(c.data.a1.f, rf(&[0, 1], &[1]));
    assert_eq!(c.data.a2.f, RatFunc::constant(qcurve::algebra::q(1, 1)));
}

#[test]
fn spec_errors() {
    let both = r#"{"name": "x", "higgs": [[{"num":["0"]},{"num":["1"]}],[{"num":["0","1"]},{"num":["0"]}]],
                   "a1": {"num": ["0"]}, "a2": {"num": ["0", "-1"]}}"#;
    assert!(format!("{:#}", parse_curve_spec(both).unwrap_err()).contains("not both"));
    let zero_den = r#"{"name": "x", "a1": {"num": ["1"], "den": ["0"]}, "a2": {"num": ["1"]}}"#;
    assert!(format!("{:#}", parse_curve_spec(zero_den).unwrap_err()).contains("a1: zero denominator"));
    let square = r#"{"name": "x", "a1": {"num": ["0"]}, "a2": {"num": ["0", "-1"]}, "extensions": ["4"]}"#;
    assert!(format!("{:#}", parse_curve_spec(square).unwrap_err()).contains("extensions[0]"));
    let not_int = r#"{"name": "x", "a1": {"num": ["1/2"]}, "a2": {"num": ["0", "-1"]}}"#;
    assert!(format!("{:#}", parse_curve_spec(not_int).unwrap_err()).contains("a1.num[0]"));
    let syntax = "{\n  \"name\": \"x\",\n  \"a1\": \n}";
    assert!(format!("{:#}", parse_curve_spec(syntax).unwrap_err()).contains("line 4"));
    let reducible = r#"{"name": "x", "a1": {"num": ["0"]}, "a2": {"num": ["0", "0", "-1"]}}"#;
    assert!(parse_curve_spec(reducible).is_err());
}

#[test]
fn spec_files_match_registry() {
    for name in TABLE1 {
        let path = format!("{}/specs/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let from_file = parse_curve_spec(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(Some(from_file.spec), builtin_spec(name));
        assert_eq!(from_file.data, spectral_data(name).unwrap());
    }
}

#[test]
fn analyze_airy_profile() {
    let r = run_analyze(&load_curve("airy").unwrap()).unwrap();
    let a = r.analysis.as_ref().unwrap();
    assert_eq!((a.ns_class.as_str(), a.p_a, a.p_g), ("2C0+5F", 2, 0));
    let p = &a.profiles[0];
    assert_eq!(
        (p.place.as_str(), p.l, p.r.as_str(), p.class.as_str(), p.blowups_full),
        ("inf", Some(5), "5/2", "irregular 3/2", 3)
    );
    assert!(r.passed);
}

#[test]
fn wkb_gauss_series() {
    let opts = Options {
        order: Some(7),
        depth: Some(2),
        ..Options::default()
    };
    let r = run_wkb(&load_curve("gauss").unwrap(), &opts).unwrap();
    let w = r.wkb.as_ref().unwrap();
    let s2: Vec<String> = (2..=7)
        .map(|k| match &w.s[2].series[&k] {
            Elem::Rational(s) => s.clone(),
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(
        s2,
        ["7/32", "113/96", "1821/512", "1269/160", "56151/4096", "487323/28672"]
    );
    let s1 = match &w.s[1].series[&7] {
        Elem::Rational(s) => s.clone(),
        other => panic!("{other:?}"),
    };
    assert_eq!(s1, "-72109/28672");
    assert!(r.passed && w.residual_zero);
}

#[test]
fn reports_round_trip() {
    let opts = Options {
        order: Some(6),
        depth: Some(2),
        ..Options::default()
    };
    let reports = [
        run_analyze(&load_curve("gauss").unwrap()).unwrap(),
        run_wkb(&load_curve("airy").unwrap(), &opts).unwrap(),
        run_wkb(&load_curve("hermite").unwrap(), &opts).unwrap(),
        run_toprec(&load_curve("catalan-param").unwrap(), &opts).unwrap(),
    ];
    for r in reports {
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["analyze", "--curve", "row5"][..],
        &["wkb", "--curve", "gauss", "--order", "5"][..],
        &["toprec", "--curve", "airy", "--depth", "3"][..],
    ] {
        let a = qcurve(args);
        let b = qcurve(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn verify_exit_codes() {
    let ok = qcurve(&["verify", "--suite", "table1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(report_of(&ok).passed);
    let cross = qcurve(&["verify", "--suite", "cross", "--curve", "airy", "--depth", "5"]);
    assert_eq!(
        cross.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&cross.stdout)
    );
    let guard = qcurve(&["wkb", "--curve", "airy", "--order", "1000"]);
    assert_eq!(guard.status.code(), Some(2));
    assert!(guard.stdout.is_empty());
    let no_param = qcurve(&["toprec", "--curve", "gauss"]);
    assert_eq!(no_param.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("qcurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hermite.json");
    let spec = dir.join("spec.json");
    std::fs::write(&spec, HERMITE_MATRIX).unwrap();
    let o = qcurve(&[
        "analyze",
        "--curve",
        spec.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success() && o.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.curve, "hermite-from-file");
    assert_eq!(r.analysis.unwrap().ns_class, "2C0+4F");
    std::fs::remove_dir_all(dir).unwrap();
}

fn plot_rows(name: &str, xmin: f64, xmax: f64, samples: usize) -> Vec<(f64, f64, String)> {
    let csv = emit_plotdata(&load_curve(name).unwrap(), xmin, xmax, samples).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,branch"));
    lines
        .map(|l| {
            let v: Vec<&str> = l.split(',').collect();
            (v[0].parse().unwrap(), v[1].parse().unwrap(), v[2].to_string())
        })
        .collect()
}

#[test]
fn plotdata_branches() {
    let h = plot_rows("hermite", -4.0, 4.0, 81);
    assert!(!h.is_empty() && h.iter().all(|(x, _, _)| x.abs() >= 2.0));
    let a = plot_rows("airy", 0.0, 4.0, 41);
    for pair in a.chunks(2) {
        assert_eq!(pair[0].1, -pair[1].1);
    }
    let g = plot_rows("gauss", 0.05, 0.95, 19);
    assert_eq!(g.len(), 38);
    assert!(plot_rows("hermite", -1.5, 1.5, 31).is_empty());
}
