use std::process::{Command, Output};

fn kennedy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kennedy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn single_row(out: &Output) -> Vec<(String, String)> {
    let text = stdout(out);
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let row: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    assert!(lines.next().is_none());
    header.into_iter().zip(row).collect()
}

fn field(row: &[(String, String)], name: &str) -> String {
    row.iter().find(|(k, _)| k == name).unwrap().1.clone()
}

#[test]
fn kappa_of_unshifted_probe_is_one() {
    let out = kennedy(&["kappa", "--alpha", "1", "--r", "0", "--phi", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "alpha,r,phi,mode,kappa\n1,0,0,exact,1\n");
}

#[test]
fn fock_mode_agrees_with_exact() {
    let exact = kennedy(&["kappa", "--alpha", "1", "--r", "0.5", "--phi", "0.2"]);
    let fock = kennedy(&[
        "kappa", "--alpha", "1", "--r", "0.5", "--phi", "0.2", "--mode", "fock",
    ]);
    let a: f64 = field(&single_row(&exact), "kappa").parse().unwrap();
    let b: f64 = field(&single_row(&fock), "kappa").parse().unwrap();
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn squeezed_vacuum_phimin() {
    let out = kennedy(&["phimin", "--n-total", "10", "--ratio", "1"]);
    assert!(out.status.success());
    let row = single_row(&out);
    assert_eq!(field(&row, "phi_m"), "0.0825722823845");
    assert_eq!(field(&row, "method"), "closed_form_squeezed_vacuum");
    assert_eq!(field(&row, "alpha"), "0");
}

#[test]
fn phimin_picks_closed_form_by_probe() {
    let coherent = single_row(&kennedy(&["phimin", "--alpha", "3", "--r", "0"]));
    assert_eq!(field(&coherent, "method"), "closed_form_coherent");
    let mixed = single_row(&kennedy(&["phimin", "--alpha", "1", "--r", "0.5"]));
    assert_eq!(field(&mixed, "method"), "closed_form_product_log");
    let root = single_row(&kennedy(&[
        "phimin", "--alpha", "1", "--r", "0.5", "--mode", "approx",
    ]));
    assert_eq!(field(&root, "method"), "numeric_root_approx");
    let a: f64 = field(&mixed, "phi_m").parse().unwrap();
    let b: f64 = field(&root, "phi_m").parse().unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn bound_forms() {
    let out = kennedy(&["bound", "--kappa", "0.5", "--p01", "0.1"]);
    assert_eq!(stdout(&out), "p01,kappa,p11\n0.1,0.5,0.8\n");
    let out = kennedy(&["bound", "--alpha", "1", "--r", "0.3", "--phi", "0.1"]);
    assert!(out.status.success());
    let p01: f64 = field(&single_row(&out), "p01").parse().unwrap();
    assert!(p01.abs() < 1e-12);
}

#[test]
fn flag_errors_exit_two() {
    for args in [
        &["kappa", "--bogus", "1"][..],
        &["kappa", "--alpha", "1"],
        &[
            "phimin",
            "--alpha",
            "1",
            "--r",
            "0",
            "--n-total",
            "3",
            "--ratio",
            "0.5",
        ],
        &["phimin", "--n-total", "-1", "--ratio", "0.5"],
        &[
            "bound",
            "--alpha",
            "1",
            "--r",
            "0",
            "--phi",
            "0",
            "--dark-rate",
            "10",
        ],
        &["sweep-ratio", "--n-total", "10", "--grid", "2"],
        &[
            "kappa", "--alpha", "1", "--r", "0", "--phi", "0", "--format", "xml",
        ],
    ] {
        let out = kennedy(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn numeric_failures_exit_three() {
    // exact coherent threshold has no crossing below ln2/4 photons
    let out = kennedy(&[
        "phimin",
        "--n-total",
        "0.1",
        "--ratio",
        "0",
        "--mode",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = kennedy(&[
        "kappa", "--alpha", "3", "--r", "0", "--phi", "0.1", "--mode", "fock", "--dim", "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = kennedy(&["verify", "--dim", "8"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains(",false\n"));
}

#[test]
fn verify_passes_at_default_dimension() {
    let out = kennedy(&["verify", "--dim", "64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("test,alpha,r,phi,analytic,oracle,abs_err,pass\n"));
    assert_eq!(text.lines().count(), 1 + 144);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn json_mirrors_csv_columns() {
    let out = kennedy(&[
        "sweep-ratio",
        "--n-total",
        "10",
        "--grid",
        "5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["ratio", "phi_m"]);
    assert_eq!(rows[4]["phi_m"].as_f64().unwrap(), 0.0826664036006);
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("kennedy-cli-test-{}.csv", std::process::id()));
    let args = [
        "sweep-n", "--n-min", "1", "--n-max", "100", "--points", "3", "--ratios", "0,0.5",
    ];
    let direct = kennedy(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let out = kennedy(&with_file);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, direct.stdout);
    assert_eq!(stdout(&direct).lines().count(), 1 + 6);
}

#[test]
fn optimize_is_deterministic() {
    let args = [
        "optimize", "--n-min", "1", "--n-max", "1000", "--points", "5",
    ];
    let a = kennedy(&args);
    let b = kennedy(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains('\r'));
}
