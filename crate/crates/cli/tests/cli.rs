use std::process::{Command, Output};

const SEVEN: [&str; 7] = ["111", "1mmm", "11m11", "11m1m1", "1mm1mm", "11m1mm1", "1mm1m1m"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univoque"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univoque"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn pi_of_constant_one_in_base_two() {
    assert_eq!(ok(&["pi", "1^w", "--m", "2", "--q", "2"]), "1.0\n");
}

#[test]
fn pi_with_general_alphabet() {
    let v: f64 = ok(&["pi", "(10)^w", "--alphabet", "0,1", "--q", "2"]).trim().parse().unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn check_emits_stable_json() {
    let out = ok(&["check", "(10)^w", "--alphabet", "0,1", "--q", "1.5"]);
    assert!(out.starts_with(r#"{"verdict":"NotUnique","witness":{"position":"#), "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"]["condition"], "lower");
    assert!(v["slack"].as_f64().unwrap() < 0.0);

    let out = ok(&["check", "(10)^w", "--alphabet", "0,1", "--q", "1.619"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "Unique");
    assert!(v["witness"].is_null());
}

#[test]
fn check_ternary_membership() {
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["check", "(m1)^w", "--m", "3", "--q", "2.3", "--ternary"])).unwrap();
    assert_eq!(v["verdict"], "Unique");
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["check", "(m1)^w", "--m", "3", "--q", "2.1", "--ternary"])).unwrap();
    assert_eq!(v["verdict"], "NotUnique");
}

#[test]
fn automaton_counts_and_classes() {
    assert_eq!(ok(&["automaton", "1m", "--count", "5"]), "6\n");

    let mut args = vec!["automaton"];
    args.extend(SEVEN);
    args.push("--classify");
    assert_eq!(ok(&args), "Uncountable\n");
    args.insert(8, "1mm1m11mm1");
    assert_eq!(ok(&args), "CountablyInfinite\n");
}

#[test]
fn automaton_dot_is_a_digraph() {
    let out = ok(&["automaton", "11", "mm", "--dot"]);
    assert!(out.starts_with("digraph"));
    assert!(out.trim_end().ends_with('}'));
}

#[test]
fn scan_curve_gap_prints_na() {
    let out = ok(&["scan-curve", "--m-lo", "2.5", "--m-hi", "2.7", "--step", "0.05"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("m,P,R,p,r,branch"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let cols: Vec<_> = row.split(',').collect();
        assert_eq!(cols.len(), 6);
        assert_eq!(&cols[3..], ["NA", "NA", "NA"], "{row}");
    }
}

#[test]
fn scan_curve_upper_range_is_one_branch() {
    let out = ok(&["scan-curve", "--m-lo", "3.30278", "--m-hi", "4.54646", "--step", "0.01"]);
    let rows: Vec<_> = out.lines().skip(1).collect();
    assert!(rows.len() > 100);
    for row in rows {
        assert!(row.ends_with(",Comp10_right"), "{row}");
        let cols: Vec<f64> = row.split(',').take(5).map(|c| c.parse().unwrap()).collect();
        let (p_big, r_big, p, r) = (cols[1], cols[2], cols[3], cols[4]);
        assert!(p <= p_big + 1e-9 && p_big <= r + 1e-9 && r < r_big, "{row}");
    }
}

#[test]
fn scan_curve_is_byte_identical_across_thread_counts() {
    let args = ["scan-curve", "--m-lo", "2", "--m-hi", "5", "--step", "0.003"];
    let one = run_threads(&args, "1");
    let many = run_threads(&args, "8");
    let again = run_threads(&args, "8");
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(many.stdout, again.stdout);
    assert!(!one.stdout.contains(&b'\r'));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["pi", "m^w1", "--m", "3", "--q", "2"][..],
        &["pi", "1^w", "--q", "2"],
        &["pi", "1^w", "--m", "3", "--q", "1"],
        &["check", "(10)^w", "--alphabet", "0,1", "--q", "0.5"],
        &["automaton", "12"],
        &["scan-curve", "--m-lo", "3", "--m-hi", "2", "--step", "0.1"],
        &["no-such-command"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unsupported_m_exits_three() {
    let o = run(&["critical", "--m", "2.7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("r       NA"));
    assert!(run(&["critical", "--m", "3"]).status.success());
}

#[test]
fn selftest_passes_and_detects_perturbation() {
    let out = ok(&["selftest", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["identities"].as_array().unwrap().len(), 18);

    let o = run(&["selftest", "--perturb-p"]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("selftest FAILED"));
}

#[test]
fn constants_report_m3_match() {
    let out = ok(&["constants"]);
    assert!(out.contains("m_3 agrees with the printed value 3.10214"));
    assert!(out.lines().any(|l| l.starts_with("m_2") && l.ends_with("published-approximate")));
}

#[test]
fn forbidden_scan_reproduces_seven_words() {
    let out = ok(&["forbidden", "--m", "3", "--q", "2.3701991", "--max-len", "7"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), SEVEN);
}
