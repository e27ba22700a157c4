use std::io::Write;
use std::process::{Command, Output};

fn lsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsys"))
        .args(args)
        .output()
        .expect("failed to run lsys")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
}

/// Parse the single data row of an eval CSV.
fn eval_row(args: &[&str]) -> Vec<f64> {
    let o = lsys(args);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("re_z,im_z,re_V,im_V,re_W,im_W"));
    lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect()
}

#[test]
fn eval_first_example_at_minus_one() {
    let r = eval_row(&["eval", "--h", "0.5+0.5i", "--mu", "1", "--points", "-1"]);
    assert!(close(r[2], 2.0) && close(r[3], 0.0), "{r:?}");
}

#[test]
fn eval_second_example_at_minus_one() {
    let r = eval_row(&["eval", "--h", "1+i", "--mu", "0", "--points", "-1"]);
    assert!(close(r[2], -1.0 / 3.0) && close(r[3], 0.0), "{r:?}");
    assert!(close(r[4], 0.8) && close(r[5], 0.6), "{r:?}");
}

#[test]
fn eval_infinite_mu() {
    let r = eval_row(&["eval", "--h", "1+i", "--mu", "inf", "--points", "-1"]);
    assert!(close(r[2], 0.5) && close(r[3], 0.0), "{r:?}");
    assert!(close(r[4], 0.6) && close(r[5], -0.8), "{r:?}");
}

#[test]
fn eval_marks_poles() {
    let o = lsys(&["eval", "--h", "i", "--mu", "1", "--points", "-1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("-1.0,0.0,pole,pole,"));
}

#[test]
fn eval_json_and_random_points() {
    let o = lsys(&["eval", "--h", "1+i", "--mu", "2", "--random", "5", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert!(row["z"][1].as_f64().unwrap() != 0.0);
        assert!(row["V"].is_array() && row["W"].is_array());
    }
}

#[test]
fn classify_examples() {
    let o = lsys(&["classify", "--h", "0.5+0.5i", "--mu", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "class",
        "tan_alpha1",
        "tan_alpha2",
        "tan_alpha",
        "tan_beta",
        "tan_theta",
        "theta_exact",
        "mu0_stieltjes",
        "mu0_inverse",
        "state_operator",
        "associated_operator",
        "seed",
    ] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["class"], "stieltjes");
    assert_eq!(v["tan_alpha2"], "inf");
    assert_eq!(v["state_operator"], "accretive_not_sectorial");
    assert!(v["seed"].is_u64());

    let v = json(&lsys(&["classify", "--h", "1+i", "--mu", "0"]));
    assert_eq!(v["class"], "inverse_stieltjes");
    assert_eq!(v["associated_operator"]["alpha_sectorial"], 1.0);

    let v = json(&lsys(&["classify", "--h", "1+i", "--mu", "1.5"]));
    assert_eq!(v["class"], "neither");
    assert!(v["tan_alpha"].is_null());
}

#[test]
fn not_accretive_exits_three() {
    let o = lsys(&["classify", "--h", "-1+i", "--mu", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not accretive"));
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_input_exits_two() {
    let o = lsys(&["eval", "--h", "1 + i", "--mu", "1", "--points", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lsys(&["classify", "--h", "1-i", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lsys(&["weyl", "--potential", "table:/nonexistent/q.csv", "--points", "i"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lsys(&["scan-mu", "--h", "1+i", "--grid", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

fn scan_rows(out: &str) -> (Vec<Vec<String>>, String) {
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("mu,class,tan_a1,tan_a2,f_mu,flags"));
    let mut rows = Vec::new();
    let mut footer = String::new();
    for line in lines {
        if let Some(f) = line.strip_prefix("# summary: ") {
            footer = f.to_string();
        } else {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    (rows, footer)
}

#[test]
fn stieltjes_scan_is_decreasing() {
    let o = lsys(&["scan-mu", "--h", "1+i", "--grid", "2:100:50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (rows, footer) = scan_rows(&stdout(&o));
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][4], "inf");
    assert_eq!(rows[0][5], "atMu0;accretiveOnly");
    let f: Vec<f64> = rows[1..].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1] < w[0]));
    assert!(footer.contains("direction=decreasing"), "{footer}");
    assert!(footer.contains("bound_holds=true"), "{footer}");
}

#[test]
fn scan_drops_points_outside_the_branch() {
    let o = lsys(&["scan-mu", "--h", "1+i", "--grid", "0,1.5,3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (rows, footer) = scan_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert!(footer.ends_with("dropped=2"), "{footer}");
}

#[test]
fn inverse_scan_footer() {
    let o = lsys(&["scan-mu", "--h", "1+i", "--branch", "inverse", "--grid", "0:1:11"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (rows, footer) = scan_rows(&stdout(&o));
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][1], "inverse_stieltjes");
    assert!(footer.contains("direction=increasing"), "{footer}");
}

#[test]
fn weyl_free_values() {
    let o = lsys(&["weyl", "--points", "-4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!(close(row[2], 2.0) && close(row[3], 0.0), "{row:?}");
    assert!(out.lines().last().unwrap().starts_with("# m(-0)="));
}

#[test]
fn weyl_table_potential() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x,q\n0,2\n1,2").unwrap();
    let spec = format!("table:{}", f.path().display());
    let o = lsys(&["weyl", "--potential", &spec, "--points", "-1", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    // constant 2 everywhere, so m(-1) = sqrt(3)
    let m = v["values"][0]["m"][0].as_f64().unwrap();
    assert!((m - 3f64.sqrt()).abs() < 1e-6, "{m}");
    assert!((v["m_neg_zero"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-6);
}

#[test]
fn verify_examples_pass() {
    for ex in ["1", "2"] {
        let o = lsys(&["verify", "--example", ex]);
        assert!(o.status.success(), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("PASS"));
    }
    let o = lsys(&["verify", "--criterion", "4"]);
    assert!(o.status.success());
}

#[test]
fn flipped_branch_fails_verification() {
    let o = lsys(&["verify", "--criterion", "3", "--flip-sqrt-branch"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL [3]"));
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["eval", "--h", "1+i", "--mu", "3", "--random", "20", "--seed", "7"],
        vec!["classify", "--h", "0.5+0.5i", "--mu", "2", "--seed", "7"],
        vec!["scan-mu", "--h", "1+i", "--grid", "2:50:25", "--format", "json"],
    ];
    for args in runs {
        let a = lsys(&args);
        let b = lsys(&args);
        assert!(a.status.success(), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
