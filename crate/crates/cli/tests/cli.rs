use std::process::{Command, Output};

fn ffdioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffdioph")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn cfrac_of_a_quotient() {
    let o = ffdioph(&["cfrac", "--q", "2", "--y", "(T^2+1)/T"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["expansion"]["partial_quotients"], serde_json::json!(["T", "T"]));
    assert_eq!(v["identities_ok"], true);
}

#[test]
fn dirichlet_on_the_zero_instance() {
    let o = ffdioph(&["dirichlet", "--instance", &data("zero_instance.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["solution"]["q"], serde_json::json!(["1", "0"]));
    assert_eq!(v["solution"]["p"], serde_json::json!(["0"]));
}

#[test]
fn intersection_exits_zero() {
    let o = ffdioph(&["transfer", "intersection", "--t", "1", "-N", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["violations"], serde_json::json!([]));
}

#[test]
fn contraction_csv_has_no_violation_rows() {
    let o = ffdioph(&["transfer", "contraction", "--t", "2", "-N", "7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "check,indices,cell,detail\n");
}

#[test]
fn exponent_of_a_rational_series() {
    let o = ffdioph(&["exponent", "--Y", "(1)/(T^2+T+1)", "--tau-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["estimate"]["omega_lower"], "inf");
}

#[test]
fn goodcheck_of_the_parabola() {
    let o = ffdioph(&["goodcheck", "--map", &data("veronese2.map"), "--alpha", "1/2", "-N", "10", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["components"][1]["report"]["c_min"], "1/1");
    // a random nonplanarity search needs a seed
    let o = ffdioph(&["goodcheck", "--map", &data("veronese2.map"), "--alpha", "1/2", "-N", "6", "--nonplanar-trials", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ffdioph(&["cfrac"]).status.code(), Some(2));
    assert_eq!(ffdioph(&["cfrac", "--y", "T^^"]).status.code(), Some(2));
    assert_eq!(ffdioph(&["extremal", "--config", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn extremal_is_byte_identical_for_a_seed() {
    let cfg = data("extremal_n2.cfg");
    let a = ffdioph(&["extremal", "--config", &cfg, "--seed", "9"]);
    let b = ffdioph(&["extremal", "--config", &cfg, "--seed", "9"]);
    let c = ffdioph(&["extremal", "--config", &cfg, "--seed", "10"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let csv = ffdioph(&["extremal", "--config", &cfg, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("# ffdioph extremal quantiles v1\ntau,count,median,p90,flagged\n"));
    assert_eq!(text.lines().count(), 22);
}
