use std::process::{Command, Output};

use serde_json::{json, Value};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn qdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdt")).args(args).output().expect("spawn qdt")
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("json on stderr")
}

#[test]
fn coeff_examples() {
    let k2 = data("kronecker2.json");
    let o = qdt(&["coeff", "--quiver", &k2, "--parts", "1,0;0,1", "--theta", "1,-1"]);
    assert_eq!(stdout_json(&o), json!({"F_total": 2}));

    let o = qdt(&["coeff", "--quiver", &k2, "--parts", "1,0;0,1;0,1", "--theta", "2,-1", "--per-tree"]);
    assert_eq!(
        stdout_json(&o),
        json!({"F_total": 4, "trees": [{"id": "{(0,0):1,2,3}", "F": 4, "k_rho": 2, "N_toric": "2"}]})
    );
}

#[test]
fn malformed_parts_exit_2() {
    let k2 = data("kronecker2.json");
    for parts in ["1,0;0", "1,a;0,1", ""] {
        let o = qdt(&["coeff", "--quiver", &k2, "--parts", parts, "--theta", "1,-1"]);
        assert_eq!(o.status.code(), Some(2), "parts {parts:?}");
        assert!(stderr_json(&o)["error"].is_string());
    }
}

#[test]
fn dt_examples() {
    let k2 = data("kronecker2.json");
    let att = data("simples2.json");
    let o = qdt(&["dt", "--quiver", &k2, "--gamma", "1,2", "--theta", "2,-1", "--attractor", &att]);
    let v = stdout_json(&o);
    assert_eq!(v["omega"], json!(1));
    assert_eq!(v["omega_bar"], json!("1"));
    assert_eq!(v["decompositions"].as_array().unwrap().len(), 2);

    let o = qdt(&["dt", "--quiver", &k2, "--gamma", "1,1", "--theta", "1,-1"]);
    assert_eq!(stdout_json(&o)["omega"], json!(2));

    let o = qdt(&["dt", "--quiver", &k2, "--gamma", "1,1", "--theta", "2,-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], json!("ThetaNotOrthogonal"));
}

#[test]
fn tropmult_worked_face() {
    let o = qdt(&["tropmult", "--face", &data("worked_face.json")]);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap().trim(),
        r#"{"N_trop":2,"k_sigma":2,"product_formula":"4","psi_coker":2}"#
    );
}

#[test]
fn selfcheck_small_sweep() {
    let o = qdt(&["selfcheck", "--max-r", "4", "--max-d", "3", "--cases", "50", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["ok"], json!(true));
}

#[test]
fn render_one_group() {
    let dir = std::env::temp_dir().join(format!("qdt-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("trees.svg");
    let k2 = data("kronecker2.json");
    let args = ["render", "--quiver", &k2, "--parts", "1,0;0,1;0,1", "--theta", "2,-1", "--svg", svg.to_str().unwrap()];
    assert!(qdt(&args).status.success());
    let first = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(first.matches("<g ").count(), 1);
    assert!(first.contains("γ1=(1,0)"));
    assert!(qdt(&args).status.success());
    assert_eq!(std::fs::read_to_string(&svg).unwrap(), first);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn retries_exhausted_exit_3() {
    let k3 = data("kronecker3.json");
    let o = qdt(&[
        "coeff", "--quiver", &k3, "--parts", "1,0;0,1;0,1;1,1", "--theta", "3,-2", "--scale", "1", "--max-retries", "0",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], json!("RetriesExhausted"));
}

#[test]
fn usage_errors_are_json() {
    let o = qdt(&["coeff", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], json!("Usage"));
}
