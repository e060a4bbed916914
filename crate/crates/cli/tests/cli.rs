use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anyon-thermo")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn props_reference_point() {
    let doc = json(&["props", "--n", "2", "--d", "2", "--beta", "1"]);
    let r = &doc["results"];
    assert_eq!(r["p_fermi"].to_string(), "5.24633113581e-1");
    assert!((num(&r["ln_z_total"]) - 0.347756983884620).abs() < 1e-11);
    assert!((num(&r["internal_energy"]) - 2.419645105949986).abs() < 1e-10);
    assert_eq!(doc["units"], "natural");
}

#[test]
fn temperature_and_beta_agree() {
    let a = json(&["props", "--n", "3", "--d", "4", "--nu", "0.5", "--beta", "0.5"]);
    let b = json(&["props", "--n", "3", "--d", "4", "--nu", "0.5", "--temp", "2"]);
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn stirling_near_carnot() {
    let doc = json(&[
        "stirling", "--n", "2", "--d", "2", "--beta-hot", "10", "--beta-cold", "20", "--nu1", "50", "--nu2", "-50",
    ]);
    let r = &doc["results"];
    assert_eq!(r["regime"], "engine");
    assert!((num(&r["eta"]) - 0.5).abs() < 1e-3);
    assert!((num(&r["w_cyc"]) - 0.0549306).abs() < 1e-4);
}

#[test]
fn scan_csv_shape() {
    let out = run(&["scan", "--n", "2", "--d", "2", "--beta", "1", "--quantity", "p_fermi", "--x", "nu:-5:5:11", "--y", "omega:0.5:2:4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "ix,iy,nu,omega,p_fermi,status");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 44);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
}

#[test]
fn scan_flags_cells_without_antisymmetric_states() {
    let out = run(&["scan", "--n", "3", "--d", "3", "--beta", "1", "--quantity", "c_temp", "--x", "nu:0:1:2", "--y", "n:2:5:4", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let empty = text.lines().filter(|l| l.ends_with(",empty_alt")).count();
    // d = 3 has no antisymmetric states for N = 4 and 5
    assert_eq!(empty, 4);
}

#[test]
fn csv_and_json_carry_the_same_digits() {
    let args = ["otto", "--n", "4", "--d", "4", "--beta-hot", "1", "--beta-cold", "2", "--phi-hot", "-0.1", "--phi-cold", "0.1"];
    let doc = json(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = run(&csv_args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    for key in ["w_cyc", "q_hot", "eta", "w_per_n_kt_hot"] {
        let i = header.iter().position(|h| *h == key).unwrap();
        assert_eq!(doc["results"][key].to_string(), row[i], "{key}");
        let back: f64 = row[i].parse().unwrap();
        assert!((back - num(&doc["results"][key])).abs() <= 1e-11 * back.abs());
    }
}

#[test]
fn precision_controls_digits() {
    let doc = json(&["props", "--n", "2", "--d", "2", "--beta", "1", "--precision", "4"]);
    assert_eq!(doc["results"]["p_fermi"].to_string(), "5.246e-1");
}

#[test]
fn si_units_scale_energies() {
    let (hbar, k_b) = (1.054571817e-34, 1.380649e-23);
    let natural = json(&["props", "--n", "2", "--d", "2", "--beta", "1"]);
    // same state: beta hbar omega = 1 with omega = 1 rad/s
    let beta = (1.0 / hbar).to_string();
    let si = json(&["props", "--n", "2", "--d", "2", "--beta", &beta, "--si"]);
    assert_eq!(si["units"], "si");
    let (s, n) = (&si["results"], &natural["results"]);
    let close = |a: f64, b: f64| (a / b - 1.0).abs() < 1e-9;
    assert!(close(num(&s["internal_energy"]), hbar * num(&n["internal_energy"])));
    assert!(close(num(&s["c_temp"]), k_b * num(&n["c_temp"])));
    assert!(close(num(&s["p_fermi"]), num(&n["p_fermi"])));
    assert!(close(num(&si["inputs"]["temperature"]), hbar / k_b));
}

#[test]
fn qubit_sweep_rows() {
    let doc = json(&["qubits", "--n", "2", "--d", "2", "--sweep", "0.1:10:5:log"]);
    let rows = doc["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 5);
    let counts: Vec<u64> = rows.iter().map(|r| r["num_qubits"].as_u64().unwrap()).collect();
    assert_eq!(counts[0], 1);
    assert!(counts.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn verify_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check"));
    assert!(!text.contains("fail"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["props", "--n", "2", "--d", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--n", "2", "--d", "2", "--quantity", "p_fermi", "--x", "spin:0:1:2", "--y", "nu:0:1:2"]).status.code(), Some(2));
    assert_eq!(run(&["props", "--n", "0", "--d", "2", "--beta", "1"]).status.code(), Some(3));
    assert_eq!(run(&["props", "--n", "2", "--d", "2", "--beta", "-1"]).status.code(), Some(3));
    assert_eq!(run(&["qubits", "--n", "6", "--d", "6", "--temp", "1"]).status.code(), Some(3));
    let stirling = run(&["stirling", "--n", "2", "--d", "2", "--beta-hot", "2", "--beta-cold", "1", "--nu1", "1", "--nu2", "0"]);
    assert_eq!(stirling.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&stirling.stderr).starts_with("error:"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_anyon-thermo"))
        .env("ANYON_THERMO_OUTPUT_DIR", dir.path())
        .args(["props", "--n", "2", "--d", "2", "--beta", "1", "--format", "csv", "--output", "sub/props.csv"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("sub/props.csv")).unwrap();
    assert!(text.starts_with("n,d,omega,nu,beta"));
    assert_eq!(text.lines().count(), 2);
}
