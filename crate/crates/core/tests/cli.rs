//! End-to-end checks of the CLI surface: file formats, subcommands, exit
//! codes, and report emission.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gstress"))
}

#[test]
fn compute_reads_polytope_files() {
    let dir = std::env::temp_dir().join("gstress_cli_compute");
    std::fs::create_dir_all(&dir).unwrap();
    let p = gstress::generators::cross_polytope(4).unwrap();
    let path = dir.join("cross4.txt");
    std::fs::write(&path, p.to_text()).unwrap();

    let out = bin().arg("compute").arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["f"], serde_json::json!(["1", "8", "24", "32", "16"]));
    assert_eq!(value["g"], serde_json::json!(["1", "3", "2"]));
    assert_eq!(value["dehn_sommerville"], serde_json::json!(true));
    assert_eq!(value["m_sequence"], serde_json::json!(true));

    // CSV format variant.
    let out = bin().arg("compute").arg(&path).arg("--format").arg("csv").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h,1 4 6 4 1"));
}

#[test]
fn betti_reads_complex_files() {
    let dir = std::env::temp_dir().join("gstress_cli_betti");
    std::fs::create_dir_all(&dir).unwrap();
    let k = gstress::complex::SimplicialComplex::from_facets([
        [0u32, 1],
        [1, 2],
        [2, 3],
        [3, 0],
    ]);
    let path = dir.join("cycle.txt");
    std::fs::write(&path, k.to_text()).unwrap();
    let out = bin().arg("betti").arg(&path).output().unwrap();
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["reduced_betti_from_dim_minus_1"], serde_json::json!([0, 0, 1]));
}

#[test]
fn stress_dim_subcommand() {
    let dir = std::env::temp_dir().join("gstress_cli_stress");
    std::fs::create_dir_all(&dir).unwrap();
    let p = gstress::generators::cyclic_polytope(7, 4).unwrap();
    let path = dir.join("cyclic74.txt");
    std::fs::write(&path, p.to_text()).unwrap();
    let out = bin().arg("stress-dim").arg(&path).arg("--k").arg("2").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["stress_dim"], value["g_k"].as_str().unwrap().parse::<u64>().unwrap());
}

#[test]
fn experiment_report_emission_and_config_override() {
    let dir = std::env::temp_dir().join("gstress_cli_report");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let config = serde_json::json!({
        "specs": [
            { "kind": "sphere_uniform", "n": 20, "d": 4, "seed": 3 }
        ],
        "trials_per_spec": 15,
        "seed": 7
    });
    let cfg_path = dir.join("qlbt.json");
    std::fs::write(&cfg_path, serde_json::to_string(&config).unwrap()).unwrap();
    let out = bin()
        .args(["verify-qlbt", "--config"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(&dir)
        .args(["--format", "csv", "--seed", "8"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("verify-qlbt.json")).unwrap())
            .unwrap();
    assert_eq!(report["verdict"], serde_json::json!("pass"));
    assert_eq!(report["config"]["seed"], serde_json::json!(8));
    assert_eq!(report["trials"].as_array().unwrap().len(), 15);
    let csv = std::fs::read_to_string(dir.join("verify-qlbt.csv")).unwrap();
    assert!(csv.starts_with("trial,seed,skipped,violations"));
}

#[test]
fn bad_input_exits_nonzero() {
    let out = bin().arg("compute").arg("/nonexistent/file.txt").output().unwrap();
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
}
