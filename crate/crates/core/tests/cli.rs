use std::process::Command;

fn apsel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_apsel"))
}

#[test]
fn list_presets_names_every_preset() {
    let out = apsel().arg("list-presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for p in apsel::experiments::presets::PRESETS {
        assert!(text.contains(p.name));
    }
}

#[test]
fn preset_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = apsel()
        .args(["preset", "decay-comparison", "--reps", "2", "--periods", "15", "--seed", "9", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("ss.csv")).unwrap();
    assert_eq!(csv.lines().count(), 16);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["master_seed"], 9);
}

#[test]
fn run_accepts_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    let out_dir = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            r#"
name = "cli-test"
periods = 12
repetitions = 2
output = "{}"
policies = [{{ kind = "strongest_signal" }}, {{ kind = "epsilon_greedy", epsilon = {{ kind = "static", value = 0.1 }} }}]

[scenario]
area = [80.0, 80.0]
demand_bps = 4e6
aps = {{ kind = "grid", rows = 4, cols = 4 }}
stas = {{ kind = "clustered", count = 64, per_cluster = 10, side = 10.0 }}
"#,
            out_dir.display()
        ),
    )
    .unwrap();
    let out = apsel().arg("run").arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("eps-greedy_eps0.1.csv").exists());
    assert!(out_dir.join("summary.csv").exists());
}

#[test]
fn invalid_config_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        r#"
name = "bad"
repetitions = 0
policies = [{ kind = "strongest_signal" }]
[scenario]
area = [80.0, 80.0]
demand_bps = 4e6
aps = { kind = "uniform", count = 4 }
stas = { kind = "uniform", count = 4 }
"#,
    )
    .unwrap();
    let out = apsel().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("repetitions"));

    std::fs::write(&cfg, "name = [").unwrap();
    assert_eq!(apsel().arg("run").arg(&cfg).output().unwrap().status.code(), Some(2));
    assert_eq!(apsel().args(["preset", "nope"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn export_scenario_emits_json() {
    let out = apsel()
        .args(["export-scenario", "--preset", "ap-scaling", "--point", "ss_aps32", "--rep", "1"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["aps"].as_array().unwrap().len(), 32);
    assert_eq!(v["stas"].as_array().unwrap().len(), 100);
    assert_eq!(v["links"].as_array().unwrap().len(), 100);
    assert_eq!(v["links"][0].as_array().unwrap().len(), 32);

    let again = apsel()
        .args(["export-scenario", "--preset", "ap-scaling", "--point", "ss_aps32", "--rep", "1"])
        .output()
        .unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn dump_config_is_loadable() {
    let out = apsel().args(["preset", "sticky-sweep-uniform", "--dump-config"]).output().unwrap();
    assert!(out.status.success());
    let cfg = apsel::experiments::ExperimentConfig::from_toml_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(cfg.name, "sticky-sweep-uniform");
}
