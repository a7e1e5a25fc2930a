use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use omnisurf_cli::output::MANIFEST_FILE;
use omnisurf_cli::run::{
    CONSISTENCY_CSV, CONSISTENCY_JSON, GAIN_CSV, PATTERN_REFLECT_CSV, PATTERN_TRANSMIT_CSV, REGIONS_JSON, SWEEP_CSV,
};
use omnisurf_cli::{parse_scenario, run, Command, Flags};
use serde_json::Value;

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_omnisurf"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run_doc(cmd: Command, doc: &str) -> i32 {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", doc);
    run(cmd, &path, &Flags::new(dir.path().join("out")))
}

#[test]
fn minimal_document_gets_documented_defaults() {
    let s = parse_scenario("{}").unwrap();
    let w = s.wavelength().unwrap();
    assert!((w.frequency() - 28e9).abs() < 1e-3);
    let g = s.geometry().unwrap();
    assert_eq!((g.nx, g.ny), (10, 10));
    assert!((g.dx - w.meters() / 2.0).abs() < 1e-18 && g.dx == g.dy);
    let m = s.build(Path::new(".")).unwrap();
    assert_eq!(m.source.cos_incidence(&g.origin), 1.0);
    assert!(m.coeffs.is_lossless());
    assert_eq!(run_doc(Command::Validate, "{}"), 0);
}

#[test]
fn every_example_validates() {
    for entry in fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")).unwrap() {
        let p = entry.unwrap().path();
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(run(Command::Validate, &p, &Flags::new(dir.path())), 0, "{}", p.display());
    }
}

#[test]
fn passivity_is_checked_at_load() {
    let doc = r#"{"hardware": {"phase_shift": {"beta_r": [0.5, 0.9, 0.5, 0.5], "beta_t": [0.5, 0.9, 0.5, 0.5]}},
                 "surface": {"nx": 2, "ny": 2}}"#;
    let e = parse_scenario(doc).unwrap_err();
    assert!(e.message.contains("element 1") && e.message.contains("1.62"), "{}", e.message);
    assert_eq!(e.exit_code(), 2);
    assert_eq!(run_doc(Command::Gain, doc), 2);
    assert_eq!(run_doc(Command::Validate, doc), 1);
}

#[test]
fn receiver_side_must_match_z() {
    let doc = r#"{"receivers": [{"position": [0, 0, -1], "side": "transmit"}]}"#;
    let e = parse_scenario(doc).unwrap_err();
    assert!(e.message.contains("tagged transmit"), "{}", e.message);
    assert_eq!(run_doc(Command::Gain, doc), 2);
}

#[test]
fn schema_errors_name_the_path() {
    let e = parse_scenario(r#"{"surface": {"nx": "ten"}}"#).unwrap_err();
    assert!(e.message.contains("surface.nx"), "{}", e.message);
    let e = parse_scenario(r#"{"hardware": {"phase_shift": {}, "impedance": {"ye": 0, "zm": 0}}}"#).unwrap_err();
    assert_eq!(e.exit_code(), 1);
    let e = parse_scenario(r#"{"wavelength": 0.01, "frequency": 3e10}"#).unwrap_err();
    assert!(e.message.contains("not both"));
    let e = parse_scenario(r#"{"sweep": {"parameter": "wavelength", "start": 0.01, "stop": 0.02, "count": 1}}"#).unwrap_err();
    assert!(e.message.contains("at least 2"));
}

#[test]
fn numerical_failures_exit_3() {
    // a shorted element with no self impedance makes the port network singular
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.json", r#"{"re": [[0, 0], [0, 0]], "im": [[0, 0], [0, 0]]}"#);
    let path = write(
        dir.path(),
        "s.json",
        r#"{"surface": {"nx": 1, "ny": 1}, "receivers": [{"position": [0, 0, 1]}],
            "channel_models": ["equivalent_circuit"], "circuit": {"matrix_file": "z.json"}}"#,
    );
    assert_eq!(run(Command::Gain, &path, &Flags::new(dir.path())), 3);
    let doc = r#"{"receivers": [{"id": "a", "position": [0, 0, -1]}, {"id": "b", "position": [0, 0, -1]}],
                  "channel_models": ["equivalent_circuit"]}"#;
    assert_eq!(run_doc(Command::Gain, doc), 3);
}

#[test]
fn gain_csv_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for workers in [1, 3] {
        let out = dir.path().join(format!("w{workers}"));
        let flags = Flags { workers: Some(workers), ..Flags::new(&out) };
        assert_eq!(run(Command::Gain, &example("near_field_circuit.json"), &flags), 0);
        bodies.push(fs::read(out.join(GAIN_CSV)).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let text = String::from_utf8(bodies.pop().unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scenario_digest,model,receiver,sweep_value,gain_db,phase_rad");
    assert_eq!(lines.len(), 1 + 2 * 6);
}

#[test]
fn far_field_compare_agrees() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(Command::Compare, &example("far_field.json"), &Flags::new(dir.path())), 0);
    let csv = fs::read_to_string(dir.path().join(CONSISTENCY_CSV)).unwrap();
    let mut n = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let db: f64 = f[4].parse().unwrap();
        let rad: f64 = f[5].parse().unwrap();
        assert!(db < 0.5 && rad < 5f64.to_radians(), "{line}");
        n += 1;
    }
    assert_eq!(n, 2 * 6);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join(CONSISTENCY_JSON)).unwrap()).unwrap();
    for rx in report["receivers"].as_array().unwrap() {
        assert_eq!(rx["region"], "FarField");
        assert!(rx["outcomes"].as_array().unwrap().iter().all(|o| o["valid"] == true));
    }
}

#[test]
fn regions_at_a_thousand_wavelengths() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"wavelength": 0.01, "receivers": [{"id": "far", "position": [0, 0, -10]},
                                                    {"id": "near", "position": [0, 0, 0.05]}]}"#;
    let path = write(dir.path(), "s.json", doc);
    assert_eq!(run(Command::Regions, &path, &Flags::new(dir.path())), 0);
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join(REGIONS_JSON)).unwrap()).unwrap();
    let f = r["fraunhofer_boundary_m"].as_f64().unwrap();
    assert!((f / 0.01 - 100.0).abs() < 1e-9);
    let reactive = r["reactive_boundary_m"].as_f64().unwrap();
    let d = r["aperture_diagonal_m"].as_f64().unwrap();
    assert!((reactive - 0.62 * (d.powi(3) / 0.01).sqrt()).abs() < 1e-12);
    assert_eq!(r["receivers"][0]["region"], "FarField");
    assert_eq!(r["receivers"][1]["region"], "ReactiveNearField");
}

#[test]
fn sweep_rows_are_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let flags = Flags { workers: Some(4), ..Flags::new(dir.path()) };
    assert_eq!(run(Command::Sweep, &example("incidence_sweep.json"), &flags), 0);
    let csv = fs::read_to_string(dir.path().join(SWEEP_CSV)).unwrap();
    let keys: Vec<(f64, String, String)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[3].parse().unwrap(), f[2].to_string(), f[1].to_string())
        })
        .collect();
    assert_eq!(keys.len(), 5 * 2 * 2);
    let sweep: Vec<f64> = keys.iter().map(|k| k.0).collect();
    assert!(sweep.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(keys[0], (0.0, "specular".into(), "ray_tracing".into()));
    assert_eq!(keys[3], (0.0, "through".into(), "fresnel_kirchhoff".into()));
    assert_eq!(*sweep.last().unwrap(), 40.0);
}

#[test]
fn sweep_without_block_is_a_config_error() {
    assert_eq!(run_doc(Command::Sweep, "{}"), 1);
}

#[test]
fn pattern_files_have_published_header() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"surface": {"nx": 4, "ny": 4}}"#;
    let path = write(dir.path(), "s.json", doc);
    let flags = Flags { resolution_deg: Some(1.0), ..Flags::new(dir.path()) };
    assert_eq!(run(Command::Pattern, &path, &flags), 0);
    for name in [PATTERN_REFLECT_CSV, PATTERN_TRANSMIT_CSV] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("theta_rad,phi_rad,power_db"));
        assert_eq!(lines.next(), Some("0,0,0"));
        assert_eq!(lines.count() + 1, 90 * 360);
    }
    let flags = Flags { resolution_deg: Some(2.0), ..Flags::new(dir.path()) };
    assert_eq!(run(Command::Pattern, &path, &flags), 1);
    let flags = Flags { models: Some(vec!["equivalent_circuit".into()]), ..Flags::new(dir.path()) };
    assert_eq!(run(Command::Pattern, &path, &flags), 1);
}

#[test]
fn every_run_appends_a_manifest_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", r#"{"receivers": [{"position": [0, 0, 3]}]}"#);
    let flags = Flags::new(dir.path().join("out"));
    assert_eq!(run(Command::Gain, &path, &flags), 0);
    assert_eq!(run(Command::Gain, &dir.path().join("missing.json"), &flags), 1);
    let text = fs::read_to_string(dir.path().join("out").join(MANIFEST_FILE)).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["exit_code"], 0);
    assert_eq!(lines[0]["scenario_digest"].as_str().unwrap().len(), 64);
    assert!(lines[0]["wall_time_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(lines[0]["outputs"].as_array().unwrap().len(), 1);
    assert_eq!(lines[1]["exit_code"], 1);
    assert!(lines[1]["error"].as_str().unwrap().contains("missing.json"));
}

#[test]
fn models_flag_overrides_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", r#"{"receivers": [{"position": [0, 0, 3]}]}"#);
    let flags = Flags { models: Some(vec!["ray_tracing".into(), "equivalent_circuit".into()]), ..Flags::new(dir.path()) };
    assert_eq!(run(Command::Gain, &path, &flags), 0);
    let csv = fs::read_to_string(dir.path().join(GAIN_CSV)).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains(",equivalent_circuit,rx0,,"));
    let flags = Flags { models: Some(vec!["bogus".into()]), ..Flags::new(dir.path()) };
    assert_eq!(run(Command::Gain, &path, &flags), 1);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let ok = bin().args(["validate", "--scenario"]).arg(example("minimal.json")).arg("--out").arg(&out).status().unwrap();
    assert_eq!(ok.code(), Some(0));
    let usage = bin().arg("validate").status().unwrap();
    assert_eq!(usage.code(), Some(1));
    let bad_workers = bin()
        .args(["gain", "--scenario"])
        .arg(example("minimal.json"))
        .arg("--out")
        .arg(&out)
        .env("OMNISURF_WORKERS", "many")
        .status()
        .unwrap();
    assert_eq!(bad_workers.code(), Some(1));
    let p = write(dir.path(), "bad.json", r#"{"receivers": [{"position": [0, 0, 0]}]}"#);
    let physics = bin().args(["gain", "--scenario"]).arg(&p).arg("--out").arg(&out).output().unwrap();
    assert_eq!(physics.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&physics.stderr).contains("surface plane"));
}

#[test]
fn workers_env_fallback_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let st = bin()
        .args(["validate", "--scenario"])
        .arg(example("minimal.json"))
        .arg("--out")
        .arg(&out)
        .env("OMNISURF_WORKERS", "2")
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let m: Value = serde_json::from_str(fs::read_to_string(out.join(MANIFEST_FILE)).unwrap().trim()).unwrap();
    assert_eq!(m["workers"], 2);
}
