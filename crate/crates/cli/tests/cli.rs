use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use longwave_cli::{verify_manifest, ConfigError, Experiment, ExperimentConfig, RunManifest};
use proptest::prelude::*;

fn longwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_longwave")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

// small identities run, a couple of seconds in debug builds
const QUICK: &str = "experiment = \"identities\"\nn = 128\neps_ladder = [0.1, 0.2, 0.3, 0.4, 0.5]\n";

#[test]
fn list_names_every_experiment() {
    let o = longwave(&["list-experiments"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for e in Experiment::ALL {
        assert!(text.lines().any(|l| l.starts_with(e.name())), "missing {}", e.name());
    }
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|x| x == "toml") {
            let o = longwave(&["validate", "--config", p.to_str().unwrap()]);
            assert!(o.status.success(), "{}: {}", p.display(), stderr(&o));
            seen += 1;
        }
    }
    assert_eq!(seen, Experiment::ALL.len());
}

#[test]
fn validate_rejects_unknown_experiment() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write(tmp.path(), "c.toml", "experiment = \"tsunami\"\n");
    let o = longwave(&["validate", "--config", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown experiment `tsunami`"));
}

#[test]
fn validate_lists_every_problem() {
    let tmp = tempfile::tempdir().unwrap();
    let p =
        write(tmp.path(), "c.toml", "experiment = \"kdv-soliton\"\nn = 100\ndt = -1.0\n[thresholds]\nbogus = 1.0\n");
    let o = longwave(&["validate", "--config", &p]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for needle in ["unknown threshold `bogus`", "n must be a power of two", "dt must be positive"] {
        assert!(err.contains(needle), "{needle} not in {err}");
    }
}

#[test]
fn missing_config_file_is_exit_2() {
    let o = longwave(&["run", "--config", "/nonexistent/longwave.toml", "--out", "/tmp/unused"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_keys_are_rejected() {
    let e = ExperimentConfig::from_toml_str("experiment = \"identities\"\nsteps = 3\n").unwrap_err();
    assert!(matches!(e, ConfigError::Parse(_)));
}

#[test]
fn narrow_ladder_only_matters_for_residual_scaling() {
    let narrow = "eps_ladder = [0.2, 0.25, 0.3, 0.35]\n";
    assert!(ExperimentConfig::from_toml_str(&format!("experiment = \"error-scaling\"\n{narrow}")).is_ok());
    let e = ExperimentConfig::from_toml_str(&format!("experiment = \"residual-scaling\"\n{narrow}")).unwrap_err();
    assert!(e.to_string().contains("factor of 3"));
}

#[test]
fn defaults_round_trip_through_toml() {
    for e in Experiment::ALL {
        let cfg = e.default_config();
        assert!(cfg.problems().is_empty(), "{e}: {:?}", cfg.problems());
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }
}

#[test]
fn hash_ignores_output_dir() {
    let a = ExperimentConfig::from_toml_str(QUICK).unwrap();
    let b = ExperimentConfig::from_toml_str(&format!("{QUICK}output_dir = \"/tmp/x\"\n")).unwrap();
    let c = ExperimentConfig::from_toml_str(&format!("{QUICK}seed = 7\n")).unwrap();
    assert_eq!(a.hash(), b.hash());
    assert_ne!(a.hash(), c.hash());
}

#[test]
fn runs_are_reproducible_and_manifests_complete() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write(tmp.path(), "c.toml", QUICK);
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for (d, jobs) in dirs.iter().zip(["1", "2"]) {
        let o = longwave(&["run", "--config", &p, "--out", d.to_str().unwrap(), "--jobs", jobs]);
        assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("identities: PASS"));
        assert!(verify_manifest(d).unwrap().is_empty());
    }
    let manifest: RunManifest =
        serde_json::from_str(&fs::read_to_string(dirs[0].join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.experiment, "identities");
    assert_eq!(manifest.config_hash, ExperimentConfig::from_toml_str(QUICK).unwrap().hash());
    assert!(manifest.artifacts.iter().any(|a| a.path == "config.resolved.toml"));
    for a in &manifest.artifacts {
        let x = fs::read(dirs[0].join(&a.path)).unwrap();
        let y = fs::read(dirs[1].join(&a.path)).unwrap();
        assert_eq!(x, y, "{} differs between runs", a.path);
    }
    // the resolved config reproduces the same hash
    let resolved = fs::read_to_string(dirs[0].join("config.resolved.toml")).unwrap();
    assert_eq!(ExperimentConfig::from_toml_str(&resolved).unwrap().hash(), manifest.config_hash);
}

#[test]
fn tampering_is_detected() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write(tmp.path(), "c.toml", QUICK);
    let d = tmp.path().join("run");
    assert!(longwave(&["run", "--config", &p, "--out", d.to_str().unwrap()]).status.success());
    fs::write(d.join("identities.csv"), "changed\n").unwrap();
    fs::write(d.join("stray.txt"), "x").unwrap();
    fs::remove_file(d.join("workhorse.svg")).unwrap();
    let problems = verify_manifest(&d).unwrap();
    assert_eq!(problems.len(), 3, "{problems:?}");
}

#[test]
fn failed_check_is_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write(tmp.path(), "c.toml", &format!("{QUICK}[thresholds]\nworkhorse_slope_min = 100.0\n"));
    let d = tmp.path().join("run");
    let o = longwave(&["run", "--config", &p, "--out", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
    // outputs are still written for a failed run
    assert!(verify_manifest(&d).unwrap().is_empty());
}

#[test]
fn solver_abort_is_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write(tmp.path(), "c.toml", "experiment = \"kdv-soliton\"\ndt = 0.5\nt0 = 20.0\nsample_every = 1\n");
    let d = tmp.path().join("run");
    let o = longwave(&["run", "--config", &p, "--out", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("kdv evolve"));
    assert!(!d.join("manifest.json").exists());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_hash_follows_content(n in 4u32..12, seed in 0..=i64::MAX as u64, eps in 0.01f64..0.9) {
        let text = format!("experiment = \"identities\"\nn = {}\nseed = {seed}\neps = {eps:?}\n", 1u64 << n);
        let a = ExperimentConfig::from_toml_str(&text).unwrap();
        let b = ExperimentConfig::from_toml_str(&a.to_toml()).unwrap();
        prop_assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::from_toml_str(&format!("{text}t0 = {:?}\n", a.t0 + 1.0)).unwrap();
        prop_assert_ne!(a.hash(), c.hash());
    }
}
