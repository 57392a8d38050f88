use std::path::Path;
use std::process::Command;

use mlock_cli::output::sha256_hex;
use mlock_cli::preset::reference_config;
use mlock_cli::{run_experiment, validate_config, CliError, Experiment, ExperimentConfig, MANIFEST_FILE};

fn config(text: &str, dir: &Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::from_toml_str(text).unwrap();
    c.output_dir = dir.to_path_buf();
    c
}

fn small(experiment: Experiment) -> String {
    let params = match experiment {
        Experiment::Comb => "beta = 0.3\npoints = 64\n".to_string(),
        Experiment::Lattice => "n_modes = 12\nmu_m = 1.0\nt_n = 0.2\nsteps = 20000\ngibbs_samples = 50\nwaveform_points = 16\nmax_k = 4\n".to_string(),
        Experiment::Pulse => "g_m = 0.01\n".to_string(),
        Experiment::Adler => "duration = \"0.05 s\"\nv_am_points = 3\nsegment_len = 4096\n".to_string(),
        Experiment::Seo | Experiment::Mml => {
            let preset = reference_config(Experiment::Mml).unwrap();
            let body = preset.split("[parameters]").nth(1).unwrap();
            let mut lines: Vec<String> = body
                .lines()
                .filter(|l| {
                    let k = l.split('=').next().unwrap().trim();
                    experiment == Experiment::Mml
                        || !["g_oa", "n_pi", "n_p", "gamma_om_ratio", "lambda_l", "delta_lambda", "l_r", "n_eff", "omega_r"]
                            .contains(&k)
                })
                .map(String::from)
                .collect();
            if experiment == Experiment::Seo {
                for l in lines.iter_mut() {
                    if l.starts_with("k_a1") {
                        *l = "k_a1 = \"1e7 1/m\"".into();
                    }
                }
            }
            lines.push("periods = 50".into());
            lines.push("rel_tol = 0.05".into());
            lines.join("\n")
        }
        Experiment::Noise => String::new(),
    };
    format!("experiment = \"{}\"\nseed = 7\n[parameters]\n{params}\n", experiment.name())
}

#[test]
fn every_experiment_writes_checksummed_tables() {
    for e in Experiment::ALL {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(&small(e), dir.path());
        assert!(validate_config(&cfg).is_empty(), "{e}: {:?}", validate_config(&cfg));
        let m = run_experiment(&cfg).unwrap_or_else(|err| panic!("{e}: {err}"));
        assert!(!m.outputs.is_empty(), "{e}");
        let mut listed: Vec<String> = m.outputs.iter().map(|o| o.file.clone()).collect();
        for o in &m.outputs {
            let bytes = std::fs::read(dir.path().join(&o.file)).unwrap();
            assert_eq!(sha256_hex(&bytes), o.sha256, "{e}: {}", o.file);
            assert_eq!(String::from_utf8(bytes).unwrap().lines().count(), o.rows + 1);
        }
        listed.push(MANIFEST_FILE.into());
        listed.sort();
        let mut on_disk: Vec<String> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|d| d.unwrap().file_name().into_string().unwrap())
            .collect();
        on_disk.sort();
        assert_eq!(listed, on_disk, "{e}");
        let manifest: serde_json::Value =
            serde_json::from_slice(&std::fs::read(dir.path().join(MANIFEST_FILE)).unwrap()).unwrap();
        assert_eq!(manifest["config"]["experiment"], e.name());
        assert_eq!(manifest["config"]["seed"], 7);
    }
}

#[test]
fn seo_summary_reports_both_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let m = run_experiment(&config(&small(Experiment::Seo), dir.path())).unwrap();
    let th = &m.summary["threshold"];
    let formula = th["formula"].as_f64().unwrap();
    let sim = th["simulated"].as_f64().unwrap();
    assert!((sim / formula - 1.0).abs() < 0.05);
    assert!(th["relative_gap"].as_f64().unwrap().abs() < 0.05);
}

#[test]
fn mml_summary_reports_the_noise_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let m = run_experiment(&config(&small(Experiment::Mml), dir.path())).unwrap();
    let ratio = m.summary["threshold_ratio"].as_f64().unwrap();
    let expected = m.summary["threshold_ratio_expected"].as_f64().unwrap();
    assert!((ratio / expected - 1.0).abs() < 0.01, "{ratio} vs {expected}");
}

#[test]
fn domain_failures_are_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let text = "experiment = \"lattice\"\n[parameters]\nn_modes = 8\nmu_m = 1.0\nt_n = 0.2\ndt = 0.5\n";
    match run_experiment(&config(text, dir.path())) {
        Err(e @ CliError::Validation(_)) => assert_eq!(e.exit_code(), 2),
        other => panic!("{other:?}"),
    }
}

fn mlock(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mlock"))
        .args(args)
        .current_dir(dir)
        .env_remove("MLOCK_OUTPUT_DIR")
        .output()
        .unwrap()
}

#[test]
fn binary_exit_codes_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("ok.toml"), small(Experiment::Comb)).unwrap();
    std::fs::write(d.join("bad.toml"), "experiment = \"comb\"\n[parameters]\nbeta = -1\n").unwrap();
    std::fs::write(d.join("broken.toml"), "experiment = ").unwrap();

    assert_eq!(mlock(&["validate", "ok.toml"], d).status.code(), Some(0));
    let bad = mlock(&["validate", "bad.toml"], d);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("beta must be positive"));
    assert_eq!(mlock(&["run", "broken.toml"], d).status.code(), Some(2));

    assert_eq!(mlock(&["run", "ok.toml", "--out", "a", "--seed", "3"], d).status.code(), Some(0));
    assert!(d.join("a/comb.tsv").exists());
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["seed"], 3);

    let env_run = Command::new(env!("CARGO_BIN_EXE_mlock"))
        .args(["run", "ok.toml"])
        .current_dir(d)
        .env("MLOCK_OUTPUT_DIR", "from_env")
        .output()
        .unwrap();
    assert_eq!(env_run.status.code(), Some(0));
    assert!(d.join("from_env/comb.tsv").exists());
}

#[test]
fn preset_command_prints_a_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [&[][..], &["--experiment", "adler"][..]] {
        let mut args = vec!["preset", "paper"];
        args.extend_from_slice(extra);
        let out = mlock(&args, dir.path());
        assert_eq!(out.status.code(), Some(0));
        let c = ExperimentConfig::from_toml_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert!(validate_config(&c).is_empty());
    }
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // a 1 ms record is shorter than one Welch segment
    std::fs::write(
        dir.path().join("short.toml"),
        "experiment = \"adler\"\n[parameters]\nduration = \"1 ms\"\nsegment_len = 65536\n",
    )
    .unwrap();
    let out = mlock(&["run", "short.toml", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
