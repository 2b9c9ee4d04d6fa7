//! End-to-end command-line tests: exit codes, file outputs, report schema,
//! and pipeline determinism.

mod common;

use common::random_signal;
use std::fs;
use std::path::Path;
use wavemark::cli::run;
use wavemark::{write_wav, SampleFormat};

const PANGRAM: &str = "The quick brown fox jumps over the lazy dog";

fn cli(args: &[&str]) -> i32 {
    run(std::iter::once("wavemark").chain(args.iter().copied()))
}

fn fixture_wav(dir: &Path, name: &str, seed: u64) -> String {
    let signal = random_signal(seed, 44100, 0.3, 44100);
    let path = dir.join(name);
    fs::write(&path, write_wav(&signal, SampleFormat::Float32)).unwrap();
    path.display().to_string()
}

#[test]
fn embed_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 1);
    let output = dir.path().join("out.wav").display().to_string();

    assert_eq!(
        cli(&["embed", "-i", &input, "-o", &output, "-m", PANGRAM]),
        0
    );
    assert!(Path::new(&output).exists());
    assert_eq!(cli(&["verify", "-i", &output, "-m", PANGRAM]), 0);
    assert_eq!(cli(&["verify", "-i", &output, "-m", "wrong message"]), 1);
}

#[test]
fn usage_and_io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 2);

    // Missing required message group.
    assert_eq!(cli(&["verify", "-i", &input]), 2);
    // Unknown subcommand.
    assert_eq!(cli(&["scramble", "-i", &input]), 2);
    // Nonexistent input file.
    assert_eq!(
        cli(&["verify", "-i", "no_such_file.wav", "-m", PANGRAM]),
        2
    );
    // Unparseable container.
    let bogus = dir.path().join("bogus.wav");
    fs::write(&bogus, b"not a riff file").unwrap();
    assert_eq!(
        cli(&["verify", "-i", &bogus.display().to_string(), "-m", PANGRAM]),
        2
    );
}

#[test]
fn report_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 3);
    let output = dir.path().join("out.wav").display().to_string();
    let report_path = dir.path().join("report.json");

    assert_eq!(
        cli(&[
            "embed",
            "-i",
            &input,
            "-o",
            &output,
            "-m",
            PANGRAM,
            "--report",
            &report_path.display().to_string(),
        ]),
        0
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(&report_path).unwrap()).unwrap();
    for key in [
        "command",
        "config",
        "input",
        "digest_expected",
        "digest_extracted_primary",
        "digest_extracted_secondary",
        "copies_agree",
        "match",
        "metrics",
    ] {
        assert!(report.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(report["command"], "embed");
    assert_eq!(
        report["digest_expected"],
        "9e107d9d372bb6826bd81d3542a419d6"
    );
    assert_eq!(report["match"], true);
    assert_eq!(report["config"]["mode"], "float");
    assert_eq!(report["config"]["scale"], 1e-4);
    assert_eq!(report["config"]["mid_bin"], 150);
    for key in ["md", "ad", "nad", "mse", "nmse", "snr_db", "psnr_db", "nc", "qc"] {
        assert!(report["metrics"].get(key).is_some(), "missing metric {key}");
    }
}

#[test]
fn seal_unseal_chain_preserves_verification() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 4);
    let marked = dir.path().join("marked.wav").display().to_string();
    let sealed = dir.path().join("sealed.wav").display().to_string();
    let opened = dir.path().join("opened.wav").display().to_string();

    assert_eq!(cli(&["embed", "-i", &input, "-o", &marked, "-m", PANGRAM]), 0);
    assert_eq!(cli(&["seal", "-i", &marked, "-o", &sealed]), 0);
    assert_eq!(cli(&["unseal", "-i", &sealed, "-o", &opened]), 0);
    assert_eq!(cli(&["verify", "-i", &opened, "-m", PANGRAM]), 0);
}

#[test]
fn extract_and_metrics_commands() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 5);
    let output = dir.path().join("out.wav").display().to_string();
    assert_eq!(cli(&["embed", "-i", &input, "-o", &output, "-m", PANGRAM]), 0);

    let extract_report = dir.path().join("extract.json");
    assert_eq!(
        cli(&[
            "extract",
            "-i",
            &output,
            "--report",
            &extract_report.display().to_string(),
        ]),
        0
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(&extract_report).unwrap()).unwrap();
    assert_eq!(
        report["digest_extracted_primary"],
        "9e107d9d372bb6826bd81d3542a419d6"
    );
    assert_eq!(report["copies_agree"], true);
    assert_eq!(report["digest_expected"], serde_json::Value::Null);

    let metrics_report = dir.path().join("metrics.json");
    assert_eq!(
        cli(&[
            "metrics",
            "--original",
            &input,
            "--modified",
            &output,
            "--report",
            &metrics_report.display().to_string(),
        ]),
        0
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(&metrics_report).unwrap()).unwrap();
    assert!(report["metrics"]["snr_db"].as_f64().unwrap() > 0.0);
    assert_eq!(report["metrics_per_channel"].as_array().unwrap().len(), 2);
    assert_eq!(report["input"].as_array().unwrap().len(), 2);
}

#[test]
fn config_file_overrides_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 6);
    let output = dir.path().join("out.wav").display().to_string();
    let cfg_path = dir.path().join("cfg.json");
    fs::write(&cfg_path, br#"{"scale": 0.0002, "mid_bin": 160}"#).unwrap();
    let report_path = dir.path().join("report.json");

    assert_eq!(
        cli(&[
            "embed",
            "-i",
            &input,
            "-o",
            &output,
            "-m",
            PANGRAM,
            "-c",
            &cfg_path.display().to_string(),
            "--report",
            &report_path.display().to_string(),
        ]),
        0
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(&report_path).unwrap()).unwrap();
    assert_eq!(report["config"]["scale"], 0.0002);
    assert_eq!(report["config"]["mid_bin"], 160);

    // Verification must use the same layout to succeed.
    assert_eq!(
        cli(&[
            "verify",
            "-i",
            &output,
            "-m",
            PANGRAM,
            "-c",
            &cfg_path.display().to_string(),
        ]),
        0
    );

    // A malformed config is a usage error.
    let bad_cfg = dir.path().join("bad.json");
    fs::write(&bad_cfg, br#"{"scael": 1}"#).unwrap();
    assert_eq!(
        cli(&[
            "verify",
            "-i",
            &output,
            "-m",
            PANGRAM,
            "-c",
            &bad_cfg.display().to_string(),
        ]),
        2
    );
}

#[test]
fn pcm16_mode_round_trips_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture_wav(dir.path(), "in.wav", 7);
    let output = dir.path().join("out.wav").display().to_string();

    assert_eq!(
        cli(&[
            "embed", "-i", &input, "-o", &output, "-m", PANGRAM, "--mode", "pcm16",
        ]),
        0
    );
    assert_eq!(
        cli(&["verify", "-i", &output, "-m", PANGRAM, "--mode", "pcm16"]),
        0
    );
    // Decoding with the float-mode scale reads garbage levels, so the
    // fragile check refuses the file.
    assert_eq!(cli(&["verify", "-i", &output, "-m", PANGRAM]), 1);
}

#[test]
fn demo_is_deterministic_and_reports_zero_ber() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("d1");
    let out2 = dir.path().join("d2");
    let report_path = dir.path().join("demo.json");

    assert_eq!(
        cli(&[
            "demo",
            "--seed",
            "3",
            "--out-dir",
            &out1.display().to_string(),
            "--report",
            &report_path.display().to_string(),
        ]),
        0
    );
    assert_eq!(
        cli(&["demo", "--seed", "3", "--out-dir", &out2.display().to_string()]),
        0
    );

    let mut names: Vec<String> = fs::read_dir(&out1)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 10, "five fixtures plus five sealed outputs");
    for name in &names {
        let a = fs::read(out1.join(name)).unwrap();
        let b = fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical seeds");
    }

    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(&report_path).unwrap()).unwrap();
    let songs = report["songs"].as_array().unwrap();
    assert_eq!(songs.len(), 5);
    for song in songs {
        assert_eq!(song["ber"], 0.0, "{}", song["name"]);
        assert_eq!(song["match"], true);
    }
}
