use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hermite_persist::formats::decode_paths;
use hermite_persist::manifest::RunManifest;
use hermite_persist::cli::SEED_ENV;
use serde_json::Value;
use tempfile::TempDir;

fn cli(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite-persist"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove(SEED_ENV)
        .output()
        .unwrap()
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let code = |args: &[&str]| cli(args, dir.path()).status.code();
    assert_eq!(code(&["exponent", "--replicas", "0"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["exponent", "--H", "0.4"]), Some(2));
    assert_eq!(code(&["tail", "--n", "8", "--levels", "50,60", "--replicas", "100"]), Some(3));
    assert_eq!(code(&["exponent", "--Tgrid", "64,128", "--replicas", "100"]), Some(3));
    assert_eq!(code(&["rank", "--function", "nope"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn rank_of_centered_abs() {
    let dir = TempDir::new().unwrap();
    let out = cli(&["rank", "--function", "abs-centered", "--quiet"], dir.path());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v = json(dir.path().join("rank.json"));
    assert_eq!(v["rank"], 2);
    assert_eq!(v["convex_on_grid"], true);
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let runs: &[&[&str]] = &[
        &["exponent", "--Tgrid", "4..64", "--replicas", "3000"],
        &["simulate", "--n", "100", "--replicas", "50", "--format", "binary"],
        &["gci", "--replicas", "20000"],
    ];
    for args in runs {
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        for (dir, w) in [(&a, "1"), (&b, "8")] {
            let mut full = args.to_vec();
            full.extend(["--workers", w, "--quiet"]);
            assert!(cli(&full, dir.path()).status.success(), "{args:?}");
        }
        let name = args[0];
        for ext in ["json", if name == "simulate" { "hpth" } else { "csv" }] {
            let file = format!("{name}.{ext}");
            if !a.path().join(&file).exists() {
                continue;
            }
            assert_eq!(fs::read(a.path().join(&file)).unwrap(), fs::read(b.path().join(&file)).unwrap(), "{file}");
        }
    }
}

#[test]
fn simulate_binary_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = cli(&["simulate", "--m", "3", "--H", "0.8", "--n", "17", "--replicas", "5", "--format", "binary"], dir.path());
    assert!(out.status.success());
    let bin = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "hpth"))
        .unwrap();
    let block = decode_paths(&fs::read(bin).unwrap()).unwrap();
    assert_eq!((block.order, block.points, block.values.len()), (3, 17, 85));
    assert_eq!(block.hurst, 0.8);
}

#[test]
fn manifest_verifies_outputs() {
    let dir = TempDir::new().unwrap();
    assert!(cli(&["moments", "--ngrid", "16,32", "--replicas", "200"], dir.path()).status.success());
    let path = dir.path().join("moments.manifest.json");
    let manifest = RunManifest::load(&path).unwrap();
    assert_eq!(manifest.subcommand, "moments");
    assert!(!manifest.outputs.is_empty());
    assert!(manifest.verify(dir.path()).unwrap());

    let csv = dir.path().join("moments.csv");
    let mut bytes = fs::read(&csv).unwrap();
    bytes.push(b'\n');
    fs::write(&csv, bytes).unwrap();
    assert!(!manifest.verify(dir.path()).unwrap());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "m = 3\nH = 0.8\nseed = 11\nreplicas = 500\nn = 64\n").unwrap();
    let conf = conf.to_str().unwrap();
    let out = cli(&["tail", "--config", conf, "--m", "1", "--levels", "0.5,1,1.5", "--quiet"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let config = &json(dir.path().join("tail.json"))["config"];
    assert_eq!(config["m"], 1);
    assert_eq!(config["H"], 0.8);
    assert_eq!(config["seed"], 11);
    assert_eq!(config["replicas"], 500);
}

#[test]
fn seed_from_environment() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let run = |dir: &Path, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hermite-persist"));
        cmd.args(["decorrelate", "--n", "32", "--times", "0,16,32", "--replicas", "300", "--quiet", "--out"])
            .arg(dir)
            .env_remove(SEED_ENV);
        if let Some(s) = env {
            cmd.env(SEED_ENV, s);
        }
        assert!(cmd.output().unwrap().status.success());
        json(dir.join("decorrelate.json"))["config"]["seed"].clone()
    };
    assert_eq!(run(a.path(), Some("1234")), 1234);
    assert_ne!(run(b.path(), None), 1234);

    let c = TempDir::new().unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hermite-persist"));
    cmd.args(["rank", "--out"]).arg(c.path()).env(SEED_ENV, "many");
    assert_eq!(cmd.output().unwrap().status.code(), Some(2));
}

#[test]
fn injected_failure_leaves_no_outputs() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("out");
    let out = cli(
        &["exponent", "--Tgrid", "4..32", "--replicas", "100", "--fail-at-replica", "7", "--workers", "2"],
        &out_dir,
    );
    assert_eq!(out.status.code(), Some(1));
    let leftover = fs::read_dir(&out_dir).map(|d| d.count()).unwrap_or(0);
    assert_eq!(leftover, 0);
}

#[test]
fn persistence_reports_each_barrier() {
    let dir = TempDir::new().unwrap();
    let out = cli(
        &["persistence", "--Tgrid", "4..64", "--barrier", "-5,0,1", "--replicas", "2000", "--quiet"],
        dir.path(),
    );
    assert!(out.status.success());
    let v = json(dir.path().join("persistence.json"));
    let fits = v["fits"].as_array().unwrap();
    assert_eq!(fits.len(), 3);
    assert!(fits[0].get("error").is_some());
    assert!(fits[1]["theta"].as_f64().unwrap() > 0.0);
    let csv = fs::read_to_string(dir.path().join("persistence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 3);
}
