use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use loadshape::manifest::{sha256_hex, RunManifest, MANIFEST_FILE};

fn loadshape(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loadshape")).current_dir(cwd).args(args).output().expect("binary runs")
}

fn ok(cwd: &Path, args: &[&str]) -> String {
    let out = loadshape(cwd, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(cwd: &Path, args: &[&str], code: i32) -> String {
    let out = loadshape(cwd, args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stderr).unwrap()
}

fn manifest(dir: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE)).unwrap()).unwrap()
}

/// Small population: 30 days keeps the pipeline fast.
fn synth_and_ingest(cwd: &Path) {
    ok(cwd, &["synth", "--out", "data", "--days", "30", "--seed", "5"]);
    let summary = ok(cwd, &["ingest", "--in", "data", "--out", "run"]);
    assert_eq!(summary.lines().next(), Some("93 properties, 2790 day records"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let err = fails(dir.path(), &["ingest", "--out", "run"], 2);
    assert!(err.contains("--in"), "{err}");
    fails(dir.path(), &["cluster", "--k", "0"], 2);
    fails(dir.path(), &["elbow", "--threads", "0"], 2);
    fails(dir.path(), &["frobnicate"], 2);
    fails(dir.path(), &["clean", "--policy", "guess"], 2);
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "nothing may be written");
}

#[test]
fn missing_stage_names_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let err = fails(dir.path(), &["clean", "--out", "run"], 1);
    assert!(err.starts_with("error: ") && err.contains("loadshape ingest"), "{err}");
    let err = fails(dir.path(), &["cluster", "--out", "run", "--k", "3"], 1);
    assert!(err.contains("loadshape profile"), "{err}");
    let err = fails(dir.path(), &["cluster", "--out", "run"], 1);
    assert!(err.contains("--k") && err.contains("loadshape elbow"), "{err}");
    let err = fails(dir.path(), &["ingest", "--in", "nowhere"], 1);
    assert!(err.contains("nowhere"), "{err}");
}

#[test]
fn pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cwd = dir.path();
    synth_and_ingest(cwd);
    let validity = ok(cwd, &["clean", "--out", "run", "--policy", "omit"]);
    assert!(validity.contains("Valid readings") && validity.contains("93 properties"), "{validity}");
    ok(cwd, &["profile", "--out", "run"]);
    let elbow = ok(cwd, &["elbow", "--out", "run", "--kmin", "2", "--kmax", "10", "--restarts", "50"]);
    assert!(elbow.contains("suggested k = 4"), "{elbow}");
    let elbow_csv = fs::read_to_string(cwd.join("run/elbow.csv")).unwrap();
    assert_eq!(elbow_csv.lines().skip(1).filter(|l| !l.starts_with("suggested_k")).count(), 9);
    assert!(elbow_csv.ends_with("suggested_k,4,\n"));

    // No --k: the elbow suggestion is used.
    let cluster = ok(cwd, &["cluster", "--out", "run", "--restarts", "50"]);
    assert!(cluster.starts_with("k = 4,"), "{cluster}");
    let assignments = fs::read_to_string(cwd.join("run/assignments.csv")).unwrap();
    assert_eq!(assignments.lines().count(), 94);

    fs::write(cwd.join("refs.csv"), format!("name,{}\nflat,{}\n", formats_header(), vec!["1"; 24].join(","))).unwrap();
    ok(cwd, &["report", "--out", "run", "--refs", "refs.csv", "--run-id", "demo"]);
    for name in ["cluster1", "cluster4", "elbow", "overlay"] {
        let svg = fs::read_to_string(cwd.join(format!("run/plots/demo_{name}.svg"))).unwrap();
        assert!(svg.starts_with("<?xml") && svg.contains("<polyline"), "{name}");
        assert!(cwd.join(format!("run/plots/demo_{name}.csv")).exists());
    }
    assert_eq!(fs::read_to_string(cwd.join("run/overlay_distances.csv")).unwrap().lines().count(), 1 + 4);

    let m = manifest(&cwd.join("run"));
    assert_eq!(m.input_dir.as_deref(), Some("data"));
    assert_eq!(m.run_id, "demo");
    let stages: Vec<_> = m.stages.keys().map(String::as_str).collect();
    assert_eq!(stages, ["clean", "cluster", "elbow", "ingest", "profile", "report"]);
    for stage in m.stages.values() {
        for output in &stage.outputs {
            let bytes = fs::read(cwd.join("run").join(&output.path)).unwrap();
            assert_eq!(sha256_hex(&bytes), output.sha256, "{}", output.path);
        }
    }
    assert_eq!(m.stages["cluster"].parameters["k"], "4");
    assert_eq!(manifest(&cwd.join("data")).stages["synth"].outputs.len(), 94);
}

fn formats_header() -> String {
    (0..24).map(|h| format!("h{h:02}")).collect::<Vec<_>>().join(",")
}

#[test]
fn rerun_gives_identical_digests() {
    let dir = tempfile::tempdir().unwrap();
    synth_and_ingest(dir.path());
    let first = manifest(&dir.path().join("run")).stages["ingest"].clone();
    ok(dir.path(), &["ingest", "--in", "data", "--out", "run"]);
    assert_eq!(manifest(&dir.path().join("run")).stages["ingest"], first);
}

#[test]
fn day_type_path() {
    let dir = tempfile::tempdir().unwrap();
    let cwd = dir.path();
    synth_and_ingest(cwd);
    fs::write(cwd.join("holidays.txt"), "1990-01-01\n").unwrap();
    fs::write(cwd.join("scheme.conf"), "axes = day_class, temperature\n").unwrap();
    let out = ok(cwd, &["label", "--out", "run", "--scheme", "scheme.conf", "--holidays", "holidays.txt"]);
    assert!(out.contains("0 days dropped"), "{out}");
    let labels = fs::read_to_string(cwd.join("run/labels.csv")).unwrap();
    assert!(labels.lines().any(|l| l.starts_with("h001,1990-01-01,holiday,,")), "{labels}");
    let out = ok(cwd, &["clean", "--out", "run", "--policy", "impute-by-daytype"]);
    assert!(out.contains("days imputed"), "{out}");
    let log = fs::read_to_string(cwd.join("run/imputation_log.csv")).unwrap();
    // Days whose cell lacks averages fall back to the unconditioned table, with a note.
    let fallbacks = log.lines().filter(|l| l.contains(",unconditioned,")).count();
    assert!(log.lines().any(|l| l.contains(",day_type_conditioned,")));
    let notes = fs::read_to_string(cwd.join("run/cleaning_notes.csv")).unwrap();
    assert_eq!(notes.lines().filter(|l| l.starts_with("fell_back,")).count(), fallbacks);
    let out = ok(cwd, &["profile", "--out", "run", "--grouping", "per-property-and-label", "--mode", "shape"]);
    assert!(out.contains("profiles"), "{out}");
    let profiles = fs::read_to_string(cwd.join("run/profiles.csv")).unwrap();
    assert!(profiles.lines().skip(1).all(|l| l.ends_with(",shape")));
    ok(cwd, &["cluster", "--out", "run", "--k", "3", "--restarts", "10"]);
}

#[test]
fn config_file_settings() {
    let dir = tempfile::tempdir().unwrap();
    let cwd = dir.path();
    synth_and_ingest(cwd);
    ok(cwd, &["clean", "--out", "run"]);
    ok(cwd, &["profile", "--out", "run"]);

    fs::write(cwd.join("run.conf"), "# clustering\ncluster.k = 2\ncluster.restarts = 5\n").unwrap();
    let out = ok(cwd, &["cluster", "--out", "run", "--config", "run.conf"]);
    assert!(out.starts_with("k = 2,"), "{out}");
    let out = ok(cwd, &["cluster", "--out", "run", "--config", "run.conf", "--k", "3"]);
    assert!(out.starts_with("k = 3,"), "flags win: {out}");
    assert_eq!(manifest(&cwd.join("run")).config_files, ["run.conf"]);

    fs::write(cwd.join("bad.conf"), "cluster.k = 2\ncluster.colour = red\n").unwrap();
    let err = fails(cwd, &["cluster", "--out", "run", "--config", "bad.conf"], 1);
    assert!(err.contains("bad.conf:2") && err.contains("cluster.colour"), "{err}");
    fs::write(cwd.join("zero.conf"), "cluster.k = 0\n").unwrap();
    fails(cwd, &["cluster", "--out", "run", "--config", "zero.conf"], 1);
    fs::write(cwd.join("scheme.conf"), "scheme.axes = tides\n").unwrap();
    let err = fails(cwd, &["profile", "--out", "run", "--config", "scheme.conf"], 1);
    assert!(err.contains("scheme.conf:1"), "{err}");
}
