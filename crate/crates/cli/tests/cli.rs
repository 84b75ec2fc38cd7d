use std::path::Path;
use std::process::{Command, Output};

const RELIABILITY: &str = "\
[field]
q0 = 2
s = 2
m = 2

[code]
lengths = 2, 2
k = 2

[campaign]
kind = reliability
trials = 40
seed = 5
";

fn codec(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_codec"));
    cmd.args(args).env_remove("CODEC_ENUM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn validate_reports_ok_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.cfg", RELIABILITY);
    let out = codec(&["validate", &good], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: reliability campaign: q = 4"));

    let bad = write(dir.path(), "bad.cfg", &RELIABILITY.replace("lengths = 2, 2", "lengths = 2, 2, 2, 2"));
    let out = codec(&["validate", &bad], &[]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("bad.cfg:7:11:") && msg.contains("ℓ ≤ q − 1"), "{msg}");

    assert_eq!(codec(&["validate", "/nonexistent/file.cfg"], &[]).status.code(), Some(2));
}

#[test]
fn reliability_is_reproducible_and_complete_inside_the_radius() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.cfg", RELIABILITY);
    let a = codec(&["run", &cfg, "--workers", "1"], &[]);
    let b = codec(&["run", &cfg, "--workers", "3"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let table = rows(&a);
    assert_eq!(table[0][..6], ["t", "rho", "inside_radius", "trials", "successes", "success_rate"]);
    for r in &table[1..] {
        if r[2] == "1" {
            assert_eq!(r[5], "1", "{r:?}");
        }
    }
    let first = &table[1];
    assert_eq!((first[0].as_str(), first[1].as_str(), first[5].as_str()), ("0", "0", "1"));
    let other_seed = codec(&["run", &cfg, "--seed", "6"], &[]);
    assert_ne!(a.stdout, other_seed.stdout);
}

#[test]
fn overrides_output_and_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.cfg", &RELIABILITY.replace("[campaign]", "[channel]\nt = 1\nrho = 0\n\n[campaign]"));
    let csv = dir.path().join("out.csv");
    let log = dir.path().join("trials.jsonl");
    let out = codec(&["run", &cfg, "--trials", "7", "--out", csv.to_str().unwrap(), "--transcript", log.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    let records = std::fs::read_to_string(&log).unwrap();
    assert_eq!(records.lines().count(), 14);
    assert!(records.lines().all(|l| l.starts_with("{\"seed\":") && l.contains("\"outcome\":")));
}

#[test]
fn secrecy_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.cfg",
        "[field]\nq0 = 2\ns = 2\nm = 2\n[code]\nlengths = 2\nk = 2\nk2 = 1\n[campaign]\nkind = secrecy\n",
    );
    let out = codec(&["run", &cfg], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&out);
    assert_eq!(table[0], ["mu", "wiretaps", "sampled", "max_leakage_formula", "max_leakage_empirical", "leaking_wiretaps", "secure"]);
    // μ ≤ k2: nothing leaks; μ = k2 + 1: some wiretap sees the secret.
    assert_eq!(table[1][3..5], ["0", "0"]);
    assert_eq!(table[2][3..5], ["0", "0"]);
    assert_eq!(table[3][3..5], ["1", "1"]);
    // With a cap too small to enumerate, wiretaps are sampled and flagged.
    let capped = codec(&["run", &cfg, "--trials", "5"], &[("CODEC_ENUM_CAP", "10")]);
    let table = rows(&capped);
    assert_eq!(table[2][1..3], ["5", "1"]);
    assert_eq!(table[2][4], "NA");
    assert_eq!(codec(&["run", &cfg], &[("CODEC_ENUM_CAP", "-1")]).status.code(), Some(2));
}

#[test]
fn bench_emits_slopes() {
    let out = codec(&["bench", "--max-n", "32", "--trials", "2"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&out);
    let ns: Vec<&str> = table[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ns, ["4", "8", "16", "32", "slope"]);
    let slope: f64 = table.last().unwrap()[2].parse().unwrap();
    assert!((1.7..=2.3).contains(&slope));
    assert_eq!(codec(&["bench", "--max-n", "2"], &[]).status.code(), Some(2));
}

#[test]
fn bounds_rows_meet_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.cfg", "[field]\nq0 = 5\nm = 2\n[code]\nlengths = 2, 2, 2\n[campaign]\nkind = bounds\n");
    let out = codec(&["run", &cfg], &[]);
    assert_eq!(out.status.code(), Some(0));
    let table = rows(&out);
    assert!(table.len() > 20);
    for r in &table[1..] {
        assert_eq!(r[3], r[4]);
        assert_eq!(r[11], "1");
        let (gap, bound): (f64, f64) = (r[9].parse().unwrap(), r[10].parse().unwrap());
        assert!(gap <= bound);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(codec(&[], &[]).status.code(), Some(2));
    assert_eq!(codec(&["run"], &[]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.cfg", RELIABILITY);
    assert_eq!(codec(&["run", &cfg, "--workers", "0"], &[]).status.code(), Some(2));
}
