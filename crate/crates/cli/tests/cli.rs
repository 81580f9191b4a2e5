//! End-to-end tests driving the built binary.

use std::path::Path;
use std::process::{Command, Output};

fn netchange(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netchange"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should run")
}

fn ok(args: &[&str], dir: &Path) -> Output {
    let out = netchange(args, dir);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn generate_detect_score_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    ok(
        &[
            "generate",
            "--out-dir",
            "data",
            "--count",
            "1",
            "--seed",
            "3",
            "--n-samples",
            "600",
        ],
        d,
    );
    assert!(d.join("data/trace_0003.csv").exists());
    assert!(d.join("data/labels_0003.csv").exists());
    assert!(d.join("data/manifest.json").exists());

    ok(
        &[
            "detect",
            "--preset",
            "cpt_poisson",
            "--penalty",
            "MBIC",
            "--input",
            "data/trace_0003.csv",
            "--output",
            "cps.csv",
        ],
        d,
    );
    let cps = std::fs::read_to_string(d.join("cps.csv")).unwrap();
    assert!(cps.starts_with("index\n"));

    // Determinism: identical inputs and flags yield byte-identical outputs.
    ok(
        &[
            "detect",
            "--preset",
            "cpt_poisson",
            "--penalty",
            "MBIC",
            "--input",
            "data/trace_0003.csv",
            "--output",
            "cps2.csv",
        ],
        d,
    );
    let cps2 = std::fs::read_to_string(d.join("cps2.csv")).unwrap();
    assert_eq!(cps, cps2);

    ok(
        &[
            "score",
            "--truth",
            "data/labels_0003.csv",
            "--detected",
            "cps.csv",
            "--trace",
            "data/trace_0003.csv",
            "--method",
            "cpt_poisson",
            "--output",
            "score.json",
        ],
        d,
    );
    let score: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("score.json")).unwrap()).unwrap();
    assert_eq!(score["method"], "cpt_poisson");
    let report = &score["report"];
    for key in ["precision", "recall", "recall_w", "f2", "f2_w"] {
        let v = report[key].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&v), "{key} = {v}");
    }

    ok(
        &[
            "report",
            "--scores",
            "score.json",
            "--out-dir",
            "reports",
        ],
        d,
    );
    let scores_csv = std::fs::read_to_string(d.join("reports/scores.csv")).unwrap();
    assert!(scores_csv.starts_with("trace_id,method,tp,fp,fn,"));
    assert!(scores_csv.contains("cpt_poisson"));
    assert!(d.join("reports/change_counts.csv").exists());
    assert!(d.join("reports/aggregate.json").exists());
}

#[test]
fn detect_reads_ping_jsonl_and_applies_min_samples_gate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut lines = String::new();
    for i in 0..50 {
        let rtt = if (20..30).contains(&i) { 95.0 } else { 40.0 };
        lines.push_str(&format!(
            "{{\"epoch\": {}, \"rtts\": [{rtt}, {}]}}\n",
            i * 240,
            rtt + 1.5
        ));
    }
    std::fs::write(d.join("ping.jsonl"), lines).unwrap();

    ok(
        &[
            "detect",
            "--preset",
            "cpt_normal",
            "--input",
            "ping.jsonl",
            "--output",
            "cps.csv",
        ],
        d,
    );
    let cps = std::fs::read_to_string(d.join("cps.csv")).unwrap();
    assert_eq!(cps, "index\n20\n30\n");

    // The gate refuses a short trace.
    let out = netchange(
        &[
            "detect",
            "--preset",
            "cpt_normal",
            "--input",
            "ping.jsonl",
            "--output",
            "cps3.csv",
            "--min-samples",
            "30000",
        ],
        d,
    );
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let err_line = stderr.lines().last().unwrap();
    let err: serde_json::Value = serde_json::from_str(err_line).expect("JSON error on stderr");
    assert!(err["error"].is_string());
}

#[test]
fn pathscan_and_correlate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    // Paris IDs cycle 0..3 here for brevity; a path flip inside one AS at
    // epoch 14400 (IFP), and an AS-level switch at epoch 28800.
    let mut lines = String::new();
    let mut epoch = 0i64;
    for cycle in 0..6 {
        for id in 0..4 {
            let second_hop = if epoch < 14400 {
                "10.2.0.1"
            } else if epoch < 28800 {
                "10.2.0.2"
            } else {
                "10.9.0.1"
            };
            lines.push_str(&format!(
                "{{\"epoch\": {epoch}, \"paris_id\": {id}, \"hops\": [\"10.1.0.1\", \"{second_hop}\", \"10.3.0.1\"]}}\n"
            ));
            epoch += 1800;
            let _ = cycle;
        }
    }
    std::fs::write(d.join("tr.jsonl"), lines).unwrap();
    std::fs::write(
        d.join("pfx.tsv"),
        "10.1.0.0/16\t64501\n10.2.0.0/16\t64502\n10.3.0.0/16\t64503\n10.9.0.0/16\t64509\n",
    )
    .unwrap();
    std::fs::write(d.join("ixp.tsv"), "192.0.2.0/24\tTEST-IX\n").unwrap();

    ok(
        &[
            "pathscan",
            "--input",
            "tr.jsonl",
            "--ifp-mode",
            "forward",
            "--prefix-table",
            "pfx.tsv",
            "--ixp-table",
            "ixp.tsv",
            "--output",
            "paths.csv",
        ],
        d,
    );
    let paths = std::fs::read_to_string(d.join("paths.csv")).unwrap();
    assert!(paths.starts_with("epoch,kind,before,after\n"));
    assert!(paths.contains("14400,IFP"), "{paths}");
    assert!(paths.contains("28800,AS,64501 64502 64503,64501 64509 64503"));

    // An RTT trace whose only changes sit near the two path events.
    let mut trace = String::from("epoch,rtt\n");
    for i in 0..40 {
        let e = i * 1200;
        let rtt = if e < 14000 {
            20.0
        } else if e < 29000 {
            55.0
        } else {
            90.0
        };
        trace.push_str(&format!("{e},{rtt}\n"));
    }
    std::fs::write(d.join("trace.csv"), trace).unwrap();
    std::fs::write(d.join("rtt_cps.csv"), "index\n12\n25\n").unwrap();

    ok(
        &[
            "correlate",
            "--rtt-changes",
            "rtt_cps.csv",
            "--trace",
            "trace.csv",
            "--path-changes",
            "paths.csv",
            "--probe",
            "probe-1",
            "--output",
            "corr.json",
        ],
        d,
    );
    let corr: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("corr.json")).unwrap()).unwrap();
    assert_eq!(corr["probe"], "probe-1");
    let pairs = corr["report"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2);

    ok(
        &[
            "report",
            "--correlations",
            "corr.json",
            "--out-dir",
            "reports",
        ],
        d,
    );
    let table = std::fs::read_to_string(d.join("reports/correlation.csv")).unwrap();
    assert!(table.contains("probe-1,AS,1,1,1"));
}

#[test]
fn unknown_preset_is_a_clean_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = netchange(
        &["detect", "--preset", "cpt_bogus", "--input", "x.csv"],
        dir.path(),
    );
    assert!(!out.status.success());
}
