use std::path::Path;
use std::process::{Command, Output};

fn specgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specgap"))
        .args(args)
        .env_remove("SPECGAP_MAX_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

#[test]
fn spectrum_of_triangle() {
    let o = specgap(&["spectrum", "Bw"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("mu     [2, 2.0"), "{text}");
    assert!(text.contains("mu_min [-1, -9.99"), "{text}");
}

#[test]
fn spectrum_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let corpus = dir.path().join("c.g6");
    std::fs::write(&corpus, "Bw\nDhc\n").unwrap();
    let o = specgap(&[
        "spectrum",
        "--file",
        corpus.to_str().unwrap(),
        "--tol",
        "1e-6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let rows: Vec<serde_json::Value> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["graph6"], "Dhc");
    assert_eq!(rows[1]["method"], "sturm_exact");
}

#[test]
fn check_t2_on_c5_holds() {
    let o = specgap(&["check", "--id", "T2", "Dhc"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("T2 Dhc: holds"));
}

#[test]
fn skipped_check_exits_zero() {
    // T21 needs a regular graph; P_3 is not.
    let o = specgap(&["check", "--id", "T21", "Bg"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("skipped"));
}

#[test]
fn check_single_edge_and_subgraph() {
    let o = specgap(&["check", "--id", "T1", "Dhc", "--edge", "1,0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("T1 ")).count(), 1);

    let all = specgap(&["check", "--id", "T1", "Dhc"]);
    assert_eq!(stdout(&all).lines().filter(|l| l.starts_with("T1 ")).count(), 5);

    // P_3 inside K_3.
    let o = specgap(&["check", "--id", "T1", "Bw", "--subgraph", "Bg"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("holds"));
}

#[test]
fn failed_construction_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = specgap(&["sweep", "--thm3", "100:1/20", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let g6 = std::fs::read_to_string(dir.path().join("counterexamples.g6")).unwrap();
    assert_eq!(g6.lines().count(), 1);
}

#[test]
fn construct_thm2() {
    let dir = tempfile::tempdir().unwrap();
    let o = specgap(&[
        "construct",
        "--family",
        "thm2",
        "--k",
        "3",
        "--D",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("order 9"));
    assert!(text.lines().filter(|l| l.contains(" holds:")).count() >= 6);
    assert!(!text.contains("fails"));
    assert!(text.ends_with("overall holds\n"));
    let detail = std::fs::read_to_string(dir.path().join("detail.jsonl")).unwrap();
    let rec: serde_json::Value = serde_json::from_str(detail.lines().next().unwrap()).unwrap();
    assert_eq!(rec["check_id"], "THM2");
    assert_eq!(rec["verdict"], "holds");
    assert_eq!(rec["graph_id"], "thm2:k=3,D=4");
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["bogus"][..],
        &["check", "--id", "NOPE", "Bw"],
        &["check", "--id", "T2"],
        &["check", "--id", "T2", "Bw", "--file", "x"],
        &["construct", "--family", "thm2", "--k", "3"],
        &["spectrum", "Bw", "--tol", "0"],
        &["sweep", "--enumerate", "3", "--threads", "0"],
        &["sweep", "--enumerate", "3", "--checks", "T2,BAD"],
        &["check", "--id", "T2", "Bw", "--edge", "0,1"],
        &["check", "--id", "THM2", "Bw"],
    ] {
        let o = specgap(args);
        assert_eq!(code(&o), 64, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_specgap"))
        .args(["spectrum", "Bw"])
        .env("SPECGAP_MAX_PRECISION_BITS", "x")
        .output()
        .unwrap();
    assert_eq!(code(&o), 64);
}

#[test]
fn bad_data_exits_65() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.g6");
    std::fs::write(&corpus, "Bw\n~~~\n").unwrap();
    let edgeless_27 = format!("Z{}", "?".repeat(59));
    for args in [
        &["check", "--id", "T2", "~~~"][..],
        &["spectrum", "--file", corpus.to_str().unwrap()],
        &["construct", "--family", "thm2", "--k", "2", "--D", "4"],
        &["construct", "--family", "thm3", "--n", "100", "--eps", "1/8"],
        &["check", "--id", "T1", "Bg", "--edge", "0,2"],
        &["bipartization", &edgeless_27],
        &["sweep", "--enumerate", "9", "--checks", "T2"],
    ] {
        let o = specgap(args);
        assert_eq!(code(&o), 65, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn bipartization_of_c5() {
    let o = specgap(&["bipartization", "Dhc"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Dhc b=1 max_cut=4 edges=5\n");
}

fn sweep_files(dir: &Path, threads: &str) -> (String, String) {
    let o = specgap(&[
        "sweep",
        "--enumerate",
        "4",
        "--checks",
        "all",
        "--threads",
        threads,
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let detail: Vec<serde_json::Value> = std::fs::read_to_string(dir.join("detail.jsonl"))
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["wall_time_us"] = 0.into();
            v
        })
        .collect();
    (
        serde_json::to_string(&detail).unwrap(),
        std::fs::read_to_string(dir.join("summary.csv")).unwrap(),
    )
}

#[test]
fn sweeps_are_reproducible_across_thread_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (da, sa) = sweep_files(a.path(), "1");
    let (db, sb) = sweep_files(b.path(), "3");
    assert_eq!(da, db);
    assert_eq!(sa, sb);
    assert!(sa.starts_with("check_id,total,holds,fails,undecided,skipped,min_margin,max_precision_bits\n"));
}

#[test]
fn random_corpus_is_seeded() {
    let a = specgap(&["random", "--count", "20", "--seed", "9", "--max-n", "8"]);
    let b = specgap(&["random", "--count", "20", "--seed", "9", "--max-n", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 20);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.g6");
    std::fs::write(&path, stdout(&a)).unwrap();
    let o = specgap(&["sweep", "--file", path.to_str().unwrap(), "--checks", "T2,P2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("20 graphs, 40 outcomes"));
}
