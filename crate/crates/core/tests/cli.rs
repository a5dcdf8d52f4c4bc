use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclecover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

// two triangles sharing vertex 20, plus a 2-cycle and a self-loop
const BOWTIE: &str = "# bowtie\n10 20\n20 30\n30 10\n20 40\n40 50\n50 20\n60 70\n70 60\n80 80\n";

#[test]
fn cover_then_verify() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", BOWTIE);
    let cover = path_str(&dir.path().join("cover.txt"));
    let out = run(&[
        "cover",
        "--input",
        &input,
        "--k",
        "3",
        "--algo",
        "tdb-plus-plus",
        "--order",
        "degree-desc",
        "--out",
        &cover,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // the hub goes first and stays released, so one vertex per triangle is kept
    assert!(String::from_utf8_lossy(&out.stdout).contains("cover=2"));
    assert!(!fs::read_to_string(&cover)
        .unwrap()
        .lines()
        .any(|l| l == "20"));

    let out = run(&[
        "verify",
        "--input",
        &input,
        "--k",
        "3",
        "--cover",
        &cover,
        "--check-minimal",
    ]);
    assert_eq!(code(&out), 0);

    // in id order the vertex that closes each triangle is kept
    let out = run(&[
        "cover", "--input", &input, "--k", "3", "--algo", "tdb", "--out", &cover,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&cover).unwrap(), "30\n50\n");
}

#[test]
fn cover_to_stdout_lists_original_ids() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", BOWTIE);
    let out = run(&[
        "cover",
        "--input",
        &input,
        "--unbounded",
        "--algo",
        "bur-plus",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "20");
    assert!(String::from_utf8_lossy(&out.stderr).contains("algo=bur-plus"));
}

#[test]
fn verify_reports_invalid_and_non_minimal() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", BOWTIE);
    let partial = write(&dir, "partial.txt", "10\n");
    let out = run(&["verify", "--input", &input, "--k", "3", "--cover", &partial]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stdout).contains("uncovered cycle"));

    let fat = write(&dir, "fat.txt", "20\n30\n");
    let out = run(&["verify", "--input", &input, "--k", "3", "--cover", &fat]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "verify",
        "--input",
        &input,
        "--k",
        "3",
        "--cover",
        &fat,
        "--check-minimal",
    ]);
    assert_eq!(code(&out), 5);
    assert!(String::from_utf8_lossy(&out.stdout).contains("vertex 30"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", BOWTIE);
    assert_eq!(
        code(&run(&[
            "cover", "--input", &input, "--k", "2", "--algo", "tdb"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["cover", "--input", &input, "--algo", "tdb"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "cover", "--input", &input, "--k", "4", "--algo", "nope"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "cover",
            "--input",
            &input,
            "--unbounded",
            "--algo",
            "darc-dv"
        ])),
        2
    );
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn unreadable_input_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let missing = path_str(&dir.path().join("missing.txt"));
    assert_eq!(
        code(&run(&[
            "cover", "--input", &missing, "--k", "3", "--algo", "tdb"
        ])),
        1
    );
    let bad = write(&dir, "bad.txt", "1 2\n3 x\n");
    let out = run(&["cover", "--input", &bad, "--k", "3", "--algo", "tdb"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn enumerate_skips_two_cycles_and_self_loops() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", BOWTIE);
    let out = run(&["enumerate", "--input", &input, "--k", "7"]);
    assert_eq!(code(&out), 0);
    let mut lines: Vec<String> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(str::to_owned)
        .collect();
    lines.sort();
    assert_eq!(lines, ["10,20,30", "20,40,50"]);

    let out = run(&["enumerate", "--input", &input, "--k", "7", "--cap", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = path_str(&dir.path().join("a.txt"));
    let b = path_str(&dir.path().join("b.txt"));
    let c = path_str(&dir.path().join("c.txt"));
    for (out, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        assert_eq!(
            code(&run(&[
                "gen", "--n", "30", "--p", "0.2", "--seed", seed, "--out", out
            ])),
            0
        );
    }
    let (a, b, c) = (
        fs::read(&a).unwrap(),
        fs::read(&b).unwrap(),
        fs::read(&c).unwrap(),
    );
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(
        code(&run(&[
            "gen",
            "--n",
            "5",
            "--p",
            "1.5",
            "--out",
            "unused.txt"
        ])),
        2
    );
}

/// CSV data rows with the runtime column blanked, which is the only column allowed to
/// differ between runs.
fn strip_runtime(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let mut cells: Vec<String> = line.split(',').map(str::to_owned).collect();
            cells[4].clear();
            cells
        })
        .collect()
}

#[test]
fn bench_writes_a_stable_csv() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", BOWTIE);
    let mut outputs = Vec::new();
    for (i, threads) in ["0", "3"].iter().enumerate() {
        let out = path_str(&dir.path().join(format!("bench{i}.csv")));
        let status = bin()
            .env("CYCLECOVER_THREADS", threads)
            .args([
                "bench",
                "--input",
                &input,
                "--input",
                "gnp:12:0.3",
                "--k-min",
                "3",
                "--k-max",
                "5",
            ])
            .args(["--seed", "9", "--oracle-check", "--out", &out])
            .output()
            .unwrap();
        assert_eq!(
            code(&status),
            0,
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        outputs.push(fs::read_to_string(&out).unwrap());
    }
    let rows = strip_runtime(&outputs[0]);
    assert_eq!(rows, strip_runtime(&outputs[1]));
    assert_eq!(
        outputs[0].lines().next().unwrap(),
        "dataset,algorithm,k,cover_size,runtime_ms,nn_calls,edge_visits,unblock_visits,bfs_prunes,valid,minimal"
    );
    // 2 datasets x 6 algorithms x 3 values of k
    assert_eq!(rows.len(), 2 * 6 * 3);
    assert!(rows.iter().all(|r| r.len() == 11 && r[9] == "true"));
    assert!(rows.iter().any(|r| r[0] == "gnp-n12-p0.3-s9"));
}
