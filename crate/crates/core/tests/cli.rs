use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_longvec-lab"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        cli(&["run", "--kernel", "lu", "--impl", "scalar"]).status.code(),
        Some(1)
    );
    let zero_bw = cli(&["run", "--kernel", "fft", "--impl", "scalar", "--bandwidth", "0"]);
    assert_eq!(zero_bw.status.code(), Some(1));
    let missing = cli(&["run", "--kernel", "spmv", "--impl", "scalar", "--input", "/no/such.mtx"]);
    assert_eq!(missing.status.code(), Some(1));
    let no_baseline = cli(&["sweep", "--kernel", "fft", "--mode", "latency", "--values", "32,64"]);
    assert_eq!(no_baseline.status.code(), Some(1));
}

#[test]
fn validate_passes() {
    let out = cli(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 11);
}

#[test]
fn run_prints_one_record() {
    let out = cli(&[
        "run", "--kernel", "pagerank", "--impl", "vector", "--vlmax", "64", "--size", "300",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("kernel,impl,input,cycles,checksum"));
    assert!(lines[1].starts_with("pagerank,vl64,graph:n=300:density=16:seed=42,"));
}

#[test]
fn matrix_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.mtx");
    std::fs::write(
        &path,
        "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2.0\n2 1 1.0\n3 2 -1.0\n3 3 4.0\n",
    )
    .unwrap();
    for kernel in ["spmv", "bfs", "pagerank"] {
        let out = cli(&[
            "run",
            "--kernel",
            kernel,
            "--impl",
            "vector",
            "--input",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{kernel}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let fft = cli(&[
        "run",
        "--kernel",
        "fft",
        "--impl",
        "scalar",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(fft.status.code(), Some(1));
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "sweep",
        "--kernel",
        "bfs",
        "--mode",
        "latency",
        "--size",
        "500",
        "--seed",
        "9",
        "--repetitions",
        "1",
    ];
    let a = cli(&args);
    let b = cli(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = cli(&[
        "sweep",
        "--kernel",
        "bfs",
        "--mode",
        "latency",
        "--size",
        "500",
        "--seed",
        "10",
        "--repetitions",
        "1",
    ]);
    assert_ne!(a.stdout, other.stdout);
}
