//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with
//! `cargo test --release --test acceptance`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use longvec_lab::harness::{
    run_experiment, run_sweep, Implementation, InputSource, KernelId, SlowdownTable, SweepMode, SweepSpec, Workload,
};
use longvec_lab::inputs::{gen_graph, gen_signal, gen_sparse_matrix};
use longvec_lab::kernels::{
    bfs_scalar, bfs_vector, fft, pagerank, spmv_scalar, spmv_vector_with, ComplexSignal, CsrMatrix, Graph,
    PageRankParams, SpmvStrategy, Variant,
};
use longvec_lab::machine::{MachineConfig, VectorContext};
use longvec_lab::memory::{LogEntry, MemoryConfig, MemoryModel, RequestBatch, RequestKind};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fresh(memory: MemoryConfig) -> (VectorContext, MemoryModel) {
    (
        VectorContext::new(MachineConfig::default()).unwrap(),
        MemoryModel::new(memory).unwrap(),
    )
}

// ---- independent oracles ------------------------------------------------

fn oracle_dense_matvec(a: &CsrMatrix, x: &[f64]) -> Vec<f64> {
    let n = a.n_rows();
    let mut dense = vec![0.0; n * a.n_cols()];
    for r in 0..n {
        for k in a.row_ptr()[r]..a.row_ptr()[r + 1] {
            dense[r * a.n_cols() + a.col_idx()[k]] += a.values()[k];
        }
    }
    (0..n)
        .map(|r| (0..a.n_cols()).map(|c| dense[r * a.n_cols() + c] * x[c]).sum())
        .collect()
}

fn oracle_bfs(g: &Graph, src: usize) -> Vec<i64> {
    let mut dist = vec![-1i64; g.n_nodes()];
    let mut q = VecDeque::new();
    dist[src] = 0;
    q.push_back(src);
    while let Some(u) = q.pop_front() {
        for &v in &g.neighbor_array()[g.offsets()[u]..g.offsets()[u + 1]] {
            if dist[v] == -1 {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

/// Dense Google-matrix power iteration, same stopping rule as the kernel.
fn oracle_pagerank(g: &Graph, d: f64, tol: f64) -> Vec<f64> {
    let n = g.n_nodes();
    let nf = n as f64;
    let mut m = vec![(1.0 - d) / nf; n * n];
    for u in 0..n {
        let nb = &g.neighbor_array()[g.offsets()[u]..g.offsets()[u + 1]];
        if nb.is_empty() {
            for v in 0..n {
                m[v * n + u] += d / nf;
            }
        }
        for &v in nb {
            m[v * n + u] += d / nb.len() as f64;
        }
    }
    let mut r = vec![1.0 / nf; n];
    loop {
        let next: Vec<f64> = (0..n).map(|v| (0..n).map(|u| m[v * n + u] * r[u]).sum()).collect();
        let diff: f64 = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if diff <= tol {
            return r;
        }
    }
}

fn oracle_dft(s: &ComplexSignal) -> (Vec<f64>, Vec<f64>) {
    let n = s.len();
    (0..n)
        .map(|k| {
            (0..n).fold((0.0, 0.0), |(ar, ai), t| {
                let ang = -2.0 * PI * ((k * t) % n) as f64 / n as f64;
                let (sn, cs) = ang.sin_cos();
                (
                    ar + s.re()[t] * cs - s.im()[t] * sn,
                    ai + s.re()[t] * sn + s.im()[t] * cs,
                )
            })
        })
        .unzip()
}

// ---- criteria -------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = Vec::new();
    let mut pass = true;

    let a = gen_sparse_matrix(1024, 13, 7).unwrap();
    let x: Vec<f64> = (0..1024).map(|i| ((i * 31 % 97) as f64 - 48.0) / 17.0).collect();
    let want = oracle_dense_matvec(&a, &x);
    let mut spmv_err: f64 = 0.0;
    for strategy in [None, Some(SpmvStrategy::RowWise), Some(SpmvStrategy::RowBlock)] {
        let (mut c, mut m) = fresh(MemoryConfig::default());
        let y = match strategy {
            None => spmv_scalar(&a, &x, &mut c, &mut m),
            Some(s) => spmv_vector_with(s, &a, &x, &mut c, &mut m),
        }
        .unwrap();
        let num: f64 = y.iter().zip(&want).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let den: f64 = want.iter().map(|b| b * b).sum::<f64>().sqrt();
        spmv_err = spmv_err.max(num / den);
    }
    pass &= spmv_err <= 1e-12;
    worst.push(format!("spmv rel {spmv_err:.1e}"));

    let g = gen_graph(1 << 10, 16.0, 42).unwrap();
    let want = oracle_bfs(&g, 0);
    let (mut c, mut m) = fresh(MemoryConfig::default());
    let s = bfs_scalar(&g, 0, &mut c, &mut m).unwrap();
    let (mut c, mut m) = fresh(MemoryConfig::default());
    let v = bfs_vector(&g, 0, &mut c, &mut m).unwrap();
    let bfs_ok = s == want && v == want;
    pass &= bfs_ok;
    worst.push(format!("bfs exact {bfs_ok}"));

    let params = PageRankParams {
        strategy: SpmvStrategy::RowBlock,
        ..Default::default()
    };
    let want = oracle_pagerank(&g, params.damping, params.tol);
    let (mut linf, mut sum_err): (f64, f64) = (0.0, 0.0);
    for variant in [Variant::Scalar, Variant::Vector] {
        let (mut c, mut m) = fresh(MemoryConfig::default());
        let r = pagerank(&g, &params, &mut c, &mut m, variant).unwrap();
        linf = linf.max(r.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        sum_err = sum_err.max((r.iter().sum::<f64>() - 1.0).abs());
    }
    pass &= linf <= 1e-8 && sum_err <= 1e-10;
    worst.push(format!("pagerank Linf {linf:.1e} |sum-1| {sum_err:.1e}"));

    let sig = gen_signal(2048, 3).unwrap();
    let (wr, wi) = oracle_dft(&sig);
    let mut fft_err: f64 = 0.0;
    for variant in [Variant::Scalar, Variant::Vector] {
        let (mut c, mut m) = fresh(MemoryConfig::default());
        let out = fft(&sig, &mut c, &mut m, variant).unwrap();
        let num: f64 = (0..2048)
            .map(|k| (out.re()[k] - wr[k]).powi(2) + (out.im()[k] - wi[k]).powi(2))
            .sum();
        let den: f64 = (0..2048).map(|k| wr[k].powi(2) + wi[k].powi(2)).sum();
        fft_err = fft_err.max((num / den).sqrt());
    }
    pass &= fft_err <= 1e-9;
    worst.push(format!("fft rel L2 {fft_err:.1e}"));

    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(pass, format!("{}; {:.1}s", worst.join(", "), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for kernel in KernelId::ALL {
        let w = Workload::load(kernel, &InputSource::scaled_for(kernel)).unwrap();
        let sums: Vec<u64> = [8, 16, 32, 64, 128, 256]
            .iter()
            .map(|&vlmax| {
                let imp = Implementation::Vector { vlmax };
                let r = run_experiment(&w, imp, &MachineConfig::default(), &MemoryConfig::default(), 1).unwrap();
                r.checksum.to_bits()
            })
            .collect();
        let same = sums.iter().all(|&s| s == sums[0]);
        pass &= same;
        notes.push(format!("{kernel} {}", if same { "identical" } else { "DIFFERENT" }));
    }
    outcome(pass, notes.join(", "))
}

fn print_table(kernel: KernelId, t: &SlowdownTable) {
    let cols: String = t.columns.iter().map(|c| format!("{:>8}", c.to_string())).collect();
    println!("    {:<20}{cols}", format!("{kernel} ({})", t.mode));
    for (v, row) in t.rows.iter().zip(&t.cells) {
        let cells: String = row.iter().map(|x| format!("{x:8.4}")).collect();
        println!("    {v:>20}{cells}");
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for kernel in KernelId::ALL {
        let spec = SweepSpec {
            input: InputSource::scaled_for(kernel),
            ..SweepSpec::new(kernel)
        };
        let t = match run_sweep(&spec, SweepMode::Latency) {
            Ok(s) => s.table,
            Err(e) => return outcome(false, format!("{kernel}: {e}")),
        };
        print_table(kernel, &t);
        let mut bad = 0;
        for (v, row) in t.rows.iter().zip(&t.cells) {
            if *v >= 32 && row.windows(2).any(|w| w[1] > w[0]) {
                bad += 1;
            }
        }
        pass &= bad == 0;
        notes.push(format!("{kernel} ordered rows violated {bad}"));
        if kernel == KernelId::Spmv {
            let s = t.cell(1024, Implementation::Scalar).unwrap();
            let v = t.cell(1024, Implementation::Vector { vlmax: 256 }).unwrap();
            pass &= s >= 1.5 * v;
            notes.push(format!("spmv@1024 scalar {s:.3} vs vl256 {v:.3}"));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(600);
    notes.push(format!("{:.1}s", elapsed.as_secs_f64()));
    outcome(pass, notes.join(", "))
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let vl256 = Implementation::Vector { vlmax: 256 };
    for kernel in KernelId::ALL {
        let spec = SweepSpec {
            implementations: vec![Implementation::Scalar, vl256],
            bandwidths: vec![1, 2, 16, 64],
            repetitions: 1,
            ..SweepSpec::new(kernel)
        };
        let t = match run_sweep(&spec, SweepMode::Bandwidth) {
            Ok(s) => s.table,
            Err(e) => return outcome(false, format!("{kernel}: {e}")),
        };
        print_table(kernel, &t);
        let s2 = t.cell(2, Implementation::Scalar).unwrap();
        let s64 = t.cell(64, Implementation::Scalar).unwrap();
        let plateau = (s64 - s2).abs() / s2;
        pass &= plateau <= 0.05;
        let mut note = format!("{kernel} scalar plateau {:.1}%", 100.0 * plateau);
        if matches!(kernel, KernelId::Spmv | KernelId::Bfs) {
            let v16 = t.cell(16, vl256).unwrap();
            let v64 = t.cell(64, vl256).unwrap();
            pass &= v64 <= 0.9 * v16;
            note += &format!(", vl256 t(64) {v64:.4} vs 0.9*t(16) {:.4}", 0.9 * v16);
        }
        notes.push(note);
    }
    outcome(pass, notes.join("; "))
}

/// Logs of a saturating burst and of a real kernel run at `num/den`.
fn limiter_logs(num: u32, den: u32) -> (Vec<LogEntry>, Vec<LogEntry>) {
    let cfg = MemoryConfig {
        bw_numerator: num,
        bw_denominator: den,
        ..Default::default()
    };
    let mut m = MemoryModel::new(cfg).unwrap();
    m.enable_log();
    let lines = 20_000u64;
    // distinct lines far apart so every request misses
    let batch = RequestBatch::from_addresses((0..lines).map(|i| i * 64 * 4099), 64, RequestKind::Read, 0);
    m.issue_requests(&batch);
    let burst = m.take_log().unwrap();

    let w = Workload::load(KernelId::Spmv, &InputSource::scaled_for(KernelId::Spmv)).unwrap();
    let (mut c, mut m) = fresh(cfg);
    m.enable_log();
    w.execute(Implementation::Vector { vlmax: 256 }, &mut c, &mut m)
        .unwrap();
    (burst, m.take_log().unwrap())
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (num, den) in [(1u32, 1u32), (1, 3), (1, 64), (2, 3)] {
        let (burst, kernel_log) = limiter_logs(num, den);
        let mut max_per_window = 0;
        for log in [&burst, &kernel_log] {
            let mut per_window: BTreeMap<u64, u32> = BTreeMap::new();
            for e in log.iter().filter(|e| !e.hit) {
                *per_window.entry(e.grant_cycle / den as u64).or_default() += 1;
            }
            max_per_window = max_per_window.max(per_window.values().copied().max().unwrap_or(0));
        }
        // long-run rate over the saturated burst
        let grants: Vec<u64> = burst.iter().map(|e| e.grant_cycle).collect();
        let span = (grants.iter().max().unwrap() / den as u64 + 1) * den as u64;
        let expected = span as f64 * num as f64 / den as f64;
        let per_10k = (grants.len() as f64 - expected).abs() * 10_000.0 / span as f64;
        let ok = max_per_window <= num && per_10k <= 1.0;
        pass &= ok;
        notes.push(format!(
            "{num}/{den}: max {max_per_window}/window, rate error {per_10k:.3}/10k cycles"
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for extra in [0u64, 32, 1024] {
        let cfg = MemoryConfig::default().with_extra_latency(extra);
        let expected = cfg.l2_hit_cycles + cfg.base_memory_latency + extra;
        let mut checked = 0;
        let mut wrong = 0;
        for kernel in [KernelId::Spmv, KernelId::Bfs] {
            let w = Workload::load(kernel, &InputSource::scaled_for(kernel)).unwrap();
            for imp in [Implementation::Scalar, Implementation::Vector { vlmax: 64 }] {
                let (mut c, mut m) = fresh(cfg);
                m.enable_log();
                w.execute(imp, &mut c, &mut m).unwrap();
                for e in m.log().unwrap().iter().filter(|e| !e.hit) {
                    checked += 1;
                    wrong += usize::from(e.completion_cycle - e.grant_cycle != expected);
                }
            }
        }
        pass &= wrong == 0 && checked > 0;
        notes.push(format!("+{extra}: {wrong}/{checked} misses off"));
    }
    let mut m = MemoryModel::new(MemoryConfig::default().with_extra_latency(1024)).unwrap();
    m.enable_log();
    m.issue_requests(&RequestBatch::from_addresses(
        (0..256u64).map(|i| i * 64),
        64,
        RequestKind::Read,
        100,
    ));
    let done: Vec<u64> = m.log().unwrap().iter().map(|e| e.completion_cycle).collect();
    let consecutive = done.windows(2).all(|w| w[1] == w[0] + 1) && done[0] == 100 + 1084;
    pass &= consecutive;
    notes.push(format!("back-to-back completions consecutive: {consecutive}"));
    outcome(pass, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_longvec-lab");
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    let mut outputs = Vec::new();
    for (i, dir) in dirs.iter().enumerate() {
        let threads = if i == 0 { "1" } else { "3" };
        let sweep = Command::new(exe)
            .args([
                "sweep",
                "--kernel",
                "spmv",
                "--mode",
                "bandwidth",
                "--seed",
                "11",
                "--size",
                "1024",
            ])
            .args(["--repetitions", "2", "--out"])
            .arg(dir.path())
            .env("LONGVEC_THREADS", threads)
            .output()
            .unwrap();
        let run = Command::new(exe)
            .args([
                "run",
                "--kernel",
                "bfs",
                "--impl",
                "vector",
                "--vlmax",
                "32",
                "--extra-latency",
                "64",
            ])
            .args(["--bandwidth", "8", "--seed", "11", "--size", "2048", "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        if !sweep.status.success() || !run.status.success() {
            return outcome(false, "CLI invocation failed");
        }
        let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
        outputs.push((
            sweep.stdout,
            run.stdout,
            read("spmv_bandwidth.csv"),
            read("spmv_bandwidth_runs.csv"),
            read("spmv_bandwidth.svg"),
            read("run.csv"),
        ));
    }
    let same = outputs[0] == outputs[1];
    outcome(
        same,
        format!("sweep and run CSV byte-identical across invocations: {same}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 kernel oracles", criterion_1),
        ("2 VL-independence", criterion_2),
        ("3 latency-tolerance trend", criterion_3),
        ("4 bandwidth plateau", criterion_4),
        ("5 limiter law", criterion_5),
        ("6 latency law", criterion_6),
        ("7 CLI determinism", criterion_7),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
