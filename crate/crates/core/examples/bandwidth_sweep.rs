//! Bandwidth sensitivity sweep that writes the slowdown table, its plot and
//! the raw run records to a directory (default: a fresh temp directory).

use longvec_lab::harness::{
    emit_csv, emit_plot, run_sweep, write_runs_csv, Implementation, InputSource, KernelId, SweepMode, SweepSpec,
};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("longvec-bandwidth"));
    std::fs::create_dir_all(&out)?;

    let kernel = KernelId::Bfs;
    let spec = SweepSpec {
        implementations: vec![
            Implementation::Scalar,
            Implementation::Vector { vlmax: 32 },
            Implementation::Vector { vlmax: 256 },
        ],
        bandwidths: vec![1, 2, 4, 8, 16, 32, 64],
        repetitions: 1,
        input: InputSource::default_for(kernel).with_size(4096),
        ..SweepSpec::new(kernel)
    };
    let sweep = run_sweep(&spec, SweepMode::Bandwidth)?;
    emit_csv(&sweep.table, &out.join("bfs_bandwidth.csv"))?;
    emit_plot(&sweep.table, &out.join("bfs_bandwidth.svg"))?;
    write_runs_csv(
        &sweep.records,
        std::fs::File::create(out.join("bfs_bandwidth_runs.csv"))?,
    )?;

    print!("{}", sweep.table.to_csv_string());
    println!("wrote {}", out.display());
    Ok(())
}
