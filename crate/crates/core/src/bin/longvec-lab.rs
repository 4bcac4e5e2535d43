use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use longvec_lab::harness::{
    emit_csv, emit_plot, run_experiment, run_sweep, validate_oracles, write_runs_csv, HarnessError, Implementation,
    InputSource, KernelId, SweepMode, SweepSpec, Workload,
};
use longvec_lab::machine::MachineConfig;
use longvec_lab::memory::MemoryConfig;

#[derive(Parser)]
#[command(
    name = "longvec-lab",
    version,
    about = "Long-vector core and memory-subsystem simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one kernel under one configuration and print its run record.
    Run {
        #[arg(long)]
        kernel: Kernel,
        #[arg(long = "impl", value_enum)]
        implementation: Impl,
        /// Maximum vector length for the vector implementation.
        #[arg(long, default_value_t = 256)]
        vlmax: usize,
        /// Cycles added to every memory miss.
        #[arg(long, default_value_t = 0)]
        extra_latency: u64,
        /// Memory bandwidth limit in bytes per cycle.
        #[arg(long, default_value_t = 64)]
        bandwidth: u32,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        /// Also write run.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep extra latency or bandwidth and print the normalised table.
    Sweep {
        #[arg(long)]
        kernel: Kernel,
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated columns, e.g. scalar,vl8,vl256.
        #[arg(long, value_delimiter = ',')]
        impls: Option<Vec<String>>,
        /// Comma-separated sweep values (cycles or B/cycle).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<u64>>,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        /// Write <kernel>_<mode>.csv, .svg and _runs.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every kernel against its oracle.
    Validate,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Matrix Market file; graph kernels use its sparsity pattern.
    #[arg(long, conflicts_with_all = ["seed", "size", "scaled"])]
    input: Option<PathBuf>,
    /// Generator seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Generator size (rows, vertices or points).
    #[arg(long)]
    size: Option<usize>,
    /// Use the reduced inputs: 4096-row matrix, 2^12-node graph.
    #[arg(long, conflicts_with = "size")]
    scaled: bool,
}

impl InputArgs {
    fn source(&self, kernel: KernelId) -> InputSource {
        if let Some(path) = &self.input {
            return InputSource::MatrixFile(path.clone());
        }
        let mut src = if self.scaled {
            InputSource::scaled_for(kernel)
        } else {
            InputSource::default_for(kernel)
        };
        if let Some(n) = self.size {
            src = src.with_size(n);
        }
        if let Some(seed) = self.seed {
            src = src.with_seed(seed);
        }
        src
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Spmv,
    Bfs,
    Pagerank,
    Fft,
}

impl From<Kernel> for KernelId {
    fn from(k: Kernel) -> Self {
        match k {
            Kernel::Spmv => KernelId::Spmv,
            Kernel::Bfs => KernelId::Bfs,
            Kernel::Pagerank => KernelId::PageRank,
            Kernel::Fft => KernelId::Fft,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Impl {
    Scalar,
    Vector,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Latency,
    Bandwidth,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    std::fs::write(path, bytes).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn execute(command: Command) -> Result<u8, HarnessError> {
    match command {
        Command::Run {
            kernel,
            implementation,
            vlmax,
            extra_latency,
            bandwidth,
            input,
            repetitions,
            out,
        } => {
            let kernel = KernelId::from(kernel);
            let workload = Workload::load(kernel, &input.source(kernel))?;
            let implementation = match implementation {
                Impl::Scalar => Implementation::Scalar,
                Impl::Vector => Implementation::Vector { vlmax },
            };
            let memory = MemoryConfig::default()
                .with_extra_latency(extra_latency)
                .with_bandwidth(bandwidth)?;
            let record = run_experiment(
                &workload,
                implementation,
                &MachineConfig::default(),
                &memory,
                repetitions,
            )?;
            let mut csv = Vec::new();
            write_runs_csv(&[record], &mut csv).expect("writing to memory cannot fail");
            print!("{}", String::from_utf8_lossy(&csv));
            if let Some(dir) = out {
                create_dir(&dir)?;
                write_file(&dir.join("run.csv"), &csv)?;
            }
            Ok(0)
        }
        Command::Sweep {
            kernel,
            mode,
            input,
            impls,
            values,
            repetitions,
            out,
        } => {
            let kernel = KernelId::from(kernel);
            let mode = match mode {
                Mode::Latency => SweepMode::Latency,
                Mode::Bandwidth => SweepMode::Bandwidth,
            };
            let mut spec = SweepSpec {
                repetitions,
                input: input.source(kernel),
                ..SweepSpec::new(kernel)
            };
            if let Some(list) = impls {
                spec.implementations = list.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            }
            if let Some(v) = values {
                match mode {
                    SweepMode::Latency => spec.extra_latencies = v,
                    SweepMode::Bandwidth => {
                        spec.bandwidths = v
                            .into_iter()
                            .map(|b| {
                                u32::try_from(b).map_err(|_| HarnessError::Config(format!("bandwidth {b} too large")))
                            })
                            .collect::<Result<_, _>>()?
                    }
                }
            }
            let sweep = run_sweep(&spec, mode)?;
            print!("{}", sweep.table.to_csv_string());
            if let Some(dir) = out {
                create_dir(&dir)?;
                let stem = format!("{kernel}_{mode}");
                emit_csv(&sweep.table, &dir.join(format!("{stem}.csv")))?;
                emit_plot(&sweep.table, &dir.join(format!("{stem}.svg")))?;
                let mut runs = Vec::new();
                write_runs_csv(&sweep.records, &mut runs).expect("writing to memory cannot fail");
                write_file(&dir.join(format!("{stem}_runs.csv")), &runs)?;
            }
            Ok(0)
        }
        Command::Validate => {
            let checks = validate_oracles()?;
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(|c| c.passed()) { 0 } else { 2 })
        }
    }
}
