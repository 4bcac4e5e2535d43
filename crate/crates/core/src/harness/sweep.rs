use rayon::prelude::*;

use super::{
    run_experiment, HarnessError, Implementation, InputSource, KernelId, RunRecord, SlowdownTable, SweepMode, Workload,
};
use crate::machine::MachineConfig;
use crate::memory::{bandwidth_ratio, Cycle, MemoryConfig};

pub const DEFAULT_EXTRA_LATENCIES: [Cycle; 7] = [0, 32, 64, 128, 256, 512, 1024];
pub const DEFAULT_BANDWIDTHS: [u32; 7] = [1, 2, 4, 8, 16, 32, 64];

/// A grid of experiments over one kernel and input. A latency sweep keeps the
/// bandwidth of `memory`; a bandwidth sweep keeps its extra latency.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kernel: KernelId,
    pub implementations: Vec<Implementation>,
    pub extra_latencies: Vec<Cycle>,
    /// Bytes per cycle.
    pub bandwidths: Vec<u32>,
    pub repetitions: usize,
    pub input: InputSource,
    pub machine: MachineConfig,
    pub memory: MemoryConfig,
}

impl SweepSpec {
    pub fn new(kernel: KernelId) -> Self {
        Self {
            kernel,
            implementations: Implementation::standard(),
            extra_latencies: DEFAULT_EXTRA_LATENCIES.to_vec(),
            bandwidths: DEFAULT_BANDWIDTHS.to_vec(),
            repetitions: 5,
            input: InputSource::default_for(kernel),
            machine: MachineConfig::default(),
            memory: MemoryConfig::default(),
        }
    }

    pub fn validate(&self, mode: SweepMode) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.implementations.is_empty() || self.extra_latencies.is_empty() || self.bandwidths.is_empty() {
            return bad("sweep lists must be non-empty");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be >= 1");
        }
        for &b in &self.bandwidths {
            bandwidth_ratio(b, self.memory.line_size)?;
        }
        match mode {
            SweepMode::Latency if !self.extra_latencies.contains(&0) => bad("latency sweep must include 0"),
            SweepMode::Bandwidth if !self.bandwidths.contains(&1) => bad("bandwidth sweep must include 1 B/cycle"),
            _ => Ok(()),
        }
    }

    fn rows(&self, mode: SweepMode) -> Vec<u64> {
        match mode {
            SweepMode::Latency => self.extra_latencies.clone(),
            SweepMode::Bandwidth => self.bandwidths.iter().map(|&b| b as u64).collect(),
        }
    }

    fn memory_at(&self, mode: SweepMode, value: u64) -> Result<MemoryConfig, HarnessError> {
        Ok(match mode {
            SweepMode::Latency => self.memory.with_extra_latency(value),
            SweepMode::Bandwidth => self.memory.with_bandwidth(value as u32)?,
        })
    }
}

/// A finished sweep: the normalised table and every underlying run, in
/// row-major table order.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub table: SlowdownTable,
    pub records: Vec<RunRecord>,
}

/// Worker threads for sweeps: `LONGVEC_THREADS` if set, otherwise rayon's
/// default (`None`).
pub fn thread_limit() -> Result<Option<usize>, HarnessError> {
    match std::env::var("LONGVEC_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(HarnessError::Config(format!(
                "LONGVEC_THREADS='{v}' must be a positive integer"
            ))),
        },
    }
}

pub fn run_sweep(spec: &SweepSpec, mode: SweepMode) -> Result<Sweep, HarnessError> {
    spec.validate(mode)?;
    let workload = Workload::load(spec.kernel, &spec.input)?;
    let rows = spec.rows(mode);
    let points: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|r| (0..spec.implementations.len()).map(move |c| (r, c)))
        .collect();
    let run = |&(r, c): &(usize, usize)| {
        let memory = spec.memory_at(mode, rows[r])?;
        run_experiment(
            &workload,
            spec.implementations[c],
            &spec.machine,
            &memory,
            spec.repetitions,
        )
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| HarnessError::Config(e.to_string()))?;
    // collect keeps point order, so the first error and the table layout do
    // not depend on scheduling
    let results: Vec<Result<RunRecord, HarnessError>> = pool.install(|| points.par_iter().map(run).collect());
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let expected = records[0].checksum;
    if let Some(r) = records.iter().find(|r| r.checksum.to_bits() != expected.to_bits()) {
        return Err(HarnessError::InconsistentChecksum {
            kernel: spec.kernel,
            expected,
            found: r.checksum,
        });
    }
    let width = spec.implementations.len();
    let cycles: Vec<Vec<Cycle>> = records
        .chunks(width)
        .map(|row| row.iter().map(|r| r.cycles).collect())
        .collect();
    let table = SlowdownTable::from_cycles(mode, spec.implementations.clone(), rows, &cycles)?;
    Ok(Sweep { table, records })
}

/// Cycles at each extra latency divided by cycles at 0, per implementation.
pub fn sweep_latency(spec: &SweepSpec) -> Result<SlowdownTable, HarnessError> {
    run_sweep(spec, SweepMode::Latency).map(|s| s.table)
}

/// Cycles at each bandwidth divided by cycles at 1 B/cycle, per
/// implementation.
pub fn sweep_bandwidth(spec: &SweepSpec) -> Result<SlowdownTable, HarnessError> {
    run_sweep(spec, SweepMode::Bandwidth).map(|s| s.table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(kernel: KernelId) -> SweepSpec {
        SweepSpec {
            implementations: vec![Implementation::Scalar, Implementation::Vector { vlmax: 64 }],
            extra_latencies: vec![0, 256],
            bandwidths: vec![1, 64],
            repetitions: 2,
            input: InputSource::default_for(kernel).with_size(128),
            ..SweepSpec::new(kernel)
        }
    }

    #[test]
    fn baselines_and_trends() {
        let lat = sweep_latency(&tiny(KernelId::Spmv)).unwrap();
        assert_eq!(lat.cells[0], vec![1.0, 1.0]);
        assert!(lat.cells[1].iter().all(|&c| c >= 1.0));
        let bw = sweep_bandwidth(&tiny(KernelId::Bfs)).unwrap();
        assert_eq!(bw.cells[0], vec![1.0, 1.0]);
        assert!(bw.cells[1].iter().all(|&c| c <= 1.0));
    }

    #[test]
    fn spec_errors() {
        let mut s = tiny(KernelId::Fft);
        s.extra_latencies = vec![32];
        assert!(matches!(sweep_latency(&s), Err(HarnessError::Config(_))));
        let mut s = tiny(KernelId::Fft);
        s.bandwidths = vec![1, 0];
        assert!(sweep_bandwidth(&s).is_err());
        let mut s = tiny(KernelId::Fft);
        s.implementations.clear();
        assert!(sweep_bandwidth(&s).is_err());
    }

    #[test]
    fn records_follow_table_order() {
        let sweep = run_sweep(&tiny(KernelId::PageRank), SweepMode::Latency).unwrap();
        assert_eq!(sweep.records.len(), 4);
        assert_eq!(sweep.records[1].implementation, Implementation::Vector { vlmax: 64 });
        assert_eq!(sweep.records[2].memory.extra_latency, 256);
    }
}
