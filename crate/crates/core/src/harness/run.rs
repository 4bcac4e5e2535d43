use super::{HarnessError, Implementation, KernelId, Workload};
use crate::kernels::Payload;
use crate::machine::{MachineConfig, VectorContext};
use crate::memory::{Cycle, MemoryConfig, MemoryModel};

/// Outcome of one experiment, with the full configuration it ran under.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub kernel: KernelId,
    pub implementation: Implementation,
    pub input_id: String,
    pub machine: MachineConfig,
    pub memory: MemoryConfig,
    pub repetitions: usize,
    /// Mean over the repetitions, which are required to be equal.
    pub cycles: Cycle,
    pub checksum: f64,
}

pub const RUN_CSV_HEADER: [&str; 24] = [
    "kernel",
    "impl",
    "input",
    "cycles",
    "checksum",
    "repetitions",
    "hardware_vlmax",
    "lanes",
    "scalar_outstanding_misses",
    "scalar_op_cycles",
    "vector_issue_overhead",
    "vector_outstanding_mem",
    "vector_window",
    "l1_size",
    "l1_ways",
    "l1_hit_cycles",
    "line_size",
    "l2_size",
    "l2_ways",
    "l2_hit_cycles",
    "base_memory_latency",
    "extra_latency",
    "bw_numerator",
    "bw_denominator",
];

impl RunRecord {
    /// One CSV row in [`RUN_CSV_HEADER`] order.
    pub fn csv_fields(&self) -> Vec<String> {
        let m = &self.machine;
        let mem = &self.memory;
        vec![
            self.kernel.to_string(),
            self.implementation.to_string(),
            self.input_id.clone(),
            self.cycles.to_string(),
            self.checksum.to_string(),
            self.repetitions.to_string(),
            m.hardware_vlmax.to_string(),
            m.lanes.to_string(),
            m.scalar_outstanding_misses.to_string(),
            m.scalar_op_cycles.to_string(),
            m.vector_issue_overhead.to_string(),
            m.vector_outstanding_mem.to_string(),
            m.vector_window.to_string(),
            m.l1_size.to_string(),
            m.l1_ways.to_string(),
            m.l1_hit_cycles.to_string(),
            mem.line_size.to_string(),
            mem.l2_size.to_string(),
            mem.l2_ways.to_string(),
            mem.l2_hit_cycles.to_string(),
            mem.base_memory_latency.to_string(),
            mem.extra_latency.to_string(),
            mem.bw_numerator.to_string(),
            mem.bw_denominator.to_string(),
        ]
    }
}

/// Writes `records` as CSV under [`RUN_CSV_HEADER`].
pub fn write_runs_csv<W: std::io::Write>(records: &[RunRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUN_CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Runs `workload` `repetitions` times, each on a fresh core and memory,
/// checks the first output against the oracle and requires every
/// repetition to produce the same cycle count and output.
pub fn run_experiment(
    workload: &Workload,
    implementation: Implementation,
    machine: &MachineConfig,
    memory: &MemoryConfig,
    repetitions: usize,
) -> Result<RunRecord, HarnessError> {
    if repetitions == 0 {
        return Err(HarnessError::Config("repetitions must be >= 1".into()));
    }
    machine.validate()?;
    memory.validate()?;
    let mut cycles = Vec::with_capacity(repetitions);
    let mut first: Option<Payload> = None;
    for _ in 0..repetitions {
        let (c, out) = run_once(workload, implementation, machine, memory)?;
        cycles.push(c);
        match &first {
            None => {
                workload.check(&out).map_err(|detail| HarnessError::OracleMismatch {
                    kernel: workload.kernel(),
                    implementation,
                    detail,
                })?;
                first = Some(out);
            }
            Some(f) if *f != out => {
                return Err(HarnessError::OracleMismatch {
                    kernel: workload.kernel(),
                    implementation,
                    detail: "repetitions produced different outputs".into(),
                })
            }
            Some(_) => {}
        }
    }
    let cycles = check_repetitions(&cycles)?;
    Ok(RunRecord {
        kernel: workload.kernel(),
        implementation,
        input_id: workload.input_id().to_string(),
        machine: *machine,
        memory: *memory,
        repetitions,
        cycles,
        checksum: first.expect("at least one repetition").checksum(),
    })
}

/// Mean of the repetition cycle counts, which must all be equal.
pub fn check_repetitions(cycles: &[Cycle]) -> Result<Cycle, HarnessError> {
    match cycles.first() {
        Some(&c) if cycles.iter().all(|&x| x == c) => Ok(c),
        _ => Err(HarnessError::Nondeterministic {
            cycles: cycles.to_vec(),
        }),
    }
}

fn run_once(
    workload: &Workload,
    implementation: Implementation,
    machine: &MachineConfig,
    memory: &MemoryConfig,
) -> Result<(Cycle, Payload), HarnessError> {
    let mut ctx = VectorContext::new(*machine)?;
    if let Implementation::Vector { vlmax } = implementation {
        ctx.set_max_vl(vlmax)?;
    }
    let mut mem = MemoryModel::new(*memory)?;
    let out = workload
        .execute(implementation, &mut ctx, &mut mem)
        .map_err(|source| HarnessError::Kernel {
            kernel: workload.kernel(),
            implementation,
            source,
        })?;
    Ok((ctx.fence(), out))
}
