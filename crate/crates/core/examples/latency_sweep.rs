//! Latency sensitivity of one kernel: slowdown of each implementation as
//! extra memory latency grows, relative to its own zero-latency run.

use longvec_lab::harness::{sweep_latency, Implementation, InputSource, KernelId, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kernel: KernelId = std::env::args().nth(1).as_deref().unwrap_or("spmv").parse()?;
    let spec = SweepSpec {
        implementations: vec![
            Implementation::Scalar,
            Implementation::Vector { vlmax: 8 },
            Implementation::Vector { vlmax: 64 },
            Implementation::Vector { vlmax: 256 },
        ],
        extra_latencies: vec![0, 16, 64, 256, 1024],
        repetitions: 1,
        input: InputSource::default_for(kernel).with_size(if kernel == KernelId::Fft { 1024 } else { 2048 }),
        ..SweepSpec::new(kernel)
    };
    let table = sweep_latency(&spec)?;
    println!("{kernel} on {}", spec.input.id());
    print!("{}", table.to_csv_string());
    Ok(())
}
