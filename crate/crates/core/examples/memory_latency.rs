//! Drives the memory model directly with line batches: a cold streaming
//! batch at several latency-controller settings, then a warm re-read. The
//! request log of the last run is written as CSV to stdout.

use longvec_lab::memory::{write_log_csv, MemoryConfig, MemoryModel, RequestBatch, RequestKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lines = 32u64;
    for extra in [0, 32, 256, 1024] {
        let mut mem = MemoryModel::new(MemoryConfig::default().with_extra_latency(extra))?;
        let batch = RequestBatch::from_addresses((0..lines).map(|l| l * 64), 64, RequestKind::Read, 0);
        let cold = mem.issue_requests(&batch);
        let again = RequestBatch::from_addresses((0..lines).map(|l| l * 64), 64, RequestKind::Read, cold);
        let warm = mem.issue_requests(&again) - cold;
        println!(
            "extra={extra:>5}  miss latency={:>5}  cold batch done at {cold:>5}  warm re-read {warm} cycles",
            mem.config().miss_latency()
        );
    }

    let mut mem = MemoryModel::new(MemoryConfig::default().with_bandwidth(16)?)?;
    mem.enable_log();
    let batch = RequestBatch::from_addresses((0..8).map(|l| l * 64), 64, RequestKind::Read, 0);
    mem.issue_requests(&batch);
    println!("\nrequest log at 16 B/cycle:");
    write_log_csv(mem.log().unwrap_or_default(), std::io::stdout())?;
    Ok(())
}
