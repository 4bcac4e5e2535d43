//! The bandwidth limiter on its own: grants for a burst of simultaneous
//! requests at 1, 1/4 and 2/3 requests per cycle, and a mid-run reconfigure.

use longvec_lab::memory::{bandwidth_ratio, BandwidthLimiter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for bytes in [64, 16] {
        let (num, den) = bandwidth_ratio(bytes, 64)?;
        let mut lim = BandwidthLimiter::new(num, den, 0);
        let grants: Vec<u64> = (0..8).map(|_| lim.grant(0)).collect();
        println!("{bytes:>3} B/cycle = {num}/{den} req/cycle: {grants:?}");
    }

    let mut lim = BandwidthLimiter::new(2, 3, 0);
    let grants: Vec<u64> = (0..9).map(|_| lim.grant(0)).collect();
    println!("2/3 req/cycle:                 {grants:?}");

    let mut lim = BandwidthLimiter::new(1, 1, 0);
    let before: Vec<u64> = (0..4).map(|_| lim.grant(0)).collect();
    lim.reconfigure(1, 8, 4);
    let after: Vec<u64> = (0..4).map(|_| lim.grant(4)).collect();
    println!("reconfigure 1/1 -> 1/8 at 4:   {before:?} then {after:?}");
    Ok(())
}
