//! Trace-driven use of the set-associative LRU tag store: a loop over a
//! working set that fits, then one that exceeds the capacity by one line
//! per set and thrashes under LRU.

use longvec_lab::memory::{Lookup, SetAssocCache};

fn hit_rate(cache: &mut SetAssocCache, lines: u64, passes: usize) -> f64 {
    let mut hits = 0;
    let mut total = 0;
    for _ in 0..passes {
        for l in 0..lines {
            let addr = l * cache.line_size();
            total += 1;
            match cache.lookup(addr, false) {
                Lookup::Hit { .. } => hits += 1,
                Lookup::Miss => {
                    cache.fill(addr, 0, false);
                }
            }
        }
    }
    hits as f64 / total as f64
}

fn main() {
    let capacity_lines = 4096 / 64;
    for lines in [capacity_lines / 2, capacity_lines, capacity_lines + 16] {
        let mut cache = SetAssocCache::new(4096, 64, 4);
        let rate = hit_rate(&mut cache, lines, 10);
        println!(
            "{} sets x {} ways, working set {lines:>3} lines: hit rate {rate:.3}",
            cache.sets(),
            cache.ways()
        );
    }
}
