use std::collections::{BTreeMap, VecDeque};

use longvec_lab::memory::{
    bandwidth_ratio, BandwidthLimiter, Lookup, MemoryConfig, MemoryModel, RequestBatch, RequestKind, SetAssocCache,
};
use proptest::prelude::*;

/// Oldest-first window allocation written directly from the rule: walk the
/// requests in arrival order and give each the first window at or after its
/// arrival with a free slot.
fn oracle_grants(num: u32, den: u64, arrivals: &[u64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..arrivals.len()).collect();
    order.sort_by_key(|&i| (arrivals[i], i));
    let mut used: BTreeMap<u64, u32> = BTreeMap::new();
    let mut grants = vec![0; arrivals.len()];
    for i in order {
        let t = arrivals[i];
        let mut w = t / den;
        while used.get(&w).copied().unwrap_or(0) >= num {
            w += 1;
        }
        *used.entry(w).or_default() += 1;
        grants[i] = t.max(w * den);
    }
    grants
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn limiter_matches_window_oracle(
        num in 1u32..5,
        den in 1u64..65,
        gaps in prop::collection::vec(0u64..40, 1..300),
    ) {
        let arrivals: Vec<u64> = gaps.iter().scan(0, |t, g| { *t += g; Some(*t) }).collect();
        let mut lim = BandwidthLimiter::new(num, den as u32, 0);
        let got: Vec<u64> = arrivals.iter().map(|&t| lim.grant(t)).collect();
        prop_assert_eq!(&got, &oracle_grants(num, den, &arrivals));
        prop_assert!(got.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn limiter_window_law_out_of_order(
        num in 1u32..5,
        den in 1u64..65,
        arrivals in prop::collection::vec(0u64..5_000, 1..300),
    ) {
        let mut lim = BandwidthLimiter::new(num, den as u32, 0);
        let mut per_window: BTreeMap<u64, u32> = BTreeMap::new();
        for &t in &arrivals {
            let g = lim.grant(t);
            prop_assert!(g >= t);
            *per_window.entry(g / den).or_default() += 1;
        }
        prop_assert!(per_window.values().all(|&c| c <= num));
    }

    #[test]
    fn latency_law_on_random_batches(
        extra in 0u64..2000,
        bw in prop::sample::select(vec![1u32, 2, 4, 8, 16, 32, 64]),
        batches in prop::collection::vec((0u64..500, prop::collection::vec(0u64..1 << 22, 1..64), any::<bool>()), 1..20),
    ) {
        let cfg = MemoryConfig::default().with_extra_latency(extra).with_bandwidth(bw).unwrap();
        let mut m = MemoryModel::new(cfg).unwrap();
        m.enable_log();
        let mut t = 0;
        for (gap, addrs, write) in batches {
            t += gap;
            let kind = if write { RequestKind::Write } else { RequestKind::Read };
            let done = m.issue_requests(&RequestBatch::from_addresses(addrs.iter().map(|a| a * 8), 64, kind, t));
            prop_assert!(done >= t);
        }
        for e in m.log().unwrap() {
            if e.hit {
                prop_assert!(e.completion_cycle >= e.cycle_issued + cfg.l2_hit_cycles);
            } else {
                prop_assert_eq!(e.completion_cycle - e.grant_cycle, cfg.miss_latency());
                prop_assert!(e.grant_cycle >= e.cycle_issued);
            }
        }
    }

    #[test]
    fn cache_matches_lru_model(
        ways in 1usize..5,
        sets_log in 0u32..3,
        accesses in prop::collection::vec((0u64..24, any::<bool>()), 1..400),
    ) {
        let sets = 1u64 << sets_log;
        let mut cache = SetAssocCache::new(64 * sets * ways as u64, 64, ways);
        // per set: (line, dirty) from least to most recently used
        let mut model: Vec<VecDeque<(u64, bool)>> = vec![VecDeque::new(); sets as usize];
        for (line, write) in accesses {
            let addr = line * 64;
            let set = &mut model[(line % sets) as usize];
            let pos = set.iter().position(|&(l, _)| l == line);
            match (cache.lookup(addr, write), pos) {
                (Lookup::Hit { .. }, Some(p)) => {
                    let (l, d) = set.remove(p).unwrap();
                    set.push_back((l, d || write));
                }
                (Lookup::Miss, None) => {
                    let expected_victim = if set.len() == ways {
                        let (l, d) = set.pop_front().unwrap();
                        d.then_some(l * 64)
                    } else {
                        None
                    };
                    prop_assert_eq!(cache.fill(addr, 0, write), expected_victim);
                    set.push_back((line, write));
                }
                (got, want) => prop_assert!(false, "cache {:?} but model position {:?}", got, want),
            }
        }
    }
}

#[test]
fn bandwidth_register_mapping() {
    assert_eq!(bandwidth_ratio(1, 64).unwrap(), (1, 64));
    assert_eq!(bandwidth_ratio(2, 64).unwrap(), (1, 32));
    assert_eq!(bandwidth_ratio(48, 64).unwrap(), (3, 4));
    assert_eq!(bandwidth_ratio(64, 64).unwrap(), (1, 1));
    assert_eq!(bandwidth_ratio(128, 64).unwrap(), (2, 1));
    assert!(bandwidth_ratio(0, 64).is_err());
    assert!(bandwidth_ratio(1, 128).is_err());
}

#[test]
fn reconfigure_never_moves_grants_backwards() {
    let mut m = MemoryModel::new(MemoryConfig::default().with_bandwidth(1).unwrap()).unwrap();
    m.enable_log();
    m.issue_requests(&RequestBatch::from_addresses(
        (0..10u64).map(|i| i * 64),
        64,
        RequestKind::Read,
        0,
    ));
    m.configure_bandwidth(1, 1).unwrap();
    m.issue_requests(&RequestBatch::from_addresses(
        (10..20u64).map(|i| i * 64),
        64,
        RequestKind::Read,
        5,
    ));
    let grants: Vec<u64> = m.log().unwrap().iter().map(|e| e.grant_cycle).collect();
    assert!(grants.windows(2).all(|w| w[0] <= w[1]), "{grants:?}");
    assert_eq!(grants[9], 9 * 64);
}

#[test]
fn pipelined_misses_complete_back_to_back() {
    for extra in [0, 32, 1024] {
        let mut m = MemoryModel::new(MemoryConfig::default().with_extra_latency(extra)).unwrap();
        m.enable_log();
        m.issue_requests(&RequestBatch::from_addresses(
            (0..32u64).map(|i| i * 64),
            64,
            RequestKind::Read,
            7,
        ));
        let done: Vec<u64> = m.log().unwrap().iter().map(|e| e.completion_cycle).collect();
        let first = 7 + 10 + 50 + extra;
        assert_eq!(done, (first..first + 32).collect::<Vec<_>>());
    }
}
