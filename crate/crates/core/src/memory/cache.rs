//! Set-associative, true-LRU tag store used for both the shared L2 and the
//! scalar core's private L1.
//!
//! Only tags are tracked; data lives in the flat backing store. Every line
//! carries the cycle at which its fill completes, so an access that "hits" a
//! line still in flight waits for the fill instead of returning early.

use super::Cycle;

#[derive(Debug, Clone, Copy, Default)]
struct Way {
    tag: u64,
    valid: bool,
    dirty: bool,
    last_used: u64,
    ready: Cycle,
}

/// Outcome of a tag lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    /// Line present; data is available from `ready` on.
    Hit {
        ready: Cycle,
    },
    Miss,
}

#[derive(Debug, Clone)]
pub struct SetAssocCache {
    line_size: u64,
    sets: u64,
    ways: usize,
    slots: Vec<Way>,
    tick: u64,
}

impl SetAssocCache {
    /// `size` and `line_size` in bytes. Callers validate the geometry.
    pub fn new(size: u64, line_size: u64, ways: usize) -> Self {
        let sets = size / (line_size * ways as u64);
        assert!(sets >= 1, "cache must hold at least one set");
        Self {
            line_size,
            sets,
            ways,
            slots: vec![Way::default(); sets as usize * ways],
            tick: 0,
        }
    }

    pub fn line_size(&self) -> u64 {
        self.line_size
    }

    pub fn sets(&self) -> u64 {
        self.sets
    }

    pub fn ways(&self) -> usize {
        self.ways
    }

    fn split(&self, line_addr: u64) -> (usize, u64) {
        let line = line_addr / self.line_size;
        ((line % self.sets) as usize, line / self.sets)
    }

    fn set_slots(&mut self, set: usize) -> &mut [Way] {
        let base = set * self.ways;
        &mut self.slots[base..base + self.ways]
    }

    /// Looks up `line_addr`, refreshing its LRU position on a hit and marking
    /// it dirty when `write` is set.
    pub fn lookup(&mut self, line_addr: u64, write: bool) -> Lookup {
        self.tick += 1;
        let tick = self.tick;
        let (set, tag) = self.split(line_addr);
        for way in self.set_slots(set) {
            if way.valid && way.tag == tag {
                way.last_used = tick;
                way.dirty |= write;
                return Lookup::Hit { ready: way.ready };
            }
        }
        Lookup::Miss
    }

    /// Installs `line_addr`, replacing an invalid way or the least recently
    /// used one. Returns the address of the victim when it was dirty.
    pub fn fill(&mut self, line_addr: u64, ready: Cycle, dirty: bool) -> Option<u64> {
        self.tick += 1;
        let tick = self.tick;
        let (set, tag) = self.split(line_addr);
        let sets = self.sets;
        let line_size = self.line_size;
        let slots = self.set_slots(set);

        let victim = slots.iter().position(|w| !w.valid).unwrap_or_else(|| {
            slots
                .iter()
                .enumerate()
                .min_by_key(|(_, w)| w.last_used)
                .map(|(i, _)| i)
                .expect("non-empty set")
        });

        let old = slots[victim];
        slots[victim] = Way {
            tag,
            valid: true,
            dirty,
            last_used: tick,
            ready,
        };
        (old.valid && old.dirty).then(|| (old.tag * sets + set as u64) * line_size)
    }

    /// Tag check without touching replacement state.
    pub fn contains(&self, line_addr: u64) -> bool {
        let (set, tag) = self.split(line_addr);
        let base = set * self.ways;
        self.slots[base..base + self.ways]
            .iter()
            .any(|w| w.valid && w.tag == tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_access_hits() {
        let mut c = SetAssocCache::new(1024, 64, 2);
        assert_eq!(c.lookup(0, false), Lookup::Miss);
        assert_eq!(c.fill(0, 7, false), None);
        assert_eq!(c.lookup(0, false), Lookup::Hit { ready: 7 });
    }

    #[test]
    fn lru_victim_and_dirty_writeback() {
        // 2 ways, 8 sets: lines 0, 512, 1024 all map to set 0.
        let mut c = SetAssocCache::new(1024, 64, 2);
        c.lookup(0, true);
        c.fill(0, 0, true);
        c.lookup(512, false);
        c.fill(512, 0, false);
        // touch line 0 so 512 becomes LRU
        assert!(matches!(c.lookup(0, false), Lookup::Hit { .. }));
        c.lookup(1024, false);
        assert_eq!(c.fill(1024, 0, false), None);
        assert!(c.contains(0));
        assert!(!c.contains(512));
        // now 0 is LRU and dirty
        c.lookup(512, false);
        assert_eq!(c.fill(512, 0, false), Some(0));
    }
}
