use std::collections::VecDeque;

use super::Cycle;

/// Requests may arrive up to this many cycles behind the latest arrival;
/// anything older is treated as arriving at the oldest window still tracked.
pub const HORIZON: Cycle = 1 << 16;

/// Admission throttle: at most `numerator` grants inside each
/// `denominator`-cycle window. Windows are fixed, consecutive and aligned to
/// the cycle the current setting took effect.
///
/// Requests are served in arrival order: a request arriving at `t` takes the
/// first window at or after `t` with a free slot and is granted at
/// `max(t, window start)`. Arrivals may be reported out of order (within
/// [`HORIZON`] cycles); for non-decreasing arrivals this is plain FIFO and
/// grants never move backwards.
#[derive(Debug, Clone)]
pub struct BandwidthLimiter {
    numerator: u32,
    denominator: u32,
    origin: Cycle,
    /// Grants handed out in windows `base, base + 1, ...`.
    used: VecDeque<u32>,
    base: u64,
    /// Every window in `base..first_open` is full.
    first_open: u64,
    latest_arrival: Cycle,
    max_grant: Cycle,
    /// No grant precedes this cycle (the last grant before a reconfigure).
    floor: Cycle,
}

impl BandwidthLimiter {
    pub fn new(numerator: u32, denominator: u32, origin: Cycle) -> Self {
        debug_assert!(numerator >= 1 && denominator >= 1);
        Self {
            numerator,
            denominator,
            origin,
            used: VecDeque::new(),
            base: 0,
            first_open: 0,
            latest_arrival: origin,
            max_grant: origin,
            floor: origin,
        }
    }

    pub fn numerator(&self) -> u32 {
        self.numerator
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn origin(&self) -> Cycle {
        self.origin
    }

    /// Restarts window accounting at `origin` with a new ratio. Grants
    /// already handed out are kept; later ones never precede them.
    pub fn reconfigure(&mut self, numerator: u32, denominator: u32, origin: Cycle) {
        let floor = self.max_grant.max(origin);
        *self = Self::new(numerator, denominator, origin);
        self.floor = floor;
        self.max_grant = floor;
        self.latest_arrival = floor;
        self.base = (floor - origin) / denominator as u64;
        self.first_open = self.base;
    }

    /// Grant cycle for a request arriving at `at`.
    pub fn grant(&mut self, at: Cycle) -> Cycle {
        let den = self.denominator as u64;
        let t = at.max(self.floor).max(self.origin + self.base * den);
        self.latest_arrival = self.latest_arrival.max(t);
        let mut w = ((t - self.origin) / den).max(self.first_open);
        loop {
            let i = (w - self.base) as usize;
            if i >= self.used.len() {
                self.used.resize(i + 1, 0);
            }
            if self.used[i] < self.numerator {
                self.used[i] += 1;
                break;
            }
            w += 1;
        }
        while self.used.get((self.first_open - self.base) as usize) == Some(&self.numerator) {
            self.first_open += 1;
        }
        let g = t.max(self.origin + w * den);
        self.max_grant = self.max_grant.max(g);
        self.forget_old();
        g
    }

    fn forget_old(&mut self) {
        let den = self.denominator as u64;
        let keep_from = (self.latest_arrival.saturating_sub(HORIZON).max(self.origin) - self.origin) / den;
        // trim in batches
        if keep_from > self.base + 1024 {
            let drop = ((keep_from - self.base) as usize).min(self.used.len());
            self.used.drain(..drop);
            self.base += drop as u64;
            self.first_open = self.first_open.max(self.base);
        }
    }
}
