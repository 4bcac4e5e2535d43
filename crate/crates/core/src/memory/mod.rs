//! Memory timing engine.
//!
//! A single shared L2 sits in front of main memory. L2 hits complete after
//! `l2_hit_cycles` and never touch the knobs below. L2 misses pass through
//! two stages, modelled after the FPGA latency controller and bandwidth
//! limiter:
//!
//! * the limiter grants at most `bw_numerator` misses per
//!   `bw_denominator`-cycle window, in request order;
//! * the latency controller delays every granted miss by
//!   `base_memory_latency + extra_latency` cycles, fully pipelined, so a later
//!   grant never waits for an earlier completion.
//!
//! A miss therefore completes exactly at
//! `grant + l2_hit_cycles + base_memory_latency + extra_latency`.
//!
//! The L2 is write-allocate and write-back; dirty evictions take a limiter
//! grant of their own. Data is kept in a flat [`Backing`] store and is always
//! architecturally current; caches only track tags and fill times.

mod cache;
mod limiter;
mod store;

use std::io::Write;

use thiserror::Error;

pub use cache::{Lookup, SetAssocCache};
pub use limiter::BandwidthLimiter;
pub use store::{Backing, WORD};

/// Simulated clock cycle.
pub type Cycle = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MemoryError {
    #[error("address {addr:#x} outside the simulated address space ({size} bytes)")]
    OutOfBounds { addr: u64, size: u64 },
    #[error("address {addr:#x} is not aligned to an 8-byte element")]
    Misaligned { addr: u64 },
    #[error("invalid memory configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryConfig {
    /// Bytes per cache line and per memory request.
    pub line_size: u64,
    pub l2_size: u64,
    pub l2_ways: usize,
    pub l2_hit_cycles: Cycle,
    pub base_memory_latency: Cycle,
    /// Latency-controller setting, added to every L2 miss.
    pub extra_latency: Cycle,
    pub bw_numerator: u32,
    pub bw_denominator: u32,
}

impl Default for MemoryConfig {
    fn default() -> Self {
        Self {
            line_size: 64,
            l2_size: 256 * 1024,
            l2_ways: 8,
            l2_hit_cycles: 10,
            base_memory_latency: 50,
            extra_latency: 0,
            bw_numerator: 1,
            bw_denominator: 1,
        }
    }
}

impl MemoryConfig {
    pub fn validate(&self) -> Result<(), MemoryError> {
        let bad = |m: String| Err(MemoryError::InvalidConfig(m));
        if !self.line_size.is_power_of_two() || self.line_size < WORD {
            return bad(format!("line_size {} must be a power of two >= 8", self.line_size));
        }
        if self.l2_ways == 0 {
            return bad("l2_ways must be at least 1".into());
        }
        let set_bytes = self.line_size * self.l2_ways as u64;
        if self.l2_size == 0 || !self.l2_size.is_multiple_of(set_bytes) {
            return bad(format!(
                "l2_size {} must be a non-zero multiple of line_size * l2_ways = {set_bytes}",
                self.l2_size
            ));
        }
        if self.bw_numerator == 0 || self.bw_denominator == 0 {
            return bad("bandwidth numerator and denominator must be >= 1".into());
        }
        Ok(())
    }

    /// Peak-normalised bytes per cycle admitted by the limiter.
    pub fn bytes_per_cycle(&self) -> f64 {
        self.line_size as f64 * self.bw_numerator as f64 / self.bw_denominator as f64
    }

    /// Sets the limiter so that it admits `bytes_per_cycle` bytes per cycle.
    pub fn with_bandwidth(mut self, bytes_per_cycle: u32) -> Result<Self, MemoryError> {
        let (num, den) = bandwidth_ratio(bytes_per_cycle, self.line_size)?;
        self.bw_numerator = num;
        self.bw_denominator = den;
        Ok(self)
    }

    pub fn with_extra_latency(mut self, cycles: Cycle) -> Self {
        self.extra_latency = cycles;
        self
    }

    /// Latency of an L2 miss from grant to data return.
    pub fn miss_latency(&self) -> Cycle {
        self.l2_hit_cycles + self.base_memory_latency + self.extra_latency
    }
}

/// Converts a bytes/cycle budget into the limiter's numerator/denominator
/// pair, in lowest terms. One request moves one line, so `line_size` bytes per
/// cycle is `1/1`; with 64-byte lines, 1 B/cycle is `1/64`.
pub fn bandwidth_ratio(bytes_per_cycle: u32, line_size: u64) -> Result<(u32, u32), MemoryError> {
    if bytes_per_cycle == 0 {
        return Err(MemoryError::InvalidConfig("bandwidth must be >= 1 B/cycle".into()));
    }
    let b = bytes_per_cycle as u64;
    let g = gcd(b, line_size);
    let (num, den) = (b / g, line_size / g);
    if den > 64 {
        return Err(MemoryError::InvalidConfig(format!(
            "{bytes_per_cycle} B/cycle is not expressible with a denominator <= 64"
        )));
    }
    Ok((num as u32, den as u32))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RequestKind {
    Read,
    Write,
    /// Dirty L2 eviction; generated internally.
    Writeback,
}

impl RequestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RequestKind::Read => "read",
            RequestKind::Write => "write",
            RequestKind::Writeback => "writeback",
        }
    }
}

/// Line requests issued together by one instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestBatch {
    line_addresses: Vec<u64>,
    pub kind: RequestKind,
    pub start_cycle: Cycle,
}

impl RequestBatch {
    /// Builds a batch from arbitrary byte addresses: each is aligned down to
    /// its line, then the set is sorted and deduplicated.
    pub fn from_addresses<I>(addrs: I, line_size: u64, kind: RequestKind, start_cycle: Cycle) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        let mut lines: Vec<u64> = addrs.into_iter().map(|a| a & !(line_size - 1)).collect();
        lines.sort_unstable();
        lines.dedup();
        Self {
            line_addresses: lines,
            kind,
            start_cycle,
        }
    }

    pub fn line_addresses(&self) -> &[u64] {
        &self.line_addresses
    }

    pub fn len(&self) -> usize {
        self.line_addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.line_addresses.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogEntry {
    pub cycle_issued: Cycle,
    pub line_address: u64,
    pub kind: RequestKind,
    pub hit: bool,
    /// Limiter grant for misses and writebacks; lookup cycle for hits.
    pub grant_cycle: Cycle,
    pub completion_cycle: Cycle,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoryStats {
    pub hits: u64,
    pub misses: u64,
    pub writebacks: u64,
}

/// L2 plus latency controller plus bandwidth limiter, and the backing store.
#[derive(Debug, Clone)]
pub struct MemoryModel {
    config: MemoryConfig,
    l2: SetAssocCache,
    limiter: BandwidthLimiter,
    backing: Backing,
    clock: Cycle,
    stats: MemoryStats,
    log: Option<Vec<LogEntry>>,
}

impl MemoryModel {
    pub fn new(config: MemoryConfig) -> Result<Self, MemoryError> {
        config.validate()?;
        Ok(Self {
            l2: SetAssocCache::new(config.l2_size, config.line_size, config.l2_ways),
            limiter: BandwidthLimiter::new(config.bw_numerator, config.bw_denominator, 0),
            backing: Backing::new(config.line_size),
            clock: 0,
            stats: MemoryStats::default(),
            log: None,
            config,
        })
    }

    pub fn config(&self) -> &MemoryConfig {
        &self.config
    }

    pub fn stats(&self) -> MemoryStats {
        self.stats
    }

    pub fn line_size(&self) -> u64 {
        self.config.line_size
    }

    /// Latest request cycle seen so far.
    pub fn clock(&self) -> Cycle {
        self.clock
    }

    /// Starts recording every request. Clears any previous log.
    pub fn enable_log(&mut self) {
        self.log = Some(Vec::new());
    }

    pub fn log(&self) -> Option<&[LogEntry]> {
        self.log.as_deref()
    }

    pub fn take_log(&mut self) -> Option<Vec<LogEntry>> {
        self.log.take()
    }

    /// Changes the latency controller. Applies to misses issued from now on;
    /// cache and limiter state are untouched.
    pub fn configure_extra_latency(&mut self, cycles: Cycle) {
        self.config.extra_latency = cycles;
    }

    /// Changes the limiter ratio. Windows restart at the current clock.
    pub fn configure_bandwidth(&mut self, numerator: u32, denominator: u32) -> Result<(), MemoryError> {
        if numerator == 0 || denominator == 0 {
            return Err(MemoryError::InvalidConfig(
                "bandwidth numerator and denominator must be >= 1".into(),
            ));
        }
        self.config.bw_numerator = numerator;
        self.config.bw_denominator = denominator;
        self.limiter.reconfigure(numerator, denominator, self.clock);
        Ok(())
    }

    /// Times a batch of line requests and returns the cycle at which the last
    /// one completes (`start_cycle` for an empty batch).
    pub fn issue_requests(&mut self, batch: &RequestBatch) -> Cycle {
        let start = batch.start_cycle;
        self.clock = self.clock.max(start);
        let write = batch.kind != RequestKind::Read;
        let mut done = start;
        for &line in batch.line_addresses() {
            let (hit, grant, completion) = match self.l2.lookup(line, write) {
                Lookup::Hit { ready } => {
                    self.stats.hits += 1;
                    (true, start, (start + self.config.l2_hit_cycles).max(ready))
                }
                Lookup::Miss => {
                    self.stats.misses += 1;
                    let grant = self.limiter.grant(start);
                    let completion = grant + self.config.miss_latency();
                    if let Some(victim) = self.l2.fill(line, completion, write) {
                        self.writeback(victim, start, grant);
                    }
                    (false, grant, completion)
                }
            };
            self.record(LogEntry {
                cycle_issued: start,
                line_address: line,
                kind: batch.kind,
                hit,
                grant_cycle: grant,
                completion_cycle: completion,
            });
            done = done.max(completion);
        }
        done
    }

    fn writeback(&mut self, line: u64, issued: Cycle, after: Cycle) {
        self.stats.writebacks += 1;
        let grant = self.limiter.grant(after);
        self.record(LogEntry {
            cycle_issued: issued,
            line_address: line,
            kind: RequestKind::Writeback,
            hit: false,
            grant_cycle: grant,
            completion_cycle: grant + self.config.miss_latency(),
        });
    }

    fn record(&mut self, entry: LogEntry) {
        if let Some(log) = self.log.as_mut() {
            log.push(entry);
        }
    }

    /// Whether `addr`'s line is currently resident in L2.
    pub fn l2_contains(&self, addr: u64) -> bool {
        self.l2.contains(addr & !(self.config.line_size - 1))
    }

    // ---- functional backing store -------------------------------------

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn check_addr(&self, addr: u64) -> Result<(), MemoryError> {
        self.backing.check(addr)
    }

    pub fn read_word(&self, addr: u64) -> Result<u64, MemoryError> {
        self.backing.read(addr)
    }

    pub fn write_word(&mut self, addr: u64, value: u64) -> Result<(), MemoryError> {
        self.backing.write(addr, value)
    }

    /// Reserves `n` zeroed words; returns the line-aligned base address.
    pub fn alloc_zeroed(&mut self, n: usize) -> u64 {
        self.backing.alloc(n)
    }

    pub fn alloc_u64(&mut self, data: &[u64]) -> u64 {
        let base = self.backing.alloc(data.len());
        for (i, &v) in data.iter().enumerate() {
            self.backing
                .write(base + i as u64 * WORD, v)
                .expect("freshly allocated");
        }
        base
    }

    pub fn alloc_f64(&mut self, data: &[f64]) -> u64 {
        let bits: Vec<u64> = data.iter().map(|v| v.to_bits()).collect();
        self.alloc_u64(&bits)
    }

    pub fn alloc_i64(&mut self, data: &[i64]) -> u64 {
        let bits: Vec<u64> = data.iter().map(|&v| v as u64).collect();
        self.alloc_u64(&bits)
    }

    pub fn read_u64s(&self, base: u64, n: usize) -> Result<Vec<u64>, MemoryError> {
        (0..n as u64).map(|i| self.backing.read(base + i * WORD)).collect()
    }

    pub fn read_f64s(&self, base: u64, n: usize) -> Result<Vec<f64>, MemoryError> {
        Ok(self.read_u64s(base, n)?.into_iter().map(f64::from_bits).collect())
    }

    pub fn read_i64s(&self, base: u64, n: usize) -> Result<Vec<i64>, MemoryError> {
        Ok(self.read_u64s(base, n)?.into_iter().map(|v| v as i64).collect())
    }
}

/// Writes a request log as CSV with the columns
/// `cycle_issued,line_address,kind,outcome,grant_cycle,completion_cycle`.
pub fn write_log_csv<W: Write>(entries: &[LogEntry], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "cycle_issued",
        "line_address",
        "kind",
        "outcome",
        "grant_cycle",
        "completion_cycle",
    ])?;
    for e in entries {
        w.write_record([
            e.cycle_issued.to_string(),
            format!("{:#x}", e.line_address),
            e.kind.as_str().to_string(),
            if e.hit { "hit" } else { "miss" }.to_string(),
            e.grant_cycle.to_string(),
            e.completion_cycle.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
