//! The emulated core: an in-order scalar front end feeding a long-vector
//! unit that executes from an instruction window.
//!
//! Kernels call typed intrinsics on a [`VectorContext`]; each call performs
//! the operation functionally and advances the timing state.
//!
//! Timing rules:
//!
//! * The front end runs scalar instructions in program order; each waits
//!   for its operands ([`Scalar::ready`]) and takes `scalar_op_cycles`.
//! * Vector instructions are dispatched in program order, one per
//!   `vector_issue_overhead` front-end cycles, into a window of
//!   `vector_window` instructions; dispatch stalls while the window is full
//!   of unfinished instructions. Dispatch never waits for vector data.
//! * A dispatched vector instruction starts once its operands are ready
//!   ([`VecValue::ready`], [`MaskValue::ready`]) and its pipe has a free
//!   slot. An arithmetic instruction over `vl` elements occupies the
//!   arithmetic pipe for `vector_issue_overhead + ceil(vl / lanes)` cycles. A
//!   memory instruction occupies the memory pipe for the same time, sends
//!   its line requests to the memory model, and delivers its data at
//!   `max(start + occupancy, memory completion)`. At most
//!   `vector_outstanding_mem` vector memory instructions are in flight.
//! * Scalar loads look up a private L1 first; L1 misses become L2 requests,
//!   at most `scalar_outstanding_misses` in flight at a time.
//! * Stores are posted: they never wait for their data and never stall
//!   later instructions.
//!
//! [`VectorContext::cycle`] is the latest cycle at which the front end or
//! either vector pipe is busy. Call [`VectorContext::fence`] at the end of a
//! kernel so it also covers all outstanding memory traffic.

mod scalar;
mod value;
mod vector;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::memory::{Cycle, MemoryError, SetAssocCache};

pub use value::{AluOp, CmpOp, MaskValue, Operand, ReduceOp, Scalar, VecValue};
pub use vector::Stride;

pub const VECTOR_REGISTERS: usize = 32;
pub const MASK_REGISTERS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MachineError {
    #[error("invalid machine configuration: {0}")]
    InvalidConfig(String),
    #[error("maximum vector length {requested} outside 1..={hardware}")]
    VlmaxOutOfRange { requested: usize, hardware: usize },
    #[error("operand has {found} elements but vl is {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{0:?} reduction over an empty vector has no identity")]
    EmptyReduction(ReduceOp),
    #[error("register {0} does not exist")]
    InvalidRegister(usize),
    #[error(transparent)]
    Memory(#[from] MemoryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineConfig {
    /// Elements per vector register (64-bit each).
    pub hardware_vlmax: usize,
    pub lanes: usize,
    pub scalar_outstanding_misses: usize,
    pub scalar_op_cycles: Cycle,
    pub vector_issue_overhead: Cycle,
    pub vector_outstanding_mem: usize,
    /// Vector instructions that may be dispatched but unfinished.
    pub vector_window: usize,
    /// Private scalar L1 data cache size in bytes; 0 disables it.
    pub l1_size: u64,
    pub l1_ways: usize,
    pub l1_hit_cycles: Cycle,
}

impl Default for MachineConfig {
    fn default() -> Self {
        Self {
            hardware_vlmax: 256,
            lanes: 8,
            scalar_outstanding_misses: 2,
            scalar_op_cycles: 1,
            vector_issue_overhead: 1,
            vector_outstanding_mem: 64,
            vector_window: 88,
            l1_size: 32 * 1024,
            l1_ways: 8,
            l1_hit_cycles: 2,
        }
    }
}

impl MachineConfig {
    pub fn validate(&self) -> Result<(), MachineError> {
        let bad = |m: String| Err(MachineError::InvalidConfig(m));
        let v = self.hardware_vlmax;
        if !v.is_power_of_two() || !(8..=256).contains(&v) {
            return bad(format!("hardware_vlmax {v} must be a power of two in 8..=256"));
        }
        if self.lanes == 0 || !v.is_multiple_of(self.lanes) {
            return bad(format!(
                "lanes {} must be >= 1 and divide hardware_vlmax {v}",
                self.lanes
            ));
        }
        if self.scalar_outstanding_misses == 0 {
            return bad("scalar_outstanding_misses must be >= 1".into());
        }
        if self.vector_outstanding_mem == 0 {
            return bad("vector_outstanding_mem must be >= 1".into());
        }
        if self.vector_window == 0 {
            return bad("vector_window must be >= 1".into());
        }
        if self.l1_size > 0 && (self.l1_ways == 0 || !self.l1_size.is_multiple_of(self.l1_ways as u64 * 8)) {
            return bad(format!("l1_size {} must be a multiple of l1_ways * 8", self.l1_size));
        }
        Ok(())
    }
}

/// Instruction counters, mostly for reports and sanity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MachineStats {
    pub vector_ops: u64,
    pub vector_mem_ops: u64,
    pub scalar_ops: u64,
    pub scalar_loads: u64,
    pub scalar_stores: u64,
    pub l1_hits: u64,
    pub l1_misses: u64,
}

/// Architectural and timing state of one simulated core.
#[derive(Debug, Clone)]
pub struct VectorContext {
    config: MachineConfig,
    effective_vlmax: usize,
    vl: usize,
    registers: Vec<Vec<u64>>,
    masks: Vec<Vec<bool>>,
    /// Front-end time: the next scalar instruction or vector dispatch.
    cycle: Cycle,
    arith_pipe: Pipe,
    mem_pipe: Pipe,
    /// Completion cycles of dispatched vector instructions.
    window: BinaryHeap<Reverse<Cycle>>,
    /// Completion cycles of in-flight scalar L2 requests.
    scalar_inflight: BinaryHeap<Reverse<Cycle>>,
    /// Completion cycles of in-flight vector memory instructions.
    vector_inflight: BinaryHeap<Reverse<Cycle>>,
    /// Latest completion of any memory access issued so far.
    drain: Cycle,
    l1: Option<SetAssocCache>,
    stats: MachineStats,
    vl_trace: Option<Vec<usize>>,
}

impl VectorContext {
    pub fn new(config: MachineConfig) -> Result<Self, MachineError> {
        config.validate()?;
        Ok(Self {
            effective_vlmax: config.hardware_vlmax,
            vl: 0,
            registers: vec![vec![0; config.hardware_vlmax]; VECTOR_REGISTERS],
            masks: vec![vec![false; config.hardware_vlmax]; MASK_REGISTERS],
            cycle: 0,
            arith_pipe: Pipe::default(),
            mem_pipe: Pipe::default(),
            window: BinaryHeap::new(),
            scalar_inflight: BinaryHeap::new(),
            vector_inflight: BinaryHeap::new(),
            drain: 0,
            // L1 lines are 64 bytes regardless of the L2 geometry.
            l1: (config.l1_size > 0).then(|| SetAssocCache::new(config.l1_size, 64, config.l1_ways)),
            stats: MachineStats::default(),
            vl_trace: None,
            config,
        })
    }

    pub fn config(&self) -> &MachineConfig {
        &self.config
    }

    pub fn cycle(&self) -> Cycle {
        self.cycle.max(self.arith_pipe.last_end).max(self.mem_pipe.last_end)
    }

    pub fn vl(&self) -> usize {
        self.vl
    }

    pub fn effective_vlmax(&self) -> usize {
        self.effective_vlmax
    }

    pub fn stats(&self) -> MachineStats {
        self.stats
    }

    /// Lowers (or restores) the maximum vector length, like writing the
    /// VLMAX control register. The current `vl` is clamped to the new cap.
    pub fn set_max_vl(&mut self, new_max: usize) -> Result<usize, MachineError> {
        if new_max == 0 || new_max > self.config.hardware_vlmax {
            return Err(MachineError::VlmaxOutOfRange {
                requested: new_max,
                hardware: self.config.hardware_vlmax,
            });
        }
        self.effective_vlmax = new_max;
        self.vl = self.vl.min(new_max);
        Ok(new_max)
    }

    /// Requests `avl` elements; grants `min(avl, effective_vlmax)`.
    pub fn set_vl(&mut self, avl: usize) -> usize {
        self.vl = avl.min(self.effective_vlmax);
        self.cycle += self.config.vector_issue_overhead;
        if let Some(trace) = self.vl_trace.as_mut() {
            trace.push(self.vl);
        }
        self.vl
    }

    /// Starts recording every value returned by [`set_vl`](Self::set_vl).
    pub fn record_vl_trace(&mut self) {
        self.vl_trace = Some(Vec::new());
    }

    pub fn vl_trace(&self) -> Option<&[usize]> {
        self.vl_trace.as_deref()
    }

    /// Charges `count` scalar bookkeeping instructions (loop counters,
    /// branches) that have no modelled data dependences.
    pub fn scalar_overhead(&mut self, count: u64) {
        self.cycle += count * self.config.scalar_op_cycles;
        self.stats.scalar_ops += count;
    }

    /// Stalls issue until `s` is available. Used where a scalar register feeds
    /// something the model does not track as an operand: a loop bound, a
    /// vector length request or a vector base address.
    pub fn wait_for(&mut self, s: Scalar) {
        self.cycle = self.cycle.max(s.ready);
    }

    /// Waits until every issued memory access has completed.
    pub fn fence(&mut self) -> Cycle {
        self.cycle = self.cycle().max(self.drain);
        self.arith_pipe = Pipe::default();
        self.mem_pipe = Pipe::default();
        self.scalar_inflight.clear();
        self.vector_inflight.clear();
        self.window.clear();
        self.cycle
    }

    /// Copies `value` into vector register `reg`, elements `0..value.len()`.
    pub fn write_register(&mut self, reg: usize, value: &VecValue) -> Result<(), MachineError> {
        let r = self.registers.get_mut(reg).ok_or(MachineError::InvalidRegister(reg))?;
        r[..value.len()].copy_from_slice(&value.elems);
        Ok(())
    }

    /// Reads the first `vl` elements of vector register `reg`.
    pub fn read_register(&self, reg: usize) -> Result<VecValue, MachineError> {
        let r = self.registers.get(reg).ok_or(MachineError::InvalidRegister(reg))?;
        Ok(VecValue {
            elems: r[..self.vl].to_vec(),
            ready: self.cycle,
        })
    }

    pub fn write_mask_register(&mut self, reg: usize, mask: &MaskValue) -> Result<(), MachineError> {
        let r = self.masks.get_mut(reg).ok_or(MachineError::InvalidRegister(reg))?;
        r[..mask.len()].copy_from_slice(&mask.bits);
        Ok(())
    }

    pub fn read_mask_register(&self, reg: usize) -> Result<MaskValue, MachineError> {
        let r = self.masks.get(reg).ok_or(MachineError::InvalidRegister(reg))?;
        Ok(MaskValue {
            bits: r[..self.vl].to_vec(),
            ready: self.cycle,
        })
    }

    fn check_len(&self, found: usize) -> Result<(), MachineError> {
        if found != self.vl {
            return Err(MachineError::LengthMismatch {
                expected: self.vl,
                found,
            });
        }
        Ok(())
    }

    fn lane_cycles(&self, n: usize) -> Cycle {
        n.div_ceil(self.config.lanes) as Cycle
    }

    /// Dispatches a vector instruction from the front end and returns the
    /// dispatch cycle. The caller pushes the instruction's completion onto
    /// the window.
    fn dispatch(&mut self) -> Cycle {
        let at = reserve_slot(&mut self.window, self.config.vector_window, self.cycle);
        self.cycle = at + self.config.vector_issue_overhead;
        at
    }

    /// Runs an arithmetic instruction: it starts once dispatched, its
    /// operands are ready and the arithmetic pipe is free for issue overhead
    /// plus `cost` cycles. Returns the completion cycle.
    fn exec_vector(&mut self, operands_ready: Cycle, cost: Cycle) -> Cycle {
        let at = self.dispatch();
        let busy = self.config.vector_issue_overhead + cost;
        let start = self.arith_pipe.reserve(at, operands_ready, busy);
        let done = start + busy;
        self.window.push(Reverse(done));
        self.stats.vector_ops += 1;
        done
    }
}

/// Throughput of one vector pipe. Each instruction takes the next
/// `len`-cycle slot in dispatch order; it starts at the later of its slot
/// and its operands, so an instruction waiting for data does not hold up
/// younger ones. Every timing quantity is a max/plus of earlier ones, so
/// delaying any memory response never makes a run finish earlier.
#[derive(Debug, Clone, Default)]
struct Pipe {
    next_slot: Cycle,
    last_end: Cycle,
}

impl Pipe {
    /// Returns the start cycle.
    fn reserve(&mut self, dispatched: Cycle, operands_ready: Cycle, len: Cycle) -> Cycle {
        let slot = dispatched.max(self.next_slot);
        self.next_slot = slot + len;
        let start = slot.max(operands_ready);
        self.last_end = self.last_end.max(start + len);
        start
    }
}

fn retire(heap: &mut BinaryHeap<Reverse<Cycle>>, now: Cycle) {
    while let Some(&Reverse(c)) = heap.peek() {
        if c > now {
            break;
        }
        heap.pop();
    }
}

/// Waits for a free slot in an in-flight queue of capacity `cap`.
fn reserve_slot(heap: &mut BinaryHeap<Reverse<Cycle>>, cap: usize, now: Cycle) -> Cycle {
    retire(heap, now);
    let mut start = now;
    while heap.len() >= cap {
        let Reverse(c) = heap.pop().expect("non-empty");
        start = start.max(c);
    }
    start
}
