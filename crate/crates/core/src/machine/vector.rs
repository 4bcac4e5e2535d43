use super::value::{AluOp, CmpOp, MaskValue, Operand, ReduceOp, Scalar, VecValue};
use super::{reserve_slot, MachineError, VectorContext};
use crate::memory::{Cycle, MemoryModel, RequestBatch, RequestKind, WORD};

/// Addressing mode of a vector memory instruction.
#[derive(Debug, Clone, Copy)]
pub enum Stride<'a> {
    /// Element `i` at `base + 8 * i`.
    Unit,
    /// Element `i` at `base + 8 * idx[i]` (indices are element offsets).
    Indexed(&'a VecValue),
}

fn mask_ready(mask: Option<&MaskValue>) -> Cycle {
    mask.map_or(0, |m| m.ready)
}

fn active(mask: Option<&MaskValue>, i: usize) -> bool {
    mask.is_none_or(|m| m.bits[i])
}

impl VectorContext {
    fn check_mask(&self, mask: Option<&MaskValue>) -> Result<(), MachineError> {
        match mask {
            Some(m) => self.check_len(m.len()),
            None => Ok(()),
        }
    }

    fn operand_bits<'a>(&self, b: &Operand<'a>) -> Result<(Option<&'a [u64]>, u64, Cycle), MachineError> {
        match *b {
            Operand::Vector(v) => {
                self.check_len(v.len())?;
                Ok((Some(&v.elems), 0, v.ready))
            }
            Operand::Scalar(s) => Ok((None, s.bits, s.ready)),
        }
    }

    /// Elementwise `a op b`. Inactive elements keep `a`'s value.
    pub fn valu<'a>(
        &mut self,
        op: AluOp,
        a: &VecValue,
        b: impl Into<Operand<'a>>,
        mask: Option<&MaskValue>,
    ) -> Result<VecValue, MachineError> {
        let b = b.into();
        self.check_len(a.len())?;
        self.check_mask(mask)?;
        let (bv, bs, b_ready) = self.operand_bits(&b)?;
        let elems = a
            .elems
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if active(mask, i) {
                    op.apply(x, bv.map_or(bs, |v| v[i]))
                } else {
                    x
                }
            })
            .collect();
        let ready_in = a.ready.max(b_ready).max(mask_ready(mask));
        let ready = self.exec_vector(ready_in, self.lane_cycles(self.vl));
        Ok(VecValue { elems, ready })
    }

    /// Fused `a * b + c` on `f64` elements. Inactive elements keep `c`.
    pub fn vfmadd(
        &mut self,
        a: &VecValue,
        b: &VecValue,
        c: &VecValue,
        mask: Option<&MaskValue>,
    ) -> Result<VecValue, MachineError> {
        for v in [a, b, c] {
            self.check_len(v.len())?;
        }
        self.check_mask(mask)?;
        let elems = (0..self.vl)
            .map(|i| {
                if active(mask, i) {
                    let (x, y, z) = (
                        f64::from_bits(a.elems[i]),
                        f64::from_bits(b.elems[i]),
                        f64::from_bits(c.elems[i]),
                    );
                    x.mul_add(y, z).to_bits()
                } else {
                    c.elems[i]
                }
            })
            .collect();
        let ready_in = a.ready.max(b.ready).max(c.ready).max(mask_ready(mask));
        let ready = self.exec_vector(ready_in, self.lane_cycles(self.vl));
        Ok(VecValue { elems, ready })
    }

    /// Elementwise compare. Inactive elements yield `false`.
    pub fn vcmp<'a>(
        &mut self,
        op: CmpOp,
        a: &VecValue,
        b: impl Into<Operand<'a>>,
        mask: Option<&MaskValue>,
    ) -> Result<MaskValue, MachineError> {
        let b = b.into();
        self.check_len(a.len())?;
        self.check_mask(mask)?;
        let (bv, bs, b_ready) = self.operand_bits(&b)?;
        let bits = a
            .elems
            .iter()
            .enumerate()
            .map(|(i, &x)| active(mask, i) && op.apply(x, bv.map_or(bs, |v| v[i])))
            .collect();
        let ready_in = a.ready.max(b_ready).max(mask_ready(mask));
        let ready = self.exec_vector(ready_in, self.lane_cycles(self.vl));
        Ok(MaskValue { bits, ready })
    }

    /// `[start, start + 1, ..., start + vl - 1]`.
    pub fn vid(&mut self, start: u64) -> VecValue {
        let elems = (0..self.vl as u64).map(|i| start.wrapping_add(i)).collect();
        let ready = self.exec_vector(0, self.lane_cycles(self.vl));
        VecValue { elems, ready }
    }

    /// Broadcasts a scalar to `vl` elements.
    pub fn vsplat(&mut self, s: Scalar) -> VecValue {
        let elems = vec![s.bits; self.vl];
        let ready = self.exec_vector(s.ready, self.lane_cycles(self.vl));
        VecValue { elems, ready }
    }

    /// Reduction in lane-tree order: lane `l` folds elements
    /// `l, l + lanes, l + 2 * lanes, ...` left to right, then the lane
    /// partials are combined pairwise (`p[i] op p[i + s]` for
    /// `s = lanes/2, lanes/4, ..., 1`).
    ///
    /// Costs `issue + ceil(vl / lanes) + ceil(log2(max(lanes, 2)))`.
    pub fn vreduce(&mut self, op: ReduceOp, a: &VecValue) -> Result<Scalar, MachineError> {
        self.check_len(a.len())?;
        let bits = lane_tree_reduce(op, &a.elems, self.config.lanes)?;
        let tree = (self.config.lanes.max(2) as f64).log2().ceil() as Cycle;
        let ready = self.exec_vector(a.ready, self.lane_cycles(self.vl) + tree);
        Ok(Scalar { bits, ready })
    }

    /// Strictly ordered reduction seeded with `init`:
    /// `((init op a[0]) op a[1]) op ...`. Because the order does not depend on
    /// `vl`, strip-mined loops that carry the scalar across strips produce the
    /// same bits for every vector length.
    ///
    /// The ordered form retires one element per cycle: `issue + vl`.
    pub fn vreduce_ordered(&mut self, op: ReduceOp, a: &VecValue, init: Scalar) -> Result<Scalar, MachineError> {
        self.check_len(a.len())?;
        let alu = op.alu();
        let bits = a.elems.iter().fold(init.bits, |acc, &x| alu.apply(acc, x));
        let ready = self.exec_vector(a.ready.max(init.ready), self.vl as Cycle);
        Ok(Scalar { bits, ready })
    }

    /// Packs the mask-selected elements of `a` to the front, in order.
    pub fn vcompress(&mut self, a: &VecValue, mask: &MaskValue) -> Result<VecValue, MachineError> {
        self.check_len(a.len())?;
        self.check_len(mask.len())?;
        let elems = a
            .elems
            .iter()
            .zip(&mask.bits)
            .filter_map(|(&x, &m)| m.then_some(x))
            .collect();
        let ready = self.exec_vector(a.ready.max(mask.ready), self.lane_cycles(self.vl));
        Ok(VecValue { elems, ready })
    }

    /// Number of set bits in `mask`, delivered to a scalar register.
    pub fn vpopcount(&mut self, mask: &MaskValue) -> Result<Scalar, MachineError> {
        self.check_len(mask.len())?;
        let ready = self.exec_vector(mask.ready, self.lane_cycles(self.vl));
        Ok(Scalar {
            bits: mask.popcount() as u64,
            ready,
        })
    }

    fn element_addrs(
        &self,
        base: u64,
        stride: &Stride<'_>,
        mask: Option<&MaskValue>,
    ) -> Result<Vec<Option<u64>>, MachineError> {
        if let Stride::Indexed(idx) = stride {
            self.check_len(idx.len())?;
        }
        self.check_mask(mask)?;
        Ok((0..self.vl)
            .map(|i| {
                active(mask, i).then(|| match stride {
                    Stride::Unit => base.wrapping_add(i as u64 * WORD),
                    Stride::Indexed(idx) => base.wrapping_add(idx.elems[i].wrapping_mul(WORD)),
                })
            })
            .collect())
    }

    /// Runs one vector memory instruction and returns the data delivery
    /// cycle. The instruction starts once dispatched, an in-flight slot is
    /// free, `operands_ready` has passed and the memory pipe is free; its
    /// requests leave after the issue overhead, but not before `data_ready`
    /// (store data never holds up the pipe).
    fn exec_vector_mem(
        &mut self,
        mem: &mut MemoryModel,
        addrs: &[Option<u64>],
        kind: RequestKind,
        operands_ready: Cycle,
        data_ready: Cycle,
    ) -> Cycle {
        let at = self.dispatch();
        let at = reserve_slot(&mut self.vector_inflight, self.config.vector_outstanding_mem, at);
        let compute = self.lane_cycles(self.vl);
        let busy = self.config.vector_issue_overhead + compute;
        let start = self.mem_pipe.reserve(at, operands_ready, busy);
        let issue = start + self.config.vector_issue_overhead;
        let batch = RequestBatch::from_addresses(
            addrs.iter().flatten().copied(),
            mem.line_size(),
            kind,
            issue.max(data_ready),
        );
        let completion = mem.issue_requests(&batch);
        let done = (issue + compute).max(completion);
        self.vector_inflight.push(std::cmp::Reverse(done));
        self.window.push(std::cmp::Reverse(done));
        self.drain = self.drain.max(done);
        self.stats.vector_mem_ops += 1;
        done
    }

    /// Vector load. Inactive elements read as zero and generate no traffic.
    pub fn vload(
        &mut self,
        mem: &mut MemoryModel,
        base: u64,
        stride: Stride<'_>,
        mask: Option<&MaskValue>,
    ) -> Result<VecValue, MachineError> {
        let addrs = self.element_addrs(base, &stride, mask)?;
        let elems = addrs
            .iter()
            .map(|a| a.map_or(Ok(0), |a| mem.read_word(a)))
            .collect::<Result<Vec<_>, _>>()?;
        let idx_ready = match stride {
            Stride::Indexed(idx) => idx.ready,
            Stride::Unit => 0,
        };
        let ready = self.exec_vector_mem(mem, &addrs, RequestKind::Read, idx_ready.max(mask_ready(mask)), 0);
        Ok(VecValue { elems, ready })
    }

    /// Vector store. Indexed stores write elements in order, so the last of
    /// several elements aimed at one address wins.
    pub fn vstore(
        &mut self,
        mem: &mut MemoryModel,
        base: u64,
        value: &VecValue,
        stride: Stride<'_>,
        mask: Option<&MaskValue>,
    ) -> Result<(), MachineError> {
        self.check_len(value.len())?;
        let addrs = self.element_addrs(base, &stride, mask)?;
        for a in addrs.iter().flatten() {
            mem.check_addr(*a)?;
        }
        for (a, &v) in addrs.iter().zip(&value.elems) {
            if let Some(a) = a {
                mem.write_word(*a, v)?;
            }
        }
        let idx_ready = match stride {
            Stride::Indexed(idx) => idx.ready,
            Stride::Unit => 0,
        };
        let deps = idx_ready.max(mask_ready(mask));
        self.exec_vector_mem(mem, &addrs, RequestKind::Write, deps, value.ready);
        Ok(())
    }
}

/// Lane-tree reduction order shared with tests that need a matching oracle.
pub(crate) fn lane_tree_reduce(op: ReduceOp, elems: &[u64], lanes: usize) -> Result<u64, MachineError> {
    if elems.is_empty() {
        return op.identity().ok_or(MachineError::EmptyReduction(op));
    }
    let alu = op.alu();
    let mut partial: Vec<Option<u64>> = vec![None; lanes];
    for (i, &x) in elems.iter().enumerate() {
        let p = &mut partial[i % lanes];
        *p = Some(p.map_or(x, |acc| alu.apply(acc, x)));
    }
    let mut width = lanes.next_power_of_two();
    partial.resize(width, None);
    while width > 1 {
        width /= 2;
        for i in 0..width {
            partial[i] = match (partial[i], partial[i + width]) {
                (Some(a), Some(b)) => Some(alu.apply(a, b)),
                (a, b) => a.or(b),
            };
        }
    }
    Ok(partial[0].expect("non-empty input"))
}
