use crate::memory::Cycle;

/// A vector operand or result: `len()` 64-bit elements plus the cycle at
/// which the producing instruction delivers them.
///
/// Elements are raw bits; each operation decides whether to read them as
/// `f64` or `i64`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecValue {
    pub(crate) elems: Vec<u64>,
    pub(crate) ready: Cycle,
}

impl VecValue {
    pub fn from_bits(elems: Vec<u64>) -> Self {
        Self { elems, ready: 0 }
    }

    pub fn from_f64s(values: &[f64]) -> Self {
        Self::from_bits(values.iter().map(|v| v.to_bits()).collect())
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::from_bits(values.iter().map(|&v| v as u64).collect())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn bits(&self) -> &[u64] {
        &self.elems
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.elems.iter().map(|&b| f64::from_bits(b)).collect()
    }

    pub fn to_i64s(&self) -> Vec<i64> {
        self.elems.iter().map(|&b| b as i64).collect()
    }

    pub fn ready(&self) -> Cycle {
        self.ready
    }
}

/// Per-element predicate produced by vector compares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskValue {
    pub(crate) bits: Vec<bool>,
    pub(crate) ready: Cycle,
}

impl MaskValue {
    pub fn from_bools(bits: Vec<bool>) -> Self {
        Self { bits, ready: 0 }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn ready(&self) -> Cycle {
        self.ready
    }
}

/// A scalar register value with its availability cycle.
///
/// Host-side constants (loop bounds, base addresses) are built with the
/// `u64`/`i64`/`f64` constructors and are ready at cycle 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    pub(crate) bits: u64,
    pub(crate) ready: Cycle,
}

impl Scalar {
    pub fn from_bits(bits: u64) -> Self {
        Self { bits, ready: 0 }
    }

    pub fn u64(v: u64) -> Self {
        Self::from_bits(v)
    }

    pub fn i64(v: i64) -> Self {
        Self::from_bits(v as u64)
    }

    pub fn f64(v: f64) -> Self {
        Self::from_bits(v.to_bits())
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn as_u64(self) -> u64 {
        self.bits
    }

    pub fn as_i64(self) -> i64 {
        self.bits as i64
    }

    pub fn as_f64(self) -> f64 {
        f64::from_bits(self.bits)
    }

    pub fn ready(self) -> Cycle {
        self.ready
    }
}

/// Second operand of an elementwise operation.
#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Vector(&'a VecValue),
    Scalar(Scalar),
}

impl<'a> From<&'a VecValue> for Operand<'a> {
    fn from(v: &'a VecValue) -> Self {
        Operand::Vector(v)
    }
}

impl From<Scalar> for Operand<'_> {
    fn from(s: Scalar) -> Self {
        Operand::Scalar(s)
    }
}

/// Two-input ALU/FPU operation shared by the scalar core and the vector lanes.
///
/// Integer variants read elements as two's-complement `i64` with wrapping
/// arithmetic; `F*` variants read them as `f64`. Shift amounts use the low
/// six bits of the second operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AluOp {
    Add,
    Sub,
    Mul,
    Min,
    Max,
    And,
    Or,
    Shl,
    Shr,
    FAdd,
    FSub,
    FMul,
    FDiv,
    FMin,
    FMax,
}

impl AluOp {
    pub fn apply(self, a: u64, b: u64) -> u64 {
        let (ia, ib) = (a as i64, b as i64);
        let (fa, fb) = (f64::from_bits(a), f64::from_bits(b));
        match self {
            AluOp::Add => ia.wrapping_add(ib) as u64,
            AluOp::Sub => ia.wrapping_sub(ib) as u64,
            AluOp::Mul => ia.wrapping_mul(ib) as u64,
            AluOp::Min => ia.min(ib) as u64,
            AluOp::Max => ia.max(ib) as u64,
            AluOp::And => a & b,
            AluOp::Or => a | b,
            AluOp::Shl => a << (b & 63),
            AluOp::Shr => a >> (b & 63),
            AluOp::FAdd => (fa + fb).to_bits(),
            AluOp::FSub => (fa - fb).to_bits(),
            AluOp::FMul => (fa * fb).to_bits(),
            AluOp::FDiv => (fa / fb).to_bits(),
            AluOp::FMin => fa.min(fb).to_bits(),
            AluOp::FMax => fa.max(fb).to_bits(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    /// Signed integer `a < b`.
    Lt,
    /// Signed integer `a > b`.
    Gt,
    /// Bitwise equality.
    Eq,
    FLt,
    FEq,
}

impl CmpOp {
    pub fn apply(self, a: u64, b: u64) -> bool {
        match self {
            CmpOp::Lt => (a as i64) < (b as i64),
            CmpOp::Gt => (a as i64) > (b as i64),
            CmpOp::Eq => a == b,
            CmpOp::FLt => f64::from_bits(a) < f64::from_bits(b),
            CmpOp::FEq => f64::from_bits(a) == f64::from_bits(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReduceOp {
    Sum,
    FSum,
    Max,
    Min,
    FMax,
    FMin,
    Or,
}

impl ReduceOp {
    /// Identity element, when the operation has one.
    pub(crate) fn identity(self) -> Option<u64> {
        match self {
            ReduceOp::Sum | ReduceOp::Or => Some(0),
            ReduceOp::FSum => Some(0.0f64.to_bits()),
            _ => None,
        }
    }

    pub(crate) fn alu(self) -> AluOp {
        match self {
            ReduceOp::Sum => AluOp::Add,
            ReduceOp::FSum => AluOp::FAdd,
            ReduceOp::Max => AluOp::Max,
            ReduceOp::Min => AluOp::Min,
            ReduceOp::FMax => AluOp::FMax,
            ReduceOp::FMin => AluOp::FMin,
            ReduceOp::Or => AluOp::Or,
        }
    }
}
