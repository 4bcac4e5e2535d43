use super::MemoryError;

/// Flat word-addressed backing store for the simulated address space.
///
/// Addresses are byte addresses; every element is 64 bits wide, so valid
/// addresses are multiples of 8 below the allocated size. Allocations are
/// bump-allocated and rounded up to whole cache lines.
#[derive(Debug, Clone, Default)]
pub struct Backing {
    words: Vec<u64>,
    line_size: u64,
}

pub const WORD: u64 = 8;

impl Backing {
    pub fn new(line_size: u64) -> Self {
        Self {
            words: Vec::new(),
            line_size,
        }
    }

    /// Size of the allocated address space in bytes.
    pub fn size(&self) -> u64 {
        self.words.len() as u64 * WORD
    }

    /// Reserves `n` zeroed words and returns the line-aligned base address.
    pub fn alloc(&mut self, n: usize) -> u64 {
        let base = self.size();
        let bytes = (n as u64 * WORD).div_ceil(self.line_size).max(1) * self.line_size;
        self.words.resize(((base + bytes) / WORD) as usize, 0);
        base
    }

    fn index(&self, addr: u64) -> Result<usize, MemoryError> {
        if !addr.is_multiple_of(WORD) {
            return Err(MemoryError::Misaligned { addr });
        }
        if addr >= self.size() {
            return Err(MemoryError::OutOfBounds {
                addr,
                size: self.size(),
            });
        }
        Ok((addr / WORD) as usize)
    }

    /// Validates that `[addr, addr + 8)` is addressable.
    pub fn check(&self, addr: u64) -> Result<(), MemoryError> {
        self.index(addr).map(|_| ())
    }

    pub fn read(&self, addr: u64) -> Result<u64, MemoryError> {
        Ok(self.words[self.index(addr)?])
    }

    pub fn write(&mut self, addr: u64, value: u64) -> Result<(), MemoryError> {
        let i = self.index(addr)?;
        self.words[i] = value;
        Ok(())
    }
}
