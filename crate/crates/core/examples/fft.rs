//! Radix-2 Stockham FFT on both cores, checked against a naive DFT.

use longvec_lab::inputs::gen_signal;
use longvec_lab::kernels::reference::{naive_dft, relative_l2};
use longvec_lab::kernels::{fft, Variant};
use longvec_lab::machine::{MachineConfig, VectorContext};
use longvec_lab::memory::{MemoryConfig, MemoryModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = gen_signal(2048, 3)?;
    let (want_re, want_im) = naive_dft(&x);
    for variant in [Variant::Scalar, Variant::Vector] {
        let mut ctx = VectorContext::new(MachineConfig::default())?;
        let mut mem = MemoryModel::new(MemoryConfig::default())?;
        let y = fft(&x, &mut ctx, &mut mem, variant)?;
        let err = relative_l2((y.re(), y.im()), (&want_re, &want_im));
        println!("{variant:?}: {} cycles, relative L2 error {err:.2e}", ctx.cycle());
    }
    Ok(())
}
