pub mod harness;
pub mod inputs;
pub mod kernels;
pub mod machine;
pub mod memory;
