//! IO, file formats and the benchmark harness for the rate-allocation
//! library. The algorithms themselves live in `ratefair-core`; this crate
//! adds everything that needs an operating system.

pub mod format;
pub mod harness;
