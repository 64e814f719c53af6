//! File formats, verification suite and CLI for the `subdense-core`
//! subordinator density engine.
//!
//! Exit-code contract of the binary: 0 success, 1 numerical-integrity
//! failure, 2 capability error (a theorem's hypotheses are unmet for the
//! model), 3 malformed model/profile specification or invocation.

pub mod cli;
pub mod emit;
pub mod error;
pub mod grid;
pub mod spec_io;
pub mod verify;
