//! Report assembly and the scripted reference battery behind the `qr3`
//! binary. Split out as a library so integration tests can drive the rows
//! in-process.

pub mod reports;
pub mod suite;
