//! Library half of the command-line frontend: matrix file I/O, the
//! deterministic JSON emitter, and the campaign runner. The binary in
//! main.rs is a thin argument-parsing shell over these.

pub mod campaign;
pub mod io;
