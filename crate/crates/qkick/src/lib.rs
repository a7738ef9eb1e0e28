pub mod channel;
pub mod classify;
pub mod error;
pub mod hamiltonian;
pub mod harness;
pub mod io;
pub mod numerics;
pub mod spectral;
pub mod zeno;
pub mod zoo;
