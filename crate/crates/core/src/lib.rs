//! Simulation and verification of a Mentor-initiated, controller-gated
//! hybrid bidirectional quantum communication protocol: teleportation of
//! an unknown qubit from Alice to Bob and remote preparation of a known
//! qubit from Bob at Alice, over two channels shared with a Mentor.

pub mod bases;
pub mod channels;
pub mod circuit;
pub mod error;
pub mod noise;
pub mod protocol;
pub mod qcore;
pub mod verify;

pub use error::{Error, Result};
