//! Eavesdropping analysis for the six-state quantum key distribution protocol.
//!
//! Closed-form attack metrics ([`incoherent`], [`coherent2`], [`coherent3`],
//! [`postproc`]) are cross-checked against a small dense linear-algebra
//! kernel ([`numerics`]) and a Monte Carlo run of the protocol ([`sim`]).

pub mod cli;
pub mod coherent2;
pub mod coherent3;
pub mod error;
pub mod incoherent;
pub mod info;
pub mod numerics;
pub mod optimize;
pub mod postproc;
pub mod probe;
pub mod qubit;
pub mod sim;
pub mod verify;

pub use coherent2::Coherent2Params;
pub use coherent3::Coherent3Params;
pub use error::{Error, Result};
pub use incoherent::IncoherentAttack;
