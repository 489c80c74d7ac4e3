//! Commutative factorization of polynomial Liénard equations and their
//! closed-form solutions.

pub mod cli;
pub mod factorize;
pub mod models;
pub mod polyalg;
pub mod waveforms;
pub mod verify;
