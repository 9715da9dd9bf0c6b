//! Numerical toolkit for adiabatic quantum parameter amplification:
//! dressed-frame sensor models, adiabatic schedules, dynamical-decoupling
//! audits, correlated dephasing noise, Ramsey-style protocols, and
//! sensitivity estimation.

pub mod adiabatic;
pub mod config;
pub mod dd;
pub mod error;
pub mod estimate;
pub mod model;
pub mod noise;
pub mod protocol;
pub mod qcore;

pub use error::{Error, Result};
