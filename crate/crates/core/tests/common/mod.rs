//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod suite;
pub mod systems;
pub mod terms;
