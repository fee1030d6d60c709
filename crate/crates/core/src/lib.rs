//! A checker for proof certificates over model-checking claims.
//!
//! The [`kernel`] is a focused sequent calculus for least and greatest fixed
//! points whose every rule consults a pluggable table of clerk and expert
//! predicates ([`fpc`]). Certificates such as paths, invariants, simulation
//! sets and Hennessy-Milner assertions are checked by letting those tables
//! steer proof reconstruction. The [`witness`] module generates certificates
//! and supplies independent semantic oracles; it is not trusted.

pub mod sexp;
pub mod terms;
pub mod unify;
pub mod fpc;
pub mod kernel;
pub mod encode;
pub mod witness;
pub mod golden;
pub mod cli;
