//! Discrete-round rumor spreading in the mobile telephone model.
//!
//! The mobile telephone model restricts the classical telephone model: each
//! node participates in at most one connection per round, may advertise a
//! small tag before connections are decided, and the topology is only
//! guaranteed stable for intervals of `tau` rounds. This crate provides:
//!
//! - [`graph`]: static and dynamic graph types, generators (generalized
//!   stars, the clique/independent-set "bad graph", standard families), and
//!   JSON file I/O.
//! - [`metrics`]: exact and sampled vertex expansion, conductance, cuts,
//!   and degree statistics, with exact rational values and witnesses.
//! - [`matching`]: bipartite bridge graphs between informed and uninformed
//!   partitions, maximum matching, and the matching-to-expansion ratio
//!   `gamma`.
//! - [`sim`]: the round state machine and the PUSH / RPULL / PUSHPULL_ALT /
//!   PPUSH / MATCH_GREEDY protocols.
//! - [`experiments`]: seeded Monte Carlo harness, scaling sweeps, phase
//!   auditing, and power-law fitting.
//! - [`enumerate`]: exhaustive enumeration of small connected graphs up to
//!   isomorphism, used by the verification suites.
//!
//! With the default `parallel` feature, subset enumeration and Monte Carlo
//! trials run on rayon; results are identical to the sequential fallback.

pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod matching;
pub mod metrics;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{DynamicGraph, Graph, NodeId, Stability};
