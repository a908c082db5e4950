//! Metric dynamic logic of here-and-there over finite timed traces.
//!
//! The crate is split the way the logic is: [`syntax`] holds formulas and
//! their expansion into the core modalities, [`traces`] the timed
//! here-and-there traces and their bounded enumeration, [`semantics`] the
//! satisfaction relations, [`equilibrium`] the minimal-model search and
//! [`laws`] the exhaustive property suites.

pub mod equilibrium;
pub mod laws;
pub mod semantics;
pub mod syntax;
pub mod traces;
