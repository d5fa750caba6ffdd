//! Free idempotent generated semigroups IG(E) over finite biordered sets.
//!
//! The crate builds Rees-coordinate models of the regular D-classes of IG(E),
//! contact automata between them, and decides equality and Green's relations
//! of arbitrary elements by coset propagation through those automata. A
//! capped rewriting oracle over the defining presentation serves as an
//! independent check.

#![forbid(unsafe_code)]

pub mod biorder;
pub mod contact;
pub mod corpus;
pub mod fixtures;
pub mod group;
pub mod harness;
pub mod rees;
pub mod structure;
pub mod theta;
pub mod words;
