//! hwfactor: a construction and certification engine for Hamilton-Waterloo
//! 2-factorizations of `K_v` (v odd) or `K_v` minus a 1-factor (v even) into
//! `C_3`-factors and `C_n`-factors, n in {4, 5, 7}.
//!
//! The crate is organized around a catalog of direct constructions (base
//! blocks developed by group actions), three recursive compositions, a
//! search oracle for small ingredient designs, and an independent verifier
//! that certifies every design before it is surfaced.

pub mod catalog;
pub mod cayley;
pub mod cli;
pub mod compose;
pub mod core;
pub mod develop;
pub mod error;
pub mod par;
pub mod search;
pub mod verify;
