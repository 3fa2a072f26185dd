//! Tight polynomial bounds for a weak imperative language with bounded loops.

pub mod closure;
pub mod engine;
pub mod error;
pub mod hardness;
pub mod lang;
pub mod matrix;
pub mod multi;
pub mod poly;
pub mod polyhedron;
pub mod uni;
