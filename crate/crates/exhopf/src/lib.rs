//! Exact mod-p algebra for the cohomology of exceptional Lie groups.
//!
//! The crate builds everything from sparse polynomial arithmetic over small
//! prime fields: symmetric functions and Wu formulas, a truncated Buchberger
//! engine, the invariant-theory data of the exceptional groups, two
//! Steenrod-action engines, the structure constants `b_{s,t}` and a finite
//! Hopf-algebra model with its coproduct solver.

pub mod ffpoly;
pub mod symfun;
pub mod liedata;
pub mod steenrod;
pub mod groebner;
pub mod bst;
pub mod hopf;
pub mod fixtures;
