//! Certified computation of the dimension constants `C₁(n)` and `C₂(n)` that
//! govern the volume expansion of the boundary isoperimetric ratio.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod exactfn;
pub mod numint;
pub mod pde;
pub mod profile;
