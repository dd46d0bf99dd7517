//! Finite categories, set-valued profunctors, collages and lax matrices,
//! and integer chain complexes with their cones and homology.

pub mod cli;
pub mod collage;
pub mod decat;
pub mod fincat;
pub mod ids;
pub mod k0chain;
pub mod profunctor;
mod quotient;
pub mod random;
pub mod report;
