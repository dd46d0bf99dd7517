//! Integer chain complexes: shifts, cones, hom complexes, totalization,
//! homology and the signed block product.

mod checks;
mod complex;
mod doc;
mod homology;
pub mod matrix;
pub mod snf;
pub mod star;

use thiserror::Error;

pub use checks::{check_cone_bijection, check_cone_signs, check_quasi_iso, check_snf, check_tot_euler};
pub use complex::{
    cone, cone_from_data, cone_to_data, hom_complex, tot, Bicomplex, ChainComplex, ChainMap, Cone, GradedMap, HomComplex,
    Homotopy,
};
pub use doc::{BicomplexDoc, ChainMapDoc, ComplexDoc, ComplexRef, ComplexResolver, HomotopyDoc, NoComplexes};
pub use homology::{cone_is_acyclic, homology, homology_all, induced_is_iso, is_acyclic, is_quasi_iso, HomologyGroup};
pub use matrix::{IntMatrix, JsonInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("d∘d is nonzero at degree {degree}")]
    DifferentialSquareNonzero { degree: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unbounded complex: {0}")]
    UnboundedComplex(String),
    #[error("not a chain map at degree {degree}")]
    NotAChainMap { degree: i64 },
    #[error("not a null-homotopy at degree {degree}")]
    NotANullHomotopy { degree: i64 },
    #[error("composite of maps {index} and {} is nonzero at degree {degree}", index + 1)]
    CompositeNonzero { index: usize, degree: i64 },
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("malformed document: {0}")]
    Parse(String),
}
