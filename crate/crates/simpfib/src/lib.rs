//! Exact combinatorial machinery for classifying spaces of finite simplicial
//! groups: the bar construction `BG`, the Kan loop group `ΩX`, twisting
//! functions and twisted Cartesian products, and an exhaustive verifier for
//! the isomorphism `BG ≅ BK ×_{τ^{BL}} BL` attached to a short exact
//! sequence `1 → K → G → L → 1`, together with its semidirect-product
//! simplification.
//!
//! Everything is table-driven and exact: group elements are dense integer
//! ids, simplices are value objects, and all checks are integer equalities
//! (exhaustive within an explicit dimension cutoff, seeded sampling where a
//! carrier is infinite).

pub mod bar;
pub mod fibration;
pub mod group;
pub mod homology;
pub mod loop_group;
pub mod report;
pub mod simplicial;
pub mod specfile;
pub mod twisted;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("projection is not surjective")]
    NotSurjective,

    #[error("cutoff too small: need {required}, have {available}")]
    CutoffExceeded { required: usize, available: usize },

    #[error("simplicial set is not reduced")]
    NotReduced,

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("element {elem} at level {level} lies outside the image of the fibre inclusion")]
    OutsideKernel { level: usize, elem: usize },

    #[error("section is not multiplicative")]
    SectionNotMultiplicative,

    #[error("invalid section: {0}")]
    InvalidSection(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
