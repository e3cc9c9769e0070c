//! Exact-rational norms on finite-dimensional spaces and their transport
//! along multilinear maps.
//!
//! Unit balls are polytopes given by vertices (ball = convex hull), by
//! facet functionals (ball = solution set of `⟨f,x⟩ ≤ 1`), or by both
//! with a checked duality certificate.  Norm values are computed exactly
//! over the rationals: vertex data feeds a two-phase simplex solver, facet
//! data a maximum of inner products.  On top of that sit the tensor-space
//! constructions — projective and injective norms, crossnorm and
//! contractivity sweeps — and the transport of norms along one marked leg
//! of a multilinear map, which reproduces all three of the classical
//! constructions as special cases.

mod la;
pub mod polytope;
pub mod sample;
pub mod simplex;
pub mod tensor;
pub mod transport;

pub use la::{image_basis, kernel_basis, matrix_rank};
pub use polytope::{gauge, polar_vertices, NormError, PolytopeNorm};
pub use sample::{rng_from_seed, sample_rational, sample_vector};
pub use simplex::{maximize, LpOutcome};
pub use tensor::{
    cap_map, cofactorization_check, crossnorm_contractive_equivalence, cup_map, injective,
    is_contractive, is_crossnorm, factorization_check, merge_map, projective, split_map,
    ContractivityReport, CrossnormReport, EquivalenceReport, FactorizationReport, PolyLinearMap,
    TensorElement,
};
pub use transport::{
    dual_matches_pullback_along_cap, injective_matches_pullback, projective_matches_pushforward,
    pullback_norm, pushforward_norm, TransportSide, TransportedNorm,
};

use num::BigRational;
use std::fmt;

/// A rational extended with a single point at infinity, the value of a
/// gauge outside the cone it generates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(BigRational),
    Infinite,
}

impl ExtendedRational {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedRational::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::Infinite => None,
        }
    }

    pub fn finite(r: BigRational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl From<BigRational> for ExtendedRational {
    fn from(r: BigRational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) => write!(out, "{r}"),
            ExtendedRational::Infinite => write!(out, "inf"),
        }
    }
}
