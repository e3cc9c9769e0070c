//! Finite planar polycategories, with enough machinery to decide the
//! structural questions that are usually left to hand calculation:
//!
//! * [`core`] — polymaps with list-shaped boundaries, planar composition,
//!   table- and monoid-presented polycategories, and the five-law checker.
//! * [`free`] — free polycategories on a poly-signature, as planar trees
//!   with a canonical encoding.
//! * [`universal`] — in/out-universal polymaps, tensors, pars, duals, and
//!   the two equivalent characterizations of birepresentability.
//! * [`fib`] — functors of polycategories, cartesian polymaps, pull/push
//!   fibrations, Frobenius monoids, polyfibers, and refinement pullbacks.
//! * [`norms`] — exact-rational polytope norms on finite-dimensional
//!   spaces, projective/injective tensor norms, and norm transport along
//!   polylinear maps (pullback and pushforward).
//! * [`elements`] — finite categories, distributors, lax normal functors,
//!   the polycategory-of-elements construction, and its inverse.
//!
//! Everything is exact: scalars are arbitrary-precision rationals, every
//! decision procedure enumerates its full (bounded) instance space, and
//! reports carry explicit witnesses or counterexamples.

pub mod core;
pub mod elements;
pub mod fib;
pub mod free;
pub mod norms;
pub mod universal;

pub use crate::core::{
    check_axioms, plan_composition, terminal, unique_functor_to_terminal, AxiomReport, Boundary,
    ComposeError, FinPolycategory, MonoidPolycategory, ObjectId, PolyFunctor, PolyMap,
    TablePolycategory,
};
