//! Finite categories, distributors, and the polycategory-of-elements
//! construction for lax normal functors into distributors.

pub mod category;
pub mod construction;
pub mod distributor;
pub mod functor;

#[cfg(test)]
pub(crate) mod fixtures;

pub use category::{CatMorphism, CategoryError, FinCategory};
pub use distributor::{
    compose_distributors, cod_transport, dom_transport, hom_distributor, spliced_key, CoendClass,
    CoendComposite, DistKey, DistributorError, FinDistributor,
};
pub use functor::{
    check_lax_normal, LaxFailure, LaxNormalFunctor, LaxReport, LaxityKey, RawPair,
};
pub use construction::{
    build_elements, fibres_functor, pair_map_id, pair_object, refinement_roundtrip_check,
    roundtrip_check, ElementsConstruction, ElementsError, RefinementFailure,
    RefinementRoundtripReport, RoundtripFailure, RoundtripReport,
};
