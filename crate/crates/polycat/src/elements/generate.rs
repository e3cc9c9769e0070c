//! Seeded generators for refinements and the families read off them, used
//! by the randomized suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::core::{
    unique_functor_to_terminal, Boundary, Composite, FinPolycategory, FunctorError,
    MonoidPolycategory, ObjectId, PolyFunctor, PolyMap, TablePolycategory, MONOID_OBJECT,
};

use super::construction::fibres_functor;
use super::functor::LaxNormalFunctor;

/// The discrete polycategory on `n` objects: identities and nothing else,
/// complete at the given scope bound because no wider polymap exists to
/// compose.
pub fn identities_only(n: usize, bound: usize) -> FinPolycategory {
    let objects: Vec<ObjectId> = (0..n).map(|k| ObjectId::new(format!("a{k}"))).collect();
    let maps: Vec<PolyMap> = objects
        .iter()
        .map(|o| {
            PolyMap::new(
                format!("id_{}", o.0),
                Boundary::new(vec![o.clone()], vec![o.clone()]),
            )
        })
        .collect();
    let identities: Vec<(ObjectId, PolyMap)> = objects
        .iter()
        .cloned()
        .zip(maps.iter().cloned())
        .collect();
    let composites = maps
        .iter()
        .map(|m| Composite {
            f: m.clone(),
            i: 0,
            g: m.clone(),
            j: 0,
            result: m.clone(),
        })
        .collect();
    FinPolycategory::Table(
        TablePolycategory::new(objects, bound, maps, identities, composites)
            .expect("identity-only table is complete"),
    )
}

/// The refinement induced by an elementwise monoid map: every polymap is
/// sent to its image at the same shape.  The shape data is always well
/// formed; whether the result preserves composition is for `check_functor`
/// to say.
pub fn monoid_hom_functor(
    source: MonoidPolycategory,
    target: MonoidPolycategory,
    h: impl Fn(&str) -> String,
) -> Result<PolyFunctor, FunctorError> {
    let source = FinPolycategory::Monoid(source);
    let target = FinPolycategory::Monoid(target);
    let star = ObjectId::new(MONOID_OBJECT);
    let obj_map = [(star.clone(), star)].into_iter().collect();
    let map_map: BTreeMap<PolyMap, PolyMap> = source
        .all_polymaps()
        .into_iter()
        .map(|m| {
            let image = PolyMap::new(h(&m.id), m.boundary.clone());
            (m, image)
        })
        .collect();
    PolyFunctor::new(source, target, obj_map, map_map)
}

fn residue(modulus: usize) -> impl Fn(&str) -> String {
    move |e: &str| {
        let k: usize = e.parse().expect("cyclic elements are numerals");
        (k % modulus).to_string()
    }
}

/// One refinement out of a fixed family of checked functors, selected by
/// the seed: cyclic-group reductions, a coordinate projection, and
/// collapses of small monoids and a discrete table to the terminal base.
/// All live at scope bound 2.
pub fn sample_refinement(seed: u64) -> PolyFunctor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = rng.gen_range(0..8);
    let hom = |s: MonoidPolycategory, t: MonoidPolycategory, h: Box<dyn Fn(&str) -> String>| {
        monoid_hom_functor(s, t, h).expect("sample family maps are well shaped")
    };
    match pick {
        0 => hom(
            MonoidPolycategory::cyclic(4, 2),
            MonoidPolycategory::cyclic(2, 2),
            Box::new(residue(2)),
        ),
        1 => {
            let z2 = MonoidPolycategory::cyclic(2, 2);
            let square = MonoidPolycategory::direct_product(&z2, &z2, 2);
            hom(
                square,
                z2,
                Box::new(|e: &str| e.split('|').next().expect("product elements").to_string()),
            )
        }
        2 => hom(
            MonoidPolycategory::cyclic(6, 2),
            MonoidPolycategory::cyclic(3, 2),
            Box::new(residue(3)),
        ),
        3 => hom(
            MonoidPolycategory::cyclic(6, 2),
            MonoidPolycategory::cyclic(2, 2),
            Box::new(residue(2)),
        ),
        4 => unique_functor_to_terminal(&FinPolycategory::Monoid(
            MonoidPolycategory::boolean_and(2),
        )),
        5 => unique_functor_to_terminal(&FinPolycategory::Monoid(MonoidPolycategory::cyclic(
            2, 2,
        ))),
        6 => unique_functor_to_terminal(&FinPolycategory::Monoid(MonoidPolycategory::cyclic(
            3, 2,
        ))),
        _ => unique_functor_to_terminal(&identities_only(2, 2)),
    }
}

/// The family read off a sampled refinement; coherent by construction.
pub fn sample_lax_functor(seed: u64) -> LaxNormalFunctor {
    fibres_functor(&sample_refinement(seed)).expect("sampled refinements are checked functors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::functor::check_lax_normal;
    use crate::fib::check_functor;

    #[test]
    fn sampling_is_deterministic() {
        for seed in 0..8 {
            assert_eq!(sample_refinement(seed), sample_refinement(seed));
        }
    }

    #[test]
    fn the_family_is_actually_varied() {
        let mut seen: Vec<PolyFunctor> = Vec::new();
        for seed in 0..32 {
            let p = sample_refinement(seed);
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
        assert!(seen.len() >= 5, "only {} distinct refinements", seen.len());
    }

    #[test]
    fn sampled_refinements_pass_their_checks() {
        for seed in 0..8 {
            let p = sample_refinement(seed);
            assert!(check_functor(&p).passed(), "seed {seed}");
            let fun = sample_lax_functor(seed);
            let report = check_lax_normal(&fun);
            assert!(report.passed(), "seed {seed}: {report}");
        }
    }

    #[test]
    fn identity_only_table_has_no_wide_polymaps() {
        let p = identities_only(3, 2);
        assert_eq!(p.objects().len(), 3);
        assert_eq!(p.all_polymaps().len(), 3);
        for m in p.all_polymaps() {
            assert_eq!(m.boundary.domain.len(), 1);
            assert_eq!(m.boundary.codomain.len(), 1);
        }
    }
}
