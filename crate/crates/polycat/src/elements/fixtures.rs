//! Small categories, distributors, and functors shared across the test
//! modules.

use std::collections::BTreeMap;

use crate::core::{
    terminal, Boundary, Composite, FinPolycategory, ObjectId, PolyMap, TablePolycategory,
};

use super::category::{CatMorphism, FinCategory};
use super::distributor::{hom_distributor, spliced_key, FinDistributor};
use super::functor::{LaxNormalFunctor, LaxityKey, RawPair};

/// Objects a, b and a single non-identity morphism u : a -> b.
pub(crate) fn walking_arrow() -> FinCategory {
    let ida = CatMorphism::new("ida", "a", "a");
    let idb = CatMorphism::new("idb", "b", "b");
    let u = CatMorphism::new("u", "a", "b");
    FinCategory::new(
        vec!["a".into(), "b".into()],
        vec![ida.clone(), idb.clone(), u.clone()],
        vec![("a".into(), "ida".into()), ("b".into(), "idb".into())],
        vec![
            (ida.clone(), ida.clone(), ida.clone()),
            (idb.clone(), idb.clone(), idb.clone()),
            (ida.clone(), u.clone(), u.clone()),
            (u.clone(), idb.clone(), u.clone()),
        ],
    )
    .unwrap()
}

/// A covariant set-valued diagram on the walking arrow, as a distributor
/// `[] -> [C]`: one element over a, two over b, with u sending p to q1.
pub(crate) fn copresheaf_on_arrow(c: &FinCategory) -> FinDistributor {
    FinDistributor::from_fn(
        vec![],
        vec![c.clone()],
        |key| match key.1[0].as_str() {
            "a" => vec!["p".into()],
            _ => vec!["q1".into(), "q2".into()],
        },
        |_, _, _, e| e.into(),
        |_, v, _, e| {
            if v.id == "u" {
                "q1".into()
            } else {
                e.into()
            }
        },
    )
    .unwrap()
}

/// A contravariant diagram on the walking arrow, as a distributor
/// `[C] -> []`: two elements over a, one over b, with u pulling s to r1.
pub(crate) fn presheaf_on_arrow(c: &FinCategory) -> FinDistributor {
    FinDistributor::from_fn(
        vec![c.clone()],
        vec![],
        |key| match key.0[0].as_str() {
            "a" => vec!["r1".into(), "r2".into()],
            _ => vec!["s".into()],
        },
        |_, u, _, e| {
            if u.id == "u" {
                "r1".into()
            } else {
                e.into()
            }
        },
        |_, _, _, e| e.into(),
    )
    .unwrap()
}

/// Laxity tables for a functor whose composite element sets are singletons
/// wherever a matched pair exists, so the value of `μ` is forced.
pub(crate) fn forced_laxity(
    base: &FinPolycategory,
    dists: &BTreeMap<PolyMap, FinDistributor>,
) -> BTreeMap<LaxityKey, BTreeMap<RawPair, String>> {
    let maps = base.all_polymaps();
    let mut laxity = BTreeMap::new();
    for f in &maps {
        for i in 0..f.boundary.codomain.len() {
            for g in &maps {
                for j in 0..g.boundary.domain.len() {
                    let Ok(h) = base.compose(f, i, g, j) else {
                        continue;
                    };
                    let (df, dg, dh) = (&dists[f], &dists[g], &dists[&h]);
                    let mut table = BTreeMap::new();
                    for kf in df.all_keys() {
                        for phi in df.elements_at(kf) {
                            for kg in dg.all_keys() {
                                if kf.1[i] != kg.0[j] {
                                    continue;
                                }
                                for psi in dg.elements_at(kg) {
                                    let target = dh.elements_at(&spliced_key(kf, i, kg, j));
                                    assert_eq!(target.len(), 1, "laxity not forced");
                                    table.insert(
                                        (kf.clone(), phi.clone(), kg.clone(), psi.clone()),
                                        target[0].clone(),
                                    );
                                }
                            }
                        }
                    }
                    laxity.insert((f.clone(), i, g.clone(), j), table);
                }
            }
        }
    }
    laxity
}

/// The terminal base with a one-object discrete fibre and singleton element
/// sets everywhere: the smallest coherent functor.
pub(crate) fn singleton_over_terminal() -> LaxNormalFunctor {
    let base = terminal(2);
    let fibre = FinCategory::discrete(vec!["o".into()]).unwrap();
    let star = base.objects()[0].clone();
    let mut fibres = BTreeMap::new();
    fibres.insert(star.clone(), fibre.clone());
    let mut dists = BTreeMap::new();
    for f in base.all_polymaps() {
        let d = FinDistributor::from_fn(
            vec![fibre.clone(); f.boundary.domain.len()],
            vec![fibre.clone(); f.boundary.codomain.len()],
            |_| vec!["e".into()],
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        dists.insert(f, d);
    }
    let mut names = BTreeMap::new();
    for m in fibre.morphisms() {
        names.insert(m.clone(), "e".to_string());
    }
    let mut normality = BTreeMap::new();
    normality.insert(star, names);
    let laxity = forced_laxity(&base, &dists);
    LaxNormalFunctor {
        base,
        fibres,
        dists,
        normality,
        laxity,
    }
}

/// One object X with only the identity and an involution s (s ∘ s = id),
/// presented as a table.
pub(crate) fn involution_base() -> FinPolycategory {
    let x = ObjectId::new("X");
    let unary =
        |id: &str| PolyMap::new(id, Boundary::new(vec![x.clone()], vec![x.clone()]));
    let idm = unary("id");
    let s = unary("s");
    let row = |f: &PolyMap, g: &PolyMap, r: &PolyMap| Composite {
        f: f.clone(),
        i: 0,
        g: g.clone(),
        j: 0,
        result: r.clone(),
    };
    FinPolycategory::Table(
        TablePolycategory::new(
            vec![x.clone()],
            2,
            vec![idm.clone(), s.clone()],
            vec![(x, idm.clone())],
            vec![
                row(&idm, &idm, &idm),
                row(&idm, &s, &s),
                row(&s, &idm, &s),
                row(&s, &s, &idm),
            ],
        )
        .expect("involution table is total"),
    )
}

/// Over the involution base: fibre discrete on {x0, x1}, the identity's
/// distributor is hom, and s's distributor is the graph of the swap.
pub(crate) fn swap_functor() -> LaxNormalFunctor {
    let base = involution_base();
    let fibre = FinCategory::discrete(vec!["x0".into(), "x1".into()]).unwrap();
    let x = base.objects()[0].clone();
    let mut fibres = BTreeMap::new();
    fibres.insert(x.clone(), fibre.clone());

    let swapped = |o: &str| if o == "x0" { "x1" } else { "x0" };
    let mut dists = BTreeMap::new();
    for f in base.all_polymaps() {
        let d = if f.id == "id" {
            hom_distributor(&fibre)
        } else {
            FinDistributor::from_fn(
                vec![fibre.clone()],
                vec![fibre.clone()],
                |key| {
                    if key.1[0] == swapped(&key.0[0]) {
                        vec![format!("s:{}", key.0[0])]
                    } else {
                        Vec::new()
                    }
                },
                |_, _, _, e| e.into(),
                |_, _, _, e| e.into(),
            )
            .unwrap()
        };
        dists.insert(f, d);
    }
    let mut names = BTreeMap::new();
    for m in fibre.morphisms() {
        names.insert(m.clone(), m.id.clone());
    }
    let mut normality = BTreeMap::new();
    normality.insert(x, names);
    let laxity = forced_laxity(&base, &dists);
    LaxNormalFunctor {
        base,
        fibres,
        dists,
        normality,
        laxity,
    }
}
