//! Gluing a coherent family of distributors into a single polycategory, and
//! reading such a family back off a refinement.
//!
//! [`build_elements`] takes a checked [`LaxNormalFunctor`] over a base and
//! produces the total polycategory whose objects are pairs (base object,
//! fibre object) and whose polymaps are pairs (base polymap, element), with
//! composition given by the functor's composition tables.  The strip-the-
//! second-component projection comes along for free.  [`fibres_functor`]
//! goes the other way: from a checked [`PolyFunctor`] it extracts the fibre
//! categories, the element sets over each base polymap, and the composition
//! data, all by composing in the source.  [`roundtrip_check`] and
//! [`refinement_roundtrip_check`] compare the two directions against each
//! other up to the evident relabelling.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::core::{
    check_axioms, AxiomReport, Boundary, Composite, FinPolycategory, FunctorError, ObjectId,
    PolyFunctor, PolyMap, TableError, TablePolycategory,
};
use crate::fib::{check_functor, FunctorReport};
use crate::universal::Side;

use super::category::{CatMorphism, CategoryError, FinCategory};
use super::distributor::{show_key, spliced_key, DistKey, DistributorError, FinDistributor};
use super::functor::{check_lax_normal, matched_pairs, LaxNormalFunctor, LaxReport, RawPair};

/// The object name `(A,R)` for a fibre object `R` sitting over a base
/// object `A`.
pub fn pair_object(base: &ObjectId, fibre: &str) -> ObjectId {
    ObjectId::new(format!("({},{})", base.0, fibre))
}

/// The polymap id `(f,x)` for an element `x` of a distributor sitting over
/// a base polymap with id `f`.
pub fn pair_map_id(base_id: &str, element: &str) -> String {
    format!("({base_id},{element})")
}

fn pair_boundary(base: &Boundary, key: &DistKey) -> Boundary {
    let dom = base
        .domain
        .iter()
        .zip(&key.0)
        .map(|(a, r)| pair_object(a, r))
        .collect();
    let cod = base
        .codomain
        .iter()
        .zip(&key.1)
        .map(|(a, r)| pair_object(a, r))
        .collect();
    Boundary::new(dom, cod)
}

fn key_boundary(key: &DistKey) -> Boundary {
    Boundary::new(
        key.0.iter().map(ObjectId::new).collect(),
        key.1.iter().map(ObjectId::new).collect(),
    )
}

fn unary(m: &CatMorphism) -> PolyMap {
    PolyMap::new(
        m.id.clone(),
        Boundary::new(
            vec![ObjectId::new(m.source.clone())],
            vec![ObjectId::new(m.target.clone())],
        ),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementsError {
    /// The input family fails its coherence check; the report says where.
    #[error("the family is not coherent:\n{0}")]
    Incoherent(Box<LaxReport>),
    /// The input refinement fails its functor check; the report says where.
    #[error("the refinement does not preserve structure:\n{0}")]
    UncheckedFunctor(Box<FunctorReport>),
    /// A refinement whose source scope is narrower than its target scope
    /// has no well-defined composition data over the widest base shapes.
    #[error("source scope bound {source_bound} is below the target scope bound {target_bound}")]
    ScopeMismatch {
        source_bound: usize,
        target_bound: usize,
    },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Distributor(#[from] DistributorError),
}

/// The output of [`build_elements`]: the total polycategory, the projection
/// onto the base, and the reports certifying both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementsConstruction {
    pub total: TablePolycategory,
    pub projection: PolyFunctor,
    pub axioms: AxiomReport,
    pub functor: FunctorReport,
}

/// Build the polycategory of elements of a coherent family.
///
/// Objects are pairs of a base object and a fibre object; a polymap over a
/// base polymap `f` is an element of `f`'s distributor, placed at the
/// boundary its key dictates; the identity over `(A,R)` is the unit name of
/// the fibre identity; composition of two elements is the family's
/// composition entry for that pair.  The result carries an axiom report for
/// the total polycategory and a functor report for the projection; both
/// pass whenever the input passes its own check, which is enforced here.
pub fn build_elements(fun: &LaxNormalFunctor) -> Result<ElementsConstruction, ElementsError> {
    let report = check_lax_normal(fun);
    if !report.passed() {
        return Err(ElementsError::Incoherent(Box::new(report)));
    }
    let base = &fun.base;
    let bound = base.scope_bound();

    let mut objects = Vec::new();
    let mut obj_map = BTreeMap::new();
    for a in base.objects() {
        let fibre = fun.fibre(&a).expect("coherent family has a fibre per object");
        for r in fibre.objects() {
            let o = pair_object(&a, r);
            obj_map.insert(o.clone(), a.clone());
            objects.push(o);
        }
    }

    let lift = |f: &PolyMap, key: &DistKey, name: &str| {
        PolyMap::new(pair_map_id(&f.id, name), pair_boundary(&f.boundary, key))
    };

    let base_maps = base.all_polymaps();
    let mut maps = Vec::new();
    let mut map_map = BTreeMap::new();
    for f in &base_maps {
        let df = fun
            .dist(f)
            .expect("coherent family has a distributor per polymap");
        for key in df.all_keys() {
            for name in df.elements_at(key) {
                let m = lift(f, key, name);
                map_map.insert(m.clone(), f.clone());
                maps.push(m);
            }
        }
    }

    let mut identities = Vec::new();
    for a in base.objects() {
        let ida = base.identity(&a).expect("base has an identity per object");
        let fibre = fun.fibre(&a).expect("checked above");
        for r in fibre.objects() {
            let idr = fibre.identity(r).expect("fibre has an identity per object");
            let name = fun
                .nu(&a, idr)
                .expect("coherent family names every fibre morphism");
            let key: DistKey = (vec![r.clone()], vec![r.clone()]);
            identities.push((pair_object(&a, r), lift(&ida, &key, name)));
        }
    }

    // One composite row per composable base instance and cut-matched pair
    // of elements.  These are exactly the planar in-bound requests among
    // the lifted polymaps: the paired cut objects agree precisely when the
    // base cut objects do and the element keys match.
    let mut composites = Vec::new();
    for f in &base_maps {
        for g in &base_maps {
            for i in 0..f.boundary.codomain.len() {
                for j in 0..g.boundary.domain.len() {
                    let Ok(h) = base.compose(f, i, g, j) else {
                        continue;
                    };
                    let df = fun.dist(f).expect("checked above");
                    let dg = fun.dist(g).expect("checked above");
                    let instance = (f.clone(), i, g.clone(), j);
                    for pair in matched_pairs(df, i, dg, j) {
                        let value = fun
                            .mu(&instance, &pair)
                            .expect("coherent family composes every matched pair");
                        let target = spliced_key(&pair.0, i, &pair.2, j);
                        composites.push(Composite {
                            f: lift(f, &pair.0, &pair.1),
                            i,
                            g: lift(g, &pair.2, &pair.3),
                            j,
                            result: lift(&h, &target, value),
                        });
                    }
                }
            }
        }
    }

    let total = TablePolycategory::new(objects, bound, maps, identities, composites)?;
    let source = FinPolycategory::Table(total.clone());
    let projection = PolyFunctor::new(source.clone(), base.clone(), obj_map, map_map)?;
    let axioms = check_axioms(&source);
    let functor = check_functor(&projection);
    Ok(ElementsConstruction {
        total,
        projection,
        axioms,
        functor,
    })
}

/// Read the fibrewise family off a refinement `p : E -> B`.
///
/// The fibre over a base object collects the source objects and unary
/// source maps sitting over it and its identity; the distributor over a
/// base polymap collects the source polymaps over it, keyed by their
/// boundaries, with the fibres acting by composition in the source.  Unit
/// names are the maps themselves and composition entries are computed by
/// composing in the source, so the family is coherent whenever `p` passes
/// its functor check, which is enforced here.
pub fn fibres_functor(p: &PolyFunctor) -> Result<LaxNormalFunctor, ElementsError> {
    let report = check_functor(p);
    if !report.passed() {
        return Err(ElementsError::UncheckedFunctor(Box::new(report)));
    }
    let e = &p.source;
    let base = &p.target;
    if e.scope_bound() < base.scope_bound() {
        return Err(ElementsError::ScopeMismatch {
            source_bound: e.scope_bound(),
            target_bound: base.scope_bound(),
        });
    }

    let e_objects = e.objects();
    let e_maps = e.all_polymaps();

    let mut fibres = BTreeMap::new();
    for a in base.objects() {
        let ida = base.identity(&a).expect("base has an identity per object");
        let objects: Vec<String> = e_objects
            .iter()
            .filter(|s| p.apply_object(s) == a)
            .map(|s| s.0.clone())
            .collect();
        let mut morphisms = Vec::new();
        for m in &e_maps {
            if m.boundary.domain.len() == 1
                && m.boundary.codomain.len() == 1
                && p.apply(m) == ida
            {
                morphisms.push(CatMorphism::new(
                    m.id.clone(),
                    m.boundary.domain[0].0.clone(),
                    m.boundary.codomain[0].0.clone(),
                ));
            }
        }
        let identities: Vec<(String, String)> = objects
            .iter()
            .map(|s| {
                let id_s = e
                    .identity(&ObjectId::new(s.clone()))
                    .expect("source has an identity per object");
                (s.clone(), id_s.id)
            })
            .collect();
        let mut composition = Vec::new();
        for m1 in &morphisms {
            for m2 in &morphisms {
                if m1.target == m2.source {
                    let r = e
                        .compose(&unary(m1), 0, &unary(m2), 0)
                        .expect("unary composition is planar and in scope");
                    composition.push((
                        m1.clone(),
                        m2.clone(),
                        CatMorphism::new(r.id, m1.source.clone(), m2.target.clone()),
                    ));
                }
            }
        }
        fibres.insert(
            a.clone(),
            FinCategory::new(objects, morphisms, identities, composition)?,
        );
    }

    let mut dists = BTreeMap::new();
    for f in base.all_polymaps() {
        let dom_cats: Vec<FinCategory> = f
            .boundary
            .domain
            .iter()
            .map(|a| fibres[a].clone())
            .collect();
        let cod_cats: Vec<FinCategory> = f
            .boundary
            .codomain
            .iter()
            .map(|a| fibres[a].clone())
            .collect();
        let d = FinDistributor::from_fn(
            dom_cats,
            cod_cats,
            |key| {
                e.hom(&key_boundary(key))
                    .into_iter()
                    .filter(|m| p.apply(m) == f)
                    .map(|m| m.id)
                    .collect()
            },
            |k, u, key, name| {
                let m = PolyMap::new(name, key_boundary(key));
                e.compose(&unary(u), 0, &m, k)
                    .expect("unary pre-composition is planar and in scope")
                    .id
            },
            |l, v, key, name| {
                let m = PolyMap::new(name, key_boundary(key));
                e.compose(&m, l, &unary(v), 0)
                    .expect("unary post-composition is planar and in scope")
                    .id
            },
        )?;
        dists.insert(f, d);
    }

    let mut normality = BTreeMap::new();
    for a in base.objects() {
        let table: BTreeMap<CatMorphism, String> = fibres[&a]
            .morphisms()
            .iter()
            .map(|m| (m.clone(), m.id.clone()))
            .collect();
        normality.insert(a.clone(), table);
    }

    let base_maps = base.all_polymaps();
    let mut laxity = BTreeMap::new();
    for f in &base_maps {
        for g in &base_maps {
            for i in 0..f.boundary.codomain.len() {
                for j in 0..g.boundary.domain.len() {
                    if base.compose(f, i, g, j).is_err() {
                        continue;
                    }
                    let mut table = BTreeMap::new();
                    for pair in matched_pairs(&dists[f], i, &dists[g], j) {
                        let mf = PolyMap::new(pair.1.clone(), key_boundary(&pair.0));
                        let mg = PolyMap::new(pair.3.clone(), key_boundary(&pair.2));
                        let r = e
                            .compose(&mf, i, &mg, j)
                            .expect("matched composition is planar and in scope");
                        table.insert(pair, r.id);
                    }
                    laxity.insert((f.clone(), i, g.clone(), j), table);
                }
            }
        }
    }

    Ok(LaxNormalFunctor {
        base: base.clone(),
        fibres,
        dists,
        normality,
        laxity,
    })
}

/// One disagreement found while comparing a family against the one read
/// back from its own polycategory of elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RoundtripFailure {
    BaseMismatch,
    FibreObjectMissing {
        object: ObjectId,
        fibre_object: String,
    },
    FibreObjectCount {
        object: ObjectId,
    },
    FibreMorphismMissing {
        object: ObjectId,
        morphism: String,
    },
    FibreMorphismCount {
        object: ObjectId,
    },
    FibreIdentityMismatch {
        object: ObjectId,
        fibre_object: String,
    },
    FibreCompositionMismatch {
        object: ObjectId,
        first: String,
        second: String,
    },
    ElementMissing {
        map: String,
        key: String,
        element: String,
    },
    ElementCount {
        map: String,
        key: String,
    },
    ActionMismatch {
        map: String,
        side: Side,
        position: usize,
        morphism: String,
        key: String,
        element: String,
    },
    NormalityMismatch {
        object: ObjectId,
        morphism: String,
    },
    LaxityMismatch {
        first: String,
        left: String,
        second: String,
        right: String,
    },
}

impl fmt::Display for RoundtripFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RoundtripFailure::*;
        match self {
            BaseMismatch => write!(out, "the read-back family lives over a different base"),
            FibreObjectMissing {
                object,
                fibre_object,
            } => write!(
                out,
                "fibre over {object} lost object {fibre_object} on the way round"
            ),
            FibreObjectCount { object } => {
                write!(out, "fibre over {object} changed object count")
            }
            FibreMorphismMissing { object, morphism } => write!(
                out,
                "fibre over {object} lost morphism {morphism} on the way round"
            ),
            FibreMorphismCount { object } => {
                write!(out, "fibre over {object} changed morphism count")
            }
            FibreIdentityMismatch {
                object,
                fibre_object,
            } => write!(
                out,
                "fibre over {object} changed the identity at {fibre_object}"
            ),
            FibreCompositionMismatch {
                object,
                first,
                second,
            } => write!(
                out,
                "fibre over {object} changed the composite of {first} and {second}"
            ),
            ElementMissing { map, key, element } => write!(
                out,
                "distributor of {map} lost element {element} at {key} on the way round"
            ),
            ElementCount { map, key } => {
                write!(out, "distributor of {map} changed element count at {key}")
            }
            ActionMismatch {
                map,
                side,
                position,
                morphism,
                key,
                element,
            } => write!(
                out,
                "distributor of {map} changed the {side} action of {morphism} at entry \
                 {position} on {element} at {key}"
            ),
            NormalityMismatch { object, morphism } => write!(
                out,
                "unit name of {morphism} over {object} changed on the way round"
            ),
            LaxityMismatch {
                first,
                left,
                second,
                right,
            } => write!(
                out,
                "composition entry for {left} over {first} with {right} over {second} \
                 changed on the way round"
            ),
        }
    }
}

/// Outcome of [`roundtrip_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    pub fibre_objects: u64,
    pub fibre_morphisms: u64,
    pub dist_elements: u64,
    pub action_squares: u64,
    pub normality_entries: u64,
    pub laxity_entries: u64,
    pub failures: Vec<RoundtripFailure>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "round trip: {} fibre objects, {} fibre morphisms, {} elements, {} action \
             squares, {} unit names, {} composition entries",
            self.fibre_objects,
            self.fibre_morphisms,
            self.dist_elements,
            self.action_squares,
            self.normality_entries,
            self.laxity_entries
        )?;
        if self.failures.is_empty() {
            write!(out, "; ok")
        } else {
            write!(out, "; {} failures", self.failures.len())?;
            for f in &self.failures {
                write!(out, "\n  {f}")?;
            }
            Ok(())
        }
    }
}

fn translate_key(f: &PolyMap, key: &DistKey) -> DistKey {
    (
        key.0
            .iter()
            .zip(&f.boundary.domain)
            .map(|(r, a)| pair_object(a, r).0)
            .collect(),
        key.1
            .iter()
            .zip(&f.boundary.codomain)
            .map(|(r, a)| pair_object(a, r).0)
            .collect(),
    )
}

fn translate_morphism(fun: &LaxNormalFunctor, a: &ObjectId, m: &CatMorphism) -> CatMorphism {
    let ida = fun.base.identity(a).expect("base has an identity per object");
    let value = fun
        .nu(a, m)
        .expect("coherent family names every fibre morphism");
    CatMorphism::new(
        pair_map_id(&ida.id, value),
        pair_object(a, &m.source).0,
        pair_object(a, &m.target).0,
    )
}

/// Build the polycategory of elements of `fun`, read a family back off its
/// projection, and compare the two up to the pairing relabelling: fibre
/// objects and morphisms, distributor elements and actions, unit names and
/// composition entries must all correspond.
pub fn roundtrip_check(fun: &LaxNormalFunctor) -> Result<RoundtripReport, ElementsError> {
    let built = build_elements(fun)?;
    let back = fibres_functor(&built.projection)?;
    let mut report = RoundtripReport {
        fibre_objects: 0,
        fibre_morphisms: 0,
        dist_elements: 0,
        action_squares: 0,
        normality_entries: 0,
        laxity_entries: 0,
        failures: Vec::new(),
    };
    if back.base != fun.base {
        report.failures.push(RoundtripFailure::BaseMismatch);
        return Ok(report);
    }

    for a in fun.base.objects() {
        let fc = fun.fibre(&a).expect("coherent family has a fibre per object");
        let bc = back.fibre(&a).expect("read-back family is total");
        for r in fc.objects() {
            let name = pair_object(&a, r).0;
            if bc.objects().contains(&name) {
                report.fibre_objects += 1;
            } else {
                report.failures.push(RoundtripFailure::FibreObjectMissing {
                    object: a.clone(),
                    fibre_object: r.clone(),
                });
            }
        }
        if bc.objects().len() != fc.objects().len() {
            report
                .failures
                .push(RoundtripFailure::FibreObjectCount { object: a.clone() });
        }
        for m in fc.morphisms() {
            let nm = translate_morphism(fun, &a, m);
            if bc.contains(&nm) {
                report.fibre_morphisms += 1;
            } else {
                report.failures.push(RoundtripFailure::FibreMorphismMissing {
                    object: a.clone(),
                    morphism: m.id.clone(),
                });
            }
        }
        if bc.morphisms().len() != fc.morphisms().len() {
            report
                .failures
                .push(RoundtripFailure::FibreMorphismCount { object: a.clone() });
        }
        for r in fc.objects() {
            let want = translate_morphism(fun, &a, fc.identity(r).expect("total"));
            match bc.identity(&pair_object(&a, r).0) {
                Some(got) if *got == want => {}
                _ => report.failures.push(RoundtripFailure::FibreIdentityMismatch {
                    object: a.clone(),
                    fibre_object: r.clone(),
                }),
            }
        }
        for m1 in fc.morphisms() {
            for m2 in fc.morphisms() {
                if m1.target != m2.source {
                    continue;
                }
                let want =
                    translate_morphism(fun, &a, fc.compose(m1, m2).expect("composition is total"));
                let got = bc.compose(
                    &translate_morphism(fun, &a, m1),
                    &translate_morphism(fun, &a, m2),
                );
                match got {
                    Some(got) if *got == want => {}
                    _ => report
                        .failures
                        .push(RoundtripFailure::FibreCompositionMismatch {
                            object: a.clone(),
                            first: m1.id.clone(),
                            second: m2.id.clone(),
                        }),
                }
            }
        }
    }

    for f in fun.base.all_polymaps() {
        let df = fun
            .dist(&f)
            .expect("coherent family has a distributor per polymap");
        let bf = back.dist(&f).expect("read-back family is total");
        for key in df.all_keys() {
            let bkey = translate_key(&f, key);
            let belems = bf.elements_at(&bkey);
            for name in df.elements_at(key) {
                if belems.contains(&pair_map_id(&f.id, name)) {
                    report.dist_elements += 1;
                } else {
                    report.failures.push(RoundtripFailure::ElementMissing {
                        map: f.id.clone(),
                        key: show_key(key),
                        element: name.clone(),
                    });
                }
            }
            if belems.len() != df.elements_at(key).len() {
                report.failures.push(RoundtripFailure::ElementCount {
                    map: f.id.clone(),
                    key: show_key(key),
                });
            }
            for (k, a) in f.boundary.domain.iter().enumerate() {
                let cat = fun.fibre(a).expect("checked above");
                for u in cat.morphisms() {
                    if u.target != key.0[k] {
                        continue;
                    }
                    for name in df.elements_at(key) {
                        let (mkey, moved) =
                            df.dom_action(k, u, key, name).expect("actions are total");
                        let got = bf.dom_action(
                            k,
                            &translate_morphism(fun, a, u),
                            &bkey,
                            &pair_map_id(&f.id, name),
                        );
                        let want = (translate_key(&f, &mkey), pair_map_id(&f.id, &moved));
                        if got == Some(want) {
                            report.action_squares += 1;
                        } else {
                            report.failures.push(RoundtripFailure::ActionMismatch {
                                map: f.id.clone(),
                                side: Side::In,
                                position: k,
                                morphism: u.id.clone(),
                                key: show_key(key),
                                element: name.clone(),
                            });
                        }
                    }
                }
            }
            for (l, a) in f.boundary.codomain.iter().enumerate() {
                let cat = fun.fibre(a).expect("checked above");
                for v in cat.morphisms() {
                    if v.source != key.1[l] {
                        continue;
                    }
                    for name in df.elements_at(key) {
                        let (mkey, moved) =
                            df.cod_action(l, v, key, name).expect("actions are total");
                        let got = bf.cod_action(
                            l,
                            &translate_morphism(fun, a, v),
                            &bkey,
                            &pair_map_id(&f.id, name),
                        );
                        let want = (translate_key(&f, &mkey), pair_map_id(&f.id, &moved));
                        if got == Some(want) {
                            report.action_squares += 1;
                        } else {
                            report.failures.push(RoundtripFailure::ActionMismatch {
                                map: f.id.clone(),
                                side: Side::Out,
                                position: l,
                                morphism: v.id.clone(),
                                key: show_key(key),
                                element: name.clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    for a in fun.base.objects() {
        let fc = fun.fibre(&a).expect("checked above");
        for m in fc.morphisms() {
            let t = translate_morphism(fun, &a, m);
            match back.nu(&a, &t) {
                Some(got) if got == t.id => report.normality_entries += 1,
                _ => report.failures.push(RoundtripFailure::NormalityMismatch {
                    object: a.clone(),
                    morphism: m.id.clone(),
                }),
            }
        }
    }

    for (instance, table) in &fun.laxity {
        let (f, i, g, j) = instance;
        let Ok(h) = fun.base.compose(f, *i, g, *j) else {
            continue;
        };
        for (pair, value) in table {
            let translated: RawPair = (
                translate_key(f, &pair.0),
                pair_map_id(&f.id, &pair.1),
                translate_key(g, &pair.2),
                pair_map_id(&g.id, &pair.3),
            );
            let want = pair_map_id(&h.id, value);
            match back.mu(instance, &translated) {
                Some(got) if got == want => report.laxity_entries += 1,
                _ => report.failures.push(RoundtripFailure::LaxityMismatch {
                    first: f.id.clone(),
                    left: pair.1.clone(),
                    second: g.id.clone(),
                    right: pair.3.clone(),
                }),
            }
        }
    }

    Ok(report)
}

/// One disagreement found while comparing a refinement against the
/// polycategory of elements of its own fibrewise family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RefinementFailure {
    TotalObjectMissing { object: ObjectId },
    TotalObjectCollision { image: ObjectId },
    TotalObjectCount { expected: usize, found: usize },
    TotalMapMissing { map: String },
    TotalMapCollision { image: String },
    TotalMapCount { expected: usize, found: usize },
    ProjectionMismatch,
}

impl fmt::Display for RefinementFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RefinementFailure::*;
        match self {
            TotalObjectMissing { object } => {
                write!(out, "no pair object for source object {object}")
            }
            TotalObjectCollision { image } => {
                write!(out, "two source objects relabel to {image}")
            }
            TotalObjectCount { expected, found } => write!(
                out,
                "object counts disagree: {expected} in the source, {found} rebuilt"
            ),
            TotalMapMissing { map } => write!(out, "no pair polymap for source polymap {map}"),
            TotalMapCollision { image } => write!(out, "two source polymaps relabel to {image}"),
            TotalMapCount { expected, found } => write!(
                out,
                "polymap counts disagree: {expected} in the source, {found} rebuilt"
            ),
            ProjectionMismatch => write!(
                out,
                "the rebuilt projection differs from the refinement after relabelling"
            ),
        }
    }
}

/// Outcome of [`refinement_roundtrip_check`].  `comparison` holds the
/// functor check of the relabelling from the rebuilt polycategory back to
/// the source, once the relabelling is known to be a bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementRoundtripReport {
    pub objects: u64,
    pub maps: u64,
    pub comparison: Option<FunctorReport>,
    pub failures: Vec<RefinementFailure>,
}

impl RefinementRoundtripReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.comparison.as_ref().is_some_and(FunctorReport::passed)
    }
}

impl fmt::Display for RefinementRoundtripReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "refinement round trip: {} objects, {} polymaps relabelled",
            self.objects, self.maps
        )?;
        match &self.comparison {
            Some(r) => write!(out, "; {r}")?,
            None => write!(out, "; relabelling not attempted")?,
        }
        if self.failures.is_empty() {
            write!(out, "; ok")
        } else {
            write!(out, "; {} failures", self.failures.len())?;
            for f in &self.failures {
                write!(out, "\n  {f}")?;
            }
            Ok(())
        }
    }
}

/// Read the fibrewise family off a refinement, rebuild its polycategory of
/// elements, and check that relabelling every source object to its pair and
/// every source polymap to its pair is an isomorphism commuting with the
/// projections.
pub fn refinement_roundtrip_check(
    p: &PolyFunctor,
) -> Result<RefinementRoundtripReport, ElementsError> {
    let fun = fibres_functor(p)?;
    let built = build_elements(&fun)?;
    let total = FinPolycategory::Table(built.total.clone());
    let mut report = RefinementRoundtripReport {
        objects: 0,
        maps: 0,
        comparison: None,
        failures: Vec::new(),
    };

    let e = &p.source;
    let total_objects = total.objects();
    let mut inv_obj: BTreeMap<ObjectId, ObjectId> = BTreeMap::new();
    for s in e.objects() {
        let image = pair_object(&p.apply_object(&s), &s.0);
        if total_objects.contains(&image) {
            report.objects += 1;
        } else {
            report
                .failures
                .push(RefinementFailure::TotalObjectMissing { object: s.clone() });
        }
        if inv_obj.insert(image.clone(), s).is_some() {
            report
                .failures
                .push(RefinementFailure::TotalObjectCollision { image });
        }
    }
    if e.objects().len() != total_objects.len() {
        report.failures.push(RefinementFailure::TotalObjectCount {
            expected: e.objects().len(),
            found: total_objects.len(),
        });
    }

    let relabel = |m: &PolyMap| {
        let dom = m
            .boundary
            .domain
            .iter()
            .map(|o| pair_object(&p.apply_object(o), &o.0))
            .collect();
        let cod = m
            .boundary
            .codomain
            .iter()
            .map(|o| pair_object(&p.apply_object(o), &o.0))
            .collect();
        PolyMap::new(
            pair_map_id(&p.apply(m).id, &m.id),
            Boundary::new(dom, cod),
        )
    };
    let mut inv_map: BTreeMap<PolyMap, PolyMap> = BTreeMap::new();
    for m in e.all_polymaps() {
        let image = relabel(&m);
        if total.contains(&image) {
            report.maps += 1;
        } else {
            report
                .failures
                .push(RefinementFailure::TotalMapMissing { map: m.key() });
        }
        let image_id = image.key();
        if inv_map.insert(image, m).is_some() {
            report
                .failures
                .push(RefinementFailure::TotalMapCollision { image: image_id });
        }
    }
    if e.all_polymaps().len() != total.all_polymaps().len() {
        report.failures.push(RefinementFailure::TotalMapCount {
            expected: e.all_polymaps().len(),
            found: total.all_polymaps().len(),
        });
    }
    if !report.failures.is_empty() {
        return Ok(report);
    }

    // The relabelling is a bijection on objects and polymaps; check that
    // its inverse is a functor and that it commutes with the projections.
    let obj_map: BTreeMap<ObjectId, ObjectId> = total_objects
        .iter()
        .map(|o| (o.clone(), inv_obj[o].clone()))
        .collect();
    let map_map: BTreeMap<PolyMap, PolyMap> = total
        .all_polymaps()
        .iter()
        .map(|m| (m.clone(), inv_map[m].clone()))
        .collect();
    let iso = PolyFunctor::new(total.clone(), e.clone(), obj_map, map_map)?;
    report.comparison = Some(check_functor(&iso));
    let composed = p.after(&iso)?;
    if composed != built.projection {
        report.failures.push(RefinementFailure::ProjectionMismatch);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{terminal, unique_functor_to_terminal, MonoidPolycategory};
    use crate::elements::fixtures::{singleton_over_terminal, swap_functor};
    use crate::elements::functor::LaxFailure;

    fn identity_refinement(p: &FinPolycategory) -> PolyFunctor {
        let obj_map = p.objects().into_iter().map(|o| (o.clone(), o)).collect();
        let map_map = p
            .all_polymaps()
            .into_iter()
            .map(|m| (m.clone(), m))
            .collect();
        PolyFunctor::new(p.clone(), p.clone(), obj_map, map_map).unwrap()
    }

    #[test]
    fn terminal_family_of_singletons_collapses_to_one_map_per_shape() {
        let fun = singleton_over_terminal();
        let built = build_elements(&fun).unwrap();
        assert!(built.axioms.passed(), "{}", built.axioms);
        assert!(built.functor.passed(), "{}", built.functor);

        let total = FinPolycategory::Table(built.total);
        let objects = total.objects();
        assert_eq!(objects.len(), 1);
        assert_eq!(objects[0].0, "(*,o)");
        assert_eq!(total.all_polymaps().len(), 9);
        for m in 0..=2usize {
            for n in 0..=2usize {
                let b = Boundary::new(vec![objects[0].clone(); m], vec![objects[0].clone(); n]);
                assert_eq!(total.hom(&b).len(), 1, "hom at ({m},{n})");
            }
        }
        assert!(total.identity(&objects[0]).is_some());
    }

    #[test]
    fn element_construction_matches_the_hand_built_table() {
        let built = build_elements(&swap_functor()).unwrap();
        assert!(built.axioms.passed(), "{}", built.axioms);
        assert!(built.functor.passed(), "{}", built.functor);

        let po = |r: &str| ObjectId::new(format!("(X,{r})"));
        let pm = |id: &str, s: &str, t: &str| {
            PolyMap::new(id, Boundary::new(vec![po(s)], vec![po(t)]))
        };
        let id0 = pm("(id,id_x0)", "x0", "x0");
        let id1 = pm("(id,id_x1)", "x1", "x1");
        let s0 = pm("(s,s:x0)", "x0", "x1");
        let s1 = pm("(s,s:x1)", "x1", "x0");
        let row = |f: &PolyMap, g: &PolyMap, r: &PolyMap| Composite {
            f: f.clone(),
            i: 0,
            g: g.clone(),
            j: 0,
            result: r.clone(),
        };
        let oracle = TablePolycategory::new(
            vec![po("x0"), po("x1")],
            2,
            vec![id0.clone(), id1.clone(), s0.clone(), s1.clone()],
            vec![(po("x0"), id0.clone()), (po("x1"), id1.clone())],
            vec![
                row(&id0, &id0, &id0),
                row(&id0, &s0, &s0),
                row(&s0, &id1, &s0),
                row(&s0, &s1, &id0),
                row(&id1, &id1, &id1),
                row(&id1, &s1, &s1),
                row(&s1, &id0, &s1),
                row(&s1, &s0, &id1),
            ],
        )
        .unwrap();
        assert_eq!(built.total, oracle);
    }

    #[test]
    fn element_counts_add_up_to_hom_sizes() {
        for fun in [singleton_over_terminal(), swap_functor()] {
            let built = build_elements(&fun).unwrap();
            let total = FinPolycategory::Table(built.total);
            let mut expected: BTreeMap<Boundary, usize> = BTreeMap::new();
            let mut count = 0;
            for f in fun.base.all_polymaps() {
                let df = fun.dist(&f).unwrap();
                for key in df.all_keys() {
                    let n = df.elements_at(key).len();
                    *expected.entry(pair_boundary(&f.boundary, key)).or_default() += n;
                    count += n;
                }
            }
            assert_eq!(total.all_polymaps().len(), count);
            for (b, n) in expected {
                assert_eq!(total.hom(&b).len(), n, "hom at {b:?}");
            }
        }
    }

    #[test]
    fn identity_refinement_gives_singleton_fibre_data() {
        let p = identity_refinement(&terminal(2));
        let fun = fibres_functor(&p).unwrap();
        assert!(check_lax_normal(&fun).passed(), "{}", check_lax_normal(&fun));

        let star = fun.base.objects()[0].clone();
        let fibre = fun.fibre(&star).unwrap();
        assert_eq!(fibre.objects().len(), 1);
        assert_eq!(fibre.morphisms().len(), 1);
        for f in fun.base.all_polymaps() {
            let d = fun.dist(&f).unwrap();
            for key in d.all_keys() {
                assert_eq!(d.elements_at(key).len(), 1);
            }
        }
    }

    #[test]
    fn boolean_collapse_has_the_boolean_fibre() {
        let e = FinPolycategory::Monoid(MonoidPolycategory::boolean_and(2));
        let p = unique_functor_to_terminal(&e);
        let fun = fibres_functor(&p).unwrap();
        assert!(check_lax_normal(&fun).passed(), "{}", check_lax_normal(&fun));

        let star = fun.base.objects()[0].clone();
        let fibre = fun.fibre(&star).unwrap();
        assert_eq!(fibre.objects().len(), 1);
        assert_eq!(fibre.morphisms().len(), 2);
        for f in fun.base.all_polymaps() {
            let d = fun.dist(&f).unwrap();
            for key in d.all_keys() {
                assert_eq!(d.elements_at(key), ["0", "1"]);
            }
        }
    }

    #[test]
    fn mutated_composition_entry_breaks_naturality() {
        let e = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 2));
        let p = unique_functor_to_terminal(&e);
        let mut fun = fibres_functor(&p).unwrap();
        assert!(check_lax_normal(&fun).passed());

        let star = ObjectId::new("*");
        let f = PolyMap::new(
            "!",
            Boundary::new(vec![star.clone()], vec![star.clone()]),
        );
        let instance = (f.clone(), 0, f, 0);
        let key = (vec!["*".to_string()], vec!["*".to_string()]);
        let pair = (key.clone(), "0".to_string(), key, "0".to_string());
        let entry = fun
            .laxity
            .get_mut(&instance)
            .unwrap()
            .get_mut(&pair)
            .unwrap();
        assert_eq!(entry, "0");
        *entry = "1".to_string();

        let report = check_lax_normal(&fun);
        assert!(!report.passed());
        assert!(
            report
                .failures
                .iter()
                .any(|x| matches!(x, LaxFailure::LaxityNotNatural { .. })),
            "{report}"
        );
    }

    #[test]
    fn families_survive_the_round_trip() {
        for fun in [singleton_over_terminal(), swap_functor()] {
            let report = roundtrip_check(&fun).unwrap();
            assert!(report.passed(), "{report}");
            assert!(report.dist_elements > 0);
            assert!(report.laxity_entries > 0);
        }
    }

    #[test]
    fn boolean_collapse_round_trips_through_its_elements() {
        let e = FinPolycategory::Monoid(MonoidPolycategory::boolean_and(2));
        let p = unique_functor_to_terminal(&e);
        let report = refinement_roundtrip_check(&p).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.objects, 1);
        assert_eq!(report.maps, 18);
    }

    #[test]
    fn incoherent_family_is_rejected() {
        let mut fun = swap_functor();
        let instance = fun.laxity.keys().next().unwrap().clone();
        fun.laxity.remove(&instance);
        match build_elements(&fun) {
            Err(ElementsError::Incoherent(report)) => assert!(!report.passed()),
            other => panic!("expected a coherence rejection, got {other:?}"),
        }
    }

    #[test]
    fn non_functor_is_rejected() {
        let e = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 2));
        let obj_map = e.objects().into_iter().map(|o| (o.clone(), o)).collect();
        let map_map = e
            .all_polymaps()
            .into_iter()
            .map(|m| {
                let image = PolyMap::new("1", m.boundary.clone());
                (m, image)
            })
            .collect();
        let p = PolyFunctor::new(e.clone(), e, obj_map, map_map).unwrap();
        assert!(matches!(
            fibres_functor(&p),
            Err(ElementsError::UncheckedFunctor(_))
        ));
    }

    #[test]
    fn narrow_source_scope_is_rejected() {
        let e = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 1));
        let star = ObjectId::new("*");
        let obj_map = [(star.clone(), star.clone())].into_iter().collect();
        let map_map = e
            .all_polymaps()
            .into_iter()
            .map(|m| {
                let image = PolyMap::new("!", m.boundary.clone());
                (m, image)
            })
            .collect();
        let p = PolyFunctor::new(e, terminal(2), obj_map, map_map).unwrap();
        assert!(matches!(
            fibres_functor(&p),
            Err(ElementsError::ScopeMismatch {
                source_bound: 1,
                target_bound: 2
            })
        ));
    }
}
