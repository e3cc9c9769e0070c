//! Finite categories, presented by tables and fully checked on construction.
//!
//! These are the fibres of a refinement functor and the boundary entries of
//! a distributor.  Unlike [`TablePolycategory`](crate::core::TablePolycategory),
//! whose laws are a separate reported check, a [`FinCategory`] value is
//! always a category: the constructor verifies identities, totality and
//! closure of composition, unit laws, and associativity, and rejects
//! anything else.  The structures are small enough that the exhaustive
//! check is cheap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A morphism of a finite category.  Identifiers must be unique within a
/// hom-set; the same identifier may appear between different object pairs
/// (fibres of a refinement inherit this from polymap naming).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatMorphism {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl CatMorphism {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        CatMorphism {
            id: id.into(),
            source: source.into(),
            target: target.into(),
        }
    }
}

impl fmt::Display for CatMorphism {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}:{}->{}", self.id, self.source, self.target)
    }
}

/// Why a presentation fails to be a finite category.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("object {0} appears twice in the object list")]
    DuplicateObject(String),
    #[error("morphism {0} mentions unknown object")]
    UnknownObject(CatMorphism),
    #[error("duplicate morphism {0}")]
    DuplicateMorphism(CatMorphism),
    #[error("no identity was given for object {0}")]
    MissingIdentity(String),
    #[error("identity for {0} is {1}, which does not go {0} -> {0}")]
    BadIdentityEndpoints(String, CatMorphism),
    #[error("identity given for {0}, which is not an object")]
    IdentityForUnknownObject(String),
    #[error("morphism {0} named in a table row is not listed")]
    UnknownMorphism(CatMorphism),
    #[error("composition row ({0}, {1}) given although target of {0} is not source of {1}")]
    SpuriousCompositionRow(CatMorphism, CatMorphism),
    #[error("two composition rows for ({0}, {1})")]
    DuplicateCompositionRow(CatMorphism, CatMorphism),
    #[error("no composition row for the composable pair ({0}, {1})")]
    MissingCompositionRow(CatMorphism, CatMorphism),
    #[error("composite of ({0}, {1}) is {2}, which does not go {}->{}", .0.source, .1.target)]
    BadCompositeEndpoints(CatMorphism, CatMorphism, CatMorphism),
    #[error("unit law fails: composing {0} with the identity gives {1}")]
    UnitLawFails(CatMorphism, CatMorphism),
    #[error("associativity fails at ({0}, {1}, {2})")]
    AssociativityFails(CatMorphism, CatMorphism, CatMorphism),
}

/// A finite category: objects, morphisms, identities, and a composition
/// table, all checked.  Composition is written diagrammatically:
/// `compose(f, g)` is "f then g", defined when `f.target == g.source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<CatMorphism>,
    identities: BTreeMap<String, usize>,
    comp: BTreeMap<(usize, usize), usize>,
}

impl FinCategory {
    /// Build and check a finite category.  `composition` rows are
    /// `(first, second, composite)` with `first.target == second.source`.
    pub fn new(
        objects: impl IntoIterator<Item = String>,
        morphisms: Vec<CatMorphism>,
        identities: impl IntoIterator<Item = (String, String)>,
        composition: Vec<(CatMorphism, CatMorphism, CatMorphism)>,
    ) -> Result<Self, CategoryError> {
        let mut object_list = Vec::new();
        let mut seen = BTreeSet::new();
        for o in objects {
            if !seen.insert(o.clone()) {
                return Err(CategoryError::DuplicateObject(o));
            }
            object_list.push(o);
        }
        object_list.sort();

        let mut morphisms = morphisms;
        morphisms.sort();
        for (idx, m) in morphisms.iter().enumerate() {
            if !seen.contains(&m.source) || !seen.contains(&m.target) {
                return Err(CategoryError::UnknownObject(m.clone()));
            }
            if idx > 0 && morphisms[idx - 1] == *m {
                return Err(CategoryError::DuplicateMorphism(m.clone()));
            }
        }

        let locate = |m: &CatMorphism| morphisms.binary_search(m).ok();

        let mut identity_map = BTreeMap::new();
        for (obj, id_name) in identities {
            if !seen.contains(&obj) {
                return Err(CategoryError::IdentityForUnknownObject(obj));
            }
            let id_m = CatMorphism::new(id_name, obj.clone(), obj.clone());
            let idx = match locate(&id_m) {
                Some(k) => k,
                None => {
                    // Either the named morphism is absent or it exists with
                    // other endpoints; report whichever is the case.
                    match morphisms.iter().find(|m| m.id == id_m.id) {
                        Some(other) => {
                            return Err(CategoryError::BadIdentityEndpoints(obj, other.clone()))
                        }
                        None => return Err(CategoryError::UnknownMorphism(id_m)),
                    }
                }
            };
            identity_map.insert(obj, idx);
        }
        for obj in &object_list {
            if !identity_map.contains_key(obj) {
                return Err(CategoryError::MissingIdentity(obj.clone()));
            }
        }

        let mut comp = BTreeMap::new();
        for (first, second, result) in composition {
            let fk = locate(&first).ok_or_else(|| CategoryError::UnknownMorphism(first.clone()))?;
            let sk = locate(&second).ok_or_else(|| CategoryError::UnknownMorphism(second.clone()))?;
            let rk = locate(&result).ok_or_else(|| CategoryError::UnknownMorphism(result.clone()))?;
            if first.target != second.source {
                return Err(CategoryError::SpuriousCompositionRow(first, second));
            }
            if result.source != first.source || result.target != second.target {
                return Err(CategoryError::BadCompositeEndpoints(first, second, result));
            }
            if comp.insert((fk, sk), rk).is_some() {
                return Err(CategoryError::DuplicateCompositionRow(first, second));
            }
        }
        for (fk, f) in morphisms.iter().enumerate() {
            for (sk, s) in morphisms.iter().enumerate() {
                if f.target == s.source && !comp.contains_key(&(fk, sk)) {
                    return Err(CategoryError::MissingCompositionRow(f.clone(), s.clone()));
                }
            }
        }

        let cat = FinCategory {
            objects: object_list,
            morphisms,
            identities: identity_map,
            comp,
        };

        // Unit laws.
        for (mk, m) in cat.morphisms.iter().enumerate() {
            let src_id = cat.identities[&m.source];
            let lhs = cat.comp[&(src_id, mk)];
            if lhs != mk {
                return Err(CategoryError::UnitLawFails(
                    m.clone(),
                    cat.morphisms[lhs].clone(),
                ));
            }
            let tgt_id = cat.identities[&m.target];
            let rhs = cat.comp[&(mk, tgt_id)];
            if rhs != mk {
                return Err(CategoryError::UnitLawFails(
                    m.clone(),
                    cat.morphisms[rhs].clone(),
                ));
            }
        }
        // Associativity.
        for (fk, f) in cat.morphisms.iter().enumerate() {
            for (sk, s) in cat.morphisms.iter().enumerate() {
                if f.target != s.source {
                    continue;
                }
                for (tk, t) in cat.morphisms.iter().enumerate() {
                    if s.target != t.source {
                        continue;
                    }
                    let fs_t = cat.comp[&(cat.comp[&(fk, sk)], tk)];
                    let f_st = cat.comp[&(fk, cat.comp[&(sk, tk)])];
                    if fs_t != f_st {
                        return Err(CategoryError::AssociativityFails(
                            f.clone(),
                            s.clone(),
                            t.clone(),
                        ));
                    }
                }
            }
        }

        Ok(cat)
    }

    /// The discrete category on the given objects: identities only.
    pub fn discrete(objects: impl IntoIterator<Item = String>) -> Result<Self, CategoryError> {
        let objects: Vec<String> = objects.into_iter().collect();
        let morphisms: Vec<CatMorphism> = objects
            .iter()
            .map(|o| CatMorphism::new(format!("id_{o}"), o.clone(), o.clone()))
            .collect();
        let identities: Vec<(String, String)> = objects
            .iter()
            .map(|o| (o.clone(), format!("id_{o}")))
            .collect();
        let composition = morphisms
            .iter()
            .map(|m| (m.clone(), m.clone(), m.clone()))
            .collect();
        FinCategory::new(objects, morphisms, identities, composition)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[CatMorphism] {
        &self.morphisms
    }

    pub fn identity(&self, object: &str) -> Option<&CatMorphism> {
        self.identities.get(object).map(|&k| &self.morphisms[k])
    }

    pub fn contains(&self, m: &CatMorphism) -> bool {
        self.morphisms.binary_search(m).is_ok()
    }

    pub fn hom(&self, source: &str, target: &str) -> Vec<&CatMorphism> {
        self.morphisms
            .iter()
            .filter(|m| m.source == source && m.target == target)
            .collect()
    }

    /// `first` then `second`; `None` when not composable or not listed.
    pub fn compose(&self, first: &CatMorphism, second: &CatMorphism) -> Option<&CatMorphism> {
        let fk = self.morphisms.binary_search(first).ok()?;
        let sk = self.morphisms.binary_search(second).ok()?;
        self.comp.get(&(fk, sk)).map(|&rk| &self.morphisms[rk])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::fixtures::walking_arrow;

    #[test]
    fn walking_arrow_composes() {
        let c = walking_arrow();
        assert_eq!(c.objects(), ["a", "b"]);
        let u = CatMorphism::new("u", "a", "b");
        let idb = CatMorphism::new("idb", "b", "b");
        assert_eq!(c.compose(&u, &idb), Some(&u));
        assert_eq!(c.hom("a", "b").len(), 1);
        assert_eq!(c.hom("b", "a").len(), 0);
        assert_eq!(c.identity("a").unwrap().id, "ida");
    }

    #[test]
    fn discrete_category_has_identities_only() {
        let d = FinCategory::discrete(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(d.morphisms().len(), 2);
        assert!(d.hom("x", "y").is_empty());
    }

    #[test]
    fn missing_composition_row_rejected() {
        let ida = CatMorphism::new("ida", "a", "a");
        let err = FinCategory::new(
            vec!["a".into()],
            vec![ida.clone()],
            vec![("a".into(), "ida".into())],
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, CategoryError::MissingCompositionRow(ida.clone(), ida));
    }

    #[test]
    fn wrong_unit_row_rejected() {
        // A one-object, two-morphism table where composing with the
        // "identity" moves u to itself but ida*ida is declared to be u.
        let ida = CatMorphism::new("ida", "a", "a");
        let u = CatMorphism::new("u", "a", "a");
        let err = FinCategory::new(
            vec!["a".into()],
            vec![ida.clone(), u.clone()],
            vec![("a".into(), "ida".into())],
            vec![
                (ida.clone(), ida.clone(), u.clone()),
                (ida.clone(), u.clone(), u.clone()),
                (u.clone(), ida.clone(), u.clone()),
                (u.clone(), u.clone(), u.clone()),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, CategoryError::UnitLawFails(..)));
    }

    #[test]
    fn associativity_checked() {
        // Z/2 as a one-object category passes.
        let e = CatMorphism::new("e", "x", "x");
        let s = CatMorphism::new("s", "x", "x");
        let z2 = FinCategory::new(
            vec!["x".into()],
            vec![e.clone(), s.clone()],
            vec![("x".into(), "e".into())],
            vec![
                (e.clone(), e.clone(), e.clone()),
                (e.clone(), s.clone(), s.clone()),
                (s.clone(), e.clone(), s.clone()),
                (s.clone(), s.clone(), e.clone()),
            ],
        );
        assert!(z2.is_ok());
    }

    #[test]
    fn spurious_row_rejected() {
        let d = FinCategory::discrete(vec!["x".into(), "y".into()]);
        let idx = CatMorphism::new("id_x", "x", "x");
        let idy = CatMorphism::new("id_y", "y", "y");
        drop(d);
        let err = FinCategory::new(
            vec!["x".into(), "y".into()],
            vec![idx.clone(), idy.clone()],
            vec![("x".into(), "id_x".into()), ("y".into(), "id_y".into())],
            vec![
                (idx.clone(), idx.clone(), idx.clone()),
                (idy.clone(), idy.clone(), idy.clone()),
                (idx.clone(), idy.clone(), idx.clone()),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, CategoryError::SpuriousCompositionRow(..)));
    }
}
