//! Finite distributors between lists of finite categories, and their
//! planar composition by coends.
//!
//! A [`FinDistributor`] with boundary `A1,…,Am -> B1,…,Bn` assigns to every
//! tuple of objects a finite set of elements, contravariantly functorial in
//! the domain entries and covariantly in the codomain entries.  The
//! constructor checks the whole functor structure: totality of the action
//! tables, identities acting trivially, compatibility with composition,
//! and commutation of actions at distinct positions.
//!
//! Composition plugs one codomain entry of `f` into one domain entry of
//! `g`, under the same planarity constraint as polymap composition.  The
//! element sets of the composite are coends: pairs `(φ, ψ)` tagged by an
//! object `c` of the cut category, modulo the zigzag relation generated by
//! sliding a morphism `u : c -> c'` across the cut,
//!
//! ```text
//! (u·φ, ψ)  ~  (φ, ψ·u)        φ at c, ψ at c'
//! ```
//!
//! computed by union-find with representatives in canonical tuple order.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use super::category::{CatMorphism, FinCategory};
use crate::universal::Side;

/// A boundary assignment: objects for the domain entries and for the
/// codomain entries, in order.
pub type DistKey = (Vec<String>, Vec<String>);

pub(crate) fn show_key(key: &DistKey) -> String {
    format!("({})->({})", key.0.join(","), key.1.join(","))
}

/// Why distributor data is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributorError {
    #[error("element table key {} does not fit the boundary categories", show_key(.0))]
    UnknownKey(DistKey),
    #[error("duplicate element {1} at {}", show_key(.0))]
    DuplicateElement(DistKey, String),
    #[error("no {side} action row for {morphism} at position {position} on {element} at {}", show_key(.key))]
    MissingActionRow {
        side: Side,
        position: usize,
        morphism: CatMorphism,
        key: DistKey,
        element: String,
    },
    #[error("spurious {side} action row for {morphism} at position {position} on {element} at {}", show_key(.key))]
    SpuriousActionRow {
        side: Side,
        position: usize,
        morphism: CatMorphism,
        key: DistKey,
        element: String,
    },
    #[error("{side} action of {morphism} at position {position} sends {element} at {} to {target}, which is not an element there", show_key(.key))]
    ActionTargetMissing {
        side: Side,
        position: usize,
        morphism: CatMorphism,
        key: DistKey,
        element: String,
        target: String,
    },
    #[error("identity {morphism} acts at position {position} ({side}) sending {element} to {target} at {}", show_key(.key))]
    IdentityActionNontrivial {
        side: Side,
        position: usize,
        morphism: CatMorphism,
        key: DistKey,
        element: String,
        target: String,
    },
    #[error("{side} actions at position {position} do not respect composition of ({first}, {second}) on {element} at {}", show_key(.key))]
    ActionCompositionFails {
        side: Side,
        position: usize,
        first: CatMorphism,
        second: CatMorphism,
        key: DistKey,
        element: String,
    },
    #[error("actions at ({side_a} {pos_a}, {side_b} {pos_b}) do not commute on {element} at {}", show_key(.key))]
    ActionCommutationFails {
        side_a: Side,
        pos_a: usize,
        side_b: Side,
        pos_b: usize,
        key: DistKey,
        element: String,
    },
    #[error("output index {index} out of range: codomain has {len} entries")]
    OutputIndexOutOfRange { index: usize, len: usize },
    #[error("input index {index} out of range: domain has {len} entries")]
    InputIndexOutOfRange { index: usize, len: usize },
    #[error("cut categories differ: output {i} against input {j}")]
    CutCategoryMismatch { i: usize, j: usize },
    #[error(
        "non-planar cut: output {i} of {cod_len} into input {j} of {dom_len} \
         leaves residual entries on both sides"
    )]
    NotPlanar {
        i: usize,
        j: usize,
        cod_len: usize,
        dom_len: usize,
    },
}

/// All object tuples over a list of categories, in lexicographic order.
pub(crate) fn side_tuples(cats: &[FinCategory]) -> Vec<Vec<String>> {
    let mut tuples = vec![Vec::new()];
    for cat in cats {
        let mut next = Vec::with_capacity(tuples.len() * cat.objects().len());
        for prefix in &tuples {
            for o in cat.objects() {
                let mut t = prefix.clone();
                t.push(o.clone());
                next.push(t);
            }
        }
        tuples = next;
    }
    tuples
}

/// The key reached by acting with `u` at domain position `position`
/// (contravariant: the slot moves from `u.target` to `u.source`).
pub fn dom_transport(key: &DistKey, position: usize, u: &CatMorphism) -> DistKey {
    let mut dom = key.0.clone();
    dom[position] = u.source.clone();
    (dom, key.1.clone())
}

/// The key reached by acting with `u` at codomain position `position`
/// (covariant: the slot moves from `u.source` to `u.target`).
pub fn cod_transport(key: &DistKey, position: usize, u: &CatMorphism) -> DistKey {
    let mut cod = key.1.clone();
    cod[position] = u.target.clone();
    (key.0.clone(), cod)
}

type ActionTable = BTreeMap<(usize, CatMorphism, DistKey, String), String>;

/// The boundary assignment of a composite where codomain entry `i` of the
/// left factor feeds domain entry `j` of the right: the left domain is
/// spliced into the right's at `j`, the right codomain into the left's at
/// `i` — the same arithmetic as polymap composition.
pub fn spliced_key(left: &DistKey, i: usize, right: &DistKey, j: usize) -> DistKey {
    let mut dom = right.0[..j].to_vec();
    dom.extend_from_slice(&left.0);
    dom.extend_from_slice(&right.0[j + 1..]);
    let mut cod = left.1[..i].to_vec();
    cod.extend_from_slice(&right.1);
    cod.extend_from_slice(&left.1[i + 1..]);
    (dom, cod)
}

/// Recover the left factor's key from a composite key and a cut object.
pub(crate) fn split_left(
    key: &DistKey,
    cut: &str,
    i: usize,
    j: usize,
    f_dom_len: usize,
    g_cod_len: usize,
) -> DistKey {
    let mut cod = key.1[..i].to_vec();
    cod.push(cut.to_string());
    cod.extend_from_slice(&key.1[i + g_cod_len..]);
    (key.0[j..j + f_dom_len].to_vec(), cod)
}

/// Recover the right factor's key from a composite key and a cut object.
pub(crate) fn split_right(
    key: &DistKey,
    cut: &str,
    i: usize,
    j: usize,
    f_dom_len: usize,
    g_cod_len: usize,
) -> DistKey {
    let mut dom = key.0[..j].to_vec();
    dom.push(cut.to_string());
    dom.extend_from_slice(&key.0[j + f_dom_len..]);
    (dom, key.1[i..i + g_cod_len].to_vec())
}

/// A finite distributor: element sets over every boundary assignment, with
/// checked contravariant domain actions and covariant codomain actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDistributor {
    dom_cats: Vec<FinCategory>,
    cod_cats: Vec<FinCategory>,
    elements: BTreeMap<DistKey, Vec<String>>,
    dom_actions: ActionTable,
    cod_actions: ActionTable,
}

impl FinDistributor {
    /// Build and check a distributor from explicit tables.  Element-table
    /// keys absent from the grid are treated as empty sets; keys outside
    /// the grid are rejected.  Action rows must be given exactly for every
    /// applicable (position, morphism, key, element) quadruple.
    pub fn new(
        dom_cats: Vec<FinCategory>,
        cod_cats: Vec<FinCategory>,
        elements: BTreeMap<DistKey, Vec<String>>,
        dom_actions: ActionTable,
        cod_actions: ActionTable,
    ) -> Result<Self, DistributorError> {
        let mut grid: BTreeMap<DistKey, Vec<String>> = BTreeMap::new();
        for dom in side_tuples(&dom_cats) {
            for cod in side_tuples(&cod_cats) {
                grid.insert((dom.clone(), cod), Vec::new());
            }
        }
        for (key, mut names) in elements {
            let slot = grid
                .get_mut(&key)
                .ok_or_else(|| DistributorError::UnknownKey(key.clone()))?;
            names.sort();
            for w in names.windows(2) {
                if w[0] == w[1] {
                    return Err(DistributorError::DuplicateElement(key.clone(), w[0].clone()));
                }
            }
            *slot = names;
        }

        let d = FinDistributor {
            dom_cats,
            cod_cats,
            elements: grid,
            dom_actions,
            cod_actions,
        };
        d.check_side(Side::In)?;
        d.check_side(Side::Out)?;
        d.check_commutation()?;
        Ok(d)
    }

    /// Build a distributor from callbacks: `elements` names the set at each
    /// key, and the action callbacks give the image element name.
    pub fn from_fn(
        dom_cats: Vec<FinCategory>,
        cod_cats: Vec<FinCategory>,
        elements: impl Fn(&DistKey) -> Vec<String>,
        dom_action: impl Fn(usize, &CatMorphism, &DistKey, &str) -> String,
        cod_action: impl Fn(usize, &CatMorphism, &DistKey, &str) -> String,
    ) -> Result<Self, DistributorError> {
        let mut table = BTreeMap::new();
        for dom in side_tuples(&dom_cats) {
            for cod in side_tuples(&cod_cats) {
                let key = (dom.clone(), cod);
                table.insert(key.clone(), elements(&key));
            }
        }
        let mut dom_table = BTreeMap::new();
        for (key, names) in &table {
            for (k, cat) in dom_cats.iter().enumerate() {
                for u in cat.morphisms() {
                    if u.target != key.0[k] {
                        continue;
                    }
                    for e in names {
                        dom_table.insert(
                            (k, u.clone(), key.clone(), e.clone()),
                            dom_action(k, u, key, e),
                        );
                    }
                }
            }
        }
        let mut cod_table = BTreeMap::new();
        for (key, names) in &table {
            for (l, cat) in cod_cats.iter().enumerate() {
                for v in cat.morphisms() {
                    if v.source != key.1[l] {
                        continue;
                    }
                    for e in names {
                        cod_table.insert(
                            (l, v.clone(), key.clone(), e.clone()),
                            cod_action(l, v, key, e),
                        );
                    }
                }
            }
        }
        FinDistributor::new(dom_cats, cod_cats, table, dom_table, cod_table)
    }

    fn side_data(&self, side: Side) -> (&[FinCategory], &ActionTable) {
        match side {
            Side::In => (&self.dom_cats, &self.dom_actions),
            Side::Out => (&self.cod_cats, &self.cod_actions),
        }
    }

    /// The slot object a morphism acts *from* on this side: contravariant
    /// actions consume elements at the target, covariant at the source.
    fn acts_from(side: Side, u: &CatMorphism) -> &str {
        match side {
            Side::In => &u.target,
            Side::Out => &u.source,
        }
    }

    fn transport(side: Side, key: &DistKey, position: usize, u: &CatMorphism) -> DistKey {
        match side {
            Side::In => dom_transport(key, position, u),
            Side::Out => cod_transport(key, position, u),
        }
    }

    fn check_side(&self, side: Side) -> Result<(), DistributorError> {
        let (cats, table) = self.side_data(side);
        let slot_of = |key: &DistKey, k: usize| -> String {
            match side {
                Side::In => key.0[k].clone(),
                Side::Out => key.1[k].clone(),
            }
        };

        let mut expected = 0usize;
        for (key, names) in &self.elements {
            for (k, cat) in cats.iter().enumerate() {
                for u in cat.morphisms() {
                    if Self::acts_from(side, u) != slot_of(key, k) {
                        continue;
                    }
                    for e in names {
                        expected += 1;
                        let probe = (k, u.clone(), key.clone(), e.clone());
                        let target = table.get(&probe).ok_or_else(|| {
                            DistributorError::MissingActionRow {
                                side,
                                position: k,
                                morphism: u.clone(),
                                key: key.clone(),
                                element: e.clone(),
                            }
                        })?;
                        let moved = Self::transport(side, key, k, u);
                        let set = self.elements.get(&moved).ok_or_else(|| {
                            DistributorError::UnknownKey(moved.clone())
                        })?;
                        if !set.contains(target) {
                            return Err(DistributorError::ActionTargetMissing {
                                side,
                                position: k,
                                morphism: u.clone(),
                                key: key.clone(),
                                element: e.clone(),
                                target: target.clone(),
                            });
                        }
                        if u.source == u.target
                            && cat.identity(&u.source).map(|m| m == u).unwrap_or(false)
                            && target != e
                        {
                            return Err(DistributorError::IdentityActionNontrivial {
                                side,
                                position: k,
                                morphism: u.clone(),
                                key: key.clone(),
                                element: e.clone(),
                                target: target.clone(),
                            });
                        }
                    }
                }
            }
        }
        if table.len() != expected {
            // Some row was given for an inapplicable quadruple; find one.
            for (k, u, key, e) in table.keys() {
                let applicable = *k < cats.len()
                    && cats[*k].contains(u)
                    && self
                        .elements
                        .get(key)
                        .map(|set| {
                            Self::acts_from(side, u) == slot_of(key, *k) && set.contains(e)
                        })
                        .unwrap_or(false);
                if !applicable {
                    return Err(DistributorError::SpuriousActionRow {
                        side,
                        position: *k,
                        morphism: u.clone(),
                        key: key.clone(),
                        element: e.clone(),
                    });
                }
            }
        }

        // Compatibility with composition in each boundary category.  For a
        // composable pair (first ; second), the action of the composite
        // equals acting with the outer morphism first: contravariantly the
        // element meets `second` first, covariantly it meets `first`.
        for (key, names) in &self.elements {
            for (k, cat) in cats.iter().enumerate() {
                for first in cat.morphisms() {
                    for second in cat.morphisms() {
                        if first.target != second.source {
                            continue;
                        }
                        let whole = cat
                            .compose(first, second)
                            .expect("composition total on composable pairs");
                        if Self::acts_from(side, whole) != slot_of(key, k) {
                            continue;
                        }
                        for e in names {
                            let direct = &table[&(k, whole.clone(), key.clone(), e.clone())];
                            let (inner, outer) = match side {
                                Side::In => (first, second),
                                Side::Out => (second, first),
                            };
                            let mid_key = Self::transport(side, key, k, outer);
                            let mid =
                                &table[&(k, outer.clone(), key.clone(), e.clone())];
                            let stepped =
                                &table[&(k, inner.clone(), mid_key.clone(), mid.clone())];
                            if stepped != direct {
                                return Err(DistributorError::ActionCompositionFails {
                                    side,
                                    position: k,
                                    first: first.clone(),
                                    second: second.clone(),
                                    key: key.clone(),
                                    element: e.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_commutation(&self) -> Result<(), DistributorError> {
        // Actions at distinct positions (on either side) must commute.
        let sides = [Side::In, Side::Out];
        for side_a in sides {
            for side_b in sides {
                let (cats_a, _) = self.side_data(side_a);
                let (cats_b, _) = self.side_data(side_b);
                for pos_a in 0..cats_a.len() {
                    for pos_b in 0..cats_b.len() {
                        if side_a == side_b && pos_a >= pos_b {
                            continue; // each unordered pair once
                        }
                        if side_a == Side::Out && side_b == Side::In {
                            continue; // covered by the (In, Out) sweep
                        }
                        self.check_commuting_pair(side_a, pos_a, side_b, pos_b)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn check_commuting_pair(
        &self,
        side_a: Side,
        pos_a: usize,
        side_b: Side,
        pos_b: usize,
    ) -> Result<(), DistributorError> {
        let (cats_a, table_a) = self.side_data(side_a);
        let (cats_b, table_b) = self.side_data(side_b);
        let slot = |key: &DistKey, side: Side, k: usize| match side {
            Side::In => key.0[k].clone(),
            Side::Out => key.1[k].clone(),
        };
        for (key, names) in &self.elements {
            for u in cats_a[pos_a].morphisms() {
                if Self::acts_from(side_a, u) != slot(key, side_a, pos_a) {
                    continue;
                }
                for v in cats_b[pos_b].morphisms() {
                    if Self::acts_from(side_b, v) != slot(key, side_b, pos_b) {
                        continue;
                    }
                    for e in names {
                        let a_first = &table_a[&(pos_a, u.clone(), key.clone(), e.clone())];
                        let a_key = Self::transport(side_a, key, pos_a, u);
                        let ab = &table_b[&(pos_b, v.clone(), a_key.clone(), a_first.clone())];
                        let b_first = &table_b[&(pos_b, v.clone(), key.clone(), e.clone())];
                        let b_key = Self::transport(side_b, key, pos_b, v);
                        let ba = &table_a[&(pos_a, u.clone(), b_key.clone(), b_first.clone())];
                        if ab != ba {
                            return Err(DistributorError::ActionCommutationFails {
                                side_a,
                                pos_a,
                                side_b,
                                pos_b,
                                key: key.clone(),
                                element: e.clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dom_cats(&self) -> &[FinCategory] {
        &self.dom_cats
    }

    pub fn cod_cats(&self) -> &[FinCategory] {
        &self.cod_cats
    }

    /// Every key of the element grid, lexicographically.
    pub fn all_keys(&self) -> impl Iterator<Item = &DistKey> {
        self.elements.keys()
    }

    pub fn elements_at(&self, key: &DistKey) -> &[String] {
        self.elements
            .get(key)
            .expect("key within the boundary grid")
    }

    /// Act with `u` at domain position `position` on `element` at `key`;
    /// returns the transported key and the image element.  `None` when the
    /// quadruple is inapplicable.
    pub fn dom_action(
        &self,
        position: usize,
        u: &CatMorphism,
        key: &DistKey,
        element: &str,
    ) -> Option<(DistKey, String)> {
        let image = self
            .dom_actions
            .get(&(position, u.clone(), key.clone(), element.to_string()))?;
        Some((dom_transport(key, position, u), image.clone()))
    }

    /// Act with `u` at codomain position `position`; see [`Self::dom_action`].
    pub fn cod_action(
        &self,
        position: usize,
        u: &CatMorphism,
        key: &DistKey,
        element: &str,
    ) -> Option<(DistKey, String)> {
        let image = self
            .cod_actions
            .get(&(position, u.clone(), key.clone(), element.to_string()))?;
        Some((cod_transport(key, position, u), image.clone()))
    }
}

/// The hom distributor of a finite category: elements at `(a, b)` are the
/// morphisms `a -> b`, with precomposition acting on the domain entry and
/// postcomposition on the codomain entry.
pub fn hom_distributor(cat: &FinCategory) -> FinDistributor {
    let morphism = |key: &DistKey, name: &str| {
        CatMorphism::new(name, key.0[0].clone(), key.1[0].clone())
    };
    FinDistributor::from_fn(
        vec![cat.clone()],
        vec![cat.clone()],
        |key| {
            cat.hom(&key.0[0], &key.1[0])
                .into_iter()
                .map(|m| m.id.clone())
                .collect()
        },
        |_, u, key, name| {
            cat.compose(u, &morphism(key, name))
                .expect("composable by slot match")
                .id
                .clone()
        },
        |_, v, key, name| {
            cat.compose(&morphism(key, name), v)
                .expect("composable by slot match")
                .id
                .clone()
        },
    )
    .expect("hom distributor is functorial")
}

/// One equivalence class of the coend at one composite key: the class name
/// used as the composite element, and the canonical representative
/// `(cut object, left element, right element)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoendClass {
    pub key: DistKey,
    pub name: String,
    pub representative: (String, String, String),
}

/// A composed distributor together with its coend bookkeeping: every raw
/// pair is mapped to the class it generates, so callers can check maps out
/// of the composite for well-definedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoendComposite {
    pub distributor: FinDistributor,
    pub classes: Vec<CoendClass>,
    class_of: BTreeMap<(DistKey, (String, String, String)), String>,
}

impl CoendComposite {
    /// The class of the raw pair `(cut object, left, right)` at a composite
    /// key, if that pair exists.
    pub fn class_name(&self, key: &DistKey, node: &(String, String, String)) -> Option<&str> {
        self.class_of
            .get(&(key.clone(), node.clone()))
            .map(|s| s.as_str())
    }

    /// All raw pairs at a composite key, with their class names.
    pub fn nodes_at(&self, key: &DistKey) -> Vec<(&(String, String, String), &str)> {
        self.class_of
            .range((key.clone(), (String::new(), String::new(), String::new()))..)
            .take_while(|((k, _), _)| k == key)
            .map(|((_, node), class)| (node, class.as_str()))
            .collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller root so representatives are canonical.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Compose two distributors: codomain entry `i` of `f` feeds domain entry
/// `j` of `g`, under the planarity constraint.  Element sets of the result
/// are coend classes; actions are induced on representatives.
pub fn compose_distributors(
    f: &FinDistributor,
    i: usize,
    g: &FinDistributor,
    j: usize,
) -> Result<CoendComposite, DistributorError> {
    if i >= f.cod_cats.len() {
        return Err(DistributorError::OutputIndexOutOfRange {
            index: i,
            len: f.cod_cats.len(),
        });
    }
    if j >= g.dom_cats.len() {
        return Err(DistributorError::InputIndexOutOfRange {
            index: j,
            len: g.dom_cats.len(),
        });
    }
    if f.cod_cats[i] != g.dom_cats[j] {
        return Err(DistributorError::CutCategoryMismatch { i, j });
    }
    let left_ok = i == 0 || j == 0;
    let right_ok = i == f.cod_cats.len() - 1 || j == g.dom_cats.len() - 1;
    if !(left_ok && right_ok) {
        return Err(DistributorError::NotPlanar {
            i,
            j,
            cod_len: f.cod_cats.len(),
            dom_len: g.dom_cats.len(),
        });
    }
    let cut = &f.cod_cats[i];
    let f_dom_len = f.dom_cats.len();
    let g_cod_len = g.cod_cats.len();

    let mut dom_cats = g.dom_cats[..j].to_vec();
    dom_cats.extend_from_slice(&f.dom_cats);
    dom_cats.extend_from_slice(&g.dom_cats[j + 1..]);
    let mut cod_cats = f.cod_cats[..i].to_vec();
    cod_cats.extend_from_slice(&g.cod_cats);
    cod_cats.extend_from_slice(&f.cod_cats[i + 1..]);

    // Per composite key: enumerate raw pairs, quotient, and name classes.
    let left_key = |key: &DistKey, c: &str| split_left(key, c, i, j, f_dom_len, g_cod_len);
    let right_key = |key: &DistKey, c: &str| split_right(key, c, i, j, f_dom_len, g_cod_len);

    let mut elements: BTreeMap<DistKey, Vec<String>> = BTreeMap::new();
    let mut classes = Vec::new();
    let mut class_of: BTreeMap<(DistKey, (String, String, String)), String> = BTreeMap::new();
    let composite_keys: Vec<DistKey> = side_tuples(&dom_cats)
        .into_iter()
        .flat_map(|dom| {
            side_tuples(&cod_cats)
                .into_iter()
                .map(move |cod| (dom.clone(), cod))
        })
        .collect();

    for key in &composite_keys {
        let mut nodes: Vec<(String, String, String)> = Vec::new();
        let mut index: BTreeMap<(String, String, String), usize> = BTreeMap::new();
        for c in cut.objects() {
            for phi in f.elements_at(&left_key(key, c)) {
                for psi in g.elements_at(&right_key(key, c)) {
                    let node = (c.clone(), phi.clone(), psi.clone());
                    index.insert(node.clone(), nodes.len());
                    nodes.push(node);
                }
            }
        }
        let mut uf = UnionFind::new(nodes.len());
        for u in cut.morphisms() {
            let (c, ct) = (&u.source, &u.target);
            let lk = left_key(key, c);
            let rk_t = right_key(key, ct);
            for phi in f.elements_at(&lk) {
                let (_, pushed) = f
                    .cod_action(i, u, &lk, phi)
                    .expect("cut action total");
                for psi_t in g.elements_at(&rk_t) {
                    let (_, pulled) = g
                        .dom_action(j, u, &rk_t, psi_t)
                        .expect("cut action total");
                    let a = index[&(ct.clone(), pushed.clone(), psi_t.clone())];
                    let b = index[&(c.clone(), phi.clone(), pulled)];
                    uf.union(a, b);
                }
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut name_of_root: BTreeMap<usize, String> = BTreeMap::new();
        for n in 0..nodes.len() {
            let r = uf.find(n);
            if !name_of_root.contains_key(&r) {
                let name = format!("k{}", roots.len());
                roots.push(r);
                name_of_root.insert(r, name.clone());
                classes.push(CoendClass {
                    key: key.clone(),
                    name,
                    representative: nodes[r].clone(),
                });
            }
        }
        let mut named: Vec<String> = name_of_root.values().cloned().collect();
        named.sort();
        elements.insert(key.clone(), named);
        for (n, node) in nodes.iter().enumerate() {
            let r = uf.find(n);
            class_of.insert((key.clone(), node.clone()), name_of_root[&r].clone());
        }
    }

    // Induced actions: act on the representative's left or right component
    // according to where the boundary position came from, then resolve the
    // class of the image pair.
    let representative = |key: &DistKey, name: &str| -> (String, String, String) {
        classes
            .iter()
            .find(|c| c.key == *key && c.name == name)
            .expect("every composite element is a class")
            .representative
            .clone()
    };
    let act = |side: Side,
               pos: usize,
               u: &CatMorphism,
               key: &DistKey,
               name: &str|
     -> String {
        let (c, phi, psi) = representative(key, name);
        let moved_key = FinDistributor::transport(side, key, pos, u);
        let node = match side {
            Side::In => {
                if pos < j {
                    let rk = right_key(key, &c);
                    let (_, moved) = g.dom_action(pos, u, &rk, &psi).expect("action total");
                    (c, phi, moved)
                } else if pos < j + f_dom_len {
                    let lk = left_key(key, &c);
                    let (_, moved) = f.dom_action(pos - j, u, &lk, &phi).expect("action total");
                    (c, moved, psi)
                } else {
                    let rk = right_key(key, &c);
                    let (_, moved) = g
                        .dom_action(pos - f_dom_len + 1, u, &rk, &psi)
                        .expect("action total");
                    (c, phi, moved)
                }
            }
            Side::Out => {
                if pos < i {
                    let lk = left_key(key, &c);
                    let (_, moved) = f.cod_action(pos, u, &lk, &phi).expect("action total");
                    (c, moved, psi)
                } else if pos < i + g_cod_len {
                    let rk = right_key(key, &c);
                    let (_, moved) = g.cod_action(pos - i, u, &rk, &psi).expect("action total");
                    (c, phi, moved)
                } else {
                    let lk = left_key(key, &c);
                    let (_, moved) = f
                        .cod_action(pos - g_cod_len + 1, u, &lk, &phi)
                        .expect("action total");
                    (c, moved, psi)
                }
            }
        };
        class_of
            .get(&(moved_key, node))
            .expect("action image lands in a computed class")
            .clone()
    };

    let mut dom_table = BTreeMap::new();
    let mut cod_table = BTreeMap::new();
    for key in &composite_keys {
        let names = &elements[key];
        for (k, cat) in dom_cats.iter().enumerate() {
            for u in cat.morphisms() {
                if u.target != key.0[k] {
                    continue;
                }
                for name in names {
                    dom_table.insert(
                        (k, u.clone(), key.clone(), name.clone()),
                        act(Side::In, k, u, key, name),
                    );
                }
            }
        }
        for (l, cat) in cod_cats.iter().enumerate() {
            for v in cat.morphisms() {
                if v.source != key.1[l] {
                    continue;
                }
                for name in names {
                    cod_table.insert(
                        (l, v.clone(), key.clone(), name.clone()),
                        act(Side::Out, l, v, key, name),
                    );
                }
            }
        }
    }

    let distributor = FinDistributor::new(dom_cats, cod_cats, elements, dom_table, cod_table)?;
    Ok(CoendComposite {
        distributor,
        classes,
        class_of,
    })
}

impl fmt::Display for FinDistributor {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            out,
            "distributor with {} domain and {} codomain entries",
            self.dom_cats.len(),
            self.cod_cats.len()
        )?;
        for (key, names) in &self.elements {
            if !names.is_empty() {
                writeln!(out, "  {}: {{{}}}", show_key(key), names.join(", "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::fixtures::{copresheaf_on_arrow, presheaf_on_arrow, walking_arrow};

    #[test]
    fn hom_distributor_of_the_walking_arrow() {
        let c = walking_arrow();
        let h = hom_distributor(&c);
        assert_eq!(h.elements_at(&(vec!["a".into()], vec!["b".into()])), ["u"]);
        assert_eq!(h.elements_at(&(vec!["b".into()], vec!["a".into()])), Vec::<String>::new());
        // Precomposing idb's hom class along u lands on u itself.
        let u = CatMorphism::new("u", "a", "b");
        let key = (vec!["b".into()], vec!["b".into()]);
        let (moved_key, image) = h.dom_action(0, &u, &key, "idb").unwrap();
        assert_eq!(moved_key, (vec!["a".into()], vec!["b".into()]));
        assert_eq!(image, "u");
    }

    #[test]
    fn coend_with_a_copresheaf_collapses_by_the_zigzag() {
        // d : [] -> [C] with d(a) = {p}, d(b) = {q1, q2} and u·p = q1.
        // Composing with hom(C) merges (a, p, u) with (b, q1, idb), leaving
        // two classes over b and one over a.
        let c = walking_arrow();
        let d = copresheaf_on_arrow(&c);
        let h = hom_distributor(&c);
        let composed = compose_distributors(&d, 0, &h, 0).unwrap();
        let at_a = (Vec::new(), vec!["a".to_string()]);
        let at_b = (Vec::new(), vec!["b".to_string()]);
        assert_eq!(composed.distributor.elements_at(&at_a).len(), 1);
        assert_eq!(composed.distributor.elements_at(&at_b).len(), 2);
        let glued_left = composed
            .class_name(&at_b, &("a".into(), "p".into(), "u".into()))
            .unwrap();
        let glued_right = composed
            .class_name(&at_b, &("b".into(), "q1".into(), "idb".into()))
            .unwrap();
        assert_eq!(glued_left, glued_right);
        let lone = composed
            .class_name(&at_b, &("b".into(), "q2".into(), "idb".into()))
            .unwrap();
        assert_ne!(glued_left, lone);
    }

    /// The co-Yoneda collapse: evaluate a class representative `(c, e, m)`
    /// by acting with the hom element `m` on `e`.  Must be constant on
    /// classes and bijective onto the original element sets.
    fn check_co_yoneda_right(d: &FinDistributor, cat: &FinCategory) {
        let h = hom_distributor(cat);
        let i = d.cod_cats().len() - 1;
        let composed = compose_distributors(d, i, &h, 0).unwrap();
        for key in composed.distributor.all_keys() {
            let mut images: BTreeMap<String, String> = BTreeMap::new();
            for (node, class) in composed.nodes_at(key) {
                let (c, e, m) = node;
                let hom_m = CatMorphism::new(m.clone(), c.clone(), key.1[i].clone());
                let mut whole = key.1.clone();
                whole[i] = c.clone();
                let (collapsed_key, image) = d
                    .cod_action(i, &hom_m, &(key.0.clone(), whole), e)
                    .expect("hom element acts");
                assert_eq!(collapsed_key, *key);
                match images.get(class) {
                    Some(prev) => assert_eq!(prev, &image, "collapse not constant on a class"),
                    None => {
                        images.insert(class.to_string(), image);
                    }
                }
            }
            let mut seen: Vec<&String> = images.values().collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), images.len(), "collapse not injective");
            assert_eq!(
                images.len(),
                d.elements_at(key).len(),
                "collapse not surjective"
            );
        }
    }

    fn check_co_yoneda_left(d: &FinDistributor, cat: &FinCategory) {
        let h = hom_distributor(cat);
        let j = 0;
        let composed = compose_distributors(&h, 0, d, j).unwrap();
        for key in composed.distributor.all_keys() {
            let mut images: BTreeMap<String, String> = BTreeMap::new();
            for (node, class) in composed.nodes_at(key) {
                let (c, m, e) = node;
                let hom_m = CatMorphism::new(m.clone(), key.0[j].clone(), c.clone());
                let mut whole = key.0.clone();
                whole[j] = c.clone();
                let (collapsed_key, image) = d
                    .dom_action(j, &hom_m, &(whole, key.1.clone()), e)
                    .expect("hom element acts");
                assert_eq!(collapsed_key, *key);
                match images.get(class) {
                    Some(prev) => assert_eq!(prev, &image, "collapse not constant on a class"),
                    None => {
                        images.insert(class.to_string(), image);
                    }
                }
            }
            let mut seen: Vec<&String> = images.values().collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), images.len(), "collapse not injective");
            assert_eq!(
                images.len(),
                d.elements_at(key).len(),
                "collapse not surjective"
            );
        }
    }

    #[test]
    fn composing_with_hom_is_the_identity_up_to_co_yoneda() {
        let c = walking_arrow();
        check_co_yoneda_right(&copresheaf_on_arrow(&c), &c);
        check_co_yoneda_left(&presheaf_on_arrow(&c), &c);
        // The hom distributor against itself, both ways.
        check_co_yoneda_right(&hom_distributor(&c), &c);
        check_co_yoneda_left(&hom_distributor(&c), &c);
    }

    #[test]
    fn discrete_cut_gives_the_plain_product_sum() {
        // Over a discrete cut category nothing slides: the class count is
        // the sum over cut objects of the products of the two element
        // counts.
        let disc = FinCategory::discrete(vec!["x".into(), "y".into()]).unwrap();
        let d1 = FinDistributor::from_fn(
            vec![],
            vec![disc.clone()],
            |key| match key.1[0].as_str() {
                "x" => vec!["p1".into(), "p2".into()],
                _ => vec!["q".into()],
            },
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        let d2 = FinDistributor::from_fn(
            vec![disc.clone()],
            vec![disc.clone()],
            |key| vec![format!("{}-{}", key.0[0], key.1[0])],
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        let composed = compose_distributors(&d1, 0, &d2, 0).unwrap();
        for o in ["x", "y"] {
            let key = (Vec::new(), vec![o.to_string()]);
            let expected: usize = disc
                .objects()
                .iter()
                .map(|c| {
                    d1.elements_at(&(Vec::new(), vec![c.clone()])).len()
                        * d2.elements_at(&(vec![c.clone()], vec![o.to_string()])).len()
                })
                .sum();
            assert_eq!(composed.distributor.elements_at(&key).len(), expected);
            assert_eq!(composed.nodes_at(&key).len(), expected);
        }
    }

    #[test]
    fn all_singleton_composite_is_singleton() {
        let one = FinCategory::discrete(vec!["o".into()]).unwrap();
        let s = FinDistributor::from_fn(
            vec![one.clone()],
            vec![one.clone()],
            |_| vec!["e".into()],
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        let composed = compose_distributors(&s, 0, &s, 0).unwrap();
        let key = (vec!["o".to_string()], vec!["o".to_string()]);
        assert_eq!(composed.distributor.elements_at(&key).len(), 1);
    }

    #[test]
    fn coend_composition_is_associative_up_to_the_canonical_bijection() {
        // Three hom distributors of the walking arrow chained at unary
        // cuts.  Both bracketings are computed; the canonical map matches
        // a left class, resolved to a raw triple through its inner class,
        // with the right class of the same triple.  It must be a
        // well-defined bijection at every key.
        let c = walking_arrow();
        let h = hom_distributor(&c);
        let hh = compose_distributors(&h, 0, &h, 0).unwrap();
        let left = compose_distributors(&hh.distributor, 0, &h, 0).unwrap();
        let gh = compose_distributors(&h, 0, &h, 0).unwrap();
        let right = compose_distributors(&h, 0, &gh.distributor, 0).unwrap();

        for key in left.distributor.all_keys() {
            // class of left composite -> set of raw triples (c1, x, c2, y, z)
            let mut to_right: BTreeMap<String, String> = BTreeMap::new();
            let mut right_hit: Vec<String> = Vec::new();
            for (node, class) in left.nodes_at(key) {
                let (c2, inner_name, z) = node;
                // Inner key of hh for this outer assignment: dom from the
                // composite key, cod = the cut object c2.
                let inner_key = (key.0.clone(), vec![c2.clone()]);
                for (inner_node, inner_class) in hh.nodes_at(&inner_key) {
                    if inner_class != inner_name {
                        continue;
                    }
                    let (c1, x, y) = inner_node;
                    // Same triple on the right: inner pair (y, z) over c2
                    // in gh at key (c1 -> cod), then (x, that class).
                    let gh_key = (vec![c1.clone()], key.1.clone());
                    let gh_class = gh
                        .class_name(&gh_key, &(c2.clone(), y.clone(), z.clone()))
                        .expect("triple present on the right");
                    let r_class = right
                        .class_name(key, &(c1.clone(), x.clone(), gh_class.to_string()))
                        .expect("right class exists");
                    match to_right.get(class) {
                        Some(prev) => {
                            assert_eq!(prev, r_class, "canonical map not well defined")
                        }
                        None => {
                            to_right.insert(class.to_string(), r_class.to_string());
                            right_hit.push(r_class.to_string());
                        }
                    }
                }
            }
            right_hit.sort();
            right_hit.dedup();
            assert_eq!(right_hit.len(), to_right.len(), "canonical map not injective");
            assert_eq!(
                to_right.len(),
                right.distributor.elements_at(key).len(),
                "canonical map not surjective"
            );
            assert_eq!(
                left.distributor.elements_at(key).len(),
                right.distributor.elements_at(key).len()
            );
        }
    }

    #[test]
    fn ill_matched_cuts_are_rejected() {
        let c = walking_arrow();
        let disc = FinCategory::discrete(vec!["x".into()]).unwrap();
        let h = hom_distributor(&c);
        let s = FinDistributor::from_fn(
            vec![disc.clone()],
            vec![disc],
            |_| vec!["e".into()],
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        assert!(matches!(
            compose_distributors(&h, 0, &s, 0),
            Err(DistributorError::CutCategoryMismatch { .. })
        ));
        assert!(matches!(
            compose_distributors(&h, 1, &s, 0),
            Err(DistributorError::OutputIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn non_planar_distributor_cut_rejected() {
        // f : [] -> [C, C, C] cut at the middle entry against g with
        // domain [C, C, C] cut in the middle: residual entries on both
        // sides.
        let c = walking_arrow();
        let f = FinDistributor::from_fn(
            vec![],
            vec![c.clone(), c.clone(), c.clone()],
            |_| Vec::new(),
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        let g = FinDistributor::from_fn(
            vec![c.clone(), c.clone(), c.clone()],
            vec![],
            |_| Vec::new(),
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        assert!(matches!(
            compose_distributors(&f, 1, &g, 1),
            Err(DistributorError::NotPlanar { .. })
        ));
    }

    #[test]
    fn broken_functoriality_is_rejected() {
        // Take the hom distributor of Z/2-as-category and misdirect one
        // action row: s acting on e should give s, claim e instead.
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
        )
        .unwrap();
        let good = hom_distributor(&z2);
        let key = (vec!["x".to_string()], vec!["x".to_string()]);
        let mut dom_actions = BTreeMap::new();
        let mut cod_actions = BTreeMap::new();
        for m in [&e, &s] {
            for el in ["e", "s"] {
                let (_, image) = good.dom_action(0, m, &key, el).unwrap();
                dom_actions.insert((0, m.clone(), key.clone(), el.to_string()), image);
                let (_, image) = good.cod_action(0, m, &key, el).unwrap();
                cod_actions.insert((0, m.clone(), key.clone(), el.to_string()), image);
            }
        }
        dom_actions.insert((0, s.clone(), key.clone(), "e".to_string()), "e".to_string());
        let mut elements = BTreeMap::new();
        elements.insert(key.clone(), vec!["e".to_string(), "s".to_string()]);
        let err = FinDistributor::new(
            vec![z2.clone()],
            vec![z2],
            elements,
            dom_actions,
            cod_actions,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            DistributorError::ActionCompositionFails { .. }
                | DistributorError::ActionCommutationFails { .. }
        ));
    }
}
