//! Universal polymaps and birepresentability.
//!
//! A polymap `u : Γ → Δ₁,A,Δ₂` is *out-universal in A* when every polymap
//! `h` whose codomain extends `Δ₁ … Δ₂` around a free middle and whose
//! domain contains `Γ` as a block factors uniquely as `h = χ ∘ u` through a
//! polymap `χ` consuming `A` in place of `Γ`; *in-universal* is the mirror
//! notion on an input.  Tensors, pars, and duals are the special cases with
//! empty contexts, and a polycategory is birepresentable when universal
//! maps exist in every context.  All decisions here work by exhaustive
//! enumeration of the bounded instance space, so every certificate is
//! relative to the scope bound and counts the instances it had to skip
//! because a factorizing shape would leave the bound.

use crate::core::{ComposeError, Boundary, FinPolycategory, ObjectId, PolyMap};
use std::collections::BTreeMap;
use std::fmt;

/// Which side of a boundary a certificate speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    In,
    Out,
}

impl fmt::Display for Side {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::In => write!(out, "in"),
            Side::Out => write!(out, "out"),
        }
    }
}

/// A factorization defect: an instance with no factorization, or several.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityFailure {
    pub instance: PolyMap,
    /// Offset at which the fixed block sits in the instance's free side.
    pub offset: usize,
    pub factorizations: Vec<PolyMap>,
}

/// Outcome of checking one polymap for universality at one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityCertificate {
    pub polymap: PolyMap,
    pub side: Side,
    pub index: usize,
    pub bound: usize,
    pub checked: u64,
    pub skipped: u64,
    pub failure: Option<UniversalityFailure>,
}

impl UniversalityCertificate {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for UniversalityCertificate {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{} {}-universal at {} (bound {}): {} instances, {} skipped",
            self.polymap.key(),
            self.side,
            self.index,
            self.bound,
            self.checked,
            self.skipped
        )?;
        match &self.failure {
            None => write!(out, "; holds"),
            Some(f) => write!(
                out,
                "; fails at {} (offset {}): {} factorizations",
                f.instance.key(),
                f.offset,
                f.factorizations.len()
            ),
        }
    }
}

fn block_at(list: &[ObjectId], block: &[ObjectId], offset: usize) -> bool {
    list[offset..offset + block.len()] == *block
}

/// Decide out-universality of `u` at output `i` by enumerating every
/// in-scope instance and counting its factorizations.
pub fn is_out_universal(
    p: &FinPolycategory,
    u: &PolyMap,
    i: usize,
) -> Result<UniversalityCertificate, ComposeError> {
    if !p.contains(u) {
        return Err(ComposeError::UnknownPolyMap(u.key()));
    }
    if i >= u.boundary.codomain.len() {
        return Err(ComposeError::OutputIndexOutOfRange {
            index: i,
            len: u.boundary.codomain.len(),
        });
    }
    let bound = p.scope_bound();
    let gamma = &u.boundary.domain;
    let d1 = &u.boundary.codomain[..i];
    let a = &u.boundary.codomain[i];
    let d2 = &u.boundary.codomain[i + 1..];
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut failure = None;

    'outer: for h in p.all_polymaps() {
        let hc = &h.boundary.codomain;
        if hc.len() < d1.len() + d2.len()
            || !block_at(hc, d1, 0)
            || !block_at(hc, d2, hc.len() - d2.len())
        {
            continue;
        }
        let delta = &hc[d1.len()..hc.len() - d2.len()];
        let hd = &h.boundary.domain;
        if hd.len() < gamma.len() {
            continue;
        }
        for offset in 0..=hd.len() - gamma.len() {
            if !block_at(hd, gamma, offset) {
                continue;
            }
            let g1 = &hd[..offset];
            let g2 = &hd[offset + gamma.len()..];
            if !((g1.is_empty() || d1.is_empty()) && (g2.is_empty() || d2.is_empty())) {
                continue;
            }
            // Factorizations live in hom(Γ₁,A,Γ₂ ; Δ).
            let mut chi_dom = g1.to_vec();
            chi_dom.push(a.clone());
            chi_dom.extend_from_slice(g2);
            let chi_boundary = Boundary::new(chi_dom, delta.to_vec());
            if chi_boundary.width() > bound {
                skipped += 1;
                continue;
            }
            checked += 1;
            let cut = g1.len();
            let matches: Vec<PolyMap> = p
                .hom(&chi_boundary)
                .into_iter()
                .filter(|chi| p.compose(u, i, chi, cut) == Ok(h.clone()))
                .collect();
            if matches.len() != 1 {
                failure = Some(UniversalityFailure {
                    instance: h.clone(),
                    offset,
                    factorizations: matches,
                });
                break 'outer;
            }
        }
    }
    Ok(UniversalityCertificate {
        polymap: u.clone(),
        side: Side::Out,
        index: i,
        bound,
        checked,
        skipped,
        failure,
    })
}

/// Decide in-universality of `n` at input `j`, mirror to
/// [`is_out_universal`].
pub fn is_in_universal(
    p: &FinPolycategory,
    n: &PolyMap,
    j: usize,
) -> Result<UniversalityCertificate, ComposeError> {
    if !p.contains(n) {
        return Err(ComposeError::UnknownPolyMap(n.key()));
    }
    if j >= n.boundary.domain.len() {
        return Err(ComposeError::InputIndexOutOfRange {
            index: j,
            len: n.boundary.domain.len(),
        });
    }
    let bound = p.scope_bound();
    let delta = &n.boundary.codomain;
    let g1 = &n.boundary.domain[..j];
    let a = &n.boundary.domain[j];
    let g2 = &n.boundary.domain[j + 1..];
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut failure = None;

    'outer: for h in p.all_polymaps() {
        let hd = &h.boundary.domain;
        if hd.len() < g1.len() + g2.len()
            || !block_at(hd, g1, 0)
            || !block_at(hd, g2, hd.len() - g2.len())
        {
            continue;
        }
        let gamma = &hd[g1.len()..hd.len() - g2.len()];
        let hc = &h.boundary.codomain;
        if hc.len() < delta.len() {
            continue;
        }
        for offset in 0..=hc.len() - delta.len() {
            if !block_at(hc, delta, offset) {
                continue;
            }
            let d1 = &hc[..offset];
            let d2 = &hc[offset + delta.len()..];
            if !((g1.is_empty() || d1.is_empty()) && (g2.is_empty() || d2.is_empty())) {
                continue;
            }
            // Factorizations live in hom(Γ ; Δ₁,A,Δ₂).
            let mut chi_cod = d1.to_vec();
            chi_cod.push(a.clone());
            chi_cod.extend_from_slice(d2);
            let chi_boundary = Boundary::new(gamma.to_vec(), chi_cod);
            if chi_boundary.width() > bound {
                skipped += 1;
                continue;
            }
            checked += 1;
            let cut = d1.len();
            let matches: Vec<PolyMap> = p
                .hom(&chi_boundary)
                .into_iter()
                .filter(|chi| p.compose(chi, cut, n, j) == Ok(h.clone()))
                .collect();
            if matches.len() != 1 {
                failure = Some(UniversalityFailure {
                    instance: h.clone(),
                    offset,
                    factorizations: matches,
                });
                break 'outer;
            }
        }
    }
    Ok(UniversalityCertificate {
        polymap: n.clone(),
        side: Side::In,
        index: j,
        bound,
        checked,
        skipped,
        failure,
    })
}

/// A universal object found by search: the representing object, the
/// witnessing universal polymap, and its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalObject {
    pub object: ObjectId,
    pub witness: PolyMap,
    pub certificate: UniversalityCertificate,
}

/// Search for a tensor of `gamma`: an object `A` with an out-universal
/// `u : Γ → A` (empty codomain contexts).
pub fn find_tensor(p: &FinPolycategory, gamma: &[ObjectId]) -> Option<UniversalObject> {
    for object in p.objects() {
        let boundary = Boundary::new(gamma.to_vec(), vec![object.clone()]);
        for witness in p.hom(&boundary) {
            let certificate = is_out_universal(p, &witness, 0).expect("witness is in scope");
            if certificate.holds() {
                return Some(UniversalObject {
                    object,
                    witness,
                    certificate,
                });
            }
        }
    }
    None
}

/// Search for a par of `delta`: an object `A` with an in-universal
/// `n : A → Δ` (empty domain contexts).
pub fn find_par(p: &FinPolycategory, delta: &[ObjectId]) -> Option<UniversalObject> {
    for object in p.objects() {
        let boundary = Boundary::new(vec![object.clone()], delta.to_vec());
        for witness in p.hom(&boundary) {
            let certificate = is_in_universal(p, &witness, 0).expect("witness is in scope");
            if certificate.holds() {
                return Some(UniversalObject {
                    object,
                    witness,
                    certificate,
                });
            }
        }
    }
    None
}

/// A dual found by snake search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualObject {
    pub object: ObjectId,
    pub cup: PolyMap,
    pub cap: PolyMap,
    /// Independent cross-check: the cup is also out-universal in the dual
    /// object's slot.  Equivalent in a genuine polycategory; recorded so a
    /// bounded fragment can be caught drifting.
    pub universality_agrees: bool,
}

/// Search for a right dual of `a`: an object `D` with
/// `cup : · → A,D` and `cap : D,A → ·` satisfying both snake identities.
pub fn find_right_dual(p: &FinPolycategory, a: &ObjectId) -> Option<DualObject> {
    let id_a = p.identity(a)?;
    for d in p.objects() {
        let id_d = p.identity(&d)?;
        let cup_b = Boundary::new(vec![], vec![a.clone(), d.clone()]);
        let cap_b = Boundary::new(vec![d.clone(), a.clone()], vec![]);
        for cup in p.hom(&cup_b) {
            for cap in p.hom(&cap_b) {
                let snake_a = p.compose(&cup, 1, &cap, 0) == Ok(id_a.clone());
                let snake_d = p.compose(&cup, 0, &cap, 1) == Ok(id_d.clone());
                if snake_a && snake_d {
                    let universality_agrees = is_out_universal(p, &cup, 1)
                        .map(|c| c.holds())
                        .unwrap_or(false);
                    return Some(DualObject {
                        object: d,
                        cup,
                        cap,
                        universality_agrees,
                    });
                }
            }
        }
    }
    None
}

/// Search for a left dual of `a`: `D` with `cup : · → D,A` and
/// `cap : A,D → ·` satisfying both snake identities.
pub fn find_left_dual(p: &FinPolycategory, a: &ObjectId) -> Option<DualObject> {
    let id_a = p.identity(a)?;
    for d in p.objects() {
        let id_d = p.identity(&d)?;
        let cup_b = Boundary::new(vec![], vec![d.clone(), a.clone()]);
        let cap_b = Boundary::new(vec![a.clone(), d.clone()], vec![]);
        for cup in p.hom(&cup_b) {
            for cap in p.hom(&cap_b) {
                let snake_a = p.compose(&cup, 0, &cap, 1) == Ok(id_a.clone());
                let snake_d = p.compose(&cup, 1, &cap, 0) == Ok(id_d.clone());
                if snake_a && snake_d {
                    let universality_agrees = is_out_universal(p, &cup, 0)
                        .map(|c| c.holds())
                        .unwrap_or(false);
                    return Some(DualObject {
                        object: d,
                        cup,
                        cap,
                        universality_agrees,
                    });
                }
            }
        }
    }
    None
}

/// The five equivalent ways `d` can be a right dual of `a`, each decided
/// independently: a cup universal in the dual slot, a cup universal in the
/// primal slot, a cap universal in the dual slot, a cap universal in the
/// primal slot, and a snake pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualConditions {
    pub cup_universal_in_dual: bool,
    pub cup_universal_in_primal: bool,
    pub cap_universal_in_dual: bool,
    pub cap_universal_in_primal: bool,
    pub snake_pair: bool,
}

impl DualConditions {
    pub fn as_array(&self) -> [bool; 5] {
        [
            self.cup_universal_in_dual,
            self.cup_universal_in_primal,
            self.cap_universal_in_dual,
            self.cap_universal_in_primal,
            self.snake_pair,
        ]
    }

    pub fn all_agree(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&x| x == a[0])
    }
}

/// Decide each of the five right-dual conditions for the pair `(a, d)`.
pub fn prop_dual_conditions(p: &FinPolycategory, a: &ObjectId, d: &ObjectId) -> DualConditions {
    let cup_b = Boundary::new(vec![], vec![a.clone(), d.clone()]);
    let cap_b = Boundary::new(vec![d.clone(), a.clone()], vec![]);
    let cup_universal_in_dual = p
        .hom(&cup_b)
        .iter()
        .any(|cup| is_out_universal(p, cup, 1).map(|c| c.holds()).unwrap_or(false));
    let cup_universal_in_primal = p
        .hom(&cup_b)
        .iter()
        .any(|cup| is_out_universal(p, cup, 0).map(|c| c.holds()).unwrap_or(false));
    let cap_universal_in_dual = p
        .hom(&cap_b)
        .iter()
        .any(|cap| is_in_universal(p, cap, 0).map(|c| c.holds()).unwrap_or(false));
    let cap_universal_in_primal = p
        .hom(&cap_b)
        .iter()
        .any(|cap| is_in_universal(p, cap, 1).map(|c| c.holds()).unwrap_or(false));
    let id_a = p.identity(a);
    let id_d = p.identity(d);
    let snake_pair = match (id_a, id_d) {
        (Some(id_a), Some(id_d)) => p.hom(&cup_b).iter().any(|cup| {
            p.hom(&cap_b).iter().any(|cap| {
                p.compose(cup, 1, cap, 0) == Ok(id_a.clone())
                    && p.compose(cup, 0, cap, 1) == Ok(id_d.clone())
            })
        }),
        _ => false,
    };
    DualConditions {
        cup_universal_in_dual,
        cup_universal_in_primal,
        cap_universal_in_dual,
        cap_universal_in_primal,
        snake_pair,
    }
}

/// A context in which a universal map was sought: `left` and `right`
/// surround the sought representing object on the bound side, `middle` is
/// the free side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextTriple {
    pub side: Side,
    pub left: Vec<ObjectId>,
    pub middle: Vec<ObjectId>,
    pub right: Vec<ObjectId>,
}

impl fmt::Display for ContextTriple {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[ObjectId]| {
            v.iter()
                .map(|o| o.0.as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            out,
            "{}-context ({} | _ | {}) over {}",
            self.side,
            join(&self.left),
            join(&self.right),
            join(&self.middle)
        )
    }
}

/// Birepresentability by exhausting contexts: in every in-scope context
/// triple there must be an object carrying a universal map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirepByContexts {
    pub verdict: bool,
    pub contexts_checked: u64,
    pub witnesses: Vec<(ContextTriple, ObjectId, PolyMap)>,
    pub first_missing: Option<ContextTriple>,
}

/// Birepresentability by generators: all tensors, all pars, and both-sided
/// duals for every object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirepByGenerators {
    pub verdict: bool,
    pub tensors: Vec<(Vec<ObjectId>, UniversalObject)>,
    pub missing_tensor: Option<Vec<ObjectId>>,
    pub pars: Vec<(Vec<ObjectId>, UniversalObject)>,
    pub missing_par: Option<Vec<ObjectId>>,
    pub right_duals: Vec<(ObjectId, DualObject)>,
    pub missing_right_dual: Option<ObjectId>,
    pub left_duals: Vec<(ObjectId, DualObject)>,
    pub missing_left_dual: Option<ObjectId>,
}

/// Both characterizations of birepresentability, decided independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirepDecision {
    pub by_contexts: BirepByContexts,
    pub by_generators: BirepByGenerators,
}

impl BirepDecision {
    pub fn verdict(&self) -> bool {
        self.by_contexts.verdict
    }

    pub fn agree(&self) -> bool {
        self.by_contexts.verdict == self.by_generators.verdict
    }
}

impl fmt::Display for BirepDecision {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            out,
            "by contexts: {} ({} contexts)",
            self.by_contexts.verdict, self.by_contexts.contexts_checked
        )?;
        if let Some(missing) = &self.by_contexts.first_missing {
            writeln!(out, "  first missing: {missing}")?;
        }
        writeln!(out, "by generators: {}", self.by_generators.verdict)?;
        if let Some(g) = &self.by_generators.missing_tensor {
            writeln!(out, "  missing tensor of {g:?}")?;
        }
        if let Some(d) = &self.by_generators.missing_par {
            writeln!(out, "  missing par of {d:?}")?;
        }
        if let Some(a) = &self.by_generators.missing_right_dual {
            writeln!(out, "  missing right dual of {a}")?;
        }
        if let Some(a) = &self.by_generators.missing_left_dual {
            writeln!(out, "  missing left dual of {a}")?;
        }
        writeln!(
            out,
            "characterizations {}",
            if self.agree() { "agree" } else { "DISAGREE" }
        )
    }
}

/// Decide birepresentability both ways.
pub fn decide_birepresentable(p: &FinPolycategory) -> BirepDecision {
    let bound = p.scope_bound();
    let objects = p.objects();

    // Characterization by contexts.
    let mut contexts_checked = 0u64;
    let mut witnesses = Vec::new();
    let mut first_missing = None;
    let context_lists = p.object_lists(bound.saturating_sub(1));
    let middles = p.object_lists(bound);
    'ctx: for left in &context_lists {
        for right in &context_lists {
            if left.len() + 1 + right.len() > bound {
                continue;
            }
            for middle in &middles {
                for side in [Side::Out, Side::In] {
                    contexts_checked += 1;
                    let mut found = None;
                    for object in &objects {
                        let boundary = match side {
                            Side::Out => {
                                let mut cod = left.clone();
                                cod.push(object.clone());
                                cod.extend(right.iter().cloned());
                                Boundary::new(middle.clone(), cod)
                            }
                            Side::In => {
                                let mut dom = left.clone();
                                dom.push(object.clone());
                                dom.extend(right.iter().cloned());
                                Boundary::new(dom, middle.clone())
                            }
                        };
                        for u in p.hom(&boundary) {
                            let cert = match side {
                                Side::Out => is_out_universal(p, &u, left.len()),
                                Side::In => is_in_universal(p, &u, left.len()),
                            }
                            .expect("witness is in scope");
                            if cert.holds() {
                                found = Some((object.clone(), u));
                                break;
                            }
                        }
                        if found.is_some() {
                            break;
                        }
                    }
                    let triple = ContextTriple {
                        side,
                        left: left.clone(),
                        middle: middle.clone(),
                        right: right.clone(),
                    };
                    match found {
                        Some((object, u)) => witnesses.push((triple, object, u)),
                        None => {
                            first_missing = Some(triple);
                            break 'ctx;
                        }
                    }
                }
            }
        }
    }
    let by_contexts = BirepByContexts {
        verdict: first_missing.is_none(),
        contexts_checked,
        witnesses,
        first_missing,
    };

    // Characterization by generators.
    let mut tensors = Vec::new();
    let mut missing_tensor = None;
    let mut pars = Vec::new();
    let mut missing_par = None;
    for list in &middles {
        if missing_tensor.is_none() {
            match find_tensor(p, list) {
                Some(t) => tensors.push((list.clone(), t)),
                None => missing_tensor = Some(list.clone()),
            }
        }
        if missing_par.is_none() {
            match find_par(p, list) {
                Some(t) => pars.push((list.clone(), t)),
                None => missing_par = Some(list.clone()),
            }
        }
    }
    let mut right_duals = Vec::new();
    let mut missing_right_dual = None;
    let mut left_duals = Vec::new();
    let mut missing_left_dual = None;
    for a in &objects {
        if missing_right_dual.is_none() {
            match find_right_dual(p, a) {
                Some(d) => right_duals.push((a.clone(), d)),
                None => missing_right_dual = Some(a.clone()),
            }
        }
        if missing_left_dual.is_none() {
            match find_left_dual(p, a) {
                Some(d) => left_duals.push((a.clone(), d)),
                None => missing_left_dual = Some(a.clone()),
            }
        }
    }
    let by_generators = BirepByGenerators {
        verdict: missing_tensor.is_none()
            && missing_par.is_none()
            && missing_right_dual.is_none()
            && missing_left_dual.is_none(),
        tensors,
        missing_tensor,
        pars,
        missing_par,
        right_duals,
        missing_right_dual,
        left_duals,
        missing_left_dual,
    };

    BirepDecision {
        by_contexts,
        by_generators,
    }
}

/// A composite of two universal polymaps that failed to be universal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionFailure {
    pub first: PolyMap,
    pub second: PolyMap,
    pub composite: PolyMap,
    pub expected_index: usize,
    pub side: Side,
}

/// Report of the closure of universal polymaps under composition: every
/// planar in-bound composite of an in-universal map into another along its
/// universal input must be in-universal at the inherited position, and
/// dually for out-universal maps cut along the universal output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivCompositionReport {
    pub in_pairs_checked: u64,
    pub out_pairs_checked: u64,
    pub skipped: u64,
    pub failures: Vec<CompositionFailure>,
}

impl UnivCompositionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for UnivCompositionReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            out,
            "universal composition closure: {} in-pairs, {} out-pairs, {} skipped, {} failures",
            self.in_pairs_checked,
            self.out_pairs_checked,
            self.skipped,
            self.failures.len()
        )
    }
}

/// Check that universal polymaps compose to universal polymaps.
pub fn universal_composition_check(p: &FinPolycategory) -> UnivCompositionReport {
    let maps = p.all_polymaps();
    let mut in_cache: BTreeMap<(PolyMap, usize), bool> = BTreeMap::new();
    let mut out_cache: BTreeMap<(PolyMap, usize), bool> = BTreeMap::new();
    let mut in_univ = |p: &FinPolycategory, m: &PolyMap, j: usize| -> bool {
        if let Some(&v) = in_cache.get(&(m.clone(), j)) {
            return v;
        }
        let v = is_in_universal(p, m, j).map(|c| c.holds()).unwrap_or(false);
        in_cache.insert((m.clone(), j), v);
        v
    };
    let mut out_univ = |p: &FinPolycategory, m: &PolyMap, i: usize| -> bool {
        if let Some(&v) = out_cache.get(&(m.clone(), i)) {
            return v;
        }
        let v = is_out_universal(p, m, i).map(|c| c.holds()).unwrap_or(false);
        out_cache.insert((m.clone(), i), v);
        v
    };

    let mut in_pairs_checked = 0u64;
    let mut out_pairs_checked = 0u64;
    let mut skipped = 0u64;
    let mut failures = Vec::new();

    // In-universal u at input j_u, some output i of u feeding v at v's
    // universal input j_v: the composite is in-universal at j_v + j_u.
    for u in &maps {
        for j_u in 0..u.boundary.domain.len() {
            if !in_univ(p, u, j_u) {
                continue;
            }
            for i in 0..u.boundary.codomain.len() {
                for v in &maps {
                    for j_v in 0..v.boundary.domain.len() {
                        if v.boundary.domain[j_v] != u.boundary.codomain[i] {
                            continue;
                        }
                        if !in_univ(p, v, j_v) {
                            continue;
                        }
                        match p.compose(u, i, v, j_v) {
                            Ok(c) => {
                                in_pairs_checked += 1;
                                let at = j_v + j_u;
                                if !in_univ(p, &c, at) {
                                    failures.push(CompositionFailure {
                                        first: u.clone(),
                                        second: v.clone(),
                                        composite: c,
                                        expected_index: at,
                                        side: Side::In,
                                    });
                                }
                            }
                            Err(ComposeError::OutOfBound { .. }) => skipped += 1,
                            Err(_) => {}
                        }
                    }
                }
            }
        }
    }

    // Out-universal u at output i_u feeding any input j of an out-universal
    // v (at i_v): the composite is out-universal at i_u + i_v.
    for u in &maps {
        for i_u in 0..u.boundary.codomain.len() {
            if !out_univ(p, u, i_u) {
                continue;
            }
            for v in &maps {
                for i_v in 0..v.boundary.codomain.len() {
                    if !out_univ(p, v, i_v) {
                        continue;
                    }
                    for j in 0..v.boundary.domain.len() {
                        if v.boundary.domain[j] != u.boundary.codomain[i_u] {
                            continue;
                        }
                        match p.compose(u, i_u, v, j) {
                            Ok(c) => {
                                out_pairs_checked += 1;
                                let at = i_u + i_v;
                                if !out_univ(p, &c, at) {
                                    failures.push(CompositionFailure {
                                        first: u.clone(),
                                        second: v.clone(),
                                        composite: c,
                                        expected_index: at,
                                        side: Side::Out,
                                    });
                                }
                            }
                            Err(ComposeError::OutOfBound { .. }) => skipped += 1,
                            Err(_) => {}
                        }
                    }
                }
            }
        }
    }

    UnivCompositionReport {
        in_pairs_checked,
        out_pairs_checked,
        skipped,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{FinPolycategory, MonoidPolycategory, ObjectId, PolyMap};

    fn star() -> ObjectId {
        ObjectId::new("*")
    }

    fn shape(m: usize, n: usize) -> Boundary {
        Boundary::new(vec![star(); m], vec![star(); n])
    }

    #[test]
    fn boolean_unit_is_universal_zero_is_not() {
        let p = FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3));
        let one = PolyMap::new("1", shape(2, 1));
        let zero = PolyMap::new("0", shape(2, 1));
        assert!(is_out_universal(&p, &one, 0).unwrap().holds());
        let cert = is_out_universal(&p, &zero, 0).unwrap();
        assert!(!cert.holds());
        // The failure names an instance with the wrong number of
        // factorizations: x ∧ 0 = 1 has none.
        let f = cert.failure.unwrap();
        assert_ne!(f.factorizations.len(), 1);
    }

    #[test]
    fn group_elements_are_all_universal() {
        let p = FinPolycategory::Monoid(MonoidPolycategory::cyclic(3, 3));
        for m in p.all_polymaps() {
            for i in 0..m.boundary.codomain.len() {
                assert!(is_out_universal(&p, &m, i).unwrap().holds(), "{m}");
            }
            for j in 0..m.boundary.domain.len() {
                assert!(is_in_universal(&p, &m, j).unwrap().holds(), "{m}");
            }
        }
    }

    #[test]
    fn tensors_exist_in_boolean_monoid() {
        let p = FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3));
        let t = find_tensor(&p, &[star(), star()]).unwrap();
        assert_eq!(t.object, star());
        // The unit is the first universal witness in element order.
        assert_eq!(t.witness.id, "1");
        let par = find_par(&p, &[star(), star()]).unwrap();
        assert_eq!(par.witness.id, "1");
    }

    #[test]
    fn self_duality_of_commutative_monoids() {
        for p in [
            FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3)),
            FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3)),
        ] {
            let d = find_right_dual(&p, &star()).unwrap();
            assert_eq!(d.object, star());
            assert!(d.universality_agrees);
            assert_eq!(d.cup.id, d.cap.id);
            let l = find_left_dual(&p, &star()).unwrap();
            assert_eq!(l.object, star());
        }
    }

    #[test]
    fn dual_conditions_agree_on_monoids() {
        for p in [
            FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3)),
            FinPolycategory::Monoid(MonoidPolycategory::cyclic(3, 3)),
        ] {
            let c = prop_dual_conditions(&p, &star(), &star());
            assert!(c.all_agree(), "{c:?}");
            assert!(c.snake_pair);
        }
    }

    #[test]
    fn birepresentability_of_small_monoids() {
        for p in [
            FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3)),
            FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3)),
        ] {
            let d = decide_birepresentable(&p);
            assert!(d.agree(), "{d}");
            assert!(d.verdict(), "{d}");
        }
    }

    #[test]
    fn universal_composition_closure_on_a_group() {
        let p = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3));
        let r = universal_composition_check(&p);
        assert!(r.passed(), "{r}");
        assert!(r.in_pairs_checked > 0);
        assert!(r.out_pairs_checked > 0);
    }
}
