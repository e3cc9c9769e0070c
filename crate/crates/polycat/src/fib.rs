//! Functors as fibrations: cartesian polymaps, pull/push lifting,
//! Frobenius structures, polyfibers, and pullbacks along refinements.
//!
//! Everything here is decided over the finite scope of the polycategories
//! involved.  A cartesian certificate quantifies over all in-scope lifting
//! instances exactly the way a universality certificate quantifies over
//! factorization instances; over the collapse to the terminal polycategory
//! the two instance sets coincide, which [`birep_bifib_crosscheck`]
//! exploits as a whole-machinery consistency test.

use crate::core::{
    Boundary, ComposeError, Composite, FinPolycategory, FunctorError, ObjectId, PolyFunctor,
    PolyMap, TableError, TablePolycategory,
};
use crate::universal::{decide_birepresentable, is_in_universal, is_out_universal, BirepDecision, Side};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Report on identity and composition preservation of a functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorReport {
    pub identities_checked: u64,
    pub composites_checked: u64,
    /// Source composites whose image composite would leave the target
    /// scope (only possible when the target bound is smaller).
    pub skipped: u64,
    pub identity_failures: Vec<ObjectId>,
    pub composite_failures: Vec<(PolyMap, usize, PolyMap, usize)>,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.identity_failures.is_empty() && self.composite_failures.is_empty()
    }
}

impl fmt::Display for FunctorReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "functor check: {} identities, {} composites, {} skipped: {}",
            self.identities_checked,
            self.composites_checked,
            self.skipped,
            if self.passed() {
                "preserved".to_string()
            } else {
                format!(
                    "{} identity failures, {} composite failures",
                    self.identity_failures.len(),
                    self.composite_failures.len()
                )
            }
        )
    }
}

/// Check that a functor preserves identities and all in-scope composites.
pub fn check_functor(f: &PolyFunctor) -> FunctorReport {
    let mut report = FunctorReport {
        identities_checked: 0,
        composites_checked: 0,
        skipped: 0,
        identity_failures: Vec::new(),
        composite_failures: Vec::new(),
    };
    for o in f.source.objects() {
        let id = f.source.identity(&o).expect("source has identities");
        report.identities_checked += 1;
        if f.target.identity(&f.apply_object(&o)).as_ref() != Some(&f.apply(&id)) {
            report.identity_failures.push(o.clone());
        }
    }
    let maps = f.source.all_polymaps();
    for u in &maps {
        for i in 0..u.boundary.codomain.len() {
            for v in &maps {
                for j in 0..v.boundary.domain.len() {
                    let c = match f.source.compose(u, i, v, j) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    match f.target.compose(&f.apply(u), i, &f.apply(v), j) {
                        Ok(image) => {
                            report.composites_checked += 1;
                            if image != f.apply(&c) {
                                report.composite_failures.push((u.clone(), i, v.clone(), j));
                            }
                        }
                        Err(ComposeError::OutOfBound { .. }) => report.skipped += 1,
                        Err(_) => report.composite_failures.push((u.clone(), i, v.clone(), j)),
                    }
                }
            }
        }
    }
    report
}

/// A lifting defect: an instance with no unique lift over the given base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianFailure {
    pub instance: PolyMap,
    pub offset: usize,
    pub base: PolyMap,
    pub lifts: Vec<PolyMap>,
}

/// Outcome of checking one polymap for cartesianness at one position over
/// a functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianCertificate {
    pub polymap: PolyMap,
    pub side: Side,
    pub index: usize,
    pub bound: usize,
    pub checked: u64,
    pub skipped: u64,
    pub failure: Option<CartesianFailure>,
}

impl CartesianCertificate {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CartesianCertificate {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{} {}-cartesian at {} (bound {}): {} instances, {} skipped",
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
                "; fails at {} over {} (offset {}): {} lifts",
                f.instance.key(),
                f.base.key(),
                f.offset,
                f.lifts.len()
            ),
        }
    }
}

fn block_at(list: &[ObjectId], block: &[ObjectId], offset: usize) -> bool {
    list[offset..offset + block.len()] == *block
}

/// Decide in-cartesianness of `psi` at input `j` over the functor `p`:
/// every in-scope `ξ` sharing `psi`'s outer input contexts and containing
/// its codomain, together with every base factorization of `p(ξ)` through
/// `p(psi)`, must admit exactly one lift closing the triangle.
pub fn is_in_cartesian(
    p: &PolyFunctor,
    psi: &PolyMap,
    j: usize,
) -> Result<CartesianCertificate, ComposeError> {
    if !p.source.contains(psi) {
        return Err(ComposeError::UnknownPolyMap(psi.key()));
    }
    if j >= psi.boundary.domain.len() {
        return Err(ComposeError::InputIndexOutOfRange {
            index: j,
            len: psi.boundary.domain.len(),
        });
    }
    let bound = p.source.scope_bound();
    let base_psi = p.apply(psi);
    let delta = &psi.boundary.codomain;
    let g1 = &psi.boundary.domain[..j];
    let a = &psi.boundary.domain[j];
    let g2 = &psi.boundary.domain[j + 1..];
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut failure = None;

    'outer: for xi in p.source.all_polymaps() {
        let xd = &xi.boundary.domain;
        if xd.len() < g1.len() + g2.len()
            || !block_at(xd, g1, 0)
            || !block_at(xd, g2, xd.len() - g2.len())
        {
            continue;
        }
        let theta = &xd[g1.len()..xd.len() - g2.len()];
        let xc = &xi.boundary.codomain;
        if xc.len() < delta.len() {
            continue;
        }
        for offset in 0..=xc.len() - delta.len() {
            if !block_at(xc, delta, offset) {
                continue;
            }
            let l1 = &xc[..offset];
            let l2 = &xc[offset + delta.len()..];
            if !((g1.is_empty() || l1.is_empty()) && (g2.is_empty() || l2.is_empty())) {
                continue;
            }
            // Lifts live in hom(Θ ; Λ₁,A,Λ₂), over bases in the image hom.
            let mut chi_cod = l1.to_vec();
            chi_cod.push(a.clone());
            chi_cod.extend_from_slice(l2);
            let chi_boundary = Boundary::new(theta.to_vec(), chi_cod);
            if chi_boundary.width() > bound {
                skipped += 1;
                continue;
            }
            let base_xi = p.apply(&xi);
            let base_boundary = p.apply_boundary(&chi_boundary);
            for base in p.target.hom(&base_boundary) {
                match p.target.compose(&base, offset, &base_psi, j) {
                    Ok(c) if c == base_xi => {}
                    Ok(_) => continue,
                    Err(ComposeError::OutOfBound { .. }) => {
                        skipped += 1;
                        continue;
                    }
                    Err(_) => continue,
                }
                checked += 1;
                let lifts: Vec<PolyMap> = p
                    .source
                    .hom(&chi_boundary)
                    .into_iter()
                    .filter(|chi| {
                        p.apply(chi) == base
                            && p.source.compose(chi, offset, psi, j) == Ok(xi.clone())
                    })
                    .collect();
                if lifts.len() != 1 {
                    failure = Some(CartesianFailure {
                        instance: xi.clone(),
                        offset,
                        base,
                        lifts,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(CartesianCertificate {
        polymap: psi.clone(),
        side: Side::In,
        index: j,
        bound,
        checked,
        skipped,
        failure,
    })
}

/// Decide out-cartesianness of `psi` at output `i` over `p`, mirror to
/// [`is_in_cartesian`].
pub fn is_out_cartesian(
    p: &PolyFunctor,
    psi: &PolyMap,
    i: usize,
) -> Result<CartesianCertificate, ComposeError> {
    if !p.source.contains(psi) {
        return Err(ComposeError::UnknownPolyMap(psi.key()));
    }
    if i >= psi.boundary.codomain.len() {
        return Err(ComposeError::OutputIndexOutOfRange {
            index: i,
            len: psi.boundary.codomain.len(),
        });
    }
    let bound = p.source.scope_bound();
    let base_psi = p.apply(psi);
    let gamma = &psi.boundary.domain;
    let d1 = &psi.boundary.codomain[..i];
    let a = &psi.boundary.codomain[i];
    let d2 = &psi.boundary.codomain[i + 1..];
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut failure = None;

    'outer: for xi in p.source.all_polymaps() {
        let xc = &xi.boundary.codomain;
        if xc.len() < d1.len() + d2.len()
            || !block_at(xc, d1, 0)
            || !block_at(xc, d2, xc.len() - d2.len())
        {
            continue;
        }
        let lambda = &xc[d1.len()..xc.len() - d2.len()];
        let xd = &xi.boundary.domain;
        if xd.len() < gamma.len() {
            continue;
        }
        for offset in 0..=xd.len() - gamma.len() {
            if !block_at(xd, gamma, offset) {
                continue;
            }
            let t1 = &xd[..offset];
            let t2 = &xd[offset + gamma.len()..];
            if !((t1.is_empty() || d1.is_empty()) && (t2.is_empty() || d2.is_empty())) {
                continue;
            }
            // Lifts live in hom(Θ₁,A,Θ₂ ; Λ), over bases in the image hom.
            let mut chi_dom = t1.to_vec();
            chi_dom.push(a.clone());
            chi_dom.extend_from_slice(t2);
            let chi_boundary = Boundary::new(chi_dom, lambda.to_vec());
            if chi_boundary.width() > bound {
                skipped += 1;
                continue;
            }
            let base_xi = p.apply(&xi);
            let base_boundary = p.apply_boundary(&chi_boundary);
            for base in p.target.hom(&base_boundary) {
                match p.target.compose(&base_psi, i, &base, offset) {
                    Ok(c) if c == base_xi => {}
                    Ok(_) => continue,
                    Err(ComposeError::OutOfBound { .. }) => {
                        skipped += 1;
                        continue;
                    }
                    Err(_) => continue,
                }
                checked += 1;
                let lifts: Vec<PolyMap> = p
                    .source
                    .hom(&chi_boundary)
                    .into_iter()
                    .filter(|chi| {
                        p.apply(chi) == base
                            && p.source.compose(psi, i, chi, offset) == Ok(xi.clone())
                    })
                    .collect();
                if lifts.len() != 1 {
                    failure = Some(CartesianFailure {
                        instance: xi.clone(),
                        offset,
                        base,
                        lifts,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(CartesianCertificate {
        polymap: psi.clone(),
        side: Side::Out,
        index: i,
        bound,
        checked,
        skipped,
        failure,
    })
}

/// A lifting problem: a base polymap with a marked position and a choice
/// of source objects over everything except the marked object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftProblem {
    pub side: Side,
    pub base: PolyMap,
    pub index: usize,
    /// Source objects over the base domain (for `Side::In`, with a hole at
    /// `index`) respectively over the base codomain (for `Side::Out`,
    /// with a hole at `index`).
    pub bound_side: Vec<ObjectId>,
    /// Source objects over the other side of the base boundary.
    pub free_side: Vec<ObjectId>,
}

impl fmt::Display for LiftProblem {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[ObjectId]| {
            v.iter()
                .map(|o| o.0.as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            out,
            "{}-lift of {} at {} under ({}) with hole, over ({})",
            self.side,
            self.base.key(),
            self.index,
            join(&self.bound_side),
            join(&self.free_side)
        )
    }
}

/// A solution to a lifting problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianLift {
    pub object: ObjectId,
    pub witness: PolyMap,
    pub certificate: CartesianCertificate,
}

fn fibre(p: &PolyFunctor, base_object: &ObjectId) -> Vec<ObjectId> {
    p.source
        .objects()
        .into_iter()
        .filter(|o| p.apply_object(o) == *base_object)
        .collect()
}

fn lists_over(p: &PolyFunctor, base_list: &[ObjectId]) -> Vec<Vec<ObjectId>> {
    let mut lists = vec![Vec::new()];
    for b in base_list {
        let choices = fibre(p, b);
        let mut next = Vec::with_capacity(lists.len() * choices.len());
        for prefix in &lists {
            for c in &choices {
                let mut l = prefix.clone();
                l.push(c.clone());
                next.push(l);
            }
        }
        lists = next;
    }
    lists
}

/// Search for an in-cartesian lift of `base` at input `index`, with chosen
/// source objects `dom_rest` over the base domain minus the marked input
/// and `cod` over the base codomain.
pub fn pullback_exists(
    p: &PolyFunctor,
    base: &PolyMap,
    index: usize,
    dom_rest: &[ObjectId],
    cod: &[ObjectId],
) -> Option<CartesianLift> {
    for object in fibre(p, &base.boundary.domain[index]) {
        let mut dom = dom_rest[..index].to_vec();
        dom.push(object.clone());
        dom.extend_from_slice(&dom_rest[index..]);
        let boundary = Boundary::new(dom, cod.to_vec());
        for witness in p.source.hom(&boundary) {
            if p.apply(&witness) != *base {
                continue;
            }
            let certificate = is_in_cartesian(p, &witness, index).expect("witness is in scope");
            if certificate.holds() {
                return Some(CartesianLift {
                    object,
                    witness,
                    certificate,
                });
            }
        }
    }
    None
}

/// Search for an out-cartesian lift of `base` at output `index`, with
/// chosen source objects `cod_rest` over the base codomain minus the
/// marked output and `dom` over the base domain.
pub fn pushforward_exists(
    p: &PolyFunctor,
    base: &PolyMap,
    index: usize,
    cod_rest: &[ObjectId],
    dom: &[ObjectId],
) -> Option<CartesianLift> {
    for object in fibre(p, &base.boundary.codomain[index]) {
        let mut cod = cod_rest[..index].to_vec();
        cod.push(object.clone());
        cod.extend_from_slice(&cod_rest[index..]);
        let boundary = Boundary::new(dom.to_vec(), cod);
        for witness in p.source.hom(&boundary) {
            if p.apply(&witness) != *base {
                continue;
            }
            let certificate = is_out_cartesian(p, &witness, index).expect("witness is in scope");
            if certificate.holds() {
                return Some(CartesianLift {
                    object,
                    witness,
                    certificate,
                });
            }
        }
    }
    None
}

/// Whether every lifting problem on one side has a cartesian solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationDecision {
    pub side: Side,
    pub verdict: bool,
    pub problems_checked: u64,
    pub witnesses: Vec<(LiftProblem, ObjectId, PolyMap)>,
    pub first_missing: Option<LiftProblem>,
}

impl fmt::Display for FibrationDecision {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{}-fibration: {} ({} problems)",
            self.side, self.verdict, self.problems_checked
        )?;
        if let Some(m) = &self.first_missing {
            write!(out, "; first missing {m}")?;
        }
        Ok(())
    }
}

fn decide_fibration(p: &PolyFunctor, side: Side) -> FibrationDecision {
    let mut problems_checked = 0u64;
    let mut witnesses = Vec::new();
    let mut first_missing = None;
    'all: for base in p.target.all_polymaps() {
        let (marked, other) = match side {
            Side::In => (&base.boundary.domain, &base.boundary.codomain),
            Side::Out => (&base.boundary.codomain, &base.boundary.domain),
        };
        for index in 0..marked.len() {
            let mut rest = marked.clone();
            rest.remove(index);
            for bound_side in lists_over(p, &rest) {
                for free_side in lists_over(p, other) {
                    problems_checked += 1;
                    let solution = match side {
                        Side::In => pullback_exists(p, &base, index, &bound_side, &free_side),
                        Side::Out => pushforward_exists(p, &base, index, &bound_side, &free_side),
                    };
                    let problem = LiftProblem {
                        side,
                        base: base.clone(),
                        index,
                        bound_side: bound_side.clone(),
                        free_side: free_side.clone(),
                    };
                    match solution {
                        Some(lift) => witnesses.push((problem, lift.object, lift.witness)),
                        None => {
                            first_missing = Some(problem);
                            break 'all;
                        }
                    }
                }
            }
        }
    }
    FibrationDecision {
        side,
        verdict: first_missing.is_none(),
        problems_checked,
        witnesses,
        first_missing,
    }
}

/// Decide whether `p` has in-cartesian lifts for every in-lifting problem.
pub fn decide_pull_fibration(p: &PolyFunctor) -> FibrationDecision {
    decide_fibration(p, Side::In)
}

/// Decide whether `p` has out-cartesian lifts for every out-lifting
/// problem.
pub fn decide_push_fibration(p: &PolyFunctor) -> FibrationDecision {
    decide_fibration(p, Side::Out)
}

/// Both fibration decisions together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BifibrationDecision {
    pub pull: FibrationDecision,
    pub push: FibrationDecision,
}

impl BifibrationDecision {
    pub fn verdict(&self) -> bool {
        self.pull.verdict && self.push.verdict
    }
}

impl fmt::Display for BifibrationDecision {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "{}", self.pull)?;
        writeln!(out, "{}", self.push)?;
        writeln!(out, "bifibration: {}", self.verdict())
    }
}

pub fn decide_bifibration(p: &PolyFunctor) -> BifibrationDecision {
    BifibrationDecision {
        pull: decide_pull_fibration(p),
        push: decide_push_fibration(p),
    }
}

/// Agreement report between birepresentability of a polycategory and the
/// bifibration property of its collapse to the terminal polycategory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub birep: BirepDecision,
    pub bifib: BifibrationDecision,
    pub verdicts_agree: bool,
    /// Positions at which the universality and cartesianness certificates
    /// were compared instance-for-instance.
    pub positions_compared: u64,
    pub certificate_mismatches: Vec<(PolyMap, Side, usize)>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.verdicts_agree && self.certificate_mismatches.is_empty()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.birep)?;
        write!(out, "{}", self.bifib)?;
        writeln!(
            out,
            "verdicts {}; {} positions compared, {} certificate mismatches",
            if self.verdicts_agree { "agree" } else { "DISAGREE" },
            self.positions_compared,
            self.certificate_mismatches.len()
        )
    }
}

/// Decide birepresentability of `e` and the bifibration property of its
/// collapse to the terminal polycategory independently, then compare the
/// verdicts and, position by position, the certificates themselves.
pub fn birep_bifib_crosscheck(e: &FinPolycategory) -> CrosscheckReport {
    let birep = decide_birepresentable(e);
    let collapse = crate::core::unique_functor_to_terminal(e);
    let bifib = decide_bifibration(&collapse);
    let verdicts_agree = birep.verdict() == bifib.verdict();

    let mut positions_compared = 0u64;
    let mut certificate_mismatches = Vec::new();
    for m in e.all_polymaps() {
        for j in 0..m.boundary.domain.len() {
            positions_compared += 1;
            let univ = is_in_universal(e, &m, j).expect("map is in scope");
            let cart = is_in_cartesian(&collapse, &m, j).expect("map is in scope");
            if (univ.holds(), univ.checked, univ.skipped)
                != (cart.holds(), cart.checked, cart.skipped)
            {
                certificate_mismatches.push((m.clone(), Side::In, j));
            }
        }
        for i in 0..m.boundary.codomain.len() {
            positions_compared += 1;
            let univ = is_out_universal(e, &m, i).expect("map is in scope");
            let cart = is_out_cartesian(&collapse, &m, i).expect("map is in scope");
            if (univ.holds(), univ.checked, univ.skipped)
                != (cart.holds(), cart.checked, cart.skipped)
            {
                certificate_mismatches.push((m.clone(), Side::Out, i));
            }
        }
    }

    CrosscheckReport {
        birep,
        bifib,
        verdicts_agree,
        positions_compared,
        certificate_mismatches,
    }
}

/// A composite of two cartesian polymaps that failed to be cartesian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartCompositionFailure {
    pub first: PolyMap,
    pub second: PolyMap,
    pub composite: PolyMap,
    pub expected_index: usize,
    pub side: Side,
}

/// Report of the closure of cartesian polymaps under composition along
/// their marked positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartCompositionReport {
    pub in_pairs_checked: u64,
    pub out_pairs_checked: u64,
    pub skipped: u64,
    pub failures: Vec<CartCompositionFailure>,
}

impl CartCompositionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CartCompositionReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            out,
            "cartesian composition closure: {} in-pairs, {} out-pairs, {} skipped, {} failures",
            self.in_pairs_checked,
            self.out_pairs_checked,
            self.skipped,
            self.failures.len()
        )
    }
}

/// Check that cartesian polymaps compose to cartesian polymaps: an
/// in-cartesian map fed into another's marked input stays in-cartesian at
/// the inherited position, and dually on outputs.
pub fn cartesian_composition_check(p: &PolyFunctor) -> CartCompositionReport {
    let maps = p.source.all_polymaps();
    let mut in_cache: BTreeMap<(PolyMap, usize), bool> = BTreeMap::new();
    let mut out_cache: BTreeMap<(PolyMap, usize), bool> = BTreeMap::new();
    let mut in_cart = |p: &PolyFunctor, m: &PolyMap, j: usize| -> bool {
        if let Some(&v) = in_cache.get(&(m.clone(), j)) {
            return v;
        }
        let v = is_in_cartesian(p, m, j).map(|c| c.holds()).unwrap_or(false);
        in_cache.insert((m.clone(), j), v);
        v
    };
    let mut out_cart = |p: &PolyFunctor, m: &PolyMap, i: usize| -> bool {
        if let Some(&v) = out_cache.get(&(m.clone(), i)) {
            return v;
        }
        let v = is_out_cartesian(p, m, i).map(|c| c.holds()).unwrap_or(false);
        out_cache.insert((m.clone(), i), v);
        v
    };

    let mut in_pairs_checked = 0u64;
    let mut out_pairs_checked = 0u64;
    let mut skipped = 0u64;
    let mut failures = Vec::new();

    for u in &maps {
        for j_u in 0..u.boundary.domain.len() {
            if !in_cart(p, u, j_u) {
                continue;
            }
            for i in 0..u.boundary.codomain.len() {
                for v in &maps {
                    for j_v in 0..v.boundary.domain.len() {
                        if v.boundary.domain[j_v] != u.boundary.codomain[i] {
                            continue;
                        }
                        if !in_cart(p, v, j_v) {
                            continue;
                        }
                        match p.source.compose(u, i, v, j_v) {
                            Ok(c) => {
                                in_pairs_checked += 1;
                                let at = j_v + j_u;
                                if !in_cart(p, &c, at) {
                                    failures.push(CartCompositionFailure {
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

    for u in &maps {
        for i_u in 0..u.boundary.codomain.len() {
            if !out_cart(p, u, i_u) {
                continue;
            }
            for v in &maps {
                for i_v in 0..v.boundary.codomain.len() {
                    if !out_cart(p, v, i_v) {
                        continue;
                    }
                    for j in 0..v.boundary.domain.len() {
                        if v.boundary.domain[j] != u.boundary.codomain[i_u] {
                            continue;
                        }
                        match p.source.compose(u, i_u, v, j) {
                            Ok(c) => {
                                out_pairs_checked += 1;
                                let at = i_u + i_v;
                                if !out_cart(p, &c, at) {
                                    failures.push(CartCompositionFailure {
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

    CartCompositionReport {
        in_pairs_checked,
        out_pairs_checked,
        skipped,
        failures,
    }
}

/// Report of cartesianness over two stacked functors versus their
/// composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackedCartesianReport {
    pub positions_checked: u64,
    pub failures: Vec<(PolyMap, Side, usize)>,
}

impl StackedCartesianReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For stacked functors `p : E → B` and `q : B → C`, a polymap cartesian
/// over `p` whose image is cartesian over `q` must be cartesian over the
/// composite `q ∘ p`; check that at every position of every polymap.
pub fn cartesian_over_cartesian_check(
    p: &PolyFunctor,
    q: &PolyFunctor,
) -> Result<StackedCartesianReport, FunctorError> {
    let composed = q.after(p)?;
    let mut positions_checked = 0u64;
    let mut failures = Vec::new();
    for m in p.source.all_polymaps() {
        let image = p.apply(&m);
        for j in 0..m.boundary.domain.len() {
            let over_p = is_in_cartesian(p, &m, j).expect("map is in scope");
            let over_q = is_in_cartesian(q, &image, j).expect("image is in scope");
            if over_p.holds() && over_q.holds() {
                positions_checked += 1;
                let over_qp = is_in_cartesian(&composed, &m, j).expect("map is in scope");
                if !over_qp.holds() {
                    failures.push((m.clone(), Side::In, j));
                }
            }
        }
        for i in 0..m.boundary.codomain.len() {
            let over_p = is_out_cartesian(p, &m, i).expect("map is in scope");
            let over_q = is_out_cartesian(q, &image, i).expect("image is in scope");
            if over_p.holds() && over_q.holds() {
                positions_checked += 1;
                let over_qp = is_out_cartesian(&composed, &m, i).expect("map is in scope");
                if !over_qp.holds() {
                    failures.push((m.clone(), Side::Out, i));
                }
            }
        }
    }
    Ok(StackedCartesianReport {
        positions_checked,
        failures,
    })
}

/// A Frobenius structure on one object: a polymap for every arity shape
/// within the bound, with the identity at shape `(1,1)`, closed under all
/// planar in-bound compositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusFamily {
    pub object: ObjectId,
    pub maps: BTreeMap<(usize, usize), PolyMap>,
}

impl fmt::Display for FrobeniusFamily {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "frobenius on {}:", self.object)?;
        for ((m, n), map) in &self.maps {
            write!(out, " ({m},{n})={}", map.id)?;
        }
        Ok(())
    }
}

/// Result of checking a family for the Frobenius closure conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub shapes_present: u64,
    pub composites_checked: u64,
    pub missing_shapes: Vec<(usize, usize)>,
    pub identity_ok: bool,
    pub closure_failures: Vec<((usize, usize), usize, (usize, usize), usize)>,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.missing_shapes.is_empty() && self.identity_ok && self.closure_failures.is_empty()
    }
}

fn frobenius_shapes(bound: usize) -> Vec<(usize, usize)> {
    let mut shapes = Vec::new();
    for m in 0..=bound {
        for n in 0..=bound {
            shapes.push((m, n));
        }
    }
    shapes.sort_by_key(|&(m, n)| (m + n, m));
    shapes
}

/// Check a Frobenius family directly against its defining conditions.
pub fn check_frobenius_family(p: &FinPolycategory, family: &FrobeniusFamily) -> FrobeniusReport {
    let bound = p.scope_bound();
    let mut report = FrobeniusReport {
        shapes_present: 0,
        composites_checked: 0,
        missing_shapes: Vec::new(),
        identity_ok: true,
        closure_failures: Vec::new(),
    };
    for shape in frobenius_shapes(bound) {
        if family.maps.contains_key(&shape) {
            report.shapes_present += 1;
        } else {
            report.missing_shapes.push(shape);
        }
    }
    report.identity_ok = family.maps.get(&(1, 1)) == p.identity(&family.object).as_ref();
    for (&(m, n), f) in &family.maps {
        for (&(m2, n2), g) in &family.maps {
            for i in 0..n {
                for j in 0..m2 {
                    match p.compose(f, i, g, j) {
                        Ok(c) => {
                            report.composites_checked += 1;
                            let target = (m + m2 - 1, n + n2 - 1);
                            if family.maps.get(&target) != Some(&c) {
                                report.closure_failures.push(((m, n), i, (m2, n2), j));
                            }
                        }
                        Err(_) => continue,
                    }
                }
            }
        }
    }
    report
}

/// Enumerate every Frobenius family on `object` by backtracking over the
/// shapes in canonical order with closure propagation after each choice.
pub fn frobenius_monoids(p: &FinPolycategory, object: &ObjectId) -> Vec<FrobeniusFamily> {
    let bound = p.scope_bound();
    let shapes = frobenius_shapes(bound);
    let id = match p.identity(object) {
        Some(id) => id,
        None => return Vec::new(),
    };
    let hom_at = |m: usize, n: usize| -> Vec<PolyMap> {
        p.hom(&Boundary::new(
            vec![object.clone(); m],
            vec![object.clone(); n],
        ))
    };

    // Propagate closure from the given assignment; None on conflict.
    fn propagate(
        p: &FinPolycategory,
        assignment: &mut BTreeMap<(usize, usize), PolyMap>,
    ) -> bool {
        loop {
            let mut grew = false;
            let current: Vec<((usize, usize), PolyMap)> =
                assignment.iter().map(|(k, v)| (*k, v.clone())).collect();
            for ((m, n), f) in &current {
                for ((m2, n2), g) in &current {
                    for i in 0..*n {
                        for j in 0..*m2 {
                            let c = match p.compose(f, i, g, j) {
                                Ok(c) => c,
                                Err(_) => continue,
                            };
                            let target = (m + m2 - 1, n + n2 - 1);
                            match assignment.get(&target) {
                                Some(existing) => {
                                    if *existing != c {
                                        return false;
                                    }
                                }
                                None => {
                                    assignment.insert(target, c);
                                    grew = true;
                                }
                            }
                        }
                    }
                }
            }
            if !grew {
                return true;
            }
        }
    }

    fn search(
        p: &FinPolycategory,
        shapes: &[(usize, usize)],
        hom_at: &dyn Fn(usize, usize) -> Vec<PolyMap>,
        assignment: BTreeMap<(usize, usize), PolyMap>,
        out: &mut Vec<BTreeMap<(usize, usize), PolyMap>>,
    ) {
        let next = shapes.iter().find(|s| !assignment.contains_key(s));
        let (m, n) = match next {
            Some(&s) => s,
            None => {
                out.push(assignment);
                return;
            }
        };
        for candidate in hom_at(m, n) {
            let mut trial = assignment.clone();
            trial.insert((m, n), candidate);
            if propagate(p, &mut trial) {
                search(p, shapes, hom_at, trial, out);
            }
        }
    }

    let mut seed = BTreeMap::new();
    seed.insert((1, 1), id);
    if !propagate(p, &mut seed) {
        return Vec::new();
    }
    let mut raw = Vec::new();
    search(p, &shapes, &hom_at, seed, &mut raw);

    let mut families: Vec<FrobeniusFamily> = raw
        .into_iter()
        .map(|maps| FrobeniusFamily {
            object: object.clone(),
            maps,
        })
        .filter(|f| check_frobenius_family(p, f).passed())
        .collect();
    families.sort_by_key(|f| {
        f.maps
            .values()
            .map(|m| m.id.clone())
            .collect::<Vec<_>>()
    });
    families.dedup();
    families
}

/// Package a Frobenius family as a functor from the terminal polycategory
/// at the same bound.
pub fn family_to_functor(
    p: &FinPolycategory,
    family: &FrobeniusFamily,
) -> Result<PolyFunctor, FunctorError> {
    let source = crate::core::terminal(p.scope_bound());
    let star = ObjectId::new(crate::core::MONOID_OBJECT);
    let mut obj_map = BTreeMap::new();
    obj_map.insert(star, family.object.clone());
    let mut map_map = BTreeMap::new();
    for m in source.all_polymaps() {
        let shape = (m.boundary.domain.len(), m.boundary.codomain.len());
        if let Some(target) = family.maps.get(&shape) {
            map_map.insert(m, target.clone());
        }
    }
    PolyFunctor::new(source, p.clone(), obj_map, map_map)
}

/// Read a Frobenius family off a functor whose source has a single object
/// and exactly one polymap per arity shape.
pub fn functor_to_family(f: &PolyFunctor) -> Option<FrobeniusFamily> {
    let objects = f.source.objects();
    if objects.len() != 1 {
        return None;
    }
    let star = &objects[0];
    let bound = f.source.scope_bound();
    let mut maps = BTreeMap::new();
    for (m, n) in frobenius_shapes(bound) {
        let hom = f.source.hom(&Boundary::new(
            vec![star.clone(); m],
            vec![star.clone(); n],
        ));
        if hom.len() != 1 {
            return None;
        }
        maps.insert((m, n), f.apply(&hom[0]));
    }
    Some(FrobeniusFamily {
        object: f.apply_object(star),
        maps,
    })
}

/// Why a polyfiber cannot be assembled.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyfiberError {
    #[error("the family has no polymap at shape ({0},{1})")]
    MissingFamilyShape(usize, usize),
    #[error("identity of {0} does not lie over the family's (1,1) entry")]
    IdentityOutsideFibre(ObjectId),
    #[error("composite {0} of fibre polymaps does not lie over the family")]
    CompositeOutsideFibre(PolyMap),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// The polyfiber of `p` over a Frobenius family in its target: source
/// objects over the family's object and source polymaps lying over the
/// family entry of their shape, with composition inherited from the
/// source.
pub fn polyfiber(
    p: &PolyFunctor,
    family: &FrobeniusFamily,
) -> Result<TablePolycategory, PolyfiberError> {
    let bound = p.source.scope_bound();
    for shape in frobenius_shapes(bound) {
        if !family.maps.contains_key(&shape) {
            return Err(PolyfiberError::MissingFamilyShape(shape.0, shape.1));
        }
    }
    let objects = fibre(p, &family.object);
    let maps: Vec<PolyMap> = p
        .source
        .all_polymaps()
        .into_iter()
        .filter(|m| {
            let shape = (m.boundary.domain.len(), m.boundary.codomain.len());
            Some(&p.apply(m)) == family.maps.get(&shape)
        })
        .collect();
    let mut identities = Vec::new();
    for o in &objects {
        let id = p.source.identity(o).expect("source has identities");
        if !maps.contains(&id) {
            return Err(PolyfiberError::IdentityOutsideFibre(o.clone()));
        }
        identities.push((o.clone(), id));
    }
    let mut composites = Vec::new();
    for f in &maps {
        for i in 0..f.boundary.codomain.len() {
            for g in &maps {
                for j in 0..g.boundary.domain.len() {
                    match p.source.compose(f, i, g, j) {
                        Ok(c) => {
                            if !maps.contains(&c) {
                                return Err(PolyfiberError::CompositeOutsideFibre(c));
                            }
                            composites.push(Composite {
                                f: f.clone(),
                                i,
                                g: g.clone(),
                                j,
                                result: c,
                            });
                        }
                        Err(_) => continue,
                    }
                }
            }
        }
    }
    Ok(TablePolycategory::new(
        objects,
        bound,
        maps,
        identities,
        composites,
    )?)
}

/// Why a refinement pullback cannot be assembled.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PullbackError {
    #[error("componentwise composite of {0} and {1} does not pair up over the shared base")]
    PairingBroken(PolyMap, PolyMap),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
}

/// The pullback of `p : E → B` along `f : B' → B`, with its projections.
#[derive(Debug, Clone)]
pub struct RefinementPullback {
    pub polycat: FinPolycategory,
    /// Projection to the refined base `B'`.
    pub to_refinement: PolyFunctor,
    /// Projection to the total polycategory `E`.
    pub to_total: PolyFunctor,
}

fn pair_object(b: &ObjectId, e: &ObjectId) -> ObjectId {
    ObjectId::new(format!("({};{})", b.0, e.0))
}

fn pair_boundary(b: &Boundary, e: &Boundary) -> Boundary {
    Boundary::new(
        b.domain
            .iter()
            .zip(&e.domain)
            .map(|(x, y)| pair_object(x, y))
            .collect(),
        b.codomain
            .iter()
            .zip(&e.codomain)
            .map(|(x, y)| pair_object(x, y))
            .collect(),
    )
}

fn pair_map(b: &PolyMap, e: &PolyMap) -> PolyMap {
    PolyMap::new(
        format!("({};{})", b.id, e.id),
        pair_boundary(&b.boundary, &e.boundary),
    )
}

/// Pull `p : E → B` back along a refinement `f : B' → B`: objects and
/// polymaps are the matching pairs, composition is componentwise, and the
/// two projections are functors.  Both `p` and `f` must actually preserve
/// composition for this to close up; a pairing failure reports that.
pub fn refinement_pullback(
    p: &PolyFunctor,
    f: &PolyFunctor,
) -> Result<RefinementPullback, PullbackError> {
    let bound = p.source.scope_bound().min(f.source.scope_bound());
    let e = &p.source;
    let bp = &f.source;

    let mut objects = Vec::new();
    for b in bp.objects() {
        for x in e.objects() {
            if f.apply_object(&b) == p.apply_object(&x) {
                objects.push((b.clone(), x.clone()));
            }
        }
    }

    let mut maps = Vec::new();
    for b in bp.all_polymaps() {
        if b.boundary.width() > bound {
            continue;
        }
        for x in e.hom_of_image(p, &f.apply(&b)) {
            maps.push((b.clone(), x));
        }
    }

    let paired: Vec<PolyMap> = maps.iter().map(|(b, x)| pair_map(b, x)).collect();
    let mut identities = Vec::new();
    for (b, x) in &objects {
        let id_b = bp.identity(b).expect("refinement base has identities");
        let id_x = e.identity(x).expect("total polycategory has identities");
        identities.push((pair_object(b, x), pair_map(&id_b, &id_x)));
    }

    let mut composites = Vec::new();
    for (b1, x1) in &maps {
        for i in 0..b1.boundary.codomain.len() {
            for (b2, x2) in &maps {
                for j in 0..b2.boundary.domain.len() {
                    let cb = match bp.compose(b1, i, b2, j) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    if cb.boundary.width() > bound {
                        continue;
                    }
                    let cx = match e.compose(x1, i, x2, j) {
                        Ok(c) => c,
                        Err(_) => continue,
                    };
                    if f.apply(&cb) != p.apply(&cx) {
                        return Err(PullbackError::PairingBroken(cb, cx));
                    }
                    composites.push(Composite {
                        f: pair_map(b1, x1),
                        i,
                        g: pair_map(b2, x2),
                        j,
                        result: pair_map(&cb, &cx),
                    });
                }
            }
        }
    }

    let table = TablePolycategory::new(
        objects.iter().map(|(b, x)| pair_object(b, x)),
        bound,
        paired,
        identities,
        composites,
    )?;
    let polycat = FinPolycategory::Table(table);

    let mut obj_to_bp = BTreeMap::new();
    let mut obj_to_e = BTreeMap::new();
    for (b, x) in &objects {
        obj_to_bp.insert(pair_object(b, x), b.clone());
        obj_to_e.insert(pair_object(b, x), x.clone());
    }
    let mut map_to_bp = BTreeMap::new();
    let mut map_to_e = BTreeMap::new();
    for (b, x) in &maps {
        map_to_bp.insert(pair_map(b, x), b.clone());
        map_to_e.insert(pair_map(b, x), x.clone());
    }
    let to_refinement = PolyFunctor::new(polycat.clone(), bp.clone(), obj_to_bp, map_to_bp)?;
    let to_total = PolyFunctor::new(polycat.clone(), e.clone(), obj_to_e, map_to_e)?;

    Ok(RefinementPullback {
        polycat,
        to_refinement,
        to_total,
    })
}

impl FinPolycategory {
    /// All polymaps of `self` whose image under `p` is the given map.
    fn hom_of_image(&self, p: &PolyFunctor, image: &PolyMap) -> Vec<PolyMap> {
        self.all_polymaps()
            .into_iter()
            .filter(|m| p.apply(m) == *image)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{
        check_axioms, unique_functor_to_terminal, FinPolycategory, MonoidPolycategory,
    };

    fn star() -> ObjectId {
        ObjectId::new("*")
    }

    fn shape(m: usize, n: usize) -> Boundary {
        Boundary::new(vec![star(); m], vec![star(); n])
    }

    /// First-coordinate projection (Z/2 × Z/2) → Z/2.
    fn projection(bound: usize) -> PolyFunctor {
        let z2 = MonoidPolycategory::cyclic(2, bound);
        let prod = MonoidPolycategory::direct_product(&z2, &z2, bound);
        let source = FinPolycategory::Monoid(prod);
        let target = FinPolycategory::Monoid(z2);
        let mut obj_map = BTreeMap::new();
        obj_map.insert(star(), star());
        let mut map_map = BTreeMap::new();
        for m in source.all_polymaps() {
            let first = m.id.split('|').next().unwrap().to_string();
            map_map.insert(m.clone(), PolyMap::new(first, m.boundary.clone()));
        }
        PolyFunctor::new(source, target, obj_map, map_map).unwrap()
    }

    #[test]
    fn functor_checks_pass_and_fail() {
        let z2 = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3));
        assert!(check_functor(&unique_functor_to_terminal(&z2)).passed());
        assert!(check_functor(&projection(3)).passed());

        // Swapping the two elements at one shape breaks composition
        // preservation but not boundary compatibility.
        let mut obj_map = BTreeMap::new();
        obj_map.insert(star(), star());
        let mut map_map = BTreeMap::new();
        for m in z2.all_polymaps() {
            let image = if m.boundary == shape(2, 1) {
                PolyMap::new(if m.id == "0" { "1" } else { "0" }, m.boundary.clone())
            } else {
                m.clone()
            };
            map_map.insert(m, image);
        }
        let broken = PolyFunctor::new(z2.clone(), z2, obj_map, map_map).unwrap();
        let report = check_functor(&broken);
        assert!(!report.passed());
        assert!(!report.composite_failures.is_empty());
    }

    #[test]
    fn cartesian_over_terminal_matches_universal() {
        let p = FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3));
        let collapse = unique_functor_to_terminal(&p);
        let one = PolyMap::new("1", shape(2, 1));
        let zero = PolyMap::new("0", shape(2, 1));
        let cart = is_in_cartesian(&collapse, &one, 0).unwrap();
        let univ = crate::universal::is_in_universal(&p, &one, 0).unwrap();
        assert!(cart.holds() && univ.holds());
        assert_eq!(cart.checked, univ.checked);
        assert_eq!(cart.skipped, univ.skipped);
        assert!(!is_in_cartesian(&collapse, &zero, 0).unwrap().holds());
    }

    #[test]
    fn group_projection_is_a_bifibration() {
        let p = projection(2);
        for m in p.source.all_polymaps() {
            for j in 0..m.boundary.domain.len() {
                assert!(is_in_cartesian(&p, &m, j).unwrap().holds(), "{m} at {j}");
            }
            for i in 0..m.boundary.codomain.len() {
                assert!(is_out_cartesian(&p, &m, i).unwrap().holds(), "{m} at {i}");
            }
        }
        let decision = decide_bifibration(&p);
        assert!(decision.verdict(), "{decision}");
        assert!(decision.pull.problems_checked > 0);
    }

    #[test]
    fn crosscheck_on_small_monoids() {
        for p in [
            FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 2)),
            FinPolycategory::Monoid(MonoidPolycategory::boolean_and(2)),
        ] {
            let report = birep_bifib_crosscheck(&p);
            assert!(report.passed(), "{report}");
            assert!(report.birep.verdict());
        }
    }

    #[test]
    fn frobenius_families_of_z2() {
        // Z/2 at bound 3 carries exactly four families, parameterized by
        // two signs: the entry at shape (m,n) is α(m-1) + β(n-1) mod 2.
        let p = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3));
        let families = frobenius_monoids(&p, &star());
        assert_eq!(families.len(), 4);
        let mut expected = Vec::new();
        for alpha in 0..2usize {
            for beta in 0..2usize {
                let mut maps = BTreeMap::new();
                for (m, n) in frobenius_shapes(3) {
                    let value = (alpha * (m + 1) + beta * (n + 1)) % 2;
                    maps.insert((m, n), PolyMap::new(value.to_string(), shape(m, n)));
                }
                expected.push(FrobeniusFamily {
                    object: star(),
                    maps,
                });
            }
        }
        for e in &expected {
            assert!(families.contains(e), "missing {e}");
            assert!(check_frobenius_family(&p, e).passed());
            let functor = family_to_functor(&p, e).unwrap();
            assert!(check_functor(&functor).passed());
            assert_eq!(functor_to_family(&functor).as_ref(), Some(e));
        }
    }

    #[test]
    fn frobenius_families_of_boolean_and() {
        // The meet monoid admits only the constant family at the unit.
        let p = FinPolycategory::Monoid(MonoidPolycategory::boolean_and(3));
        let families = frobenius_monoids(&p, &star());
        assert_eq!(families.len(), 1);
        assert!(families[0].maps.values().all(|m| m.id == "1"));
    }

    #[test]
    fn polyfiber_of_projection_is_z2() {
        let p = projection(3);
        let base = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3));
        let unit_family = frobenius_monoids(&base, &star())
            .into_iter()
            .find(|f| f.maps.values().all(|m| m.id == "0"))
            .unwrap();
        let fibre = polyfiber(&p, &unit_family).unwrap();
        let fp = FinPolycategory::Table(fibre);
        assert!(check_axioms(&fp).passed());
        // Two polymaps over each shape: second coordinate is free.
        assert_eq!(fp.hom(&shape(2, 1)).len(), 2);
        assert_eq!(fp.hom(&shape(0, 0)).len(), 2);
    }

    #[test]
    fn cartesian_composition_closure_over_projection() {
        let p = projection(2);
        let report = cartesian_composition_check(&p);
        assert!(report.passed(), "{report}");
        assert!(report.in_pairs_checked > 0);
        assert!(report.out_pairs_checked > 0);
    }

    #[test]
    fn stacked_cartesian_maps_stay_cartesian() {
        let p = projection(2);
        let q = unique_functor_to_terminal(&p.target);
        let report = cartesian_over_cartesian_check(&p, &q).unwrap();
        assert!(report.passed());
        assert!(report.positions_checked > 0);
    }

    #[test]
    fn pullback_along_unit_family_recovers_the_fibre() {
        let p = projection(3);
        let base = FinPolycategory::Monoid(MonoidPolycategory::cyclic(2, 3));
        let unit_family = frobenius_monoids(&base, &star())
            .into_iter()
            .find(|f| f.maps.values().all(|m| m.id == "0"))
            .unwrap();
        let f = family_to_functor(&base, &unit_family).unwrap();
        let pb = refinement_pullback(&p, &f).unwrap();
        assert!(check_axioms(&pb.polycat).passed());
        assert!(check_functor(&pb.to_refinement).passed());
        assert!(check_functor(&pb.to_total).passed());
        // One object, two polymaps per shape, just like the polyfiber.
        assert_eq!(pb.polycat.objects().len(), 1);
        let pair_shape = |m: usize, n: usize| {
            let o = pb.polycat.objects()[0].clone();
            Boundary::new(vec![o.clone(); m], vec![o; n])
        };
        assert_eq!(pb.polycat.hom(&pair_shape(2, 1)).len(), 2);
        // Pulling a bifibration back along a refinement leaves one: the
        // projection to the refined base is again a bifibration.
        assert!(decide_bifibration(&pb.to_refinement).verdict());
    }

    #[test]
    fn non_bifibration_detected() {
        // The collapse of an identities-only polycategory misses every
        // lift whose base has a non-(1,1) shape.
        let a = ObjectId::new("A");
        let id = PolyMap::new("id", Boundary::new(vec![a.clone()], vec![a.clone()]));
        let table = crate::core::TablePolycategory::new(
            [a.clone()],
            2,
            vec![id.clone()],
            [(a.clone(), id.clone())],
            vec![Composite {
                f: id.clone(),
                i: 0,
                g: id.clone(),
                j: 0,
                result: id,
            }],
        )
        .unwrap();
        let p = FinPolycategory::Table(table);
        let report = birep_bifib_crosscheck(&p);
        assert!(report.passed(), "{report}");
        assert!(!report.birep.verdict());
        assert!(!report.bifib.verdict());
    }

    #[test]
    fn frobenius_shape_order_is_by_total_then_inputs() {
        let shapes = frobenius_shapes(2);
        assert_eq!(&shapes[..4], &[(0, 0), (0, 1), (1, 0), (0, 2)]);
    }
}
