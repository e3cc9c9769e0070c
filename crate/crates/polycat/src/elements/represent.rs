//! Representability of a family's distributors, variable by variable, and
//! the agreement of that notion with cartesian lifting over the
//! polycategory of elements.
//!
//! A distributor is representable in one of its boundary variables when,
//! for every way of pinning the remaining boundary entries to fibre
//! objects, some object and element turn the variable's action into a
//! bijection with a hom profile — a finite Yoneda search.  A family
//! representable in every variable is exactly the kind whose projection
//! out of the polycategory of elements has all pull and push liftings;
//! [`grothendieck_crosscheck`] decides both sides independently and
//! compares them.

use std::collections::BTreeSet;
use std::fmt;

use crate::core::{terminal, FinPolycategory, PolyMap};
use crate::fib::{decide_bifibration, BifibrationDecision};
use crate::universal::{decide_birepresentable, BirepDecision, Side};

use super::category::FinCategory;
use super::construction::{build_elements, ElementsError};
use super::distributor::{side_tuples, DistKey, FinDistributor};
use super::functor::{check_lax_normal, LaxNormalFunctor};

/// One representability problem: a distributor variable with every other
/// boundary entry pinned to a fibre object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MvarProblem {
    pub side: Side,
    pub position: usize,
    /// Fibre objects at the same side's other entries, in order with the
    /// marked entry removed.
    pub rest: Vec<String>,
    /// Fibre objects at the opposite side's entries.
    pub other: Vec<String>,
}

impl fmt::Display for MvarProblem {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{} variable {} beside ({}) across ({})",
            self.side,
            self.position,
            self.rest.join(","),
            self.other.join(",")
        )
    }
}

/// The verdict for one variable of one distributor: every pinning must
/// admit a representing object and universal element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvarDecision {
    pub map: PolyMap,
    pub side: Side,
    pub position: usize,
    pub problems_checked: u64,
    /// Per solved problem: the representing object and universal element.
    pub witnesses: Vec<(MvarProblem, String, String)>,
    pub first_missing: Option<MvarProblem>,
}

impl MvarDecision {
    pub fn representable(&self) -> bool {
        self.first_missing.is_none()
    }
}

impl fmt::Display for MvarDecision {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{} {} {}: ",
            self.map.key(),
            self.side,
            self.position
        )?;
        match &self.first_missing {
            None => write!(out, "representable ({} pinnings)", self.problems_checked),
            Some(p) => write!(out, "not representable; first missing {p}"),
        }
    }
}

fn key_with(
    side: Side,
    position: usize,
    rest: &[String],
    slot: &str,
    other: &[String],
) -> DistKey {
    let mut marked = rest[..position].to_vec();
    marked.push(slot.to_string());
    marked.extend_from_slice(&rest[position..]);
    match side {
        Side::In => (marked, other.to_vec()),
        Side::Out => (other.to_vec(), marked),
    }
}

fn is_universal(
    d: &FinDistributor,
    side: Side,
    position: usize,
    rest: &[String],
    other: &[String],
    var_cat: &FinCategory,
    r: &str,
    u: &str,
) -> bool {
    let rkey = key_with(side, position, rest, r, other);
    for a in var_cat.objects() {
        let akey = key_with(side, position, rest, a, other);
        let partners = match side {
            Side::In => var_cat.hom(a, r),
            Side::Out => var_cat.hom(r, a),
        };
        let mut images = BTreeSet::new();
        for m in &partners {
            let (_, x) = match side {
                Side::In => d.dom_action(position, m, &rkey, u),
                Side::Out => d.cod_action(position, m, &rkey, u),
            }
            .expect("action at the pinned tuple is total");
            if !images.insert(x) {
                return false;
            }
        }
        if images.len() != d.elements_at(&akey).len() {
            return false;
        }
    }
    true
}

/// Decide representability of one distributor variable by exhaustive
/// search over candidate objects and elements.
pub fn decide_representable(
    map: &PolyMap,
    d: &FinDistributor,
    side: Side,
    position: usize,
) -> MvarDecision {
    let (same, other_cats) = match side {
        Side::In => (d.dom_cats(), d.cod_cats()),
        Side::Out => (d.cod_cats(), d.dom_cats()),
    };
    let var_cat = same[position].clone();
    let mut rest_cats = same.to_vec();
    rest_cats.remove(position);

    let mut problems_checked = 0u64;
    let mut witnesses = Vec::new();
    let mut first_missing = None;
    'all: for rest in side_tuples(&rest_cats) {
        for other in side_tuples(other_cats) {
            problems_checked += 1;
            let mut found = None;
            'search: for r in var_cat.objects() {
                let rkey = key_with(side, position, &rest, r, &other);
                for u in d.elements_at(&rkey) {
                    if is_universal(d, side, position, &rest, &other, &var_cat, r, u) {
                        found = Some((r.clone(), u.clone()));
                        break 'search;
                    }
                }
            }
            let problem = MvarProblem {
                side,
                position,
                rest: rest.clone(),
                other: other.clone(),
            };
            match found {
                Some((object, element)) => witnesses.push((problem, object, element)),
                None => {
                    first_missing = Some(problem);
                    break 'all;
                }
            }
        }
    }
    MvarDecision {
        map: map.clone(),
        side,
        position,
        problems_checked,
        witnesses,
        first_missing,
    }
}

/// Representability decisions for every variable of every distributor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvarReport {
    pub decisions: Vec<MvarDecision>,
}

impl MvarReport {
    pub fn verdict(&self) -> bool {
        self.decisions.iter().all(MvarDecision::representable)
    }

    /// The first non-representable variable on the given side, in
    /// polymap-then-position order.
    pub fn first_failing(&self, side: Side) -> Option<&MvarDecision> {
        self.decisions
            .iter()
            .find(|d| d.side == side && !d.representable())
    }
}

impl fmt::Display for MvarReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failing = self
            .decisions
            .iter()
            .filter(|d| !d.representable())
            .count();
        write!(
            out,
            "representability: {} variables, {} not representable",
            self.decisions.len(),
            failing
        )?;
        for d in self.decisions.iter().filter(|d| !d.representable()) {
            write!(out, "\n  {d}")?;
        }
        Ok(())
    }
}

/// Decide representability of every variable of every distributor of a
/// coherent family, in polymap order, input entries before output entries.
pub fn mvar_check(fun: &LaxNormalFunctor) -> Result<MvarReport, ElementsError> {
    let report = check_lax_normal(fun);
    if !report.passed() {
        return Err(ElementsError::Incoherent(Box::new(report)));
    }
    let mut decisions = Vec::new();
    for f in fun.base.all_polymaps() {
        let d = fun.dist(&f).expect("coherent family is total");
        for position in 0..f.boundary.domain.len() {
            decisions.push(decide_representable(&f, d, Side::In, position));
        }
        for position in 0..f.boundary.codomain.len() {
            decisions.push(decide_representable(&f, d, Side::Out, position));
        }
    }
    Ok(MvarReport { decisions })
}

/// Agreement report between variablewise representability of a family and
/// the lifting structure of its projection out of the polycategory of
/// elements, both decided independently.  Over the terminal base the total
/// polycategory's birepresentability decision joins the comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementsCrosscheckReport {
    pub mvar: MvarReport,
    pub bifib: BifibrationDecision,
    pub birep: Option<BirepDecision>,
    pub pull_agrees: bool,
    pub push_agrees: bool,
    /// When both sides fail on input liftings: whether the first failing
    /// variable names the same polymap and position as the first missing
    /// pull problem.  `None` when either side passes.
    pub pull_failure_matches: Option<bool>,
    pub push_failure_matches: Option<bool>,
    pub birep_agrees: Option<bool>,
}

impl ElementsCrosscheckReport {
    pub fn passed(&self) -> bool {
        self.pull_agrees
            && self.push_agrees
            && self.pull_failure_matches != Some(false)
            && self.push_failure_matches != Some(false)
            && self.birep_agrees != Some(false)
    }
}

impl fmt::Display for ElementsCrosscheckReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "{}", self.mvar)?;
        write!(out, "{}", self.bifib)?;
        writeln!(
            out,
            "pull sides agree: {}; push sides agree: {}",
            self.pull_agrees, self.push_agrees
        )?;
        let show = |m: &Option<bool>| match m {
            None => "-",
            Some(true) => "yes",
            Some(false) => "NO",
        };
        writeln!(
            out,
            "first-failure match: pull {}, push {}",
            show(&self.pull_failure_matches),
            show(&self.push_failure_matches)
        )?;
        if let Some(b) = &self.birep {
            write!(out, "{b}")?;
            writeln!(
                out,
                "birepresentability agrees: {}",
                show(&self.birep_agrees)
            )?;
        }
        write!(
            out,
            "cross-check: {}",
            if self.passed() { "ok" } else { "FAILED" }
        )
    }
}

/// Decide representability of every variable and the bifibration property
/// of the projection independently, then compare: each side's verdict, the
/// location of the first failure when both fail, and, over the terminal
/// base, the birepresentability verdict of the total polycategory.
pub fn grothendieck_crosscheck(
    fun: &LaxNormalFunctor,
) -> Result<ElementsCrosscheckReport, ElementsError> {
    let mvar = mvar_check(fun)?;
    let built = build_elements(fun)?;
    let bifib = decide_bifibration(&built.projection);

    let pull_agrees = mvar.first_failing(Side::In).is_none() == bifib.pull.verdict;
    let push_agrees = mvar.first_failing(Side::Out).is_none() == bifib.push.verdict;
    let pull_failure_matches = match (mvar.first_failing(Side::In), &bifib.pull.first_missing)
    {
        (Some(d), Some(m)) => Some(d.map == m.base && d.position == m.index),
        _ => None,
    };
    let push_failure_matches = match (mvar.first_failing(Side::Out), &bifib.push.first_missing)
    {
        (Some(d), Some(m)) => Some(d.map == m.base && d.position == m.index),
        _ => None,
    };
    let (birep, birep_agrees) = if fun.base == terminal(fun.base.scope_bound()) {
        let b = decide_birepresentable(&FinPolycategory::Table(built.total.clone()));
        let agrees = b.verdict() == bifib.verdict();
        (Some(b), Some(agrees))
    } else {
        (None, None)
    };

    Ok(ElementsCrosscheckReport {
        mvar,
        bifib,
        birep,
        pull_agrees,
        push_agrees,
        pull_failure_matches,
        push_failure_matches,
        birep_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Boundary, ObjectId};
    use crate::elements::distributor::{hom_distributor, FinDistributor};
    use crate::elements::fixtures::{singleton_over_terminal, swap_functor, walking_arrow};
    use crate::elements::generate::{identities_only, sample_lax_functor};
    use crate::core::unique_functor_to_terminal;
    use crate::elements::construction::fibres_functor;

    fn label(id: &str) -> PolyMap {
        let c = ObjectId::new("C");
        PolyMap::new(id, Boundary::new(vec![c.clone()], vec![c]))
    }

    #[test]
    fn hom_distributor_is_representable_by_identities() {
        let c = walking_arrow();
        let d = hom_distributor(&c);
        let f = label("h");

        let din = decide_representable(&f, &d, Side::In, 0);
        assert!(din.representable(), "{din}");
        for (problem, object, element) in &din.witnesses {
            assert_eq!(object, &problem.other[0]);
            assert_eq!(element, &c.identity(object).unwrap().id);
        }

        let dout = decide_representable(&f, &d, Side::Out, 0);
        assert!(dout.representable(), "{dout}");
        for (problem, object, element) in &dout.witnesses {
            assert_eq!(object, &problem.other[0]);
            assert_eq!(element, &c.identity(object).unwrap().id);
        }
    }

    #[test]
    fn empty_element_set_blocks_representability() {
        let fibre = FinCategory::discrete(vec!["x0".into(), "x1".into()]).unwrap();
        let d = FinDistributor::from_fn(
            vec![],
            vec![fibre],
            |key| {
                if key.1[0] == "x0" {
                    vec!["e1".into(), "e2".into()]
                } else {
                    Vec::new()
                }
            },
            |_, _, _, e| e.into(),
            |_, _, _, e| e.into(),
        )
        .unwrap();
        let decision = decide_representable(&label("d"), &d, Side::Out, 0);
        assert!(!decision.representable());
        let missing = decision.first_missing.unwrap();
        assert!(missing.rest.is_empty() && missing.other.is_empty());
    }

    #[test]
    fn singleton_family_is_representable_and_bifibred() {
        let report = grothendieck_crosscheck(&singleton_over_terminal()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.mvar.verdict());
        assert!(report.bifib.verdict());
        assert_eq!(report.birep_agrees, Some(true));
        assert!(report.birep.unwrap().verdict());
    }

    #[test]
    fn swap_family_is_representable_and_bifibred() {
        let report = grothendieck_crosscheck(&swap_functor()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.mvar.verdict());
        assert!(report.bifib.verdict());
        assert!(report.birep.is_none());
    }

    #[test]
    fn discrete_collapse_fails_both_sides_at_the_same_variable() {
        let p = unique_functor_to_terminal(&identities_only(2, 2));
        let fun = fibres_functor(&p).unwrap();
        let report = grothendieck_crosscheck(&fun).unwrap();
        assert!(report.passed(), "{report}");
        assert!(!report.mvar.verdict());
        assert!(!report.bifib.verdict());
        assert_eq!(report.pull_failure_matches, Some(true));
        assert_eq!(report.push_failure_matches, Some(true));
        assert_eq!(report.birep_agrees, Some(true));
        assert!(!report.birep.unwrap().verdict());
    }

    #[test]
    fn sampled_families_pass_the_crosscheck() {
        for seed in 0..10 {
            let fun = sample_lax_functor(seed);
            let report = grothendieck_crosscheck(&fun).unwrap();
            assert!(report.passed(), "seed {seed}: {report}");
        }
    }

    #[test]
    fn incoherent_input_is_rejected() {
        let mut fun = swap_functor();
        fun.normality.clear();
        assert!(matches!(
            mvar_check(&fun),
            Err(ElementsError::Incoherent(_))
        ));
    }
}
