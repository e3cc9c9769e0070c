//! Rational tensors, multilinear maps with planar composition, and the
//! projective/injective norms on a two-fold tensor product.

use super::la::{dot, index_tuples, kron, matvec};
use super::polytope::{polar_vertices, NormError, PolytopeNorm};
use super::ExtendedRational;
use crate::core::{plan_composition, Boundary, ComposeError, ObjectId};
use num::{BigRational, One, Signed, Zero};
use std::fmt;

/// An element of a tensor product of rational coordinate spaces, stored
/// row-major over the factor indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    pub factor_dims: Vec<usize>,
    pub coords: Vec<BigRational>,
}

impl TensorElement {
    pub fn new(factor_dims: Vec<usize>, coords: Vec<BigRational>) -> Result<Self, NormError> {
        let total: usize = factor_dims.iter().product();
        if coords.len() != total {
            return Err(NormError::DimensionMismatch(coords.len(), total));
        }
        Ok(TensorElement { factor_dims, coords })
    }

    /// The elementary tensor `v₁ ⊗ … ⊗ vₖ`.  With no factors this is the
    /// scalar `1`.
    pub fn pure(factors: &[Vec<BigRational>]) -> Self {
        let mut coords = vec![BigRational::one()];
        for v in factors {
            coords = kron(&coords, v);
        }
        TensorElement {
            factor_dims: factors.iter().map(|v| v.len()).collect(),
            coords,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.coords.len()
    }
}

/// A linear map between tensor products, with a list of input factors and
/// a list of output factors.  The matrix is row-major over the codomain
/// multi-index; composition plugs one output into one input and is
/// subject to the same planarity discipline as polymap composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyLinearMap {
    pub dom_dims: Vec<usize>,
    pub cod_dims: Vec<usize>,
    pub matrix: Vec<Vec<BigRational>>,
}

fn dims_boundary(dom: &[usize], cod: &[usize]) -> Boundary {
    Boundary::new(
        dom.iter().map(|d| ObjectId::new(d.to_string())).collect(),
        cod.iter().map(|d| ObjectId::new(d.to_string())).collect(),
    )
}

fn parse_dims(objects: &[ObjectId]) -> Vec<usize> {
    objects
        .iter()
        .map(|o| o.0.parse().expect("boundary objects carry dimensions"))
        .collect()
}

fn identity_matrix(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

impl PolyLinearMap {
    pub fn new(
        dom_dims: Vec<usize>,
        cod_dims: Vec<usize>,
        matrix: Vec<Vec<BigRational>>,
    ) -> Result<Self, NormError> {
        let rows: usize = cod_dims.iter().product();
        let cols: usize = dom_dims.iter().product();
        if matrix.len() != rows {
            return Err(NormError::DimensionMismatch(matrix.len(), rows));
        }
        for row in &matrix {
            if row.len() != cols {
                return Err(NormError::DimensionMismatch(row.len(), cols));
            }
        }
        Ok(PolyLinearMap {
            dom_dims,
            cod_dims,
            matrix,
        })
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        PolyLinearMap {
            dom_dims: dims.to_vec(),
            cod_dims: dims.to_vec(),
            matrix: identity_matrix(n),
        }
    }

    fn boundary(&self) -> Boundary {
        dims_boundary(&self.dom_dims, &self.cod_dims)
    }

    pub fn eval(&self, x: &TensorElement) -> Result<TensorElement, NormError> {
        if x.factor_dims != self.dom_dims {
            let cols: usize = self.dom_dims.iter().product();
            return Err(NormError::DimensionMismatch(x.total_dim(), cols));
        }
        Ok(TensorElement {
            factor_dims: self.cod_dims.clone(),
            coords: matvec(&self.matrix, &x.coords),
        })
    }

    /// Plug output `i` of `self` into input `j` of `other`, contracting
    /// the shared factor.  Boundary arithmetic and planarity are decided
    /// by the same planner the finite polycategories use, with each factor
    /// named by its dimension.
    pub fn compose(
        &self,
        i: usize,
        other: &PolyLinearMap,
        j: usize,
    ) -> Result<PolyLinearMap, ComposeError> {
        let boundary = plan_composition(&self.boundary(), i, &other.boundary(), j)?;
        let dom_dims = parse_dims(&boundary.domain);
        let cod_dims = parse_dims(&boundary.codomain);
        let m = self.cod_dims[i];
        let p1: usize = self.cod_dims[..i].iter().product();
        let p2: usize = self.cod_dims[i + 1..].iter().product();
        let q: usize = other.cod_dims.iter().product();
        let r1: usize = other.dom_dims[..j].iter().product();
        let r2: usize = other.dom_dims[j + 1..].iter().product();
        let d: usize = self.dom_dims.iter().product();
        let mut matrix = vec![vec![BigRational::zero(); r1 * d * r2]; p1 * q * p2];
        for a in 0..p1 {
            for b in 0..q {
                for c in 0..p2 {
                    let row = (a * q + b) * p2 + c;
                    for u in 0..r1 {
                        for v in 0..d {
                            for w in 0..r2 {
                                let col = (u * d + v) * r2 + w;
                                let mut acc = BigRational::zero();
                                for s in 0..m {
                                    let fe = &self.matrix[(a * m + s) * p2 + c][v];
                                    let ge = &other.matrix[b][(u * m + s) * r2 + w];
                                    if !fe.is_zero() && !ge.is_zero() {
                                        acc += fe * ge;
                                    }
                                }
                                matrix[row][col] = acc;
                            }
                        }
                    }
                }
            }
        }
        Ok(PolyLinearMap {
            dom_dims,
            cod_dims,
            matrix,
        })
    }
}

/// `(a, b) → (a·b)`: regroup two factors into one.  The identity on
/// coordinates.
pub fn merge_map(a: usize, b: usize) -> PolyLinearMap {
    PolyLinearMap {
        dom_dims: vec![a, b],
        cod_dims: vec![a * b],
        matrix: identity_matrix(a * b),
    }
}

/// `(a·b) → (a, b)`: regroup one factor into two.  The identity on
/// coordinates.
pub fn split_map(a: usize, b: usize) -> PolyLinearMap {
    PolyLinearMap {
        dom_dims: vec![a * b],
        cod_dims: vec![a, b],
        matrix: identity_matrix(a * b),
    }
}

/// `() → (a, a)`: the unit of the self-duality, `Σᵢ eᵢ ⊗ eᵢ`.
pub fn cup_map(a: usize) -> PolyLinearMap {
    let mut matrix = vec![vec![BigRational::zero()]; a * a];
    for x in 0..a {
        matrix[x * a + x][0] = BigRational::one();
    }
    PolyLinearMap {
        dom_dims: Vec::new(),
        cod_dims: vec![a, a],
        matrix,
    }
}

/// `(a, a) → ()`: the counit, the coordinate pairing `⟨x, y⟩`.
pub fn cap_map(a: usize) -> PolyLinearMap {
    let mut row = vec![BigRational::zero(); a * a];
    for x in 0..a {
        row[x * a + x] = BigRational::one();
    }
    PolyLinearMap {
        dom_dims: vec![a, a],
        cod_dims: Vec::new(),
        matrix: vec![row],
    }
}

/// The projective norm on the product of two polytope norms: its ball is
/// the convex hull of the elementary tensors of ball vertices.  Facets
/// are enumerated and certified when the product dimension allows.
pub fn projective(n1: &PolytopeNorm, n2: &PolytopeNorm) -> Result<PolytopeNorm, NormError> {
    let v1 = n1.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    let v2 = n2.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    let dim = n1.dim * n2.dim;
    let mut vertices = Vec::with_capacity(v1.len() * v2.len());
    for v in v1 {
        for w in v2 {
            vertices.push(kron(v, w));
        }
    }
    if dim <= 4 {
        let facets = polar_vertices(&vertices, dim)?;
        PolytopeNorm::from_parts_checked(dim, vertices, facets)
    } else {
        PolytopeNorm::vertex_only(dim, vertices)
    }
}

/// The injective norm on the product of two polytope norms: its ball is
/// cut out by the elementary functionals built from ball facets.
/// Vertices are enumerated and certified when the product dimension
/// allows.
pub fn injective(n1: &PolytopeNorm, n2: &PolytopeNorm) -> Result<PolytopeNorm, NormError> {
    let f1 = n1.facets.as_ref().ok_or(NormError::MissingFacets)?;
    let f2 = n2.facets.as_ref().ok_or(NormError::MissingFacets)?;
    let dim = n1.dim * n2.dim;
    let mut facets = Vec::with_capacity(f1.len() * f2.len());
    for u in f1 {
        for t in f2 {
            facets.push(kron(u, t));
        }
    }
    if dim <= 4 {
        let vertices = polar_vertices(&facets, dim)?;
        PolytopeNorm::from_parts_checked(dim, vertices, facets)
    } else {
        PolytopeNorm::facet_only(dim, facets)
    }
}

/// The input tuple at which a contractivity sweep first failed, with the
/// output-side value it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepWitness {
    pub input_choice: Vec<usize>,
    pub value: ExtendedRational,
}

/// Outcome of sweeping a map over all tuples of ball vertices on its
/// inputs and measuring the image on its outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractivityReport {
    pub tuples_checked: u64,
    pub contractive: bool,
    pub first_violation: Option<SweepWitness>,
}

impl fmt::Display for ContractivityReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_violation {
            None => write!(out, "contractive ({} input tuples)", self.tuples_checked),
            Some(w) => write!(
                out,
                "not contractive: input tuple {:?} maps to value {}",
                w.input_choice, w.value
            ),
        }
    }
}

fn elementary_functional_max(
    facet_sets: &[&Vec<Vec<BigRational>>],
    y: &[BigRational],
) -> BigRational {
    let lengths: Vec<usize> = facet_sets.iter().map(|s| s.len()).collect();
    let mut best = BigRational::zero();
    for choice in index_tuples(&lengths) {
        let mut functional = vec![BigRational::one()];
        for (set, &k) in facet_sets.iter().zip(&choice) {
            functional = kron(&functional, &set[k]);
        }
        let value = dot(&functional, y);
        if value > best {
            best = value;
        }
    }
    best
}

/// Decide whether `f` maps the product of input unit balls into the unit
/// ball of the outputs, by sweeping vertex tuples: a convex function
/// attains its maximum on extreme points, so the sweep is exact.  With
/// several outputs the output measure is the maximum over elementary
/// functionals of facets; a single output may instead fall back to its
/// own gauge.
pub fn is_contractive(
    f: &PolyLinearMap,
    dom_norms: &[&PolytopeNorm],
    cod_norms: &[&PolytopeNorm],
) -> Result<ContractivityReport, NormError> {
    if dom_norms.len() != f.dom_dims.len() {
        return Err(NormError::DimensionMismatch(dom_norms.len(), f.dom_dims.len()));
    }
    if cod_norms.len() != f.cod_dims.len() {
        return Err(NormError::DimensionMismatch(cod_norms.len(), f.cod_dims.len()));
    }
    for (n, d) in dom_norms.iter().zip(&f.dom_dims) {
        if n.dim != *d {
            return Err(NormError::DimensionMismatch(n.dim, *d));
        }
    }
    for (n, d) in cod_norms.iter().zip(&f.cod_dims) {
        if n.dim != *d {
            return Err(NormError::DimensionMismatch(n.dim, *d));
        }
    }
    let vertex_sets: Vec<&Vec<Vec<BigRational>>> = dom_norms
        .iter()
        .map(|n| n.vertices.as_ref().ok_or(NormError::MissingVertices))
        .collect::<Result<_, _>>()?;
    let all_facets = cod_norms.iter().all(|n| n.facets.is_some());
    if cod_norms.len() > 1 && !all_facets {
        return Err(NormError::MissingFacets);
    }
    let facet_sets: Vec<&Vec<Vec<BigRational>>> = if all_facets {
        cod_norms.iter().map(|n| n.facets.as_ref().unwrap()).collect()
    } else {
        Vec::new()
    };
    let lengths: Vec<usize> = vertex_sets.iter().map(|s| s.len()).collect();
    let one = ExtendedRational::Finite(BigRational::one());
    let mut tuples_checked = 0u64;
    for choice in index_tuples(&lengths) {
        tuples_checked += 1;
        let mut x = vec![BigRational::one()];
        for (set, &k) in vertex_sets.iter().zip(&choice) {
            x = kron(&x, &set[k]);
        }
        let y = matvec(&f.matrix, &x);
        let value = if f.cod_dims.is_empty() {
            ExtendedRational::Finite(y[0].abs())
        } else if all_facets {
            ExtendedRational::Finite(elementary_functional_max(&facet_sets, &y))
        } else {
            cod_norms[0].eval(&y)?
        };
        if value > one {
            return Ok(ContractivityReport {
                tuples_checked,
                contractive: false,
                first_violation: Some(SweepWitness {
                    input_choice: choice,
                    value,
                }),
            });
        }
    }
    Ok(ContractivityReport {
        tuples_checked,
        contractive: true,
        first_violation: None,
    })
}

/// Outcome of testing a candidate norm on a product space against the two
/// crossnorm conditions: elementary tensors of unit vectors stay in the
/// unit ball, and elementary functionals of unit functionals stay in the
/// dual unit ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossnormReport {
    pub unit_tuples_checked: u64,
    pub unit_first_violation: Option<SweepWitness>,
    pub dual_tuples_checked: u64,
    pub dual_first_violation: Option<SweepWitness>,
}

impl CrossnormReport {
    pub fn unit_ok(&self) -> bool {
        self.unit_first_violation.is_none()
    }

    pub fn dual_ok(&self) -> bool {
        self.dual_first_violation.is_none()
    }

    pub fn holds(&self) -> bool {
        self.unit_ok() && self.dual_ok()
    }
}

impl fmt::Display for CrossnormReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "crossnorm: {} (unit side {}/{} tuples, dual side {}/{} tuples)",
            if self.holds() { "yes" } else { "no" },
            if self.unit_ok() { "ok" } else { "violated" },
            self.unit_tuples_checked,
            if self.dual_ok() { "ok" } else { "violated" },
            self.dual_tuples_checked,
        )
    }
}

/// Test the two crossnorm conditions for `t` on the product of `n1` and
/// `n2`.  The sweeps mirror the contractivity sweeps of the regrouping
/// maps exactly, first input outermost, so witnesses are comparable.
pub fn is_crossnorm(
    t: &PolytopeNorm,
    n1: &PolytopeNorm,
    n2: &PolytopeNorm,
) -> Result<CrossnormReport, NormError> {
    if t.dim != n1.dim * n2.dim {
        return Err(NormError::DimensionMismatch(t.dim, n1.dim * n2.dim));
    }
    let v1 = n1.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    let v2 = n2.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    let one = ExtendedRational::Finite(BigRational::one());

    let mut unit_tuples_checked = 0u64;
    let mut unit_first_violation = None;
    'unit: for (i, v) in v1.iter().enumerate() {
        for (j, w) in v2.iter().enumerate() {
            unit_tuples_checked += 1;
            let value = t.eval(&kron(v, w))?;
            if value > one {
                unit_first_violation = Some(SweepWitness {
                    input_choice: vec![i, j],
                    value,
                });
                break 'unit;
            }
        }
    }

    let tv = t.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    let f1 = n1.facets.as_ref().ok_or(NormError::MissingFacets)?;
    let f2 = n2.facets.as_ref().ok_or(NormError::MissingFacets)?;
    let mut dual_tuples_checked = 0u64;
    let mut dual_first_violation = None;
    for (k, z) in tv.iter().enumerate() {
        dual_tuples_checked += 1;
        let value = ExtendedRational::Finite(elementary_functional_max(&[f1, f2], z));
        if value > one {
            dual_first_violation = Some(SweepWitness {
                input_choice: vec![k],
                value,
            });
            break;
        }
    }

    Ok(CrossnormReport {
        unit_tuples_checked,
        unit_first_violation,
        dual_tuples_checked,
        dual_first_violation,
    })
}

/// Side-by-side comparison: the crossnorm conditions for `t` against
/// contractivity of the regrouping maps `(a,b) → (a·b)` and
/// `(a·b) → (a,b)` measured with `t` on the product side.  The two views
/// must agree verdict for verdict and witness for witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub crossnorm: CrossnormReport,
    pub merge: ContractivityReport,
    pub split: ContractivityReport,
    pub unit_matches: bool,
    pub dual_matches: bool,
}

impl EquivalenceReport {
    pub fn agree(&self) -> bool {
        self.unit_matches && self.dual_matches
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "crossnorm/contractivity agreement: unit {}, dual {}",
            if self.unit_matches { "match" } else { "MISMATCH" },
            if self.dual_matches { "match" } else { "MISMATCH" },
        )
    }
}

pub fn crossnorm_contractive_equivalence(
    t: &PolytopeNorm,
    n1: &PolytopeNorm,
    n2: &PolytopeNorm,
) -> Result<EquivalenceReport, NormError> {
    let crossnorm = is_crossnorm(t, n1, n2)?;
    let merge = is_contractive(&merge_map(n1.dim, n2.dim), &[n1, n2], &[t])?;
    let split = is_contractive(&split_map(n1.dim, n2.dim), &[t], &[n1, n2])?;
    let flatten = |w: &SweepWitness| (w.input_choice.clone(), w.value.clone());
    let unit_matches = crossnorm.unit_ok() == merge.contractive
        && crossnorm.unit_tuples_checked == merge.tuples_checked
        && crossnorm.unit_first_violation.as_ref().map(flatten)
            == merge.first_violation.as_ref().map(flatten);
    let dual_matches = crossnorm.dual_ok() == split.contractive
        && crossnorm.dual_tuples_checked == split.tuples_checked
        && crossnorm.dual_first_violation.as_ref().map(flatten)
            == split.first_violation.as_ref().map(flatten);
    Ok(EquivalenceReport {
        crossnorm,
        merge,
        split,
        unit_matches,
        dual_matches,
    })
}

/// Comparison of a two-input map against its one-input regrouped form, or
/// a two-output map against its one-output regrouped form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub direct: ContractivityReport,
    pub regrouped: ContractivityReport,
    pub verdicts_agree: bool,
    pub witnesses_agree: bool,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.verdicts_agree && self.witnesses_agree
    }
}

impl fmt::Display for FactorizationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "factorization: verdicts {} ({} vs {}), witnesses {}",
            if self.verdicts_agree { "agree" } else { "DISAGREE" },
            self.direct,
            self.regrouped,
            if self.witnesses_agree { "agree" } else { "DISAGREE" },
        )
    }
}

/// A two-input map is contractive for `(n1, n2)` exactly when the same
/// matrix read as a one-input map is contractive for the projective norm.
/// Both sweeps run in the same order, so the violating tuple (if any)
/// must appear at the same position with the same value.
pub fn factorization_check(
    f: &PolyLinearMap,
    n1: &PolytopeNorm,
    n2: &PolytopeNorm,
    cod_norms: &[&PolytopeNorm],
) -> Result<FactorizationReport, NormError> {
    if f.dom_dims.len() != 2 {
        return Err(NormError::DimensionMismatch(f.dom_dims.len(), 2));
    }
    let direct = is_contractive(f, &[n1, n2], cod_norms)?;
    let pi = projective(n1, n2)?;
    let flat = PolyLinearMap {
        dom_dims: vec![n1.dim * n2.dim],
        cod_dims: f.cod_dims.clone(),
        matrix: f.matrix.clone(),
    };
    let regrouped = is_contractive(&flat, &[&pi], cod_norms)?;
    let verdicts_agree = direct.contractive == regrouped.contractive
        && direct.tuples_checked == regrouped.tuples_checked;
    let width = n2.vertices.as_ref().map(|v| v.len()).unwrap_or(0);
    let witnesses_agree = match (&direct.first_violation, &regrouped.first_violation) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            a.input_choice[0] * width + a.input_choice[1] == b.input_choice[0]
                && a.value == b.value
        }
        _ => false,
    };
    Ok(FactorizationReport {
        direct,
        regrouped,
        verdicts_agree,
        witnesses_agree,
    })
}

/// A two-output map is contractive into `(n1, n2)` exactly when the same
/// matrix read as a one-output map is contractive into the injective
/// norm.  Sweeps and output measures coincide term by term.
pub fn cofactorization_check(
    f: &PolyLinearMap,
    dom_norms: &[&PolytopeNorm],
    n1: &PolytopeNorm,
    n2: &PolytopeNorm,
) -> Result<FactorizationReport, NormError> {
    if f.cod_dims.len() != 2 {
        return Err(NormError::DimensionMismatch(f.cod_dims.len(), 2));
    }
    let direct = is_contractive(f, dom_norms, &[n1, n2])?;
    let eps = injective(n1, n2)?;
    let flat = PolyLinearMap {
        dom_dims: f.dom_dims.clone(),
        cod_dims: vec![n1.dim * n2.dim],
        matrix: f.matrix.clone(),
    };
    let regrouped = is_contractive(&flat, dom_norms, &[&eps])?;
    let verdicts_agree = direct.contractive == regrouped.contractive
        && direct.tuples_checked == regrouped.tuples_checked;
    let witnesses_agree = direct.first_violation == regrouped.first_violation;
    Ok(FactorizationReport {
        direct,
        regrouped,
        verdicts_agree,
        witnesses_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qv(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| q(x, 1)).collect()
    }

    fn fin(n: i64, d: i64) -> ExtendedRational {
        ExtendedRational::Finite(q(n, d))
    }

    #[test]
    fn snake_composites_are_identities() {
        for a in [2usize, 3] {
            let cup = cup_map(a);
            let cap = cap_map(a);
            assert_eq!(
                cup.compose(1, &cap, 0).unwrap(),
                PolyLinearMap::identity(&[a])
            );
            assert_eq!(
                cup.compose(0, &cap, 1).unwrap(),
                PolyLinearMap::identity(&[a])
            );
        }
    }

    #[test]
    fn regrouping_round_trip_is_the_identity() {
        let merged = merge_map(2, 3).compose(0, &split_map(2, 3), 0).unwrap();
        assert_eq!(merged.dom_dims, vec![2, 3]);
        assert_eq!(merged.cod_dims, vec![2, 3]);
        assert_eq!(merged.matrix, identity_matrix(6));
    }

    #[test]
    fn composition_rejects_nonplanar_and_mistyped_cuts() {
        let f = PolyLinearMap::identity(&[2, 2, 2]);
        let g = PolyLinearMap::identity(&[2, 2, 2]);
        assert!(matches!(
            f.compose(1, &g, 1),
            Err(ComposeError::NotPlanar { .. })
        ));
        let h = merge_map(2, 3);
        assert!(matches!(
            h.compose(0, &cap_map(2), 0),
            Err(ComposeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn rank_one_tensors_get_the_product_norm() {
        let l1 = PolytopeNorm::l1(2);
        let v = vec![q(1, 1), q(-2, 1)];
        let w = vec![q(3, 1), q(1, 2)];
        let x = TensorElement::pure(&[v, w]);
        let pi = projective(&l1, &l1).unwrap();
        let eps = injective(&l1, &l1).unwrap();
        assert_eq!(pi.eval(&x.coords).unwrap(), fin(21, 2));
        assert_eq!(eps.eval(&x.coords).unwrap(), fin(21, 2));
    }

    #[test]
    fn rank_one_product_rule_beyond_facet_enumeration() {
        // Dimension 6 exceeds the facet enumerator, so the projective side
        // answers through the gauge program.
        let l1a = PolytopeNorm::l1(3);
        let l1b = PolytopeNorm::l1(2);
        let x = TensorElement::pure(&[qv(&[1, 1, 1]), qv(&[1, -1])]);
        let pi = projective(&l1a, &l1b).unwrap();
        assert_eq!(pi.eval(&x.coords).unwrap(), fin(6, 1));
        let eps = injective(&l1a, &l1b).unwrap();
        assert_eq!(eps.eval(&x.coords).unwrap(), fin(6, 1));
    }

    #[test]
    fn diagonal_element_frozen_values() {
        let diag: Vec<BigRational> = qv(&[1, 0, 0, 1]);
        let l1 = PolytopeNorm::l1(2);
        let linf = PolytopeNorm::linf(2);
        assert_eq!(projective(&l1, &l1).unwrap().eval(&diag).unwrap(), fin(2, 1));
        assert_eq!(injective(&l1, &l1).unwrap().eval(&diag).unwrap(), fin(2, 1));
        assert_eq!(
            projective(&linf, &linf).unwrap().eval(&diag).unwrap(),
            fin(1, 1)
        );
        assert_eq!(
            injective(&linf, &linf).unwrap().eval(&diag).unwrap(),
            fin(1, 1)
        );
    }

    #[test]
    fn projective_and_injective_are_crossnorms() {
        let l1 = PolytopeNorm::l1(2);
        let linf = PolytopeNorm::linf(2);
        for (a, b) in [(&l1, &l1), (&l1, &linf), (&linf, &l1)] {
            assert!(is_crossnorm(&projective(a, b).unwrap(), a, b)
                .unwrap()
                .holds());
            assert!(is_crossnorm(&injective(a, b).unwrap(), a, b)
                .unwrap()
                .holds());
        }
    }

    #[test]
    fn scaled_balls_fail_one_crossnorm_condition_each() {
        let l1 = PolytopeNorm::l1(2);
        let pi = projective(&l1, &l1).unwrap();
        let scale = |s: BigRational| -> PolytopeNorm {
            let vertices = pi
                .vertices
                .clone()
                .unwrap()
                .into_iter()
                .map(|v| v.into_iter().map(|x| x * s.clone()).collect())
                .collect();
            PolytopeNorm::from_vertices(4, vertices).unwrap()
        };
        // Doubled ball: unit condition holds, dual condition fails.
        let doubled = is_crossnorm(&scale(q(2, 1)), &l1, &l1).unwrap();
        assert!(doubled.unit_ok() && !doubled.dual_ok());
        // Halved ball: unit condition fails, dual condition holds.
        let halved = is_crossnorm(&scale(q(1, 2)), &l1, &l1).unwrap();
        assert!(!halved.unit_ok() && halved.dual_ok());
    }

    #[test]
    fn crossnorm_conditions_match_regrouping_contractivity() {
        let l1 = PolytopeNorm::l1(2);
        let linf = PolytopeNorm::linf(2);
        let pi = projective(&l1, &linf).unwrap();
        let eps = injective(&l1, &linf).unwrap();
        let doubled = PolytopeNorm::from_vertices(
            4,
            pi.vertices
                .clone()
                .unwrap()
                .into_iter()
                .map(|v| v.into_iter().map(|x| x * q(2, 1)).collect())
                .collect(),
        )
        .unwrap();
        let halved = PolytopeNorm::from_vertices(
            4,
            pi.vertices
                .clone()
                .unwrap()
                .into_iter()
                .map(|v| v.into_iter().map(|x| x * q(1, 2)).collect())
                .collect(),
        )
        .unwrap();
        for t in [&pi, &eps, &doubled, &halved] {
            let report = crossnorm_contractive_equivalence(t, &l1, &linf).unwrap();
            assert!(report.agree(), "{report}");
        }
    }

    #[test]
    fn factorization_through_the_projective_norm() {
        let l1 = PolytopeNorm::l1(2);
        // f(x ⊗ y) = (x₁y₁ + x₂y₂, x₁y₂): contractive from l1 × l1 to l1.
        let f = PolyLinearMap::new(
            vec![2, 2],
            vec![2],
            vec![qv(&[1, 0, 0, 1]), qv(&[0, 1, 0, 0])],
        )
        .unwrap();
        let ok = factorization_check(&f, &l1, &l1, &[&l1]).unwrap();
        assert!(ok.passed() && ok.direct.contractive);
        // Doubling breaks contractivity on both sides in the same place.
        let big = PolyLinearMap::new(
            vec![2, 2],
            vec![2],
            f.matrix
                .iter()
                .map(|r| r.iter().map(|x| x * q(2, 1)).collect())
                .collect(),
        )
        .unwrap();
        let bad = factorization_check(&big, &l1, &l1, &[&l1]).unwrap();
        assert!(bad.passed() && !bad.direct.contractive);
    }

    #[test]
    fn cofactorization_through_the_injective_norm() {
        let l1 = PolytopeNorm::l1(2);
        // g(e₁) = e₁ ⊗ e₁ and g(e₂) = e₂ ⊗ e₂.
        let mut matrix = vec![vec![BigRational::zero(); 2]; 4];
        matrix[0][0] = BigRational::one();
        matrix[3][1] = BigRational::one();
        let g = PolyLinearMap::new(vec![2], vec![2, 2], matrix).unwrap();
        let ok = cofactorization_check(&g, &[&l1], &l1, &l1).unwrap();
        assert!(ok.passed() && ok.direct.contractive);
        let big = PolyLinearMap::new(
            vec![2],
            vec![2, 2],
            g.matrix
                .iter()
                .map(|r| r.iter().map(|x| x * q(3, 1)).collect())
                .collect(),
        )
        .unwrap();
        let bad = cofactorization_check(&big, &[&l1], &l1, &l1).unwrap();
        assert!(bad.passed() && !bad.direct.contractive);
    }

    #[test]
    fn contractivity_to_the_scalar_line_is_the_pairing_bound() {
        // The pairing (x, y) ↦ ⟨x, y⟩ is contractive for l1 × linf but
        // not for l1 × l1 scaled up.
        let l1 = PolytopeNorm::l1(2);
        let linf = PolytopeNorm::linf(2);
        let cap = cap_map(2);
        assert!(is_contractive(&cap, &[&l1, &linf], &[])
            .unwrap()
            .contractive);
        let doubled = PolyLinearMap::new(
            vec![2, 2],
            Vec::new(),
            vec![cap.matrix[0].iter().map(|x| x * q(2, 1)).collect()],
        )
        .unwrap();
        let report = is_contractive(&doubled, &[&l1, &linf], &[]).unwrap();
        assert!(!report.contractive);
        assert_eq!(report.first_violation.unwrap().value, fin(2, 1));
    }

    #[test]
    fn shape_mismatches_are_reported() {
        let l1 = PolytopeNorm::l1(2);
        assert!(matches!(
            is_contractive(&merge_map(2, 2), &[&l1], &[&l1]),
            Err(NormError::DimensionMismatch(1, 2))
        ));
        assert!(matches!(
            TensorElement::new(vec![2, 2], qv(&[1, 0])),
            Err(NormError::DimensionMismatch(2, 4))
        ));
    }
}
