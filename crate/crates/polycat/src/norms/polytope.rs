//! Polytope unit balls: gauges, polars, and checked vertex/facet pairs.

use super::la::{dot, index_subsets, matrix_rank, solve_square};
use super::simplex::{maximize, LpOutcome};
use super::ExtendedRational;
use num::{BigRational, One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("vector has length {0}, expected {1}")]
    DimensionMismatch(usize, usize),
    #[error("facet enumeration is implemented up to dimension 4, got {0}")]
    DimensionTooLarge(usize),
    #[error("generators do not span the space (rank {0} < {1})")]
    NotSpanning(usize, usize),
    #[error("generator set is not symmetric: missing the negation of {0:?}")]
    NotSymmetric(Vec<BigRational>),
    #[error("duality gap: {0:?} lies in one ball but not the other")]
    DualityGap(Vec<BigRational>),
    #[error("polytope data is empty")]
    Empty,
    #[error("no vertex data available for this computation")]
    MissingVertices,
    #[error("no facet data available for this computation")]
    MissingFacets,
}

/// Gauge of `x` with respect to the convex hull of `vertices`: the least
/// `t ≥ 0` with `x ∈ t·conv(V)`, or infinity when there is none.  Exact,
/// via `min Σλ` subject to `Σ λᵢ vᵢ = x`, `λ ≥ 0`.
pub fn gauge(vertices: &[Vec<BigRational>], x: &[BigRational]) -> ExtendedRational {
    let dim = x.len();
    let k = vertices.len();
    let mut a = vec![Vec::with_capacity(k); dim];
    for v in vertices {
        debug_assert_eq!(v.len(), dim);
        for (r, coord) in v.iter().enumerate() {
            a[r].push(coord.clone());
        }
    }
    let c = vec![-BigRational::one(); k];
    match maximize(&a, x, &c) {
        LpOutcome::Optimal { value, .. } => ExtendedRational::Finite(-value),
        LpOutcome::Infeasible => ExtendedRational::Infinite,
        LpOutcome::Unbounded => unreachable!("Σλ is bounded below by zero"),
    }
}

/// Vertices of the polar `{y : ⟨y,p⟩ ≤ 1 for all p}` of a spanning point
/// set, by enumerating supporting subsets of size `dim`.  Exact and
/// complete; restricted to `dim ≤ 4` where the subset count stays small.
pub fn polar_vertices(
    points: &[Vec<BigRational>],
    dim: usize,
) -> Result<Vec<Vec<BigRational>>, NormError> {
    if dim > 4 {
        return Err(NormError::DimensionTooLarge(dim));
    }
    if points.is_empty() {
        return Err(NormError::Empty);
    }
    for p in points {
        if p.len() != dim {
            return Err(NormError::DimensionMismatch(p.len(), dim));
        }
    }
    let rank = matrix_rank(points);
    if rank < dim {
        return Err(NormError::NotSpanning(rank, dim));
    }
    let ones = vec![BigRational::one(); dim];
    let mut vertices = Vec::new();
    for subset in index_subsets(points.len(), dim) {
        let system: Vec<Vec<BigRational>> = subset.iter().map(|&i| points[i].clone()).collect();
        let Some(y) = solve_square(&system, &ones) else {
            continue;
        };
        if points.iter().all(|p| dot(p, &y) <= BigRational::one()) {
            vertices.push(y);
        }
    }
    vertices.sort();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(NormError::Empty);
    }
    Ok(vertices)
}

/// A norm whose unit ball is a centrally symmetric polytope, carried as
/// vertex data (ball = convex hull), facet data (ball = `⟨f,x⟩ ≤ 1` for
/// all `f`), or both.  When both are present they were either certified
/// equal on construction or inherited from a certified pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeNorm {
    pub dim: usize,
    pub vertices: Option<Vec<Vec<BigRational>>>,
    pub facets: Option<Vec<Vec<BigRational>>>,
}

fn check_generators(
    generators: &[Vec<BigRational>],
    dim: usize,
) -> Result<(), NormError> {
    if generators.is_empty() {
        return Err(NormError::Empty);
    }
    for g in generators {
        if g.len() != dim {
            return Err(NormError::DimensionMismatch(g.len(), dim));
        }
    }
    for g in generators {
        let neg: Vec<BigRational> = g.iter().map(|x| -x.clone()).collect();
        if !generators.contains(&neg) {
            return Err(NormError::NotSymmetric(g.clone()));
        }
    }
    let rank = matrix_rank(generators);
    if rank < dim {
        return Err(NormError::NotSpanning(rank, dim));
    }
    Ok(())
}

impl PolytopeNorm {
    /// Build from both descriptions and certify that they cut out the same
    /// ball: every vertex satisfies every facet inequality, and every
    /// extreme point of the facet region lies in the hull of the vertices.
    /// Symmetry plus spanning rank keeps the facet region bounded, so the
    /// certificate is exact.  Restricted to `dim ≤ 4`.
    pub fn from_parts_checked(
        dim: usize,
        vertices: Vec<Vec<BigRational>>,
        facets: Vec<Vec<BigRational>>,
    ) -> Result<Self, NormError> {
        check_generators(&vertices, dim)?;
        check_generators(&facets, dim)?;
        for v in &vertices {
            for f in &facets {
                if dot(f, v) > BigRational::one() {
                    return Err(NormError::DualityGap(v.clone()));
                }
            }
        }
        for corner in polar_vertices(&facets, dim)? {
            match gauge(&vertices, &corner) {
                ExtendedRational::Finite(t) if t <= BigRational::one() => {}
                _ => return Err(NormError::DualityGap(corner)),
            }
        }
        Ok(PolytopeNorm {
            dim,
            vertices: Some(vertices),
            facets: Some(facets),
        })
    }

    /// Build from vertex data alone, enumerating the facets (`dim ≤ 4`).
    pub fn from_vertices(dim: usize, vertices: Vec<Vec<BigRational>>) -> Result<Self, NormError> {
        check_generators(&vertices, dim)?;
        let facets = polar_vertices(&vertices, dim)?;
        Self::from_parts_checked(dim, vertices, facets)
    }

    /// Vertex data without facets; any dimension, values via the gauge LP.
    pub fn vertex_only(dim: usize, vertices: Vec<Vec<BigRational>>) -> Result<Self, NormError> {
        check_generators(&vertices, dim)?;
        Ok(PolytopeNorm {
            dim,
            vertices: Some(vertices),
            facets: None,
        })
    }

    /// Facet data without vertices; any dimension, values via inner
    /// products.
    pub fn facet_only(dim: usize, facets: Vec<Vec<BigRational>>) -> Result<Self, NormError> {
        check_generators(&facets, dim)?;
        Ok(PolytopeNorm {
            dim,
            vertices: None,
            facets: Some(facets),
        })
    }

    /// The `ℓ¹` ball: vertices `±eᵢ`, facets all sign vectors.
    pub fn l1(dim: usize) -> Self {
        let vertices = signed_unit_vectors(dim);
        let facets = sign_vectors(dim);
        PolytopeNorm {
            dim,
            vertices: Some(vertices),
            facets: Some(facets),
        }
    }

    /// The `ℓ^∞` ball: vertices all sign vectors, facets `±eᵢ`.
    pub fn linf(dim: usize) -> Self {
        let vertices = sign_vectors(dim);
        let facets = signed_unit_vectors(dim);
        PolytopeNorm {
            dim,
            vertices: Some(vertices),
            facets: Some(facets),
        }
    }

    /// Swap the roles of vertices and facets: the norm with the polar ball.
    pub fn polar(&self) -> PolytopeNorm {
        PolytopeNorm {
            dim: self.dim,
            vertices: self.facets.clone(),
            facets: self.vertices.clone(),
        }
    }

    /// The norm of `x`, exactly.  Facet data gives a maximum of inner
    /// products (valid because the ball is symmetric and spanning);
    /// otherwise the gauge LP over the vertices.
    pub fn eval(&self, x: &[BigRational]) -> Result<ExtendedRational, NormError> {
        if x.len() != self.dim {
            return Err(NormError::DimensionMismatch(x.len(), self.dim));
        }
        if let Some(facets) = &self.facets {
            let mut best = BigRational::zero();
            for f in facets {
                let v = dot(f, x);
                if v > best {
                    best = v;
                }
            }
            return Ok(ExtendedRational::Finite(best));
        }
        match &self.vertices {
            Some(vertices) => Ok(gauge(vertices, x)),
            None => Err(NormError::MissingVertices),
        }
    }

    /// The dual norm of a functional `f`: its maximum over the unit ball.
    /// With vertex data that is a maximum over vertices; with facet data
    /// only, it is the gauge of the polar hull.
    pub fn dual_eval(&self, f: &[BigRational]) -> Result<ExtendedRational, NormError> {
        if f.len() != self.dim {
            return Err(NormError::DimensionMismatch(f.len(), self.dim));
        }
        if let Some(vertices) = &self.vertices {
            let mut best = BigRational::zero();
            for v in vertices {
                let value = dot(f, v);
                if value > best {
                    best = value;
                }
            }
            return Ok(ExtendedRational::Finite(best));
        }
        match &self.facets {
            Some(facets) => Ok(gauge(facets, f)),
            None => Err(NormError::MissingFacets),
        }
    }

    /// Membership of `x` in the unit ball.
    pub fn contains(&self, x: &[BigRational]) -> Result<bool, NormError> {
        Ok(self.eval(x)? <= ExtendedRational::Finite(BigRational::one()))
    }
}

fn signed_unit_vectors(dim: usize) -> Vec<Vec<BigRational>> {
    let mut out = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        for sign in [BigRational::one(), -BigRational::one()] {
            let mut v = vec![BigRational::zero(); dim];
            v[i] = sign;
            out.push(v);
        }
    }
    out.sort();
    out
}

fn sign_vectors(dim: usize) -> Vec<Vec<BigRational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * 2);
        for prefix in &out {
            for sign in [BigRational::one(), -BigRational::one()] {
                let mut v = prefix.clone();
                v.push(sign);
                next.push(v);
            }
        }
        out = next;
    }
    out.sort();
    out
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

    #[test]
    fn l1_gauge_values() {
        let n = PolytopeNorm::l1(2);
        assert_eq!(
            n.eval(&[q(3, 2), q(-1, 2)]).unwrap(),
            ExtendedRational::Finite(q(2, 1))
        );
        // Vertex path and facet path agree.
        let vertex_only = PolytopeNorm::vertex_only(2, n.vertices.clone().unwrap()).unwrap();
        assert_eq!(
            vertex_only.eval(&[q(3, 2), q(-1, 2)]).unwrap(),
            ExtendedRational::Finite(q(2, 1))
        );
    }

    #[test]
    fn linf_and_l1_are_mutually_polar() {
        let l1 = PolytopeNorm::l1(3);
        let linf = PolytopeNorm::linf(3);
        assert_eq!(l1.polar().vertices, linf.vertices);
        // Both pairs pass the duality certificate.
        PolytopeNorm::from_parts_checked(
            3,
            l1.vertices.clone().unwrap(),
            l1.facets.clone().unwrap(),
        )
        .unwrap();
    }

    #[test]
    fn polar_of_the_cross_polytope_is_the_cube() {
        let mut corners = polar_vertices(&signed_unit_vectors(2), 2).unwrap();
        corners.sort();
        assert_eq!(corners, sign_vectors(2));
    }

    #[test]
    fn from_vertices_builds_the_cube_facets() {
        let n = PolytopeNorm::from_vertices(3, sign_vectors(3)).unwrap();
        let mut expected = signed_unit_vectors(3);
        expected.sort();
        assert_eq!(n.facets.unwrap(), expected);
    }

    #[test]
    fn duality_gap_detected() {
        // Square vertices paired with diamond facets: the corner (1,1)
        // violates the facet x₁+x₂ ≤ 1, so the pair cannot certify.
        let err = PolytopeNorm::from_parts_checked(2, sign_vectors(2), sign_vectors(2));
        assert!(matches!(err, Err(NormError::DualityGap(_))));
    }

    #[test]
    fn degenerate_data_rejected() {
        // Not symmetric.
        assert!(matches!(
            PolytopeNorm::vertex_only(2, vec![qv(&[1, 0]), qv(&[0, 1])]),
            Err(NormError::NotSymmetric(_))
        ));
        // Not spanning.
        assert!(matches!(
            PolytopeNorm::vertex_only(2, vec![qv(&[1, 0]), qv(&[-1, 0])]),
            Err(NormError::NotSpanning(1, 2))
        ));
    }

    #[test]
    fn gauge_outside_the_span_is_infinite() {
        let vertices = vec![qv(&[1, 0]), qv(&[-1, 0])];
        assert_eq!(gauge(&vertices, &qv(&[0, 1])), ExtendedRational::Infinite);
        assert_eq!(
            gauge(&vertices, &qv(&[-3, 0])),
            ExtendedRational::Finite(q(3, 1))
        );
    }

    #[test]
    fn dual_eval_is_the_support_function() {
        let n = PolytopeNorm::l1(2);
        // Dual of l1 is linf: sup over ±e_i of <f, v> = max |f_i|.
        assert_eq!(
            n.dual_eval(&[q(1, 2), q(-2, 1)]).unwrap(),
            ExtendedRational::Finite(q(2, 1))
        );
    }
}
