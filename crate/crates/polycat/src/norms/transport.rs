//! Norms carried across a map: pushforward onto an output, pullback onto
//! an input, and the identities tying both to the product norms.

use super::la::{dot, index_tuples, kernel_basis, kron};
use super::polytope::{gauge, polar_vertices, NormError, PolytopeNorm};
use super::tensor::{cap_map, injective, merge_map, projective, split_map, PolyLinearMap};
use super::ExtendedRational;
use num::{BigRational, One, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportSide {
    Pullback,
    Pushforward,
}

impl fmt::Display for TransportSide {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportSide::Pullback => write!(out, "pullback"),
            TransportSide::Pushforward => write!(out, "pushforward"),
        }
    }
}

/// A norm induced on one boundary position of a map.  A pushforward is
/// carried by ball vertices (the images of extremal data) and may be
/// extended — infinite off their span.  A pullback is carried by
/// functionals (the compositions with extremal output measurements) and
/// may be a seminorm — zero on their common kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportedNorm {
    pub dim: usize,
    pub side: TransportSide,
    pub generators: Vec<Vec<BigRational>>,
    pub degenerate_directions: Vec<Vec<BigRational>>,
    pub is_extended: bool,
    pub is_seminorm: bool,
}

impl TransportedNorm {
    fn from_generators(
        dim: usize,
        side: TransportSide,
        mut generators: Vec<Vec<BigRational>>,
    ) -> Self {
        generators.sort();
        generators.dedup();
        let degenerate_directions = kernel_basis(&generators);
        let degenerate = !degenerate_directions.is_empty();
        TransportedNorm {
            dim,
            side,
            generators,
            degenerate_directions,
            is_extended: degenerate && side == TransportSide::Pushforward,
            is_seminorm: degenerate && side == TransportSide::Pullback,
        }
    }

    pub fn eval(&self, x: &[BigRational]) -> Result<ExtendedRational, NormError> {
        if x.len() != self.dim {
            return Err(NormError::DimensionMismatch(x.len(), self.dim));
        }
        match self.side {
            TransportSide::Pushforward => Ok(gauge(&self.generators, x)),
            TransportSide::Pullback => {
                let mut best = BigRational::zero();
                for g in &self.generators {
                    let value = dot(g, x);
                    if value > best {
                        best = value;
                    }
                }
                Ok(ExtendedRational::Finite(best))
            }
        }
    }

    /// Certify the transported ball as an ordinary polytope norm, when it
    /// is one: finite, positive definite, and of enumerable dimension.
    pub fn to_polytope(&self) -> Result<PolytopeNorm, NormError> {
        match self.side {
            TransportSide::Pushforward => {
                PolytopeNorm::from_vertices(self.dim, self.generators.clone())
            }
            TransportSide::Pullback => {
                let vertices = polar_vertices(&self.generators, self.dim)?;
                PolytopeNorm::from_parts_checked(self.dim, vertices, self.generators.clone())
            }
        }
    }
}

fn vertex_sets<'a>(
    norms: &[&'a PolytopeNorm],
) -> Result<Vec<&'a Vec<Vec<BigRational>>>, NormError> {
    norms
        .iter()
        .map(|n| n.vertices.as_ref().ok_or(NormError::MissingVertices))
        .collect()
}

fn facet_sets<'a>(
    norms: &[&'a PolytopeNorm],
) -> Result<Vec<&'a Vec<Vec<BigRational>>>, NormError> {
    norms
        .iter()
        .map(|n| n.facets.as_ref().ok_or(NormError::MissingFacets))
        .collect()
}

fn check_positions(norms: &[&PolytopeNorm], dims: &[usize]) -> Result<(), NormError> {
    if norms.len() != dims.len() {
        return Err(NormError::DimensionMismatch(norms.len(), dims.len()));
    }
    for (n, d) in norms.iter().zip(dims) {
        if n.dim != *d {
            return Err(NormError::DimensionMismatch(n.dim, *d));
        }
    }
    Ok(())
}

fn kron_choice(sets: &[&Vec<Vec<BigRational>>], choice: &[usize]) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for (set, &k) in sets.iter().zip(choice) {
        out = kron(&out, &set[k]);
    }
    out
}

/// The norm induced on output `output` of `f` by pushing the input balls
/// through and measuring every other output against its facets: the ball
/// is the absolutely convex hull of the partial contractions.
pub fn pushforward_norm(
    f: &PolyLinearMap,
    output: usize,
    dom_norms: &[&PolytopeNorm],
    other_cod_norms: &[&PolytopeNorm],
) -> Result<TransportedNorm, NormError> {
    if output >= f.cod_dims.len() {
        return Err(NormError::DimensionMismatch(output, f.cod_dims.len()));
    }
    let mut other_dims = f.cod_dims.clone();
    let dim = other_dims.remove(output);
    check_positions(dom_norms, &f.dom_dims)?;
    check_positions(other_cod_norms, &other_dims)?;
    let vertices = vertex_sets(dom_norms)?;
    let facets = facet_sets(other_cod_norms)?;
    let pre = &facets[..output];
    let post = &facets[output..];
    let p2: usize = f.cod_dims[output + 1..].iter().product();
    let vertex_lengths: Vec<usize> = vertices.iter().map(|s| s.len()).collect();
    let pre_lengths: Vec<usize> = pre.iter().map(|s| s.len()).collect();
    let post_lengths: Vec<usize> = post.iter().map(|s| s.len()).collect();
    let mut generators = Vec::new();
    for vertex_choice in index_tuples(&vertex_lengths) {
        let x = kron_choice(&vertices, &vertex_choice);
        let y: Vec<BigRational> = f.matrix.iter().map(|row| dot(row, &x)).collect();
        for pre_choice in index_tuples(&pre_lengths) {
            let phi_pre = kron_choice(pre, &pre_choice);
            for post_choice in index_tuples(&post_lengths) {
                let phi_post = kron_choice(post, &post_choice);
                let mut z = vec![BigRational::zero(); dim];
                for (a, pa) in phi_pre.iter().enumerate() {
                    for t in 0..dim {
                        for (c, pc) in phi_post.iter().enumerate() {
                            let value = &y[(a * dim + t) * p2 + c];
                            if !value.is_zero() && !pa.is_zero() && !pc.is_zero() {
                                z[t] += value * pa * pc;
                            }
                        }
                    }
                }
                let neg: Vec<BigRational> = z.iter().map(|v| -v.clone()).collect();
                generators.push(z);
                generators.push(neg);
            }
        }
    }
    Ok(TransportedNorm::from_generators(
        dim,
        TransportSide::Pushforward,
        generators,
    ))
}

/// The norm induced on input `input` of `f` by pulling the output balls
/// back: a vector is measured by the largest value any composite of `f`
/// with extremal data elsewhere assigns to it.
pub fn pullback_norm(
    f: &PolyLinearMap,
    input: usize,
    other_dom_norms: &[&PolytopeNorm],
    cod_norms: &[&PolytopeNorm],
) -> Result<TransportedNorm, NormError> {
    if input >= f.dom_dims.len() {
        return Err(NormError::DimensionMismatch(input, f.dom_dims.len()));
    }
    let mut other_dims = f.dom_dims.clone();
    let dim = other_dims.remove(input);
    check_positions(other_dom_norms, &other_dims)?;
    check_positions(cod_norms, &f.cod_dims)?;
    let vertices = vertex_sets(other_dom_norms)?;
    let facets = facet_sets(cod_norms)?;
    let pre = &vertices[..input];
    let post = &vertices[input..];
    let r2: usize = f.dom_dims[input + 1..].iter().product();
    let facet_lengths: Vec<usize> = facets.iter().map(|s| s.len()).collect();
    let pre_lengths: Vec<usize> = pre.iter().map(|s| s.len()).collect();
    let post_lengths: Vec<usize> = post.iter().map(|s| s.len()).collect();
    let mut generators = Vec::new();
    for facet_choice in index_tuples(&facet_lengths) {
        let phi = kron_choice(&facets, &facet_choice);
        // The row vector φᵀ·M, one entry per domain multi-index.
        let cols = f.matrix.first().map(|r| r.len()).unwrap_or(0);
        let mut pulled = vec![BigRational::zero(); cols];
        for (row, weight) in f.matrix.iter().zip(&phi) {
            if weight.is_zero() {
                continue;
            }
            for (slot, entry) in pulled.iter_mut().zip(row) {
                if !entry.is_zero() {
                    *slot += weight * entry;
                }
            }
        }
        for pre_choice in index_tuples(&pre_lengths) {
            let x_pre = kron_choice(pre, &pre_choice);
            for post_choice in index_tuples(&post_lengths) {
                let x_post = kron_choice(post, &post_choice);
                let mut z = vec![BigRational::zero(); dim];
                for (u, xu) in x_pre.iter().enumerate() {
                    for (k, zk) in z.iter_mut().enumerate() {
                        for (w, xw) in x_post.iter().enumerate() {
                            let value = &pulled[(u * dim + k) * r2 + w];
                            if !value.is_zero() && !xu.is_zero() && !xw.is_zero() {
                                *zk += value * xu * xw;
                            }
                        }
                    }
                }
                let neg: Vec<BigRational> = z.iter().map(|v| -v.clone()).collect();
                generators.push(z);
                generators.push(neg);
            }
        }
    }
    Ok(TransportedNorm::from_generators(
        dim,
        TransportSide::Pullback,
        generators,
    ))
}

/// Mutual-containment comparison of two convex hulls, point by point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallComparison {
    pub left_points_checked: u64,
    pub right_points_checked: u64,
    pub equal: bool,
    pub first_gap: Option<Vec<BigRational>>,
}

impl BallComparison {
    pub fn passed(&self) -> bool {
        self.equal
    }
}

impl fmt::Display for BallComparison {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_gap {
            None => write!(
                out,
                "balls equal ({} + {} generator points verified)",
                self.left_points_checked, self.right_points_checked
            ),
            Some(p) => write!(out, "balls differ: {p:?} lies in one hull only"),
        }
    }
}

fn hulls_equal(left: &[Vec<BigRational>], right: &[Vec<BigRational>]) -> BallComparison {
    let one = ExtendedRational::Finite(BigRational::one());
    let mut left_points_checked = 0u64;
    for p in left {
        left_points_checked += 1;
        if gauge(right, p) > one {
            return BallComparison {
                left_points_checked,
                right_points_checked: 0,
                equal: false,
                first_gap: Some(p.clone()),
            };
        }
    }
    let mut right_points_checked = 0u64;
    for p in right {
        right_points_checked += 1;
        if gauge(left, p) > one {
            return BallComparison {
                left_points_checked,
                right_points_checked,
                equal: false,
                first_gap: Some(p.clone()),
            };
        }
    }
    BallComparison {
        left_points_checked,
        right_points_checked,
        equal: true,
        first_gap: None,
    }
}

/// The projective norm is the pushforward of the factor norms along the
/// regrouping map `(a, b) → (a·b)`: both balls are compared generator by
/// generator.
pub fn projective_matches_pushforward(
    n1: &PolytopeNorm,
    n2: &PolytopeNorm,
) -> Result<BallComparison, NormError> {
    let pi = projective(n1, n2)?;
    let push = pushforward_norm(&merge_map(n1.dim, n2.dim), 0, &[n1, n2], &[])?;
    let vertices = pi.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    Ok(hulls_equal(vertices, &push.generators))
}

/// The injective norm is the pullback of the factor norms along the
/// regrouping map `(a·b) → (a, b)`: two facet families cut out the same
/// ball exactly when their convex hulls coincide, which is what is
/// compared.
pub fn injective_matches_pullback(
    n1: &PolytopeNorm,
    n2: &PolytopeNorm,
) -> Result<BallComparison, NormError> {
    let eps = injective(n1, n2)?;
    let pull = pullback_norm(&split_map(n1.dim, n2.dim), 0, &[], &[n1, n2])?;
    let facets = eps.facets.as_ref().ok_or(NormError::MissingFacets)?;
    Ok(hulls_equal(facets, &pull.generators))
}

/// The dual norm is the pullback along the pairing `(a, a) → ()` with the
/// original norm sitting on the other input.
pub fn dual_matches_pullback_along_cap(n: &PolytopeNorm) -> Result<BallComparison, NormError> {
    let pull = pullback_norm(&cap_map(n.dim), 0, &[n], &[])?;
    let dual_facets = n.vertices.as_ref().ok_or(NormError::MissingVertices)?;
    Ok(hulls_equal(dual_facets, &pull.generators))
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
    fn pushforward_along_merge_is_projective() {
        let l1 = PolytopeNorm::l1(2);
        let linf = PolytopeNorm::linf(2);
        for (a, b) in [(&l1, &l1), (&l1, &linf), (&linf, &linf)] {
            let report = projective_matches_pushforward(a, b).unwrap();
            assert!(report.passed(), "{report}");
        }
        // Beyond the facet enumerator the comparison runs on gauges alone.
        let wide = projective_matches_pushforward(&PolytopeNorm::l1(3), &l1).unwrap();
        assert!(wide.passed(), "{wide}");
    }

    #[test]
    fn pullback_along_split_is_injective() {
        let l1 = PolytopeNorm::l1(2);
        let linf = PolytopeNorm::linf(2);
        for (a, b) in [(&l1, &l1), (&linf, &l1), (&linf, &linf)] {
            let report = injective_matches_pullback(a, b).unwrap();
            assert!(report.passed(), "{report}");
        }
        let wide = injective_matches_pullback(&PolytopeNorm::linf(3), &l1).unwrap();
        assert!(wide.passed(), "{wide}");
    }

    #[test]
    fn pullback_along_the_pairing_is_the_dual_norm() {
        let hexagon = PolytopeNorm::from_vertices(
            2,
            vec![
                qv(&[2, 0]),
                qv(&[-2, 0]),
                qv(&[1, 1]),
                qv(&[-1, -1]),
                qv(&[1, -1]),
                qv(&[-1, 1]),
            ],
        )
        .unwrap();
        for n in [PolytopeNorm::l1(2), PolytopeNorm::linf(3), hexagon] {
            let report = dual_matches_pullback_along_cap(&n).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn pullback_values_equal_dual_values() {
        let l1 = PolytopeNorm::l1(2);
        let pull = pullback_norm(&cap_map(2), 0, &[&l1], &[]).unwrap();
        for f in [qv(&[1, 0]), qv(&[3, -2]), vec![q(1, 2), q(5, 2)]] {
            assert_eq!(pull.eval(&f).unwrap(), l1.dual_eval(&f).unwrap());
        }
    }

    #[test]
    fn degenerate_pushforward_is_extended() {
        let l1 = PolytopeNorm::l1(2);
        // Projection onto the first coordinate, read as a map 2 → 2.
        let f = PolyLinearMap::new(
            vec![2],
            vec![2],
            vec![qv(&[1, 0]), qv(&[0, 0])],
        )
        .unwrap();
        let push = pushforward_norm(&f, 0, &[&l1], &[]).unwrap();
        assert!(push.is_extended && !push.is_seminorm);
        assert_eq!(push.degenerate_directions.len(), 1);
        assert_eq!(push.eval(&qv(&[0, 1])).unwrap(), ExtendedRational::Infinite);
        assert_eq!(
            push.eval(&qv(&[-3, 0])).unwrap(),
            ExtendedRational::Finite(q(3, 1))
        );
        assert!(matches!(
            push.to_polytope(),
            Err(NormError::NotSpanning(1, 2))
        ));
    }

    #[test]
    fn degenerate_pullback_is_a_seminorm() {
        let l1 = PolytopeNorm::l1(2);
        let f = PolyLinearMap::new(
            vec![2],
            vec![2],
            vec![qv(&[1, 0]), qv(&[0, 0])],
        )
        .unwrap();
        let pull = pullback_norm(&f, 0, &[], &[&l1]).unwrap();
        assert!(pull.is_seminorm && !pull.is_extended);
        assert_eq!(
            pull.eval(&qv(&[0, 7])).unwrap(),
            ExtendedRational::Finite(q(0, 1))
        );
        assert_eq!(
            pull.eval(&qv(&[-2, 7])).unwrap(),
            ExtendedRational::Finite(q(2, 1))
        );
    }

    #[test]
    fn transported_polytopes_agree_with_the_product_norms() {
        let l1 = PolytopeNorm::l1(2);
        let push = pushforward_norm(&merge_map(2, 2), 0, &[&l1, &l1], &[])
            .unwrap()
            .to_polytope()
            .unwrap();
        let pull = pullback_norm(&split_map(2, 2), 0, &[], &[&l1, &l1])
            .unwrap()
            .to_polytope()
            .unwrap();
        let pi = projective(&l1, &l1).unwrap();
        let eps = injective(&l1, &l1).unwrap();
        let diag = qv(&[1, 0, 0, 1]);
        let skew = vec![q(1, 2), q(3, 1), q(-1, 1), q(0, 1)];
        for x in [&diag, &skew] {
            assert_eq!(push.eval(x).unwrap(), pi.eval(x).unwrap());
            assert_eq!(pull.eval(x).unwrap(), eps.eval(x).unwrap());
        }
    }
}
