//! Small exact linear algebra: inner products, Kronecker products,
//! Gaussian elimination for square solves, rank, kernel, and image.

use num::{BigRational, One, Zero};

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigRational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn kron(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn matvec(matrix: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    matrix.iter().map(|row| dot(row, x)).collect()
}

/// Row echelon elimination in place; returns the pivot columns.
fn eliminate(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x /= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in 0..ncols {
                    let sub = factor.clone() * rows[r][c].clone();
                    rows[i][c] -= sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn matrix_rank(matrix: &[Vec<BigRational>]) -> usize {
    let mut rows = matrix.to_vec();
    eliminate(&mut rows).len()
}

/// Solve the square system `A y = b` exactly; `None` if `A` is singular.
pub fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut rows);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut y = vec![BigRational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        y[col] = rows[r][n].clone();
    }
    Some(y)
}

/// Basis of the null space of the matrix (columns are the variables).
pub fn kernel_basis(matrix: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let ncols = matrix.first().map(|r| r.len()).unwrap_or(0);
    let mut rows = matrix.to_vec();
    let pivots = eliminate(&mut rows);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (r, &col) in pivots.iter().enumerate() {
            v[col] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// A basis of the column space: the columns at pivot positions.
pub fn image_basis(matrix: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if matrix.is_empty() {
        return Vec::new();
    }
    let mut rows = matrix.to_vec();
    let pivots = eliminate(&mut rows);
    pivots
        .into_iter()
        .map(|col| matrix.iter().map(|row| row[col].clone()).collect())
        .collect()
}

/// All `k`-element index subsets of `0..n`, lexicographically.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] + (k - i) < n {
                break;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// The full product `0..lengths[0] × 0..lengths[1] × …`, lexicographically
/// with the first position slowest.  An empty length list yields the one
/// empty tuple.
pub fn index_tuples(lengths: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &len in lengths {
        let mut next = Vec::with_capacity(out.len() * len);
        for prefix in &out {
            for k in 0..len {
                let mut tuple = prefix.clone();
                tuple.push(k);
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn square_solve_and_singularity() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let y = solve_square(&a, &[q(3, 1), q(2, 1)]).unwrap();
        assert_eq!(y, vec![q(1, 1), q(1, 1)]);
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve_square(&singular, &[q(1, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn kernel_and_image_of_a_projection() {
        // Projection onto the first coordinate of Q^2.
        let p = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(0, 1)]];
        assert_eq!(matrix_rank(&p), 1);
        let k = kernel_basis(&p);
        assert_eq!(k, vec![vec![q(0, 1), q(1, 1)]]);
        let im = image_basis(&p);
        assert_eq!(im, vec![vec![q(1, 1), q(0, 1)]]);
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let s = index_subsets(4, 2);
        assert_eq!(
            s,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(index_subsets(16, 4).len(), 1820);
        assert_eq!(index_subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn kron_is_row_major() {
        let v = kron(&[q(1, 1), q(2, 1)], &[q(3, 1), q(4, 1)]);
        assert_eq!(v, vec![q(3, 1), q(4, 1), q(6, 1), q(8, 1)]);
    }
}
