//! Two-phase primal simplex over exact rationals.
//!
//! Solves `max c·x` subject to `A x = b`, `x ≥ 0`.  Pivoting follows
//! Bland's rule (smallest entering index; smallest leaving basic variable
//! among the minimum ratios), which never cycles, so termination needs no
//! perturbation and every reported optimum is exact.

use num::{BigRational, One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        solution: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= inv.clone();
        }
        self.rhs[r] /= inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for k in 0..self.rows[i].len() {
                let sub = factor.clone() * self.rows[r][k].clone();
                self.rows[i][k] -= sub;
            }
            let sub = factor * self.rhs[r].clone();
            self.rhs[i] -= sub;
        }
        self.basis[r] = c;
    }

    /// Reduced cost of column `c` under the objective `obj`.
    fn reduced_cost(&self, obj: &[BigRational], c: usize) -> BigRational {
        let mut red = obj[c].clone();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !obj[bi].is_zero() && !self.rows[i][c].is_zero() {
                red -= obj[bi].clone() * self.rows[i][c].clone();
            }
        }
        red
    }

    /// Run Bland-rule iterations to optimality; `false` means unbounded.
    fn optimize(&mut self, obj: &[BigRational], ncols: usize) -> bool {
        loop {
            let entering = (0..ncols).find(|&c| {
                !self.basis.contains(&c) && self.reduced_cost(obj, c).is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = self.rhs[i].clone() / self.rows[i][c].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn objective_value(&self, obj: &[BigRational]) -> BigRational {
        let mut v = BigRational::zero();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !obj[bi].is_zero() {
                v += obj[bi].clone() * self.rhs[i].clone();
            }
        }
        v
    }
}

/// Maximize `c·x` over `A x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // Phase 1 tableau: real columns then one artificial per row, with
    // nonnegative right-hand sides.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = a[r].clone();
        let mut rv = b[r].clone();
        if rv.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            rv = -rv;
        }
        for k in 0..m {
            row.push(if k == r {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        rows.push(row);
        rhs.push(rv);
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
    };

    let mut phase1 = vec![BigRational::zero(); n + m];
    for k in n..n + m {
        phase1[k] = -BigRational::one();
    }
    let bounded = t.optimize(&phase1, n + m);
    debug_assert!(bounded, "phase-1 objective is bounded above by zero");
    if !t.objective_value(&phase1).is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive surviving artificial variables out of the basis; a row with no
    // real pivot available is redundant and gets dropped.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&col| !t.rows[r][col].is_zero()) {
                t.pivot(r, col);
                r += 1;
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }
    for row in t.rows.iter_mut() {
        row.truncate(n);
    }

    if !t.optimize(c, n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![BigRational::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        solution[bi] = t.rhs[i].clone();
    }
    LpOutcome::Optimal {
        value: t.objective_value(c),
        solution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn optimum_on_a_triangle() {
        // max x + 2y over x + y + s = 1: optimum at y = 1.
        let a = vec![vec![q(1, 1), q(1, 1), q(1, 1)]];
        let b = vec![q(1, 1)];
        let c = vec![q(1, 1), q(2, 1), q(0, 1)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, q(2, 1));
                assert_eq!(solution, vec![q(0, 1), q(1, 1), q(0, 1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasibility_detected() {
        // x + y = -1 has no nonnegative solution.
        let a = vec![vec![q(1, 1), q(1, 1)]];
        let b = vec![q(-1, 1)];
        let c = vec![q(1, 1), q(0, 1)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Infeasible);
    }

    #[test]
    fn unboundedness_detected() {
        // max x subject to 0·x = 0.
        let a = vec![vec![q(0, 1)]];
        let b = vec![q(0, 1)];
        let c = vec![q(1, 1)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // The same constraint twice; the second row goes through the
        // artificial clean-up path.
        let a = vec![
            vec![q(1, 1), q(1, 1)],
            vec![q(2, 1), q(2, 1)],
        ];
        let b = vec![q(1, 1), q(2, 1)];
        let c = vec![q(1, 1), q(0, 1)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exact_fractions_survive() {
        // max x over 3x = 1: x = 1/3 exactly.
        let a = vec![vec![q(3, 1)]];
        let b = vec![q(1, 1)];
        let c = vec![q(1, 1)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
