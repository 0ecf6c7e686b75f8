//! Exact linear feasibility over the rationals.
//!
//! A phase-1 simplex with Bland's rule on a dense rational tableau. Every
//! geometric yes/no question in this crate (cone nonemptiness, relative
//! interior points, membership, implicit equalities) reduces to feasibility
//! of a system `A x = b`, `C x >= d` with free variables, which is what this
//! module decides. Bland's rule guarantees termination; desk-scale problem
//! sizes keep the rational pivots cheap.

use num::{One, Signed, Zero};

use crate::linalg::{Rat, RatVec};

/// A linear condition `coeffs . x  (= | >=)  rhs`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: RatVec,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: RatVec, rhs: Rat) -> Self {
        Constraint { coeffs, rhs }
    }
}

/// Searches for a rational point satisfying all equalities and inequalities
/// (`>=`). Variables are free (unbounded in both directions). Returns a
/// witness or `None` when the system is infeasible.
pub fn feasible_point(
    num_vars: usize,
    equalities: &[Constraint],
    inequalities: &[Constraint],
) -> Option<RatVec> {
    // Standard form: x = xp - xm with xp, xm >= 0; each inequality row gets a
    // surplus variable; every row gets an artificial variable after its rhs
    // is normalized nonnegative. Phase 1 minimizes the sum of artificials.
    let n_rows = equalities.len() + inequalities.len();
    if n_rows == 0 {
        return Some(RatVec::zero(num_vars));
    }
    let n_structural = 2 * num_vars + inequalities.len();
    let n_cols = n_structural + n_rows; // + artificials

    // tableau rows: [structural | artificial | rhs]
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n_rows);
    let all: Vec<(&Constraint, bool)> = equalities
        .iter()
        .map(|c| (c, true))
        .chain(inequalities.iter().map(|c| (c, false)))
        .collect();
    for (i, (c, is_eq)) in all.iter().enumerate() {
        debug_assert_eq!(c.coeffs.dim(), num_vars);
        let mut row = vec![Rat::zero(); n_cols + 1];
        for (j, a) in c.coeffs.0.iter().enumerate() {
            row[j] = a.clone();
            row[num_vars + j] = -a.clone();
        }
        if !is_eq {
            // c . x - s = rhs, s >= 0
            let s_col = 2 * num_vars + (i - equalities.len());
            row[s_col] = -Rat::one();
        }
        row[n_cols] = c.rhs.clone();
        if row[n_cols].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[n_structural + i] = Rat::one();
        rows.push(row);
    }

    // Phase-1 objective: minimize the sum of artificials. Reduced cost row =
    // -(sum of constraint rows) on structural columns.
    let mut obj = vec![Rat::zero(); n_cols + 1];
    for row in &rows {
        for (j, v) in obj.iter_mut().enumerate() {
            if j < n_structural || j == n_cols {
                *v -= &row[j];
            }
        }
    }

    let mut basis: Vec<usize> = (0..n_rows).map(|i| n_structural + i).collect();

    loop {
        // Bland: entering = lowest-index column with negative reduced cost.
        let Some(enter) = (0..n_cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test, ties broken by lowest basis variable index (Bland).
        let mut best: Option<(usize, Rat)> = None;
        for (r, row) in rows.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[n_cols] / &row[enter];
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && basis[r] < basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        let Some((leave_row, _)) = best else {
            // Unbounded phase-1 objective cannot happen (bounded below by 0),
            // but guard anyway.
            return None;
        };

        // Pivot on (leave_row, enter).
        let piv = rows[leave_row][enter].clone();
        for v in rows[leave_row].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..n_rows {
            if r != leave_row && !rows[r][enter].is_zero() {
                let f = rows[r][enter].clone();
                for j in 0..=n_cols {
                    let d = &rows[leave_row][j] * &f;
                    rows[r][j] = &rows[r][j] - &d;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=n_cols {
                let d = &rows[leave_row][j] * &f;
                obj[j] = &obj[j] - &d;
            }
        }
        basis[leave_row] = enter;
    }

    // Feasible iff the residual artificial sum is zero.
    let mut resid = Rat::zero();
    for (r, row) in rows.iter().enumerate() {
        if basis[r] >= n_structural {
            resid += &row[n_cols];
        }
    }
    if !resid.is_zero() {
        return None;
    }

    let mut x = RatVec::zero(num_vars);
    for (r, &b) in basis.iter().enumerate() {
        if b < num_vars {
            x.0[b] += &rows[r][n_cols];
        } else if b < 2 * num_vars {
            x.0[b - num_vars] -= &rows[r][n_cols];
        }
    }
    debug_assert!(check_point(&x, equalities, inequalities));
    Some(x)
}

/// Verifies a candidate point against the system (used in debug assertions
/// and as a cheap certificate check).
pub fn check_point(x: &RatVec, equalities: &[Constraint], inequalities: &[Constraint]) -> bool {
    equalities.iter().all(|c| c.coeffs.dot(x) == c.rhs)
        && inequalities.iter().all(|c| c.coeffs.dot(x) >= c.rhs)
}
