//! Exact oracle for the residue descent condition at a Gorenstein genus-1
//! singularity with `m` branches.
//!
//! Data: a partition of `n` point indices into `m` branches, nonzero integer
//! slopes `a_i` with zero sum on every branch, nonzero rational points `x_i`
//! distinct within each branch, and nonzero residue constants `c_j` per
//! branch. The branch linear parts are `b_j = -sum_{i in p_j} a_i / x_i`,
//! and the function assembled from the points descends through the
//! singularity exactly when `sum_j c_j b_j = 0`.
//!
//! This module is the independent algebraic side of the realizability
//! cross-check: the dichotomy `n = 2` impossible / `n >= 3` solvable mirrors
//! the "at least three times" rule of the tropical condition.

use num::Zero;

use crate::error::TropError;
use crate::generator::SplitMix64;
use crate::linalg::{format_rat, rint, Rat};

/// A fully specified descent problem instance.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentInstance {
    /// Partition of point indices `0..n` into branches.
    pub parts: Vec<Vec<usize>>,
    /// Nonzero integer slopes, one per point; zero sum within each part.
    pub slopes: Vec<i64>,
    /// Nonzero rational points, distinct within each part.
    pub points: Vec<Rat>,
    /// Nonzero residue constants, one per branch.
    pub constants: Vec<Rat>,
}

impl DescentInstance {
    pub fn n(&self) -> usize {
        self.slopes.len()
    }

    pub fn branches(&self) -> usize {
        self.parts.len()
    }

    pub fn validate(&self) -> Result<(), TropError> {
        let n = self.n();
        if self.points.len() != n {
            return Err(TropError::InvalidInstance(
                "point and slope counts differ".into(),
            ));
        }
        if self.constants.len() != self.parts.len() {
            return Err(TropError::InvalidInstance(
                "one residue constant per branch required".into(),
            ));
        }
        let mut seen = vec![false; n];
        for (j, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                return Err(TropError::InvalidInstance(format!("branch {j} is empty")));
            }
            let mut sum = 0i64;
            for &i in part {
                if i >= n || seen[i] {
                    return Err(TropError::InvalidInstance(format!(
                        "index {i} repeated or out of range"
                    )));
                }
                seen[i] = true;
                sum += self.slopes[i];
            }
            if sum != 0 {
                return Err(TropError::InvalidInstance(format!(
                    "slopes on branch {j} sum to {sum}, not 0"
                )));
            }
            for (k, &i1) in part.iter().enumerate() {
                if self.points[i1].is_zero() {
                    return Err(TropError::InvalidInstance(format!("point x_{i1} is zero")));
                }
                for &i2 in &part[k + 1..] {
                    if self.points[i1] == self.points[i2] {
                        return Err(TropError::InvalidInstance(format!(
                            "points x_{i1} and x_{i2} coincide on one branch ({})",
                            format_rat(&self.points[i1])
                        )));
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(TropError::InvalidInstance(
                "partition does not cover all indices".into(),
            ));
        }
        for i in 0..n {
            if self.slopes[i] == 0 {
                return Err(TropError::InvalidInstance(format!("slope a_{i} is zero")));
            }
        }
        for (j, c) in self.constants.iter().enumerate() {
            if c.is_zero() {
                return Err(TropError::InvalidInstance(format!(
                    "residue constant c_{j} is zero"
                )));
            }
        }
        Ok(())
    }

    /// The branch linear parts `b_j = -sum_{i in p_j} a_i / x_i`.
    pub fn linear_parts(&self) -> Result<Vec<Rat>, TropError> {
        self.validate()?;
        Ok(self
            .parts
            .iter()
            .map(|part| {
                -part
                    .iter()
                    .map(|&i| rint(self.slopes[i]) / &self.points[i])
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect())
    }

    /// Whether `sum_j c_j b_j = 0` holds exactly.
    pub fn descends(&self) -> Result<bool, TropError> {
        let b = self.linear_parts()?;
        let total = self
            .constants
            .iter()
            .zip(&b)
            .map(|(c, bj)| c * bj)
            .fold(Rat::zero(), |acc, t| acc + t);
        Ok(total.is_zero())
    }
}

/// A descent problem without points: branch sizes, slopes (listed branch by
/// branch), and residue constants.
#[derive(Clone, Debug)]
pub struct DescentProblem {
    pub part_sizes: Vec<usize>,
    pub slopes: Vec<i64>,
    pub constants: Vec<Rat>,
}

impl DescentProblem {
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = Vec::new();
        let mut next = 0;
        for &s in &self.part_sizes {
            parts.push((next..next + s).collect());
            next += s;
        }
        parts
    }

    pub fn n(&self) -> usize {
        self.slopes.len()
    }
}

const SEARCH_RETRIES: u64 = 1000;

/// Searches for distinct nonzero points making the configuration descend.
///
/// `Ok(None)` is the proven-impossible case: a single branch with exactly
/// two points has `b = -a (1/x_1 - 1/x_2) = -a (x_2 - x_1)/(x_1 x_2)`, which
/// is nonzero for every admissible choice (`a != 0`, `x_1 != x_2`), so
/// `c b = 0` has no solution. For `n >= 3` a witness always exists; the
/// search fixes all points but one, solves the linear condition for the
/// remaining reciprocal, and retries with fresh free points on degeneracy.
pub fn configuration_exists(
    problem: &DescentProblem,
) -> Result<Option<DescentInstance>, TropError> {
    let n = problem.n();
    if n != problem.part_sizes.iter().sum::<usize>() {
        return Err(TropError::InvalidInstance(
            "part sizes do not sum to the slope count".into(),
        ));
    }
    if problem.constants.len() != problem.part_sizes.len() {
        return Err(TropError::InvalidInstance(
            "one residue constant per branch required".into(),
        ));
    }
    let parts = problem.parts();
    for (j, part) in parts.iter().enumerate() {
        let sum: i64 = part.iter().map(|&i| problem.slopes[i]).sum();
        if sum != 0 {
            return Err(TropError::InvalidInstance(format!(
                "slopes on branch {j} sum to {sum}, not 0"
            )));
        }
        if part.len() < 2 {
            return Err(TropError::InvalidInstance(
                "a branch with one point cannot have zero slope sum".into(),
            ));
        }
    }
    if problem.slopes.iter().any(|&a| a == 0) {
        return Err(TropError::InvalidInstance("zero slope".into()));
    }
    if problem.constants.iter().any(|c| c.is_zero()) {
        return Err(TropError::InvalidInstance("zero residue constant".into()));
    }

    if n == 2 {
        // Necessarily one branch of two points: impossible (see above).
        return Ok(None);
    }

    let branch_of = {
        let mut map = vec![0usize; n];
        for (j, part) in parts.iter().enumerate() {
            for &i in part {
                map[i] = j;
            }
        }
        map
    };

    for attempt in 0..SEARCH_RETRIES {
        let mut rng = SplitMix64::new(0x5eed ^ attempt.wrapping_mul(0x9e37));
        let solve_for = (attempt as usize) % n;
        let mut points: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            if i == solve_for {
                points.push(Rat::zero()); // placeholder
                continue;
            }
            loop {
                let p = rng.range(-20, 20);
                let q = rng.range(1, 5);
                if p == 0 {
                    continue;
                }
                let x = Rat::new(p.into(), q.into());
                let clash = parts[branch_of[i]]
                    .iter()
                    .any(|&k| k != i && k != solve_for && k < points.len() && points[k] == x);
                if !clash {
                    points.push(x);
                    break;
                }
            }
        }
        // sum_i c_{j(i)} a_i / x_i = 0, solved for x_{solve_for}.
        let partial = (0..n)
            .filter(|&i| i != solve_for)
            .map(|i| &problem.constants[branch_of[i]] * rint(problem.slopes[i]) / &points[i])
            .fold(Rat::zero(), |acc, t| acc + t);
        if partial.is_zero() {
            continue; // the solved point would be at infinity
        }
        let c_star = &problem.constants[branch_of[solve_for]];
        let x_star = -(c_star * rint(problem.slopes[solve_for])) / &partial;
        if x_star.is_zero() {
            continue;
        }
        if parts[branch_of[solve_for]]
            .iter()
            .any(|&k| k != solve_for && points[k] == x_star)
        {
            continue;
        }
        points[solve_for] = x_star;

        let instance = DescentInstance {
            parts: parts.clone(),
            slopes: problem.slopes.clone(),
            points,
            constants: problem.constants.clone(),
        };
        instance.validate()?;
        if instance.descends()? {
            return Ok(Some(instance));
        }
    }
    Err(TropError::InternalConsistency(format!(
        "witness search exhausted {SEARCH_RETRIES} retries on a problem with n = {n}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn single_branch(slopes: &[i64], points: &[Rat]) -> DescentInstance {
        DescentInstance {
            parts: vec![(0..slopes.len()).collect()],
            slopes: slopes.to_vec(),
            points: points.to_vec(),
            constants: vec![rint(1)],
        }
    }

    #[test]
    fn linear_part_examples() {
        // a = (2, -2), x = (1, -1): b = -(2/1 + (-2)/(-1)) = -4
        let inst = single_branch(&[2, -2], &[rint(1), rint(-1)]);
        assert_eq!(inst.linear_parts().unwrap(), vec![rint(-4)]);

        // a = (1, 1, -2), x = (1, 3, 3/2): b = -(1 + 1/3 - 4/3) = 0
        let inst = single_branch(&[1, 1, -2], &[rint(1), rint(3), rat(3, 2)]);
        assert_eq!(inst.linear_parts().unwrap(), vec![rint(0)]);
        assert!(inst.descends().unwrap());
    }

    #[test]
    fn coincident_points_rejected() {
        let inst = single_branch(&[1, -1], &[rint(5), rint(5)]);
        assert!(inst.linear_parts().is_err());
    }

    #[test]
    fn descends_two_branch_example() {
        // branch1 a=(2,-2), x=(1,-1) gives b=-4; branch2 a=(1,-1), x=(1,2)
        // gives b=-1/2; c=(1,-8): 1*(-4) + (-8)*(-1/2) = 0.
        let inst = DescentInstance {
            parts: vec![vec![0, 1], vec![2, 3]],
            slopes: vec![2, -2, 1, -1],
            points: vec![rint(1), rint(-1), rint(1), rint(2)],
            constants: vec![rint(1), rint(-8)],
        };
        assert_eq!(inst.linear_parts().unwrap(), vec![rint(-4), rat(-1, 2)]);
        assert!(inst.descends().unwrap());
    }

    #[test]
    fn single_branch_nonzero_b_fails_for_any_constant() {
        let inst = single_branch(&[2, -2], &[rint(1), rint(-1)]);
        assert!(!inst.descends().unwrap());
        let scaled = DescentInstance { constants: vec![rat(-7, 3)], ..inst };
        assert!(!scaled.descends().unwrap());
    }

    #[test]
    fn all_zero_linear_parts_descend() {
        let inst = DescentInstance {
            parts: vec![vec![0, 1, 2], vec![3, 4, 5]],
            slopes: vec![1, 1, -2, 1, 1, -2],
            points: vec![rint(1), rint(3), rat(3, 2), rint(1), rint(3), rat(3, 2)],
            constants: vec![rat(5, 7), rint(-3)],
        };
        assert_eq!(inst.linear_parts().unwrap(), vec![rint(0), rint(0)]);
        assert!(inst.descends().unwrap());
    }

    #[test]
    fn two_point_configuration_never_exists() {
        let problem = DescentProblem {
            part_sizes: vec![2],
            slopes: vec![1, -1],
            constants: vec![rint(1)],
        };
        assert!(configuration_exists(&problem).unwrap().is_none());
        // b is nonzero for a sample of admissible points
        for (x1, x2) in [(1i64, 2i64), (-3, 4), (7, -7)] {
            let inst = single_branch(&[1, -1], &[rint(x1), rint(x2)]);
            assert!(!inst.linear_parts().unwrap()[0].is_zero());
        }
    }

    #[test]
    fn three_point_configuration_exists() {
        let problem = DescentProblem {
            part_sizes: vec![3],
            slopes: vec![1, 1, -2],
            constants: vec![rint(1)],
        };
        let witness = configuration_exists(&problem).unwrap().unwrap();
        assert!(witness.descends().unwrap());
        // the hand-checked witness also works
        let known = single_branch(&[1, 1, -2], &[rint(1), rint(3), rat(3, 2)]);
        assert!(known.descends().unwrap());
    }

    #[test]
    fn two_branch_configuration_exists() {
        let problem = DescentProblem {
            part_sizes: vec![2, 2],
            slopes: vec![2, -2, 1, -1],
            constants: vec![rint(1), rint(-8)],
        };
        let witness = configuration_exists(&problem).unwrap().unwrap();
        assert!(witness.descends().unwrap());
        assert_eq!(witness.branches(), 2);
    }
}
