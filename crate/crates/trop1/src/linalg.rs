//! Exact rational linear algebra: vectors, row reduction, kernels, canonical
//! subspaces, and primitive integer directions.
//!
//! Everything here works over arbitrary-precision rationals. There is no
//! floating point anywhere in this crate; realizability is a yes/no question
//! and tolerance-based answers are wrong answers.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::TropError;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses the instance-file syntax for rationals: `"p/q"` or `"n"`.
/// Denominators are normalized positive by `BigRational::new`.
pub fn parse_rat(s: &str) -> Result<Rat, TropError> {
    let s = s.trim();
    let mk_err = || TropError::Parse(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| mk_err())?;
    let d: BigInt = den.parse().map_err(|_| mk_err())?;
    if d.is_zero() {
        return Err(TropError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational in the instance-file syntax (`"p/q"`, integers as `"n"`).
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Dense exact rational vector of a fixed ambient dimension.
///
/// Serializes as a list of `"p/q"` strings, matching the instance file
/// conventions (integer shorthand accepted on input).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatVec(pub Vec<Rat>);

impl Serialize for RatVec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(format_rat))
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<RatLiteral> = Vec::deserialize(deserializer)?;
        raw.into_iter()
            .map(|lit| lit.into_rat().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(RatVec)
    }
}

/// A rational in an instance file: either a string `"p/q"`/`"n"` or a bare
/// JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum RatLiteral {
    Int(i64),
    Text(String),
}

impl RatLiteral {
    pub fn into_rat(self) -> Result<Rat, TropError> {
        match self {
            RatLiteral::Int(n) => Ok(rint(n)),
            RatLiteral::Text(s) => parse_rat(&s),
        }
    }
}

impl RatVec {
    pub fn zero(dim: usize) -> Self {
        RatVec(vec![Rat::zero(); dim])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RatVec(entries.iter().map(|&n| rint(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }

    /// Entry-wise integrality check.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.denom().is_one())
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rat(x))?;
        }
        write!(f, ")")
    }
}

/// The unique primitive integer vector on the ray through `v`, together with
/// the positive rational scalar `c` such that `v = c * u`.
pub fn primitive(v: &RatVec) -> Result<(RatVec, Rat), TropError> {
    if v.is_zero() {
        return Err(TropError::ZeroVector);
    }
    // Clear denominators, then divide by the gcd of the numerators.
    let mut den_lcm = BigInt::one();
    for x in &v.0 {
        den_lcm = den_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .0
        .iter()
        .map(|x| x.numer() * (&den_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    let u = RatVec(ints.iter().map(|n| Rat::from_integer(n / &g)).collect());
    let scalar = Rat::new(g, den_lcm);
    debug_assert_eq!(u.scale(&scalar), *v);
    Ok((u, scalar))
}

/// Whether `v` is a primitive integer vector (entries integral, content 1).
pub fn is_primitive(v: &RatVec) -> bool {
    if v.is_zero() || !v.is_integral() {
        return false;
    }
    let mut g = BigInt::zero();
    for x in &v.0 {
        g = g.gcd(x.numer());
    }
    g.is_one()
}

/// A dense rational matrix, stored by rows. Used for row reduction, rank,
/// kernels, and solving square-ish exact systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<RatVec>,
    pub cols: usize,
}

impl Matrix {
    pub fn new(rows: Vec<RatVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.dim() == cols));
        Matrix { rows, cols }
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let cols = rows.first().map_or(0, RatVec::dim);
        Matrix::new(rows, cols)
    }

    /// In-place reduced row echelon form with leading coefficient 1.
    /// Returns the pivot column of each nonzero row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.rows.len()).find(|&r| !self.rows[r].0[col].is_zero())
            else {
                continue;
            };
            self.rows.swap(row, pr);
            let inv = self.rows[row].0[col].recip();
            self.rows[row] = self.rows[row].scale(&inv);
            for r in 0..self.rows.len() {
                if r != row && !self.rows[r].0[col].is_zero() {
                    let factor = self.rows[r].0[col].clone();
                    let scaled = self.rows[row].scale(&factor);
                    self.rows[r] = self.rows[r].sub(&scaled);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(row);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<RatVec> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = RatVec::zero(self.cols);
            v.0[free] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v.0[pc] = -m.rows[r].0[free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `A x = b`, if the system is consistent.
    pub fn solve(&self, b: &RatVec) -> Option<RatVec> {
        debug_assert_eq!(b.dim(), self.rows.len());
        let mut aug = Matrix::new(
            self.rows
                .iter()
                .zip(&b.0)
                .map(|(row, bi)| {
                    let mut r = row.0.clone();
                    r.push(bi.clone());
                    RatVec(r)
                })
                .collect(),
            self.cols + 1,
        );
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent: pivot in the augmented column
        }
        let mut x = RatVec::zero(self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            x.0[pc] = aug.rows[r].0[self.cols].clone();
        }
        Some(x)
    }
}

/// A linear subspace of `Q^ambient` in canonical form: the basis rows are the
/// reduced row echelon form of any spanning set, so two subspaces are equal
/// iff their representations are identical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    basis: Vec<RatVec>,
    ambient: usize,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: Vec::new(), ambient }
    }

    pub fn full(ambient: usize) -> Self {
        let mut basis = Vec::new();
        for i in 0..ambient {
            let mut v = RatVec::zero(ambient);
            v.0[i] = Rat::one();
            basis.push(v);
        }
        Subspace { basis, ambient }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatVec] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        debug_assert_eq!(v.dim(), self.ambient);
        // Reduce v against the echelon basis; membership iff the residue is 0.
        let mut w = v.clone();
        for row in &self.basis {
            let lead = row.0.iter().position(|x| !x.is_zero()).unwrap();
            if !w.0[lead].is_zero() {
                let factor = w.0[lead].clone();
                w = w.sub(&row.scale(&factor));
            }
        }
        w.is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Sum of two subspaces, in canonical form.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs: Vec<RatVec> = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        span_with_dim(&vs, self.ambient)
    }
}

/// Canonical span of a list of vectors. Errors if the ambient dimensions
/// disagree; the empty list is rejected because its ambient dimension is
/// ambiguous (use [`span_with_dim`]).
pub fn span(vectors: &[RatVec]) -> Result<Subspace, TropError> {
    let Some(first) = vectors.first() else {
        return Err(TropError::Parse(
            "span of an empty list needs an explicit ambient dimension".into(),
        ));
    };
    let ambient = first.dim();
    if let Some(bad) = vectors.iter().find(|v| v.dim() != ambient) {
        return Err(TropError::DimensionMismatch {
            expected: ambient,
            got: bad.dim(),
        });
    }
    Ok(span_with_dim(vectors, ambient))
}

/// Canonical span with an explicit ambient dimension (empty lists allowed).
pub fn span_with_dim(vectors: &[RatVec], ambient: usize) -> Subspace {
    let mut m = Matrix::new(vectors.to_vec(), ambient);
    m.rref();
    Subspace { basis: m.rows, ambient }
}

/// The annihilator `{chi : chi . w = 0 for all w in the span of vectors}`,
/// of dimension `ambient - rank`.
pub fn annihilator(vectors: &[RatVec], ambient: usize) -> Result<Subspace, TropError> {
    if let Some(bad) = vectors.iter().find(|v| v.dim() != ambient) {
        return Err(TropError::DimensionMismatch {
            expected: ambient,
            got: bad.dim(),
        });
    }
    let m = Matrix::new(vectors.to_vec(), ambient);
    Ok(span_with_dim(&m.kernel_basis(), ambient))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_roundtrip() {
        for s in ["3", "-7", "1/2", "-4/6", "0"] {
            let x = parse_rat(s).unwrap();
            let y = parse_rat(&format_rat(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(parse_rat("-4/6").unwrap(), rat(-2, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn span_of_standard_basis_is_full() {
        let s = span(&[RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])]).unwrap();
        assert_eq!(s, Subspace::full(2));
    }

    #[test]
    fn span_of_empty_is_zero() {
        let s = span_with_dim(&[], 3);
        assert_eq!(s, Subspace::zero(3));
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn span_of_parallel_vectors_is_a_line() {
        let s = span(&[RatVec::from_ints(&[2, 4]), RatVec::from_ints(&[1, 2])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&RatVec::from_ints(&[1, 2])));
        assert!(!s.contains(&RatVec::from_ints(&[1, 0])));
    }

    #[test]
    fn span_rejects_dimension_mismatch() {
        let err = span(&[RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[1, 0, 0])]);
        assert!(err.is_err());
    }

    #[test]
    fn annihilator_examples() {
        // annihilator of {(1,0)} in dim 2 -> line through (0,1)
        let a = annihilator(&[RatVec::from_ints(&[1, 0])], 2).unwrap();
        assert_eq!(a, span(&[RatVec::from_ints(&[0, 1])]).unwrap());
        // annihilator of the full space -> zero subspace
        let b = annihilator(
            &[RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])],
            2,
        )
        .unwrap();
        assert_eq!(b.dim(), 0);
        // annihilator of {} in dim 3 -> full 3-space
        let c = annihilator(&[], 3).unwrap();
        assert_eq!(c, Subspace::full(3));
    }

    #[test]
    fn primitive_examples() {
        let (u, c) = primitive(&RatVec::from_ints(&[2, 4])).unwrap();
        assert_eq!(u, RatVec::from_ints(&[1, 2]));
        assert_eq!(c, rint(2));

        let (u, c) = primitive(&RatVec::from_ints(&[-3, 0])).unwrap();
        assert_eq!(u, RatVec::from_ints(&[-1, 0]));
        assert_eq!(c, rint(3));

        // (1/2, 1/3) -> u = (3, 2), scalar 1/6; checked by scalar * u = v.
        let v = RatVec(vec![rat(1, 2), rat(1, 3)]);
        let (u, c) = primitive(&v).unwrap();
        assert_eq!(u, RatVec::from_ints(&[3, 2]));
        assert_eq!(c, rat(1, 6));
        assert_eq!(u.scale(&c), v);

        assert!(primitive(&RatVec::zero(2)).is_err());
    }

    #[test]
    fn solve_and_kernel() {
        let m = Matrix::from_rows(vec![
            RatVec::from_ints(&[1, 2, 3]),
            RatVec::from_ints(&[0, 1, 1]),
        ]);
        let x = m.solve(&RatVec::from_ints(&[6, 2])).unwrap();
        // residual check
        for (row, b) in m.rows.iter().zip([6i64, 2]) {
            assert_eq!(row.dot(&x), rint(b));
        }
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for row in &m.rows {
            assert!(row.dot(&k[0]).is_zero());
        }
        // inconsistent system
        let m2 = Matrix::from_rows(vec![
            RatVec::from_ints(&[1, 1]),
            RatVec::from_ints(&[2, 2]),
        ]);
        assert!(m2.solve(&RatVec::from_ints(&[1, 3])).is_none());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_vec(dim: usize) -> impl Strategy<Value = RatVec> {
            proptest::collection::vec(-5i64..=5, dim).prop_map(|v| RatVec::from_ints(&v))
        }

        proptest! {
            // rank-nullity: dim span + dim annihilator = ambient
            #[test]
            fn rank_nullity(vs in proptest::collection::vec(small_vec(3), 0..6)) {
                let s = span_with_dim(&vs, 3);
                let a = annihilator(&vs, 3).unwrap();
                prop_assert_eq!(s.dim() + a.dim(), 3);
            }

            // span is invariant under permutation of the input
            #[test]
            fn span_permutation_invariant(vs in proptest::collection::vec(small_vec(3), 1..6)) {
                let s1 = span(&vs).unwrap();
                let mut rev = vs.clone();
                rev.reverse();
                let s2 = span(&rev).unwrap();
                prop_assert_eq!(s1, s2);
            }

            // primitive is idempotent on primitive integer vectors
            #[test]
            fn primitive_idempotent(v in small_vec(3)) {
                prop_assume!(!v.is_zero());
                let (u, _) = primitive(&v).unwrap();
                let (u2, c2) = primitive(&u).unwrap();
                prop_assert_eq!(u2, u);
                prop_assert_eq!(c2, rint(1));
            }
        }
    }
}
