//! Rational polyhedral cones.
//!
//! Two representations are used. [`Cone`] is a homogeneous H-representation
//! (equalities and inequalities through the origin) over named variables;
//! this is the form moduli cones and subdivision cells take. Fan cones are
//! given by generating rays, and [`extreme_rays`] / [`hrep_from_rays`] convert
//! between the representations with an incremental double description method.
//! All tests (dimension, relative interior, faces) are exact.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{primitive, span_with_dim, Matrix, Rat, RatVec, Subspace};
use crate::lp::{feasible_point, Constraint};

/// A polyhedral cone `{x : E x = 0, A x >= 0}` in named coordinates.
///
/// Inequalities carry a strictness flag: the *relative interior of the cell*
/// this cone represents is the set where every flagged inequality is strict.
/// For moduli cones the flagged inequalities are edge lengths and fan facet
/// constraints; for subdivision cells also the strict alignment comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cone {
    pub vars: Vec<String>,
    pub eqs: Vec<RatVec>,
    pub ineqs: Vec<(RatVec, bool)>,
}

impl Cone {
    pub fn full(vars: Vec<String>) -> Self {
        Cone { vars, eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn add_eq(&mut self, form: RatVec) {
        debug_assert_eq!(form.dim(), self.num_vars());
        if !form.is_zero() {
            self.eqs.push(form);
        }
    }

    pub fn add_ineq(&mut self, form: RatVec, strict: bool) {
        debug_assert_eq!(form.dim(), self.num_vars());
        self.ineqs.push((form, strict));
    }

    fn eq_constraints(&self) -> Vec<Constraint> {
        self.eqs
            .iter()
            .map(|f| Constraint::new(f.clone(), Rat::zero()))
            .collect()
    }

    fn ineq_constraints(&self) -> Vec<Constraint> {
        self.ineqs
            .iter()
            .map(|(f, _)| Constraint::new(f.clone(), Rat::zero()))
            .collect()
    }

    /// A point with every strict-flagged inequality strictly positive and the
    /// rest satisfied weakly, i.e. a relative interior point of the cell this
    /// cone encodes. `None` when the cell is empty.
    pub fn relint_cell_point(&self) -> Option<RatVec> {
        let eqs = self.eq_constraints();
        let mut ineqs = Vec::new();
        for (f, strict) in &self.ineqs {
            let rhs = if *strict { Rat::from_integer(1.into()) } else { Rat::zero() };
            ineqs.push(Constraint::new(f.clone(), rhs));
        }
        feasible_point(self.num_vars(), &eqs, &ineqs)
    }

    pub fn cell_is_empty(&self) -> bool {
        self.relint_cell_point().is_none()
    }

    /// Indices of inequalities that vanish identically on the solution set
    /// (ignoring strictness flags).
    pub fn implicit_inequalities(&self) -> Vec<usize> {
        let eqs = self.eq_constraints();
        let ineqs = self.ineq_constraints();
        let mut implicit = Vec::new();
        for (i, (f, _)) in self.ineqs.iter().enumerate() {
            let mut system = ineqs.clone();
            system.push(Constraint::new(f.clone(), Rat::from_integer(1.into())));
            if feasible_point(self.num_vars(), &eqs, &system).is_none() {
                implicit.push(i);
            }
        }
        implicit
    }

    /// A point in the relative interior of the solution set (all non-implicit
    /// inequalities strict). Always exists: the solution set contains 0.
    pub fn relint_point(&self) -> RatVec {
        let eqs = self.eq_constraints();
        let ineqs = self.ineq_constraints();
        let mut acc = RatVec::zero(self.num_vars());
        for (f, _) in &self.ineqs {
            let mut system = ineqs.clone();
            system.push(Constraint::new(f.clone(), Rat::from_integer(1.into())));
            if let Some(x) = feasible_point(self.num_vars(), &eqs, &system) {
                acc = acc.add(&x);
            }
        }
        acc
    }

    /// The linear span of the solution set, as a canonical subspace.
    pub fn span(&self) -> Subspace {
        let mut forms = self.eqs.clone();
        for i in self.implicit_inequalities() {
            forms.push(self.ineqs[i].0.clone());
        }
        let m = Matrix::new(forms, self.num_vars());
        span_with_dim(&m.kernel_basis(), self.num_vars())
    }

    /// Dimension of the solution set (= dimension of its affine hull; the set
    /// is a cone through 0, so this is the dimension of its linear span).
    pub fn dim(&self) -> usize {
        self.span().dim()
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.eqs.iter().all(|f| f.dot(x).is_zero())
            && self.ineqs.iter().all(|(f, _)| !f.dot(x).is_negative())
    }

    /// Membership in the relative interior of the cell (strict-flagged
    /// inequalities strictly positive).
    pub fn contains_relint_cell(&self, x: &RatVec) -> bool {
        self.eqs.iter().all(|f| f.dot(x).is_zero())
            && self.ineqs.iter().all(|(f, strict)| {
                let v = f.dot(x);
                if *strict {
                    v.is_positive()
                } else {
                    !v.is_negative()
                }
            })
    }

    /// Whether the relative interiors of the cells of `self` and `other`
    /// intersect (exact joint feasibility).
    pub fn relint_cells_intersect(&self, other: &Cone) -> bool {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        let mut eqs = self.eq_constraints();
        eqs.extend(other.eq_constraints());
        let mut ineqs = Vec::new();
        for c in [self, other] {
            for (f, strict) in &c.ineqs {
                let rhs = if *strict { Rat::from_integer(1.into()) } else { Rat::zero() };
                ineqs.push(Constraint::new(f.clone(), rhs));
            }
        }
        feasible_point(self.num_vars(), &eqs, &ineqs).is_some()
    }

    /// Distinct points in the relative interior of the cell, for sampling
    /// checks that a property is constant there. Points are generated from a
    /// base relint point by exact perturbations along the equality kernel.
    pub fn sample_relint_cell_points(&self, count: usize) -> Vec<RatVec> {
        let Some(base) = self.relint_cell_point() else {
            return Vec::new();
        };
        let mut out = vec![base.clone()];
        let kernel = Matrix::new(self.eqs.clone(), self.num_vars()).kernel_basis();
        'outer: for dir in kernel.iter().flat_map(|k| [k.clone(), k.neg()]) {
            if out.len() >= count {
                break;
            }
            // Largest safe epsilon keeping every inequality on the right side.
            let mut eps = Rat::from_integer(1.into());
            for (f, _) in &self.ineqs {
                let fv = f.dot(&base);
                let fd = f.dot(&dir);
                if fd.is_negative() {
                    if fv.is_zero() {
                        continue 'outer; // would leave the cell
                    }
                    let limit = -&fv / &fd; // fv + eps*fd > 0 for eps < limit
                    let half = limit / Rat::from_integer(2.into());
                    if half < eps {
                        eps = half;
                    }
                }
            }
            let candidate = base.add(&dir.scale(&eps));
            if self.contains_relint_cell(&candidate) && !out.contains(&candidate) {
                out.push(candidate);
            }
        }
        out
    }
}

/// Generators of `{x in Q^dim : a . x >= 0 for all a in ineqs}` as a pair
/// (lineality basis, rays of a pointed complement). Incremental double
/// description; rays are kept primitive.
pub fn extreme_rays(dim: usize, ineqs: &[RatVec]) -> (Vec<RatVec>, Vec<RatVec>) {
    let mut lineality: Vec<RatVec> = Subspace::full(dim).basis().to_vec();
    let mut rays: Vec<RatVec> = Vec::new();

    for a in ineqs {
        debug_assert_eq!(a.dim(), dim);
        if let Some(pos) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            // The constraint cuts the lineality space: one basis line becomes
            // a ray, the rest are projected into the hyperplane of `a`.
            let l0 = lineality.remove(pos);
            let alpha = a.dot(&l0);
            let r0 = if alpha.is_positive() { l0.clone() } else { l0.neg() };
            let alpha = a.dot(&r0);
            for l in lineality.iter_mut() {
                let c = a.dot(l) / &alpha;
                *l = l.sub(&r0.scale(&c));
            }
            for r in rays.iter_mut() {
                let c = a.dot(r) / &alpha;
                *r = normalize_ray(&r.sub(&r0.scale(&c)));
            }
            rays.retain(|r| !r.is_zero());
            rays.push(normalize_ray(&r0));
            dedup_rays(&mut rays);
        } else {
            // Lineality is already inside the hyperplane; split the rays.
            let vals: Vec<Rat> = rays.iter().map(|r| a.dot(r)).collect();
            let mut next: Vec<RatVec> = Vec::new();
            for (r, v) in rays.iter().zip(&vals) {
                if !v.is_negative() {
                    next.push(r.clone());
                }
            }
            for (i, ri) in rays.iter().enumerate() {
                if !vals[i].is_positive() {
                    continue;
                }
                for (j, rj) in rays.iter().enumerate() {
                    if !vals[j].is_negative() {
                        continue;
                    }
                    let w = rj.scale(&vals[i]).sub(&ri.scale(&vals[j]));
                    let w = normalize_ray(&w);
                    if !w.is_zero() {
                        next.push(w);
                    }
                }
            }
            rays = next;
            dedup_rays(&mut rays);
            prune_redundant_rays(dim, &lineality, &mut rays);
        }
    }
    (lineality, rays)
}

/// Removes rays that are nonnegative combinations of the remaining rays plus
/// the lineality space. Exact feasibility per candidate; keeps the double
/// description minimal without a combinatorial adjacency test.
fn prune_redundant_rays(dim: usize, lineality: &[RatVec], rays: &mut Vec<RatVec>) {
    let mut i = 0;
    while i < rays.len() {
        let candidate = rays[i].clone();
        let others: Vec<RatVec> = rays
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        if in_cone_of(dim, &candidate, lineality, &others) {
            rays.remove(i);
        } else {
            i += 1;
        }
    }
}

/// Whether `x = sum(mu_j * lin_j) + sum(lambda_i * gens_i)` with lambda >= 0.
fn in_cone_of(dim: usize, x: &RatVec, lineality: &[RatVec], gens: &[RatVec]) -> bool {
    let n = lineality.len() + gens.len();
    // Variables: mu (free) then lambda (constrained nonnegative).
    let mut eqs = Vec::with_capacity(dim);
    for coord in 0..dim {
        let mut row = Vec::with_capacity(n);
        for l in lineality {
            row.push(l.0[coord].clone());
        }
        for g in gens {
            row.push(g.0[coord].clone());
        }
        eqs.push(Constraint::new(RatVec(row), x.0[coord].clone()));
    }
    let mut ineqs = Vec::new();
    for i in 0..gens.len() {
        let mut row = RatVec::zero(n);
        row.0[lineality.len() + i] = Rat::from_integer(1.into());
        ineqs.push(Constraint::new(row, Rat::zero()));
    }
    feasible_point(n, &eqs, &ineqs).is_some()
}

fn normalize_ray(r: &RatVec) -> RatVec {
    if r.is_zero() {
        r.clone()
    } else {
        primitive(r).expect("nonzero").0
    }
}

fn dedup_rays(rays: &mut Vec<RatVec>) {
    let mut seen = std::collections::HashSet::new();
    rays.retain(|r| seen.insert(r.clone()));
}

/// H-representation `(equalities, inequalities)` of the cone generated by
/// `rays`, via double description in the dual.
pub fn hrep_from_rays(dim: usize, rays: &[RatVec]) -> (Vec<RatVec>, Vec<RatVec>) {
    let (lin, dual_rays) = extreme_rays(dim, rays);
    (lin, dual_rays)
}

/// V-representation cone of a fan, given by generating rays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VCone {
    pub ambient_dim: usize,
    pub rays: Vec<RatVec>,
}

impl VCone {
    pub fn new(ambient_dim: usize, rays: Vec<RatVec>) -> Self {
        VCone { ambient_dim, rays }
    }

    pub fn span(&self) -> Subspace {
        span_with_dim(&self.rays, self.ambient_dim)
    }

    pub fn hrep(&self) -> (Vec<RatVec>, Vec<RatVec>) {
        hrep_from_rays(self.ambient_dim, &self.rays)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        let (eqs, ineqs) = self.hrep();
        eqs.iter().all(|f| f.dot(x).is_zero())
            && ineqs.iter().all(|f| !f.dot(x).is_negative())
    }

    /// Membership in the relative interior: all facet inequalities strict.
    pub fn contains_relint(&self, x: &RatVec) -> bool {
        let (eqs, ineqs) = self.hrep();
        eqs.iter().all(|f| f.dot(x).is_zero())
            && ineqs.iter().all(|f| f.dot(x).is_positive())
    }

    pub fn dim(&self) -> usize {
        self.span().dim()
    }

    /// Exact test that `face` is a face of `self`.
    ///
    /// Strategy: let `x*` be the sum of the candidate's rays, a relative
    /// interior point. The minimal face of `self` containing `x*` is cut out
    /// by the facet inequalities tight at `x*`; the candidate is a face iff
    /// it equals that minimal face, checked by comparing spans and verifying
    /// every generator of the minimal face lies in the candidate cone.
    pub fn is_face(&self, face: &VCone) -> bool {
        debug_assert_eq!(self.ambient_dim, face.ambient_dim);
        let (eqs, ineqs) = self.hrep();
        let inside = |x: &RatVec| {
            eqs.iter().all(|f| f.dot(x).is_zero())
                && ineqs.iter().all(|f| !f.dot(x).is_negative())
        };
        if !face.rays.iter().all(|r| inside(r)) {
            return false;
        }
        let x_star = face
            .rays
            .iter()
            .fold(RatVec::zero(self.ambient_dim), |acc, r| acc.add(r));
        // H-rep of the minimal face of self containing x*: the facet
        // inequalities tight at x* become equalities.
        let mut tight: Vec<RatVec> = eqs.clone();
        let mut slack: Vec<RatVec> = Vec::new();
        for f in &ineqs {
            if f.dot(&x_star).is_zero() {
                tight.push(f.clone());
            } else {
                slack.push(f.clone());
            }
        }
        let minimal_span = span_with_dim(
            &Matrix::new(tight.clone(), self.ambient_dim).kernel_basis(),
            self.ambient_dim,
        );
        if minimal_span != face.span() {
            return false;
        }
        // Generator containment: the minimal face must lie inside `face`.
        let mut face_ineqs: Vec<RatVec> = Vec::new();
        for f in &tight {
            face_ineqs.push(f.clone());
            face_ineqs.push(f.neg());
        }
        face_ineqs.extend(slack);
        let (lin, rays) = extreme_rays(self.ambient_dim, &face_ineqs);
        let (feqs, fineqs) = face.hrep();
        let in_face = |x: &RatVec| {
            feqs.iter().all(|f| f.dot(x).is_zero())
                && fineqs.iter().all(|f| !f.dot(x).is_negative())
        };
        lin.iter()
            .flat_map(|l| [l.clone(), l.neg()])
            .chain(rays)
            .all(|g| in_face(&g))
    }
}
