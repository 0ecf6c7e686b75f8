//! Combinatorial types and tropical stable maps to `Q^r`.
//!
//! A combinatorial type decorates a curve graph with a contact order
//! (primitive direction `u`, expansion factor `w`) per bounded edge and leg,
//! and optionally a cone label per vertex when a nontrivial fan is supplied.
//! A tropical map realizes a type with vertex positions and edge lengths.
//! Edges are stored with a fixed orientation (`ends.0 -> ends.1`); balancing
//! sums outgoing directions, negating at the far end. Contracted objects
//! (`w = 0`) carry no direction; loops are necessarily contracted because a
//! linear map on a loop edge returns to its starting point.

use std::collections::HashSet;

use num::Zero;

use crate::cone::VCone;
use crate::curve::{Circuit, CurveGraph, EdgeId, Flag, LegId, TropicalCurve, VertexId};
use crate::error::TropError;
use crate::linalg::{format_rat, is_primitive, Rat, RatVec, Subspace};

/// Contact order of an edge or leg: expansion factor `w >= 0` and primitive
/// integer direction `u` (zero when contracted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContactOrder {
    pub u: RatVec,
    pub w: u64,
}

impl ContactOrder {
    pub fn contracted(ambient_dim: usize) -> Self {
        ContactOrder { u: RatVec::zero(ambient_dim), w: 0 }
    }

    pub fn new(u: RatVec, w: u64) -> Result<Self, TropError> {
        if w == 0 {
            if !u.is_zero() {
                return Err(TropError::InvalidInstance(
                    "contracted contact order (w = 0) must have zero direction".into(),
                ));
            }
        } else if !is_primitive(&u) {
            return Err(TropError::InvalidInstance(format!(
                "direction {u:?} with w = {w} is not a primitive integer vector"
            )));
        }
        Ok(ContactOrder { u, w })
    }

    /// The displacement per unit length: `w * u`.
    pub fn dir(&self) -> RatVec {
        self.u.scale(&Rat::from_integer(self.w.into()))
    }

    pub fn is_contracted(&self) -> bool {
        self.w == 0
    }

    /// Contact order with the direction reversed.
    pub fn reversed(&self) -> ContactOrder {
        ContactOrder { u: self.u.neg(), w: self.w }
    }
}

/// A fan in `Q^r`, given by generating rays per cone. The trivial fan has a
/// single full cone and is the default target for realizability questions.
#[derive(Clone, Debug, PartialEq)]
pub struct Fan {
    pub ambient_dim: usize,
    pub cones: Vec<NamedCone>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedCone {
    pub name: String,
    pub cone: VCone,
}

impl Fan {
    /// The trivial fan: one cone equal to all of `Q^r`.
    pub fn trivial(ambient_dim: usize) -> Self {
        let mut rays = Vec::new();
        for i in 0..ambient_dim {
            let mut plus = RatVec::zero(ambient_dim);
            plus.0[i] = Rat::from_integer(1.into());
            rays.push(plus.clone());
            rays.push(plus.neg());
        }
        Fan {
            ambient_dim,
            cones: vec![NamedCone {
                name: "full".into(),
                cone: VCone::new(ambient_dim, rays),
            }],
            complete: true,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.cones.len() == 1 && {
            let (eqs, ineqs) = self.cones[0].cone.hrep();
            eqs.is_empty() && ineqs.is_empty()
        }
    }

    pub fn cone_index(&self, name: &str) -> Option<usize> {
        self.cones.iter().position(|c| c.name == name)
    }
}

/// The discrete data of a tropical stable map: graph, contact orders, and
/// optional cone labels (indices into a fan's cone list).
#[derive(Clone, Debug, PartialEq)]
pub struct CombinatorialType {
    pub graph: CurveGraph,
    pub ambient_dim: usize,
    pub edge_dirs: Vec<ContactOrder>,
    pub leg_dirs: Vec<ContactOrder>,
    pub cone_labels: Option<Vec<usize>>,
}

/// Balancing diagnosis: the defect vector at every vertex (all zero iff the
/// type is balanced).
#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub balanced: bool,
    pub defects: Vec<(VertexId, RatVec)>,
}

impl CombinatorialType {
    pub fn validate(&self) -> Result<(), TropError> {
        if self.edge_dirs.len() != self.graph.edges.len()
            || self.leg_dirs.len() != self.graph.legs.len()
        {
            return Err(TropError::InvalidInstance(
                "contact order count does not match graph".into(),
            ));
        }
        for (e, co) in self.graph.edge_ids().zip(&self.edge_dirs) {
            if co.u.dim() != self.ambient_dim {
                return Err(TropError::DimensionMismatch {
                    expected: self.ambient_dim,
                    got: co.u.dim(),
                });
            }
            ContactOrder::new(co.u.clone(), co.w)?;
            if self.graph.is_loop(e) && !co.is_contracted() {
                return Err(TropError::InvalidInstance(format!(
                    "loop edge {} must be contracted",
                    self.graph.edge(e).name
                )));
            }
        }
        for co in &self.leg_dirs {
            if co.u.dim() != self.ambient_dim {
                return Err(TropError::DimensionMismatch {
                    expected: self.ambient_dim,
                    got: co.u.dim(),
                });
            }
            ContactOrder::new(co.u.clone(), co.w)?;
        }
        if let Some(labels) = &self.cone_labels {
            if labels.len() != self.graph.vertices.len() {
                return Err(TropError::InvalidInstance(
                    "cone label count does not match vertices".into(),
                ));
            }
        }
        Ok(())
    }

    /// Outgoing displacement of a flag: the edge direction as seen from the
    /// flag's base (negated at the far end), or the leg direction.
    pub fn flag_dir(&self, f: Flag) -> RatVec {
        match f {
            Flag::EdgeEnd(e, which) => {
                let d = self.edge_dirs[e.0].dir();
                if which == 0 {
                    d
                } else {
                    d.neg()
                }
            }
            Flag::Leg(l) => self.leg_dirs[l.0].dir(),
        }
    }

    /// Balancing: at every vertex the outgoing directions of all incident
    /// flags sum to zero. Returns the defect vectors for diagnosis.
    pub fn balance(&self) -> BalanceReport {
        let mut defects = Vec::new();
        for v in self.graph.vertex_ids() {
            let sum = self
                .graph
                .flags_at(v)
                .into_iter()
                .fold(RatVec::zero(self.ambient_dim), |acc, f| {
                    acc.add(&self.flag_dir(f))
                });
            if !sum.is_zero() {
                defects.push((v, sum));
            }
        }
        BalanceReport { balanced: defects.is_empty(), defects }
    }

    pub fn is_balanced(&self) -> bool {
        self.balance().balanced
    }

    /// Stability: no 2-valent genus-0 vertex maps its star into the relative
    /// interior of a single cone. With the label convention (the label is the
    /// cone whose relative interior contains the vertex), the star stays in
    /// that relative interior exactly when every incident direction lies in
    /// the span of the labeled cone. Genus-1 vertices are never removable
    /// subdivision points and are exempt.
    pub fn is_stable(&self, fan: &Fan) -> bool {
        for v in self.graph.vertex_ids() {
            if self.graph.vertex(v).genus != 0 {
                continue;
            }
            let flags = self.graph.flags_at(v);
            if flags.len() != 2 {
                continue;
            }
            let span: Subspace = match &self.cone_labels {
                Some(labels) => fan.cones[labels[v.0]].cone.span(),
                None => Subspace::full(self.ambient_dim),
            };
            if flags.iter().all(|&f| span.contains(&self.flag_dir(f))) {
                return false;
            }
        }
        true
    }

    /// The recession type: collapse all bounded edges to a single vertex,
    /// keeping the legs with their contact orders.
    pub fn recession(&self) -> Result<RecessionType, TropError> {
        let report = self.balance();
        if !report.balanced {
            let (v, d) = &report.defects[0];
            return Err(TropError::Unbalanced {
                vertex: self.graph.vertex(*v).name.clone(),
                defect: format_defect(d),
            });
        }
        let genus = self.graph.genus()?;
        let mut legs: Vec<(u32, ContactOrder)> = self
            .graph
            .legs
            .iter()
            .zip(&self.leg_dirs)
            .map(|(leg, co)| (leg.marking, co.clone()))
            .collect();
        legs.sort_by_key(|(m, _)| *m);
        Ok(RecessionType { ambient_dim: self.ambient_dim, genus, legs })
    }

    /// Directions `w_e u_e` of the non-contracted circuit edges.
    pub fn circuit_directions(&self) -> Result<Vec<RatVec>, TropError> {
        let circuit = self.graph.circuit()?;
        Ok(circuit
            .edges
            .iter()
            .filter(|e| !self.edge_dirs[e.0].is_contracted())
            .map(|e| self.edge_dirs[e.0].dir())
            .collect())
    }

    /// The span of the circuit edge directions, the subspace `L` controlling
    /// superabundance.
    pub fn circuit_span(&self) -> Result<Subspace, TropError> {
        let dirs = self.circuit_directions()?;
        Ok(crate::linalg::span_with_dim(&dirs, self.ambient_dim))
    }
}

/// The single-vertex type left after collapsing all bounded edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecessionType {
    pub ambient_dim: usize,
    pub genus: u32,
    /// Leg contact orders, sorted by marking.
    pub legs: Vec<(u32, ContactOrder)>,
}

impl RecessionType {
    /// Balancing of the one-vertex star.
    pub fn is_balanced(&self) -> bool {
        self.legs
            .iter()
            .fold(RatVec::zero(self.ambient_dim), |acc, (_, co)| {
                acc.add(&co.dir())
            })
            .is_zero()
    }

    /// Viewing the recession type as a combinatorial type on one vertex.
    pub fn as_type(&self) -> CombinatorialType {
        CombinatorialType {
            graph: CurveGraph {
                vertices: vec![crate::curve::Vertex { name: "v".into(), genus: self.genus }],
                edges: Vec::new(),
                legs: self
                    .legs
                    .iter()
                    .enumerate()
                    .map(|(i, (m, _))| crate::curve::Leg {
                        name: format!("l{i}"),
                        base: VertexId(0),
                        marking: *m,
                    })
                    .collect(),
            },
            ambient_dim: self.ambient_dim,
            edge_dirs: Vec::new(),
            leg_dirs: self.legs.iter().map(|(_, co)| co.clone()).collect(),
            cone_labels: None,
        }
    }
}

/// A concrete tropical map: a combinatorial type realized with positive edge
/// lengths and vertex positions in `Q^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalMap {
    pub ty: CombinatorialType,
    pub lengths: Vec<Rat>,
    pub positions: Vec<RatVec>,
}

impl TropicalMap {
    /// Validates edge compatibility (`pos(b) - pos(a) = len * w * u`) and
    /// balancing before accepting the map.
    pub fn new(
        ty: CombinatorialType,
        lengths: Vec<Rat>,
        positions: Vec<RatVec>,
    ) -> Result<Self, TropError> {
        ty.validate()?;
        if positions.len() != ty.graph.vertices.len() {
            return Err(TropError::InvalidInstance(
                "position count does not match vertices".into(),
            ));
        }
        for p in &positions {
            if p.dim() != ty.ambient_dim {
                return Err(TropError::DimensionMismatch {
                    expected: ty.ambient_dim,
                    got: p.dim(),
                });
            }
        }
        let _ = TropicalCurve::new(ty.graph.clone(), lengths.clone())?;
        for (e, co) in ty.graph.edge_ids().zip(&ty.edge_dirs) {
            let (a, b) = ty.graph.edge(e).ends;
            let expected = co.dir().scale(&lengths[e.0]);
            let actual = positions[b.0].sub(&positions[a.0]);
            if expected != actual {
                return Err(TropError::InvalidInstance(format!(
                    "edge {} is incompatible: positions differ by {:?}, direction gives {:?}",
                    ty.graph.edge(e).name,
                    actual,
                    expected
                )));
            }
        }
        let report = ty.balance();
        if !report.balanced {
            let (v, d) = &report.defects[0];
            return Err(TropError::Unbalanced {
                vertex: ty.graph.vertex(*v).name.clone(),
                defect: format_defect(d),
            });
        }
        Ok(TropicalMap { ty, lengths, positions })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ty.ambient_dim
    }

    pub fn curve(&self) -> TropicalCurve {
        TropicalCurve {
            graph: self.ty.graph.clone(),
            lengths: self.lengths.clone(),
        }
    }

    /// Slopes of the composition with a character `chi`: per oriented edge
    /// and per leg, the derivative `chi . (w u)` per unit length.
    pub fn project(&self, chi: &RatVec) -> LineSlopes {
        LineSlopes {
            edge: self
                .ty
                .edge_dirs
                .iter()
                .map(|co| chi.dot(&co.dir()))
                .collect(),
            leg: self
                .ty
                .leg_dirs
                .iter()
                .map(|co| chi.dot(&co.dir()))
                .collect(),
        }
    }

    /// The slopes of a map to the line itself (`r = 1`).
    pub fn line_slopes(&self) -> Result<LineSlopes, TropError> {
        if self.ambient_dim() != 1 {
            return Err(TropError::DimensionMismatch {
                expected: 1,
                got: self.ambient_dim(),
            });
        }
        let unit = RatVec::from_ints(&[1]);
        Ok(self.project(&unit))
    }

    /// Contraction radius: 0 if some circuit-based flag has nonzero slope
    /// under `chi` (identity when `None`); otherwise the minimal radial
    /// distance of a vertex, inside the contracted component of the circuit,
    /// that supports a non-contracted flag. `None` when the (projected) map
    /// is globally constant, so no such vertex exists.
    pub fn contraction_radius(&self, chi: Option<&RatVec>) -> Result<Option<Rat>, TropError> {
        let contracted_flag = |f: Flag| -> bool {
            let d = self.ty.flag_dir(f);
            match chi {
                Some(c) => c.dot(&d).is_zero(),
                None => d.is_zero(),
            }
        };
        let curve = self.curve();
        let circuit = curve.circuit()?;
        let parents = curve.graph.tree_parents(&circuit)?;

        for &v in &circuit.vertices {
            if curve.graph.flags_at(v).iter().any(|&f| !contracted_flag(f)) {
                return Ok(Some(Rat::zero()));
            }
        }
        let component =
            self.contracted_component(&circuit, &|e| contracted_flag(Flag::EdgeEnd(e, 0)));
        let mut best: Option<Rat> = None;
        for &v in &component {
            if curve.graph.flags_at(v).iter().any(|&f| !contracted_flag(f)) {
                let lam = curve.lambda_with(&circuit, &parents, v);
                if best.as_ref().is_none_or(|b| lam < *b) {
                    best = Some(lam);
                }
            }
        }
        Ok(best)
    }

    /// Vertices reachable from the circuit through edges satisfying the
    /// given contraction predicate.
    pub fn contracted_component(
        &self,
        circuit: &Circuit,
        edge_contracted: &dyn Fn(EdgeId) -> bool,
    ) -> Vec<VertexId> {
        let mut seen: HashSet<VertexId> = circuit.vertices.iter().copied().collect();
        let mut queue: Vec<VertexId> = circuit.vertices.clone();
        while let Some(v) = queue.pop() {
            for e in self.ty.graph.edge_ids() {
                if !edge_contracted(e) {
                    continue;
                }
                let (a, b) = self.ty.graph.edge(e).ends;
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen.contains(&y) {
                        seen.insert(y);
                        queue.push(y);
                    }
                }
            }
        }
        let mut out: Vec<VertexId> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Closure check: summing the oriented displacements around the circuit
    /// cycle gives zero. Implied by edge compatibility of the positions, but
    /// cheap to state as a direct invariant.
    pub fn cycle_closure_holds(&self) -> Result<bool, TropError> {
        let circuit = self.ty.graph.circuit()?;
        if circuit.is_vertex_circuit() {
            return Ok(true);
        }
        let total = cycle_closure_sum(&self.ty, &circuit, &self.lengths);
        Ok(total.is_zero())
    }
}

/// Oriented traversal of the circuit cycle: the list of `(edge, +1/-1)`
/// steps walking once around.
pub fn cycle_orientation(graph: &CurveGraph, circuit: &Circuit) -> Vec<(EdgeId, i64)> {
    if circuit.edges.is_empty() {
        return Vec::new();
    }
    if circuit.edges.len() == 1 {
        return vec![(circuit.edges[0], 1)]; // loop
    }
    let mut steps = Vec::new();
    let start = circuit.vertices[0];
    let mut cur = start;
    let mut used: HashSet<EdgeId> = HashSet::new();
    loop {
        let mut advanced = false;
        for &e in &circuit.edges {
            if used.contains(&e) {
                continue;
            }
            let (a, b) = graph.edge(e).ends;
            if a == cur {
                steps.push((e, 1));
                used.insert(e);
                cur = b;
                advanced = true;
                break;
            }
            if b == cur {
                steps.push((e, -1));
                used.insert(e);
                cur = a;
                advanced = true;
                break;
            }
        }
        if !advanced || (cur == start && used.len() == circuit.edges.len()) {
            break;
        }
    }
    debug_assert_eq!(steps.len(), circuit.edges.len());
    steps
}

/// The displacement sum around the circuit for given lengths.
pub fn cycle_closure_sum(ty: &CombinatorialType, circuit: &Circuit, lengths: &[Rat]) -> RatVec {
    cycle_orientation(&ty.graph, circuit)
        .into_iter()
        .fold(RatVec::zero(ty.ambient_dim), |acc, (e, sign)| {
            let d = ty.edge_dirs[e.0].dir().scale(&lengths[e.0]);
            if sign > 0 {
                acc.add(&d)
            } else {
                acc.sub(&d)
            }
        })
}

/// Slopes of a map composed with a character: one rational per oriented edge
/// and per leg. Only the zero pattern matters downstream.
#[derive(Clone, Debug)]
pub struct LineSlopes {
    pub edge: Vec<Rat>,
    pub leg: Vec<Rat>,
}

impl LineSlopes {
    pub fn flag_slope(&self, f: Flag) -> Rat {
        match f {
            Flag::EdgeEnd(e, which) => {
                if which == 0 {
                    self.edge[e.0].clone()
                } else {
                    -self.edge[e.0].clone()
                }
            }
            Flag::Leg(l) => self.leg[l.0].clone(),
        }
    }

    pub fn edge_contracted(&self, e: EdgeId) -> bool {
        self.edge[e.0].is_zero()
    }

    pub fn leg_contracted(&self, l: LegId) -> bool {
        self.leg[l.0].is_zero()
    }
}

/// Builds positions from a base point by walking the graph; the inverse of
/// reading off a moduli-cone point. Errors if a cycle fails to close.
pub fn positions_from_lengths(
    ty: &CombinatorialType,
    lengths: &[Rat],
    base_vertex: VertexId,
    base_position: &RatVec,
) -> Result<Vec<RatVec>, TropError> {
    let n = ty.graph.vertices.len();
    let mut pos: Vec<Option<RatVec>> = vec![None; n];
    pos[base_vertex.0] = Some(base_position.clone());
    let mut queue = vec![base_vertex];
    while let Some(v) = queue.pop() {
        let pv = pos[v.0].clone().unwrap();
        for e in ty.graph.edge_ids() {
            let (a, b) = ty.graph.edge(e).ends;
            let d = ty.edge_dirs[e.0].dir().scale(&lengths[e.0]);
            for (x, y, dir) in [(a, b, d.clone()), (b, a, d.neg())] {
                if x == v {
                    let target = pv.add(&dir);
                    match &pos[y.0] {
                        None => {
                            pos[y.0] = Some(target);
                            queue.push(y);
                        }
                        Some(existing) => {
                            if *existing != target {
                                return Err(TropError::InvalidInstance(format!(
                                    "cycle through edge {} fails to close",
                                    ty.graph.edge(e).name
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    pos.into_iter()
        .map(|p| p.ok_or(TropError::Disconnected))
        .collect()
}

/// Formats a defect vector for error messages.
pub fn format_defect(d: &RatVec) -> String {
    let parts: Vec<String> = d.0.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

/// Test fixture shared across modules: a vertical chain with a banana
/// circuit in the middle, mapping to the line by contracting everything;
/// two legs of nonzero slope at the top vertex (distance `up`) and two at
/// the bottom (distance `down`).
#[cfg(test)]
pub(crate) fn banana_chain(up: Rat, down: Rat) -> TropicalMap {
    use crate::curve::graph;
    let g = graph(
        &[("top", 0), ("cu", 0), ("cd", 0), ("bot", 0)],
        &[("eu", 1, 0), ("b1", 1, 2), ("b2", 1, 2), ("ed", 2, 3)],
        &[("lt1", 0, 1), ("lt2", 0, 2), ("lb1", 3, 3), ("lb2", 3, 4)],
    );
    let r = 1;
    let one = RatVec::from_ints(&[1]);
    let ty = CombinatorialType {
        graph: g,
        ambient_dim: r,
        edge_dirs: vec![ContactOrder::contracted(r); 4],
        leg_dirs: vec![
            ContactOrder::new(one.clone(), 1).unwrap(),
            ContactOrder::new(one.neg(), 1).unwrap(),
            ContactOrder::new(one.clone(), 1).unwrap(),
            ContactOrder::new(one.neg(), 1).unwrap(),
        ],
        cone_labels: None,
    };
    let lengths = vec![up, crate::linalg::rint(1), crate::linalg::rint(1), down];
    let zero = RatVec::zero(1);
    let positions = vec![zero.clone(), zero.clone(), zero.clone(), zero];
    TropicalMap::new(ty, lengths, positions).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::graph;
    use crate::linalg::{rat, rint};

    fn co(u: &[i64], w: u64) -> ContactOrder {
        ContactOrder::new(RatVec::from_ints(u), w).unwrap()
    }

    fn ratv(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn balance_one_vertex_three_legs() {
        let g = graph(&[("v", 1)], &[], &[("l1", 0, 1), ("l2", 0, 2), ("l3", 0, 3)]);
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 2,
            edge_dirs: vec![],
            leg_dirs: vec![co(&[1, 0], 1), co(&[0, 1], 1), co(&[-1, -1], 1)],
            cone_labels: None,
        };
        assert!(ty.balance().balanced);
    }

    #[test]
    fn balance_defect_reported() {
        let g = graph(&[("v", 1)], &[], &[("l1", 0, 1), ("l2", 0, 2)]);
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 2,
            edge_dirs: vec![],
            leg_dirs: vec![co(&[1, 0], 1), co(&[0, 1], 1)],
            cone_labels: None,
        };
        let report = ty.balance();
        assert!(!report.balanced);
        assert_eq!(report.defects.len(), 1);
        assert_eq!(report.defects[0].1, ratv(&[1, 1]));
    }

    #[test]
    fn stability_cases() {
        // 2-valent genus-0 vertex, both edges along the same line, trivial fan
        let g = graph(
            &[("m", 0), ("a", 1), ("b", 0)],
            &[("e1", 1, 0), ("e2", 0, 2)],
            &[("l1", 1, 1), ("l2", 2, 2), ("l3", 2, 3)],
        );
        let ty = CombinatorialType {
            graph: g.clone(),
            ambient_dim: 1,
            edge_dirs: vec![co(&[1], 1), co(&[1], 1)],
            leg_dirs: vec![co(&[-1], 1), co(&[1], 2), co(&[-1], 1)],
            cone_labels: None,
        };
        assert!(ty.is_balanced());
        assert!(!ty.is_stable(&Fan::trivial(1)));

        // Same star but the middle vertex sits on the origin of the line's
        // fan: the edge directions leave the wall's span, so the star
        // crosses a wall and the vertex is needed.
        let fan = Fan {
            ambient_dim: 1,
            cones: vec![
                NamedCone { name: "origin".into(), cone: VCone::new(1, vec![]) },
                NamedCone { name: "pos".into(), cone: VCone::new(1, vec![ratv(&[1])]) },
                NamedCone { name: "neg".into(), cone: VCone::new(1, vec![ratv(&[-1])]) },
            ],
            complete: true,
        };
        let labeled = CombinatorialType {
            cone_labels: Some(vec![0, 2, 1]),
            ..ty.clone()
        };
        assert!(labeled.is_stable(&fan));

        // Trivalent-only types are stable vacuously.
        let g3 = graph(&[("v", 1)], &[], &[("l1", 0, 1), ("l2", 0, 2), ("l3", 0, 3)]);
        let t3 = CombinatorialType {
            graph: g3,
            ambient_dim: 2,
            edge_dirs: vec![],
            leg_dirs: vec![co(&[1, 0], 1), co(&[0, 1], 1), co(&[-1, -1], 1)],
            cone_labels: None,
        };
        assert!(t3.is_stable(&Fan::trivial(2)));
    }

    #[test]
    fn genus1_vertex_with_two_legs_is_stable() {
        // A 2-valent genus-1 vertex is not a removable subdivision point.
        let g = graph(&[("v", 1)], &[], &[("l1", 0, 1), ("l2", 0, 2)]);
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![],
            leg_dirs: vec![co(&[1], 2), co(&[-1], 2)],
            cone_labels: None,
        };
        assert!(ty.is_stable(&Fan::trivial(1)));
    }

    fn tree_with_legs() -> CombinatorialType {
        let g = graph(
            &[("a", 0), ("b", 1)],
            &[("e", 0, 1)],
            &[("l1", 0, 1), ("l2", 0, 2), ("l3", 1, 3)],
        );
        CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![co(&[1], 1)],
            leg_dirs: vec![co(&[-1], 2), co(&[1], 1), co(&[1], 1)],
            cone_labels: None,
        }
    }

    #[test]
    fn recession_collapses_to_legs() {
        let ty = tree_with_legs();
        assert!(ty.is_balanced());
        let rec = ty.recession().unwrap();
        assert_eq!(rec.genus, 1);
        assert_eq!(rec.legs.len(), 3);
        assert!(rec.is_balanced());
        // idempotence: recession of the recession type is itself
        let again = rec.as_type().recession().unwrap();
        assert_eq!(again, rec);
    }

    #[test]
    fn recession_of_empty_type() {
        let g = graph(&[("v", 1)], &[], &[]);
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 2,
            edge_dirs: vec![],
            leg_dirs: vec![],
            cone_labels: None,
        };
        let rec = ty.recession().unwrap();
        assert!(rec.legs.is_empty());
        assert!(rec.is_balanced());
    }

    #[test]
    fn recession_rejects_unbalanced() {
        let g = graph(&[("v", 1)], &[], &[("l1", 0, 1)]);
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![],
            leg_dirs: vec![co(&[1], 1)],
            cone_labels: None,
        };
        assert!(matches!(ty.recession(), Err(TropError::Unbalanced { .. })));
    }

    /// Oracle for the contraction radius: over all non-contracted flags, the
    /// shortest contracted-edge path distance from the circuit to the base.
    fn contraction_radius_oracle(map: &TropicalMap, chi: Option<&RatVec>) -> Option<Rat> {
        let curve = map.curve();
        let circuit = curve.circuit().unwrap();
        let contracted = |f: Flag| match chi {
            Some(c) => c.dot(&map.ty.flag_dir(f)).is_zero(),
            None => map.ty.flag_dir(f).is_zero(),
        };
        let n = curve.graph.vertices.len();
        let mut dist: Vec<Option<Rat>> = vec![None; n];
        for &v in &circuit.vertices {
            dist[v.0] = Some(Rat::zero());
        }
        for _ in 0..n {
            for e in curve.graph.edge_ids() {
                if !contracted(Flag::EdgeEnd(e, 0)) {
                    continue;
                }
                let (a, b) = curve.graph.edge(e).ends;
                let w = if circuit.edges.contains(&e) {
                    Rat::zero()
                } else {
                    curve.lengths[e.0].clone()
                };
                for (x, y) in [(a, b), (b, a)] {
                    if let Some(dx) = dist[x.0].clone() {
                        let cand = dx + w.clone();
                        if dist[y.0].as_ref().is_none_or(|d| cand < *d) {
                            dist[y.0] = Some(cand);
                        }
                    }
                }
            }
        }
        let mut best: Option<Rat> = None;
        for v in curve.graph.vertex_ids() {
            let Some(d) = dist[v.0].clone() else { continue };
            if curve.graph.flags_at(v).iter().any(|&f| !contracted(f))
                && best.as_ref().is_none_or(|b| d < *b)
            {
                best = Some(d);
            }
        }
        best
    }

    #[test]
    fn contraction_radius_contracted_circuit() {
        let map = banana_chain(rint(1), rint(2));
        assert_eq!(map.contraction_radius(None).unwrap(), Some(rint(1)));
        assert_eq!(contraction_radius_oracle(&map, None), Some(rint(1)));

        let map2 = banana_chain(rat(5, 2), rat(5, 2));
        assert_eq!(map2.contraction_radius(None).unwrap(), Some(rat(5, 2)));
        assert_eq!(contraction_radius_oracle(&map2, None), Some(rat(5, 2)));
    }

    #[test]
    fn contraction_radius_zero_when_circuit_moves() {
        // Square circuit embedded in the plane, legs balancing the corners.
        let g = graph(
            &[("a", 0), ("b", 0), ("c", 0), ("d", 0)],
            &[("e1", 0, 1), ("e2", 1, 2), ("e3", 2, 3), ("e4", 3, 0)],
            &[("l1", 0, 1), ("l2", 1, 2), ("l3", 2, 3), ("l4", 3, 4)],
        );
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 2,
            edge_dirs: vec![
                co(&[1, 0], 1),
                co(&[0, 1], 1),
                co(&[-1, 0], 1),
                co(&[0, -1], 1),
            ],
            leg_dirs: vec![
                co(&[-1, -1], 1),
                co(&[1, -1], 1),
                co(&[1, 1], 1),
                co(&[-1, 1], 1),
            ],
            cone_labels: None,
        };
        let lengths = vec![rint(1); 4];
        let positions = vec![ratv(&[0, 0]), ratv(&[1, 0]), ratv(&[1, 1]), ratv(&[0, 1])];
        let map = TropicalMap::new(ty, lengths, positions).unwrap();
        assert!(map.cycle_closure_holds().unwrap());
        assert_eq!(map.contraction_radius(None).unwrap(), Some(Rat::zero()));
        // Projection killing the horizontal direction: circuit still moves
        // vertically, radius stays 0.
        assert_eq!(
            map.contraction_radius(Some(&ratv(&[0, 1]))).unwrap(),
            Some(Rat::zero())
        );
    }

    #[test]
    fn contraction_radius_constant_projection_is_none() {
        let map = banana_chain(rint(1), rint(2));
        assert_eq!(map.contraction_radius(Some(&ratv(&[0]))).unwrap(), None);
    }

    #[test]
    fn contraction_radius_matches_oracle_under_projections() {
        let map = banana_chain(rint(1), rint(3));
        for chi in [ratv(&[1]), ratv(&[0]), ratv(&[2])] {
            assert_eq!(
                map.contraction_radius(Some(&chi)).unwrap(),
                contraction_radius_oracle(&map, Some(&chi)),
            );
        }
    }

    #[test]
    fn map_validation_catches_incompatible_positions() {
        let g = graph(
            &[("a", 1), ("b", 0)],
            &[("e", 0, 1)],
            &[("l", 1, 1), ("l2", 1, 2)],
        );
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![co(&[1], 1)],
            leg_dirs: vec![co(&[1], 1), co(&[-1], 2)],
            cone_labels: None,
        };
        // position difference is 2 but length * w * u = 1
        let bad = TropicalMap::new(ty.clone(), vec![rint(1)], vec![ratv(&[0]), ratv(&[2])]);
        assert!(bad.is_err());
        // legs at b: slopes 1 and -2, edge arrives with -1: defect -2
        let err = TropicalMap::new(ty, vec![rint(1)], vec![ratv(&[0]), ratv(&[1])]).unwrap_err();
        assert!(matches!(err, TropError::Unbalanced { .. }));
    }

    #[test]
    fn loops_must_be_contracted() {
        let g = graph(&[("v", 0)], &[("loop", 0, 0)], &[]);
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![co(&[1], 1)],
            leg_dirs: vec![],
            cone_labels: None,
        };
        assert!(ty.validate().is_err());
    }

    #[test]
    fn positions_from_lengths_roundtrip() {
        let map = banana_chain(rint(1), rint(2));
        let rebuilt =
            positions_from_lengths(&map.ty, &map.lengths, VertexId(1), &map.positions[1]).unwrap();
        assert_eq!(rebuilt, map.positions);
    }
}
