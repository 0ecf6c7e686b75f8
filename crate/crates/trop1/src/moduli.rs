//! Moduli cones of combinatorial types and the generalized cone complexes
//! built from them.
//!
//! The moduli cone of a type lives in coordinates (base position in `Q^r`,
//! one length per bounded edge). Positions of all vertices are linear
//! expressions along a spanning tree; each non-tree edge contributes the
//! cycle-closure equalities, fan labels contribute membership constraints,
//! and edge lengths contribute strict inequalities. Radial alignments cut
//! the cone into the radial subdivision; face arrows between radial types
//! are witnessed by edge contractions that preserve orders and cone labels.
//! The well-spaced subcomplex keeps the cells whose relative interior points
//! are well-spaced, decided at sample points: the verdict is constant on
//! each cell because the radial walls refine the arrangement it depends on,
//! and a two-sample cross-check guards that claim at runtime.

use std::collections::{BTreeMap, HashSet};

use num::Zero;

use crate::cone::Cone;
use crate::curve::{CurveGraph, Edge, EdgeId, Leg, RadialAlignment, Vertex, VertexId};
use crate::error::TropError;
use crate::linalg::{primitive, rint, Rat, RatVec};
use crate::lp::{feasible_point, Constraint};
use crate::tropmap::{
    positions_from_lengths, CombinatorialType, ContactOrder, Fan, RecessionType, TropicalMap,
};
use crate::wellspaced::is_well_spaced;

/// Sum over vertices of valence at least 4 of (valence - 3).
pub fn overvalence(ty: &CombinatorialType) -> usize {
    ty.graph
        .vertex_ids()
        .map(|v| ty.graph.valence(v))
        .filter(|&val| val >= 4)
        .map(|val| val - 3)
        .sum()
}

/// The expected dimension formula `(r - 3)(1 - b1) + n - ov`.
pub fn expected_dim_formula(r: i64, b1: i64, n: i64, ov: i64) -> i64 {
    (r - 3) * (1 - b1) + n - ov
}

/// Expected dimension of the moduli cone of a type.
pub fn expected_dim(ty: &CombinatorialType) -> Result<i64, TropError> {
    let b1 = ty.graph.h1()? as i64;
    Ok(expected_dim_formula(
        ty.ambient_dim as i64,
        b1,
        ty.graph.legs.len() as i64,
        overvalence(ty) as i64,
    ))
}

/// A moduli cone together with the data needed to turn its points back into
/// maps: the base vertex whose position occupies the first `r` coordinates,
/// followed by one length per bounded edge in graph order.
#[derive(Clone, Debug)]
pub struct ModuliCone {
    pub cone: Cone,
    pub base_vertex: VertexId,
}

impl ModuliCone {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn split_point(&self, ty: &CombinatorialType, point: &RatVec) -> (RatVec, Vec<Rat>) {
        let r = ty.ambient_dim;
        let base = RatVec(point.0[..r].to_vec());
        let lengths = point.0[r..].to_vec();
        debug_assert_eq!(lengths.len(), ty.graph.edges.len());
        (base, lengths)
    }

    /// Reconstructs the tropical map at a cone point with positive lengths.
    pub fn map_at(&self, ty: &CombinatorialType, point: &RatVec) -> Result<TropicalMap, TropError> {
        let (base, lengths) = self.split_point(ty, point);
        let positions = positions_from_lengths(ty, &lengths, self.base_vertex, &base)?;
        TropicalMap::new(ty.clone(), lengths, positions)
    }
}

/// Linear expressions for vertex positions over the cone coordinates, via a
/// spanning tree from the base vertex.
struct PositionExprs {
    /// coeffs[v][coord] = linear form over the (r + E) cone variables
    coeffs: Vec<Vec<RatVec>>,
    /// edges outside the spanning tree (loops excluded): closure equalities
    non_tree: Vec<EdgeId>,
}

fn position_exprs(ty: &CombinatorialType, base: VertexId) -> Result<PositionExprs, TropError> {
    let r = ty.ambient_dim;
    let nvars = r + ty.graph.edges.len();
    let nv = ty.graph.vertices.len();
    let mut coeffs: Vec<Option<Vec<RatVec>>> = vec![None; nv];
    let mut base_expr = Vec::with_capacity(r);
    for t in 0..r {
        let mut form = RatVec::zero(nvars);
        form.0[t] = rint(1);
        base_expr.push(form);
    }
    coeffs[base.0] = Some(base_expr);
    let mut tree_edges: HashSet<EdgeId> = HashSet::new();
    let mut queue = vec![base];
    while let Some(v) = queue.pop() {
        for e in ty.graph.edge_ids() {
            let (a, b) = ty.graph.edge(e).ends;
            for (x, y, sign) in [(a, b, 1i64), (b, a, -1)] {
                if x == v && coeffs[y.0].is_none() {
                    let dir = ty.edge_dirs[e.0].dir();
                    let mut expr = coeffs[x.0].clone().unwrap();
                    for (t, form) in expr.iter_mut().enumerate() {
                        form.0[r + e.0] += rint(sign) * &dir.0[t];
                    }
                    coeffs[y.0] = Some(expr);
                    tree_edges.insert(e);
                    queue.push(y);
                }
            }
        }
    }
    let coeffs: Vec<Vec<RatVec>> = coeffs
        .into_iter()
        .map(|c| c.ok_or(TropError::Disconnected))
        .collect::<Result<_, _>>()?;
    let non_tree = ty
        .graph
        .edge_ids()
        .filter(|e| !tree_edges.contains(e) && !ty.graph.is_loop(*e))
        .collect();
    Ok(PositionExprs { coeffs, non_tree })
}

/// The moduli cone of a balanced type of genus at most 1: coordinates are
/// the base position and the edge lengths; constraints are the cycle closure
/// equalities, nonnegative (strictly positive in the relative interior)
/// lengths, and membership of every labeled vertex position in its fan cone.
/// Errors if the cell has empty relative interior: no map of this exact type
/// exists, and pretending otherwise would poison everything downstream.
pub fn moduli_cone(ty: &CombinatorialType, fan: Option<&Fan>) -> Result<ModuliCone, TropError> {
    ty.validate()?;
    let genus = ty.graph.genus()?;
    if genus > 1 {
        return Err(TropError::InvalidInstance(format!(
            "moduli cones are implemented for genus <= 1, got {genus}"
        )));
    }
    let report = ty.balance();
    if !report.balanced {
        let (v, d) = &report.defects[0];
        return Err(TropError::Unbalanced {
            vertex: ty.graph.vertex(*v).name.clone(),
            defect: crate::tropmap::format_defect(d),
        });
    }
    let r = ty.ambient_dim;
    let base = match ty.graph.circuit() {
        Ok(c) => c.vertices[0],
        Err(_) => VertexId(0), // genus 0: any root works
    };
    let exprs = position_exprs(ty, base)?;

    let mut vars: Vec<String> = (0..r).map(|t| format!("p{t}")).collect();
    for e in &ty.graph.edges {
        vars.push(format!("len_{}", e.name));
    }
    let mut cone = Cone::full(vars);

    // Closure of each non-tree edge: pos(b) - pos(a) = len * w * u.
    for &e in &exprs.non_tree {
        let (a, b) = ty.graph.edge(e).ends;
        let dir = ty.edge_dirs[e.0].dir();
        for t in 0..r {
            let mut form = exprs.coeffs[b.0][t].sub(&exprs.coeffs[a.0][t]);
            form.0[r + e.0] -= &dir.0[t];
            cone.add_eq(form);
        }
    }
    // Lengths are nonnegative, strictly positive inside the cell.
    for e in ty.graph.edge_ids() {
        let mut form = RatVec::zero(cone.num_vars());
        form.0[r + e.0] = rint(1);
        cone.add_ineq(form, true);
    }
    // Fan membership of labeled vertices.
    if let (Some(labels), Some(fan)) = (&ty.cone_labels, fan) {
        let nvars = cone.num_vars();
        for v in ty.graph.vertex_ids() {
            let (eqs, ineqs) = fan.cones[labels[v.0]].cone.hrep();
            let substitute = |h: &RatVec| {
                let mut form = RatVec::zero(nvars);
                for t in 0..r {
                    form = form.add(&exprs.coeffs[v.0][t].scale(&h.0[t]));
                }
                form
            };
            for h in &eqs {
                cone.add_eq(substitute(h));
            }
            for h in &ineqs {
                cone.add_ineq(substitute(h), true);
            }
        }
    }

    let mc = ModuliCone { cone, base_vertex: base };
    if mc.cone.cell_is_empty() {
        return Err(TropError::InfeasibleCone(
            "no point with positive lengths realizes this type".into(),
        ));
    }
    Ok(mc)
}

/// Superabundance. The span characterization (circuit directions inside a
/// proper subspace) is the defining test; for cycle circuits the dimension
/// excess `dim > expected` is evaluated as well and the two must agree. For
/// a genus-1 vertex there is no cycle constraint for the count to cancel
/// against, so only the span test applies there.
pub fn is_superabundant(ty: &CombinatorialType, fan: Option<&Fan>) -> Result<bool, TropError> {
    let genus = ty.graph.genus()?;
    if genus != 1 {
        return Err(TropError::GenusNotOne(genus));
    }
    let span_test = !ty.circuit_span()?.is_full();
    if ty.graph.h1()? == 1 {
        let dim = moduli_cone(ty, fan)?.dim() as i64;
        let expected = expected_dim(ty)?;
        let dim_test = dim > expected;
        if dim_test != span_test {
            return Err(TropError::InternalConsistency(format!(
                "superabundance tests disagree: dim {dim} vs expected {expected}, \
                 circuit span {}",
                if span_test { "proper" } else { "full" }
            )));
        }
    }
    Ok(span_test)
}

/// The radial distance of every vertex as a linear form in the cone's
/// length coordinates.
fn lambda_forms(ty: &CombinatorialType, nvars: usize) -> Result<Vec<RatVec>, TropError> {
    let circuit = ty.graph.circuit()?;
    let parents = ty.graph.tree_parents(&circuit)?;
    let r = ty.ambient_dim;
    let mut forms = Vec::new();
    for v in ty.graph.vertex_ids() {
        let mut form = RatVec::zero(nvars);
        for e in ty.graph.path_to_circuit(&circuit, &parents, v) {
            form.0[r + e.0] = rint(1);
        }
        forms.push(form);
    }
    Ok(forms)
}

/// A combinatorial type with a radial alignment: one cone of the radial
/// subdivision.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialType {
    pub ty: CombinatorialType,
    pub alignment: RadialAlignment,
}

/// Cuts the moduli cone along a radial alignment: equalities within blocks,
/// strict comparisons between consecutive blocks.
pub fn alignment_cone(
    ty: &CombinatorialType,
    mc: &ModuliCone,
    alignment: &RadialAlignment,
) -> Result<Cone, TropError> {
    let mut cone = mc.cone.clone();
    let lambdas = lambda_forms(ty, cone.num_vars())?;
    let blocks = alignment.blocks();
    for block in &blocks {
        let first = block[0];
        for &v in &block[1..] {
            cone.add_eq(lambdas[v.0].sub(&lambdas[first.0]));
        }
    }
    for pair in blocks.windows(2) {
        let lo = pair[0][0];
        let hi = pair[1][0];
        cone.add_ineq(lambdas[hi.0].sub(&lambdas[lo.0]), true);
    }
    Ok(cone)
}

/// The radial subdivision of the moduli cone: one subcone per alignment of
/// the graph whose cell is nonempty. The cells cover the cone and meet only
/// along faces, since each point's radial distances realize exactly one
/// total preorder.
pub fn radial_subdivision(
    ty: &CombinatorialType,
    fan: Option<&Fan>,
) -> Result<Vec<(RadialAlignment, Cone)>, TropError> {
    let mc = moduli_cone(ty, fan)?;
    let mut out = Vec::new();
    for alignment in ty.graph.enumerate_alignments()? {
        let cone = alignment_cone(ty, &mc, &alignment)?;
        if !cone.cell_is_empty() {
            out.push((alignment, cone));
        }
    }
    Ok(out)
}

/// Contracts a set of bounded edges. Vertices of each contracted component
/// merge into one whose genus is the component's total genus plus the first
/// Betti number of the contracted subgraph (contracting the whole cycle or a
/// loop concentrates the genus in the new vertex). Returns the new type and
/// the vertex map. Fails when a surviving directed edge would become a loop,
/// which cannot carry a direction.
pub fn contract_edges(
    ty: &CombinatorialType,
    contracted: &HashSet<EdgeId>,
) -> Result<(CombinatorialType, Vec<usize>), TropError> {
    let g = &ty.graph;
    let nv = g.vertices.len();
    let mut rep: Vec<usize> = (0..nv).collect();
    fn find(rep: &mut Vec<usize>, x: usize) -> usize {
        if rep[x] != x {
            let root = find(rep, rep[x]);
            rep[x] = root;
        }
        rep[x]
    }
    for &e in contracted {
        let (a, b) = g.edge(e).ends;
        let (ra, rb) = (find(&mut rep, a.0), find(&mut rep, b.0));
        if ra != rb {
            rep[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (0..nv).map(|v| find(&mut rep, v)).collect();
    let mut order: Vec<usize> = Vec::new();
    let mut index_of = vec![usize::MAX; nv];
    for v in 0..nv {
        let root = roots[v];
        if index_of[root] == usize::MAX {
            index_of[root] = order.len();
            order.push(root);
        }
    }
    for v in 0..nv {
        roots[v] = index_of[roots[v]];
    }
    // Genus: members' genus plus independent contracted cycles.
    let mut genus: Vec<u32> = vec![0; order.len()];
    let mut members: Vec<usize> = vec![0; order.len()];
    for v in 0..nv {
        genus[roots[v]] += g.vertices[v].genus;
        members[roots[v]] += 1;
    }
    let mut internal_edges = vec![0usize; order.len()];
    for &e in contracted {
        let (a, _) = g.edge(e).ends;
        internal_edges[roots[a.0]] += 1;
    }
    for c in 0..order.len() {
        let h1 = internal_edges[c] + 1 - members[c];
        genus[c] += h1 as u32;
    }
    let vertices: Vec<Vertex> = order
        .iter()
        .enumerate()
        .map(|(c, &root)| Vertex {
            name: g.vertices[root].name.clone(),
            genus: genus[c],
        })
        .collect();
    let mut edges = Vec::new();
    let mut edge_dirs = Vec::new();
    for e in g.edge_ids() {
        if contracted.contains(&e) {
            continue;
        }
        let (a, b) = g.edge(e).ends;
        let (na, nb) = (roots[a.0], roots[b.0]);
        if na == nb && !ty.edge_dirs[e.0].is_contracted() {
            return Err(TropError::InvalidInstance(format!(
                "contraction would turn directed edge {} into a loop",
                g.edge(e).name
            )));
        }
        edges.push(Edge {
            name: g.edge(e).name.clone(),
            ends: (VertexId(na), VertexId(nb)),
        });
        edge_dirs.push(ty.edge_dirs[e.0].clone());
    }
    let legs: Vec<Leg> = g
        .legs
        .iter()
        .map(|l| Leg {
            name: l.name.clone(),
            base: VertexId(roots[l.base.0]),
            marking: l.marking,
        })
        .collect();
    // Cone labels of merged vertices are not inferable without positions;
    // callers dealing with labeled fans supply them separately.
    let new_ty = CombinatorialType {
        graph: CurveGraph { vertices, edges, legs },
        ambient_dim: ty.ambient_dim,
        edge_dirs,
        leg_dirs: ty.leg_dirs.clone(),
        cone_labels: None,
    };
    debug_assert!(new_ty.is_balanced());
    Ok((new_ty, roots))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for shorter in permutations(n - 1) {
        for slot in 0..n {
            let mut p = shorter.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

/// All vertex relabelings preserving the color classes; labels are handed
/// out group by group.
fn color_respecting_perms(group_list: &[Vec<usize>], nv: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![usize::MAX; nv]];
    let mut next_label = 0usize;
    for group in group_list {
        let perms = permutations(group.len());
        let mut grown = Vec::with_capacity(out.len() * perms.len());
        for base in &out {
            for p in &perms {
                let mut q = base.clone();
                for (slot, &gi) in p.iter().enumerate() {
                    q[group[gi]] = next_label + slot;
                }
                grown.push(q);
            }
        }
        out = grown;
        next_label += group.len();
    }
    out
}

/// Canonical form of a decorated type (optionally with an alignment): the
/// minimal encoding over all genus-, marking-, and alignment-preserving
/// vertex relabelings. Two types are isomorphic iff their keys agree; the
/// returned permutation realizes the canonical labeling.
pub fn canonical_form(
    ty: &CombinatorialType,
    alignment: Option<&RadialAlignment>,
) -> (String, Vec<usize>) {
    let g = &ty.graph;
    let nv = g.vertices.len();
    let color = |v: usize| -> String {
        let mut legs: Vec<String> = g
            .legs
            .iter()
            .zip(&ty.leg_dirs)
            .filter(|(l, _)| l.base.0 == v)
            .map(|(l, co)| format!("{}:{:?}:{}", l.marking, co.u, co.w))
            .collect();
        legs.sort();
        format!(
            "g{} val{} rank{} [{}]",
            g.vertices[v].genus,
            g.valence(VertexId(v)),
            alignment.map(|a| a.ranks[v] as i64).unwrap_or(-1),
            legs.join(";")
        )
    };
    let colors: Vec<String> = (0..nv).map(color).collect();
    let mut groups: BTreeMap<&String, Vec<usize>> = BTreeMap::new();
    for (v, c) in colors.iter().enumerate() {
        groups.entry(c).or_default().push(v);
    }
    let group_list: Vec<Vec<usize>> = groups.into_values().collect();

    let encode = |perm: &[usize]| -> String {
        let mut vparts: Vec<(usize, &String)> =
            (0..nv).map(|v| (perm[v], &colors[v])).collect();
        vparts.sort();
        let mut eparts: Vec<String> = g
            .edges
            .iter()
            .zip(&ty.edge_dirs)
            .map(|(e, co)| {
                let (a, b) = (perm[e.ends.0 .0], perm[e.ends.1 .0]);
                let (lo, hi, dir) = if a <= b {
                    (a, b, co.clone())
                } else {
                    (b, a, co.reversed())
                };
                let text = if lo == hi {
                    // loop: orientation is meaningless, normalize the sign
                    let fwd = format!("{:?}:{}", dir.u, dir.w);
                    let rev = format!("{:?}:{}", dir.reversed().u, dir.w);
                    fwd.min(rev)
                } else {
                    format!("{:?}:{}", dir.u, dir.w)
                };
                format!("({lo},{hi},{text})")
            })
            .collect();
        eparts.sort();
        let mut lparts: Vec<String> = g
            .legs
            .iter()
            .zip(&ty.leg_dirs)
            .map(|(l, co)| format!("({},{},{:?}:{})", l.marking, perm[l.base.0], co.u, co.w))
            .collect();
        lparts.sort();
        format!(
            "V[{}] E[{}] L[{}]",
            vparts
                .into_iter()
                .map(|(i, c)| format!("{i}:{c}"))
                .collect::<Vec<_>>()
                .join("|"),
            eparts.join("|"),
            lparts.join("|")
        )
    };

    let mut best: Option<(String, Vec<usize>)> = None;
    for perm in color_respecting_perms(&group_list, nv) {
        let key = encode(&perm);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, perm));
        }
    }
    best.expect("identity relabeling always exists")
}

/// Decorated isomorphism test; on success returns the vertex map from `a`
/// to `b`.
pub fn decorated_iso(a: &CombinatorialType, b: &CombinatorialType) -> Option<Vec<usize>> {
    let (ka, pa) = canonical_form(a, None);
    let (kb, pb) = canonical_form(b, None);
    if ka != kb {
        return None;
    }
    let nv = b.graph.vertices.len();
    let mut inv_pb = vec![0usize; nv];
    for (v, &slot) in pb.iter().enumerate() {
        inv_pb[slot] = v;
    }
    Some(pa.iter().map(|&slot| inv_pb[slot]).collect())
}

/// An edge-contraction face arrow: contracting `contracted` edges of the
/// finer type carries it onto the coarser type; `vertex_map[v]` is the
/// coarser vertex under each finer vertex `v`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub contracted: Vec<EdgeId>,
    pub vertex_map: Vec<usize>,
}

/// Decides whether `coarser` indexes a face of `finer`'s cone: there must be
/// a set of edge contractions carrying the finer graph to the coarser one
/// preserving decorations and markings, order-preserving on the alignments,
/// and moving each vertex's cone label to a face of the original label.
pub fn face_arrow(
    coarser: &RadialType,
    finer: &RadialType,
    fan: Option<&Fan>,
) -> Result<Option<Contraction>, TropError> {
    let ne_f = finer.ty.graph.edges.len();
    let ne_c = coarser.ty.graph.edges.len();
    if ne_c > ne_f || coarser.ty.ambient_dim != finer.ty.ambient_dim {
        return Ok(None);
    }
    let to_drop = ne_f - ne_c;
    let edge_ids: Vec<EdgeId> = finer.ty.graph.edge_ids().collect();

    let mut stack = vec![(0usize, Vec::<EdgeId>::new())];
    while let Some((i, chosen)) = stack.pop() {
        if chosen.len() == to_drop {
            let contracted: HashSet<EdgeId> = chosen.iter().copied().collect();
            let Ok((quotient, roots)) = contract_edges(&finer.ty, &contracted) else {
                continue;
            };
            let Some(iso) = decorated_iso(&quotient, &coarser.ty) else {
                continue;
            };
            let vertex_map: Vec<usize> = roots.iter().map(|&c| iso[c]).collect();
            // Order preservation into the coarser alignment.
            let nv = finer.ty.graph.vertices.len();
            let fine = &finer.alignment.ranks;
            let coarse = &coarser.alignment.ranks;
            let order_ok = (0..nv).all(|v| {
                (0..nv).all(|w| {
                    fine[v] > fine[w] || coarse[vertex_map[v]] <= coarse[vertex_map[w]]
                })
            });
            if !order_ok {
                continue;
            }
            // Cone labels must move to faces.
            if let (Some(fan), Some(fl), Some(cl)) =
                (fan, &finer.ty.cone_labels, &coarser.ty.cone_labels)
            {
                let faces_ok = (0..nv).all(|v| {
                    let up = &fan.cones[fl[v]].cone;
                    let down = &fan.cones[cl[vertex_map[v]]].cone;
                    up.is_face(down)
                });
                if !faces_ok {
                    continue;
                }
            }
            let mut contracted: Vec<EdgeId> = contracted.into_iter().collect();
            contracted.sort();
            return Ok(Some(Contraction { contracted, vertex_map }));
        }
        if i >= edge_ids.len() || edge_ids.len() - i < to_drop - chosen.len() {
            continue;
        }
        let mut with = chosen.clone();
        with.push(edge_ids[i]);
        stack.push((i + 1, with));
        stack.push((i + 1, chosen));
    }
    Ok(None)
}

/// One cell of a generalized cone complex.
#[derive(Clone, Debug)]
pub struct ComplexCell {
    pub radial: RadialType,
    pub cone: Cone,
    pub base_vertex: VertexId,
    pub dim: usize,
}

/// A face arrow between cells of a complex, by cell indices.
#[derive(Clone, Debug)]
pub struct FaceArrowRecord {
    pub face: usize,
    pub cell: usize,
    pub contracted_edges: Vec<String>,
    pub vertex_map: Vec<usize>,
}

/// A generalized cone complex: cells indexed by radial types, glued along
/// edge-contraction face arrows.
#[derive(Clone, Debug)]
pub struct ConeComplex {
    pub cells: Vec<ComplexCell>,
    pub arrows: Vec<FaceArrowRecord>,
}

/// Dimension and purity statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStats {
    pub cells_by_dim: BTreeMap<usize, usize>,
    pub maximal_dims: Vec<usize>,
    pub pure: bool,
}

impl ConeComplex {
    pub fn stats(&self) -> ComplexStats {
        let mut cells_by_dim: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &self.cells {
            *cells_by_dim.entry(c.dim).or_default() += 1;
        }
        let faces: HashSet<usize> = self.arrows.iter().map(|a| a.face).collect();
        let mut maximal_dims: Vec<usize> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(i, _)| !faces.contains(i))
            .map(|(_, c)| c.dim)
            .collect();
        maximal_dims.sort_unstable();
        maximal_dims.dedup();
        let pure = maximal_dims.len() <= 1;
        ComplexStats { cells_by_dim, maximal_dims, pure }
    }
}

/// Assembles radial types into a cone complex: cones are built, duplicate
/// cells (up to decorated isomorphism with alignments) are merged, empty
/// cells are dropped, and all face arrows are computed. All types must share
/// one recession type.
pub fn assemble_complex(
    radial_types: &[RadialType],
    fan: Option<&Fan>,
) -> Result<ConeComplex, TropError> {
    let mut recessions: Vec<RecessionType> = Vec::new();
    for rt in radial_types {
        recessions.push(rt.ty.recession()?);
    }
    if let Some(first) = recessions.first() {
        if let Some(bad) = recessions.iter().find(|r| *r != first) {
            return Err(TropError::MixedRecession(format!(
                "types with {} and {} legs or differing contact orders",
                first.legs.len(),
                bad.legs.len()
            )));
        }
    }

    let mut keyed: Vec<(String, ComplexCell)> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for rt in radial_types {
        let (key, _) = canonical_form(&rt.ty, Some(&rt.alignment));
        if !seen.insert(key.clone()) {
            continue;
        }
        let mc = moduli_cone(&rt.ty, fan)?;
        let cone = alignment_cone(&rt.ty, &mc, &rt.alignment)?;
        if cone.cell_is_empty() {
            continue;
        }
        let dim = cone.dim();
        keyed.push((
            key,
            ComplexCell {
                radial: rt.clone(),
                cone,
                base_vertex: mc.base_vertex,
                dim,
            },
        ));
    }
    keyed.sort_by_key(|(key, cell)| (std::cmp::Reverse(cell.dim), key.clone()));
    let cells: Vec<ComplexCell> = keyed.into_iter().map(|(_, c)| c).collect();

    let mut arrows = Vec::new();
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if i == j {
                continue;
            }
            if let Some(c) = face_arrow(&cells[i].radial, &cells[j].radial, fan)? {
                arrows.push(FaceArrowRecord {
                    face: i,
                    cell: j,
                    contracted_edges: c
                        .contracted
                        .iter()
                        .map(|e| cells[j].radial.ty.graph.edge(*e).name.clone())
                        .collect(),
                    vertex_map: c.vertex_map,
                });
            }
        }
    }
    Ok(ConeComplex { cells, arrows })
}

/// Whether the relative interior of a cell consists of well-spaced maps,
/// decided at sample points. The radial walls refine every comparison the
/// verdict depends on, so it is constant on the cell; sampling two points
/// cross-checks that and fails loudly instead of guessing when they split.
pub fn cell_is_well_spaced(cell: &ComplexCell) -> Result<bool, TropError> {
    let mc = ModuliCone {
        cone: cell.cone.clone(),
        base_vertex: cell.base_vertex,
    };
    let samples = cell.cone.sample_relint_cell_points(2);
    if samples.is_empty() {
        return Err(TropError::InternalConsistency(
            "well-spacedness query on an empty cell".into(),
        ));
    }
    let mut verdicts = Vec::new();
    for s in &samples {
        let map = mc.map_at(&cell.radial.ty, s)?;
        verdicts.push(is_well_spaced(&map)?.well_spaced);
    }
    if verdicts.windows(2).any(|w| w[0] != w[1]) {
        return Err(TropError::InternalConsistency(
            "well-spacedness is not constant on a radial cell; the radial \
             subdivision should already refine the verdict's walls"
                .into(),
        ));
    }
    Ok(verdicts[0])
}

/// Restriction of a complex to its well-spaced cells. The result must be
/// closed under face arrows (faces of well-spaced cells are well-spaced);
/// a violation is reported as an internal error, not silently repaired.
pub fn well_spaced_subcomplex(complex: &ConeComplex) -> Result<ConeComplex, TropError> {
    let mut keep = Vec::new();
    for cell in &complex.cells {
        keep.push(cell_is_well_spaced(cell)?);
    }
    for arrow in &complex.arrows {
        if keep[arrow.cell] && !keep[arrow.face] {
            return Err(TropError::InternalConsistency(format!(
                "well-spaced subcomplex is not face-closed: cell {} kept, face {} dropped",
                arrow.cell, arrow.face
            )));
        }
    }
    let mut new_index = vec![usize::MAX; complex.cells.len()];
    let mut cells = Vec::new();
    for (i, cell) in complex.cells.iter().enumerate() {
        if keep[i] {
            new_index[i] = cells.len();
            cells.push(cell.clone());
        }
    }
    let arrows = complex
        .arrows
        .iter()
        .filter(|a| keep[a.face] && keep[a.cell])
        .map(|a| FaceArrowRecord {
            face: new_index[a.face],
            cell: new_index[a.cell],
            contracted_edges: a.contracted_edges.clone(),
            vertex_map: a.vertex_map.clone(),
        })
        .collect();
    Ok(ConeComplex { cells, arrows })
}

/// All balanced, stable genus-1 combinatorial types with at most
/// `max_vertices` vertices and the given recession type, up to decorated
/// isomorphism. Stability is taken against the trivial fan: genus-0
/// vertices need valence 3, a genus-1 vertex valence 1 (or it is the whole
/// curve).
///
/// Tree edge directions are forced by the legs hanging beyond them. Cycle
/// edge directions have one free integer parameter which must lie in the
/// relative interior of the convex hull of the cumulative hanging sums for
/// the closure to admit positive lengths; that hull is bounded by the total
/// leg weight, keeping the enumeration finite.
pub fn enumerate_types(
    recession: &RecessionType,
    max_vertices: usize,
) -> Result<Vec<CombinatorialType>, TropError> {
    if !recession.is_balanced() {
        return Err(TropError::InvalidInstance(
            "recession type is not balanced".into(),
        ));
    }
    if recession.genus != 1 {
        return Err(TropError::GenusNotOne(recession.genus));
    }
    let n = recession.legs.len();

    let mut results: Vec<CombinatorialType> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();

    for k in 1..=max_vertices {
        for tree in labeled_trees(k) {
            let mut assignment = vec![0usize; n];
            loop {
                for gv in 0..k {
                    try_tree_type(recession, k, &tree, gv, &assignment, &mut seen, &mut results);
                }
                for a in 0..k {
                    for b in a..k {
                        try_cycle_type(
                            recession,
                            k,
                            &tree,
                            (a, b),
                            &assignment,
                            &mut seen,
                            &mut results,
                        )?;
                    }
                }
                // next leg assignment, odometer style
                let mut i = 0;
                while i < n {
                    assignment[i] += 1;
                    if assignment[i] < k {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    Ok(results)
}

/// All labeled trees on `k` vertices as edge lists (Pruefer decoding).
fn labeled_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 1 {
        return vec![Vec::new()];
    }
    if k == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; k - 2];
    loop {
        out.push(decode_pruefer(&seq, k));
        let mut i = 0;
        loop {
            if i == k - 2 {
                return out;
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

fn decode_pruefer(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &s in seq {
        let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn build_graph(
    recession: &RecessionType,
    k: usize,
    tree: &[(usize, usize)],
    extra: Option<(usize, usize)>,
    genus_vertex: Option<usize>,
    assignment: &[usize],
) -> CurveGraph {
    let vertices = (0..k)
        .map(|v| Vertex {
            name: format!("v{v}"),
            genus: if genus_vertex == Some(v) { 1 } else { 0 },
        })
        .collect();
    let mut edges: Vec<Edge> = tree
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Edge {
            name: format!("e{i}"),
            ends: (VertexId(a), VertexId(b)),
        })
        .collect();
    if let Some((a, b)) = extra {
        edges.push(Edge {
            name: format!("e{}", edges.len()),
            ends: (VertexId(a), VertexId(b)),
        });
    }
    let legs = recession
        .legs
        .iter()
        .enumerate()
        .map(|(i, (m, _))| Leg {
            name: format!("l{m}"),
            base: VertexId(assignment[i]),
            marking: *m,
        })
        .collect();
    CurveGraph { vertices, edges, legs }
}

/// Stability for enumeration with the trivial fan.
fn stable_for_enumeration(g: &CurveGraph) -> bool {
    g.vertex_ids().all(|v| {
        let val = g.valence(v);
        if g.vertex(v).genus == 0 {
            val >= 3
        } else {
            val >= 1 || g.vertices.len() == 1
        }
    })
}

/// Leg direction totals of the forest hanging at each circuit vertex.
fn hanging_sums(
    g: &CurveGraph,
    leg_dirs: &[ContactOrder],
    circuit: &crate::curve::Circuit,
    r: usize,
) -> Result<Vec<RatVec>, TropError> {
    let parents = g.tree_parents(circuit)?;
    let mut root_of = vec![usize::MAX; g.vertices.len()];
    for v in g.vertex_ids() {
        let mut cur = v;
        while let Some((p, _)) = parents[cur.0] {
            cur = p;
        }
        root_of[v.0] = cur.0;
    }
    let mut sums = vec![RatVec::zero(r); g.vertices.len()];
    for (l, co) in g.legs.iter().zip(leg_dirs) {
        let root = root_of[l.base.0];
        sums[root] = sums[root].add(&co.dir());
    }
    Ok(sums)
}

/// Directions of the circuit-rooted forest edges: the sum of all leg
/// directions beyond the edge. `None` on circuit edges.
fn forest_edge_dirs(
    g: &CurveGraph,
    leg_dirs: &[ContactOrder],
    circuit: &crate::curve::Circuit,
    r: usize,
) -> Result<Vec<Option<RatVec>>, TropError> {
    let parents = g.tree_parents(circuit)?;
    let mut subtree = vec![RatVec::zero(r); g.vertices.len()];
    for (l, co) in g.legs.iter().zip(leg_dirs) {
        let mut cur = l.base;
        subtree[cur.0] = subtree[cur.0].add(&co.dir());
        while let Some((p, _)) = parents[cur.0] {
            subtree[p.0] = subtree[p.0].add(&co.dir());
            cur = p;
        }
    }
    let mut dirs: Vec<Option<RatVec>> = vec![None; g.edges.len()];
    for v in g.vertex_ids() {
        if let Some((_, e)) = parents[v.0] {
            // oriented along the stored edge; outward into the subtree at v
            let (a, _b) = g.edge(e).ends;
            let outward = subtree[v.0].clone();
            dirs[e.0] = Some(if a == v { outward.neg() } else { outward });
        }
    }
    Ok(dirs)
}

fn contact_from_int_vec(d: &RatVec, r: usize) -> ContactOrder {
    if d.is_zero() {
        ContactOrder::contracted(r)
    } else {
        let (u, c) = primitive(d).expect("nonzero");
        let w: u64 = c.to_integer().try_into().expect("positive content");
        ContactOrder::new(u, w).expect("primitive")
    }
}

fn try_tree_type(
    recession: &RecessionType,
    k: usize,
    tree: &[(usize, usize)],
    genus_vertex: usize,
    assignment: &[usize],
    seen: &mut HashSet<String>,
    results: &mut Vec<CombinatorialType>,
) {
    let r = recession.ambient_dim;
    let g = build_graph(recession, k, tree, None, Some(genus_vertex), assignment);
    if !stable_for_enumeration(&g) {
        return;
    }
    let leg_dirs: Vec<ContactOrder> = recession.legs.iter().map(|(_, co)| co.clone()).collect();
    let Ok(circuit) = g.circuit() else { return };
    let Ok(dirs) = forest_edge_dirs(&g, &leg_dirs, &circuit, r) else {
        return;
    };
    let edge_dirs: Vec<ContactOrder> = dirs
        .into_iter()
        .map(|d| contact_from_int_vec(&d.expect("tree edge"), r))
        .collect();
    let ty = CombinatorialType {
        graph: g,
        ambient_dim: r,
        edge_dirs,
        leg_dirs,
        cone_labels: None,
    };
    if !ty.is_balanced() {
        return;
    }
    push_type(ty, seen, results);
}

fn try_cycle_type(
    recession: &RecessionType,
    k: usize,
    tree: &[(usize, usize)],
    extra: (usize, usize),
    assignment: &[usize],
    seen: &mut HashSet<String>,
    results: &mut Vec<CombinatorialType>,
) -> Result<(), TropError> {
    let r = recession.ambient_dim;
    let g = build_graph(recession, k, tree, Some(extra), None, assignment);
    if !stable_for_enumeration(&g) {
        return Ok(());
    }
    let leg_dirs: Vec<ContactOrder> = recession.legs.iter().map(|(_, co)| co.clone()).collect();
    let Ok(circuit) = g.circuit() else {
        return Ok(());
    };
    let Ok(forest_dirs) = forest_edge_dirs(&g, &leg_dirs, &circuit, r) else {
        return Ok(());
    };
    let steps = crate::tropmap::cycle_orientation(&g, &circuit);
    let hangs = hanging_sums(&g, &leg_dirs, &circuit, r)?;
    let c = steps.len();
    let mut cycle_vertices = Vec::with_capacity(c);
    {
        let mut cur = circuit.vertices[0];
        for &(e, sign) in &steps {
            cycle_vertices.push(cur);
            let (a, b) = g.edge(e).ends;
            cur = if sign > 0 { b } else { a };
        }
    }
    // Walk directions a_i = x - C_i, C_0 = 0, C_i = C_{i-1} + hang(v_i).
    let mut offsets: Vec<RatVec> = Vec::with_capacity(c);
    let mut acc = RatVec::zero(r);
    offsets.push(acc.clone());
    for i in 1..c {
        acc = acc.add(&hangs[cycle_vertices[i].0]);
        offsets.push(acc.clone());
    }

    for x in cycle_parameter_candidates(&offsets, r) {
        let mut edge_dirs: Vec<Option<ContactOrder>> = forest_dirs
            .iter()
            .map(|d| d.as_ref().map(|v| contact_from_int_vec(v, r)))
            .collect();
        let mut valid = true;
        for (i, &(e, sign)) in steps.iter().enumerate() {
            let a_i = x.sub(&offsets[i]);
            let stored = if sign > 0 { a_i.clone() } else { a_i.neg() };
            if g.is_loop(e) && !stored.is_zero() {
                valid = false;
                break;
            }
            edge_dirs[e.0] = Some(contact_from_int_vec(&stored, r));
        }
        if !valid {
            continue;
        }
        let edge_dirs: Vec<ContactOrder> = edge_dirs
            .into_iter()
            .map(|d| d.expect("all edges assigned"))
            .collect();
        let ty = CombinatorialType {
            graph: g.clone(),
            ambient_dim: r,
            edge_dirs,
            leg_dirs: leg_dirs.clone(),
            cone_labels: None,
        };
        if !ty.is_balanced() {
            continue;
        }
        push_type(ty, seen, results);
    }
    Ok(())
}

/// Integer vectors `x` admitting strictly positive lengths with
/// `sum len_i (x - C_i) = 0`: the integer points of the relative interior of
/// the convex hull of the offsets, found by exact feasibility over the
/// bounding box.
fn cycle_parameter_candidates(offsets: &[RatVec], r: usize) -> Vec<RatVec> {
    let c = offsets.len();
    if offsets.iter().all(|o| o == &offsets[0]) {
        return vec![offsets[0].clone()];
    }
    let mut lo = vec![i64::MAX; r];
    let mut hi = vec![i64::MIN; r];
    for o in offsets {
        for t in 0..r {
            let v: i64 = o.0[t]
                .to_integer()
                .try_into()
                .expect("offsets stay desk-scale integers");
            lo[t] = lo[t].min(v);
            hi[t] = hi[t].max(v);
        }
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    'outer: loop {
        let candidate = RatVec::from_ints(&x);
        let mut eqs = Vec::new();
        for t in 0..r {
            let row: Vec<Rat> = offsets.iter().map(|o| &candidate.0[t] - &o.0[t]).collect();
            eqs.push(Constraint::new(RatVec(row), Rat::zero()));
        }
        let ineqs: Vec<Constraint> = (0..c)
            .map(|i| {
                let mut row = RatVec::zero(c);
                row.0[i] = rint(1);
                Constraint::new(row, rint(1))
            })
            .collect();
        if feasible_point(c, &eqs, &ineqs).is_some() {
            out.push(candidate);
        }
        for t in 0..r {
            x[t] += 1;
            if x[t] <= hi[t] {
                continue 'outer;
            }
            x[t] = lo[t];
        }
        break;
    }
    out
}

fn push_type(
    ty: CombinatorialType,
    seen: &mut HashSet<String>,
    results: &mut Vec<CombinatorialType>,
) {
    debug_assert!(ty.validate().is_ok());
    let (key, _) = canonical_form(&ty, None);
    if seen.insert(key) {
        results.push(ty);
    }
}
