//! Abstract tropical curves: finite multigraphs with vertex genus, marked
//! legs, and positive rational edge lengths.
//!
//! The genus of a curve is the first Betti number of its graph plus the sum
//! of the vertex genera. For genus-1 curves the *circuit* is the smallest
//! genus-1 subgraph: either a unique genus-1 vertex or the unique cycle
//! (possibly a loop or a pair of parallel edges). The distance `lambda(v)`
//! from the circuit along the unique path underlies radial alignments and
//! every contraction-radius computation downstream.

use std::collections::HashSet;

use num::{Signed, Zero};

use crate::error::TropError;
use crate::linalg::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LegId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub name: String,
    pub ends: (VertexId, VertexId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Leg {
    pub name: String,
    pub base: VertexId,
    pub marking: u32,
}

/// The underlying combinatorial graph of a tropical curve (no lengths).
/// Shared by metric curves and combinatorial types of maps.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

/// A flag: a vertex together with an incident half-edge or leg.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Flag {
    /// The end `which` (0 or 1) of a bounded edge.
    EdgeEnd(EdgeId, u8),
    Leg(LegId),
}

impl CurveGraph {
    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn leg_ids(&self) -> impl Iterator<Item = LegId> {
        (0..self.legs.len()).map(LegId)
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn leg(&self, l: LegId) -> &Leg {
        &self.legs[l.0]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (a, b) = self.edges[e.0].ends;
        a == b
    }

    /// The base vertex of a flag.
    pub fn flag_base(&self, f: Flag) -> VertexId {
        match f {
            Flag::EdgeEnd(e, which) => {
                let (a, b) = self.edges[e.0].ends;
                if which == 0 {
                    a
                } else {
                    b
                }
            }
            Flag::Leg(l) => self.legs[l.0].base,
        }
    }

    /// All flags based at `v` (loops contribute both ends).
    pub fn flags_at(&self, v: VertexId) -> Vec<Flag> {
        let mut out = Vec::new();
        for e in self.edge_ids() {
            let (a, b) = self.edges[e.0].ends;
            if a == v {
                out.push(Flag::EdgeEnd(e, 0));
            }
            if b == v {
                out.push(Flag::EdgeEnd(e, 1));
            }
        }
        for l in self.leg_ids() {
            if self.legs[l.0].base == v {
                out.push(Flag::Leg(l));
            }
        }
        out
    }

    /// Valence counts incident edge ends (loops twice) and legs.
    pub fn valence(&self, v: VertexId) -> usize {
        self.flags_at(v).len()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.ends.0, e.ends.1), (e.ends.1, e.ends.0)] {
                    if a.0 == v && !seen[b.0] {
                        seen[b.0] = true;
                        stack.push(b.0);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First Betti number `|E| - |V| + 1` of a connected graph.
    pub fn h1(&self) -> Result<usize, TropError> {
        if !self.is_connected() {
            return Err(TropError::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    /// Genus: first Betti number plus the sum of the vertex genera.
    pub fn genus(&self) -> Result<u32, TropError> {
        let h1 = self.h1()? as u32;
        Ok(h1 + self.vertices.iter().map(|v| v.genus).sum::<u32>())
    }

    /// The smallest genus-1 subgraph of a genus-1 curve: the unique genus-1
    /// vertex if one exists, otherwise the unique cycle.
    pub fn circuit(&self) -> Result<Circuit, TropError> {
        let g = self.genus()?;
        if g != 1 {
            return Err(TropError::GenusNotOne(g));
        }
        if self.h1()? == 0 {
            let v = self
                .vertex_ids()
                .find(|&v| self.vertex(v).genus == 1)
                .expect("genus 1 with h1 = 0 has a genus-1 vertex");
            return Ok(Circuit { vertices: vec![v], edges: Vec::new() });
        }
        // Peel leaves: repeatedly drop vertices of edge-degree <= 1. What
        // remains is the unique cycle (a loop survives: degree 2).
        let mut alive_v: Vec<bool> = vec![true; self.vertices.len()];
        let mut alive_e: Vec<bool> = vec![true; self.edges.len()];
        loop {
            let mut changed = false;
            for v in 0..self.vertices.len() {
                if !alive_v[v] {
                    continue;
                }
                let mut deg = 0;
                let mut last_edge = None;
                for (ei, e) in self.edges.iter().enumerate() {
                    if !alive_e[ei] {
                        continue;
                    }
                    if e.ends.0 .0 == v {
                        deg += 1;
                        last_edge = Some(ei);
                    }
                    if e.ends.1 .0 == v {
                        deg += 1;
                        last_edge = Some(ei);
                    }
                }
                if deg <= 1 {
                    alive_v[v] = false;
                    if let Some(ei) = last_edge {
                        alive_e[ei] = false;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let vertices: Vec<VertexId> = (0..self.vertices.len())
            .filter(|&v| alive_v[v])
            .map(VertexId)
            .collect();
        let edges: Vec<EdgeId> = (0..self.edges.len())
            .filter(|&e| alive_e[e])
            .map(EdgeId)
            .collect();
        Ok(Circuit { vertices, edges })
    }

    /// Circuit-rooted forest structure: for every non-circuit vertex, the
    /// edge and vertex one step toward the circuit. Unique because the graph
    /// has first Betti number at most one and the circuit carries the cycle.
    pub fn tree_parents(
        &self,
        circuit: &Circuit,
    ) -> Result<Vec<Option<(VertexId, EdgeId)>>, TropError> {
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; self.vertices.len()];
        let mut seen: Vec<bool> = vec![false; self.vertices.len()];
        let circuit_edges: HashSet<EdgeId> = circuit.edges.iter().copied().collect();
        let mut queue: Vec<VertexId> = circuit.vertices.clone();
        for &v in &circuit.vertices {
            seen[v.0] = true;
        }
        while let Some(v) = queue.pop() {
            for (ei, e) in self.edges.iter().enumerate() {
                if circuit_edges.contains(&EdgeId(ei)) {
                    continue;
                }
                for (a, b) in [(e.ends.0, e.ends.1), (e.ends.1, e.ends.0)] {
                    if a == v && !seen[b.0] {
                        seen[b.0] = true;
                        parent[b.0] = Some((v, EdgeId(ei)));
                        queue.push(b);
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(TropError::Disconnected);
        }
        Ok(parent)
    }

    /// The edges of the unique path from the circuit to `v` (circuit end
    /// first).
    pub fn path_to_circuit(
        &self,
        circuit: &Circuit,
        parents: &[Option<(VertexId, EdgeId)>],
        v: VertexId,
    ) -> Vec<EdgeId> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = parents[cur.0] {
            path.push(e);
            cur = p;
        }
        debug_assert!(circuit.vertices.contains(&cur));
        path.reverse();
        path
    }

    /// Strict path order: `u < v` iff `u` is a proper ancestor of `v` in the
    /// circuit-rooted forest (the path from the circuit to `v` passes `u`).
    pub fn path_ancestor(
        &self,
        parents: &[Option<(VertexId, EdgeId)>],
        u: VertexId,
        v: VertexId,
    ) -> bool {
        if u == v {
            return false;
        }
        let mut cur = v;
        while let Some((p, _)) = parents[cur.0] {
            if p == u {
                return true;
            }
            cur = p;
        }
        false
    }

    /// All radial alignments: total preorders on the vertices in which the
    /// circuit vertices form the strictly minimal block and which extend the
    /// strict path order. Each corresponds to a cone of the radial
    /// subdivision of any moduli cone over this graph.
    pub fn enumerate_alignments(&self) -> Result<Vec<RadialAlignment>, TropError> {
        let circuit = self.circuit()?;
        let parents = self.tree_parents(&circuit)?;
        let on_circuit: Vec<bool> = {
            let mut m = vec![false; self.vertices.len()];
            for &v in &circuit.vertices {
                m[v.0] = true;
            }
            m
        };
        let outside: Vec<VertexId> = self.vertex_ids().filter(|v| !on_circuit[v.0]).collect();

        let mut out = Vec::new();
        let mut ranks = vec![0usize; self.vertices.len()];
        let mut remaining: HashSet<VertexId> = outside.iter().copied().collect();
        self.alignment_rec(&parents, &mut remaining, &mut ranks, 1, &mut out);
        Ok(out)
    }

    fn alignment_rec(
        &self,
        parents: &[Option<(VertexId, EdgeId)>],
        remaining: &mut HashSet<VertexId>,
        ranks: &mut Vec<usize>,
        next_rank: usize,
        out: &mut Vec<RadialAlignment>,
    ) {
        if remaining.is_empty() {
            out.push(RadialAlignment { ranks: ranks.clone() });
            return;
        }
        // Minimal elements: vertices whose parent is no longer remaining.
        let mut minimal: Vec<VertexId> = remaining
            .iter()
            .copied()
            .filter(|&v| match parents[v.0] {
                Some((p, _)) => !remaining.contains(&p),
                None => true,
            })
            .collect();
        minimal.sort();
        // Every nonempty subset of the minimal antichain can be the next
        // equal-distance block.
        let m = minimal.len();
        for mask in 1u32..(1 << m) {
            let block: Vec<VertexId> = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| minimal[i])
                .collect();
            for &v in &block {
                ranks[v.0] = next_rank;
                remaining.remove(&v);
            }
            self.alignment_rec(parents, remaining, ranks, next_rank + 1, out);
            for &v in &block {
                ranks[v.0] = 0;
                remaining.insert(v);
            }
        }
    }
}

/// The smallest genus-1 subgraph: a single genus-1 vertex, or the unique
/// cycle with its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Circuit {
    pub fn is_vertex_circuit(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }
}

/// A radial alignment: a total preorder on the vertices refining the path
/// order from the circuit, stored as a dense rank per vertex with the
/// circuit block at rank 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadialAlignment {
    pub ranks: Vec<usize>,
}

impl RadialAlignment {
    pub fn le(&self, u: VertexId, v: VertexId) -> bool {
        self.ranks[u.0] <= self.ranks[v.0]
    }

    pub fn lt(&self, u: VertexId, v: VertexId) -> bool {
        self.ranks[u.0] < self.ranks[v.0]
    }

    pub fn equivalent(&self, u: VertexId, v: VertexId) -> bool {
        self.ranks[u.0] == self.ranks[v.0]
    }

    /// Blocks of equal rank, in increasing rank order (block 0 = circuit).
    pub fn blocks(&self) -> Vec<Vec<VertexId>> {
        let max = self.ranks.iter().copied().max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); max + 1];
        for (v, &r) in self.ranks.iter().enumerate() {
            blocks[r].push(VertexId(v));
        }
        blocks
    }

    /// The alignment realized by concrete radial distances: vertices sharing
    /// a distance share a rank, ordered by distance.
    pub fn from_distances(lambdas: &[Rat]) -> RadialAlignment {
        let mut distinct: Vec<&Rat> = lambdas.iter().collect();
        distinct.sort();
        distinct.dedup();
        let ranks = lambdas
            .iter()
            .map(|x| distinct.iter().position(|d| *d == x).unwrap())
            .collect();
        RadialAlignment { ranks }
    }
}

/// A metric tropical curve: graph plus positive rational edge lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalCurve {
    pub graph: CurveGraph,
    pub lengths: Vec<Rat>,
}

impl TropicalCurve {
    pub fn new(graph: CurveGraph, lengths: Vec<Rat>) -> Result<Self, TropError> {
        if lengths.len() != graph.edges.len() {
            return Err(TropError::InvalidInstance(format!(
                "{} lengths for {} edges",
                lengths.len(),
                graph.edges.len()
            )));
        }
        for (e, len) in graph.edges.iter().zip(&lengths) {
            if !len.is_positive() {
                return Err(TropError::InvalidInstance(format!(
                    "edge {} has non-positive length {}",
                    e.name,
                    crate::linalg::format_rat(len)
                )));
            }
        }
        if !graph.is_connected() {
            return Err(TropError::Disconnected);
        }
        Ok(TropicalCurve { graph, lengths })
    }

    pub fn genus(&self) -> Result<u32, TropError> {
        self.graph.genus()
    }

    pub fn circuit(&self) -> Result<Circuit, TropError> {
        self.graph.circuit()
    }

    /// Radial distance: the total length of the unique path from the circuit
    /// to `v`; zero on circuit vertices.
    pub fn lambda(&self, v: VertexId) -> Result<Rat, TropError> {
        let circuit = self.circuit()?;
        let parents = self.graph.tree_parents(&circuit)?;
        Ok(self.lambda_with(&circuit, &parents, v))
    }

    pub fn lambda_with(
        &self,
        circuit: &Circuit,
        parents: &[Option<(VertexId, EdgeId)>],
        v: VertexId,
    ) -> Rat {
        self.graph
            .path_to_circuit(circuit, parents, v)
            .into_iter()
            .fold(Rat::zero(), |acc, e| acc + &self.lengths[e.0])
    }

    /// All radial distances, indexed by vertex.
    pub fn lambdas(&self) -> Result<Vec<Rat>, TropError> {
        let circuit = self.circuit()?;
        let parents = self.graph.tree_parents(&circuit)?;
        Ok(self
            .graph
            .vertex_ids()
            .map(|v| self.lambda_with(&circuit, &parents, v))
            .collect())
    }

    pub fn enumerate_alignments(&self) -> Result<Vec<RadialAlignment>, TropError> {
        self.graph.enumerate_alignments()
    }
}

/// Test/builder convenience: assemble a graph from terse tuples.
pub fn graph(
    vertices: &[(&str, u32)],
    edges: &[(&str, usize, usize)],
    legs: &[(&str, usize, u32)],
) -> CurveGraph {
    CurveGraph {
        vertices: vertices
            .iter()
            .map(|(n, g)| Vertex { name: n.to_string(), genus: *g })
            .collect(),
        edges: edges
            .iter()
            .map(|(n, a, b)| Edge {
                name: n.to_string(),
                ends: (VertexId(*a), VertexId(*b)),
            })
            .collect(),
        legs: legs
            .iter()
            .map(|(n, b, m)| Leg {
                name: n.to_string(),
                base: VertexId(*b),
                marking: *m,
            })
            .collect(),
    }
}
