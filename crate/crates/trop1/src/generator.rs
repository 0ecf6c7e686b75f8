//! Deterministic generation of balanced genus-1 tropical maps for stress
//! tests and property checks.
//!
//! The construction works backwards from positions: a cycle (or loop, or a
//! genus-1 vertex) is laid out inside a chosen sublattice of `Z^r`, tree
//! vertices are attached with random displacements, and every remaining
//! balancing defect is paid off with legs. Vertices are padded with opposite
//! leg pairs until no 2-valent genus-0 vertex remains, so every generated
//! type is balanced and stable by construction. All randomness comes from a
//! seeded splitmix64 stream; identical seeds give identical instances.


use crate::curve::{CurveGraph, Edge, Leg, Vertex, VertexId};
use crate::linalg::{primitive, rat, rint, Rat, RatVec};
use crate::tropmap::{CombinatorialType, ContactOrder, TropicalMap};

/// splitmix64: small, fast, reproducible. Not cryptographic, not meant to be.
#[derive(Clone, Debug)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next_u64() % 100 < percent
    }
}

/// Knobs for [`random_map`].
#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub ambient_dim: usize,
    /// Maximal cycle length; 1 gives a contracted loop.
    pub max_cycle: usize,
    /// Extra tree vertices hung off the circuit.
    pub max_extra_vertices: usize,
    /// Hard cap on the number of bounded edges.
    pub max_edges: usize,
    /// Allow a genus-1 vertex instead of a cycle.
    pub allow_vertex_genus: bool,
}

impl GeneratorConfig {
    pub fn small(ambient_dim: usize) -> Self {
        GeneratorConfig {
            ambient_dim,
            max_cycle: 4,
            max_extra_vertices: 3,
            max_edges: 8,
            allow_vertex_genus: false,
        }
    }
}

struct Builder {
    r: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    edge_dirs: Vec<ContactOrder>,
    lengths: Vec<Rat>,
    legs: Vec<Leg>,
    leg_dirs: Vec<ContactOrder>,
    positions: Vec<RatVec>,
}

impl Builder {
    fn new(r: usize) -> Self {
        Builder {
            r,
            vertices: Vec::new(),
            edges: Vec::new(),
            edge_dirs: Vec::new(),
            lengths: Vec::new(),
            legs: Vec::new(),
            leg_dirs: Vec::new(),
            positions: Vec::new(),
        }
    }

    fn add_vertex(&mut self, genus: u32, pos: RatVec) -> VertexId {
        let id = VertexId(self.vertices.len());
        self.vertices.push(Vertex { name: format!("v{}", id.0), genus });
        self.positions.push(pos);
        id
    }

    /// Adds an edge whose displacement is the integer vector `disp`,
    /// splitting it into a length and a contact order.
    fn add_edge(&mut self, a: VertexId, b: VertexId, disp: RatVec, rng: &mut SplitMix64) {
        let name = format!("e{}", self.edges.len());
        self.edges.push(Edge { name, ends: (a, b) });
        if disp.is_zero() {
            self.edge_dirs.push(ContactOrder::contracted(self.r));
            let len = match rng.range(0, 3) {
                0 => rint(1),
                1 => rat(1, 2),
                2 => rint(2),
                _ => rat(3, 2),
            };
            self.lengths.push(len);
        } else {
            let (u, content) = primitive(&disp).expect("nonzero displacement");
            let c: u64 = content
                .to_integer()
                .try_into()
                .expect("small positive content");
            // split content = w * length
            let w = if rng.chance(50) { 1 } else { c };
            self.edge_dirs
                .push(ContactOrder::new(u, w).expect("primitive"));
            self.lengths
                .push(Rat::from_integer(c.into()) / Rat::from_integer(w.into()));
        }
    }

    fn add_leg(&mut self, base: VertexId, co: ContactOrder) {
        let marking = self.legs.len() as u32 + 1;
        let name = format!("l{}", marking);
        self.legs.push(Leg { name, base, marking });
        self.leg_dirs.push(co);
    }

    fn outgoing_sum(&self, v: VertexId) -> RatVec {
        let mut sum = RatVec::zero(self.r);
        for (e, co) in self.edges.iter().zip(&self.edge_dirs) {
            if e.ends.0 == v {
                sum = sum.add(&co.dir());
            }
            if e.ends.1 == v {
                sum = sum.sub(&co.dir());
            }
        }
        for (l, co) in self.legs.iter().zip(&self.leg_dirs) {
            if l.base == v {
                sum = sum.add(&co.dir());
            }
        }
        sum
    }

    fn valence(&self, v: VertexId) -> usize {
        let mut n = 0;
        for e in &self.edges {
            if e.ends.0 == v {
                n += 1;
            }
            if e.ends.1 == v {
                n += 1;
            }
        }
        n + self.legs.iter().filter(|l| l.base == v).count()
    }

    fn finish(self) -> TropicalMap {
        let ty = CombinatorialType {
            graph: CurveGraph {
                vertices: self.vertices,
                edges: self.edges,
                legs: self.legs,
            },
            ambient_dim: self.r,
            edge_dirs: self.edge_dirs,
            leg_dirs: self.leg_dirs,
            cone_labels: None,
        };
        TropicalMap::new(ty, self.lengths, self.positions)
            .expect("generator must produce valid maps")
    }
}

fn random_int_vec(rng: &mut SplitMix64, r: usize, active: &[bool], bound: i64) -> RatVec {
    let mut v = RatVec::zero(r);
    for i in 0..r {
        if active[i] {
            v.0[i] = rint(rng.range(-bound, bound));
        }
    }
    v
}

/// A random balanced, stable genus-1 tropical map. Deterministic in `seed`.
pub fn random_map(seed: u64, cfg: &GeneratorConfig) -> TropicalMap {
    let mut rng = SplitMix64::new(seed);
    let r = cfg.ambient_dim;
    let mut b = Builder::new(r);

    let use_vertex_genus = cfg.allow_vertex_genus && rng.chance(25);

    // The sublattice available to circuit displacements decides whether the
    // instance comes out superabundant: a proper subset of the coordinates
    // (possibly empty = contracted circuit) versus all of them.
    let full_span = rng.chance(40);
    let limit = if full_span {
        r
    } else {
        rng.range(0, r as i64 - 1) as usize
    };
    let mut active = vec![false; r];
    for slot in active.iter_mut().take(limit) {
        *slot = true;
    }

    let mut circuit_vertices: Vec<VertexId> = Vec::new();
    if use_vertex_genus {
        let v = b.add_vertex(1, RatVec::zero(r));
        circuit_vertices.push(v);
    } else {
        let c = rng.range(1, cfg.max_cycle as i64) as usize;
        if c == 1 {
            let v = b.add_vertex(0, RatVec::zero(r));
            circuit_vertices.push(v);
            b.add_edge(v, v, RatVec::zero(r), &mut rng);
        } else {
            // Positions around the cycle inside the active sublattice.
            let mut pos = vec![RatVec::zero(r)];
            for _ in 1..c {
                let step = random_int_vec(&mut rng, r, &active, 2);
                pos.push(pos.last().unwrap().add(&step));
            }
            for p in &pos {
                let v = b.add_vertex(0, p.clone());
                circuit_vertices.push(v);
            }
            for i in 0..c {
                let j = (i + 1) % c;
                let disp = pos[j].sub(&pos[i]);
                b.add_edge(circuit_vertices[i], circuit_vertices[j], disp, &mut rng);
            }
        }
    }

    // Hang tree vertices anywhere, in any direction.
    let extras = rng.range(0, cfg.max_extra_vertices as i64) as usize;
    let all_active = vec![true; r];
    for _ in 0..extras {
        if b.edges.len() >= cfg.max_edges {
            break;
        }
        let parent = VertexId(rng.range(0, b.vertices.len() as i64 - 1) as usize);
        let disp = random_int_vec(&mut rng, r, &all_active, 2);
        let child_pos = b.positions[parent.0].add(&disp);
        let child = b.add_vertex(0, child_pos);
        b.add_edge(parent, child, disp, &mut rng);
    }

    // Pay off balancing defects with legs, then pad low-valence vertices
    // with opposite pairs until nothing 2-valent remains.
    for v in 0..b.vertices.len() {
        let v = VertexId(v);
        let defect = b.outgoing_sum(v).neg();
        if !defect.is_zero() {
            let (u, content) = primitive(&defect).expect("nonzero defect");
            let w: u64 = content
                .to_integer()
                .try_into()
                .expect("integer defect content");
            b.add_leg(v, ContactOrder::new(u, w).expect("primitive"));
        }
    }
    for v in 0..b.vertices.len() {
        let v = VertexId(v);
        while b.valence(v) < 3 {
            let axis = rng.range(0, r as i64 - 1) as usize;
            let mut u = RatVec::zero(r);
            u.0[axis] = rint(1);
            b.add_leg(v, ContactOrder::new(u.clone(), 1).expect("unit"));
            b.add_leg(v, ContactOrder::new(u.neg(), 1).expect("unit"));
        }
    }

    b.finish()
}

/// A star instance for the bridge to the descent oracle: a contracted loop
/// circuit, one contracted edge of length `dist` to a support vertex, and
/// `k` legs of nonzero slope there (slopes `1, ..., 1, -(k-1)`), mapping to
/// the line. The minimal distance is attained exactly `k` times, all at one
/// vertex.
pub fn star_instance(k: usize, dist: Rat) -> TropicalMap {
    assert!(k >= 2, "need at least two flags to balance");
    let mut b = Builder::new(1);
    let mut rng = SplitMix64::new(0);
    let center = b.add_vertex(0, RatVec::zero(1));
    b.add_edge(center, center, RatVec::zero(1), &mut rng);
    let support = b.add_vertex(0, RatVec::zero(1));
    let name = format!("e{}", b.edges.len());
    b.edges.push(Edge { name, ends: (center, support) });
    b.edge_dirs.push(ContactOrder::contracted(1));
    b.lengths.push(dist);
    for _ in 0..(k - 1) {
        b.add_leg(support, ContactOrder::new(RatVec::from_ints(&[1]), 1).unwrap());
    }
    b.add_leg(
        support,
        ContactOrder::new(RatVec::from_ints(&[-1]), (k - 1) as u64).unwrap(),
    );
    // Pad the loop vertex to valence 3 with a contracted marked point.
    b.add_leg(center, ContactOrder::contracted(1));
    b.finish()
}

/// The slopes of the star instance's support flags, i.e. the induced
/// single-branch descent slopes.
pub fn star_slopes(k: usize) -> Vec<i64> {
    let mut a = vec![1i64; k - 1];
    a.push(-((k - 1) as i64));
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_maps_are_valid_and_genus_one() {
        for seed in 0..100 {
            for r in 1..=3 {
                let cfg = GeneratorConfig::small(r);
                let map = random_map(seed * 31 + r as u64, &cfg);
                assert_eq!(map.curve().genus().unwrap(), 1);
                assert!(map.ty.is_balanced());
                assert!(map.ty.is_stable(&crate::tropmap::Fan::trivial(r)));
                assert!(map.cycle_closure_holds().unwrap());
                assert!(map.ty.graph.edges.len() <= cfg.max_edges);
            }
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = GeneratorConfig::small(2);
        let a = random_map(42, &cfg);
        let b = random_map(42, &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn generator_hits_both_superabundance_classes() {
        let cfg = GeneratorConfig::small(2);
        let mut proper = 0;
        let mut full = 0;
        for seed in 0..60 {
            let map = random_map(seed, &cfg);
            if map.ty.circuit_span().unwrap().is_full() {
                full += 1;
            } else {
                proper += 1;
            }
        }
        assert!(proper > 5, "want superabundant instances, got {proper}");
        assert!(full > 5, "want non-superabundant instances, got {full}");
    }

    #[test]
    fn star_instance_shape() {
        let map = star_instance(3, rint(2));
        assert_eq!(map.curve().genus().unwrap(), 1);
        assert!(map.ty.is_balanced());
        let slopes = star_slopes(3);
        assert_eq!(slopes.iter().sum::<i64>(), 0);
    }
}
