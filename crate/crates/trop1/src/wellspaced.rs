//! The realizability decision procedure for genus-1 tropical maps.
//!
//! A map to the line is well-spaced if either some flag based on the circuit
//! has nonzero slope (no neighborhood of the circuit is contracted), or the
//! minimum distance to the circuit among nonzero-slope flags based in the
//! contracted component is attained at least three times. For targets `Q^r`
//! the condition quantifies over all characters `chi: Q^r -> Q`; everything
//! the line check consumes depends only on which instance vectors `chi`
//! kills, so the uncountable quantifier collapses to one generic
//! representative per *flat*: a subspace spanned by instance vectors and
//! containing all circuit edge directions. This module enumerates the flats,
//! constructs exact generic representatives, and aggregates the verdicts.

use std::collections::HashSet;

use num::{Signed, Zero};

use crate::curve::{Flag, VertexId};
use crate::error::TropError;
use crate::linalg::{annihilator, primitive, span_with_dim, Rat, RatVec, Subspace};
use crate::tropmap::{LineSlopes, TropicalMap};

/// One flag based in the contracted component, with its radial distance and
/// whether the projected map has nonzero slope along it.
#[derive(Clone, Debug)]
pub struct FlagEntry {
    pub flag: Flag,
    pub label: String,
    pub base: VertexId,
    pub base_label: String,
    pub distance: Rat,
    pub nonzero_slope: bool,
}

/// Verdict of the line-target well-spacedness check for one projection.
#[derive(Clone, Debug)]
pub struct LineVerdict {
    pub well_spaced: bool,
    /// Condition (1): some circuit-based flag has nonzero slope, so no open
    /// neighborhood of the circuit is contracted.
    pub neighborhood_moves: bool,
    /// The projection is constant on the whole curve; treated as well-spaced
    /// with a warning since no flag of nonzero slope exists.
    pub globally_constant: bool,
    /// All flags based in the contracted component of the circuit.
    pub flags: Vec<FlagEntry>,
    pub min_distance: Option<Rat>,
    /// How many nonzero-slope flags attain the minimal distance.
    pub min_count: usize,
    /// How many distinct vertices base a minimal nonzero-slope flag.
    pub min_base_count: usize,
    /// Diagnostic for the alternative reading that admits flags whose base
    /// merely has the same image as the circuit without a contracted path to
    /// it: set when that reading would flip the verdict.
    pub image_reading_differs: bool,
}

/// Flag name for reports: legs by name, edge ends as `edge@vertex`.
fn flag_label(map: &TropicalMap, f: Flag) -> String {
    let g = &map.ty.graph;
    match f {
        Flag::Leg(l) => g.leg(l).name.clone(),
        Flag::EdgeEnd(e, _) => {
            let base = g.flag_base(f);
            format!("{}@{}", g.edge(e).name, g.vertex(base).name)
        }
    }
}

/// The well-spacedness check for one projection of the map, given the slope
/// of every edge and leg and the projected vertex values.
pub fn line_verdict(
    map: &TropicalMap,
    slopes: &LineSlopes,
    values: &[Rat],
) -> Result<LineVerdict, TropError> {
    let curve = map.curve();
    let g = &curve.graph;
    let circuit = curve.circuit()?;
    let parents = g.tree_parents(&circuit)?;

    // Condition (1): a circuit-based flag of nonzero slope.
    let neighborhood_moves = circuit.vertices.iter().any(|&v| {
        g.flags_at(v)
            .into_iter()
            .any(|f| !slopes.flag_slope(f).is_zero())
    });
    if neighborhood_moves {
        return Ok(LineVerdict {
            well_spaced: true,
            neighborhood_moves: true,
            globally_constant: false,
            flags: Vec::new(),
            min_distance: None,
            min_count: 0,
            min_base_count: 0,
            image_reading_differs: false,
        });
    }

    // The component of the circuit under edges of zero slope.
    let component = map.contracted_component(&circuit, &|e| slopes.edge_contracted(e));
    let mut flags = Vec::new();
    for &v in &component {
        let dist = curve.lambda_with(&circuit, &parents, v);
        for f in g.flags_at(v) {
            flags.push(FlagEntry {
                flag: f,
                label: flag_label(map, f),
                base: v,
                base_label: g.vertex(v).name.clone(),
                distance: dist.clone(),
                nonzero_slope: !slopes.flag_slope(f).is_zero(),
            });
        }
    }
    flags.sort_by(|a, b| (&a.distance, &a.base, &a.flag).cmp(&(&b.distance, &b.base, &b.flag)));

    let candidates: Vec<&FlagEntry> = flags.iter().filter(|f| f.nonzero_slope).collect();
    if candidates.is_empty() {
        return Ok(LineVerdict {
            well_spaced: true,
            neighborhood_moves: false,
            globally_constant: true,
            flags,
            min_distance: None,
            min_count: 0,
            min_base_count: 0,
            image_reading_differs: false,
        });
    }
    let min = candidates.iter().map(|f| f.distance.clone()).min().unwrap();
    let at_min: Vec<&&FlagEntry> = candidates.iter().filter(|f| f.distance == min).collect();
    let min_count = at_min.len();
    let min_base_count = at_min.iter().map(|f| f.base).collect::<HashSet<_>>().len();
    let well_spaced = min_count >= 3;

    // Alternative reading: admit nonzero-slope flags based anywhere with the
    // same projected value as the circuit, even without a contracted path.
    let circuit_value = &values[circuit.vertices[0].0];
    let mut alt_min: Option<Rat> = None;
    let mut alt_count = 0usize;
    for v in g.vertex_ids() {
        if values[v.0] != *circuit_value {
            continue;
        }
        let dist = curve.lambda_with(&circuit, &parents, v);
        for f in g.flags_at(v) {
            if slopes.flag_slope(f).is_zero() {
                continue;
            }
            match &alt_min {
                Some(m) if dist > *m => {}
                Some(m) if dist == *m => alt_count += 1,
                _ => {
                    alt_min = Some(dist.clone());
                    alt_count = 1;
                }
            }
        }
    }
    let alt_verdict = alt_count == 0 || alt_count >= 3;
    let image_reading_differs = alt_verdict != well_spaced;

    Ok(LineVerdict {
        well_spaced,
        neighborhood_moves: false,
        globally_constant: false,
        flags,
        min_distance: Some(min),
        min_count,
        min_base_count,
        image_reading_differs,
    })
}

/// Well-spacedness of a map to the line (`r = 1`).
pub fn is_well_spaced_line(map: &TropicalMap) -> Result<LineVerdict, TropError> {
    let slopes = map.line_slopes()?;
    let values: Vec<Rat> = map.positions.iter().map(|p| p.0[0].clone()).collect();
    line_verdict(map, &slopes, &values)
}

/// Speyer's stronger condition for maps to the line: the minimal distance
/// must be attained at two distinct vertices. Vacuously true when the
/// circuit is not contracted or the map is constant.
pub fn satisfies_speyer(map: &TropicalMap) -> Result<bool, TropError> {
    let verdict = is_well_spaced_line(map)?;
    if verdict.neighborhood_moves || verdict.globally_constant {
        return Ok(true);
    }
    Ok(verdict.min_base_count >= 2)
}

/// A flat of the instance's character arrangement: the span `W` of a subset
/// of instance vectors containing all circuit edge directions, with an exact
/// character vanishing on exactly the instance vectors inside `W`.
#[derive(Clone, Debug)]
pub struct CharacterFlat {
    pub subspace: Subspace,
    pub chi: RatVec,
}

/// The instance vectors whose zero pattern under a character determines the
/// line verdict: edge directions, leg directions, and vertex displacements
/// from the circuit.
pub fn instance_vectors(map: &TropicalMap) -> Result<Vec<RatVec>, TropError> {
    let circuit = map.ty.graph.circuit()?;
    let base = circuit.vertices[0];
    let mut out = Vec::new();
    for co in map.ty.edge_dirs.iter().chain(&map.ty.leg_dirs) {
        if !co.is_contracted() {
            out.push(co.dir());
        }
    }
    for v in map.ty.graph.vertex_ids() {
        let delta = map.positions[v.0].sub(&map.positions[base.0]);
        if !delta.is_zero() {
            out.push(delta);
        }
    }
    Ok(out)
}

/// Sign-normalized primitive representative of the line through `v`.
fn line_rep(v: &RatVec) -> RatVec {
    let (mut u, _) = primitive(v).expect("nonzero instance vector");
    if let Some(first) = u.0.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            u = u.neg();
        }
    }
    u
}

/// One representative flat per distinct subspace spanned by instance-vector
/// lines and containing all circuit edge directions. Projections along
/// characters outside every listed flat leave the circuit uncontracted, so
/// they satisfy condition (1) automatically and need no test.
pub fn character_flats(map: &TropicalMap) -> Result<Vec<CharacterFlat>, TropError> {
    let r = map.ambient_dim();
    let vectors = instance_vectors(map)?;
    let circuit_span = map.ty.circuit_span()?;

    let mut lines: Vec<RatVec> = Vec::new();
    let mut seen = HashSet::new();
    for v in &vectors {
        let rep = line_rep(v);
        if seen.insert(rep.clone()) {
            lines.push(rep);
        }
    }

    // Spans of up to r lines exhaust all subspaces spanned by subsets.
    let mut flats: Vec<Subspace> = Vec::new();
    let mut flat_seen = HashSet::new();
    let mut consider = |w: Subspace| {
        if w.dim() < r && w.contains_subspace(&circuit_span) && flat_seen.insert(w.clone()) {
            flats.push(w);
        }
    };
    let n = lines.len();
    let mut subset: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        start: usize,
        depth: usize,
        n: usize,
        r: usize,
        lines: &[RatVec],
        subset: &mut Vec<usize>,
        consider: &mut dyn FnMut(Subspace),
    ) {
        let chosen: Vec<RatVec> = subset.iter().map(|&i| lines[i].clone()).collect();
        consider(span_with_dim(&chosen, r));
        if depth == r {
            return;
        }
        for i in start..n {
            subset.push(i);
            rec(i + 1, depth + 1, n, r, lines, subset, consider);
            subset.pop();
        }
    }
    rec(0, 0, n, r, &lines, &mut subset, &mut consider);

    // Deterministic order: by dimension, then by canonical basis form.
    flats.sort_by_key(|w| (w.dim(), format!("{:?}", w.basis())));

    flats
        .into_iter()
        .map(|w| {
            let chi = generic_character(&w, &vectors, r)?;
            Ok(CharacterFlat { subspace: w, chi })
        })
        .collect()
}

/// An exact character vanishing on `w` and nonzero on every instance vector
/// outside `w`: a deterministic perturbation `sum(t^i b_i)` over a basis of
/// the annihilator, with `t` increased until all exclusions hold. Each
/// excluded vector rules out at most `dim` values of `t`, so the loop
/// terminates.
fn generic_character(
    w: &Subspace,
    vectors: &[RatVec],
    ambient: usize,
) -> Result<RatVec, TropError> {
    let perp = annihilator(w.basis(), ambient)?;
    if perp.dim() == 0 {
        return Err(TropError::InternalConsistency(
            "generic character requested for the full flat".into(),
        ));
    }
    let outside: Vec<&RatVec> = vectors.iter().filter(|v| !w.contains(v)).collect();
    let mut t: i64 = 1;
    loop {
        let mut chi = RatVec::zero(ambient);
        let mut power = Rat::from_integer(1.into());
        for b in perp.basis() {
            chi = chi.add(&b.scale(&power));
            power *= Rat::from_integer(t.into());
        }
        if outside.iter().all(|v| !chi.dot(v).is_zero()) {
            return Ok(chi);
        }
        t += 1;
    }
}

/// Per-flat result of the full well-spacedness check.
#[derive(Clone, Debug)]
pub struct FlatReport {
    pub flat: CharacterFlat,
    pub verdict: LineVerdict,
}

/// Result of the full (all-characters) well-spacedness check.
#[derive(Clone, Debug)]
pub struct WellSpacedReport {
    pub well_spaced: bool,
    pub flats: Vec<FlatReport>,
    /// Some flat's projection was globally constant.
    pub degenerate_warning: bool,
    /// Some flat's verdict would flip under the image-coincidence reading.
    pub image_reading_differs: bool,
}

/// Full well-spacedness: the line condition must hold for the projection
/// along one generic character per flat. An empty flat list (circuit
/// directions spanning the whole target) is vacuously well-spaced.
pub fn is_well_spaced(map: &TropicalMap) -> Result<WellSpacedReport, TropError> {
    let flats = character_flats(map)?;
    let mut reports = Vec::new();
    let mut all = true;
    let mut degenerate = false;
    let mut differs = false;
    for flat in flats {
        let slopes = map.project(&flat.chi);
        let values: Vec<Rat> = map.positions.iter().map(|p| flat.chi.dot(p)).collect();
        let verdict = line_verdict(map, &slopes, &values)?;
        all &= verdict.well_spaced;
        degenerate |= verdict.globally_constant;
        differs |= verdict.image_reading_differs;
        reports.push(FlatReport { flat, verdict });
    }
    Ok(WellSpacedReport {
        well_spaced: all,
        flats: reports,
        degenerate_warning: degenerate,
        image_reading_differs: differs,
    })
}

/// Matches an arbitrary character against the flat list by its exact zero
/// pattern on the instance vectors; `None` when the character does not
/// contract the circuit (condition (1) holds for it automatically).
pub fn matching_flat<'a>(
    map: &TropicalMap,
    flats: &'a [CharacterFlat],
    chi: &RatVec,
) -> Result<Option<&'a CharacterFlat>, TropError> {
    let circuit_span = map.ty.circuit_span()?;
    let vectors = instance_vectors(map)?;
    let killed: Vec<RatVec> = vectors
        .iter()
        .filter(|v| chi.dot(v).is_zero())
        .cloned()
        .collect();
    let w = span_with_dim(&killed, map.ambient_dim());
    if !w.contains_subspace(&circuit_span) {
        return Ok(None);
    }
    let found = flats.iter().find(|f| f.subspace == w);
    match found {
        Some(f) => Ok(Some(f)),
        None => Err(TropError::InternalConsistency(format!(
            "no flat for zero pattern of character {chi:?}"
        ))),
    }
}

/// The critical circle of a map: the smallest radius at which flag
/// directions leave the span `L` of the circuit directions, with the count
/// of flags exiting that circle and the dimension growth `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExitData {
    pub delta: Rat,
    pub exits: usize,
    pub new_dims: usize,
}

/// Computes the critical circle, or `None` when the consequence is vacuous:
/// either no flag direction ever leaves `L`, or one leaves it based on the
/// circuit itself, in which case no neighborhood of the circuit is
/// contracted by any character vanishing on `L` (condition (1) territory).
pub fn critical_exit_data(map: &TropicalMap) -> Result<Option<ExitData>, TropError> {
    let curve = map.curve();
    let g = &curve.graph;
    let circuit = curve.circuit()?;
    let parents = g.tree_parents(&circuit)?;
    let big_l = map.ty.circuit_span()?;

    let leaves_l = |f: Flag| {
        let d = map.ty.flag_dir(f);
        !d.is_zero() && !big_l.contains(&d)
    };
    if circuit
        .vertices
        .iter()
        .any(|&v| g.flags_at(v).iter().any(|&f| leaves_l(f)))
    {
        return Ok(None);
    }
    let mut delta: Option<Rat> = None;
    for v in g.vertex_ids() {
        if g.flags_at(v).iter().any(|&f| leaves_l(f)) {
            let lam = curve.lambda_with(&circuit, &parents, v);
            if delta.as_ref().is_none_or(|d| lam < *d) {
                delta = Some(lam);
            }
        }
    }
    let Some(delta) = delta else {
        return Ok(None);
    };

    // L' = L + directions of all flags based on the circle of radius delta.
    let mut new_dirs: Vec<RatVec> = big_l.basis().to_vec();
    let mut exits = 0usize;
    for v in g.vertex_ids() {
        let lam = curve.lambda_with(&circuit, &parents, v);
        if lam != delta {
            continue;
        }
        for f in g.flags_at(v) {
            new_dirs.push(map.ty.flag_dir(f));
            // The flag exits the circle if it points strictly outward:
            // legs always do; edges do when the far end is strictly deeper.
            let outward = match f {
                Flag::Leg(_) => true,
                Flag::EdgeEnd(e, which) => {
                    let (a, b) = g.edge(e).ends;
                    let other = if which == 0 { b } else { a };
                    curve.lambda_with(&circuit, &parents, other) > delta
                }
            };
            if outward {
                exits += 1;
            }
        }
    }
    let big_l_prime = span_with_dim(&new_dirs, map.ambient_dim());
    let new_dims = big_l_prime.dim() - big_l.dim();
    Ok(Some(ExitData { delta, exits, new_dims }))
}

/// The exit-count consequence of well-spacedness: a well-spaced map must
/// exit its critical circle along at least `m + 2` flags, where `m` is the
/// dimension growth at that radius. Vacuously true without a critical
/// circle.
pub fn m_plus_two_check(map: &TropicalMap) -> Result<bool, TropError> {
    Ok(match critical_exit_data(map)? {
        None => true,
        Some(data) => data.exits >= data.new_dims + 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::graph;
    use crate::linalg::rint;
    use crate::tropmap::{CombinatorialType, ContactOrder, TropicalMap};

    fn co(u: &[i64], w: u64) -> ContactOrder {
        ContactOrder::new(RatVec::from_ints(u), w).unwrap()
    }

    fn ratv(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    fn star_line_map(k: usize, dist: i64) -> TropicalMap {
        crate::generator::star_instance(k, rint(dist))
    }

    #[test]
    fn star_flags_decide_well_spacedness() {
        for k in 2..=5 {
            let map = star_line_map(k, 2);
            let verdict = is_well_spaced_line(&map).unwrap();
            assert_eq!(verdict.well_spaced, k >= 3, "k = {k}");
            assert_eq!(verdict.min_count, k);
            assert_eq!(verdict.min_base_count, 1);
            // Single support vertex: never satisfies Speyer's condition.
            assert!(!satisfies_speyer(&map).unwrap());
        }
    }

    #[test]
    fn noncontracted_circuit_is_well_spaced_by_condition_one() {
        // Banana circuit with legs of nonzero slope based on the circuit.
        let g = graph(
            &[("c", 0), ("d", 0)],
            &[("b1", 0, 1), ("b2", 0, 1)],
            &[("l1", 0, 1), ("l2", 0, 2)],
        );
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![ContactOrder::contracted(1), ContactOrder::contracted(1)],
            leg_dirs: vec![co(&[1], 1), co(&[-1], 1)],
            cone_labels: None,
        };
        let map =
            TropicalMap::new(ty, vec![rint(1), rint(1)], vec![ratv(&[0]), ratv(&[0])]).unwrap();
        let verdict = is_well_spaced_line(&map).unwrap();
        assert!(verdict.well_spaced);
        assert!(verdict.neighborhood_moves);
        assert!(satisfies_speyer(&map).unwrap());
    }

    #[test]
    fn constant_map_is_degenerate_but_true() {
        let g = graph(
            &[("v", 1), ("w", 0)],
            &[("e", 0, 1)],
            &[("l", 1, 1), ("m", 1, 2), ("n", 1, 3)],
        );
        let ty = CombinatorialType {
            graph: g,
            ambient_dim: 1,
            edge_dirs: vec![ContactOrder::contracted(1)],
            leg_dirs: vec![
                ContactOrder::contracted(1),
                ContactOrder::contracted(1),
                ContactOrder::contracted(1),
            ],
            cone_labels: None,
        };
        let map = TropicalMap::new(ty, vec![rint(1)], vec![ratv(&[0]), ratv(&[0])]).unwrap();
        let verdict = is_well_spaced_line(&map).unwrap();
        assert!(verdict.well_spaced);
        assert!(verdict.globally_constant);
    }

    fn square_circuit_map() -> TropicalMap {
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
        let positions = vec![ratv(&[0, 0]), ratv(&[1, 0]), ratv(&[1, 1]), ratv(&[0, 1])];
        TropicalMap::new(ty, vec![rint(1); 4], positions).unwrap()
    }

    #[test]
    fn flats_for_full_span_circuit_are_empty() {
        let map = square_circuit_map();
        let flats = character_flats(&map).unwrap();
        assert!(flats.is_empty());
        let report = is_well_spaced(&map).unwrap();
        assert!(report.well_spaced);
    }

    #[test]
    fn single_flat_for_contracted_circuit_on_line() {
        let map = star_line_map(3, 1);
        let flats = character_flats(&map).unwrap();
        assert_eq!(flats.len(), 1);
        assert_eq!(flats[0].subspace.dim(), 0);
        let report = is_well_spaced(&map).unwrap();
        assert!(report.well_spaced);
    }

    #[test]
    fn generic_character_avoids_instance_vectors() {
        let vectors = vec![ratv(&[1, 0]), ratv(&[1, 1]), ratv(&[0, 1])];
        let w = span_with_dim(&[ratv(&[1, 0])], 2);
        let chi = generic_character(&w, &vectors, 2).unwrap();
        assert!(chi.dot(&ratv(&[1, 0])).is_zero());
        assert!(!chi.dot(&ratv(&[1, 1])).is_zero());
        assert!(!chi.dot(&ratv(&[0, 1])).is_zero());
    }

    #[test]
    fn m_plus_two_star_and_vacuous_cases() {
        // Star with 3 flags at the minimal radius: L = 0, L' = Q, m = 1,
        // three exits.
        let map = star_line_map(3, 2);
        assert!(m_plus_two_check(&map).unwrap());
        // Full-span circuit: vacuous.
        assert!(m_plus_two_check(&square_circuit_map()).unwrap());
    }
}
