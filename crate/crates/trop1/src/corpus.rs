//! The bundled instance corpus.
//!
//! Four families anchor the test suite, each shipped as a builder with the
//! decisive lengths as parameters and as a JSON file with default values:
//!
//! - `fig2`: a degree-3 genus-1 curve in the plane whose hexagonal circuit
//!   spans both directions; the standard non-superabundant example.
//! - `fig3`: a chain with a contracted banana circuit mapping to the line;
//!   the contraction-radius example (radius = min of the two attach
//!   lengths).
//! - `fig4`: a curve over a two-dimensional target whose circuit image is a
//!   horizontal segment; the vertical projection contracts it, and the map
//!   is well-spaced exactly when the two attach lengths agree.
//! - `fig5`: a chain over a contracted circuit with three minimal flags on
//!   one vertex; well-spaced for `l1 <= l2` but failing the stronger
//!   two-vertex (Speyer) condition unless `l1 = l2`.

use num::Zero;

use crate::curve::{graph, TropicalCurve};
use crate::instance::Instance;
use crate::linalg::{rint, Rat, RatVec};
use crate::tropmap::{CombinatorialType, ContactOrder, TropicalMap};

fn co(u: &[i64], w: u64) -> ContactOrder {
    ContactOrder::new(RatVec::from_ints(u), w).expect("corpus contact orders are primitive")
}

fn cz(r: usize) -> ContactOrder {
    ContactOrder::contracted(r)
}

fn instance(name: &str, map: TropicalMap) -> Instance {
    Instance {
        name: name.into(),
        curve: TropicalCurve {
            graph: map.ty.graph.clone(),
            lengths: map.lengths.clone(),
        },
        map: Some(map),
        fan: None,
    }
}

/// Degree-3 genus-1 plane curve with a hexagonal circuit spanning `Q^2`:
/// three legs in each of the directions (-1,-1), (0,1), (1,0).
pub fn fig2() -> Instance {
    let g = graph(
        &[
            ("a", 0), // (0,0)
            ("b", 0), // (1,0)
            ("c", 0), // (2,1)
            ("d", 0), // (2,2)
            ("e", 0), // (1,2)
            ("f", 0), // (0,1)
            ("g", 0), // (-1,1)
            ("h", 0), // (1,-1)
            ("i", 0), // (5/2,5/2)
        ],
        &[
            ("ab", 0, 1),
            ("bc", 1, 2),
            ("cd", 2, 3),
            ("de", 3, 4),
            ("ef", 4, 5),
            ("fa", 5, 0),
            ("fg", 5, 6),
            ("bh", 1, 7),
            ("di", 3, 8),
        ],
        &[
            ("l1", 0, 1),
            ("l2", 2, 2),
            ("l3", 4, 3),
            ("l4", 6, 4),
            ("l5", 6, 5),
            ("l6", 7, 6),
            ("l7", 7, 7),
            ("l8", 8, 8),
            ("l9", 8, 9),
        ],
    );
    let ty = CombinatorialType {
        graph: g,
        ambient_dim: 2,
        edge_dirs: vec![
            co(&[1, 0], 1),
            co(&[1, 1], 1),
            co(&[0, 1], 1),
            co(&[-1, 0], 1),
            co(&[-1, -1], 1),
            co(&[0, -1], 1),
            co(&[-1, 0], 1),
            co(&[0, -1], 1),
            co(&[1, 1], 1),
        ],
        leg_dirs: vec![
            co(&[-1, -1], 1), // at a
            co(&[1, 0], 1),   // at c
            co(&[0, 1], 1),   // at e
            co(&[-1, -1], 1), // at g
            co(&[0, 1], 1),   // at g
            co(&[-1, -1], 1), // at h
            co(&[1, 0], 1),   // at h
            co(&[0, 1], 1),   // at i
            co(&[1, 0], 1),   // at i
        ],
        cone_labels: None,
    };
    let lengths = vec![
        rint(1),
        rint(1),
        rint(1),
        rint(1),
        rint(1),
        rint(1),
        rint(1),
        rint(1),
        Rat::new(1.into(), 2.into()),
    ];
    let positions = vec![
        RatVec::from_ints(&[0, 0]),
        RatVec::from_ints(&[1, 0]),
        RatVec::from_ints(&[2, 1]),
        RatVec::from_ints(&[2, 2]),
        RatVec::from_ints(&[1, 2]),
        RatVec::from_ints(&[0, 1]),
        RatVec::from_ints(&[-1, 1]),
        RatVec::from_ints(&[1, -1]),
        RatVec(vec![
            Rat::new(5.into(), 2.into()),
            Rat::new(5.into(), 2.into()),
        ]),
    ];
    instance(
        "fig2",
        TropicalMap::new(ty, lengths, positions).expect("fig2 is balanced"),
    )
}

/// Chain with a contracted banana circuit mapping to the line: two legs of
/// slope +-1 at each end, attach lengths `up` and `down`. The contraction
/// radius is `min(up, down)`.
pub fn fig3(up: Rat, down: Rat) -> Instance {
    let g = graph(
        &[("top", 0), ("cu", 0), ("cd", 0), ("bot", 0)],
        &[("eu", 1, 0), ("b1", 1, 2), ("b2", 1, 2), ("ed", 2, 3)],
        &[("lt1", 0, 1), ("lt2", 0, 2), ("lb1", 3, 3), ("lb2", 3, 4)],
    );
    let r = 1;
    let ty = CombinatorialType {
        graph: g,
        ambient_dim: r,
        edge_dirs: vec![cz(r), cz(r), cz(r), cz(r)],
        leg_dirs: vec![co(&[1], 1), co(&[-1], 1), co(&[1], 1), co(&[-1], 1)],
        cone_labels: None,
    };
    let lengths = vec![up, rint(1), rint(1), down];
    let zero = RatVec::zero(r);
    let positions = vec![zero.clone(), zero.clone(), zero.clone(), zero];
    instance(
        "fig3",
        TropicalMap::new(ty, lengths, positions).expect("fig3 is balanced"),
    )
}

/// Curve over a two-dimensional target whose banana circuit maps onto a
/// horizontal segment. The vertical projection contracts the circuit and
/// finds two flags at distance `l2` (right side) and two at distance `l1`
/// (left side): well-spaced iff `l1 = l2`.
pub fn fig4(l1: Rat, l2: Rat) -> Instance {
    let g = graph(
        &[
            ("cR", 0),   // (0,0)
            ("cL", 0),   // (-1,0)
            ("vR", 0),   // (2 l2, 0)
            ("vL", 0),   // (-1 - 2 l1, 0)
            ("vTR", 0),  // vR + (2,1)
            ("vTL", 0),  // vTR + (-8,0)
            ("vTLL", 0), // vTL + (-1,-1)
            ("vUL", 0),  // vL + (-1,1)
            ("vLL", 0),  // vL + (-1,-1)
        ],
        &[
            ("b1", 1, 0),
            ("b2", 1, 0),
            ("eR", 0, 2),
            ("eL", 1, 3),
            ("eTR", 2, 4),
            ("eTL", 4, 5),
            ("eTLL", 5, 6),
            ("eUL", 3, 7),
            ("eLL", 3, 8),
        ],
        &[
            ("l1", 2, 1), // down at vR
            ("l2", 4, 2), // (3,1) at vTR
            ("l3", 5, 3), // up at vTL
            ("l4", 6, 4),
            ("l5", 6, 5),
            ("l6", 7, 6),
            ("l7", 7, 7),
            ("l8", 8, 8),
            ("l9", 8, 9),
        ],
    );
    let r = 2;
    let ty = CombinatorialType {
        graph: g,
        ambient_dim: r,
        edge_dirs: vec![
            co(&[1, 0], 1),   // b1: cL -> cR
            co(&[1, 0], 1),   // b2: cL -> cR
            co(&[1, 0], 2),   // eR: cR -> vR
            co(&[-1, 0], 2),  // eL: cL -> vL
            co(&[2, 1], 1),   // eTR
            co(&[-1, 0], 1),  // eTL
            co(&[-1, -1], 1), // eTLL
            co(&[-1, 1], 1),  // eUL
            co(&[-1, -1], 1), // eLL
        ],
        leg_dirs: vec![
            co(&[0, -1], 1), // at vR
            co(&[3, 1], 1),  // at vTR
            co(&[0, 1], 1),  // at vTL
            co(&[-1, 0], 1), // at vTLL
            co(&[0, -1], 1), // at vTLL
            co(&[0, 1], 1),  // at vUL
            co(&[-1, 0], 1), // at vUL
            co(&[-1, 0], 1), // at vLL
            co(&[0, -1], 1), // at vLL
        ],
        cone_labels: None,
    };
    let lengths = vec![
        rint(1),
        rint(1),
        l2.clone(),
        l1.clone(),
        rint(1),
        rint(8),
        rint(1),
        rint(1),
        rint(1),
    ];
    let two = rint(2);
    let p_cr = RatVec::from_ints(&[0, 0]);
    let p_cl = RatVec::from_ints(&[-1, 0]);
    let p_vr = RatVec(vec![&two * &l2, Rat::zero()]);
    let p_vl = RatVec(vec![rint(-1) - &two * &l1, Rat::zero()]);
    let p_vtr = p_vr.add(&RatVec::from_ints(&[2, 1]));
    let p_vtl = p_vtr.add(&RatVec::from_ints(&[-8, 0]));
    let p_vtll = p_vtl.add(&RatVec::from_ints(&[-1, -1]));
    let p_vul = p_vl.add(&RatVec::from_ints(&[-1, 1]));
    let p_vll = p_vl.add(&RatVec::from_ints(&[-1, -1]));
    let positions = vec![p_cr, p_cl, p_vr, p_vl, p_vtr, p_vtl, p_vtll, p_vul, p_vll];
    instance(
        "fig4",
        TropicalMap::new(ty, lengths, positions).expect("fig4 is balanced"),
    )
}

/// Chain over a contracted banana circuit mapping to the line: three flags
/// of nonzero slope at the top vertex (distance `l1`), two at the bottom
/// (distance `l2`). Well-spaced iff `l1 <= l2`; Speyer's condition needs
/// the minimum at two distinct vertices, i.e. `l1 = l2`.
pub fn fig5(l1: Rat, l2: Rat) -> Instance {
    let g = graph(
        &[("top", 0), ("cu", 0), ("cd", 0), ("bot", 0)],
        &[("e1", 1, 0), ("b1", 1, 2), ("b2", 1, 2), ("e2", 2, 3)],
        &[
            ("lt1", 0, 1),
            ("lt2", 0, 2),
            ("lt3", 0, 3),
            ("lb1", 3, 4),
            ("lb2", 3, 5),
        ],
    );
    let r = 1;
    let ty = CombinatorialType {
        graph: g,
        ambient_dim: r,
        edge_dirs: vec![cz(r), cz(r), cz(r), cz(r)],
        leg_dirs: vec![
            co(&[-1], 2),
            co(&[1], 1),
            co(&[1], 1),
            co(&[1], 1),
            co(&[-1], 1),
        ],
        cone_labels: None,
    };
    let lengths = vec![l1, rint(1), rint(1), l2];
    let zero = RatVec::zero(r);
    let positions = vec![zero.clone(), zero.clone(), zero.clone(), zero];
    instance(
        "fig5",
        TropicalMap::new(ty, lengths, positions).expect("fig5 is balanced"),
    )
}

/// The corpus with its default parameter values, as (file name, instance).
pub fn bundled() -> Vec<(&'static str, Instance)> {
    vec![
        ("fig2.json", fig2()),
        ("fig3.json", fig3(rint(1), rint(2))),
        ("fig4.json", fig4(rint(1), rint(1))),
        ("fig4_skew.json", fig4(rint(1), rint(2))),
        ("fig5.json", fig5(rint(1), rint(2))),
        ("fig5_equal.json", fig5(rint(1), rint(1))),
        ("fig5_reversed.json", fig5(rint(2), rint(1))),
    ]
}

/// All corpus instances with their maps, for sweeps.
pub fn all_maps() -> Vec<(String, TropicalMap)> {
    bundled()
        .into_iter()
        .map(|(name, inst)| {
            (
                name.trim_end_matches(".json").to_string(),
                inst.map.expect("corpus instances carry maps"),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::moduli::is_superabundant;
    use crate::wellspaced::{is_well_spaced, is_well_spaced_line, satisfies_speyer};

    #[test]
    fn corpus_instances_validate() {
        for (name, inst) in bundled() {
            let map = inst.map.as_ref().unwrap();
            assert_eq!(map.curve().genus().unwrap(), 1, "{name}");
            assert!(map.ty.is_balanced(), "{name}");
            assert!(map.cycle_closure_holds().unwrap(), "{name}");
        }
    }

    #[test]
    fn fig2_is_plane_cubic_shape() {
        let inst = fig2();
        let map = inst.map.unwrap();
        assert_eq!(map.ty.graph.vertices.len(), 9);
        assert_eq!(map.ty.graph.edges.len(), 9);
        assert_eq!(map.ty.graph.legs.len(), 9);
        for v in map.ty.graph.vertex_ids() {
            assert_eq!(map.ty.graph.valence(v), 3);
        }
        for dir in [[-1, -1], [0, 1], [1, 0]] {
            let count = map
                .ty
                .leg_dirs
                .iter()
                .filter(|co| co.u == RatVec::from_ints(&dir))
                .count();
            assert_eq!(count, 3);
        }
    }

    #[test]
    fn fig2_not_superabundant_and_well_spaced() {
        let inst = fig2();
        let map = inst.map.unwrap();
        assert!(!is_superabundant(&map.ty, None).unwrap());
        assert!(map.ty.circuit_span().unwrap().is_full());
        assert!(is_well_spaced(&map).unwrap().well_spaced);
    }

    #[test]
    fn fig3_contraction_radius() {
        let inst = fig3(rint(1), rint(2));
        let map = inst.map.unwrap();
        assert_eq!(map.contraction_radius(None).unwrap(), Some(rint(1)));
        let inst2 = fig3(rat(5, 2), rat(7, 2));
        assert_eq!(
            inst2.map.unwrap().contraction_radius(None).unwrap(),
            Some(rat(5, 2))
        );
    }

    #[test]
    fn fig4_wall_dichotomy() {
        for (l1, l2, expect) in [
            (rint(1), rint(1), true),
            (rint(1), rint(2), false),
            (rint(2), rint(1), false),
            (rat(3, 2), rat(3, 2), true),
        ] {
            let inst = fig4(l1.clone(), l2.clone());
            let map = inst.map.unwrap();
            assert!(is_superabundant(&map.ty, None).unwrap());
            let report = is_well_spaced(&map).unwrap();
            assert_eq!(report.well_spaced, expect, "l1 = {l1}, l2 = {l2}");
            // exactly one flat: the horizontal line through the circuit
            assert_eq!(report.flats.len(), 1);
            assert_eq!(report.flats[0].flat.subspace.dim(), 1);
        }
    }

    #[test]
    fn fig5_dichotomy() {
        // l1 = 1 < l2 = 2: well-spaced (three flags at top), not Speyer
        let m = fig5(rint(1), rint(2)).map.unwrap();
        let v = is_well_spaced_line(&m).unwrap();
        assert!(v.well_spaced);
        assert_eq!(v.min_count, 3);
        assert!(!satisfies_speyer(&m).unwrap());

        // l1 = l2 = 1: well-spaced and Speyer (two support vertices)
        let m = fig5(rint(1), rint(1)).map.unwrap();
        let v = is_well_spaced_line(&m).unwrap();
        assert!(v.well_spaced);
        assert_eq!(v.min_count, 5);
        assert!(satisfies_speyer(&m).unwrap());

        // l1 = 2 > l2 = 1: not well-spaced (two flags at bottom)
        let m = fig5(rint(2), rint(1)).map.unwrap();
        let v = is_well_spaced_line(&m).unwrap();
        assert!(!v.well_spaced);
        assert_eq!(v.min_count, 2);
    }

    #[test]
    fn corpus_roundtrips_and_is_deterministic() {
        for (name, inst) in bundled() {
            let text = crate::instance::serialize_instance(&inst);
            let parsed = crate::instance::parse_instance_str(&text).unwrap();
            assert_eq!(parsed, inst, "{name}");
            assert_eq!(crate::instance::serialize_instance(&parsed), text, "{name}");
        }
    }
}
