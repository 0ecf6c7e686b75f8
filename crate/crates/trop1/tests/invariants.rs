//! Cross-module invariants: properties tying the contraction radius,
//! character flats, superabundance, and verdict symmetries together.

use num::Zero;

use trop1::corpus;
use trop1::generator::{random_map, GeneratorConfig, SplitMix64};
use trop1::linalg::{rat, rint, Rat, RatVec};
use trop1::moduli::{expected_dim, is_superabundant, moduli_cone, well_spaced_subcomplex};
use trop1::moduli::{assemble_complex, radial_subdivision, RadialType};
use trop1::tropmap::{CombinatorialType, ContactOrder, TropicalMap};
use trop1::wellspaced::{character_flats, is_well_spaced, line_verdict, matching_flat};

/// The identity contraction radius is the minimum of the per-character radii
/// over the characters contracting the circuit, evaluated on the flat
/// representatives. Only meaningful when the full map contracts the circuit.
#[test]
fn contraction_radius_is_character_minimum() {
    let mut checked = 0;
    let mut candidates: Vec<TropicalMap> = corpus::all_maps().into_iter().map(|(_, m)| m).collect();
    for k in 2..=5 {
        candidates.push(trop1::generator::star_instance(k, rat(7, 3)));
    }
    for seed in 0..80u64 {
        let r = (seed % 3 + 1) as usize;
        candidates.push(random_map(seed * 883, &GeneratorConfig::small(r)));
    }
    for map in &candidates {
        let identity_radius = map.contraction_radius(None).unwrap();
        // Radius zero means some circuit-based flag already moves, and every
        // contracting character keeps it moving or kills it along with the
        // comparison; the statement is about genuinely contracted circuits.
        if identity_radius == Some(Rat::zero()) {
            continue;
        }
        checked += 1;
        let flats = character_flats(map).unwrap();
        let min_over_flats = flats
            .iter()
            .filter_map(|f| map.contraction_radius(Some(&f.chi)).unwrap())
            .min();
        assert_eq!(
            identity_radius, min_over_flats,
            "identity radius must equal the minimum over contracting characters"
        );
    }
    assert!(checked >= 5, "want instances with contracted circuits");
}

/// Non-superabundant maps are well-spaced outright: every character fails to
/// contract the circuit, so condition (1) always holds.
#[test]
fn not_superabundant_implies_well_spaced() {
    let mut seen = 0;
    for seed in 0..120u64 {
        let r = (seed % 3 + 1) as usize;
        let map = random_map(seed * 5077 + 17, &GeneratorConfig::small(r));
        if !is_superabundant(&map.ty, None).unwrap() {
            seen += 1;
            let report = is_well_spaced(&map).unwrap();
            assert!(report.well_spaced);
            assert!(report.flats.is_empty());
        }
    }
    assert!(seen > 10);
}

/// Superabundance is one-sided: the moduli cone never undershoots the
/// expected dimension.
#[test]
fn moduli_dimension_is_at_least_expected() {
    for seed in 0..150u64 {
        let r = (seed % 3 + 1) as usize;
        let map = random_map(seed * 271 + 5, &GeneratorConfig::small(r));
        let dim = moduli_cone(&map.ty, None).unwrap().dim() as i64;
        assert!(dim >= expected_dim(&map.ty).unwrap());
    }
}

/// Flat reduction is sound on random instances too: arbitrary characters
/// agree with their flat representative.
#[test]
fn flat_reduction_sound_on_random_instances() {
    let mut rng = SplitMix64::new(77);
    for seed in 0..40u64 {
        let r = (seed % 3 + 1) as usize;
        let map = random_map(seed * 6133 + 2, &GeneratorConfig::small(r));
        let flats = character_flats(&map).unwrap();
        for _ in 0..25 {
            let chi = RatVec::from_ints(&(0..r).map(|_| rng.range(-4, 4)).collect::<Vec<_>>());
            if chi.is_zero() {
                continue;
            }
            let slopes = map.project(&chi);
            let values: Vec<Rat> = map.positions.iter().map(|p| chi.dot(p)).collect();
            let direct = line_verdict(&map, &slopes, &values).unwrap();
            match matching_flat(&map, &flats, &chi).unwrap() {
                None => assert!(direct.neighborhood_moves),
                Some(flat) => {
                    let rep_slopes = map.project(&flat.chi);
                    let rep_values: Vec<Rat> =
                        map.positions.iter().map(|p| flat.chi.dot(p)).collect();
                    let rep = line_verdict(&map, &rep_slopes, &rep_values).unwrap();
                    assert_eq!(direct.well_spaced, rep.well_spaced);
                }
            }
        }
    }
}

fn rescale(map: &TropicalMap, s: &Rat) -> TropicalMap {
    TropicalMap::new(
        map.ty.clone(),
        map.lengths.iter().map(|l| l * s).collect(),
        map.positions.iter().map(|p| p.scale(s)).collect(),
    )
    .unwrap()
}

/// Applies a unimodular change of coordinates to positions and directions.
fn transform(map: &TropicalMap, m: &[[i64; 2]; 2]) -> TropicalMap {
    let apply = |v: &RatVec| -> RatVec {
        let a = &v.0[0];
        let b = &v.0[1];
        RatVec(vec![
            rint(m[0][0]) * a + rint(m[0][1]) * b,
            rint(m[1][0]) * a + rint(m[1][1]) * b,
        ])
    };
    let ty = CombinatorialType {
        edge_dirs: map
            .ty
            .edge_dirs
            .iter()
            .map(|co| ContactOrder::new(apply(&co.u), co.w).unwrap())
            .collect(),
        leg_dirs: map
            .ty
            .leg_dirs
            .iter()
            .map(|co| ContactOrder::new(apply(&co.u), co.w).unwrap())
            .collect(),
        ..map.ty.clone()
    };
    TropicalMap::new(
        ty,
        map.lengths.clone(),
        map.positions.iter().map(apply).collect(),
    )
    .unwrap()
}

/// Verdicts are invariant under uniform rescaling of the metric and under
/// unimodular coordinate changes of the target.
#[test]
fn verdicts_invariant_under_symmetry() {
    let unimodulars: [[[i64; 2]; 2]; 3] = [
        [[1, 1], [0, 1]],
        [[0, -1], [1, 0]],
        [[2, 1], [1, 1]],
    ];
    let mut maps: Vec<TropicalMap> = vec![
        corpus::fig4(rint(1), rint(1)).map.unwrap(),
        corpus::fig4(rint(1), rint(2)).map.unwrap(),
        corpus::fig2().map.unwrap(),
    ];
    for seed in 0..30u64 {
        maps.push(random_map(seed * 31 + 7, &GeneratorConfig::small(2)));
    }
    for map in &maps {
        let verdict = is_well_spaced(map).unwrap().well_spaced;
        for s in [rat(3, 2), rat(1, 7), rint(5)] {
            assert_eq!(
                is_well_spaced(&rescale(map, &s)).unwrap().well_spaced,
                verdict,
                "rescaling by {s} changed the verdict"
            );
        }
        for m in &unimodulars {
            assert_eq!(
                is_well_spaced(&transform(map, m)).unwrap().well_spaced,
                verdict,
                "unimodular change {m:?} changed the verdict"
            );
        }
    }
}

/// On the corpus, the well-spaced subcomplex is pure-dimensional.
#[test]
fn corpus_subcomplexes_are_pure() {
    for map in [
        corpus::fig5(rint(1), rint(2)).map.unwrap(),
        corpus::fig4(rint(1), rint(1)).map.unwrap(),
    ] {
        let cells = radial_subdivision(&map.ty, None).unwrap();
        let radial: Vec<RadialType> = cells
            .into_iter()
            .map(|(alignment, _)| RadialType { ty: map.ty.clone(), alignment })
            .collect();
        let complex = assemble_complex(&radial, None).unwrap();
        let ws = well_spaced_subcomplex(&complex).unwrap();
        let stats = ws.stats();
        assert!(stats.pure, "stats: {stats:?}");
    }
}
