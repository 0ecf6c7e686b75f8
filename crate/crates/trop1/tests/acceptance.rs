//! Acceptance suite: one test per criterion, each printing a pass line with
//! its runtime and asserting the stated budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num::{Signed, Zero};

use trop1::cli::{self, CheckOptions};
use trop1::corpus;
use trop1::descent::{configuration_exists, DescentProblem};
use trop1::generator::{random_map, star_instance, star_slopes, GeneratorConfig, SplitMix64};
use trop1::linalg::{rat, rint, Rat, RatVec};
use trop1::moduli::{
    assemble_complex, is_superabundant, moduli_cone, radial_subdivision, well_spaced_subcomplex,
    RadialType,
};
use trop1::tropmap::TropicalMap;
use trop1::wellspaced::{
    character_flats, is_well_spaced, is_well_spaced_line, line_verdict, m_plus_two_check,
    matching_flat, satisfies_speyer,
};

fn finish(criterion: &str, budget: Duration, start: Instant, detail: &str) {
    let elapsed = start.elapsed();
    println!("{criterion}: PASS ({detail}; {elapsed:?} < {budget:?})");
    assert!(
        elapsed < budget,
        "{criterion} exceeded its budget: {elapsed:?} >= {budget:?}"
    );
}

fn corpus_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

#[test]
fn criterion_1_fig5_dichotomy() {
    let start = Instant::now();
    let opts = CheckOptions { speyer: true, ..Default::default() };

    // l1 = 1 < l2 = 2: well-spaced, Speyer fails
    let out = cli::run_check(&corpus_file("fig5.json"), &opts);
    assert_eq!(out.exit_code, cli::EXIT_YES, "{}", out.stdout);
    assert!(out.stdout.contains("well-spaced: true"));
    assert!(out.stdout.contains("speyer: false"));

    // l1 = l2 = 1: well-spaced and Speyer
    let out = cli::run_check(&corpus_file("fig5_equal.json"), &opts);
    assert_eq!(out.exit_code, cli::EXIT_YES);
    assert!(out.stdout.contains("well-spaced: true"));
    assert!(out.stdout.contains("speyer: true"));

    // l1 = 2 > l2 = 1: not well-spaced
    let out = cli::run_check(&corpus_file("fig5_reversed.json"), &opts);
    assert_eq!(out.exit_code, cli::EXIT_NO);
    assert!(out.stdout.contains("well-spaced: false"));

    finish(
        "criterion 1 (three-flag chain dichotomy)",
        Duration::from_secs(1),
        start,
        "3 parameterizations, exact",
    );
}

#[test]
fn criterion_2_fig4_wall() {
    let start = Instant::now();
    let grid: Vec<Rat> = vec![rat(1, 2), rint(1), rat(3, 2), rint(2), rat(5, 2)];
    let mut checked = 0;
    for l1 in &grid {
        for l2 in &grid {
            let inst = corpus::fig4(l1.clone(), l2.clone());
            let report = cli::check_instance(&inst, &CheckOptions::default()).unwrap();
            assert_eq!(
                report.well_spaced,
                l1 == l2,
                "fig4 with l1 = {l1}, l2 = {l2}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 25);
    finish(
        "criterion 2 (segment-circuit wall: well-spaced iff l1 = l2)",
        Duration::from_secs(5),
        start,
        "5x5 rational grid, exact",
    );
}

#[test]
fn criterion_3_fig2_not_superabundant() {
    let start = Instant::now();
    let map = corpus::fig2().map.unwrap();
    // is_superabundant runs both the span and the dimension-excess test and
    // errors out if they split; asserting the value covers agreement.
    let superabundant = is_superabundant(&map.ty, None).unwrap();
    assert!(!superabundant);
    assert!(is_well_spaced(&map).unwrap().well_spaced);
    finish(
        "criterion 3 (plane cubic: not superabundant, well-spaced)",
        Duration::from_secs(1),
        start,
        "both tests agree",
    );
}

#[test]
fn criterion_4_superabundance_equivalence() {
    let start = Instant::now();
    let mut count = 0;
    let mut superabundant = 0;
    for seed in 0..200u64 {
        for r in 1..=3usize {
            let cfg = GeneratorConfig::small(r);
            let map = random_map(seed * 1009 + r as u64, &cfg);
            assert!(map.ty.graph.edges.len() <= 8);
            // Evaluates dim(moduli cone) > expected and the circuit-span
            // test, erroring on any disagreement.
            let span_proper = !map.ty.circuit_span().unwrap().is_full();
            let verdict = is_superabundant(&map.ty, None).unwrap();
            assert_eq!(verdict, span_proper);
            // explicit cross-check of the dimension excess
            let dim = moduli_cone(&map.ty, None).unwrap().dim() as i64;
            let expected = trop1::moduli::expected_dim(&map.ty).unwrap();
            assert_eq!(dim > expected, span_proper, "seed {seed}, r {r}");
            count += 1;
            if verdict {
                superabundant += 1;
            }
        }
    }
    assert!(count >= 500);
    assert!(superabundant > 50, "want a real mix, got {superabundant}");
    finish(
        "criterion 4 (superabundance: dimension excess = proper circuit span)",
        Duration::from_secs(60),
        start,
        &format!("{count} random balanced genus-1 types, zero disagreements"),
    );
}

#[test]
fn criterion_5_character_reduction_soundness() {
    let start = Instant::now();
    let mut total = 0;
    for (name, map) in corpus::all_maps() {
        let flats = character_flats(&map).unwrap();
        let r = map.ambient_dim();
        let mut rng = SplitMix64::new(0xC5A11);
        let mut tested = 0;
        while tested < 200 {
            let chi = RatVec::from_ints(
                &(0..r).map(|_| rng.range(-5, 5)).collect::<Vec<_>>(),
            );
            if chi.is_zero() {
                continue;
            }
            tested += 1;
            total += 1;
            let slopes = map.project(&chi);
            let values: Vec<Rat> = map.positions.iter().map(|p| chi.dot(p)).collect();
            let direct = line_verdict(&map, &slopes, &values).unwrap();
            match matching_flat(&map, &flats, &chi).unwrap() {
                None => {
                    // the character does not contract the circuit
                    assert!(
                        direct.neighborhood_moves,
                        "{name}: chi {chi:?} should satisfy condition (1)"
                    );
                }
                Some(flat) => {
                    let rep_slopes = map.project(&flat.chi);
                    let rep_values: Vec<Rat> =
                        map.positions.iter().map(|p| flat.chi.dot(p)).collect();
                    let rep = line_verdict(&map, &rep_slopes, &rep_values).unwrap();
                    assert_eq!(
                        direct.well_spaced, rep.well_spaced,
                        "{name}: chi {chi:?} disagrees with its flat representative"
                    );
                }
            }
        }
    }
    finish(
        "criterion 5 (character reduction soundness)",
        Duration::from_secs(30),
        start,
        &format!("{total} random characters across the corpus, zero disagreements"),
    );
}

#[test]
fn criterion_6_descent_dichotomy() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0xDE5C);

    // n = 2: impossible for every slope choice.
    for _ in 0..50 {
        let a = loop {
            let a = rng.range(-9, 9);
            if a != 0 {
                break a;
            }
        };
        let c = loop {
            let c = rng.range(-9, 9);
            if c != 0 {
                break rat(c, rng.range(1, 3));
            }
        };
        let problem = DescentProblem {
            part_sizes: vec![2],
            slopes: vec![a, -a],
            constants: vec![c],
        };
        assert!(configuration_exists(&problem).unwrap().is_none());
    }

    // n >= 3 across m branches: a verified witness must be found.
    let mut found = 0;
    while found < 200 {
        let m = (found % 3) + 1;
        let mut sizes = Vec::new();
        let mut slopes = Vec::new();
        for _ in 0..m {
            // redraw the branch until its closing slope is nonzero
            let (k, part) = loop {
                let k = rng.range(2, 3) as usize;
                let mut part = Vec::new();
                let mut sum = 0i64;
                for _ in 0..(k - 1) {
                    let a = loop {
                        let a = rng.range(-6, 6);
                        if a != 0 {
                            break a;
                        }
                    };
                    part.push(a);
                    sum += a;
                }
                if sum != 0 {
                    part.push(-sum);
                    break (k, part);
                }
            };
            sizes.push(k);
            slopes.extend(part);
        }
        let n: usize = sizes.iter().sum();
        if n < 3 {
            continue;
        }
        let constants: Vec<Rat> = (0..m)
            .map(|_| loop {
                let c = rng.range(-9, 9);
                if c != 0 {
                    break rat(c, rng.range(1, 4));
                }
            })
            .collect();
        let problem = DescentProblem { part_sizes: sizes, slopes, constants };
        let witness = configuration_exists(&problem)
            .unwrap()
            .expect("n >= 3 must admit a configuration");
        witness.validate().unwrap();
        assert!(witness.descends().unwrap());
        assert!(witness.points.iter().all(|x| !x.is_zero()));
        found += 1;
    }
    finish(
        "criterion 6 (descent dichotomy: n = 2 impossible, n >= 3 solvable)",
        Duration::from_secs(30),
        start,
        "50 impossible + 200 witnessed instances, all verified",
    );
}

#[test]
fn criterion_7_bridge_between_flags_and_descent() {
    let start = Instant::now();
    for k in 2..=5usize {
        for dist in [rint(1), rat(5, 2)] {
            let map = star_instance(k, dist);
            let tropical = is_well_spaced_line(&map).unwrap().well_spaced;
            let problem = DescentProblem {
                part_sizes: vec![k],
                slopes: star_slopes(k),
                constants: vec![rint(1)],
            };
            let algebraic = configuration_exists(&problem).unwrap().is_some();
            assert_eq!(tropical, k >= 3, "k = {k}");
            assert_eq!(algebraic, k >= 3, "k = {k}");
            assert_eq!(tropical, algebraic, "k = {k}");
        }
    }
    finish(
        "criterion 7 (bridge: k minimal flags = descent with n = k points)",
        Duration::from_secs(10),
        start,
        "k in 2..=5, both sides agree with k >= 3",
    );
}

fn complex_of(map: &TropicalMap) -> trop1::moduli::ConeComplex {
    let cells = radial_subdivision(&map.ty, None).unwrap();
    let radial: Vec<RadialType> = cells
        .into_iter()
        .map(|(alignment, _)| RadialType { ty: map.ty.clone(), alignment })
        .collect();
    assemble_complex(&radial, None).unwrap()
}

/// Cover and face-only-overlap checks, per the invariant's sampling recipe:
/// sampled relative-interior points of the moduli cone must land in exactly
/// one cell interior and be covered. Pairwise emptiness of cell-interior
/// intersections is checked exactly when the complex is small.
fn assert_cover_and_disjoint(map: &TropicalMap, exact_pairwise: bool) {
    let cells = radial_subdivision(&map.ty, None).unwrap();
    if exact_pairwise {
        for i in 0..cells.len() {
            for j in 0..cells.len() {
                if i != j {
                    assert!(
                        !cells[i].1.relint_cells_intersect(&cells[j].1),
                        "cells {i} and {j} overlap beyond faces"
                    );
                }
            }
        }
    }
    let mc = moduli_cone(&map.ty, None).unwrap();
    for p in mc.cone.sample_relint_cell_points(5) {
        let interior_hits = cells
            .iter()
            .filter(|(_, c)| c.contains_relint_cell(&p))
            .count();
        let closure_hits = cells.iter().filter(|(_, c)| c.contains(&p)).count();
        assert_eq!(interior_hits, 1, "sample must land in exactly one cell");
        assert!(closure_hits >= 1, "sample must be covered");
    }
}

#[test]
fn criterion_8_subcomplex_closure_and_cover() {
    let start = Instant::now();

    // The three-flag chain: three cells over the two incomparable vertices;
    // the strict cell with the triple flags closest and the wall survive.
    let fig5 = corpus::fig5(rint(1), rint(2)).map.unwrap();
    let complex5 = complex_of(&fig5);
    let ws5 = well_spaced_subcomplex(&complex5).unwrap();
    assert_eq!(complex5.cells.len(), 3);
    assert_eq!(ws5.cells.len(), 2);
    assert_cover_and_disjoint(&fig5, true);

    // The segment-circuit instance: seven vertices hang outside the circuit,
    // so the subdivision is large; kept cells are exactly those aligning the
    // two attach vertices (vR and vL, indices 2 and 3).
    let fig4 = corpus::fig4(rint(1), rint(1)).map.unwrap();
    let complex4 = complex_of(&fig4);
    let ws4 = well_spaced_subcomplex(&complex4).unwrap();
    assert!(!ws4.cells.is_empty());
    assert!(ws4.cells.len() < complex4.cells.len());
    let kept: HashSet<Vec<usize>> = ws4
        .cells
        .iter()
        .map(|c| c.radial.alignment.ranks.clone())
        .collect();
    for cell in &complex4.cells {
        let ranks = &cell.radial.alignment.ranks;
        let expected = ranks[2] == ranks[3];
        assert_eq!(
            kept.contains(ranks),
            expected,
            "fig4 cell kept iff the attach vertices align"
        );
    }
    assert_cover_and_disjoint(&fig4, false);

    // 100 random complexes: the subcomplex must exist (face closure is
    // asserted inside well_spaced_subcomplex) and subdivisions must cover
    // with face-only overlaps.
    let mut built = 0;
    let mut seed = 0u64;
    while built < 100 {
        seed += 1;
        let r = (seed % 3 + 1) as usize;
        let cfg = GeneratorConfig {
            ambient_dim: r,
            max_cycle: 3,
            max_extra_vertices: 2,
            max_edges: 5,
            allow_vertex_genus: false,
        };
        let map = random_map(seed * 7919, &cfg);
        let complex = complex_of(&map);
        let _ws = well_spaced_subcomplex(&complex).unwrap();
        assert_cover_and_disjoint(&map, true);
        built += 1;
    }
    finish(
        "criterion 8 (well-spaced subcomplex face closure; cover and overlaps)",
        Duration::from_secs(60),
        start,
        "corpus complexes + 100 random complexes",
    );
}

#[test]
fn criterion_9_implication_suite() {
    let start = Instant::now();

    // Corpus instances.
    let mut ws_count = 0;
    for (name, map) in corpus::all_maps() {
        check_implications(&map, &name, &mut ws_count);
    }
    // Strictness witness: well-spaced but not Speyer.
    let strict = corpus::fig5(rint(1), rint(2)).map.unwrap();
    assert!(is_well_spaced_line(&strict).unwrap().well_spaced);
    assert!(!satisfies_speyer(&strict).unwrap());

    // 500 random instances.
    let mut count = 0;
    let mut seed = 10_000u64;
    while count < 500 {
        seed += 1;
        let r = (seed % 3 + 1) as usize;
        let cfg = GeneratorConfig::small(r);
        let map = random_map(seed, &cfg);
        check_implications(&map, "random", &mut ws_count);
        count += 1;
    }
    assert!(ws_count > 50, "want well-spaced instances in the mix");
    finish(
        "criterion 9 (Speyer => line condition; well-spaced => exit count)",
        Duration::from_secs(60),
        start,
        &format!("corpus + 500 random instances, {ws_count} well-spaced, zero violations"),
    );
}

fn check_implications(map: &TropicalMap, name: &str, ws_count: &mut usize) {
    // Speyer-style two-vertex minimality implies the three-flag condition,
    // checked on every flat's line verdict.
    let report = is_well_spaced(map).unwrap();
    for flat in &report.flats {
        let v = &flat.verdict;
        if !v.neighborhood_moves && !v.globally_constant && v.min_base_count >= 2 {
            assert!(
                v.well_spaced,
                "{name}: two support vertices but fewer than three flags"
            );
        }
    }
    if map.ambient_dim() == 1 {
        let speyer = satisfies_speyer(map).unwrap();
        let line = is_well_spaced_line(map).unwrap();
        if speyer {
            assert!(line.well_spaced, "{name}: Speyer held but not well-spaced");
        }
    }
    // Well-spaced maps exit the critical circle along enough flags.
    if report.well_spaced {
        *ws_count += 1;
        assert!(
            m_plus_two_check(map).unwrap(),
            "{name}: well-spaced but fails the exit-count consequence"
        );
    }
}
