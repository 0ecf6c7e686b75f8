//! The finite character reduction: the quantifier over all characters
//! collapses to one generic representative per flat (a subspace spanned by
//! instance vectors containing the circuit directions).
//!
//!     cargo run --example character_flats

use trop1::corpus;
use trop1::linalg::{format_rat, rint};
use trop1::wellspaced::{character_flats, instance_vectors};

fn main() {
    for inst in [corpus::fig4(rint(1), rint(2)), corpus::fig2()] {
        let map = inst.map.as_ref().unwrap();
        let vectors = instance_vectors(map).unwrap();
        println!(
            "{}: {} instance vectors in Q^{}",
            inst.name,
            vectors.len(),
            map.ambient_dim()
        );
        let flats = character_flats(map).unwrap();
        if flats.is_empty() {
            println!("  no proper flat contains the circuit directions:");
            println!("  every character moves the circuit, so the map is well-spaced\n");
            continue;
        }
        for flat in &flats {
            let basis: Vec<String> = flat
                .subspace
                .basis()
                .iter()
                .map(|b| {
                    let coords: Vec<String> = b.0.iter().map(format_rat).collect();
                    format!("({})", coords.join(","))
                })
                .collect();
            let chi: Vec<String> = flat.chi.0.iter().map(format_rat).collect();
            println!(
                "  flat W = span{{{}}} (dim {}), generic chi = ({})",
                basis.join(", "),
                flat.subspace.dim(),
                chi.join(",")
            );
        }
        println!();
    }
}
