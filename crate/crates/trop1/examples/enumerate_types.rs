//! Enumerate all balanced stable genus-1 combinatorial types with a fixed
//! recession type, up to isomorphism. Tree edge directions are forced by
//! the legs; cycle directions have one bounded free parameter.
//!
//!     cargo run --release --example enumerate_types

use trop1::linalg::RatVec;
use trop1::moduli::enumerate_types;
use trop1::tropmap::{ContactOrder, RecessionType};

fn main() {
    // Two opposite double legs on the line.
    let rec = RecessionType {
        ambient_dim: 1,
        genus: 1,
        legs: vec![
            (1, ContactOrder::new(RatVec::from_ints(&[1]), 2).unwrap()),
            (2, ContactOrder::new(RatVec::from_ints(&[-1]), 2).unwrap()),
        ],
    };
    for k in 1..=3 {
        let types = enumerate_types(&rec, k).unwrap();
        println!("max {k} vertices: {} types", types.len());
        for ty in types.iter().take(6) {
            let h1 = ty.graph.h1().unwrap();
            let circuit = if h1 == 1 { "cycle" } else { "genus-1 vertex" };
            let contracted = ty
                .edge_dirs
                .iter()
                .filter(|d| d.is_contracted())
                .count();
            println!(
                "  {} vertices, {} edges ({} contracted), circuit: {}",
                ty.graph.vertices.len(),
                ty.graph.edges.len(),
                contracted,
                circuit
            );
        }
        if types.len() > 6 {
            println!("  ...");
        }
    }
}
