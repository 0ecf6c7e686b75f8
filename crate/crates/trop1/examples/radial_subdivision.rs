//! Radial subdivision of a moduli cone: one cell per total preorder on the
//! vertices by distance from the circuit, printed with dimensions, and the
//! assembled face poset as DOT.
//!
//!     cargo run --example radial_subdivision

use trop1::cli::complex_to_dot;
use trop1::corpus;
use trop1::linalg::rint;
use trop1::moduli::{assemble_complex, moduli_cone, radial_subdivision, RadialType};

fn main() {
    let inst = corpus::fig5(rint(1), rint(2));
    let map = inst.map.as_ref().unwrap();
    let mc = moduli_cone(&map.ty, None).unwrap();
    println!(
        "moduli cone of {}: {} variables, dim {}",
        inst.name,
        mc.cone.num_vars(),
        mc.dim()
    );

    let cells = radial_subdivision(&map.ty, None).unwrap();
    println!("radial subdivision: {} cells", cells.len());
    for (alignment, cone) in &cells {
        let blocks: Vec<String> = alignment
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b
                    .iter()
                    .map(|&v| map.ty.graph.vertices[v.0].name.as_str())
                    .collect();
                names.join(",")
            })
            .collect();
        println!("  dim {}: {}", cone.dim(), blocks.join(" < "));
    }

    let radial: Vec<RadialType> = cells
        .into_iter()
        .map(|(alignment, _)| RadialType { ty: map.ty.clone(), alignment })
        .collect();
    let complex = assemble_complex(&radial, None).unwrap();
    println!("\nface poset:\n{}", complex_to_dot(&complex));
}
