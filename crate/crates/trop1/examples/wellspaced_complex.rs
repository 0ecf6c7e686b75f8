//! The well-spaced subcomplex: assemble the radial subdivision into a cone
//! complex and keep the cells whose interior maps are well-spaced. For the
//! three-flag chain the cells with the triple closest survive; for the
//! segment circuit only the wall where the attach lengths agree does.
//!
//!     cargo run --example wellspaced_complex

use trop1::corpus;
use trop1::instance::Instance;
use trop1::linalg::rint;
use trop1::moduli::{assemble_complex, radial_subdivision, well_spaced_subcomplex, RadialType};

fn survey(inst: &Instance) {
    let map = inst.map.as_ref().unwrap();
    let cells = radial_subdivision(&map.ty, None).unwrap();
    let radial: Vec<RadialType> = cells
        .into_iter()
        .map(|(alignment, _)| RadialType { ty: map.ty.clone(), alignment })
        .collect();
    let complex = assemble_complex(&radial, None).unwrap();
    let ws = well_spaced_subcomplex(&complex).unwrap();
    let stats = ws.stats();
    println!(
        "{}: {} cells, {} well-spaced, {} arrows kept, pure: {}",
        inst.name,
        complex.cells.len(),
        ws.cells.len(),
        ws.arrows.len(),
        stats.pure
    );
    for cell in &ws.cells {
        let blocks: Vec<String> = cell
            .radial
            .alignment
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b
                    .iter()
                    .map(|&v| cell.radial.ty.graph.vertices[v.0].name.as_str())
                    .collect();
                names.join(",")
            })
            .collect();
        println!("  kept dim {}: {}", cell.dim, blocks.join(" < "));
    }
}

fn main() {
    survey(&corpus::fig5(rint(1), rint(2)));
    survey(&corpus::fig4(rint(1), rint(1)));
}
