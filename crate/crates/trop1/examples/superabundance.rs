//! Superabundance two ways: the moduli-cone dimension against the expected
//! dimension, and the span of the circuit directions. The two tests agree
//! on every cycle type; the library asserts that agreement at runtime.
//!
//!     cargo run --example superabundance

use trop1::corpus;
use trop1::generator::{random_map, GeneratorConfig};
use trop1::linalg::rint;
use trop1::moduli::{expected_dim, is_superabundant, moduli_cone, overvalence};

fn main() {
    let named = [
        ("plane cubic", corpus::fig2()),
        ("segment circuit", corpus::fig4(rint(1), rint(1))),
        ("contracted chain", corpus::fig5(rint(1), rint(2))),
    ];
    for (label, inst) in named {
        let ty = &inst.map.as_ref().unwrap().ty;
        let mc = moduli_cone(ty, None).unwrap();
        println!(
            "{label:18} dim {} expected {} overvalence {} superabundant {}",
            mc.dim(),
            expected_dim(ty).unwrap(),
            overvalence(ty),
            is_superabundant(ty, None).unwrap()
        );
    }

    // A random sweep; any split between the two tests would error out here.
    let mut super_count = 0;
    let total = 150;
    for seed in 0..total {
        let r = (seed % 3 + 1) as usize;
        let map = random_map(seed * 104_729, &GeneratorConfig::small(r));
        if is_superabundant(&map.ty, None).unwrap() {
            super_count += 1;
        }
    }
    println!("\nrandom sweep: {super_count}/{total} superabundant, tests agreed on all");
}
