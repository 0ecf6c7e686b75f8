//! The contraction radius: the distance from the circuit to the nearest
//! vertex supporting a flag the map does not contract — the radius of the
//! circle whose interior collapses to a genus-1 singularity.
//!
//!     cargo run --example contraction_radius

use trop1::corpus;
use trop1::linalg::{format_rat, rat, rint, RatVec};

fn main() {
    // Chain with a contracted banana circuit: legs at distances 1 and 2.
    let inst = corpus::fig3(rint(1), rint(2));
    let map = inst.map.as_ref().unwrap();
    let delta = map.contraction_radius(None).unwrap().unwrap();
    println!("{}: contraction radius {}", inst.name, format_rat(&delta));

    let inst = corpus::fig3(rat(5, 2), rat(9, 2));
    let map = inst.map.as_ref().unwrap();
    let delta = map.contraction_radius(None).unwrap().unwrap();
    println!("longer attach lengths: radius {}", format_rat(&delta));

    // Under single characters: the segment circuit moves horizontally, so
    // the horizontal character gives radius 0 while the vertical one sees
    // the contracted neighborhood.
    let inst = corpus::fig4(rint(1), rint(2));
    let map = inst.map.as_ref().unwrap();
    for chi in [RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])] {
        let r = map.contraction_radius(Some(&chi)).unwrap();
        println!(
            "{} under chi=({},{}): radius {}",
            inst.name,
            format_rat(&chi.0[0]),
            format_rat(&chi.0[1]),
            r.map(|x| format_rat(&x)).unwrap_or_else(|| "none".into())
        );
    }
}
