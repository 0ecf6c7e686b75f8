//! The residue descent oracle and its bridge to the tropical condition:
//! a configuration of n points on one branch exists iff n >= 3, which is
//! the same dichotomy as "the minimal distance is attained at least three
//! times" for a star of flags over a contracted circuit.
//!
//!     cargo run --example descent_oracle

use trop1::descent::{configuration_exists, DescentInstance, DescentProblem};
use trop1::generator::{star_instance, star_slopes};
use trop1::linalg::{format_rat, rat, rint};
use trop1::wellspaced::is_well_spaced_line;

fn main() {
    // Direct evaluation of the residue condition.
    let inst = DescentInstance {
        parts: vec![vec![0, 1], vec![2, 3]],
        slopes: vec![2, -2, 1, -1],
        points: vec![rint(1), rint(-1), rint(1), rint(2)],
        constants: vec![rint(1), rint(-8)],
    };
    let b = inst.linear_parts().unwrap();
    println!(
        "two branches: b = [{}], descends: {}",
        b.iter().map(format_rat).collect::<Vec<_>>().join(", "),
        inst.descends().unwrap()
    );

    // Witness search across the dichotomy.
    for (label, sizes, slopes) in [
        ("n = 2, one branch", vec![2], vec![1, -1]),
        ("n = 3, one branch", vec![3], vec![1, 1, -2]),
        ("n = 5, two branches", vec![2, 3], vec![4, -4, 2, 1, -3]),
    ] {
        let constants = (0..sizes.len())
            .map(|i| rat(2 * i as i64 + 1, 3))
            .collect();
        let problem = DescentProblem { part_sizes: sizes, slopes, constants };
        match configuration_exists(&problem).unwrap() {
            None => println!("{label}: impossible"),
            Some(w) => {
                let pts: Vec<String> = w.points.iter().map(format_rat).collect();
                println!("{label}: witness x = [{}]", pts.join(", "));
            }
        }
    }

    // The bridge: k minimal flags over a contracted circuit.
    println!();
    for k in 2..=5 {
        let map = star_instance(k, rint(2));
        let tropical = is_well_spaced_line(&map).unwrap().well_spaced;
        let problem = DescentProblem {
            part_sizes: vec![k],
            slopes: star_slopes(k),
            constants: vec![rint(1)],
        };
        let algebraic = configuration_exists(&problem).unwrap().is_some();
        println!("k = {k}: well-spaced {tropical:5}  descent configuration {algebraic:5}");
    }
}
