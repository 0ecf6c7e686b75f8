//! Decide well-spacedness for every bundled instance and print the verdicts
//! with their decisive data.
//!
//!     cargo run --example check_figures

use trop1::cli::{check_instance, CheckOptions};
use trop1::corpus;

fn main() {
    for (name, inst) in corpus::bundled() {
        let map = inst.map.as_ref().unwrap();
        let opts = CheckOptions {
            speyer: map.ambient_dim() == 1,
            ..Default::default()
        };
        let report = check_instance(&inst, &opts).unwrap();
        print!(
            "{name:20} well-spaced: {:5}",
            report.well_spaced.to_string()
        );
        if let Some(s) = report.speyer {
            print!("  speyer: {s:5}");
        }
        println!("  flats tested: {}", report.flats.len());
        for f in &report.flats {
            if let Some(d) = &f.min_distance {
                println!(
                    "    chi=({}): min distance {d} attained {} times at {} vertex(es)",
                    f.chi.join(","),
                    f.min_count,
                    f.min_base_count
                );
            }
        }
    }
}
