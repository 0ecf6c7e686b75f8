//! Instance files: serialize a bundled instance, parse it back, and show
//! the validation errors bad files produce.
//!
//!     cargo run --example instance_files

use trop1::corpus;
use trop1::instance::{parse_instance_str, serialize_instance};
use trop1::linalg::rint;

fn main() {
    let inst = corpus::fig5(rint(1), rint(2));
    let text = serialize_instance(&inst);
    println!("--- {} as JSON ({} bytes) ---", inst.name, text.len());
    for line in text.lines().take(18) {
        println!("{line}");
    }
    println!("...\n");

    let parsed = parse_instance_str(&text).unwrap();
    assert_eq!(parsed, inst);
    println!("round-trip: parse(serialize(x)) == x holds\n");

    let broken = text.replace("\"length\": \"1\"", "\"length\": \"0\"");
    match parse_instance_str(&broken) {
        Err(e) => println!("zero length rejected: {e}"),
        Ok(_) => unreachable!("validation must reject zero lengths"),
    }

    let unbalanced = text.replace("\"w\": 2", "\"w\": 5");
    match parse_instance_str(&unbalanced) {
        Err(e) => println!("unbalanced map rejected: {e}"),
        Ok(_) => unreachable!("validation must reject unbalanced maps"),
    }
}
