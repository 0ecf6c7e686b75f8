//! The checked-in corpus files must stay in sync with the builders.

use std::path::PathBuf;

use trop1::corpus;
use trop1::instance::{parse_instance, serialize_instance};

#[test]
fn corpus_files_match_builders() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    for (name, inst) in corpus::bundled() {
        let path = dir.join(name);
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(
            on_disk,
            serialize_instance(&inst),
            "{name} drifted from its builder; regenerate with `trop1 corpus --out corpus`"
        );
        let parsed = parse_instance(&path).unwrap();
        assert_eq!(parsed, inst, "{name}");
    }
}
