#![no_main]

use calmks::experiments::SnapshotMeta;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(meta) = SnapshotMeta::parse(text) {
        let again = SnapshotMeta::parse(&meta.to_text()).expect("metadata text parses");
        assert_eq!(again.to_text(), meta.to_text());
        let _ = meta.payload_len();
    }
});
