#![no_main]

use calmks::experiments::io::{decode_payload, encode_payload};
use calmks::experiments::SnapshotMeta;
use libfuzzer_sys::fuzz_target;

// Input: metadata text, a NUL byte, then the raw payload.
fuzz_target!(|data: &[u8]| {
    let Some(split) = data.iter().position(|&b| b == 0) else {
        return;
    };
    let Ok(text) = std::str::from_utf8(&data[..split]) else {
        return;
    };
    let Ok(meta) = SnapshotMeta::parse(text) else {
        return;
    };
    let payload = &data[split + 1..];
    if let Ok(field) = decode_payload(&meta, payload) {
        assert_eq!(encode_payload(&field), payload);
    }
});
