#![no_main]

use calmks::experiments::io::{read_error_series, write_error_series};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = read_error_series(data) {
        let mut out = Vec::new();
        write_error_series(&mut out, &rows).expect("rows serialize");
        let again = read_error_series(out.as_slice()).expect("written table parses");
        assert_eq!(again.len(), rows.len());
    }
});
