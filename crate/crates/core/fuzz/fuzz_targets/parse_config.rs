#![no_main]

use calmks::experiments::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_text(text) {
        // anything that parses must survive a round trip through the manifest form
        let again = RunConfig::from_text(&cfg.to_text()).expect("manifest text parses");
        assert_eq!(again.to_text(), cfg.to_text());
        let _ = cfg.validate();
        let _ = cfg.validate_sweep();
    }
});
