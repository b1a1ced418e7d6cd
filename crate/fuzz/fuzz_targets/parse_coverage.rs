#![no_main]

use std::sync::Arc;

use isg_core::algebra::i2;
use isg_core::io::{coverage_to_json, parse_coverage};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let s = Arc::new(i2());
    if let Ok(cov) = parse_coverage(text, s.clone()) {
        let json = coverage_to_json(&cov);
        parse_coverage(&json, s).expect("exported coverage parses");
    }
});
