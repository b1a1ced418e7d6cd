#![no_main]

use isg_core::io::{groupoid_to_json, parse_groupoid};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_groupoid(text) {
        let json = groupoid_to_json(&g);
        let again = parse_groupoid(&json).expect("exported groupoid parses");
        assert_eq!(groupoid_to_json(&again), json);
    }
});
