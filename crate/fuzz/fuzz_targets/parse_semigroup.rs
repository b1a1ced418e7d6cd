#![no_main]

use isg_core::algebra::ValidateOptions;
use isg_core::io::{parse_semigroup, semigroup_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let opts = ValidateOptions {
        check_associativity: true,
        size_cap: 32,
    };
    if let Ok(s) = parse_semigroup(text, &opts) {
        // Whatever validates must survive a round trip.
        let json = semigroup_to_json(&s);
        let again = parse_semigroup(&json, &opts).expect("exported semigroup parses");
        assert_eq!(semigroup_to_json(&again), json);
    }
});
