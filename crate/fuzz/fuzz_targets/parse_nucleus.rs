#![no_main]

use std::sync::Arc;

use isg_core::algebra::e4;
use isg_core::io::parse_nucleus;
use isg_core::pseudogroup::Pseudogroup;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let p = Pseudogroup::new(Arc::new(e4())).expect("E4 is a frame");
    if let Ok(nu) = parse_nucleus(text, &p) {
        nu.check_axioms().expect("parsed nuclei are checked");
    }
});
