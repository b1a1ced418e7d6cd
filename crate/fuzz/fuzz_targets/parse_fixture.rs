#![no_main]

use isg_core::algebra::{make_fixture_capped, Fixture};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = text.parse::<Fixture>() {
        let _ = make_fixture_capped(f, 64);
    }
});
