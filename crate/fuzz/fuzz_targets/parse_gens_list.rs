//! Fuzz the generator-list reader (the `--gens` input format): comments,
//! separators, and both element syntaxes. The reader caps generator indices
//! and exponents, so accepted entries evaluate in bounded time.

#![no_main]

use libfuzzer_sys::fuzz_target;
use thompson_f::parse_element_list;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_element_list(text);
});
