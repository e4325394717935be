//! Fuzz the generator-word parser: parsing never panics, and the rendered
//! normal form reparses to the same word. Words are only parsed here, never
//! evaluated, so huge exponents stay cheap.

#![no_main]

use libfuzzer_sys::fuzz_target;
use thompson_f::GroupWord;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(word) = text.parse::<GroupWord>() {
        let rendered = word.to_string();
        let again: GroupWord = rendered.parse().expect("normal form reparses");
        assert_eq!(word, again, "round trip must be the identity");
    }
});
