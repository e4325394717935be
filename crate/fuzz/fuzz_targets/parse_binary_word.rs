//! Fuzz the binary-word parser: parsing never panics and accepted words
//! round-trip through their display form.

#![no_main]

use libfuzzer_sys::fuzz_target;
use thompson_f::BinaryWord;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(word) = text.parse::<BinaryWord>() {
        let rendered = word.to_string();
        let again: BinaryWord = rendered.parse().expect("bits reparse");
        assert_eq!(word, again, "round trip must be the identity");
    }
});
