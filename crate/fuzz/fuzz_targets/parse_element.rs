//! Fuzz the tree-diagram parser: any input either fails cleanly or parses
//! to a reduced element whose canonical serialization round-trips.

#![no_main]

use libfuzzer_sys::fuzz_target;
use thompson_f::Element;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(element) = text.parse::<Element>() {
        let rendered = element.to_string();
        let again: Element = rendered.parse().expect("canonical form reparses");
        assert_eq!(element, again, "round trip must be the identity");
    }
});
