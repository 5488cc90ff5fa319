//! Fuzz the quiver-spec decoder (full graphs, word and periodic-word
//! shorthands, representations): arbitrary bytes must produce either a
//! spec or an error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(v) = gpkraft::json::parse(text) {
            let _ = gpkraft::json::quiver_spec_from_json(&v);
        }
    }
});
