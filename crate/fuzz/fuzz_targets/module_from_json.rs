//! Fuzz the module-file decoder: arbitrary bytes must produce either a
//! module or an error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(v) = gpkraft::json::parse(text) {
            let _ = gpkraft::json::module_from_json(&v);
        }
    }
});
