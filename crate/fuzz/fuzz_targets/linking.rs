#![no_main]

use libfuzzer_sys::fuzz_target;
use obstructa_cli::source::{decode, Kind};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = decode(Kind::Linking, text);
    }
});
