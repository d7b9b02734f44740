#![no_main]

use libfuzzer_sys::fuzz_target;
use orthalign::io::{format_tsv, parse_tsv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_tsv(text) {
        if let Ok(out) = format_tsv(&m) {
            assert_eq!(parse_tsv(&out).expect("formatted output parses"), m);
        }
    }
});
