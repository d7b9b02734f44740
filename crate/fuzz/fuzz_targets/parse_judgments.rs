#![no_main]

use libfuzzer_sys::fuzz_target;
use orthalign::retrieval::parse_judgments;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(j) = parse_judgments(text) {
        assert_eq!(parse_judgments(&j.to_tsv()).expect("serialised judgments parse"), j);
    }
});
