#![no_main]

use libfuzzer_sys::fuzz_target;
use orthalign::io::{decode_transform, encode_transform};

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = decode_transform(data) {
        assert_eq!(encode_transform(&t).expect("decoded transform re-encodes"), data);
    }
});
