#![no_main]

use libfuzzer_sys::fuzz_target;
use orthalign::io::{decode_embeddings, encode_embeddings};

fuzz_target!(|data: &[u8]| {
    if let Ok((m, dtype)) = decode_embeddings(data) {
        // Anything that decodes must re-encode to the same bytes.
        let again = encode_embeddings(&m, dtype).expect("decoded input re-encodes");
        assert_eq!(again, data);
    }
});
