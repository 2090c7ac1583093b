#![no_main]

use libfuzzer_sys::fuzz_target;
use lkpolar::format::{parse_permutation, parse_permutation_list, write_permutation};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(list) = parse_permutation_list(text) {
        for p in list {
            assert_eq!(parse_permutation(&write_permutation(&p)).unwrap(), p);
        }
    }
    let _ = parse_permutation(text);
});
