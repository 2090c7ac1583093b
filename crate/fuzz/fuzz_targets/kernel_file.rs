#![no_main]

use libfuzzer_sys::fuzz_target;
use lkpolar::format::{parse_kernel, parse_kernel_text, write_kernel};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_kernel_text(text);
    if let Ok(k) = parse_kernel(text) {
        let again = parse_kernel(&write_kernel(&k)).expect("serialised kernels parse");
        assert_eq!(again.matrix(), k.matrix());
        assert_eq!(again.name(), k.name());
    }
});
