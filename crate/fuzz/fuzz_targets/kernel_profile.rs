#![no_main]

use libfuzzer_sys::fuzz_target;
use lkpolar::cost::kernel_cost;
use lkpolar::format::parse_kernel;
use lkpolar::kernel::window_profile;
use lkpolar::windec::{brute_force_phase_llr, kernel_phase_llrs};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(k) = parse_kernel(text) else {
        return;
    };
    let prof = window_profile(&k);
    let cost = kernel_cost(&prof);
    assert_eq!(cost.total, cost.per_phase.iter().sum::<u64>());
    if k.size() <= 8 {
        let y: Vec<f64> = (0..k.size()).map(|i| (data[i % data.len()] as f64 - 128.0) / 16.0).collect();
        let u = data.iter().fold(0u64, |w, &b| w.rotate_left(3) ^ b as u64) & ((1u64 << k.size()) - 1);
        let (llrs, _) = kernel_phase_llrs(&prof, &y, u);
        for (i, got) in llrs.iter().enumerate() {
            let prefix: Vec<u8> = (0..i).map(|s| ((u >> s) & 1) as u8).collect();
            assert_eq!(*got, brute_force_phase_llr(&k, &y, &prefix).unwrap());
        }
    }
});
