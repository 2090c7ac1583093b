#![no_main]

use libfuzzer_sys::fuzz_target;
use lkpolar::gf2::BitMatrix;
use lkpolar::kernel::Kernel;
use lkpolar::windec::{sc_decode, scl_decode, PolarCode};

// Layout: kernel size selector, 16 bytes of kernel bits, level count, list
// size, frozen mask seed, then channel LLRs as signed bytes.
fuzz_target!(|data: &[u8]| {
    if data.len() < 20 {
        return;
    }
    let l = [2usize, 4, 8][data[0] as usize % 3];
    let bits = &data[1..17];
    let m = BitMatrix::from_fn(l, l, |r, c| (bits[(r * l + c) / 8 % 16] >> ((r * l + c) % 8)) & 1 == 1);
    let Ok(k) = Kernel::new(m) else {
        return;
    };
    let n = 1 + data[17] as u32 % if l == 2 { 6 } else { 2 };
    let list = 1 + data[18] as usize % 4;
    let len = l.pow(n);
    let frozen: Vec<bool> = (0..len).map(|i| (data[19] as usize + i * 7) % 3 == 0).collect();
    let code = PolarCode::new(k, n, frozen).unwrap();
    let llrs: Vec<f64> = (0..len)
        .map(|i| data.get(20 + i).map_or(1.0, |&b| b as i8 as f64 / 8.0))
        .collect();
    let sc = sc_decode(&code, &llrs).unwrap();
    let one = scl_decode(&code, &llrs, 1).unwrap();
    assert_eq!(sc.u, one.u);
    let many = scl_decode(&code, &llrs, list).unwrap();
    assert!(many.metric >= sc.metric);
    assert!(code.frozen().iter().zip(&many.u).all(|(&f, &b)| !f || b == 0));
});
