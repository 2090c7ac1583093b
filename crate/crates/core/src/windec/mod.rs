//! Window SC decoding of a kernel layer in the max (min-sum) approximation,
//! SC and SCL decoding of `K^{⊗n}` codes, encoding, and exhaustive oracles.

mod code;
mod oracle;
mod paths;
mod processor;

pub use code::{encode, sc_decode, scl_decode, DecodeOutput, DecodePath, DecoderKind, PolarCode, ScDecoder};
pub use oracle::{brute_force_phase_llr, ml_decode_exhaustive, code_phase_llr_exhaustive, max_plus_score};
pub use processor::KernelProcessor;

/// Window-decoder LLR of every kernel input when the inputs are fixed to
/// `u` (bit `s` = `u_s`) one after another. Also returns the operation count.
pub fn kernel_phase_llrs(profile: &crate::kernel::WindowProfile, channel: &[f64], u: u64) -> (Vec<f64>, u64) {
    let mut proc = KernelProcessor::with_channel(profile, channel);
    let mut ops = 0;
    let llrs = (0..profile.size())
        .map(|i| {
            let s = proc.phase_llr(&mut ops);
            proc.commit(((u >> i) & 1) as u8);
            s
        })
        .collect();
    (llrs, ops)
}

/// `Q(a, b) = sgn(a) sgn(b) min(|a|, |b|)` with `sgn(0) = +1`.
#[inline]
pub fn check_node(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// `P(a, b, c) = (-1)^c a + b`.
#[inline]
pub fn bit_node(a: f64, b: f64, c: u8) -> f64 {
    if c & 1 == 1 {
        b - a
    } else {
        a + b
    }
}

/// Penalty for deciding `bit` against LLR `llr`: `0` if the hard decision
/// agrees (`sgn(0) = +1`), `-|llr|` otherwise.
#[inline]
pub fn penalty(llr: f64, bit: u8) -> f64 {
    if (llr < 0.0) == (bit & 1 == 1) {
        0.0
    } else {
        -llr.abs()
    }
}

/// Path score after extending a path by `bit` with LLR `llr`.
#[inline]
pub fn path_score_update(score: f64, llr: f64, bit: u8) -> f64 {
    score + penalty(llr, bit)
}

/// Hard decision: `0` for `llr >= 0`.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

/// Min-sum LLR of Arıkan phase `i` for a node of `F_2^{⊗λ}` with
/// `llrs.len() = 2^λ` channel values, given the earlier inputs `v_prefix`
/// (at least `i` bits).
///
/// Straightforward recursive reference form; the decoders use the
/// incremental state in the path sets instead.
pub fn arikan_llr(llrs: &[f64], i: usize, v_prefix: &[u8]) -> f64 {
    let n = llrs.len();
    debug_assert!(n.is_power_of_two() && i < n && v_prefix.len() >= i);
    if n == 1 {
        return llrs[0];
    }
    let half = n / 2;
    let (a, b) = llrs.split_at(half);
    if i < half {
        let child: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| check_node(x, y)).collect();
        arikan_llr(&child, i, v_prefix)
    } else {
        let d = arikan_transform(&v_prefix[..half]);
        let child: Vec<f64> = a
            .iter()
            .zip(b)
            .zip(&d)
            .map(|((&x, &y), &c)| bit_node(x, y, c))
            .collect();
        arikan_llr(&child, i - half, &v_prefix[half..])
    }
}

/// `v · F_2^{⊗λ}` for `v.len() = 2^λ`.
pub fn arikan_transform(v: &[u8]) -> Vec<u8> {
    let mut x = v.to_vec();
    let n = x.len();
    let mut half = n / 2;
    while half >= 1 {
        for block in x.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (p, q) in lo.iter_mut().zip(hi.iter()) {
                *p ^= q;
            }
        }
        half /= 2;
    }
    x
}
