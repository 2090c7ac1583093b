use super::code::{encode, PolarCode};
use super::penalty;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, MAX_PARTIAL_DISTANCE_SIZE};

/// Largest code length or dimension the exhaustive searches accept.
pub const MAX_EXHAUSTIVE: usize = 20;

/// Max-log correlation score `Σ_k τ(y_k, c_k)` of a word against LLRs.
pub fn max_plus_score(llrs: &[f64], bits: &[u8]) -> f64 {
    llrs.iter().zip(bits).map(|(&y, &c)| penalty(y, c)).sum()
}

/// Max-log LLR of kernel input `u_i`, `i = u_prefix.len()`, by enumerating
/// every completion of the prefix.
pub fn brute_force_phase_llr(kernel: &Kernel, channel: &[f64], u_prefix: &[u8]) -> Result<f64> {
    let l = kernel.size();
    if l > MAX_PARTIAL_DISTANCE_SIZE {
        return Err(Error::UnsupportedSize {
            size: l,
            max: MAX_PARTIAL_DISTANCE_SIZE,
        });
    }
    if channel.len() != l {
        return Err(Error::LengthMismatch {
            expected: l,
            got: channel.len(),
        });
    }
    let i = u_prefix.len();
    if i >= l {
        return Err(Error::PhaseMismatch {
            expected: l - 1,
            actual: i,
        });
    }
    let prefix = u_prefix
        .iter()
        .enumerate()
        .fold(0u64, |w, (s, &b)| w | (((b & 1) as u64) << s));
    let mut best = [f64::NEG_INFINITY; 2];
    for rest in 0..1u64 << (l - i) {
        let u = prefix | (rest << i);
        let c = kernel.encode_mask(u);
        let score: f64 = channel
            .iter()
            .enumerate()
            .map(|(k, &y)| penalty(y, ((c >> k) & 1) as u8))
            .sum();
        let cls = (rest & 1) as usize;
        best[cls] = best[cls].max(score);
    }
    Ok(best[0] - best[1])
}

/// Max-log LLR of code input `u_i`, `i = u_prefix.len()`, ignoring the frozen
/// set, by enumerating every completion of the prefix.
pub fn code_phase_llr_exhaustive(code: &PolarCode, llrs: &[f64], u_prefix: &[u8]) -> Result<f64> {
    let n = code.len();
    if n > MAX_EXHAUSTIVE {
        return Err(Error::UnsupportedSize {
            size: n,
            max: MAX_EXHAUSTIVE,
        });
    }
    let i = u_prefix.len();
    if llrs.len() != n || i >= n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: llrs.len().max(i + 1),
        });
    }
    let open = PolarCode::unfrozen(code.kernel().clone(), code.levels())?;
    let mut u = vec![0u8; n];
    u[..i].copy_from_slice(u_prefix);
    let mut best = [f64::NEG_INFINITY; 2];
    for rest in 0..1u64 << (n - i) {
        for (s, b) in u[i..].iter_mut().enumerate() {
            *b = ((rest >> s) & 1) as u8;
        }
        let c = encode(&open, &u)?;
        let cls = (rest & 1) as usize;
        best[cls] = best[cls].max(max_plus_score(llrs, &c));
    }
    Ok(best[0] - best[1])
}

/// Max-log ML decoding over every information word. Returns `û` and its
/// score; ties keep the first word in counting order.
pub fn ml_decode_exhaustive(code: &PolarCode, llrs: &[f64]) -> Result<(Vec<u8>, f64)> {
    let k = code.dimension();
    if k > MAX_EXHAUSTIVE {
        return Err(Error::UnsupportedSize {
            size: k,
            max: MAX_EXHAUSTIVE,
        });
    }
    if llrs.len() != code.len() {
        return Err(Error::LengthMismatch {
            expected: code.len(),
            got: llrs.len(),
        });
    }
    let mut best: Option<(Vec<u8>, f64)> = None;
    let mut info = vec![0u8; k];
    for w in 0..1u64 << k {
        for (s, b) in info.iter_mut().enumerate() {
            *b = ((w >> s) & 1) as u8;
        }
        let u = code.embed(&info)?;
        let score = max_plus_score(llrs, &encode(code, &u)?);
        if best.as_ref().map_or(true, |b| score > b.1) {
            best = Some((u, score));
        }
    }
    Ok(best.expect("at least one word"))
}
