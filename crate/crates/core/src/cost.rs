//! Approximate operation count of the LLR-domain window decoder.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{permute_columns, window_profile, Kernel, Permutation, WindowProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub per_phase: Vec<u64>,
    pub total: u64,
    pub l: usize,
    pub t: u32,
}

/// Cost of Arıkan bit channel `i` of `F_2^{⊗t}`: `2^t - 1` for `i = 0`,
/// otherwise `2^{s+1} - 1` where `2^s` is the largest power of two dividing `i`.
pub fn arikan_channel_cost(i: usize, t: u32) -> u64 {
    debug_assert!(i < 1 << t);
    if i == 0 {
        (1u64 << t) - 1
    } else {
        (2u64 << i.trailing_zeros()) - 1
    }
}

/// `B(h) = log2(C_h + 1)`.
fn channel_bits(h: usize, t: u32) -> u32 {
    if h == 0 {
        t
    } else {
        h.trailing_zeros() + 1
    }
}

/// Cost `φ(i)` of kernel phase `i`, given `h_i`, `h_{i-1}` (`-1` for `i = 0`)
/// and the window size `|D_i| = h_i - i`.
pub fn phase_cost(i: usize, h: usize, h_prev: isize, window_size: usize, t: u32) -> Result<u64> {
    if h < i || window_size != h - i {
        return Err(Error::InconsistentCost(format!(
            "phase {i}: window size {window_size} != h ({h}) - i"
        )));
    }
    if h_prev > h as isize || h_prev < -1 || (i == 0) != (h_prev == -1) {
        return Err(Error::InconsistentCost(format!(
            "phase {i}: previous h {h_prev} incompatible with h {h}"
        )));
    }
    if h >= 1 << t {
        return Err(Error::InconsistentCost(format!(
            "phase {i}: h {h} out of range for t = {t}"
        )));
    }
    if h as isize == h_prev {
        return Ok(1);
    }
    if window_size == 0 {
        return Ok(arikan_channel_cost(i, t));
    }
    let lambda: u64 = ((h_prev + 1) as usize..=h)
        .map(|hh| 1u64 << (hh as u32 + channel_bits(hh, t) - i as u32))
        .sum();
    Ok((1u64 << (window_size + 1)) - 1 + lambda)
}

/// `φ(i)` for every phase of an explicit `(h_i, |D_i|)` table.
pub fn cost_from_columns(h: &[usize], window_sizes: &[usize], t: u32) -> Result<ComplexityProfile> {
    if h.len() != window_sizes.len() || h.len() != 1 << t {
        return Err(Error::InconsistentCost(format!(
            "expected {} rows, got h: {}, |D|: {}",
            1usize << t,
            h.len(),
            window_sizes.len()
        )));
    }
    let per_phase = (0..h.len())
        .map(|i| {
            let prev = if i == 0 { -1 } else { h[i - 1] as isize };
            phase_cost(i, h[i], prev, window_sizes[i], t)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = per_phase.iter().sum();
    Ok(ComplexityProfile {
        per_phase,
        total,
        l: h.len(),
        t,
    })
}

pub fn kernel_cost(profile: &WindowProfile) -> ComplexityProfile {
    cost_from_columns(&profile.h, &profile.window_sizes(), profile.t())
        .expect("window profiles are internally consistent")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedCandidate {
    pub permutation: Permutation,
    pub cost: ComplexityProfile,
}

/// Costs every permuted kernel and sorts by `(total cost, permutation)`.
pub fn evaluate_candidates(kernel: &Kernel, permutations: &[Permutation]) -> Result<Vec<RankedCandidate>> {
    if permutations.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut ranked = permutations
        .par_iter()
        .map(|p| {
            let permuted = permute_columns(kernel, p)?;
            Ok(RankedCandidate {
                permutation: p.clone(),
                cost: kernel_cost(&window_profile(&permuted)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| {
        a.cost
            .total
            .cmp(&b.cost.total)
            .then_with(|| a.permutation.cmp(&b.permutation))
    });
    Ok(ranked)
}
