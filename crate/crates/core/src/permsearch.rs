//! Threshold-guided search for column permutations that keep as many kernel
//! rows as possible equal to rows of the Arıkan kernel, followed by picking
//! the candidate with the lowest window-decoding cost.
//!
//! Columns are chosen left to right. A partial selection survives while the
//! number of tracked rows whose restriction to the chosen columns is a row of
//! `K_A` (restricted to its first `i` columns) stays at or above the
//! threshold. If some column leaves no survivor, the search restarts from the
//! first column with the threshold lowered by one.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::cost::{evaluate_candidates, kernel_cost};
use crate::error::{Error, Result};
use crate::gf2::arikan_kernel;
use crate::kernel::{hamming_weight_multiset, permute_columns, window_profile, Kernel, Permutation};

pub const DEFAULT_BEAM_CAP: usize = 1_000_000;

/// Row-index set of a kernel with at most 64 rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RowSet(pub u64);

impl RowSet {
    pub fn all(l: usize) -> Self {
        Self(if l == 64 { u64::MAX } else { (1u64 << l) - 1 })
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, r: usize) -> bool {
        (self.0 >> r) & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let r = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                r
            })
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Parallel lists of partial column selections, matching row sets and
/// metrics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchState {
    pub columns: Vec<Vec<usize>>,
    pub row_sets: Vec<RowSet>,
    pub metrics: Vec<usize>,
}

impl SearchState {
    pub fn initial(l: usize) -> Self {
        Self {
            columns: vec![Vec::new()],
            row_sets: vec![RowSet::all(l)],
            metrics: vec![l],
        }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    fn push(&mut self, cols: Vec<usize>, rows: RowSet, metric: usize) {
        self.columns.push(cols);
        self.row_sets.push(rows);
        self.metrics.push(metric);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationCandidate {
    pub permutation: Permutation,
    pub metric: usize,
    /// `ψ` of the permuted kernel.
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Threshold in force when the surviving candidates were produced.
    pub threshold: usize,
    pub candidates: Vec<PermutationCandidate>,
}

/// Size of the multiset intersection of the row weights of `k` and `K_A`.
pub fn initial_threshold(k: &Kernel) -> usize {
    let l = k.size();
    let mut pool = vec![0usize; l + 1];
    for w in hamming_weight_multiset(&arikan_kernel(k.t())) {
        pool[w] += 1;
    }
    hamming_weight_multiset(k.matrix())
        .into_iter()
        .filter(|&w| {
            let hit = pool[w] > 0;
            if hit {
                pool[w] -= 1;
            }
            hit
        })
        .count()
}

/// Distinct rows of `K_A` restricted to its first `i` columns, for every
/// `i = 1..=l` (index `i - 1`). Bit `p` of a pattern is column `p`.
struct ArikanPrefixRows {
    sets: Vec<HashSet<u64>>,
}

impl ArikanPrefixRows {
    fn new(l: usize) -> Self {
        let sets = (1..=l)
            .map(|i| {
                (0..l)
                    .map(|r| (0..i).filter(|&c| c & !r == 0).fold(0u64, |m, c| m | 1 << c))
                    .collect()
            })
            .collect();
        Self { sets }
    }

    fn contains(&self, i: usize, pattern: u64) -> bool {
        self.sets[i - 1].contains(&pattern)
    }
}

/// Pattern of row `r` of `k` restricted to the ordered columns `cols`.
fn restricted_row(k: &Kernel, r: usize, cols: &[usize]) -> u64 {
    let row = k.row_mask(r);
    cols.iter()
        .enumerate()
        .fold(0u64, |m, (p, &c)| m | (((row >> c) & 1) << p))
}

/// Extends `kappa` by `cand_cols[m]` and counts the rows of `rho` whose
/// restriction to the extended selection is a row of `K_A` restricted to its
/// first `i` columns.
///
/// Returns `(Cel, Rel, Metric)`. Rows of `rho` are counted with repetition,
/// the `K_A` rows form a set. `mu` is the metric `kappa` was admitted with and
/// equals `|rho|`.
pub fn calculate_metric(
    k: &Kernel,
    i: usize,
    cand_cols: &[usize],
    kappa: &[usize],
    m: usize,
    rho: RowSet,
    mu: usize,
) -> Result<(Vec<usize>, RowSet, usize)> {
    let col = cand_cols[m];
    if kappa.contains(&col) {
        return Err(Error::InvalidPermutation(format!("column {col} already selected")));
    }
    if kappa.len() + 1 != i {
        return Err(Error::InvalidPermutation(format!(
            "selection of {} columns cannot be extended to column {i}",
            kappa.len()
        )));
    }
    debug_assert_eq!(rho.len(), mu);
    let mut cel = kappa.to_vec();
    cel.push(col);
    let prefix = ArikanPrefixRows::new(k.size());
    let rel = RowSet(
        rho.iter()
            .filter(|&r| prefix.contains(i, restricted_row(k, r, &cel)))
            .fold(0u64, |m, r| m | 1 << r),
    );
    let metric = rel.len();
    Ok((cel, rel, metric))
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Maximum number of partial candidates kept for any column.
    pub cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_BEAM_CAP,
        }
    }
}

/// Survivors `(column, Rel)` of extending one partial selection.
fn expand_one(
    k: &Kernel,
    prefix: &ArikanPrefixRows,
    i: usize,
    kappa: &[usize],
    rho: RowSet,
    threshold: usize,
) -> Vec<(usize, RowSet)> {
    let l = k.size();
    // patterns over the already-chosen columns, reused for every extension
    let base: Vec<(usize, u64)> = rho.iter().map(|r| (r, restricted_row(k, r, kappa))).collect();
    let shift = i - 1;
    (0..l)
        .filter(|c| !kappa.contains(c))
        .filter_map(|c| {
            let rel = base
                .iter()
                .filter(|&&(r, pat)| prefix.contains(i, pat | ((k.row_mask(r) >> c) & 1) << shift))
                .fold(0u64, |m, &(r, _)| m | 1 << r);
            let rel = RowSet(rel);
            (rel.len() >= threshold).then_some((c, rel))
        })
        .collect()
}

/// One column of the search. `None` when nothing reaches the threshold.
fn expand_column(
    k: &Kernel,
    prefix: &ArikanPrefixRows,
    state: &SearchState,
    i: usize,
    threshold: usize,
    cap: usize,
) -> Result<Option<SearchState>> {
    let survivors: Vec<Vec<(usize, RowSet)>> = (0..state.len())
        .into_par_iter()
        .map(|n| expand_one(k, prefix, i, &state.columns[n], state.row_sets[n], threshold))
        .collect();
    let count: usize = survivors.iter().map(Vec::len).sum();
    if count > cap {
        return Err(Error::BeamOverflow { cap });
    }
    if count == 0 {
        return Ok(None);
    }
    let mut next = SearchState {
        columns: Vec::with_capacity(count),
        row_sets: Vec::with_capacity(count),
        metrics: Vec::with_capacity(count),
    };
    for (n, list) in survivors.into_iter().enumerate() {
        for (c, rel) in list {
            let mut cel = Vec::with_capacity(i);
            cel.extend_from_slice(&state.columns[n]);
            cel.push(c);
            next.push(cel, rel, rel.len());
        }
    }
    Ok(Some(next))
}

/// Runs the search from threshold `m_t`, lowering it until a full-length
/// selection survives. Survivors come back in expansion order with their
/// final metric and the cost of the permuted kernel.
pub fn find_good_permutations(k: &Kernel, m_t: usize, config: SearchConfig) -> Result<SearchOutcome> {
    let l = k.size();
    let prefix = ArikanPrefixRows::new(l);
    let mut threshold = m_t.min(l);
    loop {
        let mut state = SearchState::initial(l);
        let mut complete = true;
        for i in 1..=l {
            match expand_column(k, &prefix, &state, i, threshold, config.cap)? {
                Some(next) => state = next,
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            let candidates = state
                .columns
                .into_par_iter()
                .zip(state.metrics.into_par_iter())
                .map(|(cols, metric)| {
                    let permutation = Permutation::new(cols)?;
                    let cost = kernel_cost(&window_profile(&permute_columns(k, &permutation)?)).total;
                    Ok(PermutationCandidate {
                        permutation,
                        metric,
                        cost,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(SearchOutcome {
                threshold,
                candidates,
            });
        }
        // at threshold 0 every column extends, so this cannot underflow
        threshold -= 1;
    }
}

/// The minimum-cost candidate (ties to the lexicographically smallest
/// permutation) and the kernel it produces.
pub fn select_best(k: &Kernel, candidates: &[PermutationCandidate]) -> Result<(Permutation, Kernel)> {
    let perms: Vec<Permutation> = candidates.iter().map(|c| c.permutation.clone()).collect();
    let best = evaluate_candidates(k, &perms)?.swap_remove(0).permutation;
    let permuted = permute_columns(k, &best)?;
    Ok((best, permuted))
}
