use smallvec::SmallVec;

use super::{bit_node, check_node};

/// Flat storage for the Arıkan SC state of every path through one kernel.
///
/// Per path: the LLR levels `0..t` (level `λ` holds `2^λ` values at offset
/// `2^λ - 1`), the left-sibling codeword of each level packed in a word, the
/// path score, and the decided Arıkan inputs packed in a word.
#[derive(Clone, Debug)]
pub(crate) struct PathSet {
    t: u32,
    stride: usize,
    alpha: SmallVec<[f64; 8]>,
    beta: SmallVec<[u64; 8]>,
    pub score: SmallVec<[f64; 4]>,
    pub v: SmallVec<[u64; 4]>,
}

impl PathSet {
    pub fn new(t: u32) -> Self {
        let mut s = PathSet {
            t,
            stride: (1usize << t) - 1,
            alpha: SmallVec::new(),
            beta: SmallVec::new(),
            score: SmallVec::new(),
            v: SmallVec::new(),
        };
        s.reset();
        s
    }

    /// Back to a single empty path.
    pub fn reset(&mut self) {
        self.alpha.clear();
        self.alpha.resize(self.stride, 0.0);
        self.beta.clear();
        self.beta.resize(self.t as usize, 0);
        self.score.clear();
        self.score.push(0.0);
        self.v.clear();
        self.v.push(0);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.score.len()
    }

    /// Min-sum LLR of Arıkan phase `p` on path `k`. Phases must be visited in
    /// order with [`PathSet::set_bit`] in between. Adds the number of computed
    /// LLR values to `ops`.
    pub fn llr(&mut self, k: usize, p: usize, channel: &[f64], ops: &mut u64) -> f64 {
        let t = self.t as usize;
        let alpha = &mut self.alpha[k * self.stride..(k + 1) * self.stride];
        let top = if p == 0 { t } else { p.trailing_zeros() as usize + 1 };
        let mut level = top;
        if p != 0 {
            let s = top - 1;
            let half = 1usize << s;
            let left = self.beta[k * t + s];
            let (lo, hi) = alpha.split_at_mut((1 << top) - 1);
            let out = &mut lo[half - 1..];
            let input: &[f64] = if top == t { channel } else { &hi[..2 * half] };
            for q in 0..half {
                out[q] = bit_node(input[q], input[q + half], ((left >> q) & 1) as u8);
            }
            level = s;
        }
        while level > 0 {
            let s = level - 1;
            let half = 1usize << s;
            let (lo, hi) = alpha.split_at_mut((1 << level) - 1);
            let out = &mut lo[half - 1..];
            let input: &[f64] = if level == t { channel } else { &hi[..2 * half] };
            for q in 0..half {
                out[q] = check_node(input[q], input[q + half]);
            }
            level = s;
        }
        *ops += if p == 0 {
            (1u64 << t) - 1
        } else {
            (1u64 << top) - 1
        };
        alpha[0]
    }

    /// Records `v_p = b` on path `k` and propagates the partial sums.
    pub fn set_bit(&mut self, k: usize, p: usize, b: u8) {
        let t = self.t as usize;
        let b = (b & 1) as u64;
        self.v[k] |= b << p;
        let mut cw = b;
        let mut level = 0;
        while level < t && (p >> level) & 1 == 1 {
            let left = self.beta[k * t + level];
            cw = (left ^ cw) | (cw << (1u32 << level));
            level += 1;
        }
        if level < t {
            self.beta[k * t + level] = cw;
        }
    }

    /// Appends a copy of path `k` and returns its index.
    pub fn fork(&mut self, k: usize) -> usize {
        let t = self.t as usize;
        let n = self.len();
        let a = k * self.stride;
        self.alpha.resize((n + 1) * self.stride, 0.0);
        self.alpha.copy_within(a..a + self.stride, n * self.stride);
        self.beta.resize((n + 1) * t, 0);
        self.beta.copy_within(k * t..(k + 1) * t, n * t);
        self.score.push(self.score[k]);
        self.v.push(self.v[k]);
        n
    }

    /// Keeps the paths for which `keep` is true, preserving order.
    pub fn retain(&mut self, keep: impl Fn(usize) -> bool) {
        let t = self.t as usize;
        let mut w = 0;
        for k in 0..self.len() {
            if !keep(k) {
                continue;
            }
            if w != k {
                self.alpha.copy_within(k * self.stride..(k + 1) * self.stride, w * self.stride);
                self.beta.copy_within(k * t..(k + 1) * t, w * t);
                self.score[w] = self.score[k];
                self.v[w] = self.v[k];
            }
            w += 1;
        }
        self.alpha.truncate(w * self.stride);
        self.beta.truncate(w * t);
        self.score.truncate(w);
        self.v.truncate(w);
    }
}
