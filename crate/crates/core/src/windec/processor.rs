use smallvec::SmallVec;

use super::paths::PathSet;
use super::penalty;
use crate::kernel::WindowProfile;

/// Window decoder for one kernel instance: yields the min-sum LLR of each
/// kernel input `u_i` in turn and takes the decision back through
/// [`KernelProcessor::commit`].
#[derive(Clone, Debug)]
pub struct KernelProcessor<'p> {
    profile: &'p WindowProfile,
    channel: SmallVec<[f64; 16]>,
    phase: usize,
    decided: u64,
    paths: PathSet,
    pending: Option<f64>,
    pending_llr: SmallVec<[f64; 4]>,
}

impl<'p> KernelProcessor<'p> {
    pub fn new(profile: &'p WindowProfile) -> Self {
        KernelProcessor {
            profile,
            channel: SmallVec::from_elem(0.0, profile.size()),
            phase: 0,
            decided: 0,
            paths: PathSet::new(profile.t()),
            pending: None,
            pending_llr: SmallVec::new(),
        }
    }

    pub fn with_channel(profile: &'p WindowProfile, channel: &[f64]) -> Self {
        let mut p = Self::new(profile);
        p.reset(channel.iter().copied());
        p
    }

    /// Starts over with new channel LLRs (exactly `l` values).
    pub fn reset(&mut self, channel: impl IntoIterator<Item = f64>) {
        self.channel.clear();
        self.channel.extend(channel);
        debug_assert_eq!(self.channel.len(), self.profile.size());
        self.phase = 0;
        self.decided = 0;
        self.paths.reset();
        self.pending = None;
        self.pending_llr.clear();
    }

    /// Index of the next kernel input to decide.
    #[inline]
    pub fn phase(&self) -> usize {
        self.phase
    }

    /// Decided inputs, bit `s` = `u_s`.
    #[inline]
    pub fn decided(&self) -> u64 {
        self.decided
    }

    #[inline]
    pub fn is_complete(&self) -> bool {
        self.phase == self.profile.size()
    }

    /// Number of paths currently tracked.
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// LLR of the current kernel input. Idempotent until the next commit.
    pub fn phase_llr(&mut self, ops: &mut u64) -> f64 {
        if let Some(s) = self.pending {
            return s;
        }
        assert!(!self.is_complete(), "all kernel inputs already decided");
        let i = self.phase;
        let h = self.profile.h[i];
        let s = if h as isize > self.profile.h_prev(i) {
            self.extend(i, h, ops)
        } else {
            self.plateau(i, ops)
        };
        self.pending = Some(s);
        s
    }

    fn extend(&mut self, i: usize, h: usize, ops: &mut u64) -> f64 {
        let start = (self.profile.h_prev(i) + 1) as usize;
        for p in start..h {
            for k in 0..self.paths.len() {
                let llr = self.paths.llr(k, p, &self.channel, ops);
                *ops += 1;
                let k1 = self.paths.fork(k);
                self.paths.score[k] += penalty(llr, 0);
                self.paths.score[k1] += penalty(llr, 1);
                self.paths.set_bit(k, p, 0);
                self.paths.set_bit(k1, p, 1);
            }
        }
        self.pending_llr.clear();
        for k in 0..self.paths.len() {
            let llr = self.paths.llr(k, h, &self.channel, ops);
            self.pending_llr.push(llr);
        }
        if self.profile.windows[i].is_empty() {
            let llr = self.pending_llr[0];
            return if self.profile.implied_u(i, self.decided, self.paths.v[0]) == 0 {
                llr
            } else {
                -llr
            };
        }
        let n = self.paths.len();
        *ops += n as u64;
        let mut best = [f64::NEG_INFINITY; 2];
        for k in 0..n {
            let c = self.profile.implied_u(i, self.decided, self.paths.v[k]) as usize;
            let llr = self.pending_llr[k];
            let sc = self.paths.score[k];
            best[c] = best[c].max(sc + penalty(llr, 0));
            best[c ^ 1] = best[c ^ 1].max(sc + penalty(llr, 1));
        }
        *ops += 2 * n as u64 - 1;
        best[0] - best[1]
    }

    fn plateau(&mut self, i: usize, ops: &mut u64) -> f64 {
        let mut best = [f64::NEG_INFINITY; 2];
        for k in 0..self.paths.len() {
            let c = self.profile.implied_u(i, self.decided, self.paths.v[k]) as usize;
            best[c] = best[c].max(self.paths.score[k]);
        }
        *ops += self.paths.len() as u64 - 1;
        best[0] - best[1]
    }

    /// Fixes the current kernel input to `u`.
    pub fn commit(&mut self, u: u8) {
        if self.pending.is_none() {
            let mut scratch = 0;
            self.phase_llr(&mut scratch);
        }
        let u = u & 1;
        let i = self.phase;
        let h = self.profile.h[i];
        if h as isize > self.profile.h_prev(i) {
            let single = self.profile.windows[i].is_empty();
            for k in 0..self.paths.len() {
                let b = u ^ self.profile.implied_u(i, self.decided, self.paths.v[k]);
                if !single {
                    self.paths.score[k] += penalty(self.pending_llr[k], b);
                }
                self.paths.set_bit(k, h, b);
            }
        } else {
            let keep: SmallVec<[bool; 16]> = (0..self.paths.len())
                .map(|k| self.profile.implied_u(i, self.decided, self.paths.v[k]) == u)
                .collect();
            self.paths.retain(|k| keep[k]);
        }
        self.decided |= (u as u64) << i;
        self.phase += 1;
        self.pending = None;
    }
}
