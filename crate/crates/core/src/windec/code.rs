use super::processor::KernelProcessor;
use super::{hard_decision, path_score_update};
use crate::error::{Error, Result};
use crate::kernel::{window_profile, Kernel, WindowProfile};

/// Largest supported code length.
pub const MAX_CODE_LENGTH: usize = 1 << 24;

/// A code generated by `K^{⊗n}` with a frozen set.
#[derive(Clone, Debug)]
pub struct PolarCode {
    kernel: Kernel,
    profile: WindowProfile,
    n: u32,
    len: usize,
    frozen: Vec<bool>,
    k: usize,
}

impl PolarCode {
    /// `frozen[i]` marks input `i` as fixed to zero.
    pub fn new(kernel: Kernel, n: u32, frozen: Vec<bool>) -> Result<Self> {
        let len = code_length(kernel.size(), n)?;
        if frozen.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: frozen.len(),
            });
        }
        let k = frozen.iter().filter(|&&f| !f).count();
        let profile = window_profile(&kernel);
        Ok(PolarCode {
            kernel,
            profile,
            n,
            len,
            frozen,
            k,
        })
    }

    pub fn from_frozen_positions(kernel: Kernel, n: u32, positions: &[usize]) -> Result<Self> {
        let len = code_length(kernel.size(), n)?;
        let mut frozen = vec![false; len];
        for &p in positions {
            if p >= len {
                return Err(Error::InvalidCode(format!("frozen position {p} >= length {len}")));
            }
            frozen[p] = true;
        }
        Self::new(kernel, n, frozen)
    }

    /// The code with no frozen inputs.
    pub fn unfrozen(kernel: Kernel, n: u32) -> Result<Self> {
        let len = code_length(kernel.size(), n)?;
        Self::new(kernel, n, vec![false; len])
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn profile(&self) -> &WindowProfile {
        &self.profile
    }

    pub fn levels(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.len as f64
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| !self.frozen[i]).collect()
    }

    /// Places `info` (length `k`) on the unfrozen positions.
    pub fn embed(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: info.len(),
            });
        }
        let mut u = vec![0u8; self.len];
        for (pos, &b) in self.info_positions().iter().zip(info) {
            u[*pos] = b & 1;
        }
        Ok(u)
    }
}

fn code_length(l: usize, n: u32) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidCode("at least one kernel level is required".into()));
    }
    match (l as u128).checked_pow(n) {
        Some(len) if len <= MAX_CODE_LENGTH as u128 => Ok(len as usize),
        _ => Err(Error::UnsupportedSize {
            size: l.saturating_pow(n),
            max: MAX_CODE_LENGTH,
        }),
    }
}

/// `c = u · K^{⊗n}`. Frozen inputs must be zero.
pub fn encode(code: &PolarCode, u: &[u8]) -> Result<Vec<u8>> {
    if u.len() != code.len {
        return Err(Error::LengthMismatch {
            expected: code.len,
            got: u.len(),
        });
    }
    if let Some(i) = (0..code.len).find(|&i| code.frozen[i] && u[i] & 1 != 0) {
        return Err(Error::FrozenBitViolation(i));
    }
    let mut x: Vec<u8> = u.iter().map(|b| b & 1).collect();
    transform(&code.kernel, &mut x);
    Ok(x)
}

fn transform(kernel: &Kernel, x: &mut [u8]) {
    let l = kernel.size();
    let m = x.len() / l;
    if m > 1 {
        for block in x.chunks_mut(m) {
            transform(kernel, block);
        }
    }
    for col in 0..m {
        let word = (0..l).fold(0u64, |w, a| w | ((x[a * m + col] as u64) << a));
        let c = kernel.encode_mask(word);
        for b in 0..l {
            x[b * m + col] = ((c >> b) & 1) as u8;
        }
    }
}

#[derive(Clone, Debug)]
struct Frame<'c> {
    llr: Vec<f64>,
    cw: Vec<u8>,
    procs: Vec<KernelProcessor<'c>>,
    a: usize,
}

/// Successive-cancellation state over the whole code, advanced one input at
/// a time: [`ScDecoder::next_llr`] then [`ScDecoder::commit`].
#[derive(Clone, Debug)]
pub struct ScDecoder<'c> {
    code: &'c PolarCode,
    frames: Vec<Frame<'c>>,
    top: usize,
    u: Vec<u8>,
    ops: u64,
}

impl<'c> ScDecoder<'c> {
    pub fn new(code: &'c PolarCode, llrs: &[f64]) -> Result<Self> {
        if llrs.len() != code.len {
            return Err(Error::LengthMismatch {
                expected: code.len,
                got: llrs.len(),
            });
        }
        let l = code.kernel.size();
        let mut frames = Vec::with_capacity(code.n as usize);
        let mut size = code.len;
        while size >= l {
            let m = size / l;
            frames.push(Frame {
                llr: vec![0.0; size],
                cw: vec![0; size],
                procs: vec![KernelProcessor::new(&code.profile); m],
                a: 0,
            });
            size = m;
        }
        frames[0].llr.copy_from_slice(llrs);
        load(&mut frames[0]);
        Ok(ScDecoder {
            code,
            frames,
            top: 0,
            u: Vec::with_capacity(code.len),
            ops: 0,
        })
    }

    /// Index of the next input to decide.
    pub fn position(&self) -> usize {
        self.u.len()
    }

    pub fn is_complete(&self) -> bool {
        self.u.len() == self.code.len
    }

    pub fn decisions(&self) -> &[u8] {
        &self.u
    }

    pub fn into_decisions(self) -> Vec<u8> {
        self.u
    }

    /// Operations spent so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// LLR of the next input given all earlier decisions.
    pub fn next_llr(&mut self) -> f64 {
        assert!(!self.is_complete(), "all inputs already decided");
        loop {
            let d = self.top;
            if self.frames[d].procs.len() == 1 {
                return self.frames[d].procs[0].phase_llr(&mut self.ops);
            }
            let (upper, lower) = self.frames.split_at_mut(d + 1);
            let parent = &mut upper[d];
            let child = &mut lower[0];
            for (m, proc) in parent.procs.iter_mut().enumerate() {
                child.llr[m] = proc.phase_llr(&mut self.ops);
            }
            load(child);
            self.top = d + 1;
        }
    }

    /// Fixes the next input to `bit`.
    pub fn commit(&mut self, bit: u8) {
        assert!(!self.is_complete(), "all inputs already decided");
        let bit = bit & 1;
        let l = self.code.kernel.size();
        if self.frames[self.top].procs.len() != 1 {
            self.next_llr();
        }
        let mut d = self.top;
        self.u.push(bit);
        self.frames[d].procs[0].commit(bit);
        self.frames[d].a += 1;
        while self.frames[d].a == l {
            let frame = &mut self.frames[d];
            let m = frame.procs.len();
            for (col, proc) in frame.procs.iter().enumerate() {
                let c = self.code.kernel.encode_mask(proc.decided());
                for b in 0..l {
                    frame.cw[b * m + col] = ((c >> b) & 1) as u8;
                }
            }
            if d == 0 {
                break;
            }
            let (upper, lower) = self.frames.split_at_mut(d);
            let parent = &mut upper[d - 1];
            for (proc, &b) in parent.procs.iter_mut().zip(&lower[0].cw) {
                proc.commit(b);
            }
            parent.a += 1;
            d -= 1;
        }
        self.top = d;
    }

    /// Codeword estimate once every input is decided.
    pub fn codeword(&self) -> Option<&[u8]> {
        self.is_complete().then(|| &self.frames[0].cw[..])
    }
}

fn load(frame: &mut Frame<'_>) {
    let m = frame.procs.len();
    let l = frame.llr.len() / m;
    for (col, proc) in frame.procs.iter_mut().enumerate() {
        let llr = &frame.llr;
        proc.reset((0..l).map(|b| llr[b * m + col]));
    }
    frame.a = 0;
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutput {
    /// Decided inputs `û`, frozen positions included.
    pub u: Vec<u8>,
    /// Path metric of the returned path.
    pub metric: f64,
    /// Operations spent, all paths included.
    pub ops: u64,
}

impl DecodeOutput {
    pub fn info_bits(&self, code: &PolarCode) -> Vec<u8> {
        code.info_positions().iter().map(|&i| self.u[i]).collect()
    }
}

/// One SCL candidate.
#[derive(Clone, Debug)]
pub struct DecodePath<'c> {
    pub state: ScDecoder<'c>,
    pub metric: f64,
}

pub fn sc_decode(code: &PolarCode, llrs: &[f64]) -> Result<DecodeOutput> {
    let mut dec = ScDecoder::new(code, llrs)?;
    let mut metric = 0.0;
    for i in 0..code.len {
        let llr = dec.next_llr();
        let bit = if code.frozen[i] { 0 } else { hard_decision(llr) };
        metric = path_score_update(metric, llr, bit);
        dec.commit(bit);
    }
    let ops = dec.ops();
    Ok(DecodeOutput {
        u: dec.into_decisions(),
        metric,
        ops,
    })
}

/// List decoding with at most `list_size` paths. Frozen inputs also
/// contribute their penalty to the path metric. Equal metrics keep path
/// order, with each path's hard decision ahead of its flipped bit.
pub fn scl_decode(code: &PolarCode, llrs: &[f64], list_size: usize) -> Result<DecodeOutput> {
    if list_size == 0 {
        return Err(Error::InvalidCode("list size must be at least 1".into()));
    }
    let mut paths = vec![DecodePath {
        state: ScDecoder::new(code, llrs)?,
        metric: 0.0,
    }];
    let mut extra_ops = 0u64;
    let mut cand: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * list_size);
    let mut llr_of = Vec::with_capacity(list_size);
    for i in 0..code.len {
        llr_of.clear();
        for p in paths.iter_mut() {
            let before = p.state.ops();
            llr_of.push(p.state.next_llr());
            extra_ops += p.state.ops() - before;
        }
        if code.frozen[i] {
            for (p, &llr) in paths.iter_mut().zip(&llr_of) {
                p.metric = path_score_update(p.metric, llr, 0);
                p.state.commit(0);
            }
            extra_ops += paths.len() as u64;
            continue;
        }
        cand.clear();
        for (k, (p, &llr)) in paths.iter().zip(&llr_of).enumerate() {
            let hard = hard_decision(llr);
            cand.push((path_score_update(p.metric, llr, hard), k, hard));
            cand.push((path_score_update(p.metric, llr, hard ^ 1), k, hard ^ 1));
        }
        extra_ops += paths.len() as u64;
        if cand.len() > list_size {
            let mut cmp = 0u64;
            cand.sort_by(|x, y| {
                cmp += 1;
                y.0.total_cmp(&x.0)
            });
            extra_ops += cmp;
            cand.truncate(list_size);
        }
        let mut uses = vec![0usize; paths.len()];
        for c in &cand {
            uses[c.1] += 1;
        }
        let mut slots: Vec<Option<DecodePath<'_>>> = paths.drain(..).map(Some).collect();
        for &(metric, k, bit) in &cand {
            uses[k] -= 1;
            let mut path = if uses[k] > 0 {
                slots[k].clone().expect("parent still present")
            } else {
                slots[k].take().expect("parent still present")
            };
            path.metric = metric;
            path.state.commit(bit);
            paths.push(path);
        }
    }
    let mut best = 0;
    for k in 1..paths.len() {
        if paths[k].metric > paths[best].metric {
            best = k;
        }
    }
    let ops = extra_ops;
    let chosen = paths.swap_remove(best);
    Ok(DecodeOutput {
        u: chosen.state.into_decisions(),
        metric: chosen.metric,
        ops,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl(usize),
}

impl DecoderKind {
    pub fn decode(&self, code: &PolarCode, llrs: &[f64]) -> Result<DecodeOutput> {
        match *self {
            DecoderKind::Sc => sc_decode(code, llrs),
            DecoderKind::Scl(l) => scl_decode(code, llrs, l),
        }
    }
}
