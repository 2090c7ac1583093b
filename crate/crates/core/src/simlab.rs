//! AWGN/BPSK simulation: Monte-Carlo code construction and FER measurement.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`). Trial `i` of
//! a run with seed `s` draws from the generator keyed by
//! `ChaCha20Rng::seed_from_u64(s ^ D)` on stream `i`, where `D` separates
//! construction from FER runs. Gaussian samples use Box-Muller on 53-bit
//! uniforms. Results therefore do not depend on the number of worker threads.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::windec::{encode, DecoderKind, PolarCode, ScDecoder};

const CONSTRUCTION_DOMAIN: u64 = 0x636f_6e73_7472_7563;
const FER_DOMAIN: u64 = 0x6665_7273_696d_756c;
const CHANNEL_DOMAIN: u64 = 0x6177_676e_6270_736b;
const BATCH: u64 = 256;

pub const CSV_VERSION_LINE: &str = "# lkpolar-fer v1";
pub const CSV_HEADER: &str = "eb_no_db,trials,errors,fer,mean_ops,seconds";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub eb_no_db: f64,
    pub rate: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(eb_no_db: f64, rate: f64, seed: u64) -> Self {
        ChannelConfig { eb_no_db, rate, seed }
    }

    pub fn noise_variance(&self) -> f64 {
        noise_variance(self.eb_no_db, self.rate)
    }
}

/// `σ² = 1 / (2 R 10^{EbNo/10})`.
pub fn noise_variance(eb_no_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(eb_no_db / 10.0))
}

fn trial_rng(seed: u64, domain: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ domain);
    rng.set_stream(trial);
    rng
}

fn uniform_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Fills `out` with independent standard normal samples.
pub fn standard_normals(rng: &mut impl RngCore, out: &mut [f64]) {
    for pair in out.chunks_mut(2) {
        let r = (-2.0 * uniform_open(rng).ln()).sqrt();
        let theta = 2.0 * PI * uniform_open(rng);
        pair[0] = r * theta.cos();
        if pair.len() > 1 {
            pair[1] = r * theta.sin();
        }
    }
}

fn llrs_from(codeword: &[u8], sigma2: f64, rng: &mut impl RngCore, out: &mut Vec<f64>) {
    out.clear();
    out.resize(codeword.len(), 0.0);
    standard_normals(rng, out);
    let sigma = sigma2.sqrt();
    for (y, &c) in out.iter_mut().zip(codeword) {
        let x = 1.0 - 2.0 * (c & 1) as f64;
        *y = 2.0 * (x + sigma * *y) / sigma2;
    }
}

/// BPSK over AWGN: `llr_j = 2 y_j / σ²` with `y_j = 1 - 2 c_j + n_j`.
pub fn awgn_bpsk_llrs(codeword: &[u8], config: &ChannelConfig) -> Vec<f64> {
    let mut rng = trial_rng(config.seed, CHANNEL_DOMAIN, 0);
    let mut out = Vec::new();
    llrs_from(codeword, config.noise_variance(), &mut rng, &mut out);
    out
}

/// Genie-aided SC error counts per input index, all-zero transmission.
pub fn monte_carlo_reliability(
    kernel: &Kernel,
    n: u32,
    design_eb_no_db: f64,
    rate: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    if trials == 0 {
        return Err(Error::InvalidStopRule("construction needs at least one trial".into()));
    }
    let code = PolarCode::unfrozen(kernel.clone(), n)?;
    let len = code.len();
    let sigma2 = noise_variance(design_eb_no_db, rate);
    let zeros = vec![0u8; len];
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || (vec![0u64; len], Vec::with_capacity(len)),
            |(mut acc, mut llrs), trial| {
                let mut rng = trial_rng(seed, CONSTRUCTION_DOMAIN, trial);
                llrs_from(&zeros, sigma2, &mut rng, &mut llrs);
                let mut dec = ScDecoder::new(&code, &llrs).expect("length matches");
                for slot in acc.iter_mut() {
                    if dec.next_llr() < 0.0 {
                        *slot += 1;
                    }
                    dec.commit(0);
                }
                (acc, llrs)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts)
}

/// Freezes the `N - k` indices with the most errors; among equal counts the
/// larger index is frozen first.
pub fn select_frozen(error_counts: &[u64], k: usize) -> Result<Vec<bool>> {
    let len = error_counts.len();
    if k > len {
        return Err(Error::InvalidCode(format!("k = {k} exceeds length {len}")));
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| error_counts[b].cmp(&error_counts[a]).then(b.cmp(&a)));
    let mut frozen = vec![false; len];
    for &i in &order[..len - k] {
        frozen[i] = true;
    }
    Ok(frozen)
}

/// Monte-Carlo construction followed by frozen-set selection.
pub fn construct_code(
    kernel: &Kernel,
    n: u32,
    k: usize,
    design_eb_no_db: f64,
    trials: u64,
    seed: u64,
) -> Result<PolarCode> {
    let len = kernel.size().pow(n);
    if k > len {
        return Err(Error::InvalidCode(format!("k = {k} exceeds length {len}")));
    }
    let rate = k.max(1) as f64 / len as f64;
    let counts = monte_carlo_reliability(kernel, n, design_eb_no_db, rate, trials, seed)?;
    PolarCode::new(kernel.clone(), n, select_frozen(&counts, k)?)
}

/// Stop after `max_trials` frames or `target_errors` frame errors, whichever
/// comes first. A zero bound is ignored; both zero is invalid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub max_trials: u64,
    pub target_errors: u64,
}

impl StopRule {
    pub fn new(max_trials: u64, target_errors: u64) -> Result<Self> {
        let rule = StopRule {
            max_trials,
            target_errors,
        };
        rule.validate()?;
        Ok(rule)
    }

    fn validate(&self) -> Result<()> {
        if self.max_trials == 0 && self.target_errors == 0 {
            return Err(Error::InvalidStopRule("max trials and target errors are both zero".into()));
        }
        Ok(())
    }

    fn done(&self, trials: u64, errors: u64) -> bool {
        (self.max_trials != 0 && trials >= self.max_trials) || (self.target_errors != 0 && errors >= self.target_errors)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FerReport {
    pub eb_no_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub fer: f64,
    pub mean_ops: f64,
    pub seconds: f64,
}

impl FerReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6e},{:.1},{:.3}",
            self.eb_no_db, self.trials, self.errors, self.fer, self.mean_ops, self.seconds
        )
    }
}

/// CSV text with the version comment and header followed by one row per report.
pub fn fer_csv(reports: &[FerReport]) -> String {
    let mut out = format!("{CSV_VERSION_LINE}\n{CSV_HEADER}\n");
    for r in reports {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

/// Frame error rate of `decoder` on `code`. Information bits are uniform; a
/// frame error is any information-bit mismatch.
pub fn run_fer(code: &PolarCode, decoder: DecoderKind, channel: &ChannelConfig, stop: StopRule) -> Result<FerReport> {
    stop.validate()?;
    if let DecoderKind::Scl(0) = decoder {
        return Err(Error::InvalidCode("list size must be at least 1".into()));
    }
    let start = Instant::now();
    let sigma2 = channel.noise_variance();
    let info = code.info_positions();
    let (mut trials, mut errors, mut ops) = (0u64, 0u64, 0u128);
    'outer: while !stop.done(trials, errors) {
        let batch_end = if stop.max_trials == 0 {
            trials + BATCH
        } else {
            (trials + BATCH).min(stop.max_trials)
        };
        let results = (trials..batch_end)
            .into_par_iter()
            .map(|trial| -> Result<(bool, u64)> {
                let mut rng = trial_rng(channel.seed, FER_DOMAIN, trial);
                let mut u = vec![0u8; code.len()];
                let mut word = rng.next_u64();
                for (bit, &pos) in info.iter().enumerate() {
                    if bit % 64 == 0 && bit > 0 {
                        word = rng.next_u64();
                    }
                    u[pos] = ((word >> (bit % 64)) & 1) as u8;
                }
                let c = encode(code, &u)?;
                let mut llrs = Vec::new();
                llrs_from(&c, sigma2, &mut rng, &mut llrs);
                let out = decoder.decode(code, &llrs)?;
                let wrong = info.iter().any(|&p| out.u[p] != u[p]);
                Ok((wrong, out.ops))
            })
            .collect::<Result<Vec<_>>>()?;
        for (wrong, o) in results {
            trials += 1;
            errors += wrong as u64;
            ops += o as u128;
            if stop.done(trials, errors) {
                break 'outer;
            }
        }
    }
    Ok(FerReport {
        eb_no_db: channel.eb_no_db,
        trials,
        errors,
        fer: errors as f64 / trials as f64,
        mean_ops: ops as f64 / trials as f64,
        seconds: start.elapsed().as_secs_f64(),
    })
}
