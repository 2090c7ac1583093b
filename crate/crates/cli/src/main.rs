use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lkpolar::cost::kernel_cost;
use lkpolar::format::{parse_kernel, parse_permutation, parse_permutation_list, write_permutation};
use lkpolar::kernel::{error_exponent, is_polarizing, permute_columns, window_profile, Kernel, Permutation};
use lkpolar::permsearch::{find_good_permutations, initial_threshold, SearchConfig, DEFAULT_BEAM_CAP};
use lkpolar::simlab::{construct_code, fer_csv, run_fer, ChannelConfig, StopRule};
use lkpolar::windec::DecoderKind;
use lkpolar::Error;

#[derive(Parser)]
#[command(name = "lkpolar", version, about = "Large-kernel polar code tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel inspection.
    Kernel {
        #[command(subcommand)]
        command: KernelCommand,
    },
    /// Search column permutations that shrink the decoding windows.
    Permsearch(PermsearchArgs),
    /// Monte-Carlo simulation.
    Simulate {
        #[command(subcommand)]
        command: SimulateCommand,
    },
}

#[derive(Subcommand)]
enum KernelCommand {
    /// Per-phase window sizes and operation counts.
    Profile {
        kernel: PathBuf,
        /// Column permutation (1-based), inline or a file holding one.
        #[arg(long)]
        permutation: Option<String>,
    },
}

#[derive(Args)]
struct PermsearchArgs {
    kernel: PathBuf,
    /// Starting metric threshold, or `auto` for the Hamming-weight match count.
    #[arg(long, default_value = "auto")]
    threshold: String,
    /// Maximum number of partial permutations kept per column.
    #[arg(long, default_value_t = DEFAULT_BEAM_CAP)]
    cap: usize,
    /// Print every survivor rather than only the cheapest.
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Frame error rate over AWGN with BPSK.
    Fer(FerArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderName {
    Sc,
    Scl,
}

#[derive(Args)]
struct FerArgs {
    kernel: PathBuf,
    /// Number of kernel levels; the code length is l^n.
    #[arg(long)]
    n: u32,
    /// Number of information bits.
    #[arg(long)]
    k: usize,
    /// Comma-separated Eb/N0 points in dB.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    snr: Vec<f64>,
    #[arg(long, value_enum, default_value = "sc")]
    decoder: DecoderName,
    /// List size for `scl`.
    #[arg(long, default_value_t = 8)]
    list: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte-Carlo construction trials.
    #[arg(long, default_value_t = 100_000)]
    construct_trials: u64,
    /// Construction Eb/N0 in dB; defaults to the lowest simulated point.
    #[arg(long, allow_negative_numbers = true)]
    design_snr: Option<f64>,
    /// Column permutation applied to the kernel first.
    #[arg(long)]
    permutation: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 100)]
    target_errors: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularMatrix { .. } => 3,
            Error::BeamOverflow { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_kernel(path: &Path) -> Result<Kernel, Failure> {
    parse_kernel(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_permutation(arg: &str) -> Result<Permutation, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let list = parse_permutation_list(&read(path)?).map_err(|e| usage(format!("{arg}: {e}")))?;
        list.into_iter()
            .next()
            .ok_or_else(|| usage(format!("{arg}: no permutation found")))
    } else {
        parse_permutation(arg).map_err(|e| usage(format!("permutation: {e}")))
    }
}

fn apply_permutation(kernel: Kernel, arg: Option<&str>) -> Result<Kernel, Failure> {
    match arg {
        Some(a) => Ok(permute_columns(&kernel, &load_permutation(a)?)?),
        None => Ok(kernel),
    }
}

fn profile(kernel: &Path, permutation: Option<&str>) -> Result<String, Failure> {
    let k = apply_permutation(load_kernel(kernel)?, permutation)?;
    let prof = window_profile(&k);
    let cost = kernel_cost(&prof);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "kernel {} (l = {}, t = {})",
        k.name().unwrap_or("-"),
        k.size(),
        k.t()
    );
    let _ = writeln!(out, "polarizing: {}", if is_polarizing(&k) { "yes" } else { "no" });
    if let Ok(ee) = error_exponent(&k) {
        let _ = writeln!(out, "error exponent: {ee:.5}");
    }
    let _ = writeln!(out, "{:>4} {:>4} {:>6} {:>12}", "i", "h_i", "|D_i|", "AC_i");
    for i in 0..k.size() {
        let _ = writeln!(
            out,
            "{:>4} {:>4} {:>6} {:>12}",
            i,
            prof.h[i],
            prof.windows[i].len(),
            cost.per_phase[i]
        );
    }
    let _ = writeln!(out, "max |D_i|: {}", prof.max_window());
    let _ = writeln!(out, "total: {}", cost.total);
    Ok(out)
}

fn permsearch(args: &PermsearchArgs) -> Result<String, Failure> {
    let k = load_kernel(&args.kernel)?;
    let start = if args.threshold == "auto" {
        initial_threshold(&k)
    } else {
        args.threshold
            .parse()
            .map_err(|_| usage(format!("invalid threshold {:?}", args.threshold)))?
    };
    let outcome = find_good_permutations(&k, start, SearchConfig { cap: args.cap })?;
    let mut out = String::new();
    let _ = writeln!(out, "threshold: {}", outcome.threshold);
    let _ = writeln!(out, "survivors: {}", outcome.candidates.len());
    if args.all {
        let _ = writeln!(out, "{:>6} {:>12}  permutation", "metric", "psi");
        for c in &outcome.candidates {
            let _ = writeln!(out, "{:>6} {:>12}  {}", c.metric, c.cost, write_permutation(&c.permutation));
        }
    }
    let best = outcome
        .candidates
        .iter()
        .min_by(|a, b| a.cost.cmp(&b.cost).then_with(|| a.permutation.cmp(&b.permutation)))
        .ok_or_else(|| usage("no survivors"))?;
    let _ = writeln!(out, "best: {} (psi = {})", write_permutation(&best.permutation), best.cost);
    Ok(out)
}

fn simulate(args: &FerArgs) -> Result<String, Failure> {
    let k = apply_permutation(load_kernel(&args.kernel)?, args.permutation.as_deref())?;
    if args.snr.iter().any(|s| !s.is_finite()) {
        return Err(usage("SNR values must be finite"));
    }
    let decoder = match args.decoder {
        DecoderName::Sc => DecoderKind::Sc,
        DecoderName::Scl if args.list == 0 => return Err(usage("--list must be at least 1")),
        DecoderName::Scl => DecoderKind::Scl(args.list),
    };
    let design = args
        .design_snr
        .unwrap_or_else(|| args.snr.iter().copied().fold(f64::INFINITY, f64::min));
    let stop = StopRule::new(args.max_trials, args.target_errors)?;
    let code = construct_code(&k, args.n, args.k, design, args.construct_trials, args.seed)?;
    let rate = code.rate();
    let reports = args
        .snr
        .iter()
        .map(|&snr| run_fer(&code, decoder, &ChannelConfig::new(snr, rate, args.seed), stop))
        .collect::<Result<Vec<_>, _>>()?;
    let csv = fer_csv(&reports);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Kernel {
            command: KernelCommand::Profile { kernel, permutation },
        } => profile(kernel, permutation.as_deref()),
        Command::Permsearch(args) => permsearch(args),
        Command::Simulate {
            command: SimulateCommand::Fer(args),
        } => simulate(args),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
