use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circle_walk::experiment::{ExperimentConfig, Format, Mode};
use circle_walk::{output, run_dioph, run_verify, run_walk, WalkError};

#[derive(Parser)]
#[command(
    name = "circle-walk",
    version,
    about = "Random walks on the circle generated by rotations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the step-k distribution as (position, weight) atoms.
    Walk(CommonArgs),
    /// Exact discrepancy, Fourier bounds and envelopes for a range of k.
    Verify(CommonArgs),
    /// Empirical approximation constants of the generator tuple.
    Dioph(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// phi | plastic | sqrt:<int>[,<int>…] | dec:<decimal>[,<decimal>…]
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Single step count (sets kmin = kmax).
    #[arg(long, conflicts_with_all = ["kmin", "kmax"])]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    kmin: usize,
    #[arg(long, default_value_t = 100)]
    kmax: usize,
    #[arg(long, default_value_t = 1)]
    kstep: usize,
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    nmax: u64,
    #[arg(long, default_value_t = 1_000)]
    qmax: u64,
    /// Erdős–Turán scan cap (default 10⁶/d).
    #[arg(long)]
    mcap: Option<usize>,
    #[arg(long, default_value_t = circle_walk::lattice::DEFAULT_SUPPORT_CAP)]
    support_cap: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value = "csv")]
    format: String,
}

impl CommonArgs {
    fn into_config(self) -> Result<ExperimentConfig, WalkError> {
        let (k_min, k_max) = match self.k {
            Some(k) => (k, k),
            None => (self.kmin, self.kmax),
        };
        Ok(ExperimentConfig {
            alpha_spec: self.alpha,
            k_min,
            k_max,
            k_step: self.kstep,
            mode: self.mode.parse::<Mode>()?,
            n_samples: self.samples,
            seed: self.seed,
            n_max_dioph: self.nmax,
            q_max: self.qmax,
            m_cap: self.mcap,
            support_cap: self.support_cap,
            output_path: self.out,
            format: self.format.parse::<Format>()?,
            ..ExperimentConfig::default()
        })
    }
}

fn open_output(path: Option<&str>) -> Result<Box<dyn Write>, WalkError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(command: Command) -> Result<(), WalkError> {
    match command {
        Command::Walk(args) => {
            let config = args.into_config()?;
            let report = run_walk(&config)?;
            let mut out = open_output(config.output_path.as_deref())?;
            match config.format {
                Format::Csv => output::write_walk_csv(&report, &mut out)?,
                Format::Json => output::write_walk_json(&report, &mut out)?,
            }
            out.flush()?;
            eprintln!(
                "{}: k = {}, {} atoms, D = {}",
                report.alpha,
                report.k,
                report.measure.len(),
                output::fmt_real(report.discrepancy)
            );
        }
        Command::Verify(args) => {
            let config = args.into_config()?;
            let report = run_verify(&config)?;
            let mut out = open_output(config.output_path.as_deref())?;
            match config.format {
                Format::Csv => output::write_verify_csv(&report, &mut out)?,
                Format::Json => output::write_verify_json(&report, &mut out)?,
            }
            out.flush()?;
            let a = &report.approximation;
            eprintln!("{}", report.alpha);
            eprintln!(
                "beta_hat = {} (N = {}), B_hat = {} (q <= {})",
                a.beta_hat, a.beta_argmin, a.b_hat, a.q_max
            );
            if let Some(slope) = report.slope {
                eprintln!(
                    "log-log slope over k in [{}, {}]: {slope:.4} (expected {})",
                    report.slope_window.0,
                    report.slope_window.1,
                    -(report.alpha.dim() as f64) / 2.0
                );
            }
            for c in &report.caveats {
                eprintln!("note: {c}");
            }
        }
        Command::Dioph(args) => {
            let config = args.into_config()?;
            let report = run_dioph(&config)?;
            let mut out = open_output(config.output_path.as_deref())?;
            match config.format {
                Format::Csv => output::write_dioph_csv(&report, &mut out)?,
                Format::Json => output::write_dioph_json(&report, &mut out)?,
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                WalkError::SupportCap { .. } => 3,
                WalkError::Io(_) | WalkError::Csv(_) | WalkError::Json(_) => 1,
                _ => 2,
            })
        }
    }
}
