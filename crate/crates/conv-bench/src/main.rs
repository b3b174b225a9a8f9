//! Command-line driver: benchmark, accuracy, and memory tables for the
//! dealiased convolution library, plus a quick self-test. Exit code 0 on
//! success, 2 when a result fails validation against its reference.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conv_bench::{
    accuracy_sweep, one_sided_stats, run_bench, BenchKind, BenchRow, Dims, Method, HEADER,
};
use dealias::nd::{memory_report, NdKind};
use dealias::Backend;

#[derive(Parser)]
#[command(
    name = "conv-bench",
    about = "Benchmarks and validation for implicitly dealiased convolutions",
    after_help = "The FFT engine is selected with CONV_FFT_BACKEND (naive|optimized; \
                  default optimized)."
)]
struct Cli {
    /// Output separator for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn sep(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Time one or more methods on a single problem size; every run is
    /// validated against an independent reference first.
    Bench {
        /// Convolution kind: cconv, hconv, tconv, cconv2, conv2, tconv2,
        /// cconv3, hconv3.
        #[arg(long)]
        kind: BenchKind,
        /// Modes in x (the only size for 1D kinds).
        #[arg(long)]
        mx: usize,
        /// Modes in y (2D/3D kinds).
        #[arg(long, default_value_t = 1)]
        my: usize,
        /// Modes in z (3D kinds).
        #[arg(long, default_value_t = 1)]
        mz: usize,
        /// Timing samples per method (minimum 4).
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Seed for the pseudo-random inputs.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated methods: implicit, explicit, pruned.
        #[arg(long, value_delimiter = ',', default_values_t =
              [Method::Implicit, Method::Explicit])]
        methods: Vec<Method>,
        /// Direct-sum validation work cap in multiply-adds; above it the
        /// cross-pipeline reference is used instead.
        #[arg(long)]
        oracle_cap: Option<u64>,
    },
    /// Sweep power-of-two sizes and report normalized errors of the
    /// implicit and explicit methods against the sharpest reference.
    Accuracy {
        #[arg(long)]
        kind: BenchKind,
        /// Smallest size (power of two).
        #[arg(long, default_value_t = 8)]
        min_m: usize,
        /// Largest size (power of two).
        #[arg(long, default_value_t = 1024)]
        max_m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the storage totals (complex words) of the implicit and
    /// explicit methods for every multidimensional kind at the given sizes.
    Memory {
        #[arg(long)]
        mx: u64,
        #[arg(long)]
        my: u64,
        #[arg(long, default_value_t = 2)]
        mz: u64,
    },
    /// Validate every kind and method at small sizes; prints one line per
    /// check.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let sep = cli.format.sep();
    let backend = Backend::from_env();
    match cli.command {
        Command::Bench {
            kind,
            mx,
            my,
            mz,
            samples,
            seed,
            methods,
            oracle_cap,
        } => {
            anyhow::ensure!(samples >= 4, "need at least 4 samples, got {samples}");
            let dims = Dims { mx, my, mz };
            println!("{}", HEADER.replace(',', &sep.to_string()));
            for method in methods {
                let row = run_bench(kind, method, dims, samples, seed, backend, oracle_cap)?;
                println!("{}", row.to_line(sep));
            }
        }
        Command::Accuracy {
            kind,
            min_m,
            max_m,
            seed,
        } => {
            anyhow::ensure!(
                min_m >= 1 && min_m <= max_m,
                "need 1 <= min-m <= max-m"
            );
            let mut sizes = Vec::new();
            let mut m = min_m;
            while m <= max_m {
                sizes.push(m);
                m *= 2;
            }
            println!("m{sep}error_implicit{sep}error_explicit");
            for row in accuracy_sweep(kind, &sizes, seed, backend)? {
                println!(
                    "{}{sep}{:.3e}{sep}{:.3e}",
                    row.m, row.error_implicit, row.error_explicit
                );
            }
        }
        Command::Memory { mx, my, mz } => {
            println!("kind{sep}mx{sep}my{sep}mz{sep}implicit_words{sep}explicit_words");
            let kinds = [
                (NdKind::Cconv2, "cconv2", 1),
                (NdKind::Conv2, "conv2", 1),
                (NdKind::Tconv2, "tconv2", 1),
                (NdKind::Cconv3, "cconv3", mz),
                (NdKind::Hconv3, "hconv3", mz),
            ];
            for (kind, name, z) in kinds {
                let r = memory_report(kind, mx, my, z);
                println!(
                    "{name}{sep}{mx}{sep}{my}{sep}{z}{sep}{}{sep}{}",
                    r.implicit, r.explicit
                );
            }
        }
        Command::Selftest => {
            // Also exercise the statistics path once.
            let s = one_sided_stats(&[1.0, 2.0, 3.0, 4.0])?;
            anyhow::ensure!((s.sigma_lo - 2.5f64.sqrt()).abs() < 1e-12);
            for kind in BenchKind::ALL {
                let dims = if kind.is_1d() {
                    Dims { mx: 32, my: 1, mz: 1 }
                } else if kind.is_3d() {
                    Dims { mx: 3, my: 3, mz: 2 }
                } else {
                    Dims { mx: 6, my: 6, mz: 1 }
                };
                let mut methods = vec![Method::Implicit, Method::Explicit];
                if matches!(kind, BenchKind::Cconv2 | BenchKind::Cconv3) {
                    methods.push(Method::Pruned);
                }
                for method in methods {
                    let row: BenchRow =
                        run_bench(kind, method, dims, 4, 11, backend, Some(1 << 26))?;
                    println!(
                        "ok {kind}/{method} {}x{}x{} error {:.3e}",
                        dims.mx, dims.my, dims.mz, row.error
                    );
                }
            }
        }
    }
    Ok(())
}
