//! `kif`: inject salt & pepper noise, denoise, score and sweep PGM images.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or format error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kif_core::baseline::{DEFAULT_AMF_MAX_WINDOW, DEFAULT_SMF_WINDOW};
use kif_core::kriging::DEFAULT_RIDGE;
use kif_core::noise::inject_salt_pepper_counted;
use kif_core::sweep::{run_sweep, CSV_HEADER};
use kif_core::variogram::DEFAULT_BIN_WIDTH;
use kif_core::{
    psnr, read_pgm, write_pgm, FilterChoice, FilterConfig, GrayImage, ModelKind, NoiseSpec,
    SweepConfig,
};

#[derive(Debug, Parser)]
#[command(name = "kif", version, about = "Kriging interpolation filter for salt & pepper noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Corrupt a PGM with salt & pepper noise.
    Inject {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Fraction of pixels to corrupt, in [0, 1].
        #[arg(short, long)]
        density: f64,
        /// Share of corrupted pixels set to 255 (the rest become 0).
        #[arg(long, default_value_t = NoiseSpec::DEFAULT_SALT_FRACTION)]
        salt_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Remove impulse noise from a PGM.
    Denoise {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(short, long, value_enum, default_value_t = FilterName::Kif)]
        filter: FilterName,
        #[command(flatten)]
        options: FilterOptions,
    },
    /// Print MSE and PSNR of TEST against REFERENCE.
    Evaluate { reference: PathBuf, test: PathBuf },
    /// Sweep noise densities and filters, writing one CSV row per cell.
    Sweep {
        #[arg(short, long)]
        input: PathBuf,
        /// CSV output path.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FilterName::Kif, FilterName::Smf, FilterName::Amf])]
        filters: Vec<FilterName>,
        /// Noise densities in (0, 1]; defaults to 0.1, 0.2, ..., 0.9.
        #[arg(long, value_delimiter = ',')]
        densities: Vec<f64>,
        /// Base seed; each density uses `seed XOR round(100 * density)`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = NoiseSpec::DEFAULT_SALT_FRACTION)]
        salt_fraction: f64,
        #[command(flatten)]
        options: FilterOptions,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterName {
    Kif,
    Smf,
    Amf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Nugget,
    Linear,
    Exponential,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Nugget => ModelKind::Nugget,
            ModelArg::Linear => ModelKind::Linear,
            ModelArg::Exponential => ModelKind::Exponential,
        }
    }
}

#[derive(Debug, Args)]
struct FilterOptions {
    /// KIF tile size k.
    #[arg(long, default_value_t = 8)]
    window: usize,
    /// KIF variogram model.
    #[arg(long, value_enum, default_value_t = ModelArg::Linear)]
    model: ModelArg,
    /// KIF minimum clean samples before a tile widens its search.
    #[arg(long, default_value_t = 3)]
    min_samples: usize,
    /// KIF maximum number of search expansions.
    #[arg(long, default_value_t = 3)]
    max_expansion: usize,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    bin_width: f64,
    #[arg(long, default_value_t = DEFAULT_RIDGE)]
    ridge: f64,
    /// SMF window (odd).
    #[arg(long, default_value_t = DEFAULT_SMF_WINDOW)]
    smf_window: usize,
    /// AMF maximum window (odd).
    #[arg(long, default_value_t = DEFAULT_AMF_MAX_WINDOW)]
    amf_max_window: usize,
}

impl FilterOptions {
    fn choice(&self, name: FilterName) -> Result<FilterChoice, Failure> {
        let choice = match name {
            FilterName::Kif => FilterChoice::Kif(FilterConfig {
                window_size: self.window,
                model_kind: self.model.into(),
                bin_width: self.bin_width,
                ridge: self.ridge,
                min_samples: self.min_samples,
                max_expansion: self.max_expansion,
            }),
            FilterName::Smf => FilterChoice::Smf {
                window: self.smf_window,
            },
            FilterName::Amf => FilterChoice::Amf {
                max_window: self.amf_max_window,
            },
        };
        choice.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(choice)
    }
}

enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure::Io(format!("{}: {err}", path.display()))
    }
}

fn read_image(path: &Path) -> Result<GrayImage, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::io(path, e))?;
    read_pgm(&bytes).map_err(|e| Failure::io(path, e))
}

fn write_image(path: &Path, image: &GrayImage) -> Result<(), Failure> {
    std::fs::write(path, write_pgm(image)).map_err(|e| Failure::io(path, e))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Inject {
            input,
            output,
            density,
            salt_fraction,
            seed,
        } => {
            let spec = NoiseSpec::new(density, salt_fraction, seed)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let image = read_image(&input)?;
            let (noisy, corrupted) = inject_salt_pepper_counted(&image, &spec);
            write_image(&output, &noisy)?;
            println!("corrupted={corrupted} total={}", image.len());
        }
        Command::Denoise {
            input,
            output,
            filter,
            options,
        } => {
            let choice = options.choice(filter)?;
            let image = read_image(&input)?;
            let start = Instant::now();
            let restored = choice.apply(&image).map_err(|e| Failure::Usage(e.to_string()))?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            write_image(&output, &restored)?;
            println!("filter={choice} wall_time_ms={elapsed:.3}");
        }
        Command::Evaluate { reference, test } => {
            let a = read_image(&reference)?;
            let b = read_image(&test)?;
            let report = psnr(&a, &b).map_err(|e| Failure::Io(e.to_string()))?;
            println!("{report}");
        }
        Command::Sweep {
            input,
            output,
            filters,
            densities,
            seed,
            salt_fraction,
            options,
        } => {
            let cfg = SweepConfig {
                densities: if densities.is_empty() {
                    SweepConfig::default_densities()
                } else {
                    densities
                },
                filters: filters
                    .iter()
                    .map(|&f| options.choice(f))
                    .collect::<Result<_, _>>()?,
                seed,
                salt_fraction,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let image = read_image(&input)?;

            let file = File::create(&output).map_err(|e| Failure::io(&output, e))?;
            let mut csv = BufWriter::new(file);
            writeln!(csv, "{CSV_HEADER}").map_err(|e| Failure::io(&output, e))?;
            let result = run_sweep(&image, &cfg, |row| {
                writeln!(csv, "{}", row.to_csv()).and_then(|_| csv.flush())?;
                eprintln!(
                    "{:>3}% {:<4} psnr={} mse={}",
                    row.density_percent,
                    row.filter,
                    row.quality.psnr_display(),
                    row.quality.mse
                );
                Ok(())
            });
            csv.flush().map_err(|e| Failure::io(&output, e))?;
            result.map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
