use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use planeinv::commands::{cmd_check, cmd_generate, cmd_invert, cmd_selftest};
use planeinv::commands::{GenerateArgs, SelftestArgs};
use planeinv::parse::parse_poly;
use planeinv::report::{Report, EXIT_INVALID_INPUT};
use planeinv_core::Rational;
use std::process::exit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Parser)]
#[command(
    name = "planeinv",
    version,
    about = "Check and invert plane polynomial maps whose degree set has pairwise-distinct sums",
    after_help = "Exit codes: 0 pass, 2 degree set not scattered, 3 Jacobian not a nonzero \
constant, 4 parse or spec error, 5 internal inconsistency."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the scattered condition, the Jacobian, and the forced
    /// coefficient structure of the map in FILE.
    Check {
        /// Input file with bindings "f = ..." and "g = ..."
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the checks, then synthesize and verify the polynomial inverse.
    Invert {
        /// Input file with bindings "f = ..." and "g = ..."
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a random invertible map (as an input file) with its inverse.
    Generate {
        /// Comma-separated degree set; must contain 1 and be scattered
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u32>,
        /// Normal-form case: 1, 2, or 3
        #[arg(long, default_value_t = 1)]
        case: u8,
        /// Coefficients are drawn with numerator and denominator up to this
        #[arg(long, default_value_t = 100)]
        coeff_bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Post-compose with the linear map [a, b; c, d]: four comma-separated
        /// rationals, row-major
        #[arg(long, value_delimiter = ',', value_name = "a,b,c,d")]
        twist: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate random maps and re-derive their inverses two independent
    /// ways, checking every identity along the way.
    Selftest {
        #[arg(long, default_value_t = 20)]
        count: u32,
        /// Largest degree allowed in the random degree sets
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        #[arg(long, default_value_t = 100)]
        coeff_bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation degree for the power-series cross-check (default: max
        /// degree + 2; values below max degree + 1 are raised to it)
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Structured)]
        format: Format,
    },
}

fn emit(report: Report, format: Format) -> ! {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Structured => print!("{}", report.to_json()),
    }
    exit(report.exit_code())
}

fn parse_twist(raw: &[String]) -> Result<[Rational; 4], String> {
    if raw.len() != 4 {
        return Err(format!("--twist needs four entries a,b,c,d, got {}", raw.len()));
    }
    let mut entries = Vec::with_capacity(4);
    for s in raw {
        let p = parse_poly(s).map_err(|e| format!("twist entry '{}': {}", s, e))?;
        if p.total_degree().unwrap_or(0) > 0 {
            return Err(format!("twist entry '{}' is not a rational constant", s));
        }
        entries.push(p.constant_term());
    }
    Ok([entries[0].clone(), entries[1].clone(), entries[2].clone(), entries[3].clone()])
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{}", e);
            exit(0);
        }
        Err(e) => {
            eprint!("{}", e);
            exit(EXIT_INVALID_INPUT);
        }
    };
    match cli.cmd {
        Cmd::Check { file, format } => emit(cmd_check(&file), format),
        Cmd::Invert { file, format } => emit(cmd_invert(&file), format),
        Cmd::Generate { degrees, case, coeff_bound, seed, twist, format } => {
            let twist = match twist.as_deref().map(parse_twist).transpose() {
                Ok(t) => t,
                Err(msg) => {
                    eprintln!("{}", msg);
                    exit(EXIT_INVALID_INPUT);
                }
            };
            let args = GenerateArgs { degrees, case, coefficient_bound: coeff_bound, seed, twist };
            emit(cmd_generate(&args), format)
        }
        Cmd::Selftest { count, max_degree, coeff_bound, seed, bound, format } => {
            let args = SelftestArgs {
                count,
                max_degree,
                coefficient_bound: coeff_bound,
                seed,
                series_bound: bound,
            };
            emit(cmd_selftest(&args), format)
        }
    }
}
