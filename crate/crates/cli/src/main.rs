use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use k3gon_cli::commands::{
    cmd_classify, cmd_decompose, cmd_enumerate, cmd_oracle_check, cmd_scan_elms,
};
use k3gon_cli::input::{parse_class, DatumFile};
use k3gon_cli::{render, CliError};

#[derive(Parser)]
#[command(
    name = "k3gon",
    version,
    about = "Gonality and Clifford index of curves on lattice-polarized K3 surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the smooth curves in |L|.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Certificates for the family [[2n,1],[1,-2]], A = (1,0), L = (2,1).
    ScanElms {
        #[arg(long)]
        min: i64,
        #[arg(long)]
        max: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Classes x with x^2 = S and a <= x.L <= b.
    Enumerate {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        square: i64,
        #[arg(long, allow_hyphen_values = true)]
        degree_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        degree_max: i64,
        #[arg(long)]
        primitive: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compare the optimized searches with brute force.
    OracleCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Normalize a decomposition L = M + N (default: the first minimal one).
    Decompose {
        file: PathBuf,
        #[arg(long = "M", allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long = "N", allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn run(cmd: Command) -> Result<String, CliError> {
    Ok(match cmd {
        Command::Classify { file, format } => {
            let r = cmd_classify(&DatumFile::read(&file)?)?;
            match format {
                Format::Json => render::json(&r),
                Format::Text => render::classify_text(&r),
            }
        }
        Command::ScanElms { min, max, format } => {
            let certs = cmd_scan_elms(min, max)?;
            match format {
                Format::Json => render::json_lines(&certs),
                Format::Text => render::scan_text(&certs),
            }
        }
        Command::Enumerate {
            file,
            square,
            degree_min,
            degree_max,
            primitive,
            format,
        } => {
            let r = cmd_enumerate(
                &DatumFile::read(&file)?,
                square,
                degree_min,
                degree_max,
                primitive,
            )?;
            match format {
                Format::Json => render::json(&r),
                Format::Text => render::enumerate_text(&r),
            }
        }
        Command::OracleCheck {
            file,
            seed,
            trials,
            format,
        } => {
            let r = cmd_oracle_check(&DatumFile::read(&file)?, seed, trials)?;
            match format {
                Format::Json => render::json(&r),
                Format::Text => render::oracle_text(&r),
            }
        }
        Command::Decompose { file, m, n, format } => {
            let m = m.as_deref().map(parse_class).transpose()?;
            let n = n.as_deref().map(parse_class).transpose()?;
            let r = cmd_decompose(&DatumFile::read(&file)?, m, n)?;
            match format {
                Format::Json => render::json(&r),
                Format::Text => render::decompose_text(&r),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
