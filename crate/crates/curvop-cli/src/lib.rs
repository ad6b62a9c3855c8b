//! The `curvop` command line: constructions and verification sweeps over
//! explicit truncation windows.

pub mod algebra_file;
pub mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Report;
use curvop::Truncation;
use std::path::PathBuf;

/// Environment variable holding the default window as `A,W,P`.
pub const WINDOW_ENV: &str = "CURVOP_WINDOW";

pub const DEFAULT_WINDOW: Truncation = Truncation { max_arity: 4, max_weight: 5, max_filtration: 3 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "curvop", version, about = "Curved operad constructions and their verification sweeps")]
pub struct Cli {
    /// Largest arity (default from CURVOP_WINDOW, else 4)
    #[arg(long, global = true)]
    pub max_arity: Option<usize>,
    /// Largest tree size (default from CURVOP_WINDOW, else 5)
    #[arg(long, global = true)]
    pub max_weight: Option<usize>,
    /// Largest filtration weight (default from CURVOP_WINDOW, else 3)
    #[arg(long, global = true)]
    pub max_filtration: Option<u32>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Overrides the constant σ in m₁∘₁m₁ = σ(m₂∘₁m₀ − m₂∘₂m₀)
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_sign)]
    pub curvature_sign: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// d_β² = 0 on the bar construction of cAs
    Bar,
    /// d_ω² = [ϑ, −] on the cobar construction of cAs^¡
    Cobar,
    /// The Koszul dual operad cAs^! and its double dual
    KoszulDual,
    /// Syzygy degree 0 homology of B̂cAs and higher syzygy vanishing
    SyzygyH0,
    /// The curved A∞ relations, compared with the cobar of cAs^¡
    AinftyRelations {
        /// A single arity
        #[arg(long)]
        n: Option<usize>,
        /// All arities up to this one (default: max-arity)
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Evaluates the curved A∞ relations on an algebra file
    CheckAinfty {
        file: PathBuf,
        /// Relations up to this arity (default: max-arity)
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Homology of the associated graded of a module file
    GrHomology { file: PathBuf },
    /// Dual generators against the kernel, Δ signs, and relation signs
    VerifySigns,
    /// The bar-cobar counit as a graded quasi-isomorphism
    CounitCheck,
}

fn parse_sign(s: &str) -> Result<i64, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("curvature sign must be 1 or -1, got {s}")),
    }
}

/// Parses `A,W,P`.
pub fn parse_window(s: &str) -> Result<Truncation, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || format!("{WINDOW_ENV} must be A,W,P with natural numbers, got \"{s}\"");
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(Truncation::new(
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

impl Cli {
    /// Flags override the environment default, which overrides (4, 5, 3).
    pub fn window(&self, env: Option<&str>) -> Result<Truncation, String> {
        let base = match env {
            Some(s) => parse_window(s)?,
            None => DEFAULT_WINDOW,
        };
        Ok(Truncation::new(
            self.max_arity.unwrap_or(base.max_arity),
            self.max_weight.unwrap_or(base.max_weight),
            self.max_filtration.unwrap_or(base.max_filtration),
        ))
    }
}

/// Exit status and standard output of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(cli: &Cli, w: Truncation) -> commands::CmdResult {
    let sign = cli.curvature_sign.unwrap_or(curvop::operadcore::CURVATURE_SIGN);
    match &cli.command {
        Command::Bar => commands::bar_cmd(w),
        Command::Cobar => commands::cobar_cmd(w),
        Command::KoszulDual => commands::koszul_dual_cmd(w),
        Command::SyzygyH0 => commands::syzygy_h0_cmd(w),
        Command::AinftyRelations { n, n_max } => commands::ainfty_relations_cmd(w, *n, n_max.unwrap_or(w.max_arity), sign),
        Command::CheckAinfty { file, n_max } => commands::check_ainfty_cmd(w, file, n_max.unwrap_or(w.max_arity)),
        Command::GrHomology { file } => commands::gr_homology_cmd(w, file),
        Command::VerifySigns => commands::verify_signs_cmd(w, sign),
        Command::CounitCheck => commands::counit_check_cmd(w),
    }
}

/// Exit 0 iff every check passed, 1 on a failed check, 2 on bad input.
pub fn run(cli: &Cli, env_window: Option<&str>) -> Outcome {
    let w = match cli.window(env_window) {
        Ok(w) => w,
        Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match dispatch(cli, w) {
        Ok(r) => render(cli.format, &r),
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn render(format: Format, r: &Report) -> Outcome {
    let stdout = match format {
        Format::Text => r.text(),
        Format::Json => r.json(),
    };
    Outcome { code: if r.passed { 0 } else { 1 }, stdout, stderr: String::new() }
}
