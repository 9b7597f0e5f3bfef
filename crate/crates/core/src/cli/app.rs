//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{Overrides, Settings};
use super::dsl::{load_algebra, parse_scalar};
use super::pipelines;
use super::report::{Format, Report};
use crate::error::{Error, Result};
use crate::sim::{InitKind, PlaneWave};
use crate::spectral::SectionSign;

#[derive(Parser, Debug)]
#[command(name = "spinprolong", version, about = "Prolongation analysis of the (2+1)-dimensional Heisenberg spin model")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report format: text or json.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel stencils.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma2: Option<String>,
    #[arg(long, global = true)]
    reduction: Option<String>,
    #[arg(long, global = true)]
    bracket_convention: Option<String>,
    #[arg(long, global = true)]
    bbar_interpretation: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true)]
    dt_safety: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Section the exterior system and check it on solutions.
    EdsVerify,
    /// Determining equations and the open algebra of the general solution.
    Derive,
    /// Jacobi closure of a bracket table.
    AlgebraClose {
        /// Built-in table (table6, i, ii, iii) or a path to a relation file.
        #[arg(long, default_value = "table6")]
        table: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Apply the closing conditions and check the sl(2) quotient.
    CloseSl2 {
        /// Use X1 = X2 = X3 = -(i/2λ) X12 on the full table instead.
        #[arg(long)]
        alternative: bool,
    },
    /// Matrix tower, fundamental-constraint residual and connection.
    Spectral {
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        section_sign: String,
        /// Scalar A (with --b); defaults to the tower's own A, B.
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<String>,
    },
    /// Integrate the model and report residual monitors.
    Simulate {
        #[arg(long, default_value = "plane_wave")]
        init: String,
        #[arg(long, default_value_t = 0.1)]
        t_final: f64,
        /// Write the final field as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Grid-refinement study.
    Convergence {
        #[arg(long, default_value = "plane_wave")]
        init: String,
        #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
        grids: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        t_final: f64,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: impl std::fmt::Display) -> Self {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

fn init_kind(name: &str, seed: u64) -> Result<InitKind> {
    match name {
        "plane_wave" => Ok(InitKind::PlaneWave(PlaneWave::default())),
        _ => InitKind::parse(name, seed),
    }
}

fn settings(c: &Common) -> Result<Settings> {
    let file = match &c.config {
        Some(p) => Some(Overrides::from_toml(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let mut flags = Overrides::default();
    flags.set("gamma2", c.gamma2.as_ref());
    flags.set("reduction", c.reduction.as_ref());
    flags.set("bracket_convention", c.bracket_convention.as_ref());
    flags.set("bbar_interpretation", c.bbar_interpretation.as_ref());
    flags.set("seed", c.seed);
    flags.set("grid", c.grid);
    flags.set("dt_safety", c.dt_safety);
    Settings::resolve(file.as_ref(), &flags)
}

fn dispatch(cmd: &Cmd, s: &Settings) -> Result<Report> {
    match cmd {
        Cmd::EdsVerify => pipelines::eds_verify(s),
        Cmd::Derive => pipelines::derive(s),
        Cmd::AlgebraClose { table, depth } => {
            let spec = match pipelines::builtin_table(table) {
                Some(t) => load_algebra(t)?,
                None => load_algebra(&std::fs::read_to_string(table)?)?,
            };
            let mut r = pipelines::algebra_close(s, &spec, *depth)?;
            r.config.insert("table".into(), table.clone());
            Ok(r)
        }
        Cmd::CloseSl2 { alternative } => pipelines::close_sl2(s, *alternative),
        Cmd::Spectral { section_sign, a, b } => {
            let sign: SectionSign = section_sign.parse()?;
            let ab = match (a, b) {
                (Some(a), Some(b)) => Some((parse_scalar(a)?, parse_scalar(b)?)),
                _ => None,
            };
            pipelines::spectral(s, sign, ab)
        }
        Cmd::Simulate { init, t_final, csv } => {
            let (r, f) = pipelines::simulate(s, &init_kind(init, s.seed)?, *t_final)?;
            if let Some(path) = csv {
                std::fs::write(path, f.to_csv())?;
            }
            Ok(r)
        }
        Cmd::Convergence { init, grids, t_final } => {
            pipelines::convergence(s, &init_kind(init, s.seed)?, grids, *t_final)
        }
    }
}

fn execute(cli: &Cli) -> Result<(Report, Format)> {
    let format: Format = cli.common.format.parse()?;
    let s = settings(&cli.common)?;
    let r = match cli.common.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            pool.install(|| dispatch(&cli.cmd, &s))?
        }
        None => dispatch(&cli.cmd, &s)?,
    };
    Ok((r, format))
}

/// Parse `argv` (including the program name), run, and render.
/// Exit codes: 0 all sections pass, 2 some section failed, 1 usage or input error.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (r, format) = match execute(&cli) {
        Ok(x) => x,
        Err(e) => return Outcome::error(e),
    };
    let body = r.emit(format);
    let code = if r.passed() { 0 } else { 2 };
    match &cli.common.out {
        Some(p) => match std::fs::write(p, &body) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::error(e),
        },
        None => Outcome { code, stdout: body, stderr: String::new() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flag_is_usage_error() {
        let o = run(["spinprolong", "derive", "--bogus"]);
        assert_eq!(o.code, 1);
        assert!(o.stdout.is_empty());
    }

    #[test]
    fn negative_gamma_accepted() {
        let o = run(["spinprolong", "eds-verify", "--gamma2", "-1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("config.gamma2 = -1"));
    }

    #[test]
    fn bad_table_is_parse_error() {
        let dir = std::env::temp_dir().join("spinprolong-app-test.alg");
        std::fs::write(&dir, "[X1 X4] = X6\n").unwrap();
        let o = run(["spinprolong", "algebra-close", "--table", dir.to_str().unwrap()]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("line 1, column 5"), "{}", o.stderr);
    }
}
