//! The `subsol` command line.
//!
//! Settings are resolved as defaults, then `SUBSOL_OUT_DIR`, then a
//! `--config` file of `key = value` lines, then flags.
//!
//! Exit codes: `0` success, `1` a verification check failed, `2` invalid
//! input or any other error.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{Format, RunConfig};

use crate::error::Result;
use crate::series::{write_atomic, FigureSeries};

#[derive(Debug, Parser)]
#[command(name = "subsol", version, about = "Self-similar subsolutions around power-law vortices")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Default, clap::Args)]
pub struct Flags {
    /// Power-law exponent, 0 < alpha < 2.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Ansatz exponent b >= 0.
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Override the log coefficient a of the ansatz.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Truncation radius.
    #[arg(long, global = true)]
    pub r0: Option<f64>,
    /// Initial energy (default: energy of the truncated vortex).
    #[arg(long, global = true)]
    pub e0: Option<f64>,
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Number of grid points.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Output directory (default: $SUBSOL_OUT_DIR or ./out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    pub tol_quad: Option<f64>,
    /// Threshold on finite-difference residuals.
    #[arg(long, global = true)]
    pub tol_fd: Option<f64>,
    /// Dissipation fraction of the point vortex, 0 < beta <= 1.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Logarithmic y axis in SVG output.
    #[arg(long, global = true)]
    pub log_y: bool,
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check both conditions, residuals and closed forms; write verify.json.
    Verify,
    /// Write the profile, its admissibility report and field samples.
    Construct,
    /// Regenerate figure 1, 2 or 3.
    Figures {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
    },
    /// Sweep the ansatz exponent b over [0, 10].
    Sweep,
    /// Energy and dissipation rate on (0, T].
    Energy,
    /// Finite-difference residuals under step halving.
    Residuals,
    /// Point-vortex rate and energy.
    PointVortex,
}

impl Flags {
    /// Resolves the run configuration.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::from_env();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        take!(alpha, b, r0, steps, format, tol_quad, tol_fd, beta);
        if self.a.is_some() {
            cfg.a = self.a;
        }
        if self.e0.is_some() {
            cfg.e0 = self.e0;
        }
        if self.t_min.is_some() {
            cfg.t_min = self.t_min;
        }
        if self.t_max.is_some() {
            cfg.t_max = self.t_max;
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        cfg.log_y |= self.log_y;
        Ok(cfg)
    }
}

/// Writes `series` in the configured format under `stem`.
pub fn write_series(cfg: &RunConfig, stem: &str, series: &FigureSeries) -> Result<PathBuf> {
    let path = cfg.out_path(stem);
    let body = match cfg.format {
        Format::Csv => series.to_csv(),
        Format::Json => series.to_json()?,
        Format::Svg => series.to_svg(cfg.log_y),
    };
    write_atomic(&path, &body)?;
    Ok(path)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, &s)
}

/// Runs `command`; returns whether every check passed and the files written.
pub fn execute(command: &Command, cfg: &RunConfig) -> Result<(bool, Vec<PathBuf>)> {
    let mut written = Vec::new();
    let mut pass = true;
    match command {
        Command::Verify => {
            let report = commands::verify(cfg)?;
            for c in &report.checks {
                println!(
                    "[{}] {:<32} {:>12.4e} {} {:.1e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.relation,
                    c.threshold
                );
            }
            let path = cfg.output_dir.join("verify.json");
            write_json(&path, &report)?;
            written.push(path);
            pass = report.pass;
        }
        Command::Construct => {
            let built = commands::construct(cfg)?;
            let dir = &cfg.output_dir;
            write_json(&dir.join("profile.json"), &built.profile)?;
            write_json(&dir.join("admissibility.json"), &built.report)?;
            write_atomic(&dir.join("profile.csv"), &built.profile_table.to_csv())?;
            write_atomic(&dir.join("fields.csv"), &built.fields_csv)?;
            for f in ["profile.json", "admissibility.json", "profile.csv", "fields.csv"] {
                written.push(dir.join(f));
            }
        }
        Command::Figures { which } => {
            let s = commands::figure(*which, cfg)?;
            written.push(write_series(cfg, &format!("fig{which}"), &s)?);
        }
        Command::Sweep => {
            let result = commands::sweep(cfg)?;
            let path = cfg.out_path("sweep");
            match cfg.format {
                Format::Csv => write_atomic(&path, &result.to_csv())?,
                Format::Json => write_json(&path, &result)?,
                Format::Svg => write_atomic(&path, &commands::sweep_series(&result).to_svg(cfg.log_y))?,
            }
            if let (Some(b), Some(pf)) = (result.b_refined, result.prefactor_refined) {
                println!("best admissible b = {b:.10} (prefactor {pf:.10e})");
            }
            if let Some(b) = result.first_inadmissible_b {
                println!("first inadmissible b = {b}");
            }
            written.push(path);
        }
        Command::Energy => written.push(write_series(cfg, "energy", &commands::energy(cfg)?)?),
        Command::Residuals => written.push(write_series(cfg, "residuals", &commands::residuals(cfg)?)?),
        Command::PointVortex => {
            written.push(write_series(cfg, "point_vortex", &commands::point_vortex_series(cfg)?)?)
        }
    }
    Ok((pass, written))
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = cli.flags.resolve().and_then(|cfg| execute(&cli.command, &cfg));
    match outcome {
        Ok((pass, written)) => {
            for p in written {
                println!("wrote {}", p.display());
            }
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

