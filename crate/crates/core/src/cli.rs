//! Command-line front end. [`run`] takes explicit output streams and returns
//! the process exit code so the whole interface can be driven from tests.
//!
//! Exit codes: 0 success or consistent verdict, 1 inconsistent verdict,
//! 2 usage or configuration error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::diagnostics::cyclicity_rank_with_tolerance;
use crate::error::{Error, Result};
use crate::frame::{frame_bounds_with_tolerance, frame_section, gram};
use crate::json::{complex_value, to_canonical_string};
use crate::orbit::{decay_profile, orbit};
use crate::symbol::{innerness_test, Evaluation};
use crate::verify::{verify, PropositionId, Verdict, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "h2frames", version, about = "Frames from operator orbits on the Hardy space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orbit norm profile with truncation flags.
    Orbit(Common),
    /// Extremal eigenvalues of the finite frame-operator section.
    FrameBounds(Common),
    /// Gram matrix of the orbit.
    Gram(Common),
    /// Boundary-modulus test of the symbol.
    Innerness(Common),
    /// Numerical span rank of the orbit.
    Cyclicity(Common),
    /// Run one verification suite.
    Verify {
        /// P1, P2, P3, P4i, P4ii, Ex_constant, Ex_half_shift, Ex_3_1 or P6.
        proposition: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run every suite in a directory of `<id>.json` configs.
    ReportAll {
        config_dir: PathBuf,
        /// Output directory; defaults to `<config_dir>/reports`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides the truncation order N.
    #[arg(long)]
    truncation: Option<usize>,
    /// Overrides the orbit length K.
    #[arg(long = "orbit-len")]
    orbit_len: Option<usize>,
    /// Overrides the boundary grid size M.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

struct Prepared {
    cfg: ExperimentConfig,
    format: OutputFormat,
    out: Option<PathBuf>,
}

impl Common {
    fn prepare(&self) -> Result<Prepared> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(n) = self.truncation {
            cfg.truncation_order = n;
        }
        if let Some(k) = self.orbit_len {
            cfg.orbit_length = k;
        }
        if let Some(m) = self.grid {
            cfg.boundary_grid = Some(m);
        }
        cfg.validate()?;
        let format = match self.format {
            Some(Format::Json) => OutputFormat::Json,
            Some(Format::Csv) => OutputFormat::Csv,
            None => cfg.output.format,
        };
        let out = self.out.clone().or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
        Ok(Prepared { cfg, format, out })
    }
}

/// Entry per suite in the `report-all` summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub proposition: PropositionId,
    pub verdict: Verdict,
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportIndex {
    pub reports: Vec<IndexEntry>,
    pub inconsistent: usize,
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Computation(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Orbit(c) => emit(&c.prepare()?, stdout, orbit_output),
        Command::FrameBounds(c) => emit(&c.prepare()?, stdout, frame_bounds_output),
        Command::Gram(c) => emit(&c.prepare()?, stdout, gram_output),
        Command::Innerness(c) => emit(&c.prepare()?, stdout, innerness_output),
        Command::Cyclicity(c) => emit(&c.prepare()?, stdout, cyclicity_output),
        Command::Verify { proposition, common } => {
            let id: PropositionId = proposition.parse()?;
            let p = common.prepare()?;
            let report = verify(id, &p.cfg)?;
            let text = match p.format {
                OutputFormat::Json => to_canonical_string(&report)?,
                OutputFormat::Csv => format!("proposition,verdict\n{},{}\n", id, verdict_str(report.verdict)),
            };
            write_output(p.out.as_deref(), &text, stdout)?;
            Ok(if report.verdict == Verdict::Inconsistent { EXIT_INCONSISTENT } else { EXIT_OK })
        }
        Command::ReportAll { config_dir, out } => report_all(&config_dir, out.as_deref(), stdout),
    }
}

fn emit(p: &Prepared, stdout: &mut dyn Write, f: fn(&ExperimentConfig, OutputFormat) -> Result<String>) -> Result<i32> {
    let text = f(&p.cfg, p.format)?;
    write_output(p.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::Inconsistent => "inconsistent",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn csv_float(x: f64) -> String {
    format!("{x:?}")
}

fn orbit_output(cfg: &ExperimentConfig, format: OutputFormat) -> Result<String> {
    let orb = orbit(&cfg.realize_symbol()?, &cfg.seed()?, cfg.orbit_length, cfg.truncation_order);
    match format {
        OutputFormat::Csv => {
            let mut s = String::from("n,norm,truncated\n");
            for (i, (norm, t)) in orb.norms.iter().zip(&orb.truncated).enumerate() {
                let _ = writeln!(s, "{i},{},{t}", csv_float(*norm));
            }
            Ok(s)
        }
        OutputFormat::Json => to_canonical_string(&json!({
            "N": orb.order,
            "K": orb.max_power(),
            "norms": orb.norms,
            "truncated": orb.truncated,
            "decay": decay_profile(&orb).ok(),
        })),
    }
}

fn frame_bounds_output(cfg: &ExperimentConfig, format: OutputFormat) -> Result<String> {
    let orb = orbit(&cfg.realize_symbol()?, &cfg.seed()?, cfg.orbit_length, cfg.truncation_order);
    let fb = frame_bounds_with_tolerance(&frame_section(&orb), cfg.tolerances.eig_tol)?;
    match format {
        OutputFormat::Csv => Ok(format!(
            "N,K,A_est,B_est,tight,numerically_zero_lower\n{},{},{},{},{},{}\n",
            fb.n,
            fb.k,
            csv_float(fb.a_est),
            csv_float(fb.b_est),
            fb.tight,
            fb.numerically_zero_lower
        )),
        OutputFormat::Json => to_canonical_string(&fb),
    }
}

fn gram_output(cfg: &ExperimentConfig, format: OutputFormat) -> Result<String> {
    let orb = orbit(&cfg.realize_symbol()?, &cfg.seed()?, cfg.orbit_length, cfg.truncation_order);
    let g = gram(&orb).entries;
    match format {
        OutputFormat::Csv => {
            let mut s = String::from("m,n,re,im\n");
            for m in 0..g.nrows() {
                for n in 0..g.ncols() {
                    let _ = writeln!(s, "{m},{n},{},{}", csv_float(g[(m, n)].re), csv_float(g[(m, n)].im));
                }
            }
            Ok(s)
        }
        OutputFormat::Json => {
            let rows: Vec<Vec<_>> = (0..g.nrows()).map(|m| (0..g.ncols()).map(|n| complex_value(g[(m, n)])).collect()).collect();
            to_canonical_string(&json!({ "N": orb.order, "K": orb.max_power(), "entries": rows }))
        }
    }
}

fn innerness_output(cfg: &ExperimentConfig, format: OutputFormat) -> Result<String> {
    let r = innerness_test(&cfg.realize_symbol()?, &cfg.grid()?, Evaluation::Exact, Some(cfg.tolerances.inner_tol))?;
    match format {
        OutputFormat::Csv => {
            let verdict = serde_json::to_value(r.verdict).map_err(|e| Error::Io(e.to_string()))?;
            Ok(format!(
                "max_deviation,sub_unit_fraction,verdict,tolerance,grid_size\n{},{},{},{},{}\n",
                csv_float(r.max_deviation),
                csv_float(r.sub_unit_fraction),
                verdict.as_str().unwrap_or_default(),
                csv_float(r.tolerance),
                r.grid_size
            ))
        }
        OutputFormat::Json => to_canonical_string(&r),
    }
}

fn cyclicity_output(cfg: &ExperimentConfig, format: OutputFormat) -> Result<String> {
    let orb = orbit(&cfg.realize_symbol()?, &cfg.seed()?, cfg.orbit_length, cfg.truncation_order);
    let r = cyclicity_rank_with_tolerance(&orb, cfg.tolerances.rank_tol)?;
    match format {
        OutputFormat::Csv => {
            let mut s = String::from("index,singular_value\n");
            for (i, v) in r.singular_values.iter().enumerate() {
                let _ = writeln!(s, "{i},{}", csv_float(*v));
            }
            Ok(s)
        }
        OutputFormat::Json => to_canonical_string(&r),
    }
}

/// Runs every `<id>.json` in `dir`, writes `<id>.json` reports and
/// `index.json` to the output directory, and prints the index.
pub fn report_all(dir: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let mut jobs = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Usage(format!("cannot read {}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let id: PropositionId = stem.parse()?;
            jobs.push((id, path));
        }
    }
    if jobs.is_empty() {
        return Err(Error::Usage(format!("no configs found in {}", dir.display())));
    }
    jobs.sort();
    let configs = jobs
        .into_iter()
        .map(|(id, path)| ExperimentConfig::load(&path).map(|c| (id, c)))
        .collect::<Result<Vec<_>>>()?;
    let reports: Vec<VerificationReport> =
        configs.par_iter().map(|(id, cfg)| verify(*id, cfg)).collect::<Result<Vec<_>>>()?;

    let out_dir = out.map(Path::to_path_buf).unwrap_or_else(|| dir.join("reports"));
    std::fs::create_dir_all(&out_dir)?;
    let mut index = ReportIndex { reports: Vec::new(), inconsistent: 0 };
    for r in &reports {
        let file = format!("{}.json", r.proposition);
        std::fs::write(out_dir.join(&file), to_canonical_string(r)?)?;
        let note = ["tension_note", "note"].iter().find_map(|k| r.evidence[*k].as_str().map(str::to_string));
        index.inconsistent += usize::from(r.verdict == Verdict::Inconsistent);
        index.reports.push(IndexEntry { proposition: r.proposition, verdict: r.verdict, file, note });
    }
    let text = to_canonical_string(&index)?;
    std::fs::write(out_dir.join("index.json"), &text)?;
    stdout.write_all(text.as_bytes())?;
    Ok(if index.inconsistent > 0 { EXIT_INCONSISTENT } else { EXIT_OK })
}
