//! Command-line front end.
//!
//! Each subcommand reads Φ (matrix CSV) and sequences (sequence CSV), calls
//! the library, and writes CSV or JSON. Errors go to standard error as a JSON
//! object and select the exit status: 2 for input and precondition errors,
//! 3 for numeric and classification errors, 4 when a sequence fails the
//! recursion.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::flows::{flow_scale, verify_recursion, FlowDecomposition, SupportInfo, VarModel};
use crate::io;
use crate::linalg::Subset;
use crate::oracles::subexponential_diagnostic;
use crate::seq::TimeWindowSequence;
use crate::{Error, Matrix, Result, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "arflow", version, about = "Solution sets of x_t = Φ x_(t−1) + ε_t by spectral projection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster and classify the eigenvalues of Φ.
    Classify {
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Split a solution x into its six flows and recover its initial conditions.
    Decompose {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        eps: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build the solution with given innovations and initial conditions.
    Synthesize {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        eps: PathBuf,
        /// JSON file `{"v_forward": [..], "v_backward": [..], "v_outward": [..]}`.
        #[arg(long)]
        initial: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check x_t = Φ x_(t−1) + ε_t on the window.
    Verify {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        eps: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Drazin inverse of Φ.
    Drazin {
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Spectral projector of Φ onto zero, forward, stable, backward, unit or frequency:θ.
    Project {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        subset: String,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-window growth diagnostic of a sequence.
    Diagnose {
        #[arg(long)]
        eps: PathBuf,
        /// Radii in (0, 1).
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.99")]
        r: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// ε vanishes outside its observed support; every flow is exact.
    Compact,
    /// ε decays; infinite sums are truncated.
    Decay,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "compact")]
    pub mode: Mode,
    /// Restrict (or zero-extend ε to) a window; must contain 0.
    #[arg(long, allow_hyphen_values = true, requires = "t_max")]
    pub t_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "t_min")]
    pub t_max: Option<i64>,
    /// Directory for output files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol_unit: Option<f64>,
    #[arg(long)]
    pub tol_cluster: Option<f64>,
    #[arg(long)]
    pub tol_proj: Option<f64>,
    #[arg(long)]
    pub tol_nilp: Option<f64>,
    #[arg(long)]
    pub tol_drazin: Option<f64>,
    #[arg(long)]
    pub tol_imag: Option<f64>,
    #[arg(long)]
    pub tol_flow: Option<f64>,
    #[arg(long)]
    pub tol_trunc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Classify,
    Decompose,
    Synthesize,
    Verify,
    Drazin,
    Project(Subset),
    Diagnose(Vec<f64>),
}

/// Everything a run needs, resolved from the command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub phi: Option<PathBuf>,
    pub eps: Option<PathBuf>,
    pub x: Option<PathBuf>,
    pub initial: Option<PathBuf>,
    pub window: Option<(i64, i64)>,
    pub tolerances: Tolerances,
    pub mode: Mode,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(task: Task) -> Self {
        RunConfig {
            task,
            phi: None,
            eps: None,
            x: None,
            initial: None,
            window: None,
            tolerances: Tolerances::default(),
            mode: Mode::Compact,
            out: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (task, phi, eps, x, initial, common) = match cli.command {
            Command::Classify { phi, common } => (Task::Classify, Some(phi), None, None, None, common),
            Command::Decompose { phi, eps, x, common } => (Task::Decompose, Some(phi), Some(eps), Some(x), None, common),
            Command::Synthesize { phi, eps, initial, common } => {
                (Task::Synthesize, Some(phi), Some(eps), None, Some(initial), common)
            }
            Command::Verify { phi, eps, x, common } => (Task::Verify, Some(phi), Some(eps), Some(x), None, common),
            Command::Drazin { phi, common } => (Task::Drazin, Some(phi), None, None, None, common),
            Command::Project { phi, subset, common } => {
                (Task::Project(parse_subset(&subset)?), Some(phi), None, None, None, common)
            }
            Command::Diagnose { eps, r, common } => (Task::Diagnose(r), None, Some(eps), None, None, common),
        };
        let d = Tolerances::default();
        let tolerances = Tolerances {
            unit: common.tol_unit.unwrap_or(d.unit),
            cluster: common.tol_cluster.unwrap_or(d.cluster),
            proj: common.tol_proj.unwrap_or(d.proj),
            nilp: common.tol_nilp.unwrap_or(d.nilp),
            drazin: common.tol_drazin.unwrap_or(d.drazin),
            imag: common.tol_imag.unwrap_or(d.imag),
            flow: common.tol_flow.unwrap_or(d.flow),
            trunc: common.tol_trunc.unwrap_or(d.trunc),
        };
        Ok(RunConfig {
            task,
            phi,
            eps,
            x,
            initial,
            window: common.t_min.zip(common.t_max),
            tolerances,
            mode: common.mode,
            out: common.out,
        })
    }

    fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if let Some((lo, hi)) = self.window {
            if !(lo <= 0 && 0 <= hi) {
                return Err(Error::Input(format!("window [{lo}, {hi}] must contain t = 0")));
            }
        }
        for p in [&self.phi, &self.eps, &self.x, &self.initial].into_iter().flatten() {
            if !p.is_file() {
                return Err(Error::Input(format!("{} does not exist", p.display())));
            }
        }
        Ok(())
    }
}

/// `zero | forward | stable | backward | unit | frequency:θ`
pub fn parse_subset(s: &str) -> Result<Subset> {
    Ok(match s {
        "zero" => Subset::Zero,
        "forward" => Subset::Forward,
        "stable" => Subset::Stable,
        "backward" => Subset::Backward,
        "unit" => Subset::Unit,
        _ => match s.strip_prefix("frequency:") {
            Some(t) => Subset::Frequency(
                t.trim()
                    .parse()
                    .map_err(|_| Error::Input(format!("bad frequency '{t}'")))?,
            ),
            None => {
                return Err(Error::Input(format!(
                    "unknown subset '{s}'; expected zero, forward, stable, backward, unit or frequency:θ"
                )))
            }
        },
    })
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Input(format!("--{flag} is required")))
}

fn support(mode: Mode, eps: &TimeWindowSequence) -> SupportInfo {
    match mode {
        Mode::Compact => SupportInfo::compact(eps),
        Mode::Decay => SupportInfo::decay(eps),
    }
}

fn crop(x: TimeWindowSequence, window: Option<(i64, i64)>) -> Result<TimeWindowSequence> {
    match window {
        None => Ok(x),
        Some((lo, hi)) if x.t_min() <= lo && hi <= x.t_max() => x.rewindow(lo, hi),
        Some((lo, hi)) => Err(Error::Input(format!(
            "window [{lo}, {hi}] is not inside the x window [{}, {}]",
            x.t_min(),
            x.t_max()
        ))),
    }
}

fn extend(eps: TimeWindowSequence, window: Option<(i64, i64)>) -> Result<TimeWindowSequence> {
    match window {
        None => Ok(eps),
        Some((lo, hi)) => eps.rewindow(lo, hi),
    }
}

fn write_output(out: &Option<PathBuf>, name: &str, contents: &str) -> Result<()> {
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        io::write_file(&dir.join(name), contents)?;
    }
    Ok(())
}

fn real_csv(m: &Matrix, tol: &Tolerances) -> Result<String> {
    Ok(io::format_matrix_csv(&m.coerce_real(tol.imag)?.real_part()))
}

/// Writes `<flow>.csv` for each of the six flows and `summary.json` into `dir`.
pub fn emit_report(dec: &FlowDecomposition, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::with_capacity(7);
    for (name, flow) in dec.flows() {
        let path = dir.join(format!("{name}.csv"));
        io::write_file(&path, &io::format_sequence_csv(flow)?)?;
        written.push(path);
    }
    let path = dir.join("summary.json");
    io::write_file(&path, &io::to_json_string(&io::summary_json(dec)))?;
    written.push(path);
    Ok(written)
}

/// Executes one command; returns what belongs on standard output.
pub fn run(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let tol = &config.tolerances;
    let phi = || io::read_matrix(required(&config.phi, "phi")?);
    let eps = || extend(io::read_sequence(required(&config.eps, "eps")?)?, config.window);
    let x = || crop(io::read_sequence(required(&config.x, "x")?)?, config.window);

    match &config.task {
        Task::Classify => {
            let model = VarModel::new(&phi()?, tol)?;
            let text = io::to_json_string(&io::classification_json(model.classification(), tol));
            write_output(&config.out, "classification.json", &text)?;
            Ok(text)
        }
        Task::Decompose => {
            let model = VarModel::new(&phi()?, tol)?;
            let (eps, x) = (eps()?, x()?);
            let dec = model.decompose(&x, &eps, &support(config.mode, &eps))?;
            emit_report(&dec, config.out.as_deref().unwrap_or(Path::new(".")))?;
            Ok(io::to_json_string(&io::summary_json(&dec)))
        }
        Task::Synthesize => {
            let model = VarModel::new(&phi()?, tol)?;
            let eps = eps()?;
            let initial = io::parse_initial_conditions(&io::read_to_string(required(&config.initial, "initial")?)?)?;
            let x = model.synthesize(&eps, &initial, &support(config.mode, &eps))?;
            let text = io::format_sequence_csv(&x)?;
            write_output(&config.out, "x.csv", &text)?;
            Ok(text)
        }
        Task::Verify => {
            let phi = phi()?;
            let (eps, x) = (eps()?, x()?);
            let rep = verify_recursion(&phi, &x, &eps)?;
            let tolerance = tol.flow_abs(flow_scale(&phi, &[&x, &eps]));
            rep.check(tolerance)?;
            let text = io::to_json_string(&io::recursion_json(&rep, tolerance));
            write_output(&config.out, "verify.json", &text)?;
            Ok(text)
        }
        Task::Drazin => {
            let model = VarModel::new(&phi()?, tol)?;
            let text = real_csv(model.drazin(), tol)?;
            write_output(&config.out, "drazin.csv", &text)?;
            Ok(text)
        }
        Task::Project(subset) => {
            let model = VarModel::new(&phi()?, tol)?;
            let p = model
                .decomposition()
                .projector(model.classification(), subset.clone())?;
            let text = real_csv(&p.matrix, tol)?;
            write_output(&config.out, "projector.csv", &text)?;
            Ok(text)
        }
        Task::Diagnose(r_grid) => {
            let rep = subexponential_diagnostic(&eps()?, r_grid)?;
            let text = io::to_json_string(&io::diagnostic_json(&rep));
            write_output(&config.out, "diagnostic.json", &text)?;
            Ok(text)
        }
    }
}

/// Parses `args`, runs, prints, and returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => return fail(&Error::Input(e.to_string().trim_end().to_owned())),
    };
    match RunConfig::from_cli(cli).and_then(|c| run(&c)) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> i32 {
    eprint!("{}", io::to_json_string(&io::error_json(e)));
    e.exit_code()
}
