//! Command-line front end. `run` is the whole program minus process setup,
//! so tests can drive it in-process.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::limits::{self, Extrapolation};
use crate::qcore::{PrecisionContext, SummationPolicy};
use crate::weights::{ArithmeticWeight, GaussianRational};


pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;
pub const EXIT_INTERRUPTED: i32 = 130;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AccelKind {
    Polynomial,
    Asymptotic,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantName {
    /// Catalan's constant, mod4 weight at s = 2
    Catalan,
    /// Euler's constant through the pole-subtracted path
    Gamma,
    /// zeta(2), trivial weight at s = 2
    Zeta2,
    /// Dirichlet beta(4), mod4 weight at s = 4
    Beta4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    PairVerify,
    PairChain,
    Lvalue,
    Table,
    Constant,
}

#[derive(Parser, Debug)]
#[command(name = "bailey-zeta", version, about = "Bailey pairs and the Bailey-Zeta limit for Dirichlet L-values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a pair definition file
    PairVerify(PairArgs),
    /// Apply Bailey chain steps to a pair definition and verify each output
    PairChain {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        rho1: String,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        rho2: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Extrapolate L(s, chi)/sqrt(pi)
    Lvalue {
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Stream a_n over the schedule, one row per point
    Table {
        #[command(flatten)]
        weight: WeightArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Named constants from the shipped presets
    Constant {
        #[arg(value_enum)]
        name: ConstantName,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Pair definition (TOML)
    definition: PathBuf,
    /// Largest n to check (defaults to the file's depth)
    #[arg(long)]
    depth: Option<usize>,
    /// Truncation order in q (defaults to the file's order)
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeightArgs {
    /// Preset (trivial, alternating, mod4) or JSON descriptor path
    #[arg(long, default_value = "trivial")]
    weight: String,
    /// Exponent as re[+imi]
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    s: String,
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, default_value_t = 64)]
    n0: u64,
    #[arg(long, default_value_t = 2)]
    factor: u64,
    #[arg(long, default_value_t = 7)]
    count: usize,
    /// Mantissa bits of every reported value
    #[arg(long, default_value_t = PrecisionContext::DEFAULT_BITS)]
    precision: u32,
    /// Extrapolation order (number of correction terms)
    #[arg(long, default_value_t = 6)]
    order: usize,
    /// Extrapolation method [default: polynomial, asymptotic for gamma]
    #[arg(long, value_enum)]
    accel: Option<AccelKind>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 4 when the error estimate exceeds this
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker threads for schedule points (results do not depend on it)
    #[arg(long)]
    threads: Option<usize>,
    /// Report elapsed_ms as 0 so that repeated runs are byte-identical
    #[arg(long)]
    no_timings: bool,
    #[arg(long, default_value = "sequential-ascending")]
    summation: SummationPolicy,
}

/// Everything a run depends on, after argument parsing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfiguration {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definition: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<ConstantName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    pub n0: u64,
    pub factor: u64,
    pub count: usize,
    pub precision_bits: u32,
    pub order: usize,
    pub accel: AccelKind,
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub timings: bool,
    pub summation: SummationPolicy,
}

impl RunConfiguration {
    fn base(command: CommandKind) -> Self {
        RunConfiguration {
            command,
            definition: None,
            depth: None,
            truncation_order: None,
            rho1: None,
            rho2: None,
            steps: None,
            constant: None,
            weight: None,
            s: None,
            n0: 64,
            factor: 2,
            count: 7,
            precision_bits: PrecisionContext::DEFAULT_BITS,
            order: 6,
            accel: AccelKind::Polynomial,
            format: OutputFormat::Text,
            out: None,
            tolerance: None,
            threads: None,
            timings: true,
            summation: SummationPolicy::SequentialAscending,
        }
    }

    fn with_pair(mut self, p: PairArgs) -> Self {
        self.definition = Some(p.definition);
        self.depth = p.depth;
        self.truncation_order = p.order;
        self.format = p.format;
        self.out = p.out;
        self
    }

    fn with_engine(mut self, e: EngineArgs, default_accel: AccelKind, default_format: OutputFormat) -> Self {
        self.n0 = e.n0;
        self.factor = e.factor;
        self.count = e.count;
        self.precision_bits = e.precision;
        self.order = e.order;
        self.accel = e.accel.unwrap_or(default_accel);
        self.format = e.format.unwrap_or(default_format);
        self.out = e.out;
        self.tolerance = e.tolerance;
        self.threads = e.threads;
        self.timings = !e.no_timings;
        self.summation = e.summation;
        self
    }

    /// Parses command-line arguments (program name first).
    pub fn from_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        Ok(match cli.command {
            Command::PairVerify(p) => Self::base(CommandKind::PairVerify).with_pair(p),
            Command::PairChain { pair, rho1, rho2, steps } => {
                let mut c = Self::base(CommandKind::PairChain).with_pair(pair);
                c.rho1 = Some(rho1);
                c.rho2 = Some(rho2);
                c.steps = Some(steps);
                c
            }
            Command::Lvalue { weight, engine } => {
                let mut c = Self::base(CommandKind::Lvalue).with_engine(engine, AccelKind::Polynomial, OutputFormat::Text);
                c.weight = Some(weight.weight);
                c.s = Some(weight.s);
                c
            }
            Command::Table { weight, engine } => {
                let mut c = Self::base(CommandKind::Table).with_engine(engine, AccelKind::Polynomial, OutputFormat::Csv);
                c.weight = Some(weight.weight);
                c.s = Some(weight.s);
                c
            }
            Command::Constant { name, engine } => {
                let accel = if name == ConstantName::Gamma { AccelKind::Asymptotic } else { AccelKind::Polynomial };
                let mut c = Self::base(CommandKind::Constant).with_engine(engine, accel, OutputFormat::Text);
                c.constant = Some(name);
                c
            }
        })
    }

    pub fn extrapolation(&self) -> Extrapolation {
        match self.accel {
            AccelKind::Polynomial => Extrapolation::Polynomial { order: self.order },
            AccelKind::Asymptotic => Extrapolation::Asymptotic { terms: self.order },
            AccelKind::None => Extrapolation::None,
        }
    }

    pub fn context(&self) -> Result<PrecisionContext, Error> {
        Ok(PrecisionContext::with_bits(self.precision_bits)?.with_summation(self.summation))
    }

    pub fn schedule(&self) -> Result<Vec<u64>, Error> {
        limits::geometric_schedule(self.n0, self.factor, self.count)
    }

    /// Weight and exponent of an L-value style command.
    pub fn target(&self) -> Result<(ArithmeticWeight, GaussianRational), Error> {
        match (self.command, self.constant) {
            (CommandKind::Constant, Some(ConstantName::Catalan)) => Ok((ArithmeticWeight::mod4(), GaussianRational::from_integer(2))),
            (CommandKind::Constant, Some(ConstantName::Zeta2)) => Ok((ArithmeticWeight::trivial(), GaussianRational::from_integer(2))),
            (CommandKind::Constant, Some(ConstantName::Beta4)) => Ok((ArithmeticWeight::mod4(), GaussianRational::from_integer(4))),
            _ => {
                let w = ArithmeticWeight::resolve(self.weight.as_deref().unwrap_or("trivial"))?;
                let s: GaussianRational = self.s.as_deref().unwrap_or("2").parse()?;
                Ok((w, s))
            }
        }
    }

    /// Rejects inconsistent settings before any computation.
    pub fn validate(&self) -> Result<(), Error> {
        match self.command {
            CommandKind::PairVerify | CommandKind::PairChain => {
                if let Some(r) = &self.rho1 {
                    crate::bailey::parse_monomial(r).map_err(|e| Error::InvalidParameter(format!("rho1: {e}")))?;
                }
                if let Some(r) = &self.rho2 {
                    crate::bailey::parse_monomial(r).map_err(|e| Error::InvalidParameter(format!("rho2: {e}")))?;
                }
                Ok(())
            }
            _ => {
                self.context()?;
                self.schedule()?;
                if self.threads == Some(0) {
                    return Err(Error::InvalidParameter("--threads must be >= 1".into()));
                }
                if let Some(t) = self.tolerance {
                    if t.is_nan() || t < 0.0 {
                        return Err(Error::InvalidParameter("--tolerance must be a nonnegative number".into()));
                    }
                }
                if self.constant == Some(ConstantName::Gamma) {
                    return Ok(());
                }
                let (_, s) = self.target()?;
                if s.re <= 1 {
                    return Err(Error::NotAbsolutelyConvergent(s.re.to_string()));
                }
                if self.command != CommandKind::Table {
                    let needed = self.extrapolation().points_needed();
                    if self.count < needed {
                        return Err(Error::ScheduleTooShort { len: self.count, needed });
                    }
                }
                Ok(())
            }
        }
    }
}

/// Runs the program on `args` and returns its exit status. `interrupt` is
/// polled between schedule points.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send), interrupt: &AtomicBool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfiguration::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    execute(&config, stdout, stderr, interrupt)
}

pub fn execute(config: &RunConfiguration, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send), interrupt: &AtomicBool) -> i32 {
    if let Err(e) = config.validate() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    let mut work = || output::dispatch(config, stdout, stderr, interrupt);
    let code = match config.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => work(),
    };
    if interrupt.load(Ordering::SeqCst) && code == EXIT_OK {
        return EXIT_INTERRUPTED;
    }
    code
}
