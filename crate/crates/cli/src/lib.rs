//! Batch command-line interface: channel validation, quantity tables, rate regions,
//! sweeps, the classical Neyman–Pearson oracle and polytope projection.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use oneshot_core::bundled;
use oneshot_core::channel::{
    control_state_hk, control_state_t1, load_channel_file, ChannelSpec, InputDistribution,
};
use oneshot_core::entropic::{
    classical_np_oracle, CqState, DeltaChoice, Smoothing, SmoothingStrategy, ToleranceParams,
};
use oneshot_core::error::Error;
use oneshot_core::operator::DistanceConvention;
use oneshot_core::region::{
    format_number, fourier_motzkin, region_for, sweep_union, vertices_2d, vertices_csv, Evaluator,
    PenaltyMode, RatePolytope, RegionConfig, RegionReport, SweepSpec, TermKind, TheoremSelector,
};
use oneshot_core::secrecy::{secrecy_section, SecrecyThresholds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

/// Prefix selecting a channel shipped with the library instead of a file.
pub const BUNDLED_PREFIX: &str = "bundled:";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_parse() => EXIT_PARSE,
            CliError::Usage(_) => EXIT_PARSE,
            _ => EXIT_INVALID,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "oneshot", version, about = "One-shot divergences and secrecy rate regions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a channel file and print its diagnostics.
    Validate {
        /// Channel JSON file, or `bundled:NAME`.
        channel: String,
        /// Optional input distribution checked against the channel.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// Table of information quantities for register groupings.
    Quantities(QuantitiesArgs),
    /// Rate region report (JSON) and vertex list (CSV).
    Region(RegionArgs),
    /// Frontier of the union of regions over a grid of input distributions.
    Sweep(SweepArgs),
    /// Exact classical hypothesis-testing divergence of two probability vectors.
    OracleNp {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long)]
        eps: f64,
    },
    /// Project a polytope file onto the variables not eliminated.
    Fm {
        /// Polytope JSON file.
        #[arg(long)]
        polytope: PathBuf,
        /// Comma-separated variable names to eliminate.
        #[arg(long, value_delimiter = ',')]
        eliminate: Vec<String>,
        /// Output file for the projected polytope; standard output otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Vertex CSV of a two-variable result.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    T1,
    Conjecture,
    T2,
    HkNosecrecy,
    Qmac,
}

impl From<TheoremArg> for TheoremSelector {
    fn from(t: TheoremArg) -> Self {
        match t {
            TheoremArg::T1 => TheoremSelector::T1,
            TheoremArg::Conjecture => TheoremSelector::Conjecture,
            TheoremArg::T2 => TheoremSelector::T2,
            TheoremArg::HkNosecrecy => TheoremSelector::HkNosecrecy,
            TheoremArg::Qmac => TheoremSelector::Qmac,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PenaltyArg {
    Printed,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmoothingArg {
    None,
    DiagonalScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Standard,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeltaArg {
    Delta,
    DeltaPrime,
}

/// Tolerance parameters; ranges are checked by the library.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub eps_prime: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub delta_prime: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub big_o: f64,
    /// Which of δ, δ' enters the two-user theorem penalties.
    #[arg(long, value_enum, default_value_t = DeltaArg::Delta)]
    pub delta_choice: DeltaArg,
    #[arg(long, value_enum, default_value_t = PenaltyArg::Printed)]
    pub penalties: PenaltyArg,
    #[arg(long, value_enum, default_value_t = SmoothingArg::None)]
    pub smoothing: SmoothingArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Standard)]
    pub convention: ConventionArg,
}

impl ParamArgs {
    pub fn config(&self) -> CliResult<RegionConfig> {
        let params = ToleranceParams {
            eps: self.eps,
            eps_prime: self.eps_prime,
            delta: self.delta,
            delta_prime: self.delta_prime,
            theta: self.theta,
            big_o_constant: self.big_o,
            delta_choice: match self.delta_choice {
                DeltaArg::Delta => DeltaChoice::Delta,
                DeltaArg::DeltaPrime => DeltaChoice::DeltaPrime,
            },
        };
        let penalties = match self.penalties {
            PenaltyArg::Printed => PenaltyMode::Printed,
            PenaltyArg::Off => PenaltyMode::Off,
        };
        let smoothing = Smoothing::new(
            match self.smoothing {
                SmoothingArg::None => SmoothingStrategy::None,
                SmoothingArg::DiagonalScan => SmoothingStrategy::DiagonalScan,
            },
            match self.convention {
                ConventionArg::Standard => DistanceConvention::Standard,
                ConventionArg::Literal => DistanceConvention::Literal,
            },
        );
        Ok(RegionConfig::new(params, penalties, smoothing)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuantitiesArgs {
    /// Channel JSON file, or `bundled:NAME`.
    #[arg(long)]
    pub channel: String,
    /// Input distribution; uniform when omitted.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Use the split control state (registers X10, X11, X20, X22).
    #[arg(long)]
    pub split: bool,
    /// Groupings `A:B`, comma-separated, registers concatenated (e.g. `X1:Y1X2`).
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<String>,
    /// Classical register to condition on.
    #[arg(long)]
    pub cond: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    /// Channel JSON file, or `bundled:NAME`.
    #[arg(long)]
    pub channel: String,
    /// Input distribution; uniform when omitted.
    #[arg(long)]
    pub dist: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub theorem: TheoremArg,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Report JSON output path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Vertex CSV output path; standard output otherwise.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Eavesdropper thresholds of the three groupings; each defaults to ϑ.
    #[arg(long)]
    pub eps1: Option<f64>,
    #[arg(long)]
    pub eps2: Option<f64>,
    #[arg(long)]
    pub eps3: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Channel JSON file, or `bundled:NAME`.
    #[arg(long)]
    pub channel: String,
    #[arg(long, value_enum)]
    pub theorem: TheoremArg,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Grid points per simplex edge.
    #[arg(long, default_value_t = 5)]
    pub resolution: usize,
    /// Time-sharing alphabet size for the two-user forms.
    #[arg(long, default_value_t = 1)]
    pub time_sharing: usize,
    #[arg(long, default_value_t = 33)]
    pub directions: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_samples: usize,
    /// Frontier CSV output path; standard output otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                let _ = writeln!(err, "  caused by: {s}");
                source = s.source();
            }
            e.exit_code()
        }
    }
}

fn execute(command: &Command, out: &mut impl Write, err: &mut impl Write) -> CliResult<i32> {
    match command {
        Command::Validate { channel, dist } => validate(channel, dist.as_deref(), out),
        Command::Quantities(args) => quantities(args, out),
        Command::Region(args) => region(args, out, err),
        Command::Sweep(args) => sweep(args, out),
        Command::OracleNp { p, q, eps } => {
            let r = classical_np_oracle(p, q, *eps)?;
            emit(out, &format!("divergence {}\nbeta {}\n", format_number(r.divergence), format_number(r.beta)))?;
            Ok(EXIT_OK)
        }
        Command::Fm {
            polytope,
            eliminate,
            out: target,
            csv,
        } => {
            let text = read_text(polytope)?;
            let poly = RatePolytope::from_json(&text)?;
            let names: Vec<&str> = eliminate.iter().map(String::as_str).collect();
            let projected = fourier_motzkin(&poly, &names)?;
            write_or_print(target.as_deref(), &projected.to_json(), out)?;
            if let Some(path) = csv {
                let vertices = vertices_2d(&projected)?;
                write_file(path, &vertices_csv(&vertices))?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn emit(out: &mut impl Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::File {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut impl Write) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

/// Loads a channel file, or a bundled channel named with [`BUNDLED_PREFIX`].
pub fn load_channel_arg(arg: &str) -> CliResult<ChannelSpec> {
    if let Some(name) = arg.strip_prefix(BUNDLED_PREFIX) {
        return bundled::by_name(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown bundled channel `{name}`; available: {}",
                bundled::NAMES.join(", ")
            ))
        });
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::File {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        });
    }
    Ok(load_channel_file(path)?)
}

fn load_distribution(path: Option<&Path>, channel: &ChannelSpec, split: bool) -> CliResult<InputDistribution> {
    match path {
        Some(p) => Ok(InputDistribution::parse(&read_text(p)?)?),
        None if split => Ok(InputDistribution::uniform_split(channel)?),
        None => Ok(InputDistribution::uniform_time_sharing(channel.x1.len(), channel.x2.len())),
    }
}

fn control_state(channel: &ChannelSpec, dist: &InputDistribution) -> CliResult<CqState> {
    Ok(match dist {
        InputDistribution::Split { .. } => control_state_hk(channel, dist)?,
        InputDistribution::TimeSharing { .. } => control_state_t1(channel, dist)?,
    })
}

fn validate(channel: &str, dist: Option<&Path>, out: &mut impl Write) -> CliResult<i32> {
    let ch = load_channel_arg(channel)?;
    let mut text = String::new();
    text.push_str(&format!("channel {}\n", ch.name));
    text.push_str(&format!("inputs |X1| = {}, |X2| = {}\n", ch.x1.len(), ch.x2.len()));
    text.push_str(&format!(
        "outputs dim Y1 = {}, dim Y2 = {}, dim Z = {} (total {})\n",
        ch.dims.y1,
        ch.dims.y2,
        ch.dims.z,
        ch.dims.total()
    ));
    let mut min_eig = f64::INFINITY;
    let mut max_trace_dev = 0.0f64;
    for i in 0..ch.x1.len() {
        for j in 0..ch.x2.len() {
            let s = ch.state(i, j);
            min_eig = min_eig.min(s.eigen().min_value());
            max_trace_dev = max_trace_dev.max((s.matrix().trace().re - 1.0).abs());
        }
    }
    text.push_str(&format!("states {}\n", ch.state_count()));
    text.push_str(&format!("smallest eigenvalue {}\n", format_number(min_eig)));
    text.push_str(&format!("largest trace deviation {}\n", format_number(max_trace_dev)));
    match (ch.split(0), ch.split(1)) {
        (Some(a), Some(b)) => text.push_str(&format!(
            "splits X1 = {}x{}, X2 = {}x{}\n",
            a.common.len(),
            a.personal.len(),
            b.common.len(),
            b.personal.len()
        )),
        _ => text.push_str("splits none\n"),
    }
    if let Some(path) = dist {
        let d = InputDistribution::parse(&read_text(path)?)?;
        let state = control_state(&ch, &d)?;
        text.push_str(&format!("distribution ok ({} atoms)\n", state.atoms().len()));
    }
    text.push_str("valid\n");
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn default_groups(split: bool) -> Vec<String> {
    let groups: &[&str] = if split {
        &["X10X11:Y1X20", "X20X22:Y2X10", "X10:Z", "X20:ZX10", "X11:ZX10X20", "X22:ZX10X11X20", "X10X11X20X22:Z"]
    } else {
        &["X1:Y1X2", "X2:Y1X1", "X1X2:Y1", "X1:Y2X2", "X2:Y2X1", "X1X2:Y2", "X1:Z", "X2:ZX1"]
    };
    groups.iter().map(|s| s.to_string()).collect()
}

fn quantities(args: &QuantitiesArgs, out: &mut impl Write) -> CliResult<i32> {
    let config = args.params.config()?;
    let ch = load_channel_arg(&args.channel)?;
    let dist = load_distribution(args.dist.as_deref(), &ch, args.split)?;
    let state = control_state(&ch, &dist)?;
    let ev = Evaluator::new(&state, config);
    let groups = if args.groups.is_empty() {
        default_groups(matches!(dist, InputDistribution::Split { .. }))
    } else {
        args.groups.clone()
    };
    let p = config.params;
    let mut text = format!(
        "# eps={} eps_prime={} delta={} delta_prime={} eta={} smoothing={:?} convention={:?}\n",
        format_number(p.eps),
        format_number(p.eps_prime),
        format_number(p.delta),
        format_number(p.delta_prime),
        format_number(p.eta()),
        config.smoothing.strategy,
        config.smoothing.convention
    );
    let cond = args.cond.as_deref();
    text.push_str("grouping\tI_H^eps\tI_max\tI_max^eta");
    if let Some(c) = cond {
        text.push_str(&format!("\tI_H^eps|{c}\tI_max^eta|{c}"));
    }
    text.push('\n');
    let unsmoothed_config = RegionConfig {
        params: p,
        penalties: config.penalties,
        smoothing: Smoothing::new(SmoothingStrategy::None, config.smoothing.convention),
    };
    let plain = Evaluator::new(&state, unsmoothed_config);
    for g in &groups {
        let (a, b) = g
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("grouping `{g}` is not of the form A:B")))?;
        let ht = ev.term(TermKind::HypothesisTesting, 1.0, a, b, None)?.value;
        let imax = plain.term(TermKind::SmoothMax, 1.0, a, b, None)?.value;
        let smooth = ev.term(TermKind::SmoothMax, 1.0, a, b, None)?.value;
        text.push_str(&format!("{g}\t{}\t{}\t{}", format_number(ht), format_number(imax), format_number(smooth)));
        if let Some(c) = cond {
            let cht = ev.term(TermKind::HypothesisTesting, 1.0, a, b, Some(c))?.value;
            let cmax = ev.term(TermKind::SmoothMax, 1.0, a, b, Some(c))?.value;
            text.push_str(&format!("\t{}\t{}", format_number(cht), format_number(cmax)));
        }
        text.push('\n');
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn region(args: &RegionArgs, out: &mut impl Write, err: &mut impl Write) -> CliResult<i32> {
    let config = args.params.config()?;
    let selector: TheoremSelector = args.theorem.into();
    let ch = load_channel_arg(&args.channel)?;
    let dist = load_distribution(args.dist.as_deref(), &ch, selector.uses_split())?;
    let poly = region_for(&ch, &dist, selector, &config)?;
    let mut report = RegionReport::new(selector, ch.name.clone(), &config, poly)?;
    if matches!(selector, TheoremSelector::Conjecture | TheoremSelector::T2) {
        let state = control_state_hk(&ch, &dist)?;
        let theta = config.params.theta;
        let thresholds = SecrecyThresholds {
            eps1: args.eps1.unwrap_or(theta),
            eps2: args.eps2.unwrap_or(theta),
            eps3: args.eps3.unwrap_or(theta),
            theta,
        };
        report.secrecy = Some(secrecy_section(&state, &config.params, config.smoothing, thresholds)?);
    }
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    if report.vertices.degenerate {
        let _ = writeln!(err, "note: region is degenerate (only the origin)");
    }
    if let Some(path) = &args.json {
        write_file(path, &report.to_json())?;
    }
    write_or_print(args.csv.as_deref(), &vertices_csv(&report.vertices), out)?;
    Ok(EXIT_OK)
}

fn sweep(args: &SweepArgs, out: &mut impl Write) -> CliResult<i32> {
    let config = args.params.config()?;
    let ch = load_channel_arg(&args.channel)?;
    let spec = SweepSpec {
        resolution: args.resolution,
        time_sharing: args.time_sharing,
        directions: args.directions,
        max_samples: args.max_samples,
    };
    let frontier = sweep_union(&ch, args.theorem.into(), &config, &spec)?;
    write_or_print(args.out.as_deref(), &frontier.to_csv(), out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("oneshot").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn oracle_example() {
        let (code, out, _) = run_capture(&["oracle-np", "--p", "0.5,0.5", "--q", "0.9,0.1", "--eps", "0.5"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("divergence 3.321928"), "{out}");
    }

    #[test]
    fn unknown_flag_is_parse_error() {
        let (code, _, err) = run_capture(&["region", "--bogus"]);
        assert_eq!(code, EXIT_PARSE);
        assert!(!err.is_empty());
    }

    #[test]
    fn invalid_params_are_validation_failures() {
        let (code, _, err) = run_capture(&[
            "region",
            "--channel",
            "bundled:diag-deterministic",
            "--theorem",
            "t1",
            "--eps",
            "1.5",
        ]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("eps"), "{err}");
    }

    #[test]
    fn bundled_channel_validates() {
        let (code, out, _) = run_capture(&["validate", "bundled:shared-split"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("splits X1 = 2x2"));
        assert!(out.ends_with("valid\n"));
        let (code, _, _) = run_capture(&["validate", "bundled:nope"]);
        assert_eq!(code, EXIT_PARSE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("oracle-np"));
    }
}
