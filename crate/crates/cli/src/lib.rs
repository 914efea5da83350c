//! Command-line front end: parameter sweeps over the `pnc` library, emitted
//! as CSV.
//!
//! Every CSV starts with a `#` comment holding the tool version and the fully
//! resolved configuration, followed by a header row. Flags can also be given
//! through a JSON file (`--config`); flags on the command line take
//! precedence over the file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use pnc::capacity::gain_table;
use pnc::chain::{frames_for_slots, run_chain, source_frames, Mode, MAX_RATE};
use pnc::channel::{derive_seed, ChannelParams, NoiseDensity, NoiseStream};
use pnc::detect::{ber_monte_carlo, BerScheme};
use pnc::mapping::{verify_mapping, MappingCheck, PncScheme};
use pnc::syncerr::{
    freq_penalty_db, phase_penalty_avg_db, phase_penalty_db, time_penalty_avg_db, time_penalty_db, DEFAULT_ISI_SPAN,
    MAX_DF_T,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_WORKERS: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "pnc", version, about = "Physical-layer network coding lab")]
pub struct Cli {
    /// JSON file providing values for any flag; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Relay XOR-bit BER: analytic and Monte Carlo.
    Ber(BerArgs),
    /// Per-cycle capacities and gains over traditional relaying.
    Capacity(CapacityArgs),
    /// Slot-by-slot trace of the N-node chain protocol.
    Chain(ChainArgs),
    /// SNR penalties of phase, frequency and timing offsets.
    Sync(SyncArgs),
    /// Check whether a PAM scheme admits a PNC demodulation map.
    MapCheck(MapCheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ber(_) => "ber",
            Command::Capacity(_) => "capacity",
            Command::Chain(_) => "chain",
            Command::Sync(_) => "sync",
            Command::MapCheck(_) => "map-check",
        }
    }
}

/// SNR grid: `start:stop:step` (inclusive), a comma list, or one value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    One(f64),
    List(Vec<f64>),
    Text(String),
}

impl FromStr for Grid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let g = Grid::Text(s.to_string());
        g.values()?;
        Ok(g)
    }
}

impl Grid {
    pub fn values(&self) -> anyhow::Result<Vec<f64>> {
        let v = match self {
            Grid::One(x) => vec![*x],
            Grid::List(v) => v.clone(),
            Grid::Text(s) => parse_grid(s)?,
        };
        if v.is_empty() {
            bail!("grid is empty");
        }
        if let Some(x) = v.iter().find(|x| !x.is_finite()) {
            bail!("grid value {x} is not finite");
        }
        Ok(v)
    }
}

fn parse_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number `{t}` in grid `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if h.is_nan() || h <= 0.0 || b < a {
                bail!("grid `{s}` needs start <= stop and a positive step");
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            if n > 1_000_000 {
                bail!("grid `{s}` has too many points");
            }
            // k * step rather than repeated addition keeps values exact on decimal grids
            Ok((0..=n).map(|k| a + k as f64 * h).collect())
        }
        [_] => s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect(),
        _ => bail!("grid `{s}` must be start:stop:step, a comma list or a single value"),
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BerArgs {
    /// SNR grid in dB.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr: Option<Grid>,
    /// Monte Carlo trials per grid point and scheme (at least 10000).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Monte Carlo threads. Results depend on (seed, workers).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Comma-separated subset of traditional-hop, snc-xor, pnc-xor.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schemes: Option<String>,
    /// Output file; stdout when absent or `-`.
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr: Option<Grid>,
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainArgs {
    /// Number of nodes.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// `uni` or `bi`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Slots to simulate (at least 4n; default 10n).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slots: Option<u64>,
    /// Offered rate at node 1 in frames per slot, at most 0.5.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_rate: Option<f64>,
    /// Offered rate at node n (bidirectional only).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_rate: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_bits: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncArgs {
    /// Raised-cosine roll-off for the timing family.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Operating SNR in dB for the timing family.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr0: Option<f64>,
    /// Grid points per family.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Interfering symbols on each side in the timing model.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isi_span: Option<usize>,
    /// Comma-separated subset of phase, freq, time.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<String>,
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapCheckArgs {
    /// PAM alphabet size L.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Network code: `mod` (addition mod L) or `xor` (bitwise).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Overlays command-line values on the JSON file values.
fn merge<T: Serialize + for<'de> Deserialize<'de>>(file: Map<String, Value>, flags: &T) -> anyhow::Result<T> {
    let mut merged = file;
    if let Value::Object(cli) = serde_json::to_value(flags)? {
        merged.extend(cli);
    }
    serde_json::from_value(Value::Object(merged)).context("invalid configuration")
}

fn load_file(path: &Path) -> anyhow::Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))? {
        Value::Object(m) => Ok(m),
        _ => bail!("{} must hold a JSON object", path.display()),
    }
}

/// Combines the parsed flags with the optional config file into the command
/// to run.
pub fn resolve(cli: &Cli) -> anyhow::Result<Command> {
    let mut file = match &cli.config {
        Some(p) => load_file(p)?,
        None => Map::new(),
    };
    let file_cmd = match file.remove("command") {
        Some(Value::String(s)) => Some(s),
        Some(other) => bail!("`command` in config must be a string, got {other}"),
        None => None,
    };
    let cmd = match (&cli.command, file_cmd.as_deref()) {
        (Some(c), Some(f)) if c.name() != f => {
            bail!("config file describes `{f}` but the command line asks for `{}`", c.name())
        }
        (Some(c), _) => c.clone(),
        (None, Some("ber")) => Command::Ber(BerArgs::default()),
        (None, Some("capacity")) => Command::Capacity(CapacityArgs::default()),
        (None, Some("chain")) => Command::Chain(ChainArgs::default()),
        (None, Some("sync")) => Command::Sync(SyncArgs::default()),
        (None, Some("map-check")) => Command::MapCheck(MapCheckArgs::default()),
        (None, Some(other)) => bail!("unknown command `{other}` in config"),
        (None, None) => bail!("no command given; see --help"),
    };
    Ok(match cmd {
        Command::Ber(a) => Command::Ber(merge(file, &a)?),
        Command::Capacity(a) => Command::Capacity(merge(file, &a)?),
        Command::Chain(a) => Command::Chain(merge(file, &a)?),
        Command::Sync(a) => Command::Sync(merge(file, &a)?),
        Command::MapCheck(a) => Command::MapCheck(merge(file, &a)?),
    })
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-5..12).contains(&exp) {
        let mant = trim_zeros(mant);
        return format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Result of one command: the CSV text and lines meant for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub notes: Vec<String>,
    pub output: Option<PathBuf>,
}

struct CsvOut {
    writer: csv::Writer<Vec<u8>>,
    trailer: Vec<String>,
}

impl CsvOut {
    fn new(header: &[&str]) -> anyhow::Result<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self { writer, trailer: Vec::new() })
    }

    fn row<I, S>(&mut self, fields: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    fn finish(self, config: &impl Serialize) -> anyhow::Result<String> {
        let body = String::from_utf8(self.writer.into_inner()?)?;
        let mut out = format!("# pnc {VERSION} config={}\n", serde_json::to_string(config)?);
        out.push_str(&body);
        for t in self.trailer {
            out.push_str("# ");
            out.push_str(&t);
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Debug, Serialize)]
struct BerConfig {
    command: &'static str,
    snr: Vec<f64>,
    trials: u64,
    seed: u64,
    workers: usize,
    schemes: Vec<&'static str>,
}

#[derive(Debug, Serialize)]
struct CapacityConfig {
    command: &'static str,
    snr: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct ChainConfig {
    command: &'static str,
    n: usize,
    mode: &'static str,
    slots: u64,
    x_rate: f64,
    y_rate: f64,
    frame_bits: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct SyncConfig {
    command: &'static str,
    beta: f64,
    snr0: f64,
    points: usize,
    isi_span: usize,
    families: Vec<Family>,
}

#[derive(Debug, Serialize)]
struct MapCheckConfig {
    command: &'static str,
    levels: usize,
    code: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Phase,
    Freq,
    Time,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Phase => "phase",
            Family::Freq => "freq",
            Family::Time => "time",
        })
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Runs a resolved command and returns its output.
pub fn run(cmd: &Command) -> anyhow::Result<Report> {
    match cmd {
        Command::Ber(a) => run_ber(a),
        Command::Capacity(a) => run_capacity(a),
        Command::Chain(a) => run_chain_cmd(a),
        Command::Sync(a) => run_sync(a),
        Command::MapCheck(a) => run_map_check(a),
    }
}

fn run_ber(a: &BerArgs) -> anyhow::Result<Report> {
    let schemes: Vec<BerScheme> = match &a.schemes {
        Some(s) => split_list(s).map(str::parse).collect::<Result<_, _>>()?,
        None => BerScheme::ALL.to_vec(),
    };
    if schemes.is_empty() {
        bail!("no schemes selected");
    }
    let cfg = BerConfig {
        command: "ber",
        snr: a.snr.clone().unwrap_or(Grid::Text("0:8:2".into())).values()?,
        trials: a.trials.unwrap_or(1_000_000),
        seed: a.seed.unwrap_or(DEFAULT_SEED),
        workers: a.workers.unwrap_or(DEFAULT_WORKERS).max(1),
        schemes: schemes.iter().map(|s| s.name()).collect(),
    };
    let mut out = CsvOut::new(&["snr_db", "scheme", "ber_analytic", "ber_mc", "std_err"])?;
    for (g, &snr) in cfg.snr.iter().enumerate() {
        let n0 = NoiseDensity::from_snr_db(snr)?;
        for &scheme in &schemes {
            let k = BerScheme::ALL.iter().position(|&s| s == scheme).expect("known scheme") as u64;
            let params = ChannelParams { n0, seed: derive_seed(cfg.seed, &[g as u64, k]) };
            let est = ber_monte_carlo(scheme, &params, cfg.trials, cfg.workers)?;
            out.row([
                fmt_g(snr),
                scheme.name().into(),
                fmt_g(scheme.analytic(n0)),
                fmt_g(est.p_hat),
                fmt_g(est.std_err),
            ])?;
        }
    }
    Ok(Report { csv: out.finish(&cfg)?, notes: vec![], output: a.output.clone() })
}

fn run_capacity(a: &CapacityArgs) -> anyhow::Result<Report> {
    let cfg =
        CapacityConfig { command: "capacity", snr: a.snr.clone().unwrap_or(Grid::Text("-20:20:5".into())).values()? };
    let mut out = CsvOut::new(&["snr_db", "c_trad", "c_snc", "c_pnc_lo", "c_pnc_up", "gain_lo", "gain_up"])?;
    for r in gain_table(&cfg.snr)? {
        out.row(
            [r.snr_db, r.c_traditional, r.c_snc, r.c_pnc_lower, r.c_pnc_upper, r.gain_lower, r.gain_upper].map(fmt_g),
        )?;
    }
    Ok(Report { csv: out.finish(&cfg)?, notes: vec![], output: a.output.clone() })
}

fn run_chain_cmd(a: &ChainArgs) -> anyhow::Result<Report> {
    let n = a.n.unwrap_or(5);
    let mode: Mode = a.mode.as_deref().unwrap_or("bi").parse()?;
    if mode == Mode::Unidirectional && a.y_rate.is_some_and(|r| r > 0.0) {
        bail!("--y-rate needs bidirectional mode");
    }
    let cfg = ChainConfig {
        command: "chain",
        n,
        mode: mode.name(),
        slots: a.slots.unwrap_or(10 * n as u64),
        x_rate: a.x_rate.unwrap_or(MAX_RATE),
        y_rate: if mode == Mode::Bidirectional { a.y_rate.unwrap_or(MAX_RATE) } else { 0.0 },
        frame_bits: a.frame_bits.unwrap_or(32),
        seed: a.seed.unwrap_or(DEFAULT_SEED),
    };
    let count = frames_for_slots(cfg.slots);
    let x = source_frames(count, cfg.x_rate, cfg.frame_bits, &mut NoiseStream::new(cfg.seed, 0))?;
    let y = match mode {
        Mode::Bidirectional => source_frames(count, cfg.y_rate, cfg.frame_bits, &mut NoiseStream::new(cfg.seed, 1))?,
        Mode::Unidirectional => vec![],
    };
    let run = run_chain(n, mode, x, y, cfg.slots)?;
    let mut out = CsvOut::new(&["slot", "node", "role", "frame_id", "buffer_id"])?;
    for r in &run.trace {
        out.row([
            r.slot.to_string(),
            r.node.to_string(),
            r.role.to_string(),
            r.frame.to_string(),
            r.buffer.to_string(),
        ])?;
    }
    let t = run.throughput;
    let summary = format!(
        "throughput forward={} reverse={} frames_forward={} frames_reverse={} warmup_slots={} window_slots={}",
        fmt_g(t.forward_rate),
        fmt_g(t.reverse_rate),
        t.forward_frames,
        t.reverse_frames,
        t.warmup_slots,
        t.window_slots
    );
    out.trailer.push(summary.clone());
    Ok(Report { csv: out.finish(&cfg)?, notes: vec![summary], output: a.output.clone() })
}

fn run_sync(a: &SyncArgs) -> anyhow::Result<Report> {
    let families = match &a.families {
        Some(s) => split_list(s)
            .map(|f| match f {
                "phase" => Ok(Family::Phase),
                "freq" | "frequency" => Ok(Family::Freq),
                "time" | "timing" => Ok(Family::Time),
                other => Err(anyhow::anyhow!("unknown offset family `{other}`")),
            })
            .collect::<anyhow::Result<Vec<_>>>()?,
        None => vec![Family::Phase, Family::Freq, Family::Time],
    };
    let cfg = SyncConfig {
        command: "sync",
        beta: a.beta.unwrap_or(0.5),
        snr0: a.snr0.unwrap_or(10.0),
        points: a.points.unwrap_or(101),
        isi_span: a.isi_span.unwrap_or(DEFAULT_ISI_SPAN),
        families,
    };
    if cfg.points < 2 {
        bail!("--points must be at least 2");
    }
    let grid = |lo: f64, hi: f64| (0..cfg.points).map(move |k| lo + (hi - lo) * k as f64 / (cfg.points - 1) as f64);
    let mut out = CsvOut::new(&["family", "offset", "penalty_db"])?;
    let mut notes = Vec::new();
    for fam in &cfg.families {
        let rows: Vec<(f64, f64)> = match fam {
            Family::Phase => grid(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)
                .map(|t| Ok((t, phase_penalty_db(t)?)))
                .collect::<pnc::Result<_>>()?,
            Family::Freq => grid(0.0, MAX_DF_T).map(|f| Ok((f, freq_penalty_db(f)?))).collect::<pnc::Result<_>>()?,
            Family::Time => grid(-0.5, 0.5)
                .map(|d| Ok((d, time_penalty_db(d, cfg.beta, cfg.snr0, cfg.isi_span)?.penalty_db)))
                .collect::<pnc::Result<_>>()?,
        };
        for (x, p) in &rows {
            out.row([fam.to_string(), fmt_g(*x), fmt_g(*p)])?;
        }
        let worst = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let mut note = format!("{fam} worst_db={}", fmt_g(worst));
        match fam {
            Family::Phase => note.push_str(&format!(" average_db={}", fmt_g(phase_penalty_avg_db()))),
            Family::Time => note.push_str(&format!(" average_db={}", fmt_g(time_penalty_avg_db(cfg.beta, cfg.snr0)?))),
            Family::Freq => {}
        }
        notes.push(note);
    }
    out.trailer.extend(notes.iter().cloned());
    Ok(Report { csv: out.finish(&cfg)?, notes, output: a.output.clone() })
}

fn run_map_check(a: &MapCheckArgs) -> anyhow::Result<Report> {
    let levels = a.levels.unwrap_or(4);
    let (code, scheme) = match a.code.as_deref().unwrap_or("mod") {
        "mod" => ("mod", PncScheme::pam(levels)?),
        "xor" => {
            if !levels.is_power_of_two() {
                bail!("bitwise XOR needs a power-of-two alphabet, got {levels}");
            }
            ("xor", PncScheme::pam_bitwise_xor(levels)?)
        }
        other => bail!("unknown network code `{other}` (expected mod or xor)"),
    };
    let cfg = MapCheckConfig { command: "map-check", levels, code };
    match verify_mapping(&scheme)? {
        MappingCheck::Valid(table) => {
            let mut out = CsvOut::new(&["m_i", "m_j", "e_i", "e_j", "e_sum", "h", "code"])?;
            for i in 0..levels {
                for j in 0..levels {
                    let (ei, ej) = (scheme.modulate(i)?, scheme.modulate(j)?);
                    let h = table.lookup(ei + ej).context("superposition missing from demodulation map")?;
                    out.row([
                        i.to_string(),
                        j.to_string(),
                        fmt_g(ei),
                        fmt_g(ej),
                        fmt_g(ei + ej),
                        h.to_string(),
                        scheme.code_add(i, j)?.to_string(),
                    ])?;
                }
            }
            let note = format!("valid: demodulation map with {} entries", table.len());
            out.trailer.push(note.clone());
            Ok(Report { csv: out.finish(&cfg)?, notes: vec![note], output: a.output.clone() })
        }
        MappingCheck::Violation(v) => {
            let mut out =
                CsvOut::new(&["first_i", "first_j", "second_i", "second_j", "e_sum", "first_code", "second_code"])?;
            out.row([
                v.first.0.to_string(),
                v.first.1.to_string(),
                v.second.0.to_string(),
                v.second.1.to_string(),
                fmt_g(v.superposition),
                v.first_code.to_string(),
                v.second_code.to_string(),
            ])?;
            let note = format!("violation: {v}");
            out.trailer.push(note.clone());
            Ok(Report { csv: out.finish(&cfg)?, notes: vec![note], output: a.output.clone() })
        }
    }
}

/// Resolves, runs and writes the output of one invocation.
pub fn execute(cli: &Cli) -> anyhow::Result<()> {
    let cmd = resolve(cli)?;
    let report = run(&cmd)?;
    match report.output.as_deref() {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, &report.csv).with_context(|| format!("writing {}", p.display()))?
        }
        _ => {
            use std::io::Write;
            std::io::stdout().write_all(report.csv.as_bytes())?;
        }
    }
    for n in &report.notes {
        eprintln!("{n}");
    }
    Ok(())
}
