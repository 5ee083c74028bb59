//! Command-line front end: `simulate`, `inspect` and `group-info`.
//!
//! Experiments are described by a flat `key = value` file:
//!
//! ```text
//! code = ebch16-7            # or code_file = g.txt, with optional aut_file = aut.txt
//! perm_file = p.txt          # base permutation, one line of images; default is the code's own
//! decoder = sc
//! decoder = scl:8
//! decoder = pod:16:sc        # pod:M:sc or pod:M:scl:L
//! decoder = ml
//! decoder = hd:2
//! snr_start = 3
//! snr_stop = 5
//! snr_step = 1
//! min_errors = 100
//! max_trials = 1000000
//! seed = 1
//! output = out.csv
//! selection = sample         # or enumerate
//! combiner = ml-among-valid  # or best-metric
//! metric = exact             # or approx
//! check = exact              # or min-sum
//! timing = false             # true writes wall time into the seconds column
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::channel_sim::{hd_record, run_bler, BlerRecord, ChannelPoint, SimDecoder, ML_MAX_K};
use crate::codes::{builtin, CodeSpec, BUILTIN_NAMES};
use crate::error::{Error, Result};
use crate::permgroup::{generators_from_text, Bsgs, Permutation};
use crate::pod::{build_pod, extend_perm, BranchDecoder, Combiner, Selection, SingleTransformDecoder};
use crate::polar::{CheckRule, DecoderOptions, MetricRule, PolarSpec};
use crate::transform::{polar_transform, verify_automorphism};

pub const CSV_HEADER: &str = "code,decoder,ebno_db,trials,block_errors,bler,seconds";

#[derive(Parser, Debug)]
#[command(name = "pod", about = "Polar orbit decoding of binary linear block codes")]
pub struct Cli {
    /// Overrides the seed of the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Runs a BLER sweep described by a config file and writes CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Prints the polar transformation of a code.
    Inspect {
        /// Builtin name or generator matrix file.
        #[arg(long)]
        code: String,
        /// Base permutation file.
        #[arg(long)]
        perm: Option<PathBuf>,
        /// Automorphism generator file for a matrix-file code.
        #[arg(long)]
        aut: Option<PathBuf>,
    },
    /// Reports the automorphism group generated by the code's generators.
    GroupInfo {
        #[arg(long)]
        code: String,
        #[arg(long)]
        aut: Option<PathBuf>,
    },
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AutomorphismViolation(_) => 2,
        Error::Capacity(_) => 3,
        _ => 1,
    }
}

/// One `decoder=` entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderDesc {
    Sc,
    Scl(usize),
    Pod { m: usize, branch: BranchDecoder },
    Ml,
    Hd(usize),
}

impl DecoderDesc {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<usize> {
            t.parse().map_err(|_| Error::Parse(format!("bad number {t:?} in decoder {s:?}")))
        };
        let positive = |t: &str| -> Result<usize> {
            match num(t)? {
                0 => Err(Error::Parse(format!("zero size in decoder {s:?}"))),
                v => Ok(v),
            }
        };
        Ok(match parts[..] {
            ["sc"] => DecoderDesc::Sc,
            ["scl", l] => DecoderDesc::Scl(positive(l)?),
            ["pod", m, "sc"] => DecoderDesc::Pod { m: positive(m)?, branch: BranchDecoder::Sc },
            ["pod", m, "scl", l] => DecoderDesc::Pod { m: positive(m)?, branch: BranchDecoder::Scl(positive(l)?) },
            ["ml"] => DecoderDesc::Ml,
            ["hd", t] => DecoderDesc::Hd(num(t)?),
            _ => return Err(Error::Parse(format!("unknown decoder {s:?}"))),
        })
    }

    pub fn label(&self) -> String {
        match self {
            DecoderDesc::Sc => "sc".into(),
            DecoderDesc::Scl(l) => format!("scl:{l}"),
            DecoderDesc::Pod { m, branch: BranchDecoder::Sc } => format!("pod:{m}:sc"),
            DecoderDesc::Pod { m, branch: BranchDecoder::Scl(l) } => format!("pod:{m}:scl:{l}"),
            DecoderDesc::Ml => "ml".into(),
            DecoderDesc::Hd(t) => format!("hd:{t}"),
        }
    }
}

/// Where the code comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeSelector {
    Builtin(String),
    File { generator: PathBuf, automorphisms: Option<PathBuf> },
}

/// Parsed experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub code: CodeSelector,
    pub perm_file: Option<PathBuf>,
    pub decoders: Vec<DecoderDesc>,
    pub snr_start: f64,
    pub snr_stop: f64,
    pub snr_step: f64,
    pub min_errors: u64,
    pub max_trials: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub selection: Selection,
    pub combiner: Combiner,
    pub options: DecoderOptions,
    pub timing: bool,
}

impl ExperimentConfig {
    /// Parses the key-value text. `base` resolves relative paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut code = None;
        let mut code_file = None;
        let mut aut_file = None;
        let mut cfg = ExperimentConfig {
            code: CodeSelector::Builtin(String::new()),
            perm_file: None,
            decoders: Vec::new(),
            snr_start: f64::NAN,
            snr_stop: f64::NAN,
            snr_step: 1.0,
            min_errors: 100,
            max_trials: 1_000_000,
            seed: 0,
            output: None,
            selection: Selection::Sample,
            combiner: Combiner::MlAmongValid,
            options: DecoderOptions::default(),
            timing: false,
        };
        let path = |v: &str| base.join(v);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what} {value:?}", lineno + 1));
            match key {
                "code" => code = Some(value.to_string()),
                "code_file" => code_file = Some(path(value)),
                "aut_file" => aut_file = Some(path(value)),
                "perm_file" => cfg.perm_file = Some(path(value)),
                "decoder" => cfg.decoders.push(DecoderDesc::parse(value)?),
                "snr_start" => cfg.snr_start = value.parse().map_err(|_| bad(key))?,
                "snr_stop" => cfg.snr_stop = value.parse().map_err(|_| bad(key))?,
                "snr_step" => cfg.snr_step = value.parse().map_err(|_| bad(key))?,
                "min_errors" => cfg.min_errors = value.parse().map_err(|_| bad(key))?,
                "max_trials" => cfg.max_trials = value.parse().map_err(|_| bad(key))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad(key))?,
                "output" => cfg.output = Some(path(value)),
                "selection" => {
                    cfg.selection = match value {
                        "sample" => Selection::Sample,
                        "enumerate" => Selection::Enumerate,
                        _ => return Err(bad(key)),
                    }
                }
                "combiner" => {
                    cfg.combiner = match value {
                        "ml-among-valid" => Combiner::MlAmongValid,
                        "best-metric" => Combiner::BestMetric,
                        _ => return Err(bad(key)),
                    }
                }
                "metric" => {
                    cfg.options.metric = match value {
                        "exact" => MetricRule::Exact,
                        "approx" => MetricRule::Approx,
                        _ => return Err(bad(key)),
                    }
                }
                "check" => {
                    cfg.options.check = match value {
                        "exact" => CheckRule::Exact,
                        "min-sum" => CheckRule::MinSum,
                        _ => return Err(bad(key)),
                    }
                }
                "timing" => cfg.timing = value.parse().map_err(|_| bad(key))?,
                _ => return Err(Error::Parse(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        cfg.code = match (code, code_file) {
            (Some(name), None) if aut_file.is_none() => CodeSelector::Builtin(name),
            (None, Some(generator)) => CodeSelector::File { generator, automorphisms: aut_file },
            (None, None) => return Err(Error::Validation("no code or code_file given".into())),
            _ => return Err(Error::Validation("give either code or code_file (+ aut_file)".into())),
        };
        cfg.validate_fields()?;
        Ok(cfg)
    }

    fn validate_fields(&self) -> Result<()> {
        if self.decoders.is_empty() {
            return Err(Error::Validation("no decoder lines".into()));
        }
        if !self.snr_start.is_finite() || !self.snr_stop.is_finite() {
            return Err(Error::Validation("snr_start and snr_stop are required".into()));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.snr_step > 0.0) || self.snr_stop < self.snr_start {
            return Err(Error::Validation("empty SNR sweep".into()));
        }
        if self.min_errors == 0 || self.max_trials == 0 {
            return Err(Error::Validation("min_errors and max_trials must be positive".into()));
        }
        Ok(())
    }

    /// Sweep points in dB, inclusive of `snr_stop` up to rounding.
    pub fn snr_points(&self) -> Vec<f64> {
        let count = ((self.snr_stop - self.snr_start) / self.snr_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let v = self.snr_start + i as f64 * self.snr_step;
                (v * 1e9).round() / 1e9
            })
            .collect()
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Builds a code from a selector; file automorphisms are verified one by one.
pub fn load_code(sel: &CodeSelector) -> Result<CodeSpec> {
    match sel {
        CodeSelector::Builtin(name) => builtin(name),
        CodeSelector::File { generator, automorphisms } => {
            let name = generator.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
            let mut code = CodeSpec::from_text(name, &read(generator)?, None)?;
            if let Some(path) = automorphisms {
                let (n, gens) = generators_from_text(&read(path)?)?;
                if n != code.n {
                    return Err(Error::Shape(format!("automorphisms on {n} points, code length {}", code.n)));
                }
                for (i, h) in gens.iter().enumerate() {
                    if !verify_automorphism(&code.g, h)? {
                        return Err(Error::AutomorphismViolation(format!(
                            "generator {i} ({h:?}) is not an automorphism of {name}"
                        )));
                    }
                }
                code.aut_generators = gens;
            }
            Ok(code)
        }
    }
}

/// A builtin name, or else a generator file path.
pub fn selector_from_arg(code: &str, aut: Option<&Path>) -> CodeSelector {
    if BUILTIN_NAMES.contains(&code) && aut.is_none() {
        CodeSelector::Builtin(code.to_string())
    } else {
        CodeSelector::File { generator: PathBuf::from(code), automorphisms: aut.map(Path::to_path_buf) }
    }
}

/// Base permutation from a file, or the code's default.
fn load_perm(path: Option<&Path>, code: &CodeSpec) -> Result<Permutation> {
    let n = code.n;
    let Some(path) = path else {
        return Ok(code.base.clone());
    };
    let text = read(path)?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::Parse(format!("{}: empty permutation file", path.display())))?;
    let p = Permutation::from_text(line)?;
    if p.len() != n && p.len() != code.polar_length() {
        return Err(Error::Shape(format!("permutation on {} points, code length {n}", p.len())));
    }
    Ok(p)
}

#[allow(clippy::large_enum_variant)]
enum Prepared {
    Sim(SimDecoder),
    Hd(usize),
}

struct Plan {
    code: CodeSpec,
    decoders: Vec<(String, Prepared)>,
    points: Vec<ChannelPoint>,
}

/// Everything that can fail before simulation starts.
fn prepare(cfg: &ExperimentConfig) -> Result<Plan> {
    let code = load_code(&cfg.code)?;
    let base = load_perm(cfg.perm_file.as_deref(), &code)?;
    let points = cfg
        .snr_points()
        .into_iter()
        .map(|db| ChannelPoint::for_code(&code, db))
        .collect::<Result<Vec<_>>>()?;
    let mut group = None;
    let mut decoders = Vec::new();
    for d in &cfg.decoders {
        let prepared = match *d {
            DecoderDesc::Sc | DecoderDesc::Scl(_) => {
                let bd = if let DecoderDesc::Scl(l) = d { BranchDecoder::Scl(*l) } else { BranchDecoder::Sc };
                let mut single = SingleTransformDecoder::new(&code, &base, bd)?;
                single.options = cfg.options;
                Prepared::Sim(SimDecoder::Single(single))
            }
            DecoderDesc::Pod { m, branch } => {
                if code.aut_generators.is_empty() && m > 1 {
                    return Err(Error::Capacity(format!("{} has no automorphism generators", code.name)));
                }
                if group.is_none() {
                    group = Some(Bsgs::schreier_sims(code.n, &code.aut_generators)?);
                }
                let cfg_pod = build_pod(&code, &base, group.as_ref().expect("set above"), m, cfg.selection, cfg.seed)?
                    .with_decoder(branch)
                    .with_combiner(cfg.combiner)
                    .with_options(cfg.options);
                Prepared::Sim(SimDecoder::Pod(Box::new(cfg_pod)))
            }
            DecoderDesc::Ml => {
                if code.k > ML_MAX_K {
                    return Err(Error::Capacity(format!("ML needs k <= {ML_MAX_K}, code has k = {}", code.k)));
                }
                Prepared::Sim(SimDecoder::Ml)
            }
            DecoderDesc::Hd(t) => Prepared::Hd(t),
        };
        decoders.push((d.label(), prepared));
    }
    Ok(Plan { code, decoders, points })
}

fn csv_row(code: &str, r: &BlerRecord, timing: bool) -> String {
    let seconds = if timing { format!("{:.3}", r.wall_time) } else { "0".into() };
    format!("{code},{},{},{},{},{},{seconds}\n", r.decoder, r.eb_n0_db, r.trials, r.block_errors, r.bler)
}

/// Runs the experiment and returns the CSV text.
pub fn simulate(cfg: &ExperimentConfig) -> Result<String> {
    let plan = prepare(cfg)?;
    let mut csv = format!("{CSV_HEADER}\n");
    for (label, dec) in &plan.decoders {
        let records = match dec {
            Prepared::Sim(sim) => {
                run_bler(&plan.code, sim, label, &plan.points, cfg.min_errors, cfg.max_trials, cfg.seed)?
            }
            Prepared::Hd(t) => plan.points.iter().map(|p| hd_record(&plan.code, *t, p.eb_n0_db, label)).collect(),
        };
        for r in &records {
            csv.push_str(&csv_row(&plan.code.name, r, cfg.timing));
        }
    }
    Ok(csv)
}

/// Text dump of the polar transformation for `code` under `base`.
pub fn inspect(code: &CodeSpec, base: &Permutation) -> Result<String> {
    let embedded = code.zero_padded()?;
    let spec = PolarSpec::for_length(embedded.n)?;
    let t = polar_transform(&embedded.g, &extend_perm(base, embedded.n)?, &spec)?;
    let full_rank = t.m_p.rank() == code.k && t.e_p.invert().is_ok();
    let mut s = String::new();
    let pivots = t.pivots.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(s, "code {}", code.name).ok();
    writeln!(s, "n {}", code.n).ok();
    writeln!(s, "k {}", code.k).ok();
    if embedded.n != code.n {
        writeln!(s, "polar_length {}", embedded.n).ok();
    }
    writeln!(s, "pivots {pivots}").ok();
    writeln!(s, "dynamic_constraints {}", t.df.dynamic_count()).ok();
    writeln!(s, "full_rank {}", if full_rank { "yes" } else { "no" }).ok();
    writeln!(s, "m_p").ok();
    s.push_str(&t.m_p.to_text());
    writeln!(s, "e_p").ok();
    s.push_str(&t.e_p.to_text());
    Ok(s)
}

/// Group order, base and per-generator verification for the code's automorphisms.
pub fn group_info(code: &CodeSpec) -> Result<String> {
    if code.aut_generators.is_empty() {
        return Err(Error::Validation(format!("{} has no automorphism generators", code.name)));
    }
    let mut s = String::new();
    writeln!(s, "code {}", code.name).ok();
    writeln!(s, "degree {}", code.n).ok();
    for (i, h) in code.aut_generators.iter().enumerate() {
        if !verify_automorphism(&code.g, h)? {
            return Err(Error::AutomorphismViolation(format!("generator {i} ({h:?}) is not an automorphism")));
        }
        writeln!(s, "generator {i} verified order {}", h.order()).ok();
    }
    let group = Bsgs::schreier_sims(code.n, &code.aut_generators)?;
    let join = |v: Vec<usize>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(s, "order {}", group.order()).ok();
    writeln!(s, "base_length {}", group.base().len()).ok();
    writeln!(s, "base {}", join(group.base())).ok();
    writeln!(s, "transversals {}", join(group.transversal_sizes())).ok();
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Simulate { config } => {
            let base = config.parent().unwrap_or(Path::new("."));
            let mut cfg = ExperimentConfig::parse(&read(config)?, base)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            if let Some(out) = &cli.out {
                cfg.output = Some(out.clone());
            }
            let csv = simulate(&cfg)?;
            emit(&csv, cfg.output.as_deref(), stdout)
        }
        Command::Inspect { code, perm, aut } => {
            let code = load_code(&selector_from_arg(code, aut.as_deref()))?;
            let base = load_perm(perm.as_deref(), &code)?;
            emit(&inspect(&code, &base)?, cli.out.as_deref(), stdout)
        }
        Command::GroupInfo { code, aut } => {
            let code = load_code(&selector_from_arg(code, aut.as_deref()))?;
            emit(&group_info(&code)?, cli.out.as_deref(), stdout)
        }
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
