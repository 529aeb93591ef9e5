mod config;
mod manifest;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nofdm_core::berlab::{
    self, required_ebn0_at_ber, BerPoint, CorrelationRow, Crossing, Format, IciStudy, Tabular,
    FEC_LIMIT_20PCT, FEC_LIMIT_7PCT,
};
use nofdm_core::capacity::capacity_report;
use nofdm_core::modem::rate_report;
use nofdm_core::Execution;
use serde::Serialize;

use crate::config::{ConfigError, Entries, Settings};
use crate::manifest::RunManifest;

/// FrCT/FrHT non-orthogonal multicarrier simulation lab.
#[derive(Debug, Parser)]
#[command(name = "nofdm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo BER over a grid of alpha, Eb/N0, ID iterations and kinds
    SweepBer(SweepArgs),
    /// |C[l][k]| along one row of the subcarrier correlation matrix
    CorrRow(CorrArgs),
    /// Pooled ICI histogram with the fitted two-Gaussian mixture
    IciPdf(IciArgs),
    /// Welch spectrum of the transmitted waveform
    Psd(PsdArgs),
    /// Shannon limit and FTN capacity bound
    Capacity(CapacityArgs),
    /// Symbol rate, Nyquist rate, bandwidth and net bit rate
    Rates(RatesArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SweepBer(_) => "sweep-ber",
            Command::CorrRow(_) => "corr-row",
            Command::IciPdf(_) => "ici-pdf",
            Command::Psd(_) => "psd",
            Command::Capacity(_) => "capacity",
            Command::Rates(_) => "rates",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::SweepBer(a) => &a.common,
            Command::CorrRow(a) => &a.common,
            Command::IciPdf(a) => &a.common,
            Command::Psd(a) => &a.common,
            Command::Capacity(a) => &a.common,
            Command::Rates(a) => &a.common,
        }
    }

    /// `(config key, flag, value)` for every parameter flag given.
    fn overrides(&self) -> Vec<(&'static str, &'static str, String)> {
        let mut out = Vec::new();
        let mut push = |key, flag, value: &Option<String>| {
            if let Some(v) = value {
                out.push((key, flag, v.clone()));
            }
        };
        match self {
            Command::SweepBer(a) => {
                push("alphas", "--alpha", &a.alpha);
                push("ebn0_db", "--ebn0-db", &a.ebn0_db);
                push("iterations", "--iterations", &a.iterations);
                push("kinds", "--kind", &a.kind);
                push("n", "--n", &a.n);
                push("pam_order", "--pam-order", &a.pam_order);
                push("max_bits", "--max-bits", &a.max_bits);
                push("min_errors", "--min-errors", &a.min_errors);
                push("min_bits", "--min-bits", &a.min_bits);
                push("batch_symbols", "--batch-symbols", &a.batch_symbols);
            }
            Command::CorrRow(a) => {
                push("alpha", "--alpha", &a.alpha);
                push("kind", "--kind", &a.kind);
                push("n", "--n", &a.n);
                push("k", "--k", &a.k);
            }
            Command::IciPdf(a) => {
                push("alpha", "--alpha", &a.alpha);
                push("kind", "--kind", &a.kind);
                push("n", "--n", &a.n);
                push("symbols", "--symbols", &a.symbols);
            }
            Command::Psd(a) => {
                push("alpha", "--alpha", &a.alpha);
                push("kind", "--kind", &a.kind);
                push("n", "--n", &a.n);
                push("sample_rate", "--sample-rate", &a.sample_rate);
                push("frames", "--frames", &a.frames);
                push("segment", "--segment", &a.segment);
                push("overlap", "--overlap", &a.overlap);
            }
            Command::Capacity(a) => {
                push("alpha", "--alpha", &a.alpha);
                push("snr_db", "--snr-db", &a.snr_db);
                push("bandwidth_hz", "--bandwidth", &a.bandwidth);
                push("ici_power", "--ici-power", &a.ici_power);
                push("symbol_duration", "--symbol-duration", &a.symbol_duration);
            }
            Command::Rates(a) => {
                push("alpha", "--alpha", &a.alpha);
                push("kind", "--kind", &a.kind);
                push("n", "--n", &a.n);
                push("sample_rate", "--sample-rate", &a.sample_rate);
                push("cp_len", "--cp-len", &a.cp_len);
                push("pam_order", "--pam-order", &a.pam_order);
                push("data_symbols_per_frame", "--data-symbols", &a.data_symbols);
                push("training_symbols", "--training-symbols", &a.training_symbols);
                push("sync_symbols", "--sync-symbols", &a.sync_symbols);
            }
        }
        let seed = self.common().seed.map(|s| s.to_string());
        push("seed", "--seed", &seed);
        out
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Sectioned key = value configuration file
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master RNG seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; a <OUT>.manifest.json is written next to it [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_name = "csv|json", value_parser = parse_format)]
    format: Option<Format>,
    /// Worker threads [default: available cores]
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Run on the calling thread only
    #[arg(long, conflicts_with = "workers")]
    single_thread: bool,
    /// Re-run the recorded run of a manifest
    #[arg(long, value_name = "PATH", conflicts_with_all = ["config", "seed"])]
    manifest: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Compression factors, comma list or start:step:end
    #[arg(long, value_name = "LIST")]
    alpha: Option<String>,
    /// Eb/N0 values in dB [default: 0:2:20]
    #[arg(long = "ebn0-db", value_name = "LIST")]
    ebn0_db: Option<String>,
    /// ID iteration counts [default: 20]
    #[arg(long, value_name = "LIST")]
    iterations: Option<String>,
    /// Transform kinds, frct and/or frht
    #[arg(long, value_name = "LIST")]
    kind: Option<String>,
    /// Subcarriers per symbol [default: 256]
    #[arg(long)]
    n: Option<String>,
    /// PAM order [default: 2]
    #[arg(long)]
    pam_order: Option<String>,
    /// Bit cap per grid point [default: 4096 symbols]
    #[arg(long)]
    max_bits: Option<String>,
    /// Error events that end a point early [default: 100]
    #[arg(long)]
    min_errors: Option<String>,
    /// Bits required before early stopping [default: 0]
    #[arg(long)]
    min_bits: Option<String>,
    /// Symbols per random batch [default: 64]
    #[arg(long)]
    batch_symbols: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CorrArgs {
    /// Compression factor [default: 1]
    #[arg(long)]
    alpha: Option<String>,
    /// Transform kind, frct or frht [default: frct]
    #[arg(long)]
    kind: Option<String>,
    /// Subcarriers [default: 256]
    #[arg(long)]
    n: Option<String>,
    /// Row index [default: n/2]
    #[arg(long)]
    k: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct IciArgs {
    /// Compression factor [default: 1]
    #[arg(long)]
    alpha: Option<String>,
    /// Transform kind, frct or frht [default: frct]
    #[arg(long)]
    kind: Option<String>,
    /// Subcarriers [default: 256]
    #[arg(long)]
    n: Option<String>,
    /// Random multicarrier symbols pooled [default: 4096]
    #[arg(long)]
    symbols: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct PsdArgs {
    /// Compression factor [default: 1]
    #[arg(long)]
    alpha: Option<String>,
    /// Transform kind, frct or frht [default: frct]
    #[arg(long)]
    kind: Option<String>,
    /// Subcarriers [default: 256]
    #[arg(long)]
    n: Option<String>,
    /// Samples per second [default: 10e9]
    #[arg(long)]
    sample_rate: Option<String>,
    /// Frames of random data [default: 4]
    #[arg(long)]
    frames: Option<String>,
    /// Welch segment length, a power of two [default: 1024]
    #[arg(long)]
    segment: Option<String>,
    /// Segment overlap fraction [default: 0.5]
    #[arg(long)]
    overlap: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    /// Compression factor [default: 1]
    #[arg(long)]
    alpha: Option<String>,
    /// Signal-to-noise ratio in dB [default: 10]
    #[arg(long)]
    snr_db: Option<String>,
    /// Bandwidth W in Hz [default: sample_rate/2]
    #[arg(long)]
    bandwidth: Option<String>,
    /// ICI power as a fraction of signal power [default: 0]
    #[arg(long)]
    ici_power: Option<String>,
    /// Symbol duration T in seconds [default: n/sample_rate]
    #[arg(long)]
    symbol_duration: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct RatesArgs {
    /// Compression factor [default: 1]
    #[arg(long)]
    alpha: Option<String>,
    /// Transform kind, frct or frht [default: frct]
    #[arg(long)]
    kind: Option<String>,
    /// Subcarriers [default: 256]
    #[arg(long)]
    n: Option<String>,
    /// Samples per second [default: 10e9]
    #[arg(long)]
    sample_rate: Option<String>,
    /// Cyclic prefix samples [default: n/16]
    #[arg(long)]
    cp_len: Option<String>,
    /// PAM order [default: 2]
    #[arg(long)]
    pam_order: Option<String>,
    /// Data symbols per frame [default: 128]
    #[arg(long)]
    data_symbols: Option<String>,
    /// Training symbols per frame [default: 10]
    #[arg(long)]
    training_symbols: Option<String>,
    /// Sync symbols per frame [default: 1]
    #[arg(long)]
    sync_symbols: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Config(ConfigError),
    Core(nofdm_core::Error),
    Io(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Config(_) => "config",
            Failure::Core(nofdm_core::Error::Parameter { .. }) => "parameter",
            Failure::Core(nofdm_core::Error::Io { .. }) | Failure::Io(_) => "io",
            Failure::Core(_) => "runtime",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Config(e) => e.to_string(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<nofdm_core::Error> for Failure {
    fn from(e: nofdm_core::Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let line = ErrorLine {
                error: f.kind(),
                message: f.message(),
            };
            eprintln!("{}", serde_json::to_string(&line).expect("error line serialises"));
            ExitCode::FAILURE
        }
    }
}

struct Resolved {
    settings: Settings,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn resolve(command: &Command) -> Result<Resolved, Failure> {
    let common = command.common();
    if let Some(path) = &common.manifest {
        let overrides = command.overrides();
        if let Some((_, flag, _)) = overrides.first() {
            return Err(Failure::Usage(format!("{flag} cannot be combined with --manifest")));
        }
        let manifest = RunManifest::read(path).map_err(Failure::Io)?;
        if manifest.command != command.name() {
            return Err(Failure::Usage(format!(
                "manifest {} records `{}`, not `{}`",
                path.display(),
                manifest.command,
                command.name()
            )));
        }
        manifest
            .settings
            .validate()
            .map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e.message)))?;
        return Ok(Resolved {
            out: common.out.clone().or_else(|| manifest.outputs.first().map(PathBuf::from)),
            format: common.format.or(Some(manifest.format)),
            settings: manifest.settings,
        });
    }
    let mut entries = match &common.config {
        Some(path) => Entries::load(path)?,
        None => Entries::default(),
    };
    for (key, flag, value) in command.overrides() {
        entries.set_flag(key, flag, value);
    }
    Ok(Resolved {
        settings: Settings::resolve(&entries)?,
        format: common.format,
        out: common.out.clone(),
    })
}

fn execution(common: &CommonArgs) -> Execution {
    if common.single_thread {
        return Execution::Sequential;
    }
    let workers = common
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Execution::with_workers(workers)
}

fn run(command: &Command) -> Result<(), Failure> {
    let Resolved { settings, format, out } = resolve(command)?;
    let exec = execution(command.common());
    let s = &settings;
    let rendered = match command {
        Command::SweepBer(_) => {
            let spec = s.sweep_spec();
            let result = berlab::run_ber_sweep_with(&spec, exec, |p| eprintln!("{}", point_summary(p)))?;
            for target in [FEC_LIMIT_7PCT, FEC_LIMIT_20PCT] {
                for (curve, crossing) in required_ebn0_at_ber(&result, target)? {
                    let at = match crossing {
                        Crossing::At(x) => format!("{x:.2} dB"),
                        Crossing::Floor => "floor".into(),
                        Crossing::AllBelow => "all points below".into(),
                    };
                    eprintln!(
                        "{} alpha={} I={} Eb/N0 at BER {target:e}: {at}",
                        curve.kind, curve.alpha, curve.iterations
                    );
                }
            }
            Some(berlab::render(&result, format.unwrap_or(Format::Csv))?)
        }
        Command::CorrRow(_) => {
            let row = CorrelationRow::new(s.modem.kind, s.modem.n, s.modem.alpha, s.corr_k)?;
            let ici: f64 = row
                .abs_c
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != s.corr_k)
                .map(|(_, v)| v * v)
                .sum();
            eprintln!(
                "{} n={} alpha={} k={}: C[k][k]={:.6} ici_power={ici:.6}",
                row.kind, row.n, row.alpha, row.k, row.abs_c[row.k]
            );
            Some(berlab::render(&row, format.unwrap_or(Format::Csv))?)
        }
        Command::IciPdf(_) => {
            let study = IciStudy::new(&s.modem, s.ici_symbols, s.seed, exec)?;
            eprintln!(
                "{} n={} alpha={} symbols={}: sigma={:.5} ks={:.5}",
                s.modem.kind, study.n, study.alpha, study.symbols, study.sigma, study.ks_distance
            );
            Some(berlab::render(&study, format.unwrap_or(Format::Csv))?)
        }
        Command::Psd(_) => {
            let psd = berlab::estimate_psd(&s.modem, s.psd.frames, s.seed, s.psd.segment, s.psd.overlap)?;
            eprintln!(
                "{} alpha={}: -10 dB edge at {:.3} GHz",
                s.modem.kind,
                s.modem.alpha,
                psd.edge_hz(-10.0) / 1e9
            );
            Some(berlab::render(&psd, format.unwrap_or(Format::Csv))?)
        }
        Command::Capacity(_) => {
            let report = capacity_report(&s.capacity_params())?;
            let text = format!(
                "shannon limit          {:.6e} bit/s\n\
                 ftn capacity bound     {:.6e} bit/s\n\
                 log2 M                 {:.6e}\n\
                 signal dimensions      {:.6e}\n",
                report.shannon_limit,
                report.capacity_ftn,
                report.log2_distinguishable_signals,
                report.signal_dimensions
            );
            summary_or_render(&report, text, format, &out)?
        }
        Command::Rates(_) => {
            let r = rate_report(&s.modem);
            let text = format!(
                "symbol rate            {:.3} GS/s\n\
                 nyquist rate           {:.3} Gb/s\n\
                 baseband bandwidth     {:.3} GHz\n\
                 subcarrier spacing     {:.3} MHz\n\
                 net bit rate           {:.3} Gb/s\n\
                 ftn gain               {:.4}\n",
                r.symbol_rate / 1e9,
                r.nyquist_rate / 1e9,
                r.baseband_bandwidth / 1e9,
                r.subcarrier_spacing / 1e6,
                r.net_bit_rate / 1e9,
                r.symbol_rate / r.nyquist_rate
            );
            summary_or_render(&r, text, format, &out)?
        }
    };
    let Some(body) = rendered else { return Ok(()) };
    match &out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))?;
        }
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let manifest = RunManifest::new(
                command.name(),
                settings.clone(),
                format.unwrap_or(default_format(command)),
                vec![path.display().to_string()],
            );
            let manifest_path = RunManifest::path_for(path);
            manifest.write(&manifest_path).map_err(Failure::Io)?;
            eprintln!("wrote {} and {}", path.display(), manifest_path.display());
        }
    }
    Ok(())
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Capacity(_) | Command::Rates(_) => Format::Json,
        _ => Format::Csv,
    }
}

/// Record-style commands print a human summary unless a file or format
/// was requested.
fn summary_or_render<T: Tabular + Serialize>(
    record: &T,
    summary: String,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<Option<String>, Failure> {
    if format.is_none() && out.is_none() {
        print!("{summary}");
        return Ok(None);
    }
    Ok(Some(berlab::render(record, format.unwrap_or(Format::Json))?))
}

fn point_summary(p: &BerPoint) -> String {
    format!(
        "{} alpha={} Eb/N0={} dB I={}: ber={:.3e} [{:.3e}, {:.3e}] ({} errors / {} bits)",
        p.kind, p.alpha, p.ebn0_db, p.iterations, p.ber, p.ci_lo, p.ci_hi, p.errors, p.bits
    )
}

