//! Monte Carlo experiment harness.
//!
//! * [`run_ber_sweep`] walks a grid of transform kinds, compression factors,
//!   ID iteration counts and Eb/N0 values and estimates the bit error rate of
//!   the full chain `bits → PAM → transmit → AWGN → receive → ID → demap`.
//! * [`required_ebn0_at_ber`] reads the Eb/N0 at which each curve crosses a
//!   target BER.
//! * [`estimate_psd`] is a Welch estimate of the transmitted spectrum.
//! * [`export_results`] writes any of the harness outputs as CSV or JSON.
//!
//! Randomness is organised in batches of `batch_symbols` multicarrier
//! symbols. Batch `b` at Eb/N0 value `x` draws its bits and noise from seed
//! `derive_seed(seed, x.to_bits(), b)`, so every curve of a sweep sees the
//! same data and standardised noise at a given Eb/N0, and the result does
//! not depend on how batches are spread over threads.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::capacity::CapacityReport;
use crate::channel::{self, AwgnSpec};
use crate::equalize::{IdConfig, IdEqualizer, IdTrace, ThresholdOrder};
use crate::icimodel::{CorrelationMatrix, IciHistogram, IciPdfModel};
use crate::modem::{self, ModemConfig, PamAlphabet, RateReport, SymbolFrame};
use crate::parallel::Execution;
use crate::rng::{self, Purpose};
use crate::stats::{wilson_interval, Z_95};
use crate::transforms::TransformKind;
use crate::{Error, Result};

/// Pre-FEC BER threshold of a 7%-overhead hard-decision code.
pub const FEC_LIMIT_7PCT: f64 = 3.8e-3;
/// Pre-FEC BER threshold of a 20%-overhead soft-decision code.
pub const FEC_LIMIT_20PCT: f64 = 2.0e-2;

/// Smallest allowed per-point bit cap.
pub const MIN_MAX_BITS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Transceiver parameters; `alpha` and `kind` are overridden by the axes.
    pub base: ModemConfig,
    pub alphas: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    pub iterations: Vec<usize>,
    pub kinds: Vec<TransformKind>,
    /// A point stops once its bit count reaches `max_bits`...
    pub max_bits: u64,
    /// ...or once it has at least `min_bits` bits and `min_errors` errors.
    pub min_errors: u64,
    pub min_bits: u64,
    pub seed: u64,
    pub batch_symbols: usize,
    #[serde(default)]
    pub threshold_order: ThresholdOrder,
}

impl SweepSpec {
    /// Sweep over Eb/N0 for one `(kind, alpha, iterations)` curve with the
    /// default stopping rule: 100 errors or 4096 symbols' worth of bits.
    pub fn new(base: ModemConfig) -> Self {
        let max_bits = (base.n * base.bits_per_symbol() * 4096) as u64;
        SweepSpec {
            alphas: vec![base.alpha],
            kinds: vec![base.kind],
            ebn0_db: (0..=10).map(|i| 2.0 * i as f64).collect(),
            iterations: vec![20],
            max_bits: max_bits.max(MIN_MAX_BITS),
            min_errors: 100,
            min_bits: 0,
            seed: 0,
            batch_symbols: 64,
            threshold_order: ThresholdOrder::default(),
            base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.alphas.is_empty() {
            return Err(Error::parameter("alphas", "must list at least one value"));
        }
        if self.ebn0_db.is_empty() {
            return Err(Error::parameter("ebn0_db", "must list at least one value"));
        }
        if self.iterations.is_empty() {
            return Err(Error::parameter("iterations", "must list at least one value"));
        }
        if self.kinds.is_empty() {
            return Err(Error::parameter("kinds", "must list at least one value"));
        }
        for &alpha in &self.alphas {
            ModemConfig {
                alpha,
                ..self.base.clone()
            }
            .validate()?;
        }
        if self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::parameter("ebn0_db", "must be finite"));
        }
        if self.max_bits < MIN_MAX_BITS {
            return Err(Error::parameter(
                "max_bits",
                format!("must be at least {MIN_MAX_BITS}, got {}", self.max_bits),
            ));
        }
        if self.batch_symbols == 0 {
            return Err(Error::parameter("batch_symbols", "must be at least 1"));
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.alphas.len() * self.ebn0_db.len() * self.iterations.len() * self.kinds.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub kind: TransformKind,
    pub alpha: f64,
    pub ebn0_db: f64,
    pub iterations: usize,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl BerPoint {
    pub fn new(
        kind: TransformKind,
        alpha: f64,
        ebn0_db: f64,
        iterations: usize,
        bits: u64,
        errors: u64,
    ) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(errors, bits, Z_95);
        BerPoint {
            kind,
            alpha,
            ebn0_db,
            iterations,
            bits,
            errors,
            ber: if bits == 0 { 0.0 } else { errors as f64 / bits as f64 },
            ci_lo,
            ci_hi,
        }
    }

    pub fn curve(&self) -> CurveKey {
        CurveKey {
            kind: self.kind,
            alpha: self.alpha,
            iterations: self.iterations,
        }
    }
}

/// Identifies one BER-vs-Eb/N0 curve of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveKey {
    pub kind: TransformKind,
    pub alpha: f64,
    pub iterations: usize,
}

/// Stopping rule recorded alongside JSON results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub max_bits: u64,
    pub min_errors: u64,
    pub min_bits: u64,
    pub batch_symbols: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BerSweepResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopping: Option<StoppingRule>,
    pub records: Vec<BerPoint>,
}

impl BerSweepResult {
    pub fn get(&self, kind: TransformKind, alpha: f64, iterations: usize, ebn0_db: f64) -> Option<&BerPoint> {
        self.records.iter().find(|p| {
            p.kind == kind && p.alpha == alpha && p.iterations == iterations && p.ebn0_db == ebn0_db
        })
    }

    /// Records grouped by curve, in first-appearance order, each sorted by
    /// Eb/N0.
    pub fn curves(&self) -> Vec<(CurveKey, Vec<BerPoint>)> {
        let mut out: Vec<(CurveKey, Vec<BerPoint>)> = Vec::new();
        for p in &self.records {
            match out.iter_mut().find(|(k, _)| *k == p.curve()) {
                Some((_, pts)) => pts.push(*p),
                None => out.push((p.curve(), vec![*p])),
            }
        }
        for (_, pts) in &mut out {
            pts.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
        }
        out
    }
}

struct BatchOutcome {
    bits: u64,
    errors: u64,
}

/// Everything needed to simulate one `(kind, alpha, iterations)` curve.
struct CurveChain {
    config: ModemConfig,
    plan: crate::TransformPlan,
    equalizer: IdEqualizer,
    alphabet: PamAlphabet,
}

impl CurveChain {
    fn new(spec: &SweepSpec, kind: TransformKind, alpha: f64, iterations: usize) -> Result<Self> {
        // Sync and training rows play no part in the AWGN chain and are left
        // out of the Eb accounting, so the simulated frames hold data only.
        let config = ModemConfig {
            kind,
            alpha,
            training_symbols: 0,
            sync_symbols: 0,
            ..spec.base.clone()
        };
        let plan = config.plan()?;
        let matrix = CorrelationMatrix::new(kind, config.n, alpha)?;
        let equalizer = IdEqualizer::new(
            IdConfig {
                iterations,
                pam_order: config.pam_order,
                order: spec.threshold_order,
            },
            &matrix,
        )?;
        Ok(CurveChain {
            alphabet: PamAlphabet::new(config.pam_order)?,
            config,
            plan,
            equalizer,
        })
    }

    fn run_batch(&self, seed: u64, ebn0_db: f64, symbols: usize) -> Result<BatchOutcome> {
        let n = self.config.n;
        let nbits = symbols * n * self.alphabet.bits_per_symbol();
        let mut rng = rng::stream(seed, rng::stream_id(Purpose::Bits, 0, 0));
        let bits: Vec<u8> = (0..nbits).map(|_| rng.random_range(0..2u8)).collect();
        let frame = SymbolFrame::from_rows(n, self.alphabet.map(&bits)?)?;
        let clean = modem::transmit_with_plan(&self.config, &self.plan, &frame)?;
        let awgn = AwgnSpec {
            eb_n0_db: ebn0_db,
            bits_per_sample: self.config.data_bits_per_sample(),
            rng_seed: seed,
        };
        let noisy = channel::apply_awgn(&awgn, &clean)?;
        let rx = modem::receive_with_plan(&self.config, &self.plan, &noisy)?;
        let symbols_hat = self.equalizer.equalize_rows(rx.data.values())?;
        let decided = self.alphabet.demap(&symbols_hat);
        let errors = decided.iter().zip(&bits).filter(|(a, b)| a != b).count() as u64;
        Ok(BatchOutcome {
            bits: nbits as u64,
            errors,
        })
    }
}

fn simulate_point(
    spec: &SweepSpec,
    chain: &CurveChain,
    ebn0_db: f64,
    execution: Execution,
) -> Result<(u64, u64)> {
    let bits_per_batch = (spec.batch_symbols * chain.config.n * chain.alphabet.bits_per_symbol()) as u64;
    let round = (execution.workers() * 2).max(1);
    let (mut bits, mut errors) = (0u64, 0u64);
    let mut next = 0u64;
    loop {
        // Never schedule batches beyond the bit cap.
        let remaining = spec.max_bits.saturating_sub(bits).div_ceil(bits_per_batch).max(1);
        let count = (round as u64).min(remaining) as usize;
        let outcomes = execution.map(count, |j| {
            let b = next + j as u64;
            let seed = rng::derive_seed(spec.seed, ebn0_db.to_bits(), b);
            chain.run_batch(seed, ebn0_db, spec.batch_symbols)
        });
        for outcome in outcomes {
            let outcome = outcome?;
            bits += outcome.bits;
            errors += outcome.errors;
            next += 1;
            let enough = bits >= spec.min_bits && errors >= spec.min_errors;
            if enough || bits >= spec.max_bits {
                return Ok((bits, errors));
            }
        }
    }
}

/// Runs every grid point in the order kind → alpha → iterations → Eb/N0.
pub fn run_ber_sweep(spec: &SweepSpec, execution: Execution) -> Result<BerSweepResult> {
    run_ber_sweep_with(spec, execution, |_| {})
}

/// [`run_ber_sweep`] calling `on_point` after each finished point.
pub fn run_ber_sweep_with(
    spec: &SweepSpec,
    execution: Execution,
    mut on_point: impl FnMut(&BerPoint),
) -> Result<BerSweepResult> {
    spec.validate()?;
    let mut records = Vec::with_capacity(spec.point_count());
    for &kind in &spec.kinds {
        for &alpha in &spec.alphas {
            for &iterations in &spec.iterations {
                let chain = CurveChain::new(spec, kind, alpha, iterations)?;
                for &ebn0 in &spec.ebn0_db {
                    let (bits, errors) = simulate_point(spec, &chain, ebn0, execution)?;
                    let point = BerPoint::new(kind, alpha, ebn0, iterations, bits, errors);
                    on_point(&point);
                    records.push(point);
                }
            }
        }
    }
    Ok(BerSweepResult {
        stopping: Some(StoppingRule {
            max_bits: spec.max_bits,
            min_errors: spec.min_errors,
            min_bits: spec.min_bits,
            batch_symbols: spec.batch_symbols,
            seed: spec.seed,
        }),
        records,
    })
}

/// Where a BER curve meets a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "ebn0_db", rename_all = "snake_case")]
pub enum Crossing {
    /// Interpolated Eb/N0 in dB.
    At(f64),
    /// Every point is above the target: the curve floors out.
    Floor,
    /// Already below the target at the lowest Eb/N0.
    AllBelow,
}

/// Crossing of one curve given as `(ebn0_db, ber)` pairs, interpolated
/// linearly in dB and logarithmically in BER. A bracketing point with zero
/// errors puts the crossing at that point.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Result<Crossing> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::parameter("target_ber", "must lie in (0, 1)"));
    }
    if points.is_empty() {
        return Err(Error::parameter("curve", "must hold at least one point"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sorted[0].1 < target {
        return Ok(Crossing::AllBelow);
    }
    for pair in sorted.windows(2) {
        let ((x0, b0), (x1, b1)) = (pair[0], pair[1]);
        if b0 >= target && b1 < target {
            if b1 <= 0.0 {
                return Ok(Crossing::At(x1));
            }
            let t = (target.ln() - b0.ln()) / (b1.ln() - b0.ln());
            return Ok(Crossing::At(x0 + t * (x1 - x0)));
        }
    }
    Ok(Crossing::Floor)
}

/// Crossing of every curve in `result`.
pub fn required_ebn0_at_ber(result: &BerSweepResult, target_ber: f64) -> Result<Vec<(CurveKey, Crossing)>> {
    result
        .curves()
        .into_iter()
        .map(|(key, pts)| {
            let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.ebn0_db, p.ber)).collect();
            Ok((key, crossing(&xy, target_ber)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Hann,
    Rectangular,
}

impl Window {
    /// Periodic window coefficients.
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; len],
            Window::Hann => (0..len)
                .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / len as f64).cos())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdEstimate {
    pub freqs_hz: Vec<f64>,
    /// One-sided density in dB relative to its peak.
    pub density_db: Vec<f64>,
    pub segment: usize,
    pub overlap: f64,
    pub window: Window,
}

impl PsdEstimate {
    /// Highest frequency whose density is at or above `level_db`.
    pub fn edge_hz(&self, level_db: f64) -> f64 {
        self.freqs_hz
            .iter()
            .zip(&self.density_db)
            .filter(|(_, &d)| d >= level_db)
            .map(|(&f, _)| f)
            .fold(0.0, f64::max)
    }
}

/// Welch averaged periodogram, one-sided, in linear units per Hz.
pub fn welch(
    samples: &[f64],
    sample_rate: f64,
    segment: usize,
    overlap: f64,
    window: Window,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if segment < 2 || !segment.is_power_of_two() {
        return Err(Error::parameter("segment", format!("must be a power of two >= 2, got {segment}")));
    }
    if segment > samples.len() {
        return Err(Error::parameter(
            "segment",
            format!("{segment} exceeds the {} available samples", samples.len()),
        ));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::parameter("overlap", "must lie in [0, 1)"));
    }
    let step = (segment - (overlap * segment as f64).round() as usize).max(1);
    let coeffs = window.coefficients(segment);
    let power: f64 = coeffs.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(segment);
    let bins = segment / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); segment];
    let mut count = 0usize;
    let mut start = 0;
    while start + segment <= samples.len() {
        for (b, (x, w)) in buf.iter_mut().zip(samples[start..start + segment].iter().zip(&coeffs)) {
            *b = Complex::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
        count += 1;
        start += step;
    }
    let scale = 1.0 / (sample_rate * power * count as f64);
    let psd: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let one_sided = if i == 0 || i == segment / 2 { 1.0 } else { 2.0 };
            a * scale * one_sided
        })
        .collect();
    let freqs = (0..bins).map(|i| i as f64 * sample_rate / segment as f64).collect();
    Ok((freqs, psd))
}

/// Welch estimate (Hann window) of the waveform of `frames` random frames.
pub fn estimate_psd(
    config: &ModemConfig,
    frames: usize,
    seed: u64,
    segment: usize,
    overlap: f64,
) -> Result<PsdEstimate> {
    config.validate()?;
    if frames == 0 {
        return Err(Error::parameter("frames", "must be at least 1"));
    }
    let plan = config.plan()?;
    let alphabet = PamAlphabet::new(config.pam_order)?;
    let n = config.n;
    let mut samples = Vec::new();
    for f in 0..frames {
        let mut rng = rng::stream(seed, rng::stream_id(Purpose::Psd, 0, f as u64));
        let nbits = config.data_symbols_per_frame * n * alphabet.bits_per_symbol();
        let bits: Vec<u8> = (0..nbits).map(|_| rng.random_range(0..2u8)).collect();
        let frame = SymbolFrame::from_rows(n, alphabet.map(&bits)?)?;
        samples.extend(modem::transmit_with_plan(config, &plan, &frame)?.into_samples());
    }
    let (freqs_hz, psd) = welch(&samples, config.sample_rate, segment, overlap, Window::Hann)?;
    let peak = psd.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
    let density_db = psd.iter().map(|&p| 10.0 * (p.max(1e-300) / peak).log10()).collect();
    Ok(PsdEstimate {
        freqs_hz,
        density_db,
        segment,
        overlap,
        window: Window::Hann,
    })
}

/// `|C[l][k]|` along one correlation-matrix row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub kind: TransformKind,
    pub n: usize,
    pub alpha: f64,
    pub k: usize,
    pub abs_c: Vec<f64>,
}

impl CorrelationRow {
    pub fn new(kind: TransformKind, n: usize, alpha: f64, k: usize) -> Result<Self> {
        let c = CorrelationMatrix::new(kind, n, alpha)?;
        let abs_c = c.row_profile(k)?.into_iter().map(|(_, v)| v).collect();
        Ok(CorrelationRow {
            kind,
            n,
            alpha,
            k,
            abs_c,
        })
    }
}

/// ICI histogram together with its fitted mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IciStudy {
    pub alpha: f64,
    pub n: usize,
    pub symbols: usize,
    pub sigma: f64,
    pub ks_distance: f64,
    pub mean: f64,
    pub histogram: IciHistogram,
}

impl IciStudy {
    pub fn new(config: &ModemConfig, symbols: usize, seed: u64, execution: Execution) -> Result<Self> {
        let histogram = crate::icimodel::ici_histogram(config, symbols, seed, execution)?;
        let model = histogram.fit_sigma();
        Ok(IciStudy {
            alpha: config.alpha,
            n: config.n,
            symbols,
            sigma: model.sigma(),
            ks_distance: histogram.ks_distance(&model),
            mean: histogram.mean(),
            histogram,
        })
    }

    pub fn model(&self) -> IciPdfModel {
        IciPdfModel::new(self.sigma).expect("fitted sigma is positive")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Harness outputs that can be written as CSV.
pub trait Tabular {
    fn header(&self) -> &'static str;
    fn write_rows(&self, out: &mut String);

    fn to_csv(&self) -> String {
        let mut out = String::from(self.header());
        out.push('\n');
        self.write_rows(&mut out);
        out
    }
}

pub const BER_CSV_HEADER: &str = "kind,alpha,ebn0_db,iterations,bits,errors,ber,ci_lo,ci_hi";

impl Tabular for BerSweepResult {
    fn header(&self) -> &'static str {
        BER_CSV_HEADER
    }

    fn write_rows(&self, out: &mut String) {
        for p in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                p.kind, p.alpha, p.ebn0_db, p.iterations, p.bits, p.errors, p.ber, p.ci_lo, p.ci_hi
            );
        }
    }
}

impl Tabular for PsdEstimate {
    fn header(&self) -> &'static str {
        "freq_hz,density_db"
    }

    fn write_rows(&self, out: &mut String) {
        for (f, d) in self.freqs_hz.iter().zip(&self.density_db) {
            let _ = writeln!(out, "{f},{d}");
        }
    }
}

impl Tabular for IciStudy {
    fn header(&self) -> &'static str {
        "bin_center,density"
    }

    fn write_rows(&self, out: &mut String) {
        let h = &self.histogram;
        for (c, d) in h.bin_centers().iter().zip(h.densities()) {
            let _ = writeln!(out, "{c},{d}");
        }
    }
}

impl Tabular for CorrelationRow {
    fn header(&self) -> &'static str {
        "l,abs_C_l_k"
    }

    fn write_rows(&self, out: &mut String) {
        for (l, v) in self.abs_c.iter().enumerate() {
            let _ = writeln!(out, "{l},{v}");
        }
    }
}

impl Tabular for IdTrace {
    fn header(&self) -> &'static str {
        "iteration,d,undecided_count"
    }

    fn write_rows(&self, out: &mut String) {
        for s in &self.steps {
            let _ = writeln!(out, "{},{},{}", s.iteration, s.d, s.undecided);
        }
    }
}

impl Tabular for CapacityReport {
    fn header(&self) -> &'static str {
        "alpha,bandwidth_hz,snr,ici_power,shannon_limit,capacity_ftn,log2_distinguishable_signals,log2_received_sphere_volume"
    }

    fn write_rows(&self, out: &mut String) {
        let p = &self.params;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.alpha,
            p.bandwidth_hz,
            p.snr(),
            p.ici_power,
            self.shannon_limit,
            self.capacity_ftn,
            self.log2_distinguishable_signals,
            self.log2_received_sphere_volume
        );
    }
}

impl Tabular for RateReport {
    fn header(&self) -> &'static str {
        "symbol_rate,nyquist_rate,baseband_bandwidth,baseband_bandwidth_exact,subcarrier_spacing,net_bit_rate"
    }

    fn write_rows(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            self.symbol_rate,
            self.nyquist_rate,
            self.baseband_bandwidth,
            self.baseband_bandwidth_exact,
            self.subcarrier_spacing,
            self.net_bit_rate
        );
    }
}

/// Serialises `result` in `format`.
pub fn render<T: Tabular + Serialize>(result: &T, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(result.to_csv()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).map_err(|e| Error::Framing(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Writes `result` to `path` in `format`.
pub fn export_results<T: Tabular + Serialize>(result: &T, path: &Path, format: Format) -> Result<()> {
    fs::write(path, render(result, format)?).map_err(|e| Error::io(path, e))
}

impl BerSweepResult {
    pub fn from_csv(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == BER_CSV_HEADER => {}
            Some((_, header)) => return Err(format!("unexpected header `{header}`")),
            None => return Err("empty file".into()),
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let line_no = i + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(format!("line {line_no}: expected 9 fields, got {}", fields.len()));
            }
            let f = |j: usize| -> std::result::Result<f64, String> {
                fields[j].parse::<f64>().map_err(|e| format!("line {line_no}: field {}: {e}", j + 1))
            };
            let u = |j: usize| -> std::result::Result<u64, String> {
                fields[j].parse::<u64>().map_err(|e| format!("line {line_no}: field {}: {e}", j + 1))
            };
            records.push(BerPoint {
                kind: fields[0].parse().map_err(|e| format!("line {line_no}: {e}"))?,
                alpha: f(1)?,
                ebn0_db: f(2)?,
                iterations: u(3)? as usize,
                bits: u(4)?,
                errors: u(5)?,
                ber: f(6)?,
                ci_lo: f(7)?,
                ci_hi: f(8)?,
            });
        }
        Ok(BerSweepResult {
            stopping: None,
            records,
        })
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn import(path: &Path, format: Format) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parsed = match format {
            Format::Csv => Self::from_csv(&text),
            Format::Json => Self::from_json(&text),
        };
        parsed.map_err(|message| Error::parse(path, 0, message))
    }
}
