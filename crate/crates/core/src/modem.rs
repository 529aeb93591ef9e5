//! Transmit/receive chain: Gray-coded PAM, frame assembly, cyclic prefix and
//! sample-stream serialisation.
//!
//! A transmitted frame is laid out as `sync | training | data`, one
//! multicarrier symbol per block of `cp_len + n` samples. Sync and training
//! rows are fixed pseudo-random ±1 patterns; the AWGN simulations carry them
//! only so frame and rate accounting match the optical experiment.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::{self, Purpose};
use crate::transforms::{validate_size_alpha, TransformKind, TransformPlan};
use crate::{Error, Result};

const PILOT_SEED: u64 = 0x5EED_F2C7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModemConfig {
    pub n: usize,
    pub alpha: f64,
    pub kind: TransformKind,
    pub pam_order: usize,
    pub cp_len: usize,
    pub data_symbols_per_frame: usize,
    pub training_symbols: usize,
    pub sync_symbols: usize,
    /// Samples per second; used for rate and bandwidth reporting.
    pub sample_rate: f64,
}

impl ModemConfig {
    /// Parameters of the 10 GS/s optical experiment: 256 subcarriers,
    /// 16 CP samples, 128 data + 10 training + 1 sync symbols per frame, 2-PAM.
    pub fn baseline(alpha: f64) -> Self {
        ModemConfig {
            n: 256,
            alpha,
            kind: TransformKind::Frct,
            pam_order: 2,
            cp_len: 16,
            data_symbols_per_frame: 128,
            training_symbols: 10,
            sync_symbols: 1,
            sample_rate: 10e9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_size_alpha(self.n, self.alpha)?;
        PamAlphabet::new(self.pam_order)?;
        if self.cp_len > self.n {
            return Err(Error::parameter(
                "cp_len",
                format!("must not exceed n = {}, got {}", self.n, self.cp_len),
            ));
        }
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::parameter("sample_rate", "must be positive"));
        }
        Ok(())
    }

    pub fn plan(&self) -> Result<TransformPlan> {
        TransformPlan::new(self.kind, self.n, self.alpha)
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.pam_order.trailing_zeros() as usize
    }

    /// Samples per multicarrier symbol including the cyclic prefix.
    pub fn block_len(&self) -> usize {
        self.n + self.cp_len
    }

    pub fn overhead_symbols(&self) -> usize {
        self.sync_symbols + self.training_symbols
    }

    /// Information bits per transmitted sample within the data symbols
    /// (cyclic prefix counted, sync/training excluded).
    pub fn data_bits_per_sample(&self) -> f64 {
        self.bits_per_symbol() as f64 * self.n as f64 / self.block_len() as f64
    }
}

/// Gray-coded, unit-average-energy M-PAM alphabet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PamAlphabet {
    order: usize,
    bits: usize,
    scale: f64,
}

impl PamAlphabet {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 || !order.is_power_of_two() {
            return Err(Error::parameter(
                "pam_order",
                format!("must be a power of two >= 2, got {order}"),
            ));
        }
        let m = order as f64;
        Ok(PamAlphabet {
            order,
            bits: order.trailing_zeros() as usize,
            scale: (3.0 / (m * m - 1.0)).sqrt(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits
    }

    /// Amplitude of level `index`, levels ascending.
    pub fn level(&self, index: usize) -> f64 {
        (2.0 * index as f64 - (self.order as f64 - 1.0)) * self.scale
    }

    pub fn levels(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.level(i)).collect()
    }

    /// Half the distance between adjacent levels.
    pub fn half_spacing(&self) -> f64 {
        self.scale
    }

    /// Index of the nearest level; exact midpoints go to the lower level.
    pub fn nearest_index(&self, value: f64) -> usize {
        let position = (value / self.scale + (self.order as f64 - 1.0)) / 2.0;
        let index = (position - 0.5).ceil();
        if index.is_nan() || index <= 0.0 {
            0
        } else {
            (index as usize).min(self.order - 1)
        }
    }

    pub fn map(&self, bits: &[u8]) -> Result<Vec<f64>> {
        if bits.len() % self.bits != 0 {
            return Err(Error::Framing(format!(
                "{} bits do not divide into {}-bit PAM symbols",
                bits.len(),
                self.bits
            )));
        }
        Ok(bits
            .chunks_exact(self.bits)
            .map(|chunk| {
                let gray = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
                self.level(gray_to_index(gray))
            })
            .collect())
    }

    pub fn demap(&self, values: &[f64]) -> Vec<u8> {
        let mut bits = Vec::with_capacity(values.len() * self.bits);
        for &v in values {
            let gray = index_to_gray(self.nearest_index(v));
            for shift in (0..self.bits).rev() {
                bits.push(((gray >> shift) & 1) as u8);
            }
        }
        bits
    }
}

fn index_to_gray(index: usize) -> usize {
    index ^ (index >> 1)
}

fn gray_to_index(mut gray: usize) -> usize {
    let mut index = gray;
    while gray > 0 {
        gray >>= 1;
        index ^= gray;
    }
    index
}

/// Maps bits (any nonzero byte counts as a one) to normalised M-PAM levels.
/// For `m = 2` bit 0 maps to −1 and bit 1 to +1.
pub fn pam_map(bits: &[u8], m: usize) -> Result<Vec<f64>> {
    PamAlphabet::new(m)?.map(bits)
}

/// Hard-decision inverse of [`pam_map`].
pub fn pam_demap(values: &[f64], m: usize) -> Result<Vec<u8>> {
    Ok(PamAlphabet::new(m)?.demap(values))
}

/// Multicarrier symbols in the frequency domain, one row per symbol.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolFrame {
    n: usize,
    values: Vec<f64>,
}

impl SymbolFrame {
    pub fn from_rows(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || values.len() % n != 0 {
            return Err(Error::Framing(format!(
                "{} values do not form rows of length {n}",
                values.len()
            )));
        }
        Ok(SymbolFrame { n, values })
    }

    pub fn empty(n: usize) -> Self {
        SymbolFrame {
            n,
            values: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.values.len() / self.n
        }
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.values[index * self.n..(index + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Checks every entry is a level of the `m`-PAM alphabet.
    pub fn check_alphabet(&self, m: usize) -> Result<()> {
        let alphabet = PamAlphabet::new(m)?;
        for (i, &v) in self.values.iter().enumerate() {
            let level = alphabet.level(alphabet.nearest_index(v));
            if (v - level).abs() > 1e-12 {
                return Err(Error::Framing(format!(
                    "entry {i} = {v} is not a {m}-PAM level"
                )));
            }
        }
        Ok(())
    }
}

/// Demodulated frame split by role.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    pub sync: SymbolFrame,
    pub training: SymbolFrame,
    pub data: SymbolFrame,
}

/// Real time-domain waveform made of `block_len`-sample blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStream {
    samples: Vec<f64>,
    block_len: usize,
}

impl SampleStream {
    pub fn new(samples: Vec<f64>, block_len: usize) -> Result<Self> {
        if block_len == 0 || samples.len() % block_len != 0 {
            return Err(Error::Framing(format!(
                "{} samples are not a whole number of {block_len}-sample blocks",
                samples.len()
            )));
        }
        Ok(SampleStream { samples, block_len })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn blocks(&self) -> usize {
        self.samples.len() / self.block_len
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Little-endian IEEE-754 doubles, no header.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.samples.iter().flat_map(|s| s.to_le_bytes()).collect()
    }

    pub fn from_le_bytes(bytes: &[u8], block_len: usize) -> Result<Self> {
        if bytes.len() % 8 != 0 {
            return Err(Error::Framing(format!(
                "{} bytes is not a whole number of f64 samples",
                bytes.len()
            )));
        }
        let samples = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        SampleStream::new(samples, block_len)
    }

    /// One sample per line, shortest round-tripping decimal form.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 20);
        for s in &self.samples {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str, block_len: usize) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = line.parse::<f64>().map_err(|e| {
                Error::Framing(format!("line {}: `{line}` is not a sample: {e}", i + 1))
            })?;
            samples.push(v);
        }
        SampleStream::new(samples, block_len)
    }

    pub fn write_binary(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_le_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read_binary(path: &Path, block_len: usize) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_le_bytes(&bytes, block_len)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path, block_len: usize) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text, block_len)
    }
}

fn pilot_row(n: usize, which: u64) -> Vec<f64> {
    let mut rng = rng::stream(PILOT_SEED, rng::stream_id(Purpose::Pilot, which, n as u64));
    (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// Fixed ±1 synchronisation row for `n` subcarriers.
pub fn sync_row(n: usize) -> Vec<f64> {
    pilot_row(n, 0)
}

/// Fixed ±1 training row for `n` subcarriers, repeated for every training
/// symbol.
pub fn training_row(n: usize) -> Vec<f64> {
    pilot_row(n, 1)
}

/// Multiplexes `sync | training | data` rows and prefixes each block with its
/// last `cp_len` samples.
pub fn transmit(config: &ModemConfig, data: &SymbolFrame) -> Result<SampleStream> {
    config.validate()?;
    let plan = config.plan()?;
    transmit_with_plan(config, &plan, data)
}

/// [`transmit`] with a plan built once by the caller.
pub fn transmit_with_plan(
    config: &ModemConfig,
    plan: &TransformPlan,
    data: &SymbolFrame,
) -> Result<SampleStream> {
    let n = config.n;
    if data.n() != n && data.rows() > 0 {
        return Err(Error::Shape {
            what: "frame row",
            expected: n,
            actual: data.n(),
        });
    }
    let mut rows = Vec::with_capacity((config.overhead_symbols() + data.rows()) * n);
    if config.sync_symbols > 0 {
        let sync = sync_row(n);
        for _ in 0..config.sync_symbols {
            rows.extend_from_slice(&sync);
        }
    }
    if config.training_symbols > 0 {
        let training = training_row(n);
        for _ in 0..config.training_symbols {
            rows.extend_from_slice(&training);
        }
    }
    rows.extend_from_slice(data.values());

    let bodies = plan.multiplex_rows(&rows)?;
    let cp = config.cp_len;
    let block = config.block_len();
    let mut samples = Vec::with_capacity(bodies.len() / n * block);
    for body in bodies.chunks_exact(n) {
        samples.extend_from_slice(&body[n - cp..]);
        samples.extend_from_slice(body);
    }
    SampleStream::new(samples, block)
}

/// Strips the cyclic prefix and demultiplexes every block. Outputs are the
/// raw pre-equalisation values `C·S + noise`.
pub fn receive(config: &ModemConfig, stream: &SampleStream) -> Result<ReceivedFrame> {
    config.validate()?;
    let plan = config.plan()?;
    receive_with_plan(config, &plan, stream)
}

/// [`receive`] with a plan built once by the caller.
pub fn receive_with_plan(
    config: &ModemConfig,
    plan: &TransformPlan,
    stream: &SampleStream,
) -> Result<ReceivedFrame> {
    let n = config.n;
    let block = config.block_len();
    if stream.block_len() != block {
        return Err(Error::Framing(format!(
            "stream block length {} does not match configured {block}",
            stream.block_len()
        )));
    }
    let samples = stream.samples();
    if samples.len() % block != 0 {
        return Err(Error::Framing(format!(
            "stream of {} samples is not a whole number of {block}-sample blocks",
            samples.len()
        )));
    }
    let blocks = samples.len() / block;
    let overhead = config.overhead_symbols();
    if blocks < overhead {
        return Err(Error::Framing(format!(
            "stream holds {blocks} blocks but the frame needs {overhead} sync/training symbols"
        )));
    }
    let mut bodies = Vec::with_capacity(blocks * n);
    for chunk in samples.chunks_exact(block) {
        bodies.extend_from_slice(&chunk[config.cp_len..]);
    }
    let mut outputs = plan.demultiplex_rows(&bodies)?;
    let data = outputs.split_off(overhead * n);
    let training = outputs.split_off(config.sync_symbols * n);
    Ok(ReceivedFrame {
        sync: SymbolFrame { n, values: outputs },
        training: SymbolFrame {
            n,
            values: training,
        },
        data: SymbolFrame { n, values: data },
    })
}

/// Rate and bandwidth figures for a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// Samples (symbols) per second.
    pub symbol_rate: f64,
    /// Twice the approximate baseband bandwidth.
    pub nyquist_rate: f64,
    /// Large-`N` bandwidth `N·spacing`.
    pub baseband_bandwidth: f64,
    /// `(N−1)·spacing + 1/T`.
    pub baseband_bandwidth_exact: f64,
    pub subcarrier_spacing: f64,
    /// Information rate after CP and sync/training overhead.
    pub net_bit_rate: f64,
}

pub fn rate_report(config: &ModemConfig) -> RateReport {
    let n = config.n as f64;
    let fs = config.sample_rate;
    let symbol_duration = n / fs;
    let spacing = match config.kind {
        TransformKind::Frct => config.alpha / (2.0 * symbol_duration),
        TransformKind::Frht => config.alpha / symbol_duration,
    };
    let bandwidth = n * spacing;
    let frame_symbols =
        (config.data_symbols_per_frame + config.overhead_symbols()).max(1) as f64;
    let net_bit_rate = config.bits_per_symbol() as f64
        * fs
        * (n / config.block_len() as f64)
        * (config.data_symbols_per_frame as f64 / frame_symbols);
    RateReport {
        symbol_rate: fs,
        nyquist_rate: 2.0 * bandwidth,
        baseband_bandwidth: bandwidth,
        baseband_bandwidth_exact: (n - 1.0) * spacing + 1.0 / symbol_duration,
        subcarrier_spacing: spacing,
        net_bit_rate,
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;
    use crate::icimodel::CorrelationMatrix;

    fn random_frame(n: usize, rows: usize, seed: u64) -> SymbolFrame {
        let mut rng = rng::stream(seed, 0);
        let values = (0..n * rows)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        SymbolFrame::from_rows(n, values).unwrap()
    }

    fn small_config(alpha: f64, cp_len: usize) -> ModemConfig {
        ModemConfig {
            n: 16,
            cp_len,
            data_symbols_per_frame: 4,
            training_symbols: 2,
            sync_symbols: 1,
            ..ModemConfig::baseline(alpha)
        }
    }

    #[test]
    fn binary_mapping_convention() {
        assert_eq!(pam_map(&[0, 1], 2).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(pam_demap(&[-0.2, 0.9], 2).unwrap(), vec![0, 1]);
        assert_eq!(pam_demap(&[0.0], 2).unwrap(), vec![0]);
    }

    #[test]
    fn four_pam_is_unit_energy_and_gray() {
        let bits = [0, 0, 0, 1, 1, 1, 1, 0];
        let levels = pam_map(&bits, 4).unwrap();
        let mut sorted = levels.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
        let energy = levels.iter().map(|x| x * x).sum::<f64>() / 4.0;
        assert_abs_diff_eq!(energy, 1.0, epsilon = 1e-12);
        // adjacent levels differ in one bit
        let alphabet = PamAlphabet::new(4).unwrap();
        for i in 0..3 {
            let a = alphabet.demap(&[alphabet.level(i)]);
            let b = alphabet.demap(&[alphabet.level(i + 1)]);
            let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn mapping_errors() {
        assert!(matches!(pam_map(&[0, 1, 1], 4), Err(Error::Framing(_))));
        assert!(pam_map(&[0, 1], 3).is_err());
        assert!(pam_demap(&[0.0], 1).is_err());
    }

    #[test]
    fn demap_round_trip_many_vectors() {
        let mut rng = rng::stream(11, 0);
        for m in [2usize, 4] {
            let alphabet = PamAlphabet::new(m).unwrap();
            for _ in 0..10_000 {
                let len = alphabet.bits_per_symbol() * rng.random_range(1..8);
                let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..2)).collect();
                let levels = alphabet.map(&bits).unwrap();
                assert_eq!(alphabet.demap(&levels), bits);
            }
        }
    }

    #[test]
    fn cp_is_a_copy_of_the_block_tail() {
        let config = ModemConfig::baseline(0.8);
        let frame = random_frame(256, 3, 5);
        let stream = transmit(&config, &frame).unwrap();
        assert_eq!(stream.block_len(), 272);
        assert_eq!(stream.blocks(), 3 + config.overhead_symbols());
        for block in stream.samples().chunks_exact(272) {
            assert_eq!(&block[..16], &block[256..272]);
        }
    }

    #[test]
    fn no_cp_single_symbol_is_plain_multiplex() {
        let config = ModemConfig {
            cp_len: 0,
            training_symbols: 0,
            sync_symbols: 0,
            ..small_config(0.8, 0)
        };
        let frame = random_frame(16, 1, 2);
        let stream = transmit(&config, &frame).unwrap();
        let direct = config.plan().unwrap().multiplex(frame.row(0)).unwrap();
        for (a, b) in stream.samples().iter().zip(&direct) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn loopback_at_unit_alpha_and_cp_lengths() {
        for cp in [0, 1, 4, 16] {
            let config = small_config(1.0, cp);
            let frame = random_frame(16, 6, cp as u64);
            let rx = receive(&config, &transmit(&config, &frame).unwrap()).unwrap();
            for (a, b) in rx.data.values().iter().zip(frame.values()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
            }
            assert_eq!(rx.sync.rows(), 1);
            assert_eq!(rx.training.rows(), 2);
            for (a, b) in rx.training.row(1).iter().zip(training_row(16)) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn loopback_below_unit_alpha_is_correlation_matrix() {
        let config = small_config(0.8, 4);
        let frame = random_frame(16, 5, 9);
        let rx = receive(&config, &transmit(&config, &frame).unwrap()).unwrap();
        let c = CorrelationMatrix::new(TransformKind::Frct, 16, 0.8).unwrap();
        for r in 0..frame.rows() {
            let expected = c.apply(frame.row(r)).unwrap();
            for (a, b) in rx.data.row(r).iter().zip(&expected) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn truncated_stream_is_a_framing_error() {
        let config = small_config(1.0, 4);
        let stream = transmit(&config, &random_frame(16, 2, 1)).unwrap();
        let mut samples = stream.into_samples();
        samples.pop();
        let truncated = SampleStream {
            samples,
            block_len: 20,
        };
        assert!(matches!(receive(&config, &truncated), Err(Error::Framing(_))));
        let short = SampleStream::new(vec![0.0; 20], 20).unwrap();
        assert!(matches!(receive(&config, &short), Err(Error::Framing(_))));
    }

    #[test]
    fn paper_baseline_rates() {
        let report = rate_report(&ModemConfig::baseline(0.8));
        assert_abs_diff_eq!(report.symbol_rate, 10e9);
        assert_abs_diff_eq!(report.baseband_bandwidth, 4e9, epsilon = 1e-3);
        assert_abs_diff_eq!(report.nyquist_rate, 8e9, epsilon = 1e-3);
        assert_eq!(report.symbol_rate / report.nyquist_rate, 1.25);
        assert_abs_diff_eq!(
            report.net_bit_rate,
            10e9 * 256.0 / 272.0 * 128.0 / 139.0,
            epsilon = 1.0
        );
        // 8.667 Gbit/s, quoted as "approximately 8.7"
        assert_eq!(format!("{:.1}", report.net_bit_rate / 1e9), "8.7");
        assert_eq!(format!("{:.3e}", report.net_bit_rate), "8.667e9");
        let unit = rate_report(&ModemConfig::baseline(1.0));
        assert_eq!(unit.nyquist_rate, unit.symbol_rate);
    }

    #[test]
    fn stream_formats_round_trip() {
        let config = small_config(0.7, 2);
        let stream = transmit(&config, &random_frame(16, 2, 3)).unwrap();
        let bin = SampleStream::from_le_bytes(&stream.to_le_bytes(), 18).unwrap();
        assert_eq!(bin, stream);
        let csv = SampleStream::from_csv(&stream.to_csv(), 18).unwrap();
        assert_eq!(csv, stream);
        assert!(SampleStream::from_le_bytes(&[0u8; 12], 18).is_err());
    }

    proptest! {
        #[test]
        fn pam_round_trip(m in prop_oneof![Just(2usize), Just(4), Just(8)],
                          symbols in prop::collection::vec(0usize..8, 1..64)) {
            let alphabet = PamAlphabet::new(m).unwrap();
            let k = alphabet.bits_per_symbol();
            let bits: Vec<u8> = symbols.iter()
                .flat_map(|&s| (0..k).rev().map(move |b| ((s % m) >> b & 1) as u8))
                .collect();
            prop_assert_eq!(alphabet.demap(&alphabet.map(&bits).unwrap()), bits);
        }
    }
}
