//! Inter-carrier interference analysis.
//!
//! [`CorrelationMatrix`] evaluates the closed-form cross-correlation between
//! subcarriers `l` and `m`,
//!
//! ```text
//! C[l][m] = (2/N) · Σ_t W_l·cos(α·π·l·(2t+1)/2N) · W_m·cos(α·π·(2t+1)·m/2N)
//! ```
//!
//! (with the `cas` analogue for FrHT). Off-diagonal entries are the ICI
//! coupling; for unit-power independent symbols the interference variance on
//! subcarrier `k` is `Σ_{l≠k} C[k][l]²`.
//!
//! The pooled noiseless receiver output, normalised by the diagonal gain,
//! is compared with a two-component Gaussian mixture centred on ±1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::modem::{self, ModemConfig, PamAlphabet, SymbolFrame};
use crate::parallel::Execution;
use crate::rng::{self, Purpose};
use crate::stats::{golden_section_min, normal_cdf};
use crate::transforms::{basis, validate_size_alpha, TransformKind};
use crate::{Error, Result};

/// Symmetric `N×N` subcarrier correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    kind: TransformKind,
    n: usize,
    alpha: f64,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn new(kind: TransformKind, n: usize, alpha: f64) -> Result<Self> {
        validate_size_alpha(n, alpha)?;
        // Basis columns sampled once; entry (l, m) sums their products over t.
        let columns: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|t| basis(kind, n, alpha, t, k)).collect())
            .collect();
        let mut entries = vec![0.0; n * n];
        for l in 0..n {
            for m in l..n {
                let mut acc = 0.0;
                for t in 0..n {
                    acc += columns[l][t] * columns[m][t];
                }
                entries[l * n + m] = acc;
                entries[m * n + l] = acc;
            }
        }
        Ok(CorrelationMatrix {
            kind,
            n,
            alpha,
            entries,
        })
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn get(&self, l: usize, m: usize) -> f64 {
        self.entries[l * self.n + m]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.n..(k + 1) * self.n]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.get(k, k)).collect()
    }

    /// `C·v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::Shape {
                what: "vector",
                expected: self.n,
                actual: v.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(c, x)| c * x).sum())
            .collect())
    }

    /// ICI variance on subcarrier `k` for unit-power independent symbols.
    pub fn ici_power(&self, k: usize) -> Result<f64> {
        if k >= self.n {
            return Err(Error::Index {
                index: k,
                size: self.n,
            });
        }
        Ok(self
            .row(k)
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != k)
            .map(|(_, c)| c * c)
            .sum())
    }

    pub fn mean_ici_power(&self) -> f64 {
        (0..self.n)
            .map(|k| self.ici_power(k).expect("k < n"))
            .sum::<f64>()
            / self.n as f64
    }

    /// `(l, |C[l][k]|)` for every `l`.
    pub fn row_profile(&self, k: usize) -> Result<Vec<(usize, f64)>> {
        if k >= self.n {
            return Err(Error::Index {
                index: k,
                size: self.n,
            });
        }
        Ok(self.row(k).iter().map(|c| c.abs()).enumerate().collect())
    }
}

pub fn correlation_matrix(kind: TransformKind, n: usize, alpha: f64) -> Result<CorrelationMatrix> {
    CorrelationMatrix::new(kind, n, alpha)
}

pub fn ici_power(c: &CorrelationMatrix, k: usize) -> Result<f64> {
    c.ici_power(k)
}

/// Equal-weight Gaussian mixture centred on the 2-PAM levels ±1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IciPdfModel {
    sigma: f64,
}

impl IciPdfModel {
    pub const LEVELS: [f64; 2] = [-1.0, 1.0];

    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::parameter("sigma", "must be positive"));
        }
        Ok(IciPdfModel { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let s = self.sigma;
        let norm = 1.0 / (2.0 * (2.0 * std::f64::consts::PI).sqrt() * s);
        norm * ((-(x + 1.0).powi(2) / (2.0 * s * s)).exp()
            + (-(x - 1.0).powi(2) / (2.0 * s * s)).exp())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        0.5 * (normal_cdf((x + 1.0) / self.sigma) + normal_cdf((x - 1.0) / self.sigma))
    }
}

pub fn mixture_pdf(model: &IciPdfModel, x: f64) -> f64 {
    model.pdf(x)
}

/// Fixed-grid histogram of diagonal-normalised receiver outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IciHistogram {
    pub lo: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
    /// Samples below `lo`.
    pub underflow: u64,
    /// Samples at or above the last edge.
    pub overflow: u64,
    /// Running sum of all samples, including out-of-range ones.
    pub sum: f64,
}

impl IciHistogram {
    pub const LO: f64 = -2.0;
    pub const HI: f64 = 2.0;
    pub const BIN_WIDTH: f64 = 0.02;
    pub const BINS: usize = 200;

    pub fn new() -> Self {
        IciHistogram {
            lo: Self::LO,
            bin_width: Self::BIN_WIDTH,
            counts: vec![0; Self::BINS],
            underflow: 0,
            overflow: 0,
            sum: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.sum += x;
        let pos = ((x - self.lo) / self.bin_width).floor();
        if pos < 0.0 {
            self.underflow += 1;
        } else if pos >= self.counts.len() as f64 {
            self.overflow += 1;
        } else {
            self.counts[pos as usize] += 1;
        }
    }

    pub fn merge(&mut self, other: &IciHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.sum += other.sum;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.total().max(1) as f64
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.bin_width
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        (0..self.counts.len())
            .map(|i| self.lo + (i as f64 + 0.5) * self.bin_width)
            .collect()
    }

    /// Counts scaled so that the in-range density plus out-of-range mass
    /// integrates to one.
    pub fn densities(&self) -> Vec<f64> {
        let scale = 1.0 / (self.total().max(1) as f64 * self.bin_width);
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }

    /// Maximum-likelihood mixture width for the binned data, treating the
    /// out-of-range counts as censored tails.
    pub fn fit_sigma(&self) -> IciPdfModel {
        let edges: Vec<f64> = (0..=self.counts.len()).map(|i| self.edge(i)).collect();
        let neg_log_likelihood = |log_sigma: f64| {
            let model = IciPdfModel {
                sigma: log_sigma.exp(),
            };
            let cdf: Vec<f64> = edges.iter().map(|&e| model.cdf(e)).collect();
            let mut nll = 0.0;
            for (i, &c) in self.counts.iter().enumerate() {
                if c > 0 {
                    nll -= c as f64 * (cdf[i + 1] - cdf[i]).max(1e-300).ln();
                }
            }
            if self.underflow > 0 {
                nll -= self.underflow as f64 * cdf[0].max(1e-300).ln();
            }
            if self.overflow > 0 {
                nll -= self.overflow as f64 * (1.0 - cdf[cdf.len() - 1]).max(1e-300).ln();
            }
            nll
        };
        let log_sigma = golden_section_min(1e-4f64.ln(), 4f64.ln(), 1e-9, neg_log_likelihood);
        IciPdfModel {
            sigma: log_sigma.exp(),
        }
    }

    /// Kolmogorov–Smirnov distance between the histogram's empirical CDF and
    /// `model`, evaluated at every bin edge.
    pub fn ks_distance(&self, model: &IciPdfModel) -> f64 {
        let total = self.total().max(1) as f64;
        let mut cumulative = self.underflow;
        let mut worst = (cumulative as f64 / total - model.cdf(self.edge(0))).abs();
        for (i, &c) in self.counts.iter().enumerate() {
            cumulative += c;
            let d = (cumulative as f64 / total - model.cdf(self.edge(i + 1))).abs();
            worst = worst.max(d);
        }
        worst
    }
}

impl Default for IciHistogram {
    fn default() -> Self {
        Self::new()
    }
}

/// Multicarrier symbols per independently seeded batch.
const ICI_BATCH: usize = 64;

/// Noiseless ICI study: transmits `symbols` random 2-PAM multicarrier
/// symbols, demultiplexes without equalisation, divides each output by its
/// diagonal gain `C[k][k]` and pools every subcarrier into one histogram.
///
/// Batches of 64 symbols draw from their own stream of `seed`, so the result
/// depends only on `(config, symbols, seed)`.
pub fn ici_histogram(
    config: &ModemConfig,
    symbols: usize,
    seed: u64,
    execution: Execution,
) -> Result<IciHistogram> {
    config.validate()?;
    if config.pam_order != 2 {
        return Err(Error::parameter("pam_order", "ICI histogram requires 2-PAM"));
    }
    if symbols == 0 {
        return Err(Error::parameter("frames", "must be at least 1"));
    }
    let plan = config.plan()?;
    let corr = CorrelationMatrix::new(config.kind, config.n, config.alpha)?;
    let gains = corr.diagonal();
    let alphabet = PamAlphabet::new(2)?;
    let batches = symbols.div_ceil(ICI_BATCH);
    let n = config.n;
    let tx_config = ModemConfig {
        training_symbols: 0,
        sync_symbols: 0,
        ..config.clone()
    };

    let partials = execution.map(batches, |b| -> Result<IciHistogram> {
        let rows = ICI_BATCH.min(symbols - b * ICI_BATCH);
        let mut rng = rng::stream(seed, rng::stream_id(Purpose::Ici, 0, b as u64));
        let bits: Vec<u8> = (0..rows * n).map(|_| rng.random_range(0..2u8)).collect();
        let frame = SymbolFrame::from_rows(n, alphabet.map(&bits)?)?;
        let stream = modem::transmit_with_plan(&tx_config, &plan, &frame)?;
        let rx = modem::receive_with_plan(&tx_config, &plan, &stream)?;
        let mut hist = IciHistogram::new();
        for row in rx.data.values().chunks_exact(n) {
            for (x, g) in row.iter().zip(&gains) {
                hist.push(x / g);
            }
        }
        Ok(hist)
    });
    let mut total = IciHistogram::new();
    for partial in partials {
        total.merge(&partial?);
    }
    Ok(total)
}
