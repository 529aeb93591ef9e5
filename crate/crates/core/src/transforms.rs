//! Fractional cosine and Hartley transforms.
//!
//! Both transforms map `N` frequency-domain amplitudes to `N` real time
//! samples through an `N×N` kernel whose subcarrier frequencies are scaled by
//! the compression factor `alpha`:
//!
//! * FrCT: `x[t] = sqrt(2/N) · Σ_k W_k · X[k] · cos(π·α·(2t+1)·k / 2N)` with
//!   `W_0 = 1/√2` and `W_k = 1` otherwise. At `alpha = 1` this is the
//!   orthonormal DCT-II pair; subcarrier spacing is `α/2T`.
//! * FrHT: `x[t] = sqrt(1/N) · Σ_k X[k] · cas(2π·α·t·k / N)` with
//!   `cas θ = cos θ + sin θ`. At `alpha = 1` this is the orthonormal DHT;
//!   subcarrier spacing is `α/T`, so FrHT at `α/2` matches FrCT at `α`.
//!
//! The forward (demultiplexing) transform applies the transposed kernel in
//! both cases, so `demultiplex ∘ multiplex` is the correlation matrix
//! `KᵀK`, which is the identity only at `alpha = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Frct,
    Frht,
}

impl TransformKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::Frct => "frct",
            TransformKind::Frht => "frht",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "frct" => Ok(TransformKind::Frct),
            "frht" => Ok(TransformKind::Frht),
            other => Err(format!("unknown transform kind `{other}` (expected frct or frht)")),
        }
    }
}

pub(crate) fn validate_size_alpha(n: usize, alpha: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::parameter("n", format!("must be at least 2, got {n}")));
    }
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::parameter("alpha", "must lie in (0, 1]"));
    }
    Ok(())
}

/// FrCT basis function `k` sampled at time index `t`.
pub(crate) fn frct_basis(n: usize, alpha: f64, t: usize, k: usize) -> f64 {
    let weight = if k == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
    let phase = PI * alpha * ((2 * t + 1) * k) as f64 / (2 * n) as f64;
    (2.0 / n as f64).sqrt() * weight * phase.cos()
}

/// FrHT basis function `k` sampled at time index `t`.
pub(crate) fn frht_basis(n: usize, alpha: f64, t: usize, k: usize) -> f64 {
    let phase = 2.0 * PI * alpha * (t * k) as f64 / n as f64;
    (1.0 / n as f64).sqrt() * (phase.cos() + phase.sin())
}

pub(crate) fn basis(kind: TransformKind, n: usize, alpha: f64, t: usize, k: usize) -> f64 {
    match kind {
        TransformKind::Frct => frct_basis(n, alpha, t, k),
        TransformKind::Frht => frht_basis(n, alpha, t, k),
    }
}

/// Immutable multiplexing plan with a materialised kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPlan {
    kind: TransformKind,
    n: usize,
    alpha: f64,
    /// Row-major `n×n`; entry `(t, k)` is basis function `k` at time `t`.
    kernel: Vec<f64>,
}

impl TransformPlan {
    pub fn new(kind: TransformKind, n: usize, alpha: f64) -> Result<Self> {
        validate_size_alpha(n, alpha)?;
        let mut kernel = Vec::with_capacity(n * n);
        for t in 0..n {
            for k in 0..n {
                kernel.push(basis(kind, n, alpha, t, k));
            }
        }
        Ok(TransformPlan {
            kind,
            n,
            alpha,
            kernel,
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

    /// Kernel entry for time index `t` and subcarrier `k`.
    pub fn kernel(&self, t: usize, k: usize) -> f64 {
        self.kernel[t * self.n + k]
    }

    /// Row-major kernel, time index major.
    pub fn kernel_matrix(&self) -> &[f64] {
        &self.kernel
    }

    fn check_len(&self, what: &'static str, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Shape {
                what,
                expected: self.n,
                actual: len,
            });
        }
        Ok(())
    }

    /// Inverse transform: frequency-domain symbols to time samples.
    pub fn multiplex(&self, symbols: &[f64]) -> Result<Vec<f64>> {
        self.check_len("symbols", symbols.len())?;
        Ok(self
            .kernel
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(symbols).map(|(k, s)| k * s).sum())
            .collect())
    }

    /// Forward transform: time samples to frequency-domain outputs.
    pub fn demultiplex(&self, samples: &[f64]) -> Result<Vec<f64>> {
        self.check_len("samples", samples.len())?;
        let mut out = vec![0.0; self.n];
        for (row, &x) in self.kernel.chunks_exact(self.n).zip(samples) {
            for (o, k) in out.iter_mut().zip(row) {
                *o += k * x;
            }
        }
        Ok(out)
    }

    /// [`multiplex`](Self::multiplex) applied to every length-`n` row of
    /// `rows`.
    pub fn multiplex_rows(&self, rows: &[f64]) -> Result<Vec<f64>> {
        let count = self.row_count(rows.len())?;
        let mut out = vec![0.0; rows.len()];
        if count > 0 {
            linalg::matmul_bt(count, self.n, self.n, rows, &self.kernel, &mut out);
        }
        Ok(out)
    }

    /// [`demultiplex`](Self::demultiplex) applied to every length-`n` row of
    /// `rows`.
    pub fn demultiplex_rows(&self, rows: &[f64]) -> Result<Vec<f64>> {
        let count = self.row_count(rows.len())?;
        let mut out = vec![0.0; rows.len()];
        if count > 0 {
            linalg::matmul(count, self.n, self.n, rows, &self.kernel, &mut out);
        }
        Ok(out)
    }

    fn row_count(&self, len: usize) -> Result<usize> {
        if len % self.n != 0 {
            return Err(Error::Shape {
                what: "row block",
                expected: self.n * (len / self.n + 1),
                actual: len,
            });
        }
        Ok(len / self.n)
    }

    /// `KᵀK` evaluated through the kernel. The icimodel module computes the
    /// same matrix directly from the closed form.
    pub fn composition_matrix(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        // (Kᵀ)·K, Kᵀ is K addressed with swapped strides.
        let mut kt = vec![0.0; self.n * self.n];
        for t in 0..self.n {
            for k in 0..self.n {
                kt[k * self.n + t] = self.kernel[t * self.n + k];
            }
        }
        linalg::matmul(self.n, self.n, self.n, &kt, &self.kernel, &mut out);
        out
    }
}

/// Convenience constructor mirroring [`TransformPlan::new`].
pub fn make_plan(kind: TransformKind, n: usize, alpha: f64) -> Result<TransformPlan> {
    TransformPlan::new(kind, n, alpha)
}
