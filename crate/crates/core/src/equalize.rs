//! Iterative-detection (ID) ICI cancellation.
//!
//! Starting from `S_0 = 0` and an uncertainty half-width `d = 1`, each
//! iteration forms
//!
//! ```text
//! S_i = R − (C − e)·S_{i−1}
//! ```
//!
//! then snaps every entry lying outside the uncertainty interval to its
//! constellation point and leaves the rest untouched. After the mapping, `d`
//! shrinks to `1 − i/I`. The last update leaves `d = 0`, and the returned
//! symbols are `S_I` mapped at that final width, i.e. hard decisions.
//!
//! For M-PAM with `M > 2` (experimental) the interval is `d` half level
//! spacings either side of each decision boundary.

use serde::{Deserialize, Serialize};

use crate::icimodel::CorrelationMatrix;
use crate::linalg;
use crate::modem::PamAlphabet;
use crate::{Error, Result};

/// Where the width update sits relative to the mapping inside one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdOrder {
    /// Map with the current width, then shrink it (iteration `i` maps with
    /// `1 − (i−1)/I`).
    #[default]
    MapThenUpdate,
    /// Shrink first (iteration `i` maps with `1 − i/I`).
    UpdateThenMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdConfig {
    pub iterations: usize,
    pub pam_order: usize,
    pub order: ThresholdOrder,
}

impl IdConfig {
    pub fn new(iterations: usize) -> Self {
        IdConfig {
            iterations,
            pam_order: 2,
            order: ThresholdOrder::MapThenUpdate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdTraceStep {
    pub iteration: usize,
    /// Width after this iteration's update, `1 − i/I`.
    pub d: f64,
    /// Entries left inside the uncertainty interval by this iteration.
    pub undecided: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IdTrace {
    pub steps: Vec<IdTraceStep>,
}

impl IdTrace {
    /// `iteration,d,undecided_count` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,d,undecided_count\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{}\n", s.iteration, s.d, s.undecided));
        }
        out
    }
}

/// Result of the mapping-free iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOutcome {
    pub estimate: Vec<f64>,
    pub iterations_run: usize,
    /// Norm of `S_i − S_{i−1}` per iteration.
    pub step_norms: Vec<f64>,
    pub diverged: bool,
}

/// ID equaliser bound to one correlation matrix.
#[derive(Debug, Clone)]
pub struct IdEqualizer {
    n: usize,
    config: IdConfig,
    alphabet: PamAlphabet,
    /// Row-major `C − e`.
    interference: Vec<f64>,
}

impl IdEqualizer {
    pub fn new(config: IdConfig, matrix: &CorrelationMatrix) -> Result<Self> {
        let alphabet = PamAlphabet::new(config.pam_order)?;
        let n = matrix.n();
        let mut interference = matrix.entries().to_vec();
        for k in 0..n {
            interference[k * n + k] -= 1.0;
        }
        Ok(IdEqualizer {
            n,
            config,
            alphabet,
            interference,
        })
    }

    pub fn config(&self) -> &IdConfig {
        &self.config
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Shape {
                what: "received vector",
                expected: self.n,
                actual: len,
            });
        }
        Ok(())
    }

    /// Width used by the mapping step of iteration `i` (1-based).
    pub fn mapping_width(&self, i: usize) -> f64 {
        let total = self.config.iterations as f64;
        match self.config.order {
            ThresholdOrder::MapThenUpdate => 1.0 - (i - 1) as f64 / total,
            ThresholdOrder::UpdateThenMap => 1.0 - i as f64 / total,
        }
    }

    /// Snaps `value` unless it lies within `width` half-spacings of the
    /// nearest decision boundary. Returns whether it was left undecided.
    fn map_entry(&self, value: &mut f64, width: f64) -> bool {
        let order = self.alphabet.order();
        let half = self.alphabet.half_spacing();
        let position = *value / half + (order as f64 - 1.0);
        let j = ((position - 1.0) / 2.0).round().clamp(0.0, (order - 2) as f64);
        let boundary = (2.0 * j + 1.0 - (order as f64 - 1.0)) * half;
        let offset = *value - boundary;
        if offset > width * half || offset < -width * half {
            *value = self.alphabet.level(self.alphabet.nearest_index(*value));
            false
        } else {
            true
        }
    }

    fn map_all(&self, values: &mut [f64], width: f64) -> usize {
        values
            .iter_mut()
            .map(|v| usize::from(self.map_entry(v, width)))
            .sum()
    }

    /// Runs the ID iteration on one received vector.
    pub fn equalize(&self, r: &[f64]) -> Result<(Vec<f64>, IdTrace)> {
        self.check_len(r.len())?;
        let iterations = self.config.iterations;
        let mut trace = IdTrace::default();
        let mut s = r.to_vec();
        if iterations > 0 {
            let mut prev = vec![0.0; self.n];
            for i in 1..=iterations {
                for (k, out) in s.iter_mut().enumerate() {
                    let row = &self.interference[k * self.n..(k + 1) * self.n];
                    *out = r[k] - row.iter().zip(&prev).map(|(c, x)| c * x).sum::<f64>();
                }
                let undecided = self.map_all(&mut s, self.mapping_width(i));
                trace.steps.push(IdTraceStep {
                    iteration: i,
                    d: 1.0 - i as f64 / iterations as f64,
                    undecided,
                });
                prev.copy_from_slice(&s);
            }
        }
        self.map_all(&mut s, 0.0);
        Ok((s, trace))
    }

    /// [`equalize`](Self::equalize) on every length-`n` row of `rows`,
    /// without traces.
    pub fn equalize_rows(&self, rows: &[f64]) -> Result<Vec<f64>> {
        if rows.len() % self.n != 0 {
            return Err(Error::Shape {
                what: "received rows",
                expected: self.n * (rows.len() / self.n + 1),
                actual: rows.len(),
            });
        }
        let count = rows.len() / self.n;
        let mut s = rows.to_vec();
        if self.config.iterations > 0 && count > 0 {
            // S_1 = R since S_0 = 0.
            self.map_all(&mut s, self.mapping_width(1));
            let mut coupled = vec![0.0; rows.len()];
            for i in 2..=self.config.iterations {
                // Rows are symbol vectors, so (C−e)·S becomes S·(C−e)ᵀ.
                linalg::matmul_bt(count, self.n, self.n, &s, &self.interference, &mut coupled);
                for ((out, r), c) in s.iter_mut().zip(rows).zip(&coupled) {
                    *out = r - c;
                }
                self.map_all(&mut s, self.mapping_width(i));
            }
        }
        self.map_all(&mut s, 0.0);
        Ok(s)
    }

    /// Mapping-free iteration `S_i = R − (C−e)·S_{i−1}` for `iterations`
    /// steps. Stops early and flags divergence once the iterate becomes
    /// non-finite or its step norm exceeds `1e12·‖R‖`; otherwise divergence
    /// means the last step norm is larger than the first.
    pub fn equalize_linear(&self, r: &[f64], iterations: usize) -> Result<LinearOutcome> {
        self.check_len(r.len())?;
        let r_norm = norm(r);
        let mut prev = vec![0.0; self.n];
        let mut s = vec![0.0; self.n];
        let mut step_norms = Vec::with_capacity(iterations.min(1 << 16));
        let mut first_step = None;
        let mut last_step = 0.0;
        let mut diverged = false;
        let mut run = 0;
        for _ in 0..iterations {
            let mut step_sq = 0.0;
            for (k, out) in s.iter_mut().enumerate() {
                let row = &self.interference[k * self.n..(k + 1) * self.n];
                *out = r[k] - row.iter().zip(&prev).map(|(c, x)| c * x).sum::<f64>();
                step_sq += (*out - prev[k]).powi(2);
            }
            run += 1;
            let step = step_sq.sqrt();
            if step_norms.len() < (1 << 16) {
                step_norms.push(step);
            }
            first_step.get_or_insert(step);
            last_step = step;
            std::mem::swap(&mut s, &mut prev);
            if !step.is_finite() || step > 1e12 * r_norm.max(f64::MIN_POSITIVE) {
                diverged = true;
                break;
            }
        }
        if let Some(first) = first_step {
            diverged |= last_step > first;
        }
        Ok(LinearOutcome {
            estimate: prev,
            iterations_run: run,
            step_norms,
            diverged,
        })
    }

    /// Power-iteration estimate of the spectral radius of `C − e`.
    pub fn spectral_radius(&self, iterations: usize) -> f64 {
        let mut v: Vec<f64> = (0..self.n).map(|k| 1.0 + 0.1 * (k as f64).sin()).collect();
        let mut estimate = 0.0;
        for _ in 0..iterations {
            let w: Vec<f64> = self
                .interference
                .chunks_exact(self.n)
                .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
                .collect();
            let nw = norm(&w);
            let nv = norm(&v);
            if nw == 0.0 {
                return 0.0;
            }
            estimate = nw / nv;
            v = w.into_iter().map(|x| x / nw).collect();
        }
        estimate
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One-shot ID equalisation of `r`.
pub fn id_equalize(
    config: IdConfig,
    matrix: &CorrelationMatrix,
    r: &[f64],
) -> Result<(Vec<f64>, IdTrace)> {
    IdEqualizer::new(config, matrix)?.equalize(r)
}

/// One-shot mapping-free iteration, `config.iterations` steps.
pub fn id_equalize_linear(
    config: IdConfig,
    matrix: &CorrelationMatrix,
    r: &[f64],
) -> Result<LinearOutcome> {
    IdEqualizer::new(config, matrix)?.equalize_linear(r, config.iterations)
}
