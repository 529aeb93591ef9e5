//! Memoryless AWGN channel.
//!
//! Noise variance per real sample is `σ² = E_s / (2 · Eb/N0 · b)` where `E_s`
//! is the measured mean energy per transmitted sample and `b` the number of
//! information bits carried per sample. Each block of the stream draws from
//! its own random stream, so the noise for a given `(seed, layout)` is fixed
//! no matter how blocks are scheduled.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::modem::SampleStream;
use crate::parallel::Execution;
use crate::rng::{self, Purpose};
use crate::stats::db_to_linear;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwgnSpec {
    pub eb_n0_db: f64,
    /// Net information bits per transmitted sample.
    pub bits_per_sample: f64,
    pub rng_seed: u64,
}

impl AwgnSpec {
    fn validate(&self) -> Result<()> {
        if !(self.bits_per_sample.is_finite() && self.bits_per_sample > 0.0) {
            return Err(Error::parameter("bits_per_sample", "must be positive"));
        }
        if self.eb_n0_db.is_nan() {
            return Err(Error::parameter("eb_n0_db", "must be a number"));
        }
        Ok(())
    }

    /// Per-sample noise variance for a signal of mean sample energy `es`.
    pub fn noise_variance(&self, es: f64) -> f64 {
        es / (2.0 * db_to_linear(self.eb_n0_db) * self.bits_per_sample)
    }
}

/// Mean of squared samples.
pub fn measure_sample_energy(stream: &SampleStream) -> Result<f64> {
    sample_energy(stream.samples())
}

pub(crate) fn sample_energy(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::parameter("stream", "must not be empty"));
    }
    Ok(samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64)
}

/// Adds white Gaussian noise at the level implied by `spec`.
pub fn apply_awgn(spec: &AwgnSpec, stream: &SampleStream) -> Result<SampleStream> {
    apply_awgn_with(spec, stream, Execution::Sequential)
}

/// [`apply_awgn`] with blocks spread according to `execution`; the output is
/// identical for every execution mode.
pub fn apply_awgn_with(
    spec: &AwgnSpec,
    stream: &SampleStream,
    execution: Execution,
) -> Result<SampleStream> {
    spec.validate()?;
    let es = measure_sample_energy(stream)?;
    let sigma = spec.noise_variance(es).sqrt();
    let block = stream.block_len();
    let noisy: Vec<Vec<f64>> = execution.map(stream.blocks(), |b| {
        let mut rng = rng::stream(spec.rng_seed, rng::stream_id(Purpose::Noise, 0, b as u64));
        stream.samples()[b * block..(b + 1) * block]
            .iter()
            .map(|&x| {
                let z: f64 = StandardNormal.sample(&mut rng);
                x + sigma * z
            })
            .collect()
    });
    SampleStream::new(noisy.concat(), block)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn spec(eb_n0_db: f64, seed: u64) -> AwgnSpec {
        AwgnSpec {
            eb_n0_db,
            bits_per_sample: 1.0,
            rng_seed: seed,
        }
    }

    #[test]
    fn energy_of_simple_streams() {
        let zeros = SampleStream::new(vec![0.0; 16], 4).unwrap();
        assert_eq!(measure_sample_energy(&zeros).unwrap(), 0.0);
        let constant = SampleStream::new(vec![-1.5; 12], 3).unwrap();
        assert_relative_eq!(measure_sample_energy(&constant).unwrap(), 2.25);
        let empty = SampleStream::new(vec![], 4).unwrap();
        assert!(measure_sample_energy(&empty).is_err());
        assert!(apply_awgn(&spec(10.0, 0), &empty).is_err());
    }

    #[test]
    fn noiseless_limit() {
        let signal: Vec<f64> = (0..400).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        let stream = SampleStream::new(signal.clone(), 20).unwrap();
        let out = apply_awgn(&spec(200.0, 3), &stream).unwrap();
        for (a, b) in out.samples().iter().zip(&signal) {
            assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0));
        }
    }

    #[test]
    fn seeded_and_schedule_independent() {
        let stream = SampleStream::new(vec![1.0; 4000], 40).unwrap();
        let a = apply_awgn(&spec(5.0, 17), &stream).unwrap();
        let b = apply_awgn_with(&spec(5.0, 17), &stream, Execution::with_workers(4)).unwrap();
        assert_eq!(a, b);
        let c = apply_awgn(&spec(5.0, 18), &stream).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn variance_matches_derivation_and_is_independent_of_signal() {
        let n = 1_000_000;
        let signal: Vec<f64> = (0..n).map(|i| if (i * 2_654_435_761u64 as usize) & 4 == 0 { 1.0 } else { -1.0 }).collect();
        let stream = SampleStream::new(signal.clone(), 1000).unwrap();
        let spec = AwgnSpec {
            eb_n0_db: 3.0,
            bits_per_sample: 0.75,
            rng_seed: 5,
        };
        let out = apply_awgn(&spec, &stream).unwrap();
        let noise: Vec<f64> = out.samples().iter().zip(&signal).map(|(y, x)| y - x).collect();
        let var = noise.iter().map(|z| z * z).sum::<f64>() / n as f64;
        let want = spec.noise_variance(1.0);
        assert!((var / want - 1.0).abs() < 0.01, "{var} vs {want}");
        let corr = noise.iter().zip(&signal).map(|(z, x)| z * x).sum::<f64>()
            / (n as f64 * var.sqrt());
        assert!(corr.abs() < 3.0 / (n as f64).sqrt(), "{corr}");
    }
}
