use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Innovation law: mean 0, variance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    #[default]
    Gaussian,
    Rademacher,
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Rademacher => "rademacher",
        })
    }
}

impl FromStr for Distribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Distribution::Gaussian),
            "rademacher" => Ok(Distribution::Rademacher),
            other => Err(Error::Config(format!(
                "unknown distribution '{other}' (expected gaussian or rademacher)"
            ))),
        }
    }
}

/// iid innovations `eps_i` for `i` in `[first, first + len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSequence {
    first: i64,
    values: Vec<f64>,
    distribution: Distribution,
    seed: u64,
    stream: u64,
}

impl NoiseSequence {
    /// Draws `len` innovations from the ChaCha8 stream `(seed, stream)`,
    /// in increasing index order starting at `first`.
    pub fn generate(first: i64, len: usize, distribution: Distribution, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let values = match distribution {
            Distribution::Gaussian => (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
            Distribution::Rademacher => (0..len)
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect(),
        };
        NoiseSequence {
            first,
            values,
            distribution,
            seed,
            stream,
        }
    }

    /// Wraps explicit values; provenance fields are zero.
    pub fn from_values(first: i64, values: Vec<f64>) -> Self {
        NoiseSequence {
            first,
            values,
            distribution: Distribution::Gaussian,
            seed: 0,
            stream: 0,
        }
    }

    pub fn first(&self) -> i64 {
        self.first
    }

    /// One past the last covered index.
    pub fn end(&self) -> i64 {
        self.first + self.values.len() as i64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn get(&self, i: i64) -> Option<f64> {
        if i < self.first {
            return None;
        }
        self.values.get((i - self.first) as usize).copied()
    }

    /// Values for indices `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<&[f64]> {
        if lo < self.first || hi >= self.end() || hi < lo {
            return Err(Error::InsufficientNoise {
                need_lo: lo,
                need_hi: hi,
                have_lo: self.first,
                have_hi: self.end() - 1,
            });
        }
        let a = (lo - self.first) as usize;
        let b = (hi - self.first) as usize;
        Ok(&self.values[a..=b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_stream_same_draws() {
        let a = NoiseSequence::generate(-5, 100, Distribution::Gaussian, 7, 3);
        let b = NoiseSequence::generate(-5, 100, Distribution::Gaussian, 7, 3);
        assert_eq!(a, b);
        let c = NoiseSequence::generate(-5, 100, Distribution::Gaussian, 7, 4);
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn moments_are_standard() {
        for dist in [Distribution::Gaussian, Distribution::Rademacher] {
            let n = 200_000;
            let e = NoiseSequence::generate(0, n, dist, 11, 0);
            let mean = e.values().iter().sum::<f64>() / n as f64;
            let var = e.values().iter().map(|x| x * x).sum::<f64>() / n as f64;
            assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "{dist}: {mean}");
            assert!((var - 1.0).abs() < 0.02, "{dist}: {var}");
        }
        let r = NoiseSequence::generate(0, 1000, Distribution::Rademacher, 1, 0);
        assert!(r.values().iter().all(|&x| x == 1.0 || x == -1.0));
    }

    #[test]
    fn window_bounds() {
        let e = NoiseSequence::from_values(-2, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.window(-1, 0).unwrap(), &[2.0, 3.0]);
        assert_eq!(e.get(1), Some(4.0));
        assert_eq!(e.get(2), None);
        assert!(matches!(e.window(-3, 0), Err(Error::InsufficientNoise { .. })));
    }

    #[test]
    fn parse_distribution() {
        assert_eq!("Gaussian".parse::<Distribution>().unwrap(), Distribution::Gaussian);
        assert_eq!("rademacher".parse::<Distribution>().unwrap(), Distribution::Rademacher);
        assert!("cauchy".parse::<Distribution>().is_err());
    }
}
