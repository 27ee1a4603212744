use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A rational `epsilon` in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Epsilon(Ratio<u64>);

impl Epsilon {
    pub const ONE: Epsilon = Epsilon(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Epsilon> {
        if numer == 0 || denom == 0 || numer > denom {
            return invalid(format!("epsilon {numer}/{denom} not in (0,1]"));
        }
        Ok(Epsilon(Ratio::new(numer, denom)))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    /// `⌈1/ε⌉`.
    pub fn levels(self) -> usize {
        self.0.denom().div_ceil(*self.0.numer()) as usize
    }

    pub fn as_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `a/b`, an integer, or a finite decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Epsilon> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("cannot parse epsilon '{s}'"));
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(a, b);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Epsilon::new(int * denom + frac, denom)
    }
}

impl Serialize for Epsilon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameters shared by the decomposition pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub k: usize,
    pub epsilon: Epsilon,
    pub q: usize,
    pub sigma: usize,
    pub seed: u64,
}

impl Params {
    /// Standard thresholds for cut size `k`: `σ = ⌈1/ε⌉k + k` and
    /// `q = 2⌈1/ε⌉k + 3k`.
    pub fn standard(k: usize, epsilon: Epsilon, seed: u64) -> Result<Params> {
        let l = epsilon.levels();
        let p = Params {
            k,
            epsilon,
            q: 2 * l * k + 3 * k,
            sigma: l * k + k,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return invalid("k must be at least 1");
        }
        if self.q < self.k || self.sigma < self.k {
            return invalid("q and sigma must be at least k");
        }
        Ok(())
    }
}
