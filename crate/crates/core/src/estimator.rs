//! Good-Turing total-probability estimates computed from `φ` alone.
//!
//! `ζ_k = (k+1) φ_{k+1} / n` is held as an integer numerator over `n`, so
//! normalization is exact: the numerators always sum to `Σ_j j φ_j = n`.
//! Smoothed variants would slot in as alternative constructors of
//! [`GoodTuringVector`]; none are provided.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sampling::FrequencyTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodTuringVector {
    n: u64,
    numerators: BTreeMap<u64, u64>,
}

impl GoodTuringVector {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `ζ_k` as the exact fraction `(numerator, n)`.
    ///
    /// `ζ_n` is always `0 / n`: no symbol can appear `n + 1` times.
    pub fn exact(&self, k: u64) -> (u64, u64) {
        (self.numerators.get(&k).copied().unwrap_or(0), self.n)
    }

    pub fn get(&self, k: u64) -> f64 {
        let (num, den) = self.exact(k);
        num as f64 / den as f64
    }

    /// Nonzero `(k, ζ_k)` entries in ascending `k`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let n = self.n as f64;
        self.numerators
            .iter()
            .map(move |(&k, &num)| (k, num as f64 / n))
    }

    /// Sum of the numerators; equals `n` for every valid table.
    pub fn numerator_sum(&self) -> u128 {
        self.numerators.values().map(|&v| u128::from(v)).sum()
    }
}

pub fn good_turing_totals(freq: &FrequencyTable) -> Result<GoodTuringVector> {
    if freq.n() == 0 {
        return Err(Error::Domain("Good-Turing estimates need n >= 1".into()));
    }
    let mut numerators = BTreeMap::new();
    for (j, phi) in freq.phi_entries() {
        let num = j
            .checked_mul(phi)
            .ok_or_else(|| Error::Domain("j * phi_j overflows".into()))?;
        numerators.insert(j - 1, num);
    }
    Ok(GoodTuringVector {
        n: freq.n(),
        numerators,
    })
}

/// Probability assigned to each individual symbol seen exactly `k` times:
/// `(k+1) φ_{k+1} / (n φ_k)`.
///
/// `k = 0` is rejected because `φ_0` (the number of unseen symbols) is not
/// observable; `k = n` is rejected because the formula does not cover it.
pub fn good_turing_per_symbol(freq: &FrequencyTable, k: u64) -> Result<f64> {
    let n = freq.n();
    if k == 0 {
        return Err(Error::Unsupported(
            "per-symbol probability at k = 0 needs the unobservable phi_0".into(),
        ));
    }
    if k >= n {
        return Err(Error::Unsupported(format!(
            "per-symbol probability is defined for k <= n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    let phi_k = freq.phi(k);
    if phi_k == 0 {
        return Err(Error::EmptyFrequencyClass(k));
    }
    let num = (k + 1) as f64 * freq.phi(k + 1) as f64;
    Ok(num / (n as f64 * phi_k as f64))
}

/// `ζ_0 = φ_1 / n`; zero for an empty table.
pub fn missing_mass(freq: &FrequencyTable) -> f64 {
    if freq.n() == 0 {
        return 0.0;
    }
    freq.phi(1) as f64 / freq.n() as f64
}
