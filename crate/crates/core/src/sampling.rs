//! Seeded i.i.d. sampling from a [`DistributionSpec`], count-of-counts and
//! the true total probabilities `ξ_k`.
//!
//! Symbols of an atom class `(p, m)` are identified lazily as
//! `(class, slot)` with `slot < m`, so multiplicities far larger than `n`
//! never allocate an alphabet. Each draw from the atomless component gets a
//! fresh identifier and therefore appears exactly once.
//!
//! # Random streams
//!
//! Every generator is a ChaCha8 stream (`rand_chacha`). A stand-alone call to
//! [`sample_string`] keys the generator with `seed_from_u64(seed)`. The
//! experiment harness uses [`trial_rng`]: the 256-bit key is
//! `seed` (little endian) followed by `n` (little endian) and 16 zero bytes,
//! and the ChaCha stream id is the trial index. Positions consume the stream
//! in order: one `f64` to pick the atom class, then one bounded integer to
//! pick the slot when the class has more than one symbol.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::shadow::DistributionSpec;

/// Identification string recorded in report metadata.
pub const RNG_DESCRIPTION: &str = "ChaCha8 (rand_chacha 0.9); key = seed_le64 || n_le64 || 0^128, stream = trial_index; per position: f64 class draw, then u64 slot draw if multiplicity > 1";

/// Generator for one `(seed, n, trial)` cell of an experiment.
pub fn trial_rng(seed: u64, n: u64, trial_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&n.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolId {
    /// The `slot`-th symbol of atom class `class`.
    Atom { class: u32, slot: u64 },
    /// A draw from the atomless component.
    Fresh(u64),
}

/// Per-symbol counts of one observed string. Only symbols that appear are
/// stored; the string itself is not.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleString {
    n: u64,
    atom_counts: HashMap<(u32, u64), u64>,
    continuous_draws: u64,
}

impl SampleString {
    /// Builds a sample from explicit symbol counts.
    ///
    /// Fresh symbols must have count exactly one; zero counts are rejected.
    pub fn from_counts<I: IntoIterator<Item = (SymbolId, u64)>>(counts: I) -> Result<Self> {
        let mut atom_counts = HashMap::new();
        let mut fresh = std::collections::HashSet::new();
        let mut n = 0u64;
        for (id, count) in counts {
            if count == 0 {
                return Err(Error::Domain("symbol counts must be positive".into()));
            }
            match id {
                SymbolId::Atom { class, slot } => {
                    *atom_counts.entry((class, slot)).or_insert(0) += count;
                }
                SymbolId::Fresh(i) => {
                    if count != 1 || !fresh.insert(i) {
                        return Err(Error::Domain(
                            "an atomless draw must appear exactly once".into(),
                        ));
                    }
                }
            }
            n += count;
        }
        Ok(Self {
            n,
            atom_counts,
            continuous_draws: fresh.len() as u64,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn continuous_draws(&self) -> u64 {
        self.continuous_draws
    }

    pub fn distinct_symbols(&self) -> u64 {
        self.atom_counts.len() as u64 + self.continuous_draws
    }

    pub fn count_of(&self, id: SymbolId) -> u64 {
        match id {
            SymbolId::Atom { class, slot } => {
                self.atom_counts.get(&(class, slot)).copied().unwrap_or(0)
            }
            SymbolId::Fresh(i) => u64::from(i < self.continuous_draws),
        }
    }

    /// All `(symbol, count)` pairs, in unspecified order.
    pub fn symbol_counts(&self) -> impl Iterator<Item = (SymbolId, u64)> + '_ {
        self.atom_counts
            .iter()
            .map(|(&(class, slot), &c)| (SymbolId::Atom { class, slot }, c))
            .chain((0..self.continuous_draws).map(|i| (SymbolId::Fresh(i), 1)))
    }
}

/// Precomputed inverse-CDF table over the atom classes of a distribution.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
    multiplicities: Vec<u64>,
    continuous_mass: f64,
}

impl Sampler {
    pub fn new(dist: &DistributionSpec) -> Self {
        let mut acc = CompensatedSum::new();
        let mut cumulative = Vec::with_capacity(dist.atoms().len());
        for atom in dist.atoms() {
            acc.add(atom.mass());
            cumulative.push(acc.value());
        }
        Self {
            cumulative,
            multiplicities: dist.atoms().iter().map(|a| a.multiplicity).collect(),
            continuous_mass: dist.continuous_mass(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> SampleString {
        let classes = self.cumulative.len();
        let mut atom_counts: HashMap<(u32, u64), u64> = HashMap::new();
        let mut continuous_draws = 0u64;
        for _ in 0..n {
            let u: f64 = rng.random();
            let mut class = self.cumulative.partition_point(|&c| c <= u);
            if class == classes {
                if self.continuous_mass > 0.0 || classes == 0 {
                    continuous_draws += 1;
                    continue;
                }
                // cumulative total fell a rounding error short of 1
                class = classes - 1;
            }
            let m = self.multiplicities[class];
            let slot = if m > 1 { rng.random_range(0..m) } else { 0 };
            *atom_counts.entry((class as u32, slot)).or_insert(0) += 1;
        }
        SampleString {
            n,
            atom_counts,
            continuous_draws,
        }
    }
}

/// Draws a length-`n` string from `dist`; deterministic in `(dist, n, seed)`.
pub fn sample_string(dist: &DistributionSpec, n: u64, seed: u64) -> SampleString {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Sampler::new(dist).sample(n, &mut rng)
}

/// Count-of-counts `φ_k` for one string, plus per-class symbol counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    n: u64,
    phi: BTreeMap<u64, u64>,
    atom_hits: BTreeMap<u32, Vec<u64>>,
}

impl FrequencyTable {
    /// Builds a table from `φ` alone; rejects tables with `Σ k φ_k != n`.
    pub fn from_phi<I: IntoIterator<Item = (u64, u64)>>(n: u64, phi: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, count) in phi {
            if k == 0 {
                return Err(Error::Domain(
                    "phi_0 is not part of a frequency table".into(),
                ));
            }
            if count > 0 {
                *map.entry(k).or_insert(0) += count;
            }
        }
        let implied = implied_length(&map)?;
        if implied != n {
            return Err(Error::Consistency(format!(
                "sum of k * phi_k is {implied} but n = {n}"
            )));
        }
        Ok(Self {
            n,
            phi: map,
            atom_hits: BTreeMap::new(),
        })
    }

    /// Builds a table from raw per-symbol counts (e.g. token counts).
    pub fn from_symbol_counts<I: IntoIterator<Item = u64>>(counts: I) -> Self {
        let mut phi = BTreeMap::new();
        let mut n = 0;
        for c in counts.into_iter().filter(|&c| c > 0) {
            *phi.entry(c).or_insert(0) += 1;
            n += c;
        }
        Self {
            n,
            phi,
            atom_hits: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `φ_k`; zero when no symbol appears exactly `k` times.
    pub fn phi(&self, k: u64) -> u64 {
        self.phi.get(&k).copied().unwrap_or(0)
    }

    /// Nonzero `(k, φ_k)` entries in ascending `k`.
    pub fn phi_entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.phi.iter().map(|(&k, &c)| (k, c))
    }

    /// Sorted per-symbol counts of the observed symbols of each atom class.
    pub fn atom_hits(&self) -> &BTreeMap<u32, Vec<u64>> {
        &self.atom_hits
    }
}

fn implied_length(phi: &BTreeMap<u64, u64>) -> Result<u64> {
    phi.iter().try_fold(0u64, |acc, (&k, &c)| {
        k.checked_mul(c)
            .and_then(|v| acc.checked_add(v))
            .ok_or_else(|| Error::Domain("sum of k * phi_k overflows u64".into()))
    })
}

pub fn count_frequencies(sample: &SampleString) -> FrequencyTable {
    let mut phi = BTreeMap::new();
    let mut atom_hits: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    for (&(class, _), &count) in &sample.atom_counts {
        *phi.entry(count).or_insert(0) += 1;
        atom_hits.entry(class).or_default().push(count);
    }
    for hits in atom_hits.values_mut() {
        hits.sort_unstable();
    }
    if sample.continuous_draws > 0 {
        *phi.entry(1).or_insert(0) += sample.continuous_draws;
    }
    FrequencyTable {
        n: sample.n,
        phi,
        atom_hits,
    }
}

/// The random vector `ξ_k`: true probability of the symbols seen exactly
/// `k` times. Stored sparsely; absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalProbabilityVector {
    n: u64,
    xi: BTreeMap<u64, f64>,
}

impl TotalProbabilityVector {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn get(&self, k: u64) -> f64 {
        self.xi.get(&k).copied().unwrap_or(0.0)
    }

    /// Nonzero `(k, ξ_k)` entries in ascending `k`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.xi.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.xi.values().copied())
    }
}

pub fn true_total_probabilities(
    dist: &DistributionSpec,
    sample: &SampleString,
) -> Result<TotalProbabilityVector> {
    let atoms = dist.atoms();
    // per class: count k -> number of symbols with that count
    let mut per_class: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); atoms.len()];
    for (&(class, slot), &count) in &sample.atom_counts {
        let atom = atoms.get(class as usize).ok_or_else(|| {
            Error::Consistency(format!("atom class {class} is not in the distribution"))
        })?;
        if slot >= atom.multiplicity {
            return Err(Error::Consistency(format!(
                "slot {slot} exceeds multiplicity {} of class {class}",
                atom.multiplicity
            )));
        }
        *per_class[class as usize].entry(count).or_insert(0) += 1;
    }
    if sample.continuous_draws > 0 && dist.continuous_mass() == 0.0 {
        return Err(Error::Consistency(
            "sample has atomless draws but the distribution has no continuous mass".into(),
        ));
    }

    let mut sums: BTreeMap<u64, CompensatedSum> = BTreeMap::new();
    for (atom, counts) in atoms.iter().zip(&per_class) {
        for (&k, &symbols) in counts {
            sums.entry(k).or_default().add(atom.prob * symbols as f64);
        }
    }
    let mut xi: BTreeMap<u64, f64> = sums
        .into_iter()
        .map(|(k, s)| (k, s.value()))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    let seen = compensated_sum(xi.values().copied());
    let unseen = (1.0 - seen).max(0.0);
    if unseen > 0.0 {
        xi.insert(0, unseen);
    }
    Ok(TotalProbabilityVector { n: sample.n, xi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::make_distribution;

    fn atom(class: u32, slot: u64) -> SymbolId {
        SymbolId::Atom { class, slot }
    }

    #[test]
    fn deterministic_distribution() {
        let d = make_distribution(&[(1.0, 1)], 0.0).unwrap();
        let s = sample_string(&d, 5, 7);
        assert_eq!(s.distinct_symbols(), 1);
        assert_eq!(s.count_of(atom(0, 0)), 5);
    }

    #[test]
    fn continuous_draws_never_repeat() {
        let d = make_distribution(&[], 1.0).unwrap();
        let s = sample_string(&d, 4, 1);
        assert_eq!(s.continuous_draws(), 4);
        assert_eq!(s.distinct_symbols(), 4);
        let f = count_frequencies(&s);
        assert_eq!(f.phi(1), 4);
    }

    #[test]
    fn two_symbol_collision_rate() {
        let d = make_distribution(&[(0.5, 2)], 0.0).unwrap();
        let trials = 100_000u64;
        let distinct = (0..trials)
            .filter(|&seed| sample_string(&d, 2, seed).distinct_symbols() == 2)
            .count();
        let frac = distinct as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = make_distribution(&[(0.1, 5), (0.25, 2)], 0.0).unwrap();
        assert_eq!(sample_string(&d, 50, 3), sample_string(&d, 50, 3));
        let sampler = Sampler::new(&d);
        let a = sampler.sample(50, &mut trial_rng(9, 50, 2));
        let b = sampler.sample(50, &mut trial_rng(9, 50, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn count_frequencies_examples() {
        let s = SampleString::from_counts([(atom(0, 0), 2), (atom(0, 1), 1)]).unwrap();
        let f = count_frequencies(&s);
        assert_eq!(f.phi_entries().collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);

        let s =
            SampleString::from_counts([(atom(0, 0), 2), (atom(0, 1), 1), (atom(0, 2), 1)]).unwrap();
        let f = count_frequencies(&s);
        assert_eq!(f.n(), 4);
        assert_eq!(f.phi_entries().collect::<Vec<_>>(), vec![(1, 2), (2, 1)]);

        let s = SampleString::from_counts([(atom(0, 0), 5)]).unwrap();
        let f = count_frequencies(&s);
        assert_eq!(f.phi_entries().collect::<Vec<_>>(), vec![(5, 1)]);
    }

    #[test]
    fn xi_for_uniform_pair() {
        let d = make_distribution(&[(0.5, 2)], 0.0).unwrap();
        let s = SampleString::from_counts([(atom(0, 0), 2)]).unwrap();
        let xi = true_total_probabilities(&d, &s).unwrap();
        assert_eq!(xi.get(2), 0.5);
        assert_eq!(xi.get(0), 0.5);
        assert_eq!(xi.get(1), 0.0);
    }

    #[test]
    fn xi_ignores_atomless_symbols() {
        let d = make_distribution(&[], 1.0).unwrap();
        let s = sample_string(&d, 6, 0);
        let xi = true_total_probabilities(&d, &s).unwrap();
        assert_eq!(xi.get(0), 1.0);
        assert_eq!(xi.get(1), 0.0);
        assert_eq!(count_frequencies(&s).phi(1), 6);
    }

    #[test]
    fn xi_for_three_symbol_example() {
        let d = make_distribution(&[(0.25, 2), (0.5, 1)], 0.0).unwrap();
        // class 0 is p = 0.25, class 1 is p = 0.5
        let s = SampleString::from_counts([(atom(1, 0), 2), (atom(0, 1), 1)]).unwrap();
        let xi = true_total_probabilities(&d, &s).unwrap();
        assert_eq!(xi.get(1), 0.25);
        assert_eq!(xi.get(2), 0.5);
        assert_eq!(xi.get(0), 0.25);
    }

    #[test]
    fn inconsistent_samples_are_rejected() {
        let d = make_distribution(&[(0.5, 2)], 0.0).unwrap();
        let bad_class = SampleString::from_counts([(atom(3, 0), 1)]).unwrap();
        assert!(matches!(
            true_total_probabilities(&d, &bad_class),
            Err(Error::Consistency(_))
        ));
        let bad_slot = SampleString::from_counts([(atom(0, 2), 1)]).unwrap();
        assert!(matches!(
            true_total_probabilities(&d, &bad_slot),
            Err(Error::Consistency(_))
        ));
        let bad_fresh = SampleString::from_counts([(SymbolId::Fresh(0), 1)]).unwrap();
        assert!(true_total_probabilities(&d, &bad_fresh).is_err());
    }

    #[test]
    fn fresh_symbols_must_be_singletons() {
        assert!(SampleString::from_counts([(SymbolId::Fresh(0), 2)]).is_err());
        assert!(
            SampleString::from_counts([(SymbolId::Fresh(0), 1), (SymbolId::Fresh(0), 1)]).is_err()
        );
    }

    #[test]
    fn from_phi_validates_length() {
        assert!(FrequencyTable::from_phi(4, [(1, 2), (2, 1)]).is_ok());
        assert!(matches!(
            FrequencyTable::from_phi(5, [(1, 2), (2, 1)]),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn huge_multiplicity_does_not_allocate_alphabet() {
        let d = make_distribution(&[(1e-9, 1_000_000_000)], 0.0).unwrap();
        let s = sample_string(&d, 1000, 11);
        assert_eq!(s.n(), 1000);
        let xi = true_total_probabilities(&d, &s).unwrap();
        assert!((xi.total() - 1.0).abs() < 1e-12);
    }
}
