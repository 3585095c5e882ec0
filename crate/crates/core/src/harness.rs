//! Monte Carlo experiments over a grid of `n`, L1 diagnostics against the
//! Poisson-mixture limit, deviation tables against the concentration
//! bounds, and the exhaustive enumeration oracle for small alphabets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{good_turing_totals, GoodTuringVector};
use crate::limits::{
    azuma_bound_xi, azuma_bound_zeta, expected_xi, expected_zeta, poisson_mixture,
    PoissonMixtureVector,
};
use crate::numeric::CompensatedSum;
use crate::sampling::{
    count_frequencies, trial_rng, true_total_probabilities, Sampler, TotalProbabilityVector,
    RNG_DESCRIPTION,
};
use crate::shadow::{DistributionSpec, Family};

/// Largest number of strings [`brute_force_expectations`] will enumerate.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Slack allowed on the triangle inequality between the three L1 metrics.
pub const TRIANGLE_SLACK: f64 = 1e-12;

/// `Σ_k |a_k - b_k|` over the union of supports. Entries must be sorted by `k`.
pub fn l1_distance(a: &[(u64, f64)], b: &[(u64, f64)]) -> f64 {
    let mut acc = CompensatedSum::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(u64::MAX, |e| e.0);
        let kb = b.get(j).map_or(u64::MAX, |e| e.0);
        if ka == kb {
            acc.add((a[i].1 - b[j].1).abs());
            i += 1;
            j += 1;
        } else if ka < kb {
            acc.add(a[i].1.abs());
            i += 1;
        } else {
            acc.add(b[j].1.abs());
            j += 1;
        }
    }
    acc.value()
}

/// L1 distance from a sparse distribution to a truncated Poisson mixture.
///
/// Frequencies `0..=kmax` are compared term by term; everything above
/// `kmax` is compared in aggregate, `|tail_mass - Σ_{k > kmax} a_k|`.
pub fn l1_distance_to_limit(a: &[(u64, f64)], lambda: &PoissonMixtureVector) -> f64 {
    let kmax = lambda.kmax as u64;
    let mut acc = CompensatedSum::new();
    let mut above = CompensatedSum::new();
    let mut next = 0u64;
    for &(k, v) in a {
        if k > kmax {
            above.add(v);
            continue;
        }
        for gap in next..k {
            acc.add(lambda.get(gap));
        }
        acc.add((v - lambda.get(k)).abs());
        next = k + 1;
    }
    for gap in next..=kmax {
        acc.add(lambda.get(gap));
    }
    acc.add((lambda.tail_mass - above.value()).abs());
    acc.value()
}

/// Projection loss of the tail aggregation for `ζ` against `ξ`:
/// `Σ_{k > kmax} |ξ_k - ζ_k| - |Σ_{k > kmax} (ξ_k - ζ_k)|`. Zero whenever
/// neither vector has mass above `kmax`.
fn tail_excess(xi: &[(u64, f64)], zeta: &[(u64, f64)], kmax: u64) -> f64 {
    let high = |v: &[(u64, f64)]| -> Vec<(u64, f64)> {
        v.iter().copied().filter(|&(k, _)| k > kmax).collect()
    };
    let (hx, hz) = (high(xi), high(zeta));
    if hx.is_empty() && hz.is_empty() {
        return 0.0;
    }
    let sx: f64 = hx.iter().map(|e| e.1).sum();
    let sz: f64 = hz.iter().map(|e| e.1).sum();
    (l1_distance(&hx, &hz) - (sx - sz).abs()).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub n: u64,
    pub trial_index: u64,
    pub xi: TotalProbabilityVector,
    pub zeta: GoodTuringVector,
    pub l1_xi_lambda: f64,
    pub l1_zeta_lambda: f64,
    /// Full `Σ_k |ξ_k - ζ_k|`.
    pub l1_zeta_xi: f64,
    /// Amount by which `l1_zeta_xi` exceeds its value after lumping all
    /// frequencies above `kmax` together, as the λ metrics do.
    pub tail_excess: f64,
}

impl TrialResult {
    /// `l1_zeta_xi <= l1_xi_lambda + l1_zeta_lambda`, compared on the same
    /// `0..=kmax` plus tail support as the λ metrics.
    pub fn triangle_holds(&self) -> bool {
        self.l1_zeta_xi - self.tail_excess
            <= self.l1_xi_lambda + self.l1_zeta_lambda + TRIANGLE_SLACK
    }
}

/// One trial: sample, count, and compare `ξ`, `ζ` and `λ`.
pub fn run_trial(
    family: &Family,
    n: u64,
    seed: u64,
    trial_index: u64,
    lambda: &PoissonMixtureVector,
) -> Result<TrialResult> {
    let dist = family.dist_at(n)?;
    run_trial_on(&dist, &Sampler::new(&dist), n, seed, trial_index, lambda)
}

fn run_trial_on(
    dist: &DistributionSpec,
    sampler: &Sampler,
    n: u64,
    seed: u64,
    trial_index: u64,
    lambda: &PoissonMixtureVector,
) -> Result<TrialResult> {
    let mut rng = trial_rng(seed, n, trial_index);
    let sample = sampler.sample(n, &mut rng);
    let freq = count_frequencies(&sample);
    let xi = true_total_probabilities(dist, &sample)?;
    let zeta = good_turing_totals(&freq)?;
    Ok(compare(n, trial_index, xi, zeta, lambda))
}

/// Assembles a [`TrialResult`] from already computed vectors.
pub fn compare(
    n: u64,
    trial_index: u64,
    xi: TotalProbabilityVector,
    zeta: GoodTuringVector,
    lambda: &PoissonMixtureVector,
) -> TrialResult {
    let xs: Vec<(u64, f64)> = xi.entries().collect();
    let zs: Vec<(u64, f64)> = zeta.entries().collect();
    TrialResult {
        n,
        trial_index,
        l1_xi_lambda: l1_distance_to_limit(&xs, lambda),
        l1_zeta_lambda: l1_distance_to_limit(&zs, lambda),
        l1_zeta_xi: l1_distance(&xs, &zs),
        tail_excess: tail_excess(&xs, &zs, lambda.kmax as u64),
        xi,
        zeta,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n_grid: Vec<u64>,
    pub trials: u64,
    pub kmax: usize,
    pub seed: u64,
    pub epsilon_grid: Vec<f64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials: must be at least 1".into()));
        }
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid: must not be empty".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::Config("n_grid: entries must be positive".into()));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("n_grid: must be strictly ascending".into()));
        }
        if self
            .epsilon_grid
            .iter()
            .any(|&e| !(e > 0.0 && e.is_finite()))
        {
            return Err(Error::Config(
                "epsilon_grid: entries must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
}

impl Stats {
    fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let len = sorted.len();
        let median = if len % 2 == 1 {
            sorted[len / 2]
        } else {
            0.5 * (sorted[len / 2 - 1] + sorted[len / 2])
        };
        let mean = values.iter().copied().collect::<CompensatedSum>().value() / len as f64;
        Self {
            mean,
            median,
            max: sorted[len - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: u64,
    pub trials: u64,
    pub l1_xi_lambda: Stats,
    pub l1_zeta_lambda: Stats,
    pub l1_zeta_xi: Stats,
    pub triangle_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialMetrics {
    pub n: u64,
    pub trial_index: u64,
    pub l1_xi_lambda: f64,
    pub l1_zeta_lambda: f64,
    pub l1_zeta_xi: f64,
    pub missing_mass_true: f64,
    pub missing_mass_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationRow {
    pub n: u64,
    pub k: u64,
    pub epsilon: f64,
    pub trials: u64,
    pub expected_xi: f64,
    pub expected_zeta: f64,
    /// Fraction of trials with `|ξ_k - E[ξ_k]| > ε`.
    pub frac_xi: f64,
    pub bound_xi: f64,
    /// Fraction of trials with `|ζ_k - E[ζ_k]| > ε`.
    pub frac_zeta: f64,
    pub bound_zeta: f64,
}

impl DeviationRow {
    /// Three binomial standard errors around `bound` for `trials` draws.
    pub fn noise_allowance(bound: f64, trials: u64) -> f64 {
        3.0 * (bound * (1.0 - bound) / trials as f64).sqrt()
    }

    pub fn xi_within_bound(&self) -> bool {
        self.frac_xi <= self.bound_xi + Self::noise_allowance(self.bound_xi, self.trials)
    }

    pub fn zeta_within_bound(&self) -> bool {
        self.frac_zeta <= self.bound_zeta + Self::noise_allowance(self.bound_zeta, self.trials)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub generator: String,
    pub version: String,
    pub rng: String,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub lambda: PoissonMixtureVector,
    pub summary: Vec<SummaryRow>,
    pub trials: Vec<TrialMetrics>,
    pub deviations: Vec<DeviationRow>,
}

/// Runs every `(n, trial)` cell of `config`.
///
/// Trials run on the current rayon pool; results are gathered in
/// `(n, trial_index)` order, so the report does not depend on the number
/// of threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let lambda = poisson_mixture(config.family.limit_q(), config.kmax)?;

    let mut summary = Vec::with_capacity(config.n_grid.len());
    let mut trials = Vec::new();
    let mut deviations = Vec::new();
    for &n in &config.n_grid {
        let dist = config.family.dist_at(n)?;
        let sampler = Sampler::new(&dist);
        let results: Vec<TrialResult> = (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial_on(&dist, &sampler, n, config.seed, t, &lambda))
            .collect::<Result<_>>()?;

        let column = |f: fn(&TrialResult) -> f64| -> Vec<f64> { results.iter().map(f).collect() };
        summary.push(SummaryRow {
            n,
            trials: config.trials,
            l1_xi_lambda: Stats::of(&column(|r| r.l1_xi_lambda)),
            l1_zeta_lambda: Stats::of(&column(|r| r.l1_zeta_lambda)),
            l1_zeta_xi: Stats::of(&column(|r| r.l1_zeta_xi)),
            triangle_violations: results.iter().filter(|r| !r.triangle_holds()).count() as u64,
        });
        trials.extend(results.iter().map(|r| TrialMetrics {
            n,
            trial_index: r.trial_index,
            l1_xi_lambda: r.l1_xi_lambda,
            l1_zeta_lambda: r.l1_zeta_lambda,
            l1_zeta_xi: r.l1_zeta_xi,
            missing_mass_true: r.xi.get(0),
            missing_mass_estimate: r.zeta.get(0),
        }));
        deviations.extend(deviation_rows(&dist, n, config, &results)?);
    }

    Ok(ExperimentReport {
        metadata: ReportMetadata {
            generator: "gt-core".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            rng: RNG_DESCRIPTION.into(),
            config: serde_json::to_value(config).map_err(|e| Error::Config(e.to_string()))?,
        },
        lambda,
        summary,
        trials,
        deviations,
    })
}

/// Deviation table for one `n`, centred on the exact finite-`n` means.
pub fn deviation_rows(
    dist: &DistributionSpec,
    n: u64,
    config: &ExperimentConfig,
    results: &[TrialResult],
) -> Result<Vec<DeviationRow>> {
    let count = results.len() as u64;
    let mut rows = Vec::new();
    let kmax = (config.kmax as u64).min(n - 1);
    for k in 0..=kmax {
        let mean_xi = expected_xi(dist, n, k)?;
        let mean_zeta = expected_zeta(dist, n, k)?;
        for &epsilon in &config.epsilon_grid {
            let exceed = |f: &dyn Fn(&TrialResult) -> f64, mean: f64| {
                results
                    .iter()
                    .filter(|r| (f(r) - mean).abs() > epsilon)
                    .count() as f64
                    / count as f64
            };
            rows.push(DeviationRow {
                n,
                k,
                epsilon,
                trials: count,
                expected_xi: mean_xi,
                expected_zeta: mean_zeta,
                frac_xi: exceed(&|r| r.xi.get(k), mean_xi),
                bound_xi: azuma_bound_xi(n, epsilon),
                frac_zeta: exceed(&|r| r.zeta.get(k), mean_zeta),
                bound_zeta: azuma_bound_zeta(n, k, epsilon),
            });
        }
    }
    Ok(rows)
}

/// Exact `E[ξ_k]` and `E[ζ_k]` for `k = 0..=n`, by enumerating strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectations {
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
}

/// Enumerates all `A^n` strings over the expanded alphabet of `dist`.
///
/// Each string contributes its exact probability times the `ξ` and `ζ` it
/// induces, computed directly from its symbol counts.
pub fn brute_force_expectations(dist: &DistributionSpec, n: u64) -> Result<Expectations> {
    let probs = enumeration_alphabet(dist, n)?;
    let mut acc = Accumulator::new(n);
    enumerate_with_prefix(&probs, n as usize, None, &mut acc);
    Ok(acc.finish())
}

/// [`brute_force_expectations`] split over the first symbol on the rayon
/// pool; partial sums are combined in symbol order.
pub fn brute_force_expectations_parallel(dist: &DistributionSpec, n: u64) -> Result<Expectations> {
    let probs = enumeration_alphabet(dist, n)?;
    if n == 0 {
        return brute_force_expectations(dist, n);
    }
    let partials: Vec<Accumulator> = (0..probs.len())
        .into_par_iter()
        .map(|first| {
            let mut acc = Accumulator::new(n);
            enumerate_with_prefix(&probs, n as usize, Some(first), &mut acc);
            acc
        })
        .collect();
    let mut total = Accumulator::new(n);
    for part in &partials {
        total.merge(part);
    }
    Ok(total.finish())
}

fn enumeration_alphabet(dist: &DistributionSpec, n: u64) -> Result<Vec<f64>> {
    if dist.continuous_mass() > 0.0 {
        return Err(Error::Domain(
            "enumeration needs a distribution without continuous mass".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("enumeration needs n >= 1".into()));
    }
    let alphabet = dist.alphabet_size();
    let too_large = Error::TooLarge {
        alphabet,
        n,
        cap: ENUMERATION_CAP,
    };
    let exp = u32::try_from(n).map_err(|_| too_large.clone())?;
    match alphabet.checked_pow(exp) {
        Some(total) if total <= ENUMERATION_CAP => {}
        _ => return Err(too_large),
    }
    Ok(dist
        .atoms()
        .iter()
        .flat_map(|a| std::iter::repeat_n(a.prob, a.multiplicity as usize))
        .collect())
}

struct Accumulator {
    n: usize,
    xi: Vec<CompensatedSum>,
    zeta: Vec<CompensatedSum>,
}

impl Accumulator {
    fn new(n: u64) -> Self {
        let len = n as usize + 1;
        Self {
            n: n as usize,
            xi: vec![CompensatedSum::new(); len],
            zeta: vec![CompensatedSum::new(); len],
        }
    }

    fn record(&mut self, weight: f64, probs: &[f64], counts: &[usize]) {
        let mut xi = vec![0.0; self.n + 1];
        let mut phi = vec![0usize; self.n + 2];
        for (&p, &c) in probs.iter().zip(counts) {
            xi[c] += p;
            phi[c] += 1;
        }
        for k in 0..=self.n {
            if xi[k] != 0.0 {
                self.xi[k].add(weight * xi[k]);
            }
            let num = (k + 1) * phi[k + 1];
            if num != 0 {
                self.zeta[k].add(weight * num as f64 / self.n as f64);
            }
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for (a, b) in self.xi.iter_mut().zip(&other.xi) {
            a.add(b.value());
        }
        for (a, b) in self.zeta.iter_mut().zip(&other.zeta) {
            a.add(b.value());
        }
    }

    fn finish(self) -> Expectations {
        Expectations {
            xi: self.xi.iter().map(CompensatedSum::value).collect(),
            zeta: self.zeta.iter().map(CompensatedSum::value).collect(),
        }
    }
}

fn enumerate_with_prefix(probs: &[f64], n: usize, first: Option<usize>, acc: &mut Accumulator) {
    let a = probs.len();
    let fixed = usize::from(first.is_some());
    let mut string = vec![0usize; n];
    if let Some(f) = first {
        string[0] = f;
    }
    let mut counts = vec![0usize; a];
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut weight = 1.0;
        for &s in &string {
            counts[s] += 1;
            weight *= probs[s];
        }
        acc.record(weight, probs, &counts);

        // odometer over the free positions
        let mut pos = n;
        loop {
            if pos == fixed {
                return;
            }
            pos -= 1;
            string[pos] += 1;
            if string[pos] < a {
                break;
            }
            string[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{FrequencyTable, SampleString, SymbolId};
    use crate::shadow::{make_distribution, MixingDistribution};

    #[test]
    fn l1_examples() {
        let a = [(0, 0.5), (1, 0.5)];
        assert_eq!(l1_distance(&a, &a), 0.0);
        assert_eq!(l1_distance(&[(0, 1.0)], &[(1, 1.0)]), 2.0);
        assert_eq!(l1_distance(&a, &[(0, 0.25), (1, 0.75)]), 0.5);
    }

    #[test]
    fn l1_against_limit_counts_tail() {
        let lambda = PoissonMixtureVector {
            kmax: 1,
            lambda: vec![0.5, 0.25],
            tail_mass: 0.25,
        };
        assert!(l1_distance_to_limit(&[(0, 0.5), (1, 0.25), (7, 0.25)], &lambda).abs() < 1e-16);
        assert!((l1_distance_to_limit(&[(1, 1.0)], &lambda) - 1.5).abs() < 1e-16);
        assert!((l1_distance_to_limit(&[(3, 1.0)], &lambda) - 1.5).abs() < 1e-16);
    }

    fn delta_one(kmax: usize) -> PoissonMixtureVector {
        poisson_mixture(&MixingDistribution::point_mass(1.0), kmax).unwrap()
    }

    #[test]
    fn smallest_uniform_trial() {
        let r = run_trial(&Family::uniform(), 1, 0, 0, &delta_one(30)).unwrap();
        assert_eq!(r.xi.get(1), 1.0);
        assert_eq!(r.zeta.get(0), 1.0);
        assert_eq!(r.l1_zeta_xi, 2.0);
        assert!(r.triangle_holds());
    }

    #[test]
    fn deterministic_distribution_trial() {
        let fam = Family::fixed(vec![(1.0, 1)], 0.0, MixingDistribution::point_mass(1.0)).unwrap();
        for n in [3, 12, 100] {
            let r = run_trial(&fam, n, 5, 0, &delta_one(30)).unwrap();
            assert_eq!(r.xi.get(n), 1.0);
            assert_eq!(r.zeta.get(n - 1), 1.0);
            assert_eq!(r.l1_zeta_xi, 2.0);
            assert!(r.triangle_holds());
        }
    }

    #[test]
    fn triangle_uses_tail_projection() {
        let lambda = delta_one(2);
        let sample =
            SampleString::from_counts([(SymbolId::Atom { class: 0, slot: 0 }, 5)]).unwrap();
        let dist = make_distribution(&[(1.0, 1)], 0.0).unwrap();
        let xi = true_total_probabilities(&dist, &sample).unwrap();
        let zeta = good_turing_totals(&FrequencyTable::from_phi(5, [(5, 1)]).unwrap()).unwrap();
        let r = compare(5, 0, xi, zeta, &lambda);
        assert_eq!(r.l1_zeta_xi, 2.0);
        assert_eq!(r.tail_excess, 2.0);
        assert!(r.triangle_holds());
    }

    #[test]
    fn brute_force_small_cases() {
        let two = make_distribution(&[(0.5, 2)], 0.0).unwrap();
        let e = brute_force_expectations(&two, 2).unwrap();
        // "aa", "bb" leave half the mass unseen; "ab", "ba" see both once
        assert_eq!(e.xi, vec![0.25, 0.5, 0.25]);
        assert_eq!(e.zeta, vec![0.5, 0.5, 0.0]);

        let one = make_distribution(&[(1.0, 1)], 0.0).unwrap();
        let e = brute_force_expectations(&one, 3).unwrap();
        assert_eq!(e.xi[3], 1.0);
        assert_eq!(e.zeta[2], 1.0);
    }

    #[test]
    fn brute_force_parallel_matches_serial() {
        let d = make_distribution(&[(0.25, 2), (0.5, 1)], 0.0).unwrap();
        let serial = brute_force_expectations(&d, 6).unwrap();
        let parallel = brute_force_expectations_parallel(&d, 6).unwrap();
        for (a, b) in serial.xi.iter().zip(&parallel.xi) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in serial.zeta.iter().zip(&parallel.zeta) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn brute_force_rejects_large_or_continuous() {
        let big = make_distribution(&[(0.01, 100)], 0.0).unwrap();
        assert!(matches!(
            brute_force_expectations(&big, 4),
            Err(Error::TooLarge { .. })
        ));
        let cont = make_distribution(&[(0.5, 1)], 0.5).unwrap();
        assert!(brute_force_expectations(&cont, 2).is_err());
    }

    fn config(n_grid: Vec<u64>, trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            family: Family::uniform(),
            n_grid,
            trials,
            kmax: 10,
            seed: 17,
            epsilon_grid: vec![0.1],
        }
    }

    #[test]
    fn smallest_experiment() {
        let report = run_experiment(&config(vec![10], 1)).unwrap();
        assert_eq!(report.summary.len(), 1);
        assert_eq!(report.summary[0].trials, 1);
        assert_eq!(report.trials.len(), 1);
        assert_eq!(report.deviations.len(), 10);
        for row in &report.deviations {
            assert!((0.0..=1.0).contains(&row.frac_xi));
            assert!((0.0..=1.0).contains(&row.frac_zeta));
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = config(vec![50, 200], 8);
        let a = serde_json::to_string(&run_experiment(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        assert!(config(vec![10], 0).validate().is_err());
        assert!(config(vec![], 1).validate().is_err());
        assert!(config(vec![10, 10], 1).validate().is_err());
        assert!(config(vec![0, 10], 1).validate().is_err());
        let mut bad_eps = config(vec![10], 1);
        bad_eps.epsilon_grid = vec![-0.1];
        assert!(bad_eps.validate().is_err());
    }
}
