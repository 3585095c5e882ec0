//! Label-free distributions, shadows, scaled shadows and distribution
//! families with a declared limiting mixing distribution.
//!
//! A [`DistributionSpec`] stores only what the shadow can see: a list of
//! atom probabilities with multiplicities plus the total mass of an atomless
//! component. Symbol identities are materialised by the sampler.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Largest deviation from 1 that is corrected silently by rescaling.
pub const NORMALIZATION_SLACK: f64 = 1e-6;

/// Relative tolerance under which two atom probabilities are treated as equal.
pub const MERGE_TOLERANCE: f64 = 1e-9;

const MIXING_TOLERANCE: f64 = 1e-9;

/// Largest `n` a quantized-density family will discretise.
pub const MAX_QUANTIZED_N: u64 = 100_000_000;

/// An atom class: `multiplicity` distinct symbols, each with probability `prob`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub prob: f64,
    pub multiplicity: u64,
}

impl Atom {
    pub fn mass(&self) -> f64 {
        self.prob * self.multiplicity as f64
    }
}

/// An underlying distribution `P_n`, up to relabelling of symbols.
///
/// Atoms are kept sorted by ascending probability with equal probabilities
/// merged.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    atoms: Vec<Atom>,
    continuous_mass: f64,
    correction: f64,
}

impl DistributionSpec {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn continuous_mass(&self) -> f64 {
        self.continuous_mass
    }

    /// Factor the raw inputs were multiplied by during normalization
    /// (exactly 1 when no correction was needed).
    pub fn normalization_correction(&self) -> f64 {
        self.correction
    }

    /// Number of distinct symbols carrying positive probability.
    pub fn alphabet_size(&self) -> u64 {
        self.atoms.iter().map(|a| a.multiplicity).sum()
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(
            self.atoms
                .iter()
                .map(Atom::mass)
                .chain(std::iter::once(self.continuous_mass)),
        )
    }

    pub fn max_prob(&self) -> f64 {
        self.atoms.last().map_or(0.0, |a| a.prob)
    }
}

/// Builds a canonical [`DistributionSpec`].
///
/// Equal probabilities are merged, and a total within `1e-6` of one is
/// rescaled to exactly one.
pub fn make_distribution(atoms: &[(f64, u64)], continuous_mass: f64) -> Result<DistributionSpec> {
    if !(0.0..=1.0).contains(&continuous_mass) {
        return Err(Error::Domain(format!(
            "continuous mass {continuous_mass} is outside [0, 1]"
        )));
    }
    let mut sorted = Vec::with_capacity(atoms.len());
    for &(prob, multiplicity) in atoms {
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(Error::Domain(format!(
                "atom probability {prob} is outside (0, 1]"
            )));
        }
        if multiplicity == 0 {
            return Err(Error::Domain("atom multiplicity must be positive".into()));
        }
        sorted.push(Atom { prob, multiplicity });
    }
    sorted.sort_by(|a, b| a.prob.total_cmp(&b.prob));

    let mut merged: Vec<Atom> = Vec::with_capacity(sorted.len());
    for atom in sorted {
        match merged.last_mut() {
            Some(last) if (atom.prob - last.prob).abs() <= MERGE_TOLERANCE * last.prob => {
                last.multiplicity = last
                    .multiplicity
                    .checked_add(atom.multiplicity)
                    .ok_or_else(|| Error::Domain("total multiplicity overflows u64".into()))?;
            }
            _ => merged.push(atom),
        }
    }

    let total = compensated_sum(
        merged
            .iter()
            .map(Atom::mass)
            .chain(std::iter::once(continuous_mass)),
    );
    if !total.is_finite() || (total - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::Normalization { total });
    }
    let correction = 1.0 / total;
    if correction != 1.0 {
        for atom in &mut merged {
            atom.prob *= correction;
        }
    }
    Ok(DistributionSpec {
        atoms: merged,
        continuous_mass: continuous_mass * correction,
        correction,
    })
}

/// The law of `P_n({X})` for `X ~ P_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Shadow {
    /// `(value, weight)` pairs with distinct values in ascending order.
    pub points: Vec<(f64, f64)>,
}

impl Shadow {
    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.points.iter().map(|&(_, w)| w))
    }
}

pub fn shadow_of(dist: &DistributionSpec) -> Shadow {
    let mut points = Vec::with_capacity(dist.atoms.len() + 1);
    if dist.continuous_mass > 0.0 {
        points.push((0.0, dist.continuous_mass));
    }
    points.extend(dist.atoms.iter().map(|a| (a.prob, a.mass())));
    Shadow { points }
}

/// The law of `n P_n({X})`, as a purely atomic mixing distribution.
pub fn scaled_shadow(dist: &DistributionSpec, n: u64) -> MixingDistribution {
    let scale = n as f64;
    let atoms = shadow_of(dist)
        .points
        .into_iter()
        .map(|(v, w)| (scale * v, w))
        .collect();
    MixingDistribution {
        atoms,
        density: None,
    }
}

/// A nonnegative piecewise-linear function on an ascending grid.
///
/// Repeated grid points are allowed and encode jumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Domain(format!(
                "density grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::Domain(
                "density grid needs at least two points".into(),
            ));
        }
        if grid.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "density grid and values must be finite".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("density grid must be ascending".into()));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::Domain("density values must be nonnegative".into()));
        }
        Ok(Self { grid, values })
    }

    /// Nondegenerate segments `(x0, x1, v0, v1)`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.grid.len() - 1).filter_map(move |i| {
            let (x0, x1) = (self.grid[i], self.grid[i + 1]);
            (x1 > x0).then(|| (x0, x1, self.values[i], self.values[i + 1]))
        })
    }

    /// Trapezoid integral over the whole grid (exact for piecewise-linear).
    pub fn integral(&self) -> f64 {
        compensated_sum(
            self.segments()
                .map(|(x0, x1, v0, v1)| 0.5 * (x1 - x0) * (v0 + v1)),
        )
    }

    /// Value at `x`; zero outside the grid, right-continuous at jumps.
    pub fn eval(&self, x: f64) -> f64 {
        let first = self.grid[0];
        let last = *self.grid.last().unwrap();
        if x < first || x > last {
            return 0.0;
        }
        let i = self.grid.partition_point(|&g| g <= x);
        if i == self.grid.len() {
            return *self.values.last().unwrap();
        }
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    /// Exact integral over `[lo, hi]`.
    pub fn integral_between(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let start = self.grid.partition_point(|&g| g <= lo).saturating_sub(1);
        let mut acc = 0.0;
        for i in start..self.grid.len() - 1 {
            let (x0, x1) = (self.grid[i], self.grid[i + 1]);
            if x0 >= hi {
                break;
            }
            if x1 <= x0 || x1 <= lo {
                continue;
            }
            let a = lo.max(x0);
            let b = hi.min(x1);
            let slope = (self.values[i + 1] - self.values[i]) / (x1 - x0);
            let fa = self.values[i] + slope * (a - x0);
            let fb = self.values[i] + slope * (b - x0);
            acc += 0.5 * (b - a) * (fa + fb);
        }
        acc
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// The law `Q` of a nonnegative random variable `Y`: atoms plus an optional
/// piecewise-linear density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixingSpec", into = "MixingSpec")]
pub struct MixingDistribution {
    atoms: Vec<(f64, f64)>,
    density: Option<PiecewiseLinear>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixingSpec {
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<PiecewiseLinear>,
}

impl TryFrom<MixingSpec> for MixingDistribution {
    type Error = Error;

    fn try_from(spec: MixingSpec) -> Result<Self> {
        let density = spec
            .density
            .map(|d| PiecewiseLinear::new(d.grid, d.values))
            .transpose()?;
        MixingDistribution::new(spec.atoms, density)
    }
}

impl From<MixingDistribution> for MixingSpec {
    fn from(q: MixingDistribution) -> Self {
        MixingSpec {
            atoms: q.atoms,
            density: q.density,
        }
    }
}

impl MixingDistribution {
    pub fn new(mut atoms: Vec<(f64, f64)>, density: Option<PiecewiseLinear>) -> Result<Self> {
        for &(y, w) in &atoms {
            if !(y.is_finite() && y >= 0.0) {
                return Err(Error::Domain(format!(
                    "mixing atom location {y} must be >= 0"
                )));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::Domain(format!(
                    "mixing atom weight {w} is outside [0, 1]"
                )));
            }
        }
        if let Some(d) = &density {
            if d.grid[0] < 0.0 {
                return Err(Error::Domain("mixing density grid must be >= 0".into()));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let q = Self { atoms, density };
        let total = q.total_mass();
        if (total - 1.0).abs() > MIXING_TOLERANCE {
            return Err(Error::Normalization { total });
        }
        Ok(q)
    }

    /// Point mass at `y`.
    pub fn point_mass(y: f64) -> Self {
        Self {
            atoms: vec![(y, 1.0)],
            density: None,
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&PiecewiseLinear> {
        self.density.as_ref()
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(
            self.atoms
                .iter()
                .map(|&(_, w)| w)
                .chain(self.density.iter().map(PiecewiseLinear::integral)),
        )
    }

    /// `Q([0, y])`.
    pub fn cdf(&self, y: f64) -> f64 {
        let atoms = compensated_sum(self.atoms.iter().filter(|a| a.0 <= y).map(|a| a.1));
        atoms + self.density_cdf(y)
    }

    /// `Q([0, y))`.
    pub fn cdf_left(&self, y: f64) -> f64 {
        let atoms = compensated_sum(self.atoms.iter().filter(|a| a.0 < y).map(|a| a.1));
        atoms + self.density_cdf(y)
    }

    fn density_cdf(&self, y: f64) -> f64 {
        self.density
            .as_ref()
            .map_or(0.0, |d| d.integral_between(d.grid[0], y))
    }
}

/// Kolmogorov (CDF sup) distance between two mixing distributions.
///
/// Exact when both are atomic; otherwise evaluated on the union of atom
/// locations and density grid points.
pub fn cdf_sup_distance(a: &MixingDistribution, b: &MixingDistribution) -> f64 {
    let mut points: Vec<f64> = a
        .atoms
        .iter()
        .chain(&b.atoms)
        .map(|&(y, _)| y)
        .chain(a.density.iter().flat_map(|d| d.grid.iter().copied()))
        .chain(b.density.iter().flat_map(|d| d.grid.iter().copied()))
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .iter()
        .map(|&y| {
            let right = (a.cdf(y) - b.cdf(y)).abs();
            let left = (a.cdf_left(y) - b.cdf_left(y)).abs();
            right.max(left)
        })
        .fold(0.0, f64::max)
}

/// How a [`Family`] produces `P_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    /// Uniform over `n` symbols.
    Uniform,
    /// `n` equal-width bins of a density on `[0, 1]`.
    QuantizedDensity { density: PiecewiseLinear },
    /// Stored distributions, either one for every `n` or one per listed `n`.
    ExplicitSequence {
        fixed: Option<DistributionSpec>,
        by_n: BTreeMap<u64, DistributionSpec>,
    },
}

/// A sequence `{P_n}` together with the declared limit `Q` of its scaled
/// shadows. The limit is asserted, not verified.
#[derive(Debug, Clone)]
pub struct Family {
    kind: FamilyKind,
    limit_q: MixingDistribution,
    spec: FamilySpec,
}

/// JSON form of a [`Family`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<PiecewiseLinear>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<(f64, u64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<SequenceEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_q: Option<MixingDistribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceEntry {
    pub n: u64,
    pub atoms: Vec<(f64, u64)>,
    #[serde(default)]
    pub continuous_mass: f64,
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = FamilySpec::deserialize(d)?;
        Family::from_spec(spec).map_err(serde::de::Error::custom)
    }
}

impl Family {
    pub fn uniform() -> Self {
        Self::from_spec(FamilySpec {
            kind: "uniform".into(),
            density: None,
            atoms: None,
            continuous_mass: None,
            sequence: None,
            limit_q: None,
        })
        .expect("uniform family is always valid")
    }

    /// Quantizes `density` on `[0, 1]`; the limit of the scaled shadows is
    /// derived from the density.
    pub fn quantized_density(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::from_spec(FamilySpec {
            kind: "quantized_density".into(),
            density: Some(PiecewiseLinear { grid, values }),
            atoms: None,
            continuous_mass: None,
            sequence: None,
            limit_q: None,
        })
    }

    /// The same distribution for every `n`, with an explicitly declared limit.
    pub fn fixed(
        atoms: Vec<(f64, u64)>,
        continuous_mass: f64,
        limit_q: MixingDistribution,
    ) -> Result<Self> {
        Self::from_spec(FamilySpec {
            kind: "explicit_sequence".into(),
            density: None,
            atoms: Some(atoms),
            continuous_mass: Some(continuous_mass),
            sequence: None,
            limit_q: Some(limit_q),
        })
    }

    pub fn from_spec(spec: FamilySpec) -> Result<Self> {
        let (kind, derived_q) = match spec.kind.as_str() {
            "uniform" => (FamilyKind::Uniform, MixingDistribution::point_mass(1.0)),
            "quantized_density" => {
                let raw = spec.density.clone().ok_or_else(|| {
                    Error::Config("family.density is required for kind quantized_density".into())
                })?;
                let density = normalized_unit_density(raw)?;
                let q = quantized_limit(&density)?;
                (FamilyKind::QuantizedDensity { density }, q)
            }
            "explicit_sequence" => {
                let fixed = match &spec.atoms {
                    Some(atoms) => Some(make_distribution(atoms, spec.continuous_mass.unwrap_or(0.0))?),
                    None if spec.continuous_mass.is_some() => {
                        Some(make_distribution(&[], spec.continuous_mass.unwrap())?)
                    }
                    None => None,
                };
                let mut by_n = BTreeMap::new();
                for entry in spec.sequence.iter().flatten() {
                    by_n.insert(entry.n, make_distribution(&entry.atoms, entry.continuous_mass)?);
                }
                if fixed.is_none() && by_n.is_empty() {
                    return Err(Error::Config(
                        "explicit_sequence needs family.atoms/continuous_mass or family.sequence".into(),
                    ));
                }
                let q = spec.limit_q.clone().ok_or_else(|| {
                    Error::Config("family.limit_q is required for kind explicit_sequence".into())
                })?;
                (FamilyKind::ExplicitSequence { fixed, by_n }, q)
            }
            other => {
                return Err(Error::Config(format!(
                    "family.kind must be uniform, quantized_density or explicit_sequence, got {other:?}"
                )))
            }
        };
        let limit_q = spec.limit_q.clone().unwrap_or(derived_q);
        Ok(Self {
            kind,
            limit_q,
            spec,
        })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn limit_q(&self) -> &MixingDistribution {
        &self.limit_q
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// `P_n` for this family.
    pub fn dist_at(&self, n: u64) -> Result<DistributionSpec> {
        if n == 0 {
            return Err(Error::UnsupportedN(n));
        }
        match &self.kind {
            FamilyKind::Uniform => make_distribution(&[(1.0 / n as f64, n)], 0.0),
            FamilyKind::QuantizedDensity { density } => {
                if n > MAX_QUANTIZED_N {
                    return Err(Error::UnsupportedN(n));
                }
                let width = 1.0 / n as f64;
                let atoms: Vec<(f64, u64)> = (0..n)
                    .filter_map(|i| {
                        let lo = i as f64 * width;
                        let hi = if i + 1 == n {
                            1.0
                        } else {
                            (i + 1) as f64 * width
                        };
                        let p = density.integral_between(lo, hi);
                        (p > 0.0).then_some((p, 1))
                    })
                    .collect();
                make_distribution(&atoms, 0.0)
            }
            FamilyKind::ExplicitSequence { fixed, by_n } => by_n
                .get(&n)
                .or(fixed.as_ref())
                .cloned()
                .ok_or(Error::UnsupportedN(n)),
        }
    }
}

fn normalized_unit_density(raw: PiecewiseLinear) -> Result<PiecewiseLinear> {
    let density = PiecewiseLinear::new(raw.grid, raw.values)?;
    if density.grid[0] != 0.0 || *density.grid.last().unwrap() != 1.0 {
        return Err(Error::Domain(
            "quantized density grid must span exactly [0, 1]".into(),
        ));
    }
    let total = density.integral();
    if (total - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::Normalization { total });
    }
    Ok(density.scaled(1.0 / total))
}

/// Limit of the scaled shadows of a quantized density `f` on `[0, 1]`: the
/// law of `f(U)` size-biased by `f`. A linear segment with slope `b`
/// contributes density `y / |b|` over its range; a flat segment at height
/// `a` contributes an atom at `a` of weight `a` times its width.
fn quantized_limit(f: &PiecewiseLinear) -> Result<MixingDistribution> {
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    // (lo, hi, coefficient) with density coefficient * y on [lo, hi]
    let mut pieces: Vec<(f64, f64, f64)> = Vec::new();
    for (x0, x1, v0, v1) in f.segments() {
        if v0 == v1 {
            if v0 > 0.0 {
                atoms.push((v0, v0 * (x1 - x0)));
            }
        } else {
            let slope = ((v1 - v0) / (x1 - x0)).abs();
            pieces.push((v0.min(v1), v0.max(v1), 1.0 / slope));
        }
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (y, w) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == y => last.1 += w,
            _ => merged.push((y, w)),
        }
    }

    let density = if pieces.is_empty() {
        None
    } else {
        let mut breaks: Vec<f64> = pieces.iter().flat_map(|&(lo, hi, _)| [lo, hi]).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let coef: f64 = pieces
                .iter()
                .filter(|&&(lo, hi, _)| lo <= a && hi >= b)
                .map(|&(_, _, c)| c)
                .sum();
            let (va, vb) = (coef * a, coef * b);
            let continues = grid.last() == Some(&a) && values.last() == Some(&va);
            if !continues {
                grid.push(a);
                values.push(va);
            }
            grid.push(b);
            values.push(vb);
        }
        Some(PiecewiseLinear::new(grid, values)?)
    };
    MixingDistribution::new(merged, density)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_symbol_example_is_valid() {
        let d = make_distribution(&[(0.25, 2), (0.5, 1)], 0.0).unwrap();
        assert_eq!(d.atoms().len(), 2);
        assert_eq!(d.alphabet_size(), 3);
        assert_eq!(d.normalization_correction(), 1.0);
    }

    #[test]
    fn degenerate_single_symbol() {
        let d = make_distribution(&[(1.0, 1)], 0.0).unwrap();
        assert_eq!(
            d.atoms(),
            &[Atom {
                prob: 1.0,
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn equal_probabilities_are_merged() {
        let d = make_distribution(&[(0.3, 1), (0.3, 1)], 0.4).unwrap();
        assert_eq!(
            d.atoms(),
            &[Atom {
                prob: 0.3,
                multiplicity: 2
            }]
        );
        assert_eq!(d.continuous_mass(), 0.4);
    }

    #[test]
    fn small_drift_is_rescaled() {
        let d = make_distribution(&[(0.5, 2)], 1e-7).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-15);
        assert!(d.normalization_correction() < 1.0);
    }

    #[test]
    fn large_drift_is_rejected() {
        assert!(matches!(
            make_distribution(&[(0.5, 1)], 0.0),
            Err(Error::Normalization { .. })
        ));
        assert!(matches!(
            make_distribution(&[(0.0, 1)], 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            make_distribution(&[(0.5, 0)], 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shadow_of_three_symbol_example() {
        let d = make_distribution(&[(0.25, 2), (0.5, 1)], 0.0).unwrap();
        assert_eq!(shadow_of(&d).points, vec![(0.25, 0.5), (0.5, 0.5)]);
    }

    #[test]
    fn uniform_shadow_is_deterministic() {
        let d = make_distribution(&[(0.125, 8)], 0.0).unwrap();
        assert_eq!(shadow_of(&d).points, vec![(0.125, 1.0)]);
    }

    #[test]
    fn continuous_shadow_sits_at_zero() {
        let d = make_distribution(&[], 1.0).unwrap();
        assert_eq!(shadow_of(&d).points, vec![(0.0, 1.0)]);
        assert_eq!(scaled_shadow(&d, 17).atoms(), &[(0.0, 1.0)]);
    }

    #[test]
    fn scaled_shadow_of_three_symbol_example() {
        let d = make_distribution(&[(0.25, 2), (0.5, 1)], 0.0).unwrap();
        assert_eq!(scaled_shadow(&d, 4).atoms(), &[(1.0, 0.5), (2.0, 0.5)]);
    }

    #[test]
    fn uniform_family() {
        let fam = Family::uniform();
        let d = fam.dist_at(3).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert_eq!(d.atoms()[0].multiplicity, 3);
        assert!((d.atoms()[0].prob - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(fam.limit_q(), &MixingDistribution::point_mass(1.0));
        assert_eq!(fam.dist_at(0), Err(Error::UnsupportedN(0)));
    }

    #[test]
    fn quantized_triangular_density() {
        let fam = Family::quantized_density(vec![0.0, 1.0], vec![0.0, 2.0]).unwrap();
        let d = fam.dist_at(2).unwrap();
        assert_eq!(
            d.atoms(),
            &[
                Atom {
                    prob: 0.25,
                    multiplicity: 1
                },
                Atom {
                    prob: 0.75,
                    multiplicity: 1
                }
            ]
        );
        let q = fam.limit_q();
        assert!(q.atoms().is_empty());
        let dens = q.density().unwrap();
        assert_eq!(dens.grid, vec![0.0, 2.0]);
        assert_eq!(dens.values, vec![0.0, 1.0]);
    }

    #[test]
    fn quantized_uniform_density() {
        let fam = Family::quantized_density(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let d = fam.dist_at(5).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert_eq!(d.atoms()[0].multiplicity, 5);
        assert!((d.atoms()[0].prob - 0.2).abs() < 1e-15);
        assert_eq!(fam.limit_q(), &MixingDistribution::point_mass(1.0));
    }

    #[test]
    fn quantized_limit_with_overlapping_segments() {
        // tent: 0 -> 2 -> 0; both halves map onto y in [0, 2] with slope 4
        let fam = Family::quantized_density(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 0.0]).unwrap();
        let q = fam.limit_q();
        let dens = q.density().unwrap();
        assert_eq!(dens.grid, vec![0.0, 2.0]);
        assert_eq!(dens.values, vec![0.0, 1.0]);
        assert!((q.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantized_limit_with_jump() {
        // f = 1/2 on [0, 1/2], then linear 1/2 -> 5/2 on [1/2, 1]
        let fam = Family::quantized_density(vec![0.0, 0.5, 1.0], vec![0.5, 0.5, 2.5]).unwrap();
        let q = fam.limit_q();
        assert_eq!(q.atoms(), &[(0.5, 0.25)]);
        let dens = q.density().unwrap();
        assert_eq!(dens.grid, vec![0.5, 2.5]);
        assert_eq!(dens.values, vec![0.125, 0.625]);
        assert!((q.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_sequence_lookup() {
        let json = r#"{"kind": "explicit_sequence",
            "sequence": [{"n": 2, "atoms": [[0.5, 2]]}],
            "limit_q": {"atoms": [[1.0, 1.0]]}}"#;
        let fam: Family = serde_json::from_str(json).unwrap();
        assert_eq!(fam.dist_at(2).unwrap().alphabet_size(), 2);
        assert_eq!(fam.dist_at(3), Err(Error::UnsupportedN(3)));
    }

    #[test]
    fn explicit_sequence_requires_limit() {
        let json = r#"{"kind": "explicit_sequence", "atoms": [[1.0, 1]], "continuous_mass": 0}"#;
        assert!(serde_json::from_str::<Family>(json).is_err());
    }

    #[test]
    fn family_json_field_names() {
        let json =
            r#"{"kind": "quantized_density", "density": {"grid": [0, 1], "values": [0, 2]}}"#;
        let fam: Family = serde_json::from_str(json).unwrap();
        assert!(matches!(fam.kind(), FamilyKind::QuantizedDensity { .. }));
        assert!(serde_json::from_str::<Family>(r#"{"kind": "zipf"}"#).is_err());
        assert!(serde_json::from_str::<Family>(r#"{"kind": "uniform", "bogus": 1}"#).is_err());
    }

    #[test]
    fn mixing_distribution_validation() {
        assert!(MixingDistribution::new(vec![(1.0, 0.5)], None).is_err());
        assert!(MixingDistribution::new(vec![(-1.0, 1.0)], None).is_err());
        let d = PiecewiseLinear::new(vec![0.0, 2.0], vec![0.0, 1.0]).unwrap();
        let q = MixingDistribution::new(vec![], Some(d)).unwrap();
        assert!((q.cdf(1.0) - 0.25).abs() < 1e-15);
        assert_eq!(q.cdf(5.0), 1.0);
    }

    #[test]
    fn cdf_sup_distance_of_atoms() {
        let a = MixingDistribution::point_mass(1.0);
        let b = MixingDistribution::point_mass(2.0);
        assert_eq!(cdf_sup_distance(&a, &b), 1.0);
        assert_eq!(cdf_sup_distance(&a, &a), 0.0);
    }
}
