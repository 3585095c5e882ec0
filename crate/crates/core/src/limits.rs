//! Binomial and Poisson kernels, the Poisson-mixture limit `λ`, exact
//! finite-`n` expectations of `ξ` and `ζ`, and the concentration and
//! truncation bounds used to check them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, binomial_pmf, compensated_sum, ln_factorial, poisson_pmf};
use crate::shadow::{DistributionSpec, MixingDistribution};

/// Default number of explicit `λ_k` terms.
pub const DEFAULT_KMAX: usize = 50;

/// Absolute quadrature tolerance per `λ_k`.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Recursion cap for adaptive Simpson.
pub const QUADRATURE_MAX_DEPTH: u32 = 40;

/// Largest `n` evaluated by the direct product formula in [`g_binomial`].
const DIRECT_BINOMIAL_MAX_N: u64 = 30;

/// `g_k^n(y) = C(n, k) (y/n)^k (1 - y/n)^(n-k)` for `0 <= y <= n`.
pub fn g_binomial(n: u64, k: u64, y: f64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    if !(0.0..=n as f64).contains(&y) {
        return Err(Error::Domain(format!("y = {y} is outside [0, {n}]")));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let p = y / nf;
    let q = (nf - y) / nf;
    if n <= DIRECT_BINOMIAL_MAX_N {
        let choose = (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        return Ok(choose as f64 * p.powi(k as i32) * q.powi((n - k) as i32));
    }
    Ok(binomial_pmf(k, n, p, q))
}

/// `g_k(y) = y^k e^(-y) / k!`, the Poisson pmf.
pub fn g_poisson(k: u64, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("y = {y} must be nonnegative")));
    }
    Ok(poisson_pmf(k, y))
}

/// `λ_0..=λ_kmax` of a Poisson mixture plus the mass left above `kmax`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonMixtureVector {
    pub kmax: usize,
    pub lambda: Vec<f64>,
    pub tail_mass: f64,
}

impl PoissonMixtureVector {
    pub fn get(&self, k: u64) -> f64 {
        self.lambda.get(k as usize).copied().unwrap_or(0.0)
    }
}

/// `λ_k = ∫ g_k(y) dQ(y)` for `k = 0..=kmax`.
///
/// Atoms contribute exactly; each density segment is integrated by
/// adaptive Simpson over unit-width pieces, stopping where the Poisson
/// kernel is below the smallest double.
pub fn poisson_mixture(q: &MixingDistribution, kmax: usize) -> Result<PoissonMixtureVector> {
    poisson_mixture_with_depth(q, kmax, QUADRATURE_MAX_DEPTH)
}

/// [`poisson_mixture`] with an explicit Simpson recursion cap.
pub fn poisson_mixture_with_depth(
    q: &MixingDistribution,
    kmax: usize,
    max_depth: u32,
) -> Result<PoissonMixtureVector> {
    let mut lambda = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax as u64 {
        let mut terms: Vec<f64> = q
            .atoms()
            .iter()
            .map(|&(y, w)| w * poisson_pmf(k, y))
            .collect();
        if let Some(density) = q.density() {
            let cutoff = 2.0 * k as f64 + 1000.0;
            let pieces: Vec<(f64, f64, f64, f64, f64, f64)> = density
                .segments()
                .filter(|&(x0, _, _, _)| x0 < cutoff)
                .flat_map(|(x0, x1, v0, v1)| {
                    let end = x1.min(cutoff);
                    let count = ((end - x0).ceil() as usize).max(1);
                    let width = (end - x0) / count as f64;
                    (0..count).map(move |i| {
                        let a = x0 + i as f64 * width;
                        let b = if i + 1 == count { end } else { a + width };
                        (a, b, x0, x1, v0, v1)
                    })
                })
                .collect();
            let tol = QUADRATURE_TOLERANCE / pieces.len().max(1) as f64;
            for (a, b, x0, x1, v0, v1) in pieces {
                let slope = (v1 - v0) / (x1 - x0);
                let integrand = |y: f64| (v0 + slope * (y - x0)) * poisson_pmf(k, y);
                let value = adaptive_simpson(&integrand, a, b, tol, max_depth).ok_or(
                    Error::Quadrature {
                        k: k as usize,
                        a,
                        b,
                        tol,
                    },
                )?;
                terms.push(value);
            }
        }
        lambda.push(compensated_sum(terms));
    }
    let tail_mass = 1.0 - compensated_sum(lambda.iter().copied());
    Ok(PoissonMixtureVector {
        kmax,
        lambda,
        tail_mass,
    })
}

/// `E[ξ_k] = E[g_k^n(n P_n(X_n))]`.
pub fn expected_xi(dist: &DistributionSpec, n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    mixture_expectation(dist, n, k)
}

/// `E[ζ_k] = E[g_k^(n-1)((n-1) P_n(X_n))]`.
pub fn expected_zeta(dist: &DistributionSpec, n: u64, k: u64) -> Result<f64> {
    if n == 0 || k >= n {
        return Err(Error::Domain(format!(
            "need 0 <= k <= n - 1, got k = {k}, n = {n}"
        )));
    }
    mixture_expectation(dist, n - 1, k)
}

fn mixture_expectation(dist: &DistributionSpec, trials: u64, k: u64) -> Result<f64> {
    let scale = trials as f64;
    let mut terms = Vec::with_capacity(dist.atoms().len() + 1);
    for atom in dist.atoms() {
        let y = (scale * atom.prob).min(scale);
        terms.push(atom.mass() * g_binomial(trials, k, y)?);
    }
    if k == 0 {
        terms.push(dist.continuous_mass());
    }
    Ok(compensated_sum(terms))
}

/// Tail bound `min(1, 2 exp(-ε² √n / 8))` for the part of `ξ_k` carried by
/// symbols of probability below `n^(-3/4)`.
pub fn azuma_bound_xi(n: u64, epsilon: f64) -> f64 {
    if !(epsilon > 0.0) {
        return 1.0;
    }
    (2.0 * (-epsilon * epsilon * (n as f64).sqrt() / 8.0).exp()).min(1.0)
}

/// Tail bound `min(1, 2 exp(-ε² n / (8 (k+1)²)))` for `|ζ_k - E[ζ_k]|`.
pub fn azuma_bound_zeta(n: u64, k: u64, epsilon: f64) -> f64 {
    if !(epsilon > 0.0) {
        return 1.0;
    }
    let spread = (k + 1) as f64;
    (2.0 * (-epsilon * epsilon * n as f64 / (8.0 * spread * spread)).exp()).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationBound {
    pub value: f64,
    /// False when `k/n >= n^(-3/4)`, where the bound is not established.
    pub in_regime: bool,
}

/// `n^((k+3)/4) / k! · (1 - n^(-3/4))^(n-k)`, the bound on the expected
/// mass at frequency `k` carried by symbols of probability at least
/// `n^(-3/4)`.
pub fn truncation_bound(n: u64, k: u64) -> Result<TruncationBound> {
    if n <= k {
        return Err(Error::Domain(format!("need n > k, got n = {n}, k = {k}")));
    }
    let nf = n as f64;
    let threshold = nf.powf(-0.75);
    let log_value =
        (k as f64 + 3.0) / 4.0 * nf.ln() - ln_factorial(k) + (n - k) as f64 * (-threshold).ln_1p();
    Ok(TruncationBound {
        value: log_value.exp(),
        in_regime: (k as f64) / nf < threshold,
    })
}
