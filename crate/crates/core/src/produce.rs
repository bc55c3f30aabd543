//! Entropy production. A rate `σ_n(i)` is kept as the exact size ratio
//! `ρ = |m(alpha^n i)| / |m(i)| = e^{n σ_n(i)}`, so the fluctuation identity
//! becomes an identity between rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::check::Checks;
use crate::dist::MacroDistribution;
use crate::entropy::{coarse_grain, equilibrium_report, mean_boltzmann};
use crate::error::{Error, Result};
use crate::logvalue::LogValue;
use crate::markov::{classes_by_reachability, kernel_power, kernel_with};
use crate::system::{compose, System};
use crate::{int, ratio_u, Rational};

/// `σ_n = ln(ratio) / n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rate {
    pub ratio: Rational,
    pub n: usize,
}

impl Rate {
    pub fn value(&self) -> LogValue {
        LogValue::ln_rational(&self.ratio).scale(&ratio_u(1, self.n))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ln({})/{}", self.ratio, self.n)
    }
}

fn ratio_at(s: &System, power: &[usize], i: usize) -> Rational {
    int(s.block_size(power[i])) / int(s.block_size(i))
}

pub fn sigma(s: &System, i: usize, n: usize) -> Rate {
    let power = s.alpha_power(n as u64);
    Rate {
        ratio: ratio_at(s, &power, i),
        n,
    }
}

/// Coarse-grained weight of each value of `σ_n`, keyed by its ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductionDensity {
    pub n: usize,
    pub weights: BTreeMap<Rational, Rational>,
}

impl ProductionDensity {
    pub fn weight(&self, ratio: &Rational) -> Rational {
        self.weights.get(ratio).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    /// `Σ_ρ w(ρ) ln(ρ) / n`.
    pub fn mean(&self) -> LogValue {
        let scale = ratio_u(1, self.n);
        self.weights
            .iter()
            .map(|(rho, w)| LogValue::ln_rational(rho).scale(&(w * &scale)))
            .sum()
    }
}

pub fn production_density(s: &System, q: &MacroDistribution, n: usize) -> ProductionDensity {
    let power = s.alpha_power(n as u64);
    let mut weights: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (i, w) in coarse_grain(s, q).into_iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        *weights.entry(ratio_at(s, &power, i)).or_insert_with(Rational::zero) += w;
    }
    ProductionDensity { n, weights }
}

/// `σ_n^q = <σ_n>_{cq}`.
pub fn mean_production(s: &System, q: &MacroDistribution, n: usize) -> LogValue {
    production_density(s, q, n).mean()
}

/// `Δ_n^q = S([alpha^n] q) - S([alpha^{n-1}] q)`.
pub fn delta(s: &System, q: &MacroDistribution, n: usize) -> LogValue {
    assert!(n >= 1, "delta is defined for n >= 1");
    let now = kernel_power(s, n as u64).apply(q);
    let before = kernel_power(s, n as u64 - 1).apply(q);
    &mean_boltzmann(s, &now) - &mean_boltzmann(s, &before)
}

/// The three expressions for `σ_n^q` and the one-step chain rule.
pub fn production_identities(s: &System, q: &MacroDistribution, n: usize) -> Checks {
    let sigma_q = mean_production(s, q, n);
    let scale = ratio_u(1, n);
    let later = mean_boltzmann(s, &kernel_power(s, n as u64).apply(q));
    let telescoped = (&later - &mean_boltzmann(s, q)).scale(&scale);
    let summed = (1..=n).map(|k| delta(s, q, k)).sum::<LogValue>().scale(&scale);
    let mut checks = Checks::new();
    checks.push("sigma_n^q = (S([alpha^n]q) - S(q))/n", sigma_q == telescoped);
    checks.push("sigma_n^q = (1/n) sum Delta_k^q", sigma_q == summed);
    let power = s.alpha_power(n as u64);
    let chain = (0..s.n()).all(|i| {
        let mut x = i;
        let mut product = Rational::one();
        for _ in 0..n {
            let y = s.alpha()[x];
            product *= int(s.block_size(y)) / int(s.block_size(x));
            x = y;
        }
        product == ratio_at(s, &power, i)
    });
    checks.push("sigma_n is the mean of one-step rates along the orbit", chain);
    checks
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluctuationReport {
    pub density: ProductionDensity,
    /// `σ_n^q` from the density.
    pub sigma: LogValue,
    /// `Σ_{ρ>1} (ln ρ / n)(1 - 1/ρ) w(ρ)`.
    pub sigma_positive_part: LogValue,
    pub checks: Checks,
}

/// The bijection `r alpha^n`.
fn reversed_power(s: &System, r: &[usize], n: usize) -> Vec<usize> {
    compose(r, &s.alpha_power(n as u64))
}

pub fn fluctuation_check(s: &System, q: &MacroDistribution, n: usize) -> Result<FluctuationReport> {
    let r = s
        .reversion()
        .ok_or_else(|| Error::PreconditionFailed("a reversion map is required".into()))?;
    if !(0..s.n()).all(|i| s.block_size(r[i]) == s.block_size(i)) {
        return Err(Error::PreconditionFailed("reversion must preserve entropy".into()));
    }
    let phi = reversed_power(s, r, n);
    let classes = classes_by_reachability(&kernel_with(s, &phi));
    if !classes.iter().all(|c| c.iter().all(|&a| q.weight(a) == q.weight(c[0]))) {
        return Err(Error::PreconditionFailed(
            "q must be constant on the communication classes of [r alpha^n]".into(),
        ));
    }
    let density = production_density(s, q, n);
    let sigma = density.mean();
    let scale = ratio_u(1, n);
    let sigma_positive_part: LogValue = density
        .weights
        .iter()
        .filter(|(rho, _)| **rho > Rational::one())
        .map(|(rho, w)| {
            let factor = (Rational::one() - rho.recip()) * w * &scale;
            LogValue::ln_rational(rho).scale(&factor)
        })
        .sum();

    let mut checks = Checks::new();
    let power = s.alpha_power(n as u64);
    checks.push(
        "sigma_n(r alpha^n i) = -sigma_n(i)",
        (0..s.n()).all(|i| ratio_at(s, &power, phi[i]) == ratio_at(s, &power, i).recip()),
    );
    checks.push(
        "w(rho) = rho w(1/rho)",
        density.weights.iter().all(|(rho, w)| *w == rho * density.weight(&rho.recip())),
    );
    checks.push("sigma_n^q equals its positive-part form", sigma == sigma_positive_part);
    checks.push("sigma_n^q >= 0", sigma.sign().is_ge());
    let cq = coarse_grain(s, q);
    let preserves_on_support = (0..s.n()).all(|i| cq[i].is_zero() || s.block_size(power[i]) == s.block_size(i));
    checks.push("sigma_n^q = 0 iff alpha^n preserves entropy on the support", sigma.is_zero() == preserves_on_support);
    if *q == MacroDistribution::uniform(s.k()) {
        let moves = (0..s.n()).any(|i| s.block_size(power[i]) != s.block_size(i));
        checks.push("sigma_n^u > 0 iff some S(alpha^n i) != S(i)", sigma.sign().is_gt() == moves);
    }
    Ok(FluctuationReport {
        density,
        sigma,
        sigma_positive_part,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubequilibriumReport {
    pub threshold: usize,
    pub q: MacroDistribution,
    pub density: ProductionDensity,
    pub sigma: LogValue,
    /// `X^{<= threshold}` is mapped into itself by `alpha^n`.
    pub invariant: bool,
    pub checks: Checks,
}

/// The profile for `q_a ∝ |a|` on blocks of size at most `threshold`.
pub(crate) fn threshold_profile(s: &System, threshold: usize, n: usize) -> Result<SubequilibriumReport> {
    let weights: Vec<Rational> = s
        .sizes()
        .iter()
        .map(|&c| if c <= threshold { int(c) } else { Rational::zero() })
        .collect();
    let q = MacroDistribution::normalized(weights)?;
    let density = production_density(s, &q, n);
    let sigma = density.mean();
    let power = s.alpha_power(n as u64);
    let invariant = (0..s.n()).all(|i| s.block_size(i) > threshold || s.block_size(power[i]) <= threshold);
    let mut checks = Checks::new();
    checks.push(
        "w(rho) >= w(1/rho) for rho >= 1",
        density
            .weights
            .iter()
            .filter(|(rho, _)| **rho >= Rational::one())
            .all(|(rho, w)| *w >= density.weight(&rho.recip())),
    );
    checks.push("sigma_n^q >= 0", sigma.sign().is_ge());
    checks.push("sigma_n^q = 0 iff X^{<=|c|} is alpha^n-invariant", sigma.is_zero() == invariant);
    Ok(SubequilibriumReport {
        threshold,
        q,
        density,
        sigma,
        invariant,
        checks,
    })
}

pub fn subequilibrium_profile(s: &System, c: usize, n: usize) -> Result<SubequilibriumReport> {
    let r = s
        .reversion()
        .ok_or_else(|| Error::PreconditionFailed("a reversion map is required".into()))?;
    if !(0..s.n()).all(|i| s.block_size(r[i]) == s.block_size(i)) {
        return Err(Error::PreconditionFailed("reversion must preserve entropy".into()));
    }
    if c >= s.k() {
        return Err(Error::InvalidArgument(format!("label {c} out of range")));
    }
    if equilibrium_report(s).labels.contains(&c) {
        return Err(Error::NotNonEquilibrium(c));
    }
    threshold_profile(s, s.sizes()[c], n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    pub n: usize,
    /// `alpha^n` preserves entropy everywhere.
    pub preserves_entropy: bool,
    /// `σ_n` for each point mass.
    pub point_mass_sigma: Vec<LogValue>,
    /// `Σ_b ([alpha^n]_{ab} - [alpha^{n-1}]_{ab}) S(b)` per label.
    pub half_space: Vec<LogValue>,
    pub checks: Checks,
}

pub fn positivity_criteria(s: &System, n: usize) -> PositivityReport {
    let k = s.k();
    let power = s.alpha_power(n as u64);
    let preserves_entropy = (0..s.n()).all(|i| s.block_size(power[i]) == s.block_size(i));
    let point_mass_sigma: Vec<LogValue> = (0..k)
        .map(|a| mean_production(s, &MacroDistribution::point_mass(k, a), n))
        .collect();
    let now = kernel_power(s, n as u64);
    let before = kernel_power(s, n as u64 - 1);
    let half_space: Vec<LogValue> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| LogValue::ln_usize(s.sizes()[b]).scale(&(now.entry(a, b) - before.entry(a, b))))
                .sum()
        })
        .collect();
    let mut checks = Checks::new();
    let all_nonneg = point_mass_sigma.iter().all(|x| x.sign().is_ge());
    checks.push("sigma_n^q >= 0 for all q iff alpha^n preserves entropy", all_nonneg == preserves_entropy);
    checks.push(
        "Delta_n at point masses equals the half-space products",
        (0..k).all(|a| delta(s, &MacroDistribution::point_mass(k, a), n) == half_space[a]),
    );
    PositivityReport {
        n,
        preserves_entropy,
        point_mass_sigma,
        half_space,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnTimeReport {
    pub d: usize,
    /// `Δ_k^q` for `k = 1..=d`.
    pub deltas: Vec<LogValue>,
    pub checks: Checks,
}

/// Over one full period `d` of `alpha`: `σ_d = 0`, and the increments
/// `Δ_k^q` are either all zero or include a negative one.
pub fn return_time_check(s: &System, q: &MacroDistribution, budget: &Budget) -> Result<ReturnTimeReport> {
    let order = s.order();
    let d = order.to_usize().unwrap_or(usize::MAX);
    budget.check_microstates("period steps times microstates", (d as u128).saturating_mul(s.n() as u128))?;
    let cq = coarse_grain(s, q);
    let mean_at = |power: &[usize]| -> LogValue {
        let mut by_size: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, w) in cq.iter().enumerate() {
            if !w.is_zero() {
                *by_size.entry(s.block_size(power[i])).or_insert_with(Rational::zero) += w;
            }
        }
        by_size.iter().map(|(&c, w)| LogValue::ln_usize(c).scale(w)).sum()
    };
    let mut power: Vec<usize> = (0..s.n()).collect();
    let mut previous = mean_at(&power);
    let mut deltas = Vec::with_capacity(d);
    for _ in 0..d {
        power = power.iter().map(|&x| s.alpha()[x]).collect();
        let current = mean_at(&power);
        deltas.push(&current - &previous);
        previous = current;
    }
    let mut checks = Checks::new();
    checks.push("sigma_d = 0 everywhere", (0..s.n()).all(|i| power[i] == i));
    checks.push("sigma_d^q = 0", deltas.iter().cloned().sum::<LogValue>().is_zero());
    let all_zero = deltas.iter().all(LogValue::is_zero);
    let some_negative = deltas.iter().any(|x| x.sign().is_lt());
    checks.push("increments all vanish or one is negative", all_zero || some_negative);
    Ok(ReturnTimeReport { d, deltas, checks })
}
