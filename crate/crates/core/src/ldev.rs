//! Finite-size large deviations for families of independent copies.
//!
//! Level masses are exact. The asymptotic rate `-(l-1)ε` only annotates the
//! finite-N estimates; nothing here asserts convergence.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::{saturating_pow, Budget};
use crate::build::{empirical_system, kl_divergence, kl_level, Epsilon};
use crate::check::Checks;
use crate::combinatorics::{compositions, factorial};
use crate::entropy::{equilibrium_report, macro_measure};
use crate::error::{Error, Result};
use crate::system::System;
use crate::{int, ratio_u, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SanovLevel {
    pub level: usize,
    /// `|(π m_N)^{-1}(l)| / |X|^N`, counted over microstate tuples.
    pub micro_mass: Rational,
    /// `p^{×N}(E_N ∈ P_l)`, summed over macro label words.
    pub word_mass: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SanovReport {
    pub copies: usize,
    pub levels: Vec<SanovLevel>,
    pub checks: Checks,
}

fn level_of(counts: &[usize], copies: usize, p: &[Rational], eps: &Epsilon, k: usize) -> usize {
    let q: Vec<Rational> = counts.iter().map(|&c| ratio_u(c, copies)).collect();
    kl_level(&kl_divergence(&q, p), eps, k)
}

/// Level lookup keyed by label counts; both enumerations share it.
struct LevelCache<'a> {
    copies: usize,
    p: &'a [Rational],
    eps: &'a Epsilon,
    k: usize,
    seen: HashMap<Vec<usize>, usize>,
}

impl LevelCache<'_> {
    fn get(&mut self, counts: &[usize]) -> usize {
        if let Some(&l) = self.seen.get(counts) {
            return l;
        }
        let l = level_of(counts, self.copies, self.p, self.eps, self.k);
        self.seen.insert(counts.to_vec(), l);
        l
    }
}

fn check_args(copies: usize, k: usize) -> Result<()> {
    if copies == 0 || k == 0 {
        return Err(Error::InvalidArgument("copies and levels must be at least 1".into()));
    }
    Ok(())
}

/// Odometer over `base^len` digit strings.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

pub fn exact_sanov_identity(base: &System, copies: usize, eps: &Epsilon, k: usize, budget: &Budget) -> Result<SanovReport> {
    check_args(copies, k)?;
    let (nx, na) = (base.n(), base.k());
    budget.check_microstates("microstate tuples", saturating_pow(nx, copies))?;
    budget.check_tuples("macro label words", saturating_pow(na, copies))?;
    let p = macro_measure(base).1;
    let p = p.weights();
    let mut cache = LevelCache {
        copies,
        p,
        eps,
        k,
        seen: HashMap::new(),
    };

    let mut micro = vec![0usize; k];
    let mut digits = vec![0usize; copies];
    let mut counts = vec![0; na];
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        for &x in &digits {
            counts[base.label(x)] += 1;
        }
        micro[cache.get(&counts) - 1] += 1;
        if !advance(&mut digits, nx) {
            break;
        }
    }

    let mut words = vec![Rational::zero(); k];
    let mut letters = vec![0usize; copies];
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut mass = Rational::one();
        for &a in &letters {
            counts[a] += 1;
            mass *= &p[a];
        }
        words[cache.get(&counts) - 1] += mass;
        if !advance(&mut letters, na) {
            break;
        }
    }

    let total = int(nx).pow(copies as i32);
    let levels: Vec<SanovLevel> = (0..k)
        .map(|l| SanovLevel {
            level: l + 1,
            micro_mass: int(micro[l]) / &total,
            word_mass: words[l].clone(),
        })
        .collect();
    let mut checks = Checks::new();
    checks.push(
        "microstate level mass equals product-measure level mass",
        levels.iter().all(|l| l.micro_mass == l.word_mass),
    );
    checks.push(
        "microstate level masses sum to 1",
        levels.iter().map(|l| &l.micro_mass).sum::<Rational>().is_one(),
    );
    checks.push(
        "product-measure level masses sum to 1",
        levels.iter().map(|l| &l.word_mass).sum::<Rational>().is_one(),
    );
    Ok(SanovReport { copies, levels, checks })
}

/// Level masses from label-count vectors weighted by multinomials.
pub fn level_masses(base: &System, copies: usize, eps: &Epsilon, k: usize, budget: &Budget) -> Result<Vec<Rational>> {
    check_args(copies, k)?;
    let na = base.k();
    let p = macro_measure(base).1;
    let p = p.weights();
    let count_vectors = num_integer::binomial(copies as u128 + na as u128 - 1, na as u128 - 1);
    budget.check_tuples("label count vectors", count_vectors)?;
    let n_fact = factorial(copies);
    let mut masses = vec![Rational::zero(); k];
    for counts in compositions(copies, na) {
        let denom = counts.iter().fold(num_bigint::BigUint::one(), |acc, &c| acc * factorial(c));
        let mut mass = Rational::from_integer(BigInt::from(&n_fact / denom));
        for (a, &c) in counts.iter().enumerate() {
            mass *= p[a].pow(c as i32);
        }
        masses[level_of(&counts, copies, p, eps, k) - 1] += mass;
    }
    Ok(masses)
}

/// Natural logarithm of a positive rational as a float, safe for huge parts.
pub fn ln_f64(r: &Rational) -> f64 {
    fn ln_big(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 1000 {
            return x.to_f64().unwrap_or(f64::INFINITY).ln();
        }
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
    }
    assert!(r.is_positive(), "logarithm of a non-positive rational");
    ln_big(r.numer()) - ln_big(r.denom())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRates {
    pub level: usize,
    /// `-(l-1)ε`.
    pub limit: f64,
    /// `(copies, (1/N) ln mass)`; `None` when the level is empty at that size.
    pub rates: Vec<(usize, Option<f64>)>,
    /// `|rate - limit|` wherever the rate exists.
    pub gaps: Vec<Option<f64>>,
    /// Present gaps never grow with N.
    pub gap_shrinking: bool,
}

pub fn rate_estimate(base: &System, copies: &[usize], eps: &Epsilon, k: usize, budget: &Budget) -> Result<Vec<LevelRates>> {
    let per_n: Vec<Vec<Rational>> = copies
        .iter()
        .map(|&n| level_masses(base, n, eps, k, budget))
        .collect::<Result<_>>()?;
    let eps_f = eps.to_f64();
    Ok((0..k)
        .map(|l| {
            let limit = -(l as f64) * eps_f;
            let rates: Vec<(usize, Option<f64>)> = copies
                .iter()
                .zip(&per_n)
                .map(|(&n, masses)| {
                    let m = &masses[l];
                    (n, (!m.is_zero()).then(|| ln_f64(m) / n as f64))
                })
                .collect();
            let gaps: Vec<Option<f64>> = rates.iter().map(|(_, r)| r.map(|r| (r - limit).abs())).collect();
            let present: Vec<f64> = gaps.iter().flatten().copied().collect();
            let gap_shrinking = present.windows(2).all(|w| w[1] <= w[0]);
            LevelRates {
                level: l + 1,
                limit,
                rates,
                gaps,
                gap_shrinking,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceRow {
    pub copies: usize,
    /// `|a_N^eq| / |X^N|`.
    pub equilibrium_ratio: Rational,
    /// `|D a_N| / |a_N|`: equilibrium microstates whose entropy drops in one step.
    pub decreasing_fraction: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceTrend {
    pub rows: Vec<DominanceRow>,
    pub ratio_nondecreasing: bool,
    pub fraction_nonincreasing: bool,
}

pub fn dominance_trend(base: &System, copies: &[usize], eps: &Epsilon, k: usize, budget: &Budget) -> Result<DominanceTrend> {
    let mut rows = Vec::with_capacity(copies.len());
    for &n in copies {
        let s = empirical_system(base, n, eps, k, budget)?;
        let eq = equilibrium_report(&s);
        let dropping = eq
            .states
            .iter()
            .filter(|&&i| s.block_size(s.alpha()[i]) < s.block_size(i))
            .count();
        rows.push(DominanceRow {
            copies: n,
            equilibrium_ratio: eq.ratio,
            decreasing_fraction: ratio_u(dropping, eq.states.len()),
        });
    }
    let ratio_nondecreasing = rows.windows(2).all(|w| w[1].equilibrium_ratio >= w[0].equilibrium_ratio);
    let fraction_nonincreasing = rows.windows(2).all(|w| w[1].decreasing_fraction <= w[0].decreasing_fraction);
    Ok(DominanceTrend {
        rows,
        ratio_nondecreasing,
        fraction_nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::z2d_base;
    use crate::ratio;

    fn z4() -> System {
        System::with_reversion(vec![1, 2, 3, 0], vec![0, 1, 2, 1], vec![0, 3, 2, 1]).unwrap()
    }

    fn half() -> Epsilon {
        Epsilon::Rational(ratio(1, 2))
    }

    #[test]
    fn single_copy_is_p() {
        let s = z4();
        let rep = exact_sanov_identity(&s, 1, &half(), 3, &Budget::default()).unwrap();
        assert!(rep.checks.all_hold());
        // D(δ_1||p) = ln 2 lies in level 2; the ends have D = ln 4, level 3.
        assert_eq!(rep.levels[1].micro_mass, ratio(1, 2));
        assert_eq!(rep.levels[2].micro_mass, ratio(1, 2));
        assert!(rep.levels[0].micro_mass.is_zero());
    }

    #[test]
    fn z4_three_copies() {
        let s = z4();
        let rep = exact_sanov_identity(&s, 3, &half(), 2, &Budget::default()).unwrap();
        assert!(rep.checks.all_hold(), "{}", rep.checks);
        // Brute oracle: count tuples whose empirical label law is within ε of p.
        let p = [ratio(1, 4), ratio(1, 2), ratio(1, 4)];
        let mut inner = 0;
        for t in 0..64usize {
            let mut c = [0usize; 3];
            for j in 0..3 {
                c[[0, 1, 2, 1][(t >> (2 * j)) & 3]] += 1;
            }
            let q: Vec<Rational> = c.iter().map(|&x| ratio_u(x, 3)).collect();
            if kl_divergence(&q, &p).sign_with_offset(&ratio(-1, 2)).is_lt() {
                inner += 1;
            }
        }
        assert_eq!(rep.levels[0].micro_mass, ratio_u(inner, 64));
        let masses = level_masses(&s, 3, &half(), 2, &Budget::default()).unwrap();
        assert_eq!(masses[0], rep.levels[0].word_mass);
    }

    #[test]
    fn uniform_base_has_zero_rate() {
        let s = System::new(vec![1, 0], vec![0, 0]).unwrap();
        let rates = rate_estimate(&s, &[1, 2, 3], &half(), 1, &Budget::default()).unwrap();
        assert_eq!(rates.len(), 1);
        assert!(rates[0].rates.iter().all(|(_, r)| *r == Some(0.0)));
    }

    #[test]
    fn budget_is_enforced() {
        let s = z4();
        let tight = Budget::uniform(10);
        assert!(matches!(exact_sanov_identity(&s, 3, &half(), 2, &tight), Err(e) if e.is_budget()));
    }

    #[test]
    fn dominance_on_z4() {
        let s = z4();
        let trend = dominance_trend(&s, &[1, 2, 3, 4], &Epsilon::Rational(ratio(1, 1)), 2, &Budget::default()).unwrap();
        // N=1: the two levels tie at size 2. N=2: only the tuples with both
        // labels at an end (0,0) or (2,2) reach D = ln 4 >= 1.
        assert_eq!(trend.rows[0].equilibrium_ratio, int(1));
        assert_eq!(trend.rows[1].equilibrium_ratio, ratio(7, 8));
        let id = System::new(vec![0, 1, 2], vec![0, 1, 1]).unwrap();
        let flat = dominance_trend(&id, &[1, 2, 3], &half(), 2, &Budget::default()).unwrap();
        assert!(flat.rows.iter().all(|r| r.decreasing_fraction.is_zero()));
        let z2 = z2d_base(1).unwrap();
        let rates = rate_estimate(&z2, &[2, 4, 6], &half(), 2, &Budget::default()).unwrap();
        assert_eq!(rates[1].limit, -0.5);
    }

    #[test]
    fn float_log_of_huge_rationals() {
        let big = Rational::from_integer(BigInt::from(3u32).pow(2000));
        assert!((ln_f64(&big) - 2000.0 * 3f64.ln()).abs() < 1e-6);
    }
}
