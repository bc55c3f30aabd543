//! Boltzmann and Shannon entropies, coarse-graining, entropy classes,
//! equilibrium dominance and reversion properties.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::check::Checks;
use crate::dist::MacroDistribution;
use crate::error::{Error, Result};
use crate::logvalue::LogValue;
use crate::system::System;
use crate::{int, ratio_u, Rational};

/// Block sizes and the counting distribution `p_a = |a|/|X|`.
pub fn macro_measure(s: &System) -> (Vec<usize>, MacroDistribution) {
    let n = s.n();
    let p = s.sizes().iter().map(|&c| ratio_u(c, n)).collect();
    (s.sizes().to_vec(), MacroDistribution::from_vec_unchecked(p))
}

/// `S(a) = ln |a|`.
pub fn boltzmann_entropy(s: &System, a: usize) -> LogValue {
    LogValue::ln_usize(s.sizes()[a])
}

/// `S(i) = S(m(i))`.
pub fn boltzmann_entropy_micro(s: &System, i: usize) -> LogValue {
    LogValue::ln_usize(s.block_size(i))
}

/// `-Σ w ln w` for any finite family of non-negative rationals.
pub fn shannon_entropy_of(weights: &[Rational]) -> LogValue {
    weights
        .iter()
        .filter(|w| w.is_positive())
        .map(|w| -LogValue::ln_rational(w).scale(w))
        .sum()
}

pub fn shannon_entropy(q: &MacroDistribution) -> LogValue {
    shannon_entropy_of(q.weights())
}

/// `S(q) = Σ q_a ln |a|`.
pub fn mean_boltzmann(s: &System, q: &MacroDistribution) -> LogValue {
    q.weights()
        .iter()
        .zip(s.sizes())
        .filter(|(w, _)| w.is_positive())
        .map(|(w, &c)| LogValue::ln_usize(c).scale(w))
        .sum()
}

/// `H(q) + S(q)`.
pub fn total_entropy(s: &System, q: &MacroDistribution) -> LogValue {
    &shannon_entropy(q) + &mean_boltzmann(s, q)
}

/// The coarse-grained micro distribution `(cq)_i = q_{m(i)} / |m(i)|`.
pub fn coarse_grain(s: &System, q: &MacroDistribution) -> Vec<Rational> {
    (0..s.n())
        .map(|i| q.weight(s.label(i)) / int(s.block_size(i)))
        .collect()
}

/// Pushes a micro distribution forward to macro labels.
pub fn macro_image(s: &System, x: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); s.k()];
    for (i, w) in x.iter().enumerate() {
        out[s.label(i)] += w;
    }
    out
}

/// Entropy of a partition of `n` points with the given block sizes, weighted
/// by the counting measure: `Σ (|a|/n) ln |a|`.
pub fn partition_entropy(sizes: &[usize], n: usize) -> LogValue {
    sizes
        .iter()
        .map(|&c| LogValue::ln_usize(c).scale(&ratio_u(c, n)))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyClassReport {
    pub decreasing: Vec<usize>,
    pub constant: Vec<usize>,
    pub increasing: Vec<usize>,
    /// `|D|/|X|`, `|C|/|X|`, `|I|/|X|`.
    pub ratios: [Rational; 3],
}

/// Splits `X` by the sign of `S(alpha i) - S(i)`.
pub fn entropy_classes(s: &System) -> EntropyClassReport {
    let mut d = Vec::new();
    let mut c = Vec::new();
    let mut inc = Vec::new();
    for i in 0..s.n() {
        match s.block_size(s.alpha()[i]).cmp(&s.block_size(i)) {
            Ordering::Less => d.push(i),
            Ordering::Equal => c.push(i),
            Ordering::Greater => inc.push(i),
        }
    }
    let n = s.n();
    let ratios = [ratio_u(d.len(), n), ratio_u(c.len(), n), ratio_u(inc.len(), n)];
    EntropyClassReport {
        decreasing: d,
        constant: c,
        increasing: inc,
        ratios,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    /// Labels of maximal size.
    pub labels: Vec<usize>,
    /// Microstates in those blocks.
    pub states: Vec<usize>,
    /// `|X^eq| / |X|`.
    pub ratio: Rational,
    /// Smallest `ε` for which the system has an ε-dominant equilibrium.
    pub epsilon: Rational,
    /// `ln(1-ε) + ln|X|`, a lower bound on the equilibrium entropy.
    pub entropy_lower: LogValue,
    /// `ln|X|`.
    pub entropy_upper: LogValue,
    pub checks: Checks,
}

pub fn equilibrium_report(s: &System) -> EquilibriumReport {
    let max = *s.sizes().iter().max().expect("non-empty system");
    let labels: Vec<usize> = (0..s.k()).filter(|&a| s.sizes()[a] == max).collect();
    let states: Vec<usize> = (0..s.n()).filter(|&i| s.block_size(i) == max).collect();
    let ratio = ratio_u(states.len(), s.n());
    let epsilon = Rational::one() - &ratio;
    let entropy_upper = LogValue::ln_usize(s.n());
    let entropy_lower = &LogValue::ln_rational(&ratio) + &entropy_upper;
    let classes = entropy_classes(s);
    let mut checks = Checks::new();
    checks.push("ratio identity |D|+|C|+|I| = |X|", classes.ratios.iter().sum::<Rational>().is_one());
    // Dominance bounds apply to the ε realised by this system.
    checks.push("|D|/|X| <= ε", classes.ratios[0] <= epsilon);
    checks.push("|I|/|X| <= ε", classes.ratios[2] <= epsilon);
    checks.push("|C|/|X| >= 1 - 2ε", classes.ratios[1] >= Rational::one() - &epsilon * int(2));
    let s_eq = LogValue::ln_usize(max);
    checks.push(
        "ln(1-ε)+ln|X| <= S(eq) <= ln|X|",
        entropy_lower.cmp_value(&s_eq) != Ordering::Greater && s_eq.cmp_value(&entropy_upper) != Ordering::Greater,
    );
    EquilibriumReport {
        labels,
        states,
        ratio,
        epsilon,
        entropy_lower,
        entropy_upper,
        checks,
    }
}

/// Order of `alpha`.
pub fn order_of_alpha(s: &System) -> BigUint {
    s.order()
}

/// `(|D_n|, |I_n|)`: microstates whose entropy strictly falls, respectively
/// strictly rises, at each of the next `n` steps.
pub fn monotone_runs(s: &System, n: usize) -> (usize, usize) {
    let mut down = 0;
    let mut up = 0;
    for i in 0..s.n() {
        let mut falls = true;
        let mut rises = true;
        let mut x = i;
        for _ in 0..n {
            let y = s.alpha()[x];
            let (a, b) = (s.block_size(x), s.block_size(y));
            falls &= b < a;
            rises &= b > a;
            if !falls && !rises {
                break;
            }
            x = y;
        }
        down += falls as usize;
        up += rises as usize;
    }
    (down, up)
}

/// Length of the longest run of strict entropy increases starting at `i`.
pub fn arrow_of_time(s: &System, i: usize) -> usize {
    let mut steps = 0;
    let mut x = i;
    loop {
        let y = s.alpha()[x];
        if s.block_size(y) > s.block_size(x) {
            steps += 1;
            x = y;
        } else {
            return steps;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversionReport {
    /// `m(r i) = m(i)` for all `i`.
    pub invariant: bool,
    /// `r` maps blocks onto blocks.
    pub equivariant: bool,
    /// `S(r i) = S(i)` for all `i`.
    pub entropy_preserving: bool,
    pub checks: Checks,
}

/// The label permutation induced by an equivariant reversion, if any.
pub fn induced_label_map(s: &System, r: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; s.k()];
    for i in 0..s.n() {
        let (a, b) = (s.label(i), s.label(r[i]));
        if map[a] == usize::MAX {
            map[a] = b;
        } else if map[a] != b {
            return None;
        }
    }
    Some(map)
}

pub fn reversion_report(s: &System) -> Result<ReversionReport> {
    let r = s.reversion().ok_or(Error::NoReversion)?;
    let invariant = (0..s.n()).all(|i| s.label(r[i]) == s.label(i));
    let label_map = induced_label_map(s, r);
    let equivariant = label_map.is_some();
    let entropy_preserving = (0..s.n()).all(|i| s.block_size(r[i]) == s.block_size(i));
    let mut checks = Checks::new();
    checks.push("invariant implies equivariant", !invariant || equivariant);
    checks.push("equivariant implies entropy preserving", !equivariant || entropy_preserving);
    // r conjugates alpha to its inverse by validation, so r is an isomorphism
    // onto the inverse system exactly when it also transports the partition.
    let inv = crate::build::inverse(s);
    let transports = (0..s.n()).all(|i| r[s.alpha()[i]] == inv.alpha()[r[i]]) && equivariant;
    checks.push("r is an isomorphism onto the inverse system iff equivariant", transports == equivariant);
    if equivariant {
        checks.push("equivariant implies system isomorphic to its inverse", crate::census::is_isomorphic(s, &inv));
    }
    Ok(ReversionReport {
        invariant,
        equivariant,
        entropy_preserving,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn z4() -> System {
        System::with_reversion(vec![1, 2, 3, 0], vec![0, 1, 2, 1], vec![0, 3, 2, 1]).unwrap()
    }

    #[test]
    fn measure_and_coarse_grain() {
        let s = z4();
        let (sizes, p) = macro_measure(&s);
        assert_eq!(sizes, vec![1, 2, 1]);
        assert_eq!(p.weights(), &[ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
        let u = MacroDistribution::uniform(3);
        assert_eq!(coarse_grain(&s, &u), vec![ratio(1, 3), ratio(1, 6), ratio(1, 3), ratio(1, 6)]);
        assert_eq!(coarse_grain(&s, &p), vec![ratio(1, 4); 4]);
    }

    #[test]
    fn entropies() {
        assert!(shannon_entropy(&MacroDistribution::point_mass(3, 1)).is_zero());
        assert_eq!(shannon_entropy(&MacroDistribution::uniform(3)), LogValue::ln_usize(3));
        let s = z4();
        assert_eq!(mean_boltzmann(&s, &MacroDistribution::uniform(3)), LogValue::ln_usize(2).scale(&ratio(1, 3)));
    }

    #[test]
    fn classes_and_equilibrium() {
        let s = z4();
        let c = entropy_classes(&s);
        assert_eq!(c.decreasing, vec![1, 3]);
        assert_eq!(c.increasing, vec![0, 2]);
        assert!(c.constant.is_empty());
        let eq = equilibrium_report(&s);
        assert_eq!(eq.states, vec![1, 3]);
        assert_eq!(eq.ratio, ratio(1, 2));
        assert!(eq.checks.all_hold());
        let id = System::new(vec![0, 1, 2], vec![0, 0, 1]).unwrap();
        let c = entropy_classes(&id);
        assert_eq!(c.constant.len(), 3);
        assert_eq!(monotone_runs(&id, 3), (0, 0));
        assert_eq!(arrow_of_time(&id, 1), 0);
    }

    #[test]
    fn runs_on_z4() {
        assert_eq!(monotone_runs(&z4(), 1), (2, 2));
        assert_eq!(monotone_runs(&z4(), 2), (0, 0));
    }

    #[test]
    fn reversion_properties() {
        let rep = reversion_report(&z4()).unwrap();
        assert!(rep.invariant && rep.equivariant && rep.entropy_preserving);
        assert!(rep.checks.all_hold());
        let id = System::with_reversion(vec![0, 1], vec![0, 1], vec![0, 1]).unwrap();
        let rep = reversion_report(&id).unwrap();
        assert!(rep.invariant && rep.equivariant && rep.entropy_preserving);
        assert_eq!(reversion_report(&id.bare()), Err(Error::NoReversion));
    }
}
