//! The macro-level stochastic process `(q, [alpha]_•)`: cylinder
//! probabilities are counts of path blocks
//! `[[a_0, ..., a_n]] = {i in a_0 : alpha^t(i) in a_t}`.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::budget::{saturating_pow, Budget};
use crate::check::Checks;
use crate::dist::MacroDistribution;
use crate::entropy::{coarse_grain, induced_label_map, macro_measure};
use crate::error::{Error, Result};
use crate::markov::{kernel, kernel_power};
use crate::system::System;
use crate::{int, Rational};

/// `|[[a_0, ..., a_n]]|`.
pub fn path_count(s: &System, labels: &[usize]) -> usize {
    let Some(&first) = labels.first() else {
        return 0;
    };
    (0..s.n())
        .filter(|&i| s.label(i) == first)
        .filter(|&i| {
            let mut x = i;
            labels[1..].iter().all(|&a| {
                x = s.alpha()[x];
                s.label(x) == a
            })
        })
        .count()
}

/// Counts of every label word of length `len` traced by `dynamics` under
/// the labelling `label`. Words that do not occur are absent.
pub fn word_counts(
    dynamics: &[usize],
    label: impl Fn(usize) -> usize,
    len: usize,
) -> BTreeMap<Vec<usize>, usize> {
    let mut counts = BTreeMap::new();
    for i in 0..dynamics.len() {
        let mut word = Vec::with_capacity(len);
        let mut x = i;
        for t in 0..len {
            if t > 0 {
                x = dynamics[x];
            }
            word.push(label(x));
        }
        *counts.entry(word).or_insert(0) += 1;
    }
    counts
}

/// `Pr[X_0 = a_0, ..., X_n = a_n] = q_{a_0} |[[a_0..a_n]]| / |a_0|`.
pub fn cylinder_prob(s: &System, q: &MacroDistribution, labels: &[usize]) -> Rational {
    match labels.first() {
        None => Rational::zero(),
        Some(&a) => q.weight(a) * int(path_count(s, labels)) / int(s.sizes()[a]),
    }
}

/// Law of `X_n`, which is `[alpha^n] q`.
pub fn marginal(s: &System, q: &MacroDistribution, n: u64) -> MacroDistribution {
    kernel_power(s, n).apply(q)
}

/// `Pr[X_{n+1} = next | X_0 = a_0, ..., X_n = a_n]`.
pub fn conditional(s: &System, history: &[usize], next: usize) -> Result<Rational> {
    let base = path_count(s, history);
    if base == 0 {
        return Err(Error::ConditioningOnNull(history.to_vec()));
    }
    let mut extended = history.to_vec();
    extended.push(next);
    Ok(int(path_count(s, &extended)) / int(base))
}

/// A history whose full conditional differs from the one-step kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovWitness {
    pub history: Vec<usize>,
    pub next: usize,
    /// `Pr[X_h = next | history]`.
    pub full: Rational,
    /// `[alpha]_{last, next}`.
    pub one_step: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovianityReport {
    /// `alpha` maps blocks onto blocks.
    pub equivariant: bool,
    pub witness: Option<MarkovWitness>,
    /// Whether the searched depth is enough to decide the question.
    pub conclusive: bool,
    pub checks: Checks,
}

/// Searches histories of length `2..=depth` for a conditional that is not
/// the kernel entry. Within a length, histories are scanned in
/// lexicographic order and a witness with positive full conditional is
/// preferred.
pub fn markovianity_check(s: &System, depth: usize) -> Result<MarkovianityReport> {
    if depth < 2 {
        return Err(Error::InvalidArgument("markovianity depth must be at least 2".into()));
    }
    let equivariant = induced_label_map(s, s.alpha()).is_some();
    let t = kernel(s);
    let mut witness = None;
    'search: for h in 2..=depth {
        let prefixes = word_counts(s.alpha(), |x| s.label(x), h);
        let words = word_counts(s.alpha(), |x| s.label(x), h + 1);
        let mut fallback = None;
        let mut extended = Vec::with_capacity(h + 1);
        for (prefix, &count) in &prefixes {
            let last = prefix[h - 1];
            for b in 0..s.k() {
                extended.clear();
                extended.extend_from_slice(prefix);
                extended.push(b);
                let hits = words.get(&extended).copied().unwrap_or(0);
                let full = int(hits) / int(count);
                if full != *t.entry(last, b) {
                    let w = MarkovWitness {
                        history: prefix.clone(),
                        next: b,
                        full,
                        one_step: t.entry(last, b).clone(),
                    };
                    if hits > 0 {
                        witness = Some(w);
                        break 'search;
                    }
                    fallback.get_or_insert(w);
                }
            }
        }
        if fallback.is_some() {
            witness = fallback;
            break;
        }
    }
    let order = s.order();
    let conclusive = equivariant || witness.is_some() || order <= depth.into();
    let mut checks = Checks::new();
    checks.push("equivariant implies no witness", !equivariant || witness.is_none());
    if conclusive {
        checks.push("Markov iff equivariant", witness.is_none() == equivariant);
    }
    Ok(MarkovianityReport {
        equivariant,
        witness,
        conclusive,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationarityReport {
    pub stationary: bool,
    /// `(shift, word)` of the first discrepancy.
    pub witness: Option<(usize, Vec<usize>)>,
    pub checks: Checks,
}

/// Compares `Pr[X_k .. X_{k+L-1} = w]` with `Pr[X_0 .. X_{L-1} = w]` for all
/// shifts `k` and lengths `L` in `1..=depth`, and all words `w`.
pub fn stationarity_check(s: &System, q: &MacroDistribution, depth: usize, budget: &Budget) -> Result<StationarityReport> {
    budget.check_tuples("label tuples for stationarity", saturating_pow(s.k(), depth))?;
    let cq = coarse_grain(s, q);
    let law = |shift: usize, len: usize| {
        let start = s.alpha_power(shift as u64);
        let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (i, w) in cq.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let mut x = start[i];
            let mut word = Vec::with_capacity(len);
            for t in 0..len {
                if t > 0 {
                    x = s.alpha()[x];
                }
                word.push(s.label(x));
            }
            *out.entry(word).or_insert_with(Rational::zero) += w;
        }
        out
    };
    let mut witness = None;
    'outer: for len in 1..=depth {
        let reference = law(0, len);
        for shift in 1..=depth {
            let shifted = law(shift, len);
            if shifted != reference {
                let word = reference
                    .iter()
                    .find(|(w, v)| shifted.get(*w) != Some(v))
                    .map(|(w, _)| w.clone())
                    .or_else(|| shifted.keys().find(|w| !reference.contains_key(*w)).cloned())
                    .expect("maps differ");
                witness = Some((shift, word));
                break 'outer;
            }
        }
    }
    let stationary = witness.is_none();
    let mut checks = Checks::new();
    let (_, p) = macro_measure(s);
    if *q == p {
        checks.push("(p, [alpha]) is strictly stationary", stationary);
    }
    Ok(StationarityReport {
        stationary,
        witness,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseProcessReport {
    /// `|[[a_0..a_n]]| = |[[a_n..a_0]]|` for every word up to the depth.
    pub reversible: bool,
    pub checks: Checks,
}

/// Path-block identities under time reversal for words of length up to
/// `depth + 1`.
pub fn reverse_process_check(s: &System, depth: usize, budget: &Budget) -> Result<ReverseProcessReport> {
    let r = s.reversion().ok_or(Error::NoReversion)?;
    budget.check_tuples("label tuples for reversal", saturating_pow(s.k(), depth + 1))?;
    let reversed_keys = |m: BTreeMap<Vec<usize>, usize>| -> BTreeMap<Vec<usize>, usize> {
        m.into_iter()
            .map(|(mut w, c)| {
                w.reverse();
                (w, c)
            })
            .collect()
    };
    let mut trev2 = true;
    let mut inverse_matches = true;
    let mut reversible = true;
    for len in 1..=depth + 1 {
        let forward = word_counts(s.alpha(), |x| s.label(x), len);
        let through_r = word_counts(s.alpha(), |x| s.label(r[x]), len);
        let backward = word_counts(s.alpha_inv(), |x| s.label(x), len);
        // |[[a_0..a_n]]| = |[[r a_n .. r a_0]]| as sets of microstates.
        trev2 &= forward == reversed_keys(through_r);
        inverse_matches &= backward == reversed_keys(forward.clone());
        reversible &= forward.iter().all(|(w, c)| {
            let rev: Vec<usize> = w.iter().rev().copied().collect();
            forward.get(&rev) == Some(c)
        });
    }
    let mut checks = Checks::new();
    checks.push("|[[a_0..a_n]]| = |[[r a_n..r a_0]]|", trev2);
    checks.push("inverse dynamics traces the reversed words", inverse_matches);
    let invariant = (0..s.n()).all(|i| s.label(r[i]) == s.label(i));
    if invariant {
        checks.push("invariant reversion implies a reversible process", reversible);
    }
    Ok(ReverseProcessReport { reversible, checks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IidReport {
    /// Whether `(p, [alpha])` agrees with the i.i.d. law of `p` on all
    /// cylinders of length up to `depth + 1`.
    pub matches: bool,
    pub checks: Checks,
}

pub fn iid_check(s: &System, depth: usize) -> IidReport {
    let (_, p) = macro_measure(s);
    let n = s.n();
    let mut matches = true;
    for len in 1..=depth + 1 {
        let counts = word_counts(s.alpha(), |x| s.label(x), len);
        let total: usize = counts.values().sum();
        // Every word of positive iid probability must occur.
        matches &= counts.len() as u128 == saturating_pow(s.k(), len);
        matches &= total == n
            && counts.iter().all(|(w, &c)| {
                let iid: Rational = w.iter().map(|&a| p.weight(a).clone()).product();
                iid == int(c) / int(n)
            });
        if !matches {
            break;
        }
    }
    let mut checks = Checks::new();
    let order_small = s.order().to_usize().is_some_and(|d| d <= depth);
    if s.k() >= 2 && order_small {
        checks.push("no system with two or more labels reproduces the iid law", !matches);
    }
    IidReport { matches, checks }
}

/// `Pr[X_{i+nd} = b] = Pr[X_i = b]` for `i < d`, `d` the order of `alpha`.
pub fn periodicity_check(s: &System, q: &MacroDistribution, repeats: u64) -> Checks {
    let mut checks = Checks::new();
    let Some(d) = s.order().to_u64() else {
        return checks;
    };
    let holds = (0..d.min(64)).all(|i| (1..=repeats).all(|k| marginal(s, q, i + k * d) == marginal(s, q, i)));
    checks.push("marginals have period d", holds);
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;
    use num_traits::One;

    fn z4() -> System {
        System::with_reversion(vec![1, 2, 3, 0], vec![0, 1, 2, 1], vec![0, 3, 2, 1]).unwrap()
    }

    #[test]
    fn z4_cylinders() {
        let s = z4();
        let (_, p) = macro_measure(&s);
        assert_eq!(cylinder_prob(&s, &p, &[0, 1, 2]), ratio(1, 4));
        assert_eq!(cylinder_prob(&s, &p, &[1]), ratio(1, 2));
        assert_eq!(conditional(&s, &[0, 1], 2).unwrap(), Rational::one());
        assert_eq!(conditional(&s, &[1], 2).unwrap(), ratio(1, 2));
        assert_eq!(conditional(&s, &[0, 0], 1), Err(Error::ConditioningOnNull(vec![0, 0])));
        let q = MacroDistribution::point_mass(3, 0);
        assert_eq!(marginal(&s, &q, 2), MacroDistribution::point_mass(3, 2));
        assert_eq!(marginal(&s, &q, 4), q);
        assert!(periodicity_check(&s, &q, 2).all_hold());
    }

    #[test]
    fn z4_is_not_markov() {
        let rep = markovianity_check(&z4(), 2).unwrap();
        assert!(!rep.equivariant);
        let w = rep.witness.unwrap();
        assert_eq!((w.history.as_slice(), w.next), (&[0, 1][..], 2));
        assert_eq!((w.full, w.one_step), (Rational::one(), ratio(1, 2)));
        assert!(rep.checks.all_hold());
        let id = System::new(vec![0, 1, 2], vec![0, 1, 1]).unwrap();
        let rep = markovianity_check(&id, 2).unwrap();
        assert!(rep.equivariant && rep.witness.is_none() && rep.conclusive);
    }

    #[test]
    fn stationarity() {
        let s = z4();
        let b = Budget::default();
        let (_, p) = macro_measure(&s);
        let rep = stationarity_check(&s, &p, 3, &b).unwrap();
        assert!(rep.stationary && rep.checks.all_hold());
        let rep = stationarity_check(&s, &MacroDistribution::uniform(3), 2, &b).unwrap();
        assert!(!rep.stationary);
        let one = System::new(vec![1, 2, 0], vec![0, 0, 0]).unwrap();
        assert!(stationarity_check(&one, &MacroDistribution::uniform(1), 3, &b).unwrap().stationary);
        assert!(stationarity_check(&s, &p, 20, &b).unwrap_err().is_budget());
    }

    #[test]
    fn reversal() {
        let rep = reverse_process_check(&z4(), 3, &Budget::default()).unwrap();
        assert!(rep.reversible);
        assert!(rep.checks.all_hold(), "{}", rep.checks);
        assert_eq!(reverse_process_check(&z4().bare(), 3, &Budget::default()), Err(Error::NoReversion));
    }

    #[test]
    fn iid_not_realised() {
        let rep = iid_check(&z4(), 4);
        assert!(!rep.matches);
        assert!(rep.checks.all_hold());
        let single = System::new(vec![1, 0], vec![0, 0]).unwrap();
        assert!(iid_check(&single, 3).matches);
    }
}
