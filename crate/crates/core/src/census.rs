//! Isomorphism classes of systems: canonical forms, the class-count formula,
//! a brute-force orbit enumerator, and the largest possible `|D|`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::combinatorics::{
    factorial, multiplicities, numerical_partitions, permutation_rank, permutations, set_partitions, stirling2,
    to_rgs,
};
use crate::error::{Error, Result};
use crate::system::System;

/// Lexicographically least description of a system over all relabelings
/// of its microstates.
///
/// Relabelings are restricted to those that lay the cycles out as
/// consecutive runs, longest first; the word lists the macro labels along
/// that layout, renumbered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub cycle_lengths: Vec<usize>,
    pub word: Vec<usize>,
}

struct Search<'a> {
    cycles: &'a [Vec<usize>],
    order: Vec<usize>,
    keys: Vec<Vec<usize>>,
    map: Vec<usize>,
    fresh: usize,
    used: Vec<bool>,
    word: Vec<usize>,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, slot: usize) {
        if slot == self.order.len() {
            if self.best.as_ref().map_or(true, |b| self.word < *b) {
                self.best = Some(self.word.clone());
            }
            return;
        }
        if let Some(b) = &self.best {
            if self.word[..] > b[..self.word.len()] {
                return;
            }
        }
        let len = self.order[slot];
        let mut tried: Vec<usize> = Vec::new();
        for c in 0..self.cycles.len() {
            if self.used[c] || self.cycles[c].len() != len || tried.iter().any(|&t| self.keys[t] == self.keys[c]) {
                continue;
            }
            tried.push(c);
            self.used[c] = true;
            for rot in 0..len {
                let start = self.word.len();
                let saved_fresh = self.fresh;
                let mut assigned = Vec::new();
                // The best word can change inside sibling subtrees, so the
                // prefix is compared afresh for every rotation.
                let mut now_better = match &self.best {
                    None => true,
                    Some(b) => self.word[..] < b[..start],
                };
                let mut pruned = false;
                for t in 0..len {
                    let lab = self.cycles[c][(rot + t) % len];
                    if self.map[lab] == usize::MAX {
                        self.map[lab] = self.fresh;
                        self.fresh += 1;
                        assigned.push(lab);
                    }
                    let v = self.map[lab];
                    self.word.push(v);
                    if !now_better {
                        if let Some(best) = &self.best {
                            let b = best[start + t];
                            if v > b {
                                pruned = true;
                                break;
                            }
                            if v < b {
                                now_better = true;
                            }
                        }
                    }
                }
                if !pruned {
                    self.run(slot + 1);
                }
                self.word.truncate(start);
                for lab in assigned {
                    self.map[lab] = usize::MAX;
                }
                self.fresh = saved_fresh;
            }
            self.used[c] = false;
        }
    }
}

fn min_rotation(seq: &[usize]) -> Vec<usize> {
    (0..seq.len())
        .map(|r| seq[r..].iter().chain(&seq[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Canonical form of a system. The search is exact and is intended for
/// small systems; interchangeable cycles are only tried once.
pub fn canonical_form(s: &System) -> CanonicalForm {
    let mut cycles: Vec<Vec<usize>> =
        s.cycles().into_iter().map(|c| c.iter().map(|&x| s.label(x)).collect()).collect();
    cycles.sort_by(|a, b| b.len().cmp(&a.len()));
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); s.k()];
    for (c, seq) in cycles.iter().enumerate() {
        for &lab in seq {
            if !owners[lab].contains(&c) {
                owners[lab].push(c);
            }
        }
    }
    // Two unused cycles with the same key are exchanged by an automorphism
    // that fixes everything else, so only one of them needs exploring.
    let keys: Vec<Vec<usize>> = cycles
        .iter()
        .enumerate()
        .map(|(c, seq)| {
            let private = seq.iter().all(|&lab| owners[lab] == [c]);
            let mut key = if private {
                let rots = (0..seq.len()).map(|r| {
                    let rotated: Vec<usize> = seq[r..].iter().chain(&seq[..r]).copied().collect();
                    to_rgs(&rotated)
                });
                rots.min().unwrap_or_default()
            } else {
                min_rotation(seq)
            };
            key.push(usize::from(private));
            key
        })
        .collect();
    let order: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
    let mut search = Search {
        cycles: &cycles,
        order: order.clone(),
        keys,
        map: vec![usize::MAX; s.k()],
        fresh: 0,
        used: vec![false; cycles.len()],
        word: Vec::with_capacity(s.n()),
        best: None,
    };
    search.run(0);
    CanonicalForm {
        cycle_lengths: order,
        word: search.best.unwrap_or_default(),
    }
}

/// Whether some bijection of microstates conjugates the dynamics and carries
/// blocks onto blocks.
pub fn is_isomorphic(s1: &System, s2: &System) -> bool {
    if s1.n() != s2.n() || s1.k() != s2.k() {
        return false;
    }
    let cycle_type = |s: &System| {
        let mut v: Vec<usize> = s.cycles().iter().map(|c| c.len()).collect();
        v.sort_unstable();
        v
    };
    let size_type = |s: &System| {
        let mut v = s.sizes().to_vec();
        v.sort_unstable();
        v
    };
    if cycle_type(s1) != cycle_type(s2) || size_type(s1) != size_type(s2) {
        return false;
    }
    canonical_form(s1) == canonical_form(s2)
}

/// Systems with `n` labelled microstates and `k` labelled macrostates:
/// `n!·k!·S(n, k)`.
pub fn count_labeled(n: usize, k: usize) -> BigUint {
    factorial(n) * factorial(k) * stirling2(n, k)
}

/// Number of isomorphism classes of systems on `n` microstates.
///
/// Sums, over cycle types `l` with `k` cycles and set partitions `π` of the
/// `k` cycles, the product over blocks `c` of `Σ_{d | g_c} d^{|c|-1}`, where
/// `g_c` is the gcd of the cycle lengths in `c`.
pub fn count_classes(n: usize) -> BigUint {
    let mut total = BigUint::zero();
    for parts in numerical_partitions(n) {
        for rgs in set_partitions(parts.len()) {
            let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut term = BigUint::one();
            for b in 0..blocks {
                let members: Vec<usize> = (0..parts.len()).filter(|&j| rgs[j] == b).map(|j| parts[j]).collect();
                let g = members.iter().fold(0usize, |acc, &x| acc.gcd(&x));
                let exp = (members.len() - 1) as u32;
                let sigma: BigUint = (1..=g)
                    .filter(|d| g % d == 0)
                    .map(|d| BigUint::from(d as u64).pow(exp))
                    .sum();
                term *= sigma;
            }
            total += term;
        }
    }
    total
}

/// Orbits of `S_n` acting on `S_n × Par[n]` by conjugation and direct image.
#[derive(Debug, Clone)]
pub struct ClassEnumeration {
    pub count: usize,
    pub representatives: Vec<System>,
}

/// Largest `n` accepted by [`enumerate_classes_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 7;

pub fn enumerate_classes_bruteforce(n: usize) -> Result<ClassEnumeration> {
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "brute-force class enumeration (n)",
            needed: n as u128,
            budget: BRUTEFORCE_MAX_N as u128,
        });
    }
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    let perms = permutations(n);
    let parts = set_partitions(n);
    let part_index: HashMap<&Vec<usize>, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let width = parts.len();
    let mut seen = vec![false; perms.len() * width];
    let mut representatives = Vec::new();
    let mut image_alpha = vec![0; n];
    let mut image_labels = vec![0; n];
    for (ai, alpha) in perms.iter().enumerate() {
        for (pi, labels) in parts.iter().enumerate() {
            if seen[ai * width + pi] {
                continue;
            }
            representatives.push(System::new(alpha.clone(), labels.clone()).expect("valid pair"));
            for beta in &perms {
                for i in 0..n {
                    image_alpha[beta[i]] = beta[alpha[i]];
                    image_labels[beta[i]] = labels[i];
                }
                let rgs = to_rgs(&image_labels);
                seen[permutation_rank(&image_alpha) * width + part_index[&rgs]] = true;
            }
        }
    }
    Ok(ClassEnumeration {
        count: representatives.len(),
        representatives,
    })
}

/// `d_n = n - min_{l ⊢ n} max_k k·l_k`, the largest `|D|` over all systems
/// with `n` microstates.
pub fn d_max(n: usize) -> usize {
    let best = numerical_partitions(n)
        .iter()
        .map(|parts| {
            multiplicities(parts)
                .iter()
                .enumerate()
                .map(|(k, c)| (k + 1) * c)
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0);
    n - best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::permutations;

    fn z4(labels: Vec<usize>) -> System {
        System::new(vec![1, 2, 3, 0], labels).unwrap()
    }

    /// Direct search over all relabelings.
    fn iso_brute(a: &System, b: &System) -> bool {
        a.n() == b.n()
            && permutations(a.n()).iter().any(|beta| {
                let mut lab = vec![usize::MAX; a.k()];
                (0..a.n()).all(|i| b.alpha()[beta[i]] == beta[a.alpha()[i]])
                    && (0..a.n()).all(|i| {
                        let target = b.label(beta[i]);
                        if lab[a.label(i)] == usize::MAX {
                            lab[a.label(i)] = target;
                        }
                        lab[a.label(i)] == target
                    })
                    && {
                        let mut img = lab.clone();
                        img.sort_unstable();
                        img.dedup();
                        img.len() == a.k()
                    }
            })
    }

    #[test]
    fn isomorphism_examples() {
        let a = z4(vec![0, 1, 2, 1]);
        assert!(is_isomorphic(&a, &a));
        let shifted = z4(vec![1, 2, 1, 0]);
        assert!(is_isomorphic(&a, &shifted));
        let other = z4(vec![0, 1, 1, 2]);
        assert_eq!(is_isomorphic(&a, &other), iso_brute(&a, &other));
        assert!(!is_isomorphic(&a, &other));
    }

    #[test]
    fn canonical_form_agrees_with_brute_force() {
        let all: Vec<System> = {
            let mut v = Vec::new();
            crate::combinatorics::for_each_system(4, |a, l| v.push(System::new(a.to_vec(), l.to_vec()).unwrap()));
            v
        };
        for (x, a) in all.iter().enumerate().step_by(7) {
            for b in all.iter().skip(x % 5).step_by(11) {
                assert_eq!(is_isomorphic(a, b), iso_brute(a, b), "{:?} {:?}", a, b);
            }
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_labeled(1, 1), BigUint::from(1u32));
        assert_eq!(count_labeled(3, 2), BigUint::from(36u32));
        assert_eq!(count_labeled(3, 3), BigUint::from(36u32));
        assert_eq!(count_classes(1), BigUint::from(1u32));
        assert_eq!(count_classes(2), BigUint::from(4u32));
        assert_eq!(enumerate_classes_bruteforce(1).unwrap().count, 1);
        assert_eq!(enumerate_classes_bruteforce(2).unwrap().count, 4);
        assert!(enumerate_classes_bruteforce(8).unwrap_err().is_budget());
    }

    #[test]
    fn d_max_small() {
        assert_eq!((d_max(1), d_max(2), d_max(3), d_max(4)), (0, 0, 1, 2));
    }

    #[test]
    fn symmetric_systems_stay_fast() {
        let s = System::new((0..40).collect(), (0..40).collect()).unwrap();
        let t = System::new((0..40).collect(), (0..40).rev().collect()).unwrap();
        assert!(is_isomorphic(&s, &t));
        let u = System::new((0..40).collect(), vec![0; 40]).unwrap();
        assert!(!is_isomorphic(&s, &u));
    }
}
