//! Seeded random systems for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::MacroDistribution;
use crate::system::{compose, System};
use crate::{int, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random labels on `0..n` using at most `k` values; compaction happens on validation.
pub fn random_labels<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..k.max(1))).collect()
}

/// A system with `1..=n_max` microstates and a uniformly drawn labelling.
pub fn random_system<R: Rng>(rng: &mut R, n_max: usize) -> System {
    let n = rng.gen_range(1..=n_max.max(1));
    let k = rng.gen_range(1..=n);
    let alpha = random_permutation(rng, n);
    let labels = random_labels(rng, n, k);
    System::new(alpha, labels).expect("sampled system is valid")
}

/// A distribution with small integer weights, zeros allowed.
pub fn random_distribution<R: Rng>(rng: &mut R, k: usize) -> MacroDistribution {
    loop {
        let w: Vec<Rational> = (0..k)
            .map(|_| if rng.gen_bool(0.25) { int(0) } else { int(rng.gen_range(1..10)) })
            .collect();
        if let Ok(q) = MacroDistribution::normalized(w) {
            return q;
        }
    }
}

pub fn random_involution<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order = random_permutation(rng, n);
    let mut r: Vec<usize> = (0..n).collect();
    while order.len() >= 2 {
        let a = order.pop().unwrap();
        if rng.gen_bool(0.5) {
            let b = order.pop().unwrap();
            r[a] = b;
            r[b] = a;
        }
    }
    r
}

/// How the labels of a sampled reversible system interact with `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelSymmetry {
    /// Every block is mapped onto itself.
    Invariant,
    /// Blocks are permuted by `r`, possibly swapping pairs.
    Equivariant,
}

/// `alpha = r ∘ s` for involutions `r, s`, so `r` reverses `alpha`.
/// Both label modes make the reversion entropy preserving.
pub fn random_reversible<R: Rng>(rng: &mut R, n_max: usize, mode: LabelSymmetry) -> System {
    let n = rng.gen_range(1..=n_max.max(1));
    let r = random_involution(rng, n);
    let s = random_involution(rng, n);
    let alpha = compose(&r, &s);
    let slots = rng.gen_range(1..=n);
    let self_mirror: Vec<bool> = (0..slots)
        .map(|j| j == 0 || mode == LabelSymmetry::Invariant || rng.gen_bool(0.5))
        .collect();
    let mirrored: Vec<usize> = (0..slots).filter(|&j| self_mirror[j]).collect();
    let mut labels = vec![0; n];
    for i in 0..n {
        let j = r[i];
        if j < i {
            continue;
        }
        if j == i {
            labels[i] = *mirrored.choose(rng).unwrap();
        } else {
            let slot = rng.gen_range(0..slots);
            labels[i] = slot;
            labels[j] = if self_mirror[slot] { slot } else { slot + slots };
        }
    }
    System::with_reversion(alpha, labels, r).expect("sampled reversible system is valid")
}

/// Labels `fine` and a coarsening `coarse` of them on `0..n`.
pub fn random_refinement_pair<R: Rng>(rng: &mut R, n: usize) -> (Vec<usize>, Vec<usize>) {
    let k = rng.gen_range(1..=n.max(1));
    let fine = random_labels(rng, n, k);
    let merge: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
    let coarse = fine.iter().map(|&a| merge[a]).collect();
    (fine, coarse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::induced_label_map;

    #[test]
    fn reproducible() {
        let a = random_system(&mut rng(7), 12);
        let b = random_system(&mut rng(7), 12);
        assert_eq!(a, b);
    }

    #[test]
    fn reversible_samples_are_symmetric() {
        let mut g = rng(11);
        for mode in [LabelSymmetry::Invariant, LabelSymmetry::Equivariant] {
            for _ in 0..50 {
                let s = random_reversible(&mut g, 10, mode);
                let r = s.reversion().unwrap();
                let map = induced_label_map(&s, r).expect("labels are r-equivariant");
                if mode == LabelSymmetry::Invariant {
                    assert!(map.iter().enumerate().all(|(a, &b)| a == b));
                }
                assert!((0..s.n()).all(|i| s.block_size(r[i]) == s.block_size(i)));
            }
        }
    }

    #[test]
    fn refinement_is_coarser() {
        let mut g = rng(3);
        for _ in 0..20 {
            let (fine, coarse) = random_refinement_pair(&mut g, 8);
            for i in 0..8 {
                for j in 0..8 {
                    if fine[i] == fine[j] {
                        assert_eq!(coarse[i], coarse[j]);
                    }
                }
            }
        }
    }
}
