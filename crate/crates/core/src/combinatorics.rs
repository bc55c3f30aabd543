//! Enumeration helpers: permutations, integer partitions, set partitions.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        if !next_permutation(&mut cur) {
            return out;
        }
    }
}

/// Advances to the next permutation in lexicographic order.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic rank of a permutation (Lehmer code).
pub fn permutation_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// Partitions of `n` as non-increasing part lists, in reverse
/// lexicographic order: `[n]` first, `[1,1,..,1]` last.
pub fn numerical_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_partitions(n, n, &mut cur, &mut out);
    out
}

fn fill_partitions(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=max.min(rest)).rev() {
        cur.push(part);
        fill_partitions(rest - part, part, cur, out);
        cur.pop();
    }
}

/// Multiplicities `l_k` (index `k-1`) of a part list.
pub fn multiplicities(parts: &[usize]) -> Vec<usize> {
    let max = parts.iter().copied().max().unwrap_or(0);
    let mut l = vec![0; max];
    for &p in parts {
        l[p - 1] += 1;
    }
    l
}

/// Restricted-growth strings of length `k`: one per set partition of `0..k`.
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = vec![0usize; k];
    fill_rgs(1, 0, &mut cur, &mut out);
    out
}

fn fill_rgs(pos: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos == cur.len() {
        out.push(cur.clone());
        return;
    }
    for v in 0..=max + 1 {
        cur[pos] = v;
        fill_rgs(pos + 1, max.max(v), cur, out);
    }
}

/// Renumbers labels by first occurrence, giving the restricted-growth form.
pub fn to_rgs(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

/// Stirling numbers of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = &row[j] * BigUint::from(j as u64) + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, x| acc * x)
}

/// Calls `f(alpha, labels)` for every pair in `S_n × Par[n]`, with the
/// labels in restricted-growth form.
pub fn for_each_system<F: FnMut(&[usize], &[usize])>(n: usize, mut f: F) {
    let parts = set_partitions(n);
    for alpha in permutations(n) {
        for labels in &parts {
            f(&alpha, labels);
        }
    }
}

/// All compositions of `total` into `parts` non-negative summands.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; parts];
    if parts == 0 {
        if total == 0 {
            out.push(cur);
        }
        return out;
    }
    fill_compositions(0, total, &mut cur, &mut out);
    out
}

fn fill_compositions(pos: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rest {
        cur[pos] = v;
        fill_compositions(pos + 1, rest - v, cur, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(set_partitions(5).len(), 52);
        assert_eq!(numerical_partitions(7).len(), 15);
        assert_eq!(numerical_partitions(4), vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(stirling2(3, 2), BigUint::from(3u32));
        assert_eq!(stirling2(5, 3), BigUint::from(25u32));
        assert_eq!(stirling2(4, 0), BigUint::zero());
        assert_eq!(compositions(3, 2).len(), 4);
    }

    #[test]
    fn ranks_are_positions() {
        for (idx, p) in permutations(5).iter().enumerate() {
            assert_eq!(permutation_rank(p), idx);
        }
    }

    #[test]
    fn rgs_normal_form() {
        assert_eq!(to_rgs(&[3, 3, 1, 7, 1]), vec![0, 0, 1, 2, 1]);
        assert_eq!(multiplicities(&[3, 3, 1]), vec![1, 0, 2]);
    }
}
