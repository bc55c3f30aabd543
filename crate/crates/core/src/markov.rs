//! The macro kernel `[alpha]` and the Markov chain it defines.
//!
//! Two kinds of powers appear here and must not be confused.
//! [`kernel_power`] is `[alpha^n]`, the kernel of the system run with
//! `alpha^n`; [`MacroKernel::pow`] is the matrix power `[alpha]^n`, the
//! n-step matrix of the Markov approximation. They differ whenever the macro
//! dynamics is not Markovian.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::check::Checks;
use crate::dist::MacroDistribution;
use crate::entropy::{coarse_grain, induced_label_map, macro_measure, shannon_entropy_of, total_entropy};
use crate::logvalue::LogValue;
use crate::system::System;
use crate::unionfind::UnionFind;
use crate::{int, Rational};

/// Row-stochastic matrix over macro labels; row `a` is the distribution of
/// the next label given the current label `a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MacroKernel {
    rows: Vec<Vec<Rational>>,
}

impl fmt::Debug for MacroKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

impl MacroKernel {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        MacroKernel { rows }
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k)
            .map(|a| (0..k).map(|b| if a == b { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        MacroKernel { rows }
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, a: usize, b: usize) -> &Rational {
        &self.rows[a][b]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn rows_sum_to_one(&self) -> bool {
        self.rows.iter().all(|r| r.iter().sum::<Rational>().is_one())
    }

    /// `(qT)_b = Σ_a q_a T_{ab}` on raw weights.
    pub fn apply_weights(&self, q: &[Rational]) -> Vec<Rational> {
        let k = self.k();
        let mut out = vec![Rational::zero(); k];
        for (a, w) in q.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for b in 0..k {
                if !self.rows[a][b].is_zero() {
                    out[b] += w * &self.rows[a][b];
                }
            }
        }
        out
    }

    pub fn apply(&self, q: &MacroDistribution) -> MacroDistribution {
        MacroDistribution::from_vec_unchecked(self.apply_weights(q.weights()))
    }

    /// One step of `self` followed by one step of `other`.
    pub fn then(&self, other: &MacroKernel) -> MacroKernel {
        MacroKernel {
            rows: self.rows.iter().map(|r| other.apply_weights(r)).collect(),
        }
    }

    /// Matrix power `T^n`.
    pub fn pow(&self, n: u64) -> MacroKernel {
        let mut result = MacroKernel::identity(self.k());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.then(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.then(&base);
            }
        }
        result
    }

    /// Labels reachable in one step from `a`.
    pub fn successors(&self, a: usize) -> Vec<usize> {
        (0..self.k()).filter(|&b| self.rows[a][b].is_positive()).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

fn kernel_of(s: &System, dynamics: &[usize]) -> MacroKernel {
    let k = s.k();
    let mut counts = vec![vec![0usize; k]; k];
    for i in 0..s.n() {
        counts[s.label(i)][s.label(dynamics[i])] += 1;
    }
    let rows = counts
        .into_iter()
        .enumerate()
        .map(|(a, row)| {
            let size = int(s.sizes()[a]);
            row.into_iter().map(|c| int(c) / &size).collect()
        })
        .collect();
    MacroKernel { rows }
}

/// `[alpha]_{ab} = |a ∩ alpha⁻¹(b)| / |a|`.
pub fn kernel(s: &System) -> MacroKernel {
    kernel_of(s, s.alpha())
}

/// `[alpha^n]`, built from the dynamics `alpha^n`.
pub fn kernel_power(s: &System, n: u64) -> MacroKernel {
    kernel_of(s, &s.alpha_power(n))
}

/// Kernel of the system run with an arbitrary permutation of `X`.
pub fn kernel_with(s: &System, dynamics: &[usize]) -> MacroKernel {
    kernel_of(s, dynamics)
}

/// Checks the factorisation `[alpha] = m_* alpha_* c` on point masses,
/// row sums, and stationarity of the counting measure.
pub fn kernel_checks(s: &System) -> Checks {
    let t = kernel(s);
    let mut checks = Checks::new();
    checks.push("rows sum to 1", t.rows_sum_to_one());
    let factorises = (0..s.k()).all(|a| {
        let cq = coarse_grain(s, &MacroDistribution::point_mass(s.k(), a));
        let mut pushed = vec![Rational::zero(); s.k()];
        for (i, w) in cq.iter().enumerate() {
            pushed[s.label(s.alpha()[i])] += w;
        }
        pushed == t.rows[a]
    });
    checks.push("[alpha] = m_* alpha_* c", factorises);
    let (_, p) = macro_measure(s);
    checks.push("[alpha] p = p", t.apply(&p) == p);
    checks
}

/// The lifted kernel `[c alpha_*]` on microstates: from `i` to each `j` in the
/// block of `alpha(i)` with probability `1/|m(alpha i)|`.
pub fn lifted_kernel(s: &System) -> Vec<Vec<Rational>> {
    let n = s.n();
    (0..n)
        .map(|i| {
            let target = s.alpha()[i];
            let b = s.label(target);
            let w = Rational::new(1.into(), (s.block_size(target) as u64).into());
            (0..n).map(|j| if s.label(j) == b { w.clone() } else { Rational::zero() }).collect()
        })
        .collect()
}

fn apply_micro(l: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    let n = x.len();
    let mut out = vec![Rational::zero(); n];
    for (i, w) in x.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for j in 0..n {
            if !l[i][j].is_zero() {
                out[j] += w * &l[i][j];
            }
        }
    }
    out
}

/// Stationarity of the uniform micro measure under the lifted kernel and
/// its conjugacy with `[alpha]` on coarse-grained distributions.
pub fn lifted_checks(s: &System) -> Checks {
    let l = lifted_kernel(s);
    let t = kernel(s);
    let n = s.n();
    let mut checks = Checks::new();
    let uniform = vec![Rational::new(1.into(), (n as u64).into()); n];
    checks.push("uniform measure is stationary for [c alpha_*]", apply_micro(&l, &uniform) == uniform);
    let conj = (0..s.k()).all(|a| {
        let q = MacroDistribution::point_mass(s.k(), a);
        let moved = apply_micro(&l, &coarse_grain(s, &q));
        let image = crate::entropy::macro_image(s, &moved);
        image == t.rows[a] && moved == coarse_grain(s, &t.apply(&q))
    });
    checks.push("m_* [c alpha_*] = [alpha] m_* on cProb(X)", conj);
    checks
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStructure {
    /// Communication classes, each sorted, ordered by least label.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub periods: Vec<usize>,
    /// Cyclic subclasses of each class, in the order the chain visits them.
    pub subclasses: Vec<Vec<Vec<usize>>>,
    /// Labels `a` with `alpha(a) = a`.
    pub absorbing: Vec<usize>,
    pub checks: Checks,
}

fn reachable(t: &MacroKernel, a: usize) -> Vec<bool> {
    let mut seen = vec![false; t.k()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for y in t.successors(x) {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Communication classes by reachability in the support graph of `[alpha]`.
pub fn classes_by_reachability(t: &MacroKernel) -> Vec<Vec<usize>> {
    let k = t.k();
    let reach: Vec<Vec<bool>> = (0..k).map(|a| reachable(t, a)).collect();
    let mut assigned = vec![false; k];
    let mut classes = Vec::new();
    for a in 0..k {
        if assigned[a] {
            continue;
        }
        let class: Vec<usize> = (a..k).filter(|&b| reach[a][b] && reach[b][a]).collect();
        for &b in &class {
            assigned[b] = true;
        }
        classes.push(class);
    }
    classes
}

/// Communication classes as the join of the cycle partition of `alpha`
/// with the macro partition.
pub fn classes_by_join(s: &System) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(s.n());
    for i in 0..s.n() {
        uf.union(i, s.alpha()[i]);
    }
    let mut first = vec![usize::MAX; s.k()];
    for i in 0..s.n() {
        let a = s.label(i);
        if first[a] == usize::MAX {
            first[a] = i;
        } else {
            uf.union(first[a], i);
        }
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); s.n()];
    for a in 0..s.k() {
        let root = uf.find(first[a]);
        by_root[root].push(a);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    classes.sort();
    classes
}

/// Period of a class: gcd of cycle lengths in the support graph, from BFS
/// levels. Also returns the cyclic subclasses, ordered along the edges.
fn period_of(t: &MacroKernel, class: &[usize]) -> (usize, Vec<Vec<usize>>) {
    let mut level = vec![usize::MAX; t.k()];
    let root = class[0];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut g = 0usize;
    while let Some(x) = queue.pop_front() {
        for y in t.successors(x) {
            if level[y] == usize::MAX {
                level[y] = level[x] + 1;
                queue.push_back(y);
            } else {
                g = g.gcd(&(level[x] + 1).abs_diff(level[y]));
            }
        }
    }
    let d = g.max(1);
    let mut subclasses = vec![Vec::new(); d];
    for &a in class {
        subclasses[level[a] % d].push(a);
    }
    (d, subclasses)
}

pub fn chain_structure(s: &System) -> ChainStructure {
    let t = kernel(s);
    let classes = classes_by_reachability(&t);
    let joined = classes_by_join(s);
    let mut class_of = vec![0; s.k()];
    for (c, class) in classes.iter().enumerate() {
        for &a in class {
            class_of[a] = c;
        }
    }
    let (periods, subclasses): (Vec<usize>, Vec<Vec<Vec<usize>>>) =
        classes.iter().map(|c| period_of(&t, c)).unzip();
    let absorbing: Vec<usize> = (0..s.k()).filter(|&a| t.entry(a, a).is_one()).collect();

    let mut checks = Checks::new();
    checks.push("reachability classes equal Cyc v pi", classes == joined);
    checks.push(
        "no transient labels",
        (0..s.k()).all(|a| t.successors(a).iter().all(|&b| class_of[b] == class_of[a])),
    );
    checks.push(
        "classes are unions of alpha-cycles",
        (0..s.n()).all(|i| class_of[s.label(i)] == class_of[s.label(s.alpha()[i])]),
    );
    let order = s.order();
    checks.push(
        "periods divide the order of alpha",
        periods.iter().all(|&d| (&order % d).is_zero()),
    );
    checks.push(
        "absorbing labels are unions of alpha-cycles",
        absorbing.iter().all(|&a| (0..s.n()).filter(|&i| s.label(i) == a).all(|i| s.label(s.alpha()[i]) == a)),
    );
    ChainStructure {
        classes,
        class_of,
        periods,
        subclasses,
        absorbing,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReport {
    pub structure: ChainStructure,
    /// `cyclic[t]` is `lim_n [alpha]^{nP + t} q` for `t < P`, where `P` is
    /// the lcm of the class periods. A single entry means the chain started
    /// at `q` converges.
    pub cyclic: Vec<Vec<Rational>>,
    /// First step from which the float iterates stayed within `1e-12` of the
    /// exact cyclic limits for a full period, if that happened within the
    /// probe budget.
    pub converged_at: Option<usize>,
}

/// Steps tried by the float convergence probe.
pub const PROBE_MAX_STEPS: usize = 200_000;
const PROBE_TOLERANCE: f64 = 1e-12;

pub fn limit_distribution(s: &System, q: &MacroDistribution) -> LimitReport {
    let structure = chain_structure(s);
    let k = s.k();
    let big_period = structure.periods.iter().fold(1usize, |acc, &d| acc.lcm(&d));
    let mut cyclic = vec![vec![Rational::zero(); k]; big_period];
    for (c, subs) in structure.subclasses.iter().enumerate() {
        let d = structure.periods[c];
        let mass: Vec<Rational> = subs.iter().map(|sub| sub.iter().map(|&a| q.weight(a)).sum()).collect();
        let micro: Vec<usize> = subs.iter().map(|sub| sub.iter().map(|&a| s.sizes()[a]).sum()).collect();
        for (t, limit) in cyclic.iter_mut().enumerate() {
            for (j, sub) in subs.iter().enumerate() {
                let source = &mass[(j + d - t % d) % d];
                for &a in sub {
                    limit[a] = source * int(s.sizes()[a]) / int(micro[j]);
                }
            }
        }
    }

    let t = kernel(s).to_f64();
    let targets: Vec<Vec<f64>> = cyclic
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect();
    let mut x: Vec<f64> = q.weights().iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect();
    let mut streak = 0;
    let mut converged_at = None;
    for step in 0..PROBE_MAX_STEPS {
        let target = &targets[step % big_period];
        let close = x.iter().zip(target).all(|(a, b)| (a - b).abs() < PROBE_TOLERANCE);
        if close {
            streak += 1;
            if streak == big_period {
                converged_at = Some(step + 1 - big_period);
                break;
            }
        } else {
            streak = 0;
        }
        let mut next = vec![0.0; k];
        for a in 0..k {
            if x[a] != 0.0 {
                for b in 0..k {
                    next[b] += x[a] * t[a][b];
                }
            }
        }
        x = next;
    }
    LimitReport {
        structure,
        cyclic,
        converged_at,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseKernelReport {
    pub kernel: MacroKernel,
    /// Detailed balance `|[[a,b]]| = |[[b,a]]|` for all label pairs.
    pub reversible: bool,
    pub checks: Checks,
}

/// The kernel of the time-reversed chain, which is the kernel of the
/// inverse system.
pub fn reverse_kernel(s: &System) -> ReverseKernelReport {
    let t = kernel(s);
    let rev = kernel_with(s, s.alpha_inv());
    let k = s.k();
    let sizes = s.sizes();
    let mut checks = Checks::new();
    checks.push(
        "reverse kernel = (p_b/p_a) [alpha]_{ba}",
        (0..k).all(|a| (0..k).all(|b| *rev.entry(a, b) == int(sizes[b]) / int(sizes[a]) * t.entry(b, a))),
    );
    checks.push("reverse kernel is the kernel of the inverse system", rev == kernel(&crate::build::inverse(s)));
    let mut count = vec![vec![0usize; k]; k];
    for i in 0..s.n() {
        count[s.label(i)][s.label(s.alpha()[i])] += 1;
    }
    let reversible = (0..k).all(|a| (0..k).all(|b| count[a][b] == count[b][a]));
    checks.push("detailed balance iff reverse kernel equals kernel", reversible == (rev == t));
    if let Some(r) = s.reversion() {
        if let Some(rl) = induced_label_map(s, r) {
            checks.push(
                "[alpha]_{ab} = (|b|/|a|) [alpha]_{rb,ra}",
                (0..k).all(|a| (0..k).all(|b| *t.entry(a, b) == int(sizes[b]) / int(sizes[a]) * t.entry(rl[b], rl[a]))),
            );
            if (0..k).all(|a| rl[a] == a) {
                checks.push("invariant reversion implies reversible chain", reversible);
            }
        }
    }
    ReverseKernelReport {
        kernel: rev,
        reversible,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityTrace {
    /// `H + S` of `[alpha]^t q` for `t = 0..=steps`.
    pub chain: Vec<LogValue>,
    /// `H + S` of `[alpha^t] q`, the distribution of the actual process.
    pub dynamics: Vec<LogValue>,
    pub checks: Checks,
}

pub fn entropy_monotonicity(s: &System, q: &MacroDistribution, steps: usize) -> MonotonicityTrace {
    let t = kernel(s);
    let mut checks = Checks::new();
    let mut chain = vec![total_entropy(s, q)];
    let mut current = q.clone();
    let mut nondecreasing = true;
    let mut equality_exact = true;
    let mut lifted = true;
    for _ in 0..steps {
        let next = t.apply(&current);
        let value = total_entropy(s, &next);
        let diff = &value - chain.last().expect("non-empty");
        nondecreasing &= diff.sign().is_ge();
        let cq = coarse_grain(s, &current);
        let mut pushed = vec![Rational::zero(); s.n()];
        for (i, w) in cq.iter().enumerate() {
            pushed[s.alpha()[i]] += w;
        }
        let c_next = coarse_grain(s, &next);
        equality_exact &= diff.is_zero() == (pushed == c_next);
        lifted &= shannon_entropy_of(&c_next).cmp_value(&shannon_entropy_of(&cq)).is_ge();
        chain.push(value);
        current = next;
    }
    checks.push("H + S is non-decreasing along [alpha]", nondecreasing);
    checks.push("zero increment iff alpha_*(cq) = c[alpha]q", equality_exact);
    checks.push("H(cq) <= H(c alpha_* cq)", lifted);
    let dynamics = (0..=steps as u64)
        .map(|n| total_entropy(s, &kernel_power(s, n).apply(q)))
        .collect();
    MonotonicityTrace { chain, dynamics, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn z4() -> System {
        System::with_reversion(vec![1, 2, 3, 0], vec![0, 1, 2, 1], vec![0, 3, 2, 1]).unwrap()
    }

    #[test]
    fn z4_kernel() {
        let t = kernel(&z4());
        let z = Rational::zero;
        let one = Rational::one;
        assert_eq!(t.rows()[0], vec![z(), one(), z()]);
        assert_eq!(t.rows()[1], vec![ratio(1, 2), z(), ratio(1, 2)]);
        assert_eq!(t.rows()[2], vec![z(), one(), z()]);
        assert!(kernel_checks(&z4()).all_hold());
        assert!(lifted_checks(&z4()).all_hold());
        let l = lifted_kernel(&z4());
        assert_eq!(l[0], vec![z(), ratio(1, 2), z(), ratio(1, 2)]);
    }

    #[test]
    fn identity_kernel() {
        let s = System::new(vec![0, 1, 2], vec![0, 1, 1]).unwrap();
        assert_eq!(kernel(&s), MacroKernel::identity(2));
        let cs = chain_structure(&s);
        assert_eq!(cs.absorbing, vec![0, 1]);
        assert_eq!(cs.classes, vec![vec![0], vec![1]]);
        assert!(cs.checks.all_hold());
        assert_eq!(reverse_kernel(&s).kernel, MacroKernel::identity(2));
    }

    #[test]
    fn dynamics_power_differs_from_matrix_power() {
        let s = z4();
        assert_eq!(kernel_power(&s, 4), MacroKernel::identity(3));
        assert_ne!(kernel(&s).pow(4), MacroKernel::identity(3));
        assert_eq!(kernel(&s).pow(3), kernel(&s).then(&kernel(&s)).then(&kernel(&s)));
    }

    #[test]
    fn three_cycle_limit() {
        let s = System::new(vec![1, 2, 0], vec![0, 0, 1]).unwrap();
        let cs = chain_structure(&s);
        assert_eq!(cs.periods, vec![1]);
        let rep = limit_distribution(&s, &MacroDistribution::point_mass(2, 1));
        assert_eq!(rep.cyclic, vec![vec![ratio(2, 3), ratio(1, 3)]]);
        assert!(rep.converged_at.is_some());
    }

    #[test]
    fn two_cycle_alternates() {
        let s = System::new(vec![1, 0], vec![0, 1]).unwrap();
        let rep = limit_distribution(&s, &MacroDistribution::point_mass(2, 0));
        assert_eq!(rep.structure.periods, vec![2]);
        let z = Rational::zero;
        assert_eq!(rep.cyclic, vec![vec![Rational::one(), z()], vec![z(), Rational::one()]]);
        assert_eq!(rep.converged_at, Some(0));
    }

    #[test]
    fn reversal_on_z4() {
        let rep = reverse_kernel(&z4());
        assert!(rep.checks.all_hold(), "{}", rep.checks);
        assert!(rep.reversible);
    }

    #[test]
    fn monotone_on_equilibrium_measure() {
        let s = z4();
        let (_, p) = macro_measure(&s);
        let tr = entropy_monotonicity(&s, &p, 3);
        assert!(tr.checks.all_hold());
        assert!(tr.chain.windows(2).all(|w| w[0] == w[1]));
        let u = MacroDistribution::uniform(3);
        let tr = entropy_monotonicity(&s, &u, 4);
        assert!(tr.checks.all_hold(), "{}", tr.checks);
    }
}
