//! Systems bound to a distinguished set `E`: reaching times, the identities
//! they satisfy, stability of `E`, and the reversible double cover.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::build::{double_cover, CoverLayout};
use crate::check::Checks;
use crate::entropy::{arrow_of_time, entropy_classes, equilibrium_report};
use crate::error::{Error, Result};
use crate::markov::kernel;
use crate::system::{RawSystem, System};
use crate::{int, ratio_u, Rational};

/// First-hit times of `E` under `alpha`, by breadth-first search backwards
/// from `E`. Fails with the first cycle that never meets `E`.
pub fn reaching_times(alpha: &[usize], alpha_inv: &[usize], in_e: &[bool]) -> Result<Vec<usize>> {
    let n = alpha.len();
    let mut times = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        if in_e[i] {
            times[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(x) = queue.pop_front() {
        let pred = alpha_inv[x];
        if times[pred] == usize::MAX {
            times[pred] = times[x] + 1;
            queue.push_back(pred);
        }
    }
    if let Some(start) = times.iter().position(|&t| t == usize::MAX) {
        let mut cycle = vec![start];
        let mut x = alpha[start];
        while x != start {
            cycle.push(x);
            x = alpha[x];
        }
        return Err(Error::NotEBound { cycle });
    }
    Ok(times)
}

/// An E-bound system macroized by reaching time: label `k` is `X_k = e⁻¹(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachingSystem {
    system: System,
    in_e: Vec<bool>,
    top: usize,
}

pub fn reaching_system(s: &System, e: &[usize]) -> Result<ReachingSystem> {
    let n = s.n();
    let mut in_e = vec![false; n];
    for &x in e {
        if x >= n {
            return Err(Error::InvalidArgument(format!("microstate {x} out of range")));
        }
        in_e[x] = true;
    }
    let times = reaching_times(s.alpha(), s.alpha_inv(), &in_e)?;
    let top = times.iter().copied().max().unwrap_or(0);
    let system = RawSystem {
        alpha: s.alpha().to_vec(),
        labels: times,
        reversion: None,
        values: Some((0..=top).map(int).collect()),
        names: None,
    }
    .validate()?;
    Ok(ReachingSystem { system, in_e, top })
}

impl ReachingSystem {
    /// The system `(X, [0, L], e, alpha)`.
    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn in_e(&self, i: usize) -> bool {
        self.in_e[i]
    }

    pub fn e_set(&self) -> Vec<usize> {
        (0..self.in_e.len()).filter(|&i| self.in_e[i]).collect()
    }

    /// Reaching time of `i`.
    pub fn time(&self, i: usize) -> usize {
        self.system.label(i)
    }

    pub fn times(&self) -> &[usize] {
        self.system.labels()
    }

    /// `L`.
    pub fn top(&self) -> usize {
        self.top
    }

    /// `|X_k|` for `k = 0..=L`.
    pub fn level_sizes(&self) -> &[usize] {
        self.system.sizes()
    }

    /// `|[[E, X_k]]|` for `k = 0..=L`.
    pub fn entry_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.top + 1];
        for i in self.e_set() {
            counts[self.time(self.system.alpha()[i])] += 1;
        }
        counts
    }

    /// Whether `e(alpha E) = [0, L]`.
    pub fn is_surjective(&self) -> bool {
        self.entry_counts().iter().all(|&c| c > 0)
    }

    /// Maximal paths `i_{k+1} -> i_k -> ... -> i_1 -> i_0` with both ends in
    /// `E` and a non-empty interior outside it.
    pub fn excursions(&self) -> Vec<Excursion> {
        let alpha = self.system.alpha();
        let mut out = Vec::new();
        for start in self.e_set() {
            let mut x = alpha[start];
            if self.in_e[x] {
                continue;
            }
            let mut interior = Vec::new();
            while !self.in_e[x] {
                interior.push(x);
                x = alpha[x];
            }
            out.push(Excursion { start, interior, end: x });
        }
        out
    }
}

/// A path leaving `E` at `start`, running through `interior` in time order,
/// and re-entering at `end`. The interior point at position `p` has reaching
/// time `interior.len() - p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Excursion {
    pub start: usize,
    pub interior: Vec<usize>,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub level_sizes: Vec<usize>,
    pub entry_counts: Vec<usize>,
    pub top: usize,
    pub surjective: bool,
    /// `(1/|X|) Σ k |X_k|`.
    pub mean_reaching_time: Rational,
    /// `(|E|/|X|) Σ C(k+1, 2) [alpha]_{0k}`.
    pub mean_from_kernel: Rational,
    /// `(1/|X|) Σ A(i)`, the mean arrow-of-time length.
    pub mean_arrow: Rational,
    pub checks: Checks,
}

pub fn structure_report(rs: &ReachingSystem) -> StructureReport {
    let s = rs.system();
    let n = s.n();
    let sizes = rs.level_sizes().to_vec();
    let counts = rs.entry_counts();
    let top = rs.top();
    let size = |k: usize| sizes.get(k).copied().unwrap_or(0);
    let e_size = sizes[0];
    let mut checks = Checks::new();

    checks.push(
        "|[[E,X_k]]| = |X_k| - |X_{k+1}|",
        (0..=top).all(|k| counts[k] + size(k + 1) == size(k)),
    );
    checks.push(
        "|X_k| = sum_{s>=k} |[[E,X_s]]|",
        (0..=top).all(|k| counts[k..].iter().sum::<usize>() == size(k)),
    );
    checks.push("level sizes are non-increasing", sizes.windows(2).all(|w| w[0] >= w[1]));
    checks.push("E is an equilibrium macrostate", sizes.iter().all(|&c| c <= e_size));
    checks.push(
        "alpha maps X_{k+1} into X_k",
        (0..n).all(|i| rs.time(i) == 0 || rs.time(s.alpha()[i]) + 1 == rs.time(i)),
    );

    let t = kernel(s);
    let shape = (1..=top).all(|i| (0..=top).all(|k| *t.entry(i, k) == if k + 1 == i { int(1) } else { Rational::zero() }))
        && (0..=top).all(|k| *t.entry(0, k) == ratio_u(size(k) - size(k + 1), e_size));
    checks.push("kernel shape: shift above 0, entry distribution at 0", shape);

    let mean_reaching_time = ratio_u((1..=top).map(|k| k * size(k)).sum(), n);
    let mean_from_kernel = ratio_u(e_size, n)
        * (1..=top)
            .map(|k| int(k * (k + 1) / 2) * t.entry(0, k))
            .sum::<Rational>();
    checks.push("<A> level sum equals kernel sum", mean_reaching_time == mean_from_kernel);
    let mean_arrow = ratio_u((0..n).map(|i| arrow_of_time(s, i)).sum(), n);

    let surjective = rs.is_surjective();
    if surjective {
        let classes = entropy_classes(s);
        let leaving: Vec<usize> = (0..n).filter(|&i| rs.in_e(i) && !rs.in_e(s.alpha()[i])).collect();
        let outside: Vec<usize> = (0..n).filter(|&i| !rs.in_e(i)).collect();
        let eq = equilibrium_report(s);
        checks.push("X^eq = E", eq.states == rs.e_set());
        checks.push("D is the set of E-states leaving E", classes.decreasing == leaving);
        checks.push("|D| = |X_1|", classes.decreasing.len() == size(1));
        checks.push("I = X \\ E", classes.increasing == outside);
        checks.push("|C| = |E| - |X_1|", classes.constant.len() + size(1) == e_size);
        checks.push("level sizes strictly decrease", sizes.windows(2).all(|w| w[0] > w[1]));
        checks.push("A = e", (0..n).all(|i| arrow_of_time(s, i) == rs.time(i)));
        checks.push("<A> direct equals level sum", mean_arrow == mean_reaching_time);
    }

    StructureReport {
        level_sizes: sizes,
        entry_counts: counts,
        top,
        surjective,
        mean_reaching_time,
        mean_from_kernel,
        mean_arrow,
        checks,
    }
}

/// Whether every state entering the set stays in it for the next `duration`
/// steps.
pub fn is_stable(alpha: &[usize], alpha_inv: &[usize], in_set: &[bool], duration: usize) -> bool {
    (0..alpha.len())
        .filter(|&i| in_set[i] && !in_set[alpha_inv[i]])
        .all(|i| {
            let mut x = i;
            (0..duration).all(|_| {
                x = alpha[x];
                in_set[x]
            })
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub duration: usize,
    pub e_stable: bool,
    pub equilibrium_stable: bool,
    pub checks: Checks,
}

pub fn s_stability_check(rs: &ReachingSystem, duration: usize) -> StabilityReport {
    let s = rs.system();
    let e_stable = is_stable(s.alpha(), s.alpha_inv(), &rs.in_e, duration);
    let max = rs.level_sizes()[0];
    let in_eq: Vec<bool> = (0..s.n()).map(|i| s.block_size(i) == max).collect();
    let equilibrium_stable = is_stable(s.alpha(), s.alpha_inv(), &in_eq, duration);
    let mut checks = Checks::new();
    checks.push("E stable implies X^eq stable", !e_stable || equilibrium_stable);
    StabilityReport {
        duration,
        e_stable,
        equilibrium_stable,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCoverReport {
    pub cover: System,
    pub cover_top: usize,
    pub cover_level_sizes: Vec<usize>,
    /// `(|D|/|X|, |C|/|X|, |I|/|X|)` of the base reaching system.
    pub base_ratios: [Rational; 3],
    pub cover_ratios: [Rational; 3],
    pub base_mean_arrow: Rational,
    pub cover_mean_arrow: Rational,
    pub excursions: Vec<Excursion>,
    pub checks: Checks,
}

pub fn double_cover_report(rs: &ReachingSystem) -> Result<DoubleCoverReport> {
    let base = rs.system();
    let n = base.n();
    let cover = double_cover(base, &rs.e_set())?;
    let layout = CoverLayout { n };
    let r = cover.reversion().expect("cover is reversible").to_vec();
    let cover_rs = reaching_system(&cover, &cover.labels().iter().enumerate().filter(|(_, &l)| l == 0).map(|(x, _)| x).collect::<Vec<_>>())?;
    let sizes = rs.level_sizes();
    let cover_sizes = cover.sizes().to_vec();
    let cover_top = cover_sizes.len() - 1;
    let mut checks = Checks::new();

    checks.push("r conjugates the cover dynamics to its inverse", (0..2 * n).all(|x| r[cover.alpha()[r[x]]] == cover.alpha_inv()[x]));
    checks.push("cover L equals L", cover_top == rs.top());
    checks.push("|cover X_k| = 2|X_k|", cover_sizes.len() == sizes.len() && cover_sizes.iter().zip(sizes).all(|(&a, &b)| a == 2 * b));
    checks.push("cover E is r-invariant", (0..2 * n).all(|x| (cover.label(x) == 0) == (cover.label(r[x]) == 0)));
    checks.push(
        "cover E is E x {1,-1}",
        (0..2 * n).all(|x| (cover.label(x) == 0) == rs.in_e(layout.split(x).0)),
    );
    let cover_in_e: Vec<bool> = (0..2 * n).map(|x| cover.label(x) == 0).collect();
    checks.push(
        "cover E is S-stable iff E is, for S in 0..=L+1",
        (0..=rs.top() + 1).all(|d| {
            is_stable(base.alpha(), base.alpha_inv(), &rs.in_e, d)
                == is_stable(cover.alpha(), cover.alpha_inv(), &cover_in_e, d)
        }),
    );
    let surjective = rs.is_surjective();
    checks.push("surjectivity transfers to the cover", surjective == cover_rs.is_surjective());

    // Midpoint criterion on every cover excursion, against base level sizes.
    let mut midpoint_sizes = true;
    let mut midpoint_centre = true;
    let excursions = cover_rs.excursions();
    for exc in &excursions {
        let k = exc.interior.len();
        for (p, &x) in exc.interior.iter().enumerate() {
            let u = k - p;
            let fixed = cover.block_size(r[x]) == cover.block_size(x);
            midpoint_sizes &= fixed == (sizes[u] == sizes[k - u + 1]);
            midpoint_centre &= fixed == (2 * u == k + 1);
        }
    }
    checks.push("S(r x) = S(x) iff |X_u| = |X_{k-u+1}| on excursions", midpoint_sizes);

    let base_classes = entropy_classes(base);
    let cover_classes = entropy_classes(&cover);
    let base_mean_arrow = ratio_u((0..n).map(|i| arrow_of_time(base, i)).sum(), n);
    let cover_mean_arrow = ratio_u((0..2 * n).map(|x| arrow_of_time(&cover, x)).sum(), 2 * n);
    if surjective {
        let counts = cover_rs.entry_counts();
        checks.push(
            "|[[cover E, cover X_k]]| = 2(|X_k| - |X_{k+1}|)",
            (0..=rs.top()).all(|k| counts[k] == 2 * (sizes[k] - sizes.get(k + 1).copied().unwrap_or(0))),
        );
        checks.push("S(r x) = S(x) iff x is an excursion midpoint", midpoint_centre);
        checks.push("cover D, C, I ratios equal base ratios", base_classes.ratios == cover_classes.ratios);
        checks.push("cover <A> equals base <A>", base_mean_arrow == cover_mean_arrow);
    }

    Ok(DoubleCoverReport {
        cover,
        cover_top,
        cover_level_sizes: cover_sizes,
        base_ratios: base_classes.ratios,
        cover_ratios: cover_classes.ratios,
        base_mean_arrow,
        cover_mean_arrow,
        excursions,
        checks,
    })
}
