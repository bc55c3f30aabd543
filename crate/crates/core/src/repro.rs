//! Graphs of reproducible transitions between macrostates.

use num_traits::One;

use crate::check::Checks;
use crate::entropy::{entropy_classes, induced_label_map};
use crate::error::{Error, Result};
use crate::markov::kernel;
use crate::system::System;
use crate::{int, Rational};

/// A rooted tree of the reproducible graph; every member reaches `root`,
/// which is a sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproTree {
    pub root: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproGraph {
    /// `succ[a] = Some(b)` when `alpha(a) ⊆ b`, `None` when `a` is a sink.
    pub succ: Vec<Option<usize>>,
    pub cycles: Vec<Vec<usize>>,
    pub trees: Vec<ReproTree>,
    pub checks: Checks,
}

impl ReproGraph {
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.succ.len()).filter(|&a| self.succ[a].is_none()).collect()
    }

    /// Labels with no incoming edge.
    pub fn leaves(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.succ.len()];
        for b in self.succ.iter().flatten() {
            has_in[*b] = true;
        }
        (0..self.succ.len()).filter(|&a| !has_in[a]).collect()
    }
}

/// `succ[a]` for the dynamics `dynamics`: the block containing the whole
/// image of `a`, if there is one.
fn successors(s: &System, dynamics: &[usize]) -> Vec<Option<usize>> {
    let mut target: Vec<Option<Option<usize>>> = vec![None; s.k()];
    for i in 0..s.n() {
        let a = s.label(i);
        let b = s.label(dynamics[i]);
        target[a] = match target[a] {
            None => Some(Some(b)),
            Some(Some(c)) if c == b => Some(Some(b)),
            _ => Some(None),
        };
    }
    target.into_iter().map(|t| t.flatten()).collect()
}

fn decompose(succ: &[Option<usize>]) -> (Vec<Vec<usize>>, Vec<ReproTree>) {
    let k = succ.len();
    // 0 unvisited, 1 on the current walk, 2 finished
    let mut state = vec![0u8; k];
    let mut on_cycle = vec![false; k];
    let mut cycles = Vec::new();
    for start in 0..k {
        let mut walk = Vec::new();
        let mut x = start;
        loop {
            if state[x] == 2 {
                break;
            }
            if state[x] == 1 {
                let pos = walk.iter().position(|&y| y == x).expect("on walk");
                let cycle = walk[pos..].to_vec();
                for &y in &cycle {
                    on_cycle[y] = true;
                }
                cycles.push(cycle);
                break;
            }
            state[x] = 1;
            walk.push(x);
            match succ[x] {
                Some(y) => x = y,
                None => break,
            }
        }
        for y in walk {
            state[y] = 2;
        }
    }
    let mut trees: Vec<ReproTree> = Vec::new();
    let mut tree_of_root = vec![usize::MAX; k];
    for a in 0..k {
        if on_cycle[a] {
            continue;
        }
        let mut x = a;
        while let Some(y) = succ[x] {
            if on_cycle[y] {
                break;
            }
            x = y;
        }
        if succ[x].is_some() {
            // Hangs off a cycle; reported through the checks.
            continue;
        }
        if tree_of_root[x] == usize::MAX {
            tree_of_root[x] = trees.len();
            trees.push(ReproTree { root: x, members: Vec::new() });
        }
        trees[tree_of_root[x]].members.push(a);
    }
    (cycles, trees)
}

pub fn repro_graph(s: &System) -> ReproGraph {
    let succ = successors(s, s.alpha());
    let (cycles, trees) = decompose(&succ);
    let sizes = s.sizes();
    let mut indegree = vec![0usize; s.k()];
    for b in succ.iter().flatten() {
        indegree[*b] += 1;
    }
    let mut checks = Checks::new();
    let covered: usize = cycles.iter().map(Vec::len).sum::<usize>() + trees.iter().map(|t| t.members.len()).sum::<usize>();
    checks.push("cycles and trees partition the labels", covered == s.k());
    checks.push(
        "edges do not decrease entropy",
        (0..s.k()).all(|a| succ[a].map_or(true, |b| sizes[a] <= sizes[b])),
    );
    checks.push(
        "merges strictly increase entropy",
        (0..s.k()).all(|a| succ[a].map_or(true, |b| indegree[b] < 2 || sizes[a] < sizes[b])),
    );
    checks.push(
        "entropy is constant on cycles",
        cycles.iter().all(|c| c.iter().all(|&a| sizes[a] == sizes[c[0]])),
    );
    let mut label_cycle = vec![usize::MAX; s.k()];
    for (ci, c) in cycles.iter().enumerate() {
        for &a in c {
            label_cycle[a] = ci;
        }
    }
    checks.push(
        "alpha-cycles through a graph cycle have length divisible by its length",
        s.cycles().iter().all(|cyc| {
            let ci = label_cycle[s.label(cyc[0])];
            ci == usize::MAX || cyc.len() % cycles[ci].len() == 0
        }),
    );
    let leaves_by_preimage: Vec<usize> = (0..s.k())
        .filter(|&v| (0..s.n()).filter(|&i| s.label(i) == v).all(|i| succ[s.label(s.alpha_inv()[i])].is_none()))
        .collect();
    let mut graph = ReproGraph {
        succ,
        cycles,
        trees,
        checks,
    };
    let leaves = graph.leaves();
    graph
        .checks
        .push("leaves are the labels whose preimages all lie in roots", leaves == leaves_by_preimage);
    graph
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseReproReport {
    /// Reproducible transitions of the inverse system.
    pub succ: Vec<Option<usize>>,
    pub cycles: Vec<Vec<usize>>,
    pub trees: Vec<ReproTree>,
    /// `⇝`-edges `a ⇝ b` with `S(a) < S(b)`; each ends at a root of `→`.
    pub root_edges: Vec<(usize, usize)>,
    pub checks: Checks,
}

fn canonical_cycle(c: &[usize]) -> Vec<usize> {
    let pos = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
    c[pos..].iter().chain(&c[..pos]).copied().collect()
}

pub fn inverse_repro_check(s: &System) -> InverseReproReport {
    let forward = repro_graph(s);
    let succ = successors(s, s.alpha_inv());
    let (cycles, trees) = decompose(&succ);
    let sizes = s.sizes();
    let mut checks = Checks::new();
    // a ⇝ b iff a ⊆ alpha(b), tested on sets directly.
    let by_inclusion = (0..s.k()).all(|a| {
        (0..s.k()).all(|b| {
            let included = (0..s.n()).filter(|&i| s.label(i) == a).all(|i| s.label(s.alpha_inv()[i]) == b);
            included == (succ[a] == Some(b))
        })
    });
    checks.push("a ~> b iff a is contained in alpha(b)", by_inclusion);
    let mut root_edges = Vec::new();
    let mut dichotomy = true;
    for a in 0..s.k() {
        if let Some(b) = succ[a] {
            if sizes[a] < sizes[b] {
                root_edges.push((a, b));
                dichotomy &= forward.succ[b].is_none();
            } else {
                dichotomy &= sizes[a] == sizes[b] && forward.succ[b] == Some(a);
            }
        }
    }
    checks.push("each ~> edge climbs to a root or reverses a -> edge", dichotomy);
    let mut reversed: Vec<Vec<usize>> = forward
        .cycles
        .iter()
        .map(|c| canonical_cycle(&c.iter().rev().copied().collect::<Vec<_>>()))
        .collect();
    let mut mine: Vec<Vec<usize>> = cycles.iter().map(|c| canonical_cycle(c)).collect();
    reversed.sort();
    mine.sort();
    checks.push("~> cycles are reversed -> cycles", reversed == mine);
    InverseReproReport {
        succ,
        cycles,
        trees,
        root_edges,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonReproReport {
    /// All `b` with `[alpha]_{ab} >= 1 - eps`, per `a`.
    pub edges: Vec<Vec<usize>>,
    pub sink_free: bool,
    /// `|a| < |b|` implies `|a| < (1 - eps)|b|` for all labels.
    pub entropy_gap: bool,
    pub decreasing_ratio: Rational,
    pub checks: Checks,
}

pub fn epsilon_repro(s: &System, eps: &Rational) -> Result<EpsilonReproReport> {
    let half = Rational::new(1.into(), 2.into());
    if *eps <= Rational::from_integer(0.into()) || *eps >= half {
        return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, 1/2)")));
    }
    let t = kernel(s);
    let threshold = Rational::one() - eps;
    let edges: Vec<Vec<usize>> = (0..s.k())
        .map(|a| (0..s.k()).filter(|&b| *t.entry(a, b) >= threshold).collect())
        .collect();
    let sink_free = edges.iter().all(|e| !e.is_empty());
    let sizes = s.sizes();
    let entropy_gap = (0..s.k()).all(|a| {
        (0..s.k()).all(|b| sizes[a] >= sizes[b] || int(sizes[a]) < int(sizes[b]) * &threshold)
    });
    let decreasing_ratio = entropy_classes(s).ratios[0].clone();
    let mut checks = Checks::new();
    let exact = repro_graph(s);
    checks.push(
        "reproducible edges are eps-reproducible",
        (0..s.k()).all(|a| exact.succ[a].map_or(true, |b| edges[a].contains(&b))),
    );
    if sink_free && entropy_gap {
        checks.push("|D|/|X| <= eps", decreasing_ratio <= *eps);
    }
    Ok(EpsilonReproReport {
        edges,
        sink_free,
        entropy_gap,
        decreasing_ratio,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P10Report {
    /// Pairs `(a, b)` with `alpha(a) = b` as sets.
    pub exact_images: Vec<(usize, usize)>,
    pub checks: Checks,
}

pub fn p10_check(s: &System) -> Result<P10Report> {
    let r = s.reversion().ok_or(Error::NoReversion)?;
    let rl = induced_label_map(s, r).ok_or(Error::NotEquivariant)?;
    let g = repro_graph(s);
    let sizes = s.sizes();
    let mut exact_images = Vec::new();
    let mut iff = true;
    let mut two_cycles = true;
    let invariant = (0..s.k()).all(|a| rl[a] == a);
    for a in 0..s.k() {
        for b in 0..s.k() {
            let both = g.succ[a] == Some(b) && g.succ[rl[b]] == Some(rl[a]);
            let image = g.succ[a] == Some(b) && sizes[a] == sizes[b];
            if image {
                exact_images.push((a, b));
                if invariant {
                    two_cycles &= g.succ[b] == Some(a);
                }
            }
            iff &= both == image;
        }
    }
    let mut checks = Checks::new();
    checks.push("a -> b and rb -> ra reproducible iff alpha(a) = b", iff);
    if invariant {
        checks.push("invariant r: alpha(a) = b gives a cycle a -> b -> a", two_cycles);
    }
    Ok(P10Report { exact_images, checks })
}
