use micromacro::build::{
    combine, derive, double_cover, empirical_system, group_action_base, group_action_system, max_decreasing_system,
    remark_system, z2d_base, z2d_system, ActionMode, CombineKind, DeriveKind, Epsilon, NumericalPartition,
};
use micromacro::census::{canonical_form, count_classes, count_labeled, d_max, enumerate_classes_bruteforce, is_isomorphic};
use micromacro::ebound::{double_cover_report, reaching_system, s_stability_check, structure_report};
use micromacro::entropy::{
    entropy_classes, equilibrium_report, macro_measure, mean_boltzmann, monotone_runs, reversion_report,
    shannon_entropy,
};
use micromacro::ldev::{dominance_trend, exact_sanov_identity, rate_estimate};
use micromacro::markov::{kernel, kernel_checks, kernel_power, lifted_checks, limit_distribution, reverse_kernel};
use micromacro::process::{iid_check, markovianity_check, reverse_process_check, stationarity_check};
use micromacro::produce::{
    fluctuation_check, positivity_criteria, production_density, production_identities, return_time_check,
    subequilibrium_profile,
};
use micromacro::repro::{epsilon_repro, inverse_repro_check, p10_check, repro_graph};
use micromacro::{Checks, Error, LogValue, MacroDistribution, System};
use serde_json::{json, Value};

use crate::wire::{checks as checks_json, log_value, log_values, parse_rational, rational, rationals};
use crate::{ActionArg, BuildCmd, CombineArg, Command, Context, DeriveCmd, LdevMode, Output, ProduceAction};

type Res = Result<Output, Error>;

fn report(body: Value, checks: &Checks) -> Output {
    let mut body = body;
    body["checks"] = checks_json(checks);
    Output::Report {
        body,
        passed: checks.all_hold(),
    }
}

fn parse_usizes(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidArgument(format!("not a non-negative integer: {t:?}"))))
        .collect()
}

fn parse_eps(text: &str) -> Result<Epsilon, Error> {
    match text.trim().strip_prefix("ln:") {
        Some(r) => Ok(Epsilon::Log(LogValue::ln_rational(&positive(r)?))),
        None => Ok(Epsilon::Rational(parse_rational(text)?)),
    }
}

fn positive(text: &str) -> Result<micromacro::Rational, Error> {
    let r = parse_rational(text)?;
    if r <= micromacro::int(0) {
        return Err(Error::InvalidArgument(format!("{text} must be positive")));
    }
    Ok(r)
}

fn distribution(q: Option<&str>, s: &System, default: MacroDistribution) -> Result<MacroDistribution, Error> {
    match q {
        None => Ok(default),
        Some(text) => {
            let weights = text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
            if weights.len() != s.k() {
                return Err(Error::LengthMismatch {
                    what: "macro weights",
                    expected: s.k(),
                    got: weights.len(),
                });
            }
            MacroDistribution::normalized(weights)
        }
    }
}

fn rows(t: &micromacro::markov::MacroKernel) -> Value {
    Value::Array(t.rows().iter().map(|r| rationals(r)).collect())
}

pub(crate) fn dispatch(cmd: Command, ctx: &mut Context) -> Res {
    match cmd {
        Command::Inspect(input) => inspect(&ctx.read(&input)?),
        Command::Build { generator } => build(generator, ctx),
        Command::Combine { kind, first, second } => {
            let a = ctx.read_path(Some(&first))?;
            let b = ctx.read_path(Some(&second))?;
            let kind = match kind {
                CombineArg::DisjointUnion => CombineKind::DisjointUnion,
                CombineArg::Product => CombineKind::Product,
                CombineArg::Reunion => CombineKind::Reunion,
                CombineArg::ExtensiveJoint => CombineKind::ExtensiveJoint,
            };
            ctx.budget
                .check_microstates("combined system", (a.n() as u128).saturating_mul(b.n() as u128))?;
            Ok(Output::System(combine(kind, &a, &b)?))
        }
        Command::Derive { kind } => {
            let (kind, input) = match kind {
                DeriveCmd::Inverse(input) => (DeriveKind::Inverse, input),
                DeriveCmd::Coarsen { map, input } => (DeriveKind::Coarsen(parse_usizes(&map)?), input),
                DeriveCmd::Restrict { keep, input } => (DeriveKind::Restrict(parse_usizes(&keep)?), input),
                DeriveCmd::Iterate { length, input } => (DeriveKind::Iterate(length), input),
                DeriveCmd::Zones(input) => (DeriveKind::Zones, input),
            };
            let s = ctx.read(&input)?;
            Ok(Output::System(derive(&kind, &s)?))
        }
        Command::Repro { input, eps } => repro(&ctx.read(&input)?, &parse_rational(&eps)?),
        Command::Kernel { input, power } => kernel_cmd(&ctx.read(&input)?, power),
        Command::Chain { input, q } => {
            let s = ctx.read(&input)?;
            let q = distribution(q.as_deref(), &s, MacroDistribution::uniform(s.k()))?;
            chain(&s, &q)
        }
        Command::Process { input, depth, q } => {
            let s = ctx.read(&input)?;
            let q = distribution(q.as_deref(), &s, macro_measure(&s).1)?;
            process(&s, &q, depth, ctx)
        }
        Command::Produce { action, input, n, q, c } => {
            let s = ctx.read(&input)?;
            let q = distribution(q.as_deref(), &s, MacroDistribution::uniform(s.k()))?;
            produce(action, &s, n, &q, c, ctx)
        }
        Command::Ebound { input, e } => ebound(&ctx.read(&input)?, &parse_usizes(&e)?),
        Command::Census {
            n,
            formula,
            brute,
            labeled,
            dmax,
            files,
        } => census(n, formula, brute, labeled, dmax, &files, ctx),
        Command::Ldev {
            mode,
            input,
            copies,
            eps,
            levels,
        } => {
            let base = ctx.read(&input)?;
            ldev(mode, &base, &parse_usizes(&copies)?, &parse_eps(&eps)?, levels, ctx)
        }
        Command::Selftest => selftest(),
    }
}

fn inspect(s: &System) -> Res {
    let classes = entropy_classes(s);
    let eq = equilibrium_report(s);
    let p = macro_measure(s).1;
    let mut checks = Checks::new();
    checks.push(
        "|D|/|X| + |C|/|X| + |I|/|X| = 1",
        &classes.ratios[0] + &classes.ratios[1] + &classes.ratios[2] == micromacro::int(1),
    );
    checks.push(
        "H(p) + S(p) = ln|X|",
        &shannon_entropy(&p) + &mean_boltzmann(s, &p) == LogValue::ln_usize(s.n()),
    );
    checks.extend_prefixed("equilibrium", eq.checks.clone());
    checks.extend_prefixed("kernel", kernel_checks(s));
    let mut cycle_lengths: Vec<usize> = s.cycles().iter().map(Vec::len).collect();
    cycle_lengths.sort_unstable_by(|a, b| b.cmp(a));
    let mut body = json!({
        "n": s.n(),
        "k": s.k(),
        "sizes": s.sizes(),
        "names": (0..s.k()).map(|a| s.label_name(a)).collect::<Vec<_>>(),
        "cycle_lengths": cycle_lengths,
        "order": s.order().to_string(),
        "classes": {
            "decreasing": classes.decreasing.len(),
            "constant": classes.constant.len(),
            "increasing": classes.increasing.len(),
            "ratios": rationals(&classes.ratios),
        },
        "equilibrium": {
            "labels": eq.labels,
            "ratio": rational(&eq.ratio),
            "epsilon": rational(&eq.epsilon),
            "entropy_lower": log_value(&eq.entropy_lower),
            "entropy_upper": log_value(&eq.entropy_upper),
        },
        "shannon_entropy_p": log_value(&shannon_entropy(&p)),
        "boltzmann_entropy_p": log_value(&mean_boltzmann(s, &p)),
    });
    if s.reversion().is_some() {
        let rr = reversion_report(s)?;
        body["reversion"] = json!({
            "invariant": rr.invariant,
            "equivariant": rr.equivariant,
            "entropy_preserving": rr.entropy_preserving,
        });
        checks.extend_prefixed("reversion", rr.checks);
    }
    Ok(report(body, &checks))
}

fn build(cmd: BuildCmd, ctx: &mut Context) -> Res {
    let budget = ctx.budget.clone();
    let s = match cmd {
        BuildCmd::MaxDecreasing { parts } => {
            let pairs = parts
                .split(',')
                .map(|p| {
                    let (size, count) = p
                        .split_once(':')
                        .ok_or_else(|| Error::InvalidArgument(format!("expected size:count, got {p:?}")))?;
                    let one = |t: &str| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::InvalidArgument(format!("not a count: {t:?}")))
                    };
                    Ok((one(size)?, one(count)?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let l = NumericalPartition::from_parts(&pairs)?;
            budget.check_microstates("generated system", l.n() as u128)?;
            max_decreasing_system(&l)
        }
        BuildCmd::Remark { n } => {
            budget.check_microstates("generated system", (n as u128) * (n as u128 + 1))?;
            remark_system(n)?
        }
        BuildCmd::Empirical {
            base,
            copies,
            eps,
            levels,
        } => {
            let base = ctx.read_path(Some(&base))?;
            empirical_system(&base, copies, &parse_eps(&eps)?, levels, &budget)?
        }
        BuildCmd::GroupAction {
            action,
            mode,
            copies,
            eps,
            levels,
        } => {
            let action: Vec<Vec<usize>> = serde_json::from_str(&action)
                .map_err(|e| Error::InvalidArgument(format!("action must be a JSON list of permutations: {e}")))?;
            let mode = match mode {
                ActionArg::Full => ActionMode::Full,
                ActionArg::First => ActionMode::FirstCoordinate,
            };
            match copies {
                None => group_action_base(&action, mode)?,
                Some(c) => group_action_system(&action, c, mode, &parse_eps(&eps)?, levels, &budget)?,
            }
        }
        BuildCmd::Z2d { d, copies, eps, levels } => match copies {
            None => z2d_base(d)?,
            Some(c) => z2d_system(d, c, &parse_eps(&eps)?, levels, &budget)?,
        },
        BuildCmd::DoubleCover { input, e } => {
            let s = ctx.read(&input)?;
            double_cover(&s, &parse_usizes(&e)?)?
        }
    };
    Ok(Output::System(s))
}

fn repro(s: &System, eps: &micromacro::Rational) -> Res {
    let g = repro_graph(s);
    let inv = inverse_repro_check(s);
    let relaxed = epsilon_repro(s, eps)?;
    let mut checks = Checks::new();
    checks.extend_prefixed("graph", g.checks.clone());
    checks.extend_prefixed("inverse", inv.checks.clone());
    checks.extend_prefixed("eps", relaxed.checks.clone());
    let trees = |ts: &[micromacro::repro::ReproTree]| -> Value {
        ts.iter().map(|t| json!({ "root": t.root, "members": t.members })).collect()
    };
    let mut body = json!({
        "successor": g.succ,
        "cycles": g.cycles,
        "trees": trees(&g.trees),
        "sinks": g.sinks(),
        "leaves": g.leaves(),
        "inverse": {
            "successor": inv.succ,
            "cycles": inv.cycles,
            "trees": trees(&inv.trees),
            "root_edges": inv.root_edges,
        },
        "eps": {
            "value": rational(eps),
            "edges": relaxed.edges,
            "sink_free": relaxed.sink_free,
            "entropy_gap": relaxed.entropy_gap,
            "decreasing_ratio": rational(&relaxed.decreasing_ratio),
        },
    });
    if s.reversion().is_some() {
        match p10_check(s) {
            Ok(p10) => {
                body["reversal"] = json!({ "exact_images": p10.exact_images });
                checks.extend_prefixed("reversal", p10.checks);
            }
            Err(Error::NotEquivariant) => body["reversal"] = Value::Null,
            Err(e) => return Err(e),
        }
    }
    Ok(report(body, &checks))
}

fn kernel_cmd(s: &System, power: u64) -> Res {
    let one = kernel(s);
    let dynamics = kernel_power(s, power);
    let matrix = one.pow(power);
    let rev = reverse_kernel(s);
    let mut checks = Checks::new();
    checks.extend(kernel_checks(s));
    checks.extend_prefixed("lifted", lifted_checks(s));
    checks.extend_prefixed("reverse", rev.checks.clone());
    let body = json!({
        "kernel": rows(&one),
        "power": power,
        "dynamics_power": rows(&dynamics),
        "matrix_power": rows(&matrix),
        "powers_agree": dynamics == matrix,
        "reverse_kernel": rows(&rev.kernel),
        "reversible": rev.reversible,
    });
    Ok(report(body, &checks))
}

fn chain(s: &System, q: &MacroDistribution) -> Res {
    let lim = limit_distribution(s, q);
    let st = &lim.structure;
    let body = json!({
        "classes": st.classes,
        "periods": st.periods,
        "subclasses": st.subclasses,
        "absorbing": st.absorbing,
        "q": rationals(q.weights()),
        "limit": lim.cyclic.iter().map(|v| rationals(v)).collect::<Vec<_>>(),
        "converged_at": lim.converged_at,
    });
    Ok(report(body, &st.checks))
}

fn process(s: &System, q: &MacroDistribution, depth: usize, ctx: &Context) -> Res {
    let mk = markovianity_check(s, depth.max(2))?;
    let st = stationarity_check(s, q, depth, &ctx.budget)?;
    let iid = iid_check(s, depth);
    let mut checks = Checks::new();
    checks.extend_prefixed("markov", mk.checks.clone());
    checks.extend_prefixed("stationarity", st.checks.clone());
    checks.extend_prefixed("iid", iid.checks.clone());
    let mut body = json!({
        "depth": depth,
        "markov": {
            "equivariant": mk.equivariant,
            "conclusive": mk.conclusive,
            "witness": mk.witness.as_ref().map(|w| json!({
                "history": w.history,
                "next": w.next,
                "full_conditional": rational(&w.full),
                "one_step": rational(&w.one_step),
            })),
        },
        "stationary": st.stationary,
        "stationarity_witness": st.witness.as_ref().map(|(shift, word)| json!({ "shift": shift, "word": word })),
        "iid": iid.matches,
    });
    if s.reversion().is_some() {
        let rev = reverse_process_check(s, depth, &ctx.budget)?;
        body["reversible"] = json!(rev.reversible);
        checks.extend_prefixed("reversal", rev.checks);
    }
    Ok(report(body, &checks))
}

fn produce(action: ProduceAction, s: &System, n: usize, q: &MacroDistribution, c: Option<usize>, ctx: &Context) -> Res {
    if n == 0 && !matches!(action, ProduceAction::Classes | ProduceAction::ReturnTime) {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let density_json = |d: &micromacro::produce::ProductionDensity| -> Value {
        d.weights
            .iter()
            .map(|(rho, w)| json!({ "ratio": rational(rho), "weight": rational(w) }))
            .collect()
    };
    match action {
        ProduceAction::Classes => {
            let classes = entropy_classes(s);
            let mut checks = Checks::new();
            checks.push(
                "|D|/|X| + |C|/|X| + |I|/|X| = 1",
                &classes.ratios[0] + &classes.ratios[1] + &classes.ratios[2] == micromacro::int(1),
            );
            let runs: Vec<(usize, usize)> = (1..=n.max(1)).map(|k| monotone_runs(s, k)).collect();
            if let Some(r) = s.reversion() {
                if (0..s.n()).all(|i| s.block_size(r[i]) == s.block_size(i)) {
                    checks.push("|D_n| = |I_n| under an entropy-preserving reversion", runs.iter().all(|(d, i)| d == i));
                }
            }
            let body = json!({
                "decreasing": classes.decreasing,
                "constant": classes.constant,
                "increasing": classes.increasing,
                "counts": { "D": classes.decreasing.len(), "C": classes.constant.len(), "I": classes.increasing.len() },
                "ratios": rationals(&classes.ratios),
                "monotone_runs": runs.iter().enumerate().map(|(k, (d, i))| json!({ "n": k + 1, "D": d, "I": i })).collect::<Vec<_>>(),
            });
            Ok(report(body, &checks))
        }
        ProduceAction::Density => {
            let d = production_density(s, q, n);
            let body = json!({ "n": n, "density": density_json(&d), "mean": log_value(&d.mean()) });
            Ok(report(body, &Checks::new()))
        }
        ProduceAction::Identities => {
            let checks = production_identities(s, q, n);
            let d = production_density(s, q, n);
            Ok(report(json!({ "n": n, "mean": log_value(&d.mean()) }), &checks))
        }
        ProduceAction::Fluctuation => {
            let f = fluctuation_check(s, q, n)?;
            let body = json!({
                "n": n,
                "density": density_json(&f.density),
                "sigma": log_value(&f.sigma),
                "sigma_positive_part": log_value(&f.sigma_positive_part),
            });
            Ok(report(body, &f.checks))
        }
        ProduceAction::Subequilibrium => {
            let c = c.ok_or_else(|| Error::InvalidArgument("--c is required".into()))?;
            let r = subequilibrium_profile(s, c, n)?;
            let body = json!({
                "n": n,
                "threshold": r.threshold,
                "q": rationals(r.q.weights()),
                "density": density_json(&r.density),
                "sigma": log_value(&r.sigma),
                "invariant": r.invariant,
            });
            Ok(report(body, &r.checks))
        }
        ProduceAction::Positivity => {
            let r = positivity_criteria(s, n);
            let body = json!({
                "n": n,
                "preserves_entropy": r.preserves_entropy,
                "point_mass_sigma": log_values(&r.point_mass_sigma),
                "half_space": log_values(&r.half_space),
            });
            Ok(report(body, &r.checks))
        }
        ProduceAction::ReturnTime => {
            let r = return_time_check(s, q, &ctx.budget)?;
            Ok(report(json!({ "d": r.d, "deltas": log_values(&r.deltas) }), &r.checks))
        }
    }
}

fn ebound(s: &System, e: &[usize]) -> Res {
    let rs = reaching_system(s, e)?;
    let st = structure_report(&rs);
    let mut checks = Checks::new();
    checks.extend_prefixed("structure", st.checks.clone());
    let mut stability = Vec::new();
    for duration in 0..=st.top + 1 {
        let r = s_stability_check(&rs, duration);
        stability.push(json!({ "duration": duration, "e_stable": r.e_stable, "equilibrium_stable": r.equilibrium_stable }));
        checks.extend_prefixed(&format!("stability {duration}"), r.checks);
    }
    let cover = double_cover_report(&rs)?;
    checks.extend_prefixed("cover", cover.checks.clone());
    let body = json!({
        "times": rs.times(),
        "top": st.top,
        "level_sizes": st.level_sizes,
        "entry_counts": st.entry_counts,
        "surjective": st.surjective,
        "mean_reaching_time": rational(&st.mean_reaching_time),
        "mean_from_kernel": rational(&st.mean_from_kernel),
        "mean_arrow": rational(&st.mean_arrow),
        "stability": stability,
        "cover": {
            "n": cover.cover.n(),
            "top": cover.cover_top,
            "level_sizes": cover.cover_level_sizes,
            "base_ratios": rationals(&cover.base_ratios),
            "cover_ratios": rationals(&cover.cover_ratios),
            "base_mean_arrow": rational(&cover.base_mean_arrow),
            "cover_mean_arrow": rational(&cover.cover_mean_arrow),
            "excursions": cover.excursions.iter().map(|x| json!({ "start": x.start, "interior": x.interior, "end": x.end })).collect::<Vec<_>>(),
        },
    });
    Ok(report(body, &checks))
}

fn census(
    n: Option<usize>,
    formula: bool,
    brute: bool,
    labeled: Option<usize>,
    dmax: bool,
    files: &[String],
    ctx: &mut Context,
) -> Res {
    let mut body = json!({});
    let mut checks = Checks::new();
    match files.len() {
        0 => {}
        1 => {
            let s = ctx.read_path(Some(&files[0]))?;
            let cf = canonical_form(&s);
            body["canonical_form"] = json!({ "cycle_lengths": cf.cycle_lengths, "word": cf.word });
        }
        2 => {
            let a = ctx.read_path(Some(&files[0]))?;
            let b = ctx.read_path(Some(&files[1]))?;
            body["isomorphic"] = json!(is_isomorphic(&a, &b));
        }
        _ => return Err(Error::InvalidArgument("census takes at most two system files".into())),
    }
    let wants_count = formula || brute || labeled.is_some() || dmax;
    if wants_count || files.is_empty() {
        let n = n.ok_or_else(|| Error::InvalidArgument("--n is required for counting".into()))?;
        body["n"] = json!(n);
        let closed = count_classes(n);
        if formula || !(brute || labeled.is_some() || dmax) {
            body["count"] = json!(closed.to_string());
        }
        if brute {
            let enumeration = enumerate_classes_bruteforce(n)?;
            body["bruteforce_count"] = json!(enumeration.count.to_string());
            checks.push("closed formula equals brute-force enumeration", closed == enumeration.count.into());
        }
        if let Some(k) = labeled {
            body["labeled"] = json!({ "k": k, "count": count_labeled(n, k).to_string() });
        }
        if dmax {
            body["d_max"] = json!(d_max(n));
        }
    }
    Ok(report(body, &checks))
}

fn ldev(mode: LdevMode, base: &System, copies: &[usize], eps: &Epsilon, levels: usize, ctx: &Context) -> Res {
    let eps_json = match eps {
        Epsilon::Rational(r) => rational(r),
        Epsilon::Log(v) => log_value(v),
    };
    match mode {
        LdevMode::Sanov => {
            let mut checks = Checks::new();
            let mut runs = Vec::new();
            for &c in copies {
                let r = exact_sanov_identity(base, c, eps, levels, &ctx.budget)?;
                checks.extend_prefixed(&format!("N = {c}"), r.checks.clone());
                runs.push(json!({
                    "copies": c,
                    "levels": r.levels.iter().map(|l| json!({
                        "level": l.level,
                        "micro_mass": rational(&l.micro_mass),
                        "word_mass": rational(&l.word_mass),
                    })).collect::<Vec<_>>(),
                }));
            }
            Ok(report(json!({ "eps": eps_json, "runs": runs }), &checks))
        }
        LdevMode::Rates => {
            let rates = rate_estimate(base, copies, eps, levels, &ctx.budget)?;
            let opt = |x: &Option<f64>| x.map(crate::wire::float_text);
            let body = json!({
                "eps": eps_json,
                "levels": rates.iter().map(|l| json!({
                    "level": l.level,
                    "limit": crate::wire::float_text(l.limit),
                    "rates": l.rates.iter().map(|(n, r)| json!({ "copies": n, "rate": opt(r) })).collect::<Vec<_>>(),
                    "gaps": l.gaps.iter().map(opt).collect::<Vec<_>>(),
                    "gap_shrinking": l.gap_shrinking,
                })).collect::<Vec<_>>(),
            });
            Ok(report(body, &Checks::new()))
        }
        LdevMode::Dominance => {
            let t = dominance_trend(base, copies, eps, levels, &ctx.budget)?;
            let body = json!({
                "eps": eps_json,
                "rows": t.rows.iter().map(|r| json!({
                    "copies": r.copies,
                    "equilibrium_ratio": rational(&r.equilibrium_ratio),
                    "decreasing_fraction": rational(&r.decreasing_fraction),
                })).collect::<Vec<_>>(),
                "ratio_nondecreasing": t.ratio_nondecreasing,
                "fraction_nonincreasing": t.fraction_nonincreasing,
            });
            Ok(report(body, &Checks::new()))
        }
    }
}

/// Small reference examples with known exact answers.
fn selftest() -> Res {
    use micromacro::{int, ratio};
    let mut checks = Checks::new();
    let z4 = System::with_reversion(vec![1, 2, 3, 0], vec![0, 1, 2, 1], vec![0, 3, 2, 1])?;
    let u = MacroDistribution::uniform(3);
    let w = production_density(&z4, &u, 1);
    checks.push("Z4: w(2) = 2/3 and w(1/2) = 1/3", w.weight(&int(2)) == ratio(2, 3) && w.weight(&ratio(1, 2)) == ratio(1, 3));
    let f = fluctuation_check(&z4, &u, 1)?;
    checks.extend_prefixed("Z4 fluctuation", f.checks);
    checks.push("Z4: sigma = ln(2)/3", f.sigma == LogValue::ln_usize(2).scale(&ratio(1, 3)));
    checks.push("census: 4 classes at n = 2", count_classes(2) == 4u32.into());
    let l = NumericalPartition::from_parts(&[(1, 1), (2, 1), (3, 4), (4, 1), (6, 1)])?;
    checks.push("max-decreasing: |D| = 13 at n = 25", entropy_classes(&max_decreasing_system(&l)).decreasing.len() == 13);
    let remark = remark_system(3)?;
    let q = MacroDistribution::point_mass(2, 0);
    let one = kernel_power(&remark, 1).apply(&q);
    let two = kernel_power(&remark, 2).apply(&q);
    let drop = &micromacro::entropy::total_entropy(&remark, &one) - &micromacro::entropy::total_entropy(&remark, &two);
    checks.push("remark: drop = ln(4/3)/3", drop == LogValue::ln_rational(&ratio(4, 3)).scale(&ratio(1, 3)));
    let cycle = System::new(vec![1, 2, 3, 4, 5, 6, 7, 0], vec![0; 8])?;
    let st = structure_report(&reaching_system(&cycle, &[0, 1, 4, 6])?);
    checks.push("8-cycle: mean reaching time 5/8", st.mean_reaching_time == ratio(5, 8));
    Ok(report(json!({ "examples": checks.len() }), &checks))
}
