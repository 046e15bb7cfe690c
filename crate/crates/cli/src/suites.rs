//! Canned experiment suites behind `lampharm reproduce`.

use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use lampharm::graph::{
    adjacent_start, ball, caterpillar_graph, direct_product, free_group_graph, grid_graph, lamplighter, line_graph,
    path_graph, star_graph, GraphDescriptor, Oracle, VertexKey,
};
use lampharm::isoperimetry::growth_exponent;
use lampharm::potential::{annulus_capacity, oscillation_probe, BaseSign, FirstLetter, VertexFunction};
use lampharm::spanning::{
    augment_with_line, augmented_ball, builtin_spanning_line, check_finite_line, check_line_window, find_spanning_line,
    GradientBoundHarness, SearchOptions, SearchOutcome,
};
use lampharm::walk::{liouville_contrast, WalkConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{liouville_verdicts, probe_options};
use crate::report::ExperimentReport;
use crate::{Common, Failure};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LamplighterOscillation,
    ProductGrowth,
    CapacityDecay,
    GradientBound,
    SpanningLines,
    LiouvilleContrast,
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct Reproduce {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Walk trials for the Liouville suite.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Random functions per graph for the gradient-bound suite.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

/// Margin required between consecutive oscillations.
const MONOTONE_MARGIN: f64 = 1e-3;
const FREE_GROUP_FLOOR: f64 = 0.2;
const GRID_EXPONENT: f64 = 2.0;
const GRID_EXPONENT_TOL: f64 = 0.15;
const CAPACITY_TOL: f64 = 1e-8;

pub fn reproduce(a: &Reproduce, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    let suites = match a.suite {
        Suite::All => vec![
            Suite::LamplighterOscillation,
            Suite::ProductGrowth,
            Suite::CapacityDecay,
            Suite::GradientBound,
            Suite::SpanningLines,
            Suite::LiouvilleContrast,
        ],
        s => vec![s],
    };
    let mut report = ExperimentReport::new("reproduce", c.seed, config);
    for s in suites {
        let part = match s {
            Suite::LamplighterOscillation => lamplighter_oscillation(c)?,
            Suite::ProductGrowth => product_growth(c)?,
            Suite::CapacityDecay => capacity_decay(c)?,
            Suite::GradientBound => gradient_bound(c, a.samples)?,
            Suite::SpanningLines => spanning_lines(c)?,
            Suite::LiouvilleContrast => liouville(c, a.trials)?,
            Suite::All => unreachable!(),
        };
        report.merge(part);
    }
    Ok(report)
}

fn part(name: &str, c: &Common) -> ExperimentReport {
    ExperimentReport::new(name, c.seed, Value::Null)
}

fn lamplighter_l2() -> Result<Oracle, Failure> {
    Ok(lamplighter(path_graph(2)?, line_graph(), VertexKey::int(0))?)
}

fn strictly_decreasing(xs: &[f64], margin: f64) -> bool {
    xs.windows(2).all(|w| w[1] < w[0] - margin)
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn lamplighter_oscillation(c: &Common) -> Result<ExperimentReport, Failure> {
    let mut r = part("lamplighter-oscillation", c);
    let opts = probe_options(c);
    let g = lamplighter_l2()?;
    for p in [1.5, 2.0] {
        let mut osc = Vec::new();
        let mut energy = Vec::new();
        for radius in [4, 6, 8] {
            let probe = oscillation_probe(g.as_ref(), &g.origin(), radius, p, &BaseSign, &opts)?;
            osc.push((radius as f64, probe.interior_oscillation));
            energy.push((radius as f64, probe.energy));
        }
        let ys: Vec<f64> = osc.iter().map(|q| q.1).collect();
        r.series("oscillation", "R", &format!("{} p={p}", g.name()), osc);
        r.series("energy", "R", &format!("{} p={p}", g.name()), energy);
        r.verdict(
            &format!("lamplighter_oscillation_decreasing_p{p}"),
            strictly_decreasing(&ys, MONOTONE_MARGIN),
            "strictly decreasing in R with margin 1e-3",
            fmt_list(&ys),
            "finite-energy probe: oscillation of the p-harmonic extension of a two-sided split \
             over the half ball should shrink if such functions are forced constant",
        );
    }
    let f = free_group_graph(2)?;
    let mut ys = Vec::new();
    for radius in [3, 4, 5] {
        ys.push(oscillation_probe(f.as_ref(), &f.origin(), radius, 2.0, &FirstLetter, &opts)?.interior_oscillation);
    }
    r.series(
        "oscillation",
        "R",
        &format!("{} p=2", f.name()),
        [3.0, 4.0, 5.0].into_iter().zip(ys.iter().copied()).collect(),
    );
    r.verdict(
        "free_group_oscillation_floor",
        ys.iter().all(|&y| y > FREE_GROUP_FLOOR),
        "> 0.2 for every R",
        fmt_list(&ys),
        "contrast: the free group carries non-constant bounded harmonic functions",
    );
    Ok(r)
}

fn product_growth(c: &Common) -> Result<ExperimentReport, Failure> {
    let mut r = part("product-growth", c);
    let grid = grid_graph(2)?;
    let fit = growth_exponent(grid.as_ref(), 15, c.budget)?;
    r.series("ball_size", "R", &grid.name(), sizes(&fit.sizes));
    r.verdict(
        "grid_growth_exponent",
        (fit.exponent - GRID_EXPONENT).abs() <= GRID_EXPONENT_TOL,
        "|d - 2.0| <= 0.15 at Rmax = 15",
        format!("{:.4} ± {:.4}", fit.exponent, fit.half_width_95),
        "polynomial growth of the base factor",
    );
    let line = line_graph();
    let lfit = growth_exponent(line.as_ref(), 15, c.budget)?;
    r.series("ball_size", "R", &line.name(), sizes(&lfit.sizes));
    r.detail(
        "line_growth",
        json!({"exponent": lfit.exponent, "half_width_95": lfit.half_width_95}),
    );
    let ll = lamplighter_l2()?;
    let lfit = growth_exponent(ll.as_ref(), 8, c.budget)?;
    r.series("ball_size", "R", &ll.name(), sizes(&lfit.sizes));
    r.verdict(
        "lamplighter_superpolynomial",
        lfit.superpolynomial,
        "exponential-fit residual < 0.5 × polynomial-fit residual at Rmax = 8",
        format!("exp_rss={:.4}, poly_rss={:.4}", lfit.exp_rss, lfit.poly_rss),
        "the lamplighter factor grows faster than any polynomial",
    );
    // solver leg on a product of a Liouville and a non-Liouville factor
    let prod = direct_product(line_graph(), free_group_graph(2)?);
    let opts = probe_options(c);
    let mut osc = Vec::new();
    let mut worst = 0.0f64;
    for radius in [2, 3, 4] {
        let probe = oscillation_probe(prod.as_ref(), &prod.origin(), radius, 2.0, &BaseSign, &opts)?;
        osc.push((radius as f64, probe.interior_oscillation));
        worst = worst.max(probe.solution.residual);
    }
    r.series("oscillation", "R", &format!("{} p=2", prod.name()), osc);
    r.verdict(
        "product_solver_residual",
        worst <= 10.0 * c.tolerance,
        "mean-value residual <= 10 × tolerance",
        format!("{worst:.3e}"),
        "solver sanity on a product graph",
    );
    Ok(r)
}

fn sizes(s: &[(usize, usize)]) -> Vec<(f64, f64)> {
    s.iter().map(|&(x, y)| (x as f64, y as f64)).collect()
}

fn capacity_decay(c: &Common) -> Result<ExperimentReport, Failure> {
    let mut r = part("capacity-decay", c);
    let opts = probe_options(c);
    let grid = grid_graph(2)?;
    let mut caps = Vec::new();
    for radius in [4, 8, 16] {
        caps.push(annulus_capacity(grid.as_ref(), &grid.origin(), 1, radius, 2.0, &opts)?);
    }
    r.series(
        "capacity",
        "R",
        &format!("{} r=1 p=2", grid.name()),
        [4.0, 8.0, 16.0].into_iter().zip(caps.iter().copied()).collect(),
    );
    r.verdict(
        "grid_capacity_decreasing",
        strictly_decreasing(&caps, 0.0),
        "strictly decreasing in R",
        fmt_list(&caps),
        "annulus capacity decays as the outer radius grows",
    );
    let line = line_graph();
    let mut worst = 0.0f64;
    let mut pts = Vec::new();
    for radius in [2, 3, 5, 9, 17] {
        let cap = annulus_capacity(line.as_ref(), &line.origin(), 1, radius, 2.0, &opts)?;
        worst = worst.max((cap - 2.0 / (radius as f64 - 1.0)).abs());
        pts.push((radius as f64, cap));
    }
    r.series("capacity", "R", &format!("{} r=1 p=2", line.name()), pts);
    r.verdict(
        "line_capacity_closed_form",
        worst <= CAPACITY_TOL,
        "|cap - 2/(R-1)| <= 1e-8",
        format!("{worst:.3e}"),
        "two resistors of length R-1 in parallel",
    );
    Ok(r)
}

/// A graph, its augmented version on the same vertices, and `k`.
fn augmented_pairs(
    c: &Common,
) -> Result<
    Vec<(
        String,
        lampharm::graph::FiniteGraph,
        lampharm::graph::FiniteGraph,
        usize,
    )>,
    Failure,
> {
    let cat = caterpillar_graph(1)?;
    let cat_line = builtin_spanning_line(&GraphDescriptor::Caterpillar { leaves: 1 })?;
    let k_cat = cat_line.k();
    let cat_aug = augment_with_line(cat.clone(), cat_line)?;
    let g = ball(cat.as_ref(), &cat.origin(), 8, c.budget)?;
    let ga = augmented_ball(&g, cat_aug.as_ref(), k_cat)?;
    let mut out = vec![(cat.name(), g, ga, k_cat)];

    // lamplighter with both factors augmented: lamp star(3) by a searched line
    let star = star_graph(3)?;
    let sb = ball(star.as_ref(), &star.origin(), 1, c.budget)?;
    let opts = SearchOptions {
        exact: Some(true),
        seed: c.seed,
        ..SearchOptions::default()
    };
    let SearchOutcome::Found { line: star_line, .. } = find_spanning_line(&sb, 2, &opts)? else {
        return Err(Failure::Usage("no spanning line in the 2-fuzz of star(3)".into()));
    };
    let k = star_line.k().max(k_cat);
    let star_aug = augment_with_line(star.clone(), star_line)?;
    let base = lamplighter(star, cat.clone(), VertexKey::int(0))?;
    let aug = lamplighter(star_aug, cat_aug, VertexKey::int(0))?;
    let g = ball(base.as_ref(), &base.origin(), 4, c.budget)?;
    let ga = augmented_ball(&g, aug.as_ref(), k)?;
    out.push((base.name(), g, ga, k));
    Ok(out)
}

fn gradient_bound(c: &Common, samples: usize) -> Result<ExperimentReport, Failure> {
    let mut r = part("gradient-bound", c);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for (name, g, ga, k) in augmented_pairs(c)? {
        let h = GradientBoundHarness::new(&g, &ga, k)?;
        let mut violations = 0;
        let mut worst = 0.0f64;
        let ps = [1.0, 1.5, 2.0, 3.0];
        for s in 0..samples {
            let p = ps[s % ps.len()];
            let f = VertexFunction::on(&g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
            let b = h.check(&f, p)?;
            if !b.ok {
                violations += 1;
            }
            if b.rhs > 0.0 {
                worst = worst.max(b.lhs / b.rhs);
            }
        }
        r.detail(&format!("structure {name}"), serde_json::to_value(h.report())?);
        r.verdict(
            &format!("gradient_bound {name}"),
            violations == 0 && h.report().ok,
            &format!("||grad f||_p on G' <= (4k+1) ||grad f||_p on G, k={k}, zero violations"),
            format!(
                "{violations} violations in {samples}, max lhs/rhs {worst:.4}, structure ok {}",
                h.report().ok
            ),
            "adding short line edges changes p-energy by at most a constant factor",
        );
    }
    Ok(r)
}

fn spanning_lines(c: &Common) -> Result<ExperimentReport, Failure> {
    let mut r = part("spanning-lines", c);
    let star = star_graph(3)?;
    let sb = ball(star.as_ref(), &star.origin(), 1, c.budget)?;
    let exact = SearchOptions {
        exact: Some(true),
        seed: c.seed,
        ..SearchOptions::default()
    };
    let k1 = find_spanning_line(&sb, 1, &exact)?;
    r.verdict(
        "star_k1_proved_absent",
        k1 == SearchOutcome::ProvedAbsent,
        "exhaustive search reports proved-absent",
        k1.status().into(),
        "the center would have to be visited twice",
    );
    let k2 = find_spanning_line(&sb, 2, &exact)?;
    let ok = match &k2 {
        SearchOutcome::Found { order, .. } => check_finite_line(&sb, order, 2, false).is_ok(),
        _ => false,
    };
    r.verdict(
        "star_k2_found",
        ok,
        "found and accepted by the checker",
        k2.status().into(),
        "leaves are pairwise at distance 2",
    );
    let cat = caterpillar_graph(1)?;
    let line = builtin_spanning_line(&GraphDescriptor::Caterpillar { leaves: 1 })?;
    let mut failures = BTreeMap::new();
    for len in 1..=50usize {
        // every window of `len` spine vertices, i.e. 2·len line positions, around the origin
        for start in -(len as i64)..=0 {
            let region = line.window(2 * start, 2 * len);
            if let Err(e) = check_line_window(cat.as_ref(), &line, &region) {
                failures.entry(len).or_insert(format!("{e:?}"));
            }
        }
    }
    r.verdict(
        "caterpillar_builtin_line",
        failures.is_empty(),
        &format!("checker accepts all spine windows up to length 50, k={}", line.k()),
        format!("{} failing lengths", failures.len()),
        "closed-form line: spine vertex then its leaf",
    );
    Ok(r)
}

fn liouville(c: &Common, trials: usize) -> Result<ExperimentReport, Failure> {
    let mut r = part("liouville-contrast", c);
    let ll = lamplighter_l2()?;
    let fg = free_group_graph(2)?;
    let sa = (
        ll.origin(),
        adjacent_start(&ll).expect("lamplighter origin has neighbors"),
    );
    let sb = (
        fg.origin(),
        adjacent_start(&fg).expect("free group origin has neighbors"),
    );
    let cfg = WalkConfig {
        trials,
        seed: c.seed,
        budget: c.budget,
        ..WalkConfig::new(sa.0.clone(), sa.1.clone())
    };
    let rep = liouville_contrast(ll.as_ref(), sa, fg.as_ref(), sb, &cfg, &[50, 100, 200])?;
    liouville_verdicts(
        &mut r,
        &rep.liouville_series,
        &rep.other_series,
        &rep.liouville_graph,
        &rep.other_graph,
    );
    Ok(r)
}
