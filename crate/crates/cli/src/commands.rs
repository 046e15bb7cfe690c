use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use clap::Args;
use lampharm::graph::{adjacent_start, ball, end_estimate, FiniteGraph, GraphDescriptor, Oracle};
use lampharm::isoperimetry::{default_family, growth_exponent, is_d_kappa};
use lampharm::potential::{
    annulus_capacity, solve_dirichlet, split_by_name, DirichletProblem, DirichletRecord, LabelTable, ProbeOptions,
    SplitRule,
};
use lampharm::spanning::{builtin_spanning_line, check_line_window, find_spanning_line, SearchOptions, SearchOutcome};
use lampharm::walk::{liouville_contrast, TvPoint, WalkConfig};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::ExperimentReport;
use crate::{Common, Failure};

/// Reads `--descriptor`: inline JSON when it starts with `{`, else a file path.
pub fn load_descriptor(arg: &str) -> Result<GraphDescriptor, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read descriptor {arg}: {e}")))?
    };
    Ok(GraphDescriptor::parse(&text)?)
}

pub fn probe_options(c: &Common) -> ProbeOptions {
    ProbeOptions {
        tolerance: c.tolerance,
        budget: c.budget,
        ..ProbeOptions::default()
    }
}

#[derive(Args, Debug, Serialize)]
pub struct BuildGraph {
    /// Graph descriptor: JSON text or a path to a JSON file.
    #[arg(long)]
    pub descriptor: String,
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
    /// Write the ball's edge list (`u v` per line).
    #[arg(long)]
    pub export_edges: Option<PathBuf>,
    /// Write the ball's vertex table (`index key boundary`).
    #[arg(long)]
    pub export_vertices: Option<PathBuf>,
}

pub fn build_graph(a: &BuildGraph, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    let desc = load_descriptor(&a.descriptor)?;
    let g = desc.build()?;
    let b = ball(g.as_ref(), &g.origin(), a.radius, c.budget)?;
    let sizes: Vec<(f64, f64)> = (0..=a.radius)
        .map(|r| (r as f64, (0..b.len()).filter(|&i| b.depth(i) <= r).count() as f64))
        .collect();
    let ends = if a.radius >= 2 {
        Some(end_estimate(g.as_ref(), a.radius / 2, a.radius, c.budget)?)
    } else {
        None
    };
    if let Some(path) = &a.export_edges {
        b.write_edge_list(fs::File::create(path)?)?;
    }
    if let Some(path) = &a.export_vertices {
        b.write_vertex_table(fs::File::create(path)?)?;
    }
    let mut r = ExperimentReport::new("build-graph", c.seed, config);
    r.series("ball_size", "R", &g.name(), sizes);
    r.detail(
        "graph",
        json!({
            "name": g.name(),
            "origin": g.origin().to_string(),
            "degree_bound": g.degree_bound(),
            "radius": a.radius,
            "vertices": b.len(),
            "edges": b.edge_count(),
            "boundary_vertices": b.boundary_vertices().count(),
            "end_estimate": ends,
        }),
    );
    Ok(r)
}

#[derive(Args, Debug, Serialize)]
pub struct Solve {
    #[arg(long)]
    pub descriptor: String,
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Boundary split rule: base-sign or first-letter.
    #[arg(long, conflicts_with = "boundary_file")]
    pub split: Option<String>,
    /// Boundary values as `index value` lines, indices as in the vertex table.
    #[arg(long)]
    pub boundary_file: Option<PathBuf>,
}

pub fn solve(a: &Solve, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    let desc = load_descriptor(&a.descriptor)?;
    let g = desc.build()?;
    let b = ball(g.as_ref(), &g.origin(), a.radius, c.budget)?;
    let rule: Box<dyn SplitRule> = match (&a.split, &a.boundary_file) {
        (_, Some(path)) => Box::new(LabelTable::parse(&fs::read_to_string(path)?)?),
        (Some(name), None) => split_by_name(name)?,
        (None, None) => split_by_name("base-sign")?,
    };
    let mut values = std::collections::BTreeMap::new();
    for i in b.boundary_vertices() {
        values.insert(i, rule.label(&b, i)?);
    }
    let prob = DirichletProblem::new(b, values, a.p)?.with_tolerance(c.tolerance);
    let sol = solve_dirichlet(&prob)?;
    let g_fin = prob.graph();
    let boundary_max = prob
        .boundary_values()
        .values()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let boundary_min = prob.boundary_values().values().copied().fold(f64::INFINITY, f64::min);
    let vals = sol.function.values();
    let (lo, hi) = g_fin
        .interior_vertices()
        .map(|i| vals[i])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    let slack = 10.0 * c.tolerance;
    let mut r = ExperimentReport::new("solve", c.seed, config);
    r.series(
        "solution",
        "vertex",
        &g.name(),
        vals.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect(),
    );
    r.verdict(
        "maximum_principle",
        hi <= boundary_max + slack && lo >= boundary_min - slack,
        "interior values within boundary range ± 10·tolerance",
        format!("interior [{lo}, {hi}], boundary [{boundary_min}, {boundary_max}]"),
        "a p-harmonic extension takes no values outside its boundary data",
    );
    r.detail("split", json!(rule.name()));
    r.detail("iterations", json!(sol.iterations));
    r.detail(
        "record",
        serde_json::to_value(DirichletRecord::new(desc, a.radius, &prob, &sol))?,
    );
    Ok(r)
}

#[derive(Args, Debug, Serialize)]
pub struct Capacity {
    #[arg(long)]
    pub descriptor: String,
    /// Inner radius r.
    #[arg(long, default_value_t = 1)]
    pub inner: usize,
    /// Outer radii R (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    pub radius: Vec<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
}

pub fn capacity(a: &Capacity, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    let g = load_descriptor(&a.descriptor)?.build()?;
    let opts = probe_options(c);
    let mut points = Vec::new();
    for &big in &a.radius {
        points.push((
            big as f64,
            annulus_capacity(g.as_ref(), &g.origin(), a.inner, big, a.p, &opts)?,
        ));
    }
    let mut r = ExperimentReport::new("capacity", c.seed, config);
    r.series(
        "capacity",
        "R",
        &format!("{} r={} p={}", g.name(), a.inner, a.p),
        points,
    );
    Ok(r)
}

#[derive(Args, Debug, Serialize)]
pub struct Isoprofile {
    #[arg(long)]
    pub descriptor: String,
    /// Exponents d (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub d: Vec<f64>,
    #[arg(long, default_value_t = 6)]
    pub rmax: usize,
    /// BFS-grown test sets in addition to balls.
    #[arg(long, default_value_t = 16)]
    pub random_sets: usize,
}

pub fn isoprofile(a: &Isoprofile, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    let g = load_descriptor(&a.descriptor)?.build()?;
    let family = default_family(g.as_ref(), a.rmax, a.random_sets, c.seed, c.budget)?;
    let mut r = ExperimentReport::new("isoprofile", c.seed, config);
    let mut kappas = Vec::new();
    for &d in &a.d {
        let est = is_d_kappa(g.as_ref(), d, &family)?;
        r.series(
            "iso_ratio",
            "set_size",
            &format!("d={d}"),
            est.points.iter().map(|p| (p.set_size as f64, p.ratio)).collect(),
        );
        kappas.push(json!({"d": d, "kappa_lower_bound": est.kappa_lower_bound, "witnesses": est.witnesses}));
    }
    r.detail("kappa", Value::Array(kappas));
    if a.rmax >= 3 {
        let fit = growth_exponent(g.as_ref(), a.rmax, c.budget)?;
        r.series(
            "ball_size",
            "R",
            &g.name(),
            fit.sizes.iter().map(|&(x, y)| (x as f64, y as f64)).collect(),
        );
        r.detail("growth", serde_json::to_value(&fit)?);
    }
    r.detail(
        "note",
        json!("kappa is a lower bound from the tested sets only; it certifies nothing about untested sets"),
    );
    Ok(r)
}

#[derive(Args, Debug, Serialize)]
pub struct Spanline {
    /// Family descriptor; uses the built-in line when one exists.
    #[arg(long, required_unless_present = "edge_list", conflicts_with = "edge_list")]
    pub descriptor: Option<String>,
    /// Finite graph as an edge list (`u v` per line).
    #[arg(long)]
    pub edge_list: Option<PathBuf>,
    /// Fuzz parameter for the search.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Force exhaustive backtracking.
    #[arg(long)]
    pub exact: bool,
    /// Search a ball of the descriptor's graph even when a built-in line exists.
    #[arg(long)]
    pub search: bool,
    /// Ball radius searched for descriptor graphs.
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
    /// Search timeout in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub timeout: f64,
    /// Line positions checked for built-in lines.
    #[arg(long, default_value_t = 50)]
    pub window: usize,
}

pub fn spanline(a: &Spanline, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    let mut r = ExperimentReport::new("spanline", c.seed, config);
    let graph = match (&a.descriptor, &a.edge_list) {
        (Some(d), _) => {
            let desc = load_descriptor(d)?;
            let g = desc.build()?;
            if !a.search && !a.exact {
                if let Ok(line) = builtin_spanning_line(&desc) {
                    let region = line.window(-(a.window as i64 / 2), a.window);
                    let check = check_line_window(g.as_ref(), &line, &region);
                    r.verdict(
                        "line_checker",
                        check.is_ok(),
                        &format!("{} consecutive positions within distance k={}", region.len(), line.k()),
                        format!("{check:?}"),
                        "every vertex once, consecutive vertices within k",
                    );
                    r.detail("status", json!("builtin"));
                    r.detail("line", line.to_json(a.window));
                    return Ok(r);
                }
            }
            ball(g.as_ref(), &g.origin(), a.radius, c.budget)?
        }
        (None, Some(path)) => FiniteGraph::read_edge_list(&fs::read_to_string(path)?)?,
        (None, None) => return Err(Failure::Usage("give --descriptor or --edge-list".into())),
    };
    let opts = SearchOptions {
        exact: a.exact.then_some(true),
        timeout: Duration::from_secs_f64(a.timeout.max(0.0)),
        seed: c.seed,
        ..SearchOptions::default()
    };
    let outcome = find_spanning_line(&graph, a.k, &opts)?;
    r.detail("status", json!(outcome.status()));
    r.detail("vertices", json!(graph.len()));
    match &outcome {
        SearchOutcome::Found { line, order, method } => {
            r.detail("line", line.to_json(0));
            r.detail("order", json!(order));
            r.detail("method", json!(format!("{method:?}")));
        }
        SearchOutcome::NotFound { restarts } => r.detail("restarts", json!(restarts)),
        SearchOutcome::TimedOut { .. } => {
            return Err(Failure::Budget(format!(
                "spanning-line search timed out after {} s",
                a.timeout
            )))
        }
        SearchOutcome::ProvedAbsent => {}
    }
    r.verdict(
        "line_found",
        matches!(outcome, SearchOutcome::Found { .. }),
        &format!("Hamiltonian path in the {}-fuzz", a.k),
        outcome.status().to_string(),
        "not-found is a search failure; proved-absent is exhaustive",
    );
    Ok(r)
}

#[derive(Args, Debug, Serialize)]
pub struct Liouville {
    /// Graph expected to be Liouville.
    #[arg(long)]
    pub a: String,
    /// Contrast graph.
    #[arg(long)]
    pub b: String,
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    pub steps: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.5)]
    pub laziness: f64,
}

fn starts(g: &Oracle) -> Result<(lampharm::graph::VertexKey, lampharm::graph::VertexKey), Failure> {
    let b = adjacent_start(g).ok_or_else(|| Failure::Usage(format!("{} has an isolated origin", g.name())))?;
    Ok((g.origin(), b))
}

type Points = Vec<(f64, f64)>;

fn tv_points(series: &[TvPoint]) -> (Points, Points) {
    (
        series.iter().map(|p| (p.steps as f64, p.tv)).collect(),
        series.iter().map(|p| (p.steps as f64, p.baseline_tv)).collect(),
    )
}

pub fn liouville(a: &Liouville, c: &Common, config: Value) -> Result<ExperimentReport, Failure> {
    if a.steps.len() < 2 {
        return Err(Failure::Usage("--steps needs at least two checkpoints".into()));
    }
    let ga = load_descriptor(&a.a)?.build()?;
    let gb = load_descriptor(&a.b)?.build()?;
    let (a0, a1) = starts(&ga)?;
    let cfg = WalkConfig {
        trials: a.trials,
        laziness: a.laziness,
        seed: c.seed,
        budget: c.budget,
        ..WalkConfig::new(a0.clone(), a1.clone())
    };
    let rep = liouville_contrast(ga.as_ref(), (a0, a1), gb.as_ref(), starts(&gb)?, &cfg, &a.steps)?;
    let mut r = ExperimentReport::new("liouville", c.seed, config);
    liouville_verdicts(
        &mut r,
        &rep.liouville_series,
        &rep.other_series,
        &rep.liouville_graph,
        &rep.other_graph,
    );
    Ok(r)
}

/// TV series plus the decay and plateau verdicts.
pub fn liouville_verdicts(r: &mut ExperimentReport, la: &[TvPoint], lb: &[TvPoint], name_a: &str, name_b: &str) {
    let (tv_a, base_a) = tv_points(la);
    let (tv_b, base_b) = tv_points(lb);
    r.series("tv", "steps", name_a, tv_a);
    r.series("tv_baseline", "steps", name_a, base_a);
    r.series("tv", "steps", name_b, tv_b);
    r.series("tv_baseline", "steps", name_b, base_b);
    let (first, last) = (la[0], la[la.len() - 1]);
    r.verdict(
        "tv_decay",
        first.tv - last.tv > last.baseline_tv,
        "TV(first) - TV(last) > split-half baseline at the last checkpoint",
        format!(
            "TV({})={:.4}, TV({})={:.4}, baseline={:.4}",
            first.steps, first.tv, last.steps, last.tv, last.baseline_tv
        ),
        "Liouville probe: walks from adjacent starts should become indistinguishable",
    );
    let end = lb[lb.len() - 1];
    r.verdict(
        "tv_plateau",
        end.tv > 0.2,
        "TV at the last checkpoint > 0.2",
        format!("TV({})={:.4}", end.steps, end.tv),
        "non-Liouville contrast: adjacent starts stay distinguishable",
    );
}
