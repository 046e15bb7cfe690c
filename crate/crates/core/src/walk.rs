//! Lazy simple random walks on graph oracles and total-variation estimates
//! between walks started at two vertices.
//!
//! For a Liouville graph the endpoint laws of walks started at neighboring
//! vertices merge, so their total-variation distance decays; on graphs with
//! nonconstant bounded harmonic functions it stays bounded away from zero.
//! Estimates come from raw endpoint histograms, so at desk-scale trial
//! counts they are biased upward; the split-half baseline exposes that bias.

use std::collections::HashMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphOracle, VertexKey, DEFAULT_BUDGET};

/// Fixed seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkConfig {
    pub steps: usize,
    pub trials: usize,
    /// Probability of staying put at each step.
    pub laziness: f64,
    pub seed: u64,
    pub start_a: VertexKey,
    pub start_b: VertexKey,
    /// Cap on distinct endpoint keys per histogram.
    pub budget: usize,
}

impl WalkConfig {
    pub fn new(start_a: VertexKey, start_b: VertexKey) -> Self {
        WalkConfig {
            steps: 100,
            trials: 10_000,
            laziness: 0.5,
            seed: DEFAULT_SEED,
            start_a,
            start_b,
            budget: DEFAULT_BUDGET,
        }
    }

    fn validate(&self, g: &dyn GraphOracle) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.laziness) {
            return Err(Error::InvalidParameter(format!(
                "laziness must lie in [0,1), got {}",
                self.laziness
            )));
        }
        for s in [&self.start_a, &self.start_b] {
            if !g.contains(s) {
                return Err(Error::UnknownVertex(s.clone(), g.name()));
            }
        }
        Ok(())
    }
}

/// Endpoint counts keyed by vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Histogram {
    counts: HashMap<VertexKey, u64>,
    total: u64,
}

impl Histogram {
    pub fn add(&mut self, key: VertexKey, count: u64) {
        *self.counts.entry(key).or_insert(0) += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: Histogram) {
        for (k, c) in other.counts {
            self.add(k, c);
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, key: &VertexKey) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexKey, &u64)> {
        self.counts.iter()
    }

    /// Entries sorted by key, for deterministic output.
    pub fn sorted(&self) -> Vec<(&VertexKey, u64)> {
        let mut v: Vec<(&VertexKey, u64)> = self.counts.iter().map(|(k, &c)| (k, c)).collect();
        v.sort();
        v
    }
}

impl FromIterator<VertexKey> for Histogram {
    fn from_iter<I: IntoIterator<Item = VertexKey>>(iter: I) -> Self {
        let mut h = Histogram::default();
        for k in iter {
            h.add(k, 1);
        }
        h
    }
}

/// Endpoint histograms for both starts at one time, plus the two halves of
/// the first start's trials.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkHistograms {
    pub steps: usize,
    pub a: Histogram,
    pub b: Histogram,
    pub a_first_half: Histogram,
    pub a_second_half: Histogram,
}

/// `(1/2) sum |p_A - p_B|` between the normalized histograms.
pub fn tv_distance(a: &Histogram, b: &Histogram) -> Result<f64> {
    if a.total == 0 || b.total == 0 {
        return Err(Error::Empty("histogram"));
    }
    // exact integer numerators: the result does not depend on hash order
    let (na, nb) = (a.total as u128, b.total as u128);
    let mut sum: u128 = 0;
    for (k, &ca) in &a.counts {
        sum += (ca as u128 * nb).abs_diff(b.count(k) as u128 * na);
    }
    for (k, &cb) in &b.counts {
        if !a.counts.contains_key(k) {
            sum += cb as u128 * na;
        }
    }
    Ok((sum as f64 / (2.0 * na as f64 * nb as f64)).clamp(0.0, 1.0))
}

/// Per-trajectory RNG derived from `(seed, start, trial)`.
fn trial_rng(seed: u64, which: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_mul(2).wrapping_add(which));
    rng
}

/// One lazy walk from `start`, recording the position at each checkpoint.
fn run_trajectory(
    g: &dyn GraphOracle,
    start: &VertexKey,
    checkpoints: &[usize],
    laziness: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<VertexKey> {
    let mut cache: HashMap<VertexKey, Vec<VertexKey>> = HashMap::new();
    let mut here = start.clone();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut t = 0;
    for &stop in checkpoints {
        while t < stop {
            t += 1;
            if rng.gen::<f64>() < laziness {
                continue;
            }
            let nbrs = cache.entry(here.clone()).or_insert_with(|| g.neighbors(&here));
            if nbrs.is_empty() {
                continue;
            }
            here = nbrs[rng.gen_range(0..nbrs.len())].clone();
        }
        out.push(here.clone());
    }
    out
}

/// Runs `cfg.trials` walks from each start and records endpoint histograms
/// at every time in `checkpoints` (sorted ascending). Deterministic given
/// the seed, regardless of thread scheduling.
pub fn simulate_checkpoints(
    g: &dyn GraphOracle,
    cfg: &WalkConfig,
    checkpoints: &[usize],
) -> Result<Vec<WalkHistograms>> {
    cfg.validate(g)?;
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    let half = cfg.trials / 2;
    let run = |which: u64, start: &VertexKey| -> Vec<Vec<VertexKey>> {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(cfg.seed, which, trial);
                run_trajectory(g, start, &cps, cfg.laziness, &mut rng)
            })
            .collect()
    };
    let ends_a = run(0, &cfg.start_a);
    let ends_b = run(1, &cfg.start_b);
    let mut out = Vec::with_capacity(cps.len());
    for (c, &steps) in cps.iter().enumerate() {
        let a: Histogram = ends_a.iter().map(|e| e[c].clone()).collect();
        let b: Histogram = ends_b.iter().map(|e| e[c].clone()).collect();
        if a.support_size() > cfg.budget || b.support_size() > cfg.budget {
            return Err(Error::BudgetExceeded {
                limit: cfg.budget,
                reached: a.support_size().max(b.support_size()),
            });
        }
        let a_first_half = ends_a[..half].iter().map(|e| e[c].clone()).collect();
        let a_second_half = ends_a[half..].iter().map(|e| e[c].clone()).collect();
        out.push(WalkHistograms {
            steps,
            a,
            b,
            a_first_half,
            a_second_half,
        });
    }
    Ok(out)
}

/// Endpoint histograms at time `cfg.steps`.
pub fn simulate_walks(g: &dyn GraphOracle, cfg: &WalkConfig) -> Result<WalkHistograms> {
    Ok(simulate_checkpoints(g, cfg, &[cfg.steps])?.remove(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvPoint {
    pub steps: usize,
    pub tv: f64,
    /// TV between the two halves of start A's trials.
    pub baseline_tv: f64,
    pub trials: usize,
}

impl WalkHistograms {
    pub fn tv_point(&self, trials: usize) -> Result<TvPoint> {
        let baseline_tv = if self.a_first_half.total() > 0 && self.a_second_half.total() > 0 {
            tv_distance(&self.a_first_half, &self.a_second_half)?
        } else {
            0.0
        };
        Ok(TvPoint {
            steps: self.steps,
            tv: tv_distance(&self.a, &self.b)?,
            baseline_tv,
            trials,
        })
    }
}

/// TV-versus-steps series between the two starts of `cfg`.
pub fn tv_series(g: &dyn GraphOracle, cfg: &WalkConfig, checkpoints: &[usize]) -> Result<Vec<TvPoint>> {
    simulate_checkpoints(g, cfg, checkpoints)?
        .iter()
        .map(|h| h.tv_point(cfg.trials))
        .collect()
}

/// TV series for a graph expected to be Liouville next to one expected not to be.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub liouville_graph: String,
    pub other_graph: String,
    pub liouville_series: Vec<TvPoint>,
    pub other_series: Vec<TvPoint>,
}

/// Runs the same walk settings on both graphs. Each graph gets its own
/// pair of adjacent starts.
pub fn liouville_contrast(
    liouville: &dyn GraphOracle,
    liouville_starts: (VertexKey, VertexKey),
    other: &dyn GraphOracle,
    other_starts: (VertexKey, VertexKey),
    cfg: &WalkConfig,
    checkpoints: &[usize],
) -> Result<ContrastReport> {
    let mut series = Vec::with_capacity(2);
    for (g, (a, b)) in [(liouville, liouville_starts), (other, other_starts)] {
        if !g.neighbors(&a).contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "starts {a} and {b} are not adjacent in {}",
                g.name()
            )));
        }
        let run_cfg = WalkConfig {
            start_a: a,
            start_b: b,
            ..cfg.clone()
        };
        series.push(tv_series(g, &run_cfg, checkpoints)?);
    }
    let other_series = series.pop().expect("two series");
    let liouville_series = series.pop().expect("two series");
    Ok(ContrastReport {
        liouville_graph: liouville.name(),
        other_graph: other.name(),
        liouville_series,
        other_series,
    })
}

/// CSV rows `(steps, tv, baseline_tv, trials)`.
pub fn write_tv_csv<W: Write>(points: &[TvPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::line_graph;

    fn hist(keys: &[i64]) -> Histogram {
        keys.iter().map(|&k| VertexKey::int(k)).collect()
    }

    #[test]
    fn tv_examples() {
        let a = hist(&[0, 0, 1, 2]);
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(tv_distance(&hist(&[0, 1]), &hist(&[2, 3])).unwrap(), 1.0);
        assert!((tv_distance(&hist(&[0, 1]), &hist(&[0, 0])).unwrap() - 0.5).abs() < 1e-15);
        assert!(tv_distance(&Histogram::default(), &a).is_err());
    }

    #[test]
    fn zero_steps_gives_point_masses() {
        let g = line_graph();
        let mut cfg = WalkConfig::new(VertexKey::int(0), VertexKey::int(3));
        cfg.steps = 0;
        cfg.trials = 20;
        let h = simulate_walks(g.as_ref(), &cfg).unwrap();
        assert_eq!(h.a.count(&VertexKey::int(0)), 20);
        assert_eq!(h.b.count(&VertexKey::int(3)), 20);
    }

    #[test]
    fn same_seed_same_histograms() {
        let g = line_graph();
        let mut cfg = WalkConfig::new(VertexKey::int(0), VertexKey::int(1));
        cfg.trials = 500;
        cfg.steps = 30;
        assert_eq!(
            simulate_walks(g.as_ref(), &cfg).unwrap(),
            simulate_walks(g.as_ref(), &cfg).unwrap()
        );
        let mut other = cfg.clone();
        other.seed += 1;
        assert_ne!(
            simulate_walks(g.as_ref(), &cfg).unwrap().a,
            simulate_walks(g.as_ref(), &other).unwrap().a
        );
    }

    #[test]
    fn rejects_bad_config() {
        let g = line_graph();
        let mut cfg = WalkConfig::new(VertexKey::int(0), VertexKey::int(1));
        cfg.laziness = 1.0;
        assert!(simulate_walks(g.as_ref(), &cfg).is_err());
        cfg.laziness = 0.5;
        cfg.trials = 0;
        assert!(simulate_walks(g.as_ref(), &cfg).is_err());
        let cfg = WalkConfig::new(VertexKey::word(&[]), VertexKey::int(1));
        assert!(simulate_walks(g.as_ref(), &cfg).is_err());
    }
}
