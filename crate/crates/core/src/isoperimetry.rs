//! Edge boundaries, witness-based `IS_d` constants and volume growth fits.
//!
//! `IS_d` asks for `|F|^((d-1)/d) <= kappa |dF|` over *all* finite `F`. Here it
//! is only sampled on a finite family of witness sets, so a fitted `kappa`
//! is a lower bound on any valid constant, never a certificate.

use std::collections::HashSet;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ball, FiniteGraph, GraphOracle, VertexKey};

/// Number of edges of `g` with exactly one endpoint in `set`.
pub fn edge_boundary(g: &dyn GraphOracle, set: &HashSet<VertexKey>) -> usize {
    set.iter()
        .map(|v| g.neighbors(v).iter().filter(|w| !set.contains(*w)).count())
        .sum()
}

/// Same count on a materialized graph, with `set` given by vertex indices.
pub fn edge_boundary_finite(g: &FiniteGraph, set: &[usize]) -> usize {
    let mut inside = vec![false; g.len()];
    for &i in set {
        inside[i] = true;
    }
    set.iter()
        .map(|&i| g.neighbors(i).iter().filter(|&&j| !inside[j]).count())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoProfilePoint {
    pub set_size: usize,
    pub boundary_size: usize,
    pub d: f64,
    /// `|F|^((d-1)/d) / |dF|`
    pub ratio: f64,
}

impl IsoProfilePoint {
    pub fn new(set_size: usize, boundary_size: usize, d: f64) -> Result<Self> {
        if d.is_nan() || d < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "isoperimetric dimension must be >= 1, got {d}"
            )));
        }
        if set_size == 0 {
            return Err(Error::Empty("witness set"));
        }
        if boundary_size == 0 {
            return Err(Error::InvalidParameter(format!(
                "witness set of size {set_size} has empty boundary"
            )));
        }
        let ratio = (set_size as f64).powf((d - 1.0) / d) / boundary_size as f64;
        Ok(IsoProfilePoint {
            set_size,
            boundary_size,
            d,
            ratio,
        })
    }
}

/// Largest witnessed ratio for one `d`: a lower bound on any `IS_d` constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub d: f64,
    pub kappa_lower_bound: f64,
    pub witnesses: usize,
    pub points: Vec<IsoProfilePoint>,
}

pub fn is_d_kappa(g: &dyn GraphOracle, d: f64, family: &[Vec<VertexKey>]) -> Result<KappaEstimate> {
    if family.is_empty() {
        return Err(Error::Empty("witness family"));
    }
    let mut points = Vec::with_capacity(family.len());
    for set in family {
        let set: HashSet<VertexKey> = set.iter().cloned().collect();
        points.push(IsoProfilePoint::new(set.len(), edge_boundary(g, &set), d)?);
    }
    let kappa = points.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(KappaEstimate {
        d,
        kappa_lower_bound: kappa,
        witnesses: points.len(),
        points,
    })
}

/// Balls `B_1..B_rmax` around the origin plus `random_sets` connected sets
/// grown by BFS from random seeds in `B_{rmax/2}`, with log-spaced sizes
/// up to `|B_rmax|`.
pub fn default_family(
    g: &dyn GraphOracle,
    rmax: usize,
    random_sets: usize,
    seed: u64,
    budget: usize,
) -> Result<Vec<Vec<VertexKey>>> {
    if rmax == 0 {
        return Err(Error::InvalidParameter("rmax must be positive".into()));
    }
    let big = ball(g, &g.origin(), rmax, budget)?;
    let mut family: Vec<Vec<VertexKey>> = (1..=rmax)
        .map(|r| {
            (0..big.len())
                .filter(|&i| big.depth(i) <= r)
                .map(|i| big.key(i).clone())
                .collect()
        })
        .collect();
    let seeds: Vec<usize> = (0..big.len()).filter(|&i| big.depth(i) <= rmax / 2).collect();
    let max_size = big.len().max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random_sets {
        let frac = if random_sets > 1 {
            k as f64 / (random_sets - 1) as f64
        } else {
            1.0
        };
        let size = ((max_size as f64).powf(frac).round() as usize).clamp(1, max_size);
        let start = big
            .key(*seeds.choose(&mut rng).expect("ball contains its center"))
            .clone();
        family.push(bfs_grown_set(g, &start, size, &mut rng, budget)?);
    }
    Ok(family)
}

/// Connected set of `size` vertices grown breadth-first from `start`, with
/// neighbor order shuffled so repeated calls explore different shapes.
fn bfs_grown_set(
    g: &dyn GraphOracle,
    start: &VertexKey,
    size: usize,
    rng: &mut impl Rng,
    budget: usize,
) -> Result<Vec<VertexKey>> {
    let mut seen: HashSet<VertexKey> = HashSet::from([start.clone()]);
    let mut out = vec![start.clone()];
    let mut head = 0;
    while out.len() < size && head < out.len() {
        let mut nbrs = g.neighbors(&out[head]);
        nbrs.shuffle(rng);
        for w in nbrs {
            if out.len() >= size {
                break;
            }
            if seen.insert(w.clone()) {
                out.push(w);
                if out.len() > budget {
                    return Err(Error::BudgetExceeded {
                        limit: budget,
                        reached: out.len(),
                    });
                }
            }
        }
        head += 1;
    }
    Ok(out)
}

/// `|B_R|` for `R = 0..=rmax` around `center`.
pub fn ball_sizes(g: &dyn GraphOracle, center: &VertexKey, rmax: usize, budget: usize) -> Result<Vec<usize>> {
    let b = ball(g, center, rmax, budget)?;
    let mut counts = vec![0usize; rmax + 1];
    for i in 0..b.len() {
        counts[b.depth(i)] += 1;
    }
    let mut acc = 0;
    Ok(counts
        .into_iter()
        .map(|c| {
            acc += c;
            acc
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// Least-squares slope of `log |B_R|` against `log R`.
    pub exponent: f64,
    /// Half-width of the 95% normal-approximation interval on the slope.
    pub half_width_95: f64,
    pub poly_rss: f64,
    /// Residual of regressing `log |B_R|` on `R`.
    pub exp_rss: f64,
    /// Set when the exponential fit's residual is below half the polynomial one.
    pub superpolynomial: bool,
    pub sizes: Vec<(usize, usize)>,
}

/// Ratio of exponential to polynomial residuals below which growth is
/// flagged superpolynomial.
pub const SUPERPOLY_RATIO: f64 = 0.5;

struct LinearFit {
    slope: f64,
    rss: f64,
    slope_se: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_se = if xs.len() > 2 {
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LinearFit { slope, rss, slope_se }
}

/// Fits the volume growth exponent over `R in 2..=rmax`.
pub fn growth_exponent(g: &dyn GraphOracle, rmax: usize, budget: usize) -> Result<GrowthFit> {
    if rmax < 3 {
        return Err(Error::InvalidParameter(format!(
            "growth fit needs rmax >= 3, got {rmax}"
        )));
    }
    let sizes = ball_sizes(g, &g.origin(), rmax, budget)?;
    let rs: Vec<usize> = (2..=rmax).collect();
    let log_v: Vec<f64> = rs.iter().map(|&r| (sizes[r] as f64).ln()).collect();
    let log_r: Vec<f64> = rs.iter().map(|&r| (r as f64).ln()).collect();
    let lin_r: Vec<f64> = rs.iter().map(|&r| r as f64).collect();
    let poly = least_squares(&log_r, &log_v);
    let expo = least_squares(&lin_r, &log_v);
    Ok(GrowthFit {
        exponent: poly.slope,
        half_width_95: 1.96 * poly.slope_se,
        poly_rss: poly.rss,
        exp_rss: expo.rss,
        superpolynomial: expo.rss < SUPERPOLY_RATIO * poly.rss,
        sizes: rs.iter().map(|&r| (r, sizes[r])).collect(),
    })
}

/// CSV with one [`IsoProfilePoint`] per row.
pub fn write_profile_csv<W: Write>(points: &[IsoProfilePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON summary of an isoperimetric run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoSummary {
    pub note: String,
    pub kappa: Vec<KappaEstimate>,
    pub growth: GrowthFit,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{grid_graph, line_graph, DEFAULT_BUDGET};

    fn interval(a: i64, b: i64) -> Vec<VertexKey> {
        (a..b).map(VertexKey::int).collect()
    }

    #[test]
    fn boundary_examples() {
        let line = line_graph();
        let set: HashSet<VertexKey> = interval(0, 7).into_iter().collect();
        assert_eq!(edge_boundary(line.as_ref(), &set), 2);
        let grid = grid_graph(2).unwrap();
        let origin: HashSet<VertexKey> = HashSet::from([grid.origin()]);
        assert_eq!(edge_boundary(grid.as_ref(), &origin), 4);
    }

    #[test]
    fn kappa_examples() {
        let line = line_graph();
        let fam: Vec<Vec<VertexKey>> = (1..10).map(|n| interval(0, n)).collect();
        assert_eq!(is_d_kappa(line.as_ref(), 1.0, &fam).unwrap().kappa_lower_bound, 0.5);

        let grid = grid_graph(2).unwrap();
        let boxes: Vec<Vec<VertexKey>> = (1..6)
            .map(|k| {
                let mut s = Vec::new();
                for x in 0..k {
                    for y in 0..k {
                        s.push(VertexKey::point(&[x, y]));
                    }
                }
                s
            })
            .collect();
        let est = is_d_kappa(grid.as_ref(), 2.0, &boxes).unwrap();
        assert!((est.kappa_lower_bound - 0.25).abs() < 1e-15);
        assert!(is_d_kappa(grid.as_ref(), 2.0, &[]).is_err());
    }

    #[test]
    fn growth_of_line() {
        let fit = growth_exponent(line_graph().as_ref(), 20, DEFAULT_BUDGET).unwrap();
        assert!((fit.exponent - 1.0).abs() <= 0.1, "{}", fit.exponent);
        assert!(!fit.superpolynomial);
        assert_eq!(fit.sizes[0], (2, 5));
    }

    #[test]
    fn ball_sizes_grid() {
        let g = grid_graph(2).unwrap();
        let s = ball_sizes(g.as_ref(), &g.origin(), 6, DEFAULT_BUDGET).unwrap();
        for (r, &n) in s.iter().enumerate() {
            assert_eq!(n, 2 * r * r + 2 * r + 1);
        }
    }

    #[test]
    fn default_family_is_reproducible() {
        let g = grid_graph(2).unwrap();
        let a = default_family(g.as_ref(), 5, 6, 7, DEFAULT_BUDGET).unwrap();
        let b = default_family(g.as_ref(), 5, 6, 7, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 11);
        assert_eq!(a[4].len(), 61);
    }
}
