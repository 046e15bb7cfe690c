//! Standard graph families used as space graphs, lamp graphs and contrast cases.

use std::fmt;
use std::sync::Arc;

use super::oracle::normalize;
use super::{GraphOracle, Oracle, VertexKey};
use crate::error::{Error, Result};

fn scalar(v: &VertexKey) -> Option<i64> {
    match v {
        VertexKey::Int(c) if c.len() == 1 => Some(c[0]),
        _ => None,
    }
}

/// The bi-infinite line `Z`.
#[derive(Debug, Clone, Copy)]
pub struct Line;

impl GraphOracle for Line {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let x = scalar(v).expect("line vertex");
        vec![VertexKey::int(x - 1), VertexKey::int(x + 1)]
    }
    fn origin(&self) -> VertexKey {
        VertexKey::int(0)
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(2)
    }
    fn contains(&self, v: &VertexKey) -> bool {
        scalar(v).is_some()
    }
    fn name(&self) -> String {
        "line".into()
    }
}

/// Cycle on `0..n`.
#[derive(Debug, Clone, Copy)]
pub struct Cycle {
    n: i64,
}

impl GraphOracle for Cycle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let x = scalar(v).expect("cycle vertex");
        let nbrs = vec![
            VertexKey::int((x + self.n - 1) % self.n),
            VertexKey::int((x + 1) % self.n),
        ];
        normalize(v, nbrs)
    }
    fn origin(&self) -> VertexKey {
        VertexKey::int(0)
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(2)
    }
    fn contains(&self, v: &VertexKey) -> bool {
        scalar(v).is_some_and(|x| (0..self.n).contains(&x))
    }
    fn name(&self) -> String {
        format!("cycle({})", self.n)
    }
}

/// Path on `0..n` (n vertices, n-1 edges).
#[derive(Debug, Clone, Copy)]
pub struct PathGraph {
    n: i64,
}

impl GraphOracle for PathGraph {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let x = scalar(v).expect("path vertex");
        let mut out = Vec::with_capacity(2);
        if x > 0 {
            out.push(VertexKey::int(x - 1));
        }
        if x + 1 < self.n {
            out.push(VertexKey::int(x + 1));
        }
        out
    }
    fn origin(&self) -> VertexKey {
        VertexKey::int(0)
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(if self.n > 2 { 2 } else { 1 })
    }
    fn contains(&self, v: &VertexKey) -> bool {
        scalar(v).is_some_and(|x| (0..self.n).contains(&x))
    }
    fn name(&self) -> String {
        format!("path({})", self.n)
    }
}

/// The lattice `Z^d` with unit steps.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    d: usize,
}

impl GraphOracle for Grid {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let VertexKey::Int(c) = v else {
            panic!("grid vertex expected")
        };
        let mut out = Vec::with_capacity(2 * self.d);
        for i in 0..self.d {
            for step in [-1, 1] {
                let mut w = c.clone();
                w[i] += step;
                out.push(VertexKey::Int(w));
            }
        }
        out.sort();
        out
    }
    fn origin(&self) -> VertexKey {
        VertexKey::Int(vec![0; self.d])
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(2 * self.d)
    }
    fn contains(&self, v: &VertexKey) -> bool {
        matches!(v, VertexKey::Int(c) if c.len() == self.d)
    }
    fn name(&self) -> String {
        format!("grid({})", self.d)
    }
}

/// Cayley graph of the free group on `rank` generators.
#[derive(Debug, Clone, Copy)]
pub struct FreeGroup {
    rank: i32,
}

impl GraphOracle for FreeGroup {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let VertexKey::Word(w) = v else {
            panic!("word vertex expected")
        };
        let mut out = Vec::with_capacity(2 * self.rank as usize);
        for g in 1..=self.rank {
            for l in [g, -g] {
                let mut next = w.clone();
                if next.last() == Some(&-l) {
                    next.pop();
                } else {
                    next.push(l);
                }
                out.push(VertexKey::Word(next));
            }
        }
        out.sort();
        out
    }
    fn origin(&self) -> VertexKey {
        VertexKey::Word(Vec::new())
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(2 * self.rank as usize)
    }
    fn contains(&self, v: &VertexKey) -> bool {
        matches!(v, VertexKey::Word(w)
            if w.iter().all(|&l| l != 0 && l.abs() <= self.rank)
                && w.windows(2).all(|p| p[0] != -p[1]))
    }
    fn name(&self) -> String {
        format!("free_group({})", self.rank)
    }
}

/// Star `K_{1,leaves}`: center 0, leaves `1..=leaves`.
#[derive(Debug, Clone, Copy)]
pub struct Star {
    leaves: i64,
}

impl GraphOracle for Star {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        match scalar(v).expect("star vertex") {
            0 => (1..=self.leaves).map(VertexKey::int).collect(),
            _ => vec![VertexKey::int(0)],
        }
    }
    fn origin(&self) -> VertexKey {
        VertexKey::int(0)
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(self.leaves.max(1) as usize)
    }
    fn contains(&self, v: &VertexKey) -> bool {
        scalar(v).is_some_and(|x| (0..=self.leaves).contains(&x))
    }
    fn name(&self) -> String {
        format!("star({})", self.leaves)
    }
}

/// Two-ended caterpillar: spine `Z` at `(i,0)`, leaves `(i,1..=leaves)`
/// hanging off each spine vertex.
#[derive(Debug, Clone, Copy)]
pub struct Caterpillar {
    leaves: i64,
}

impl Caterpillar {
    pub fn leaves(&self) -> i64 {
        self.leaves
    }
}

impl GraphOracle for Caterpillar {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let VertexKey::Int(c) = v else {
            panic!("caterpillar vertex expected")
        };
        let (i, j) = (c[0], c[1]);
        if j == 0 {
            let mut out = vec![VertexKey::point(&[i - 1, 0]), VertexKey::point(&[i + 1, 0])];
            out.extend((1..=self.leaves).map(|l| VertexKey::point(&[i, l])));
            out.sort();
            out
        } else {
            vec![VertexKey::point(&[i, 0])]
        }
    }
    fn origin(&self) -> VertexKey {
        VertexKey::point(&[0, 0])
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(2 + self.leaves as usize)
    }
    fn contains(&self, v: &VertexKey) -> bool {
        matches!(v, VertexKey::Int(c) if c.len() == 2 && (0..=self.leaves).contains(&c[1]))
    }
    fn name(&self) -> String {
        format!("caterpillar({})", self.leaves)
    }
}

/// A generator acting on vertex keys from the right.
type Action = Arc<dyn Fn(&VertexKey) -> Option<VertexKey> + Send + Sync>;

#[derive(Clone)]
pub struct Generator {
    label: String,
    act: Action,
}

impl Generator {
    pub fn new(
        label: impl Into<String>,
        act: impl Fn(&VertexKey) -> Option<VertexKey> + Send + Sync + 'static,
    ) -> Self {
        Generator {
            label: label.into(),
            act: Arc::new(act),
        }
    }

    /// Translation by `delta` on `Z^d`.
    pub fn translation(delta: Vec<i64>) -> Self {
        let label = format!("{:?}", delta);
        Generator::new(label, move |v| match v {
            VertexKey::Int(c) if c.len() == delta.len() => {
                Some(VertexKey::Int(c.iter().zip(&delta).map(|(a, b)| a + b).collect()))
            }
            _ => None,
        })
    }

    pub fn apply(&self, v: &VertexKey) -> Option<VertexKey> {
        (self.act)(v)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({})", self.label)
    }
}

/// Cayley graph given by generator actions.
#[derive(Debug, Clone)]
pub struct Cayley {
    origin: VertexKey,
    generators: Vec<Generator>,
}

impl GraphOracle for Cayley {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let nbrs = self.generators.iter().filter_map(|g| g.apply(v)).collect();
        normalize(v, nbrs)
    }
    fn origin(&self) -> VertexKey {
        self.origin.clone()
    }
    fn degree_bound(&self) -> Option<usize> {
        Some(self.generators.len())
    }
    fn contains(&self, v: &VertexKey) -> bool {
        self.generators.iter().all(|g| g.apply(v).is_some())
    }
    fn name(&self) -> String {
        let labels: Vec<&str> = self.generators.iter().map(|g| g.label()).collect();
        format!("cayley({})", labels.join(","))
    }
}

pub fn line_graph() -> Oracle {
    Arc::new(Line)
}

pub fn cycle_graph(n: usize) -> Result<Oracle> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    Ok(Arc::new(Cycle { n: n as i64 }))
}

pub fn path_graph(n: usize) -> Result<Oracle> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs n >= 1".into()));
    }
    Ok(Arc::new(PathGraph { n: n as i64 }))
}

pub fn grid_graph(d: usize) -> Result<Oracle> {
    if d == 0 {
        return Err(Error::InvalidParameter("grid needs d >= 1".into()));
    }
    Ok(Arc::new(Grid { d }))
}

pub fn free_group_graph(rank: usize) -> Result<Oracle> {
    if rank == 0 || rank > 26 {
        return Err(Error::InvalidParameter(format!(
            "free group rank must be in 1..=26, got {rank}"
        )));
    }
    Ok(Arc::new(FreeGroup { rank: rank as i32 }))
}

pub fn star_graph(leaves: usize) -> Result<Oracle> {
    if leaves == 0 {
        return Err(Error::InvalidParameter("star needs at least one leaf".into()));
    }
    Ok(Arc::new(Star { leaves: leaves as i64 }))
}

pub fn caterpillar_graph(leaves: usize) -> Result<Oracle> {
    if leaves == 0 {
        return Err(Error::InvalidParameter(
            "caterpillar needs at least one leaf per spine vertex".into(),
        ));
    }
    Ok(Arc::new(Caterpillar { leaves: leaves as i64 }))
}

/// Cayley graph from generator actions. The set must be nonempty, act
/// without fixed points and be closed under inverses; both are checked on
/// the origin and its neighbors.
pub fn cayley_graph(origin: VertexKey, generators: Vec<Generator>) -> Result<Oracle> {
    if generators.is_empty() {
        return Err(Error::InvalidParameter("empty generator set".into()));
    }
    let mut probes = vec![origin.clone()];
    probes.extend(generators.iter().filter_map(|g| g.apply(&origin)));
    for v in &probes {
        for g in &generators {
            let w = g
                .apply(v)
                .ok_or_else(|| Error::UnknownVertex(v.clone(), format!("generator {}", g.label())))?;
            if &w == v {
                return Err(Error::InvalidParameter(format!("generator {} fixes {v}", g.label())));
            }
            if !generators.iter().any(|h| h.apply(&w).as_ref() == Some(v)) {
                return Err(Error::InvalidParameter(format!(
                    "generator set not closed under inverses: no inverse for {}",
                    g.label()
                )));
            }
        }
    }
    Ok(Arc::new(Cayley { origin, generators }))
}

/// Cayley graph of `Z^d` for the given translation vectors.
pub fn abelian_cayley_graph(translations: Vec<Vec<i64>>) -> Result<Oracle> {
    let d = translations.first().map(Vec::len).unwrap_or(0);
    if translations.iter().any(|t| t.len() != d || d == 0) {
        return Err(Error::InvalidParameter(
            "translations must share a positive dimension".into(),
        ));
    }
    let gens = translations.into_iter().map(Generator::translation).collect();
    cayley_graph(VertexKey::Int(vec![0; d]), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::check_oracle;

    #[test]
    fn line_neighbors() {
        let g = line_graph();
        assert_eq!(
            g.neighbors(&VertexKey::int(0)),
            vec![VertexKey::int(-1), VertexKey::int(1)]
        );
    }

    #[test]
    fn cycle_three() {
        let g = cycle_graph(3).unwrap();
        assert_eq!(
            g.neighbors(&VertexKey::int(0)),
            vec![VertexKey::int(1), VertexKey::int(2)]
        );
        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn free_group_degree() {
        let g = free_group_graph(2).unwrap();
        assert_eq!(g.degree_bound(), Some(4));
        assert_eq!(g.degree(&g.origin()), 4);
        assert_eq!(g.degree(&VertexKey::word(&[1, 2])), 4);
    }

    #[test]
    fn families_pass_oracle_check() {
        let graphs: Vec<Oracle> = vec![
            line_graph(),
            cycle_graph(5).unwrap(),
            path_graph(4).unwrap(),
            grid_graph(3).unwrap(),
            free_group_graph(2).unwrap(),
            star_graph(3).unwrap(),
            caterpillar_graph(2).unwrap(),
            abelian_cayley_graph(vec![vec![1, 0], vec![-1, 0], vec![1, 1], vec![-1, -1]]).unwrap(),
        ];
        for g in graphs {
            assert!(check_oracle(g.as_ref(), 4).is_empty(), "{}", g.name());
        }
    }

    #[test]
    fn cayley_rejects_bad_generators() {
        assert!(cayley_graph(VertexKey::int(0), vec![]).is_err());
        assert!(abelian_cayley_graph(vec![vec![1]]).is_err());
        assert!(abelian_cayley_graph(vec![vec![0], vec![0]]).is_err());
        let z = abelian_cayley_graph(vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(z.degree_bound(), Some(2));
    }
}
