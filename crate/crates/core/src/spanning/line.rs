use std::collections::{HashMap, HashSet, VecDeque};

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{bounded_distance, FiniteGraph, GraphDescriptor, GraphOracle, VertexKey};

/// Closed-form two-way infinite enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfiniteLine {
    /// `n -> n` on `Z`.
    Integers,
    /// Caterpillar with `leaves` leaves per spine vertex: each spine vertex
    /// followed by its leaves, then the next spine vertex.
    Caterpillar { leaves: i64 },
}

impl InfiniteLine {
    pub fn at(&self, n: i64) -> VertexKey {
        match *self {
            InfiniteLine::Integers => VertexKey::int(n),
            InfiniteLine::Caterpillar { leaves } => {
                let block = leaves + 1;
                VertexKey::point(&[n.div_euclid(block), n.rem_euclid(block)])
            }
        }
    }

    pub fn position(&self, v: &VertexKey) -> Option<i64> {
        match (*self, v) {
            (InfiniteLine::Integers, VertexKey::Int(c)) if c.len() == 1 => Some(c[0]),
            (InfiniteLine::Caterpillar { leaves }, VertexKey::Int(c))
                if c.len() == 2 && (0..=leaves).contains(&c[1]) =>
            {
                Some(c[0] * (leaves + 1) + c[1])
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LineShape {
    /// Finite Hamiltonian path.
    Path(Vec<VertexKey>),
    /// Finite Hamiltonian cycle (last vertex adjacent to the first).
    Cycle(Vec<VertexKey>),
    Infinite(InfiniteLine),
}

/// An enumeration visiting every vertex once, with consecutive vertices at
/// base-graph distance at most `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningLine {
    shape: LineShape,
    k: usize,
    positions: HashMap<VertexKey, usize>,
}

impl SpanningLine {
    pub fn new(shape: LineShape, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLine("k must be >= 1".into()));
        }
        let positions: HashMap<VertexKey, usize> = match &shape {
            LineShape::Path(order) | LineShape::Cycle(order) => {
                order.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect()
            }
            LineShape::Infinite(_) => HashMap::new(),
        };
        if let LineShape::Path(order) | LineShape::Cycle(order) = &shape {
            if positions.len() != order.len() {
                return Err(Error::InvalidLine("order repeats a vertex".into()));
            }
            if order.is_empty() {
                return Err(Error::InvalidLine("empty order".into()));
            }
        }
        Ok(SpanningLine { shape, k, positions })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn shape(&self) -> &LineShape {
        &self.shape
    }

    /// Number of vertices, `None` for infinite lines.
    pub fn len(&self) -> Option<usize> {
        match &self.shape {
            LineShape::Path(o) | LineShape::Cycle(o) => Some(o.len()),
            LineShape::Infinite(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Predecessor and successor of `v` along the line.
    pub fn line_neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let mut out = Vec::with_capacity(2);
        match &self.shape {
            LineShape::Path(order) => {
                if let Some(&i) = self.positions.get(v) {
                    if i > 0 {
                        out.push(order[i - 1].clone());
                    }
                    if i + 1 < order.len() {
                        out.push(order[i + 1].clone());
                    }
                }
            }
            LineShape::Cycle(order) => {
                if let Some(&i) = self.positions.get(v) {
                    let n = order.len();
                    if n > 1 {
                        out.push(order[(i + n - 1) % n].clone());
                        out.push(order[(i + 1) % n].clone());
                    }
                }
            }
            LineShape::Infinite(rule) => {
                if let Some(n) = rule.position(v) {
                    out.push(rule.at(n - 1));
                    out.push(rule.at(n + 1));
                }
            }
        }
        out.retain(|w| w != v);
        out.sort();
        out.dedup();
        out
    }

    /// `len` consecutive vertices starting at position `from`. Finite lines
    /// clamp to their extent.
    pub fn window(&self, from: i64, len: usize) -> Vec<VertexKey> {
        match &self.shape {
            LineShape::Path(order) | LineShape::Cycle(order) => {
                let start = from.clamp(0, order.len() as i64) as usize;
                order[start..(start + len).min(order.len())].to_vec()
            }
            LineShape::Infinite(rule) => (from..from + len as i64).map(|n| rule.at(n)).collect(),
        }
    }

    /// JSON form: printed keys plus `k`. Infinite lines serialize a window
    /// of `window` vertices centered at position 0.
    pub fn to_json(&self, window: usize) -> serde_json::Value {
        let (kind, keys) = match &self.shape {
            LineShape::Path(o) => ("path", o.clone()),
            LineShape::Cycle(o) => ("cycle", o.clone()),
            LineShape::Infinite(_) => ("line", self.window(-(window as i64 / 2), window)),
        };
        json!({
            "kind": kind,
            "k": self.k,
            "order": keys.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

/// Closed-form spanning lines for the shipped families.
pub fn builtin_spanning_line(family: &GraphDescriptor) -> Result<SpanningLine> {
    match family {
        GraphDescriptor::Line => SpanningLine::new(LineShape::Infinite(InfiniteLine::Integers), 1),
        GraphDescriptor::Cycle { n } if *n >= 3 => {
            SpanningLine::new(LineShape::Cycle((0..*n as i64).map(VertexKey::int).collect()), 1)
        }
        GraphDescriptor::Path { n } if *n >= 1 => {
            SpanningLine::new(LineShape::Path((0..*n as i64).map(VertexKey::int).collect()), 1)
        }
        // leaf -> next spine vertex is the longest hop (distance 2); certified with k = 3
        GraphDescriptor::Caterpillar { leaves } if *leaves >= 1 => SpanningLine::new(
            LineShape::Infinite(InfiniteLine::Caterpillar { leaves: *leaves as i64 }),
            3,
        ),
        other => Err(Error::InvalidLine(format!(
            "no built-in spanning line for {}",
            other.to_json()
        ))),
    }
}

/// A failed spanning-line invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum LineViolation {
    Repeated(VertexKey),
    Missing(VertexKey),
    TooFar { from: VertexKey, to: VertexKey },
    NotContiguous(VertexKey),
}

fn distance_at_most(adj: &[Vec<usize>], src: usize, dst: usize, k: usize) -> bool {
    if src == dst {
        return true;
    }
    let mut depth = HashMap::from([(src, 0usize)]);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = depth[&u];
        if d == k {
            continue;
        }
        for &w in &adj[u] {
            if w == dst {
                return true;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    false
}

/// Re-verifies a finite order over the vertex indices of `g`: each vertex
/// exactly once and consecutive vertices (wrapping when `cyclic`) within
/// distance `k` in `g`.
pub fn check_finite_line(
    g: &FiniteGraph,
    order: &[usize],
    k: usize,
    cyclic: bool,
) -> std::result::Result<(), LineViolation> {
    let mut seen = vec![false; g.len()];
    for &i in order {
        if i >= g.len() || seen[i] {
            return Err(LineViolation::Repeated(VertexKey::int(i as i64)));
        }
        seen[i] = true;
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(LineViolation::Missing(g.key(i).clone()));
    }
    let adj: Vec<Vec<usize>> = (0..g.len()).map(|i| g.neighbors(i).to_vec()).collect();
    let mut pairs: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    if cyclic && order.len() > 2 {
        pairs.push((order[order.len() - 1], order[0]));
    }
    for (a, b) in pairs {
        if !distance_at_most(&adj, a, b, k) {
            return Err(LineViolation::TooFar {
                from: g.key(a).clone(),
                to: g.key(b).clone(),
            });
        }
    }
    Ok(())
}

/// Checks a finite stretch of a line against an oracle: the vertices of
/// `region` must occupy one contiguous block of line positions with no
/// repeats, and consecutive vertices in that block must be within distance
/// `k` in the oracle.
pub fn check_line_window(
    g: &dyn GraphOracle,
    line: &SpanningLine,
    region: &[VertexKey],
) -> std::result::Result<(), LineViolation> {
    let region_set: HashSet<&VertexKey> = region.iter().collect();
    if region_set.len() != region.len() {
        let mut seen = HashSet::new();
        let dup = region.iter().find(|v| !seen.insert(*v)).expect("duplicate exists");
        return Err(LineViolation::Repeated(dup.clone()));
    }
    let position = |v: &VertexKey| -> Option<i64> {
        match &line.shape {
            LineShape::Infinite(rule) => rule.position(v),
            _ => line.positions.get(v).map(|&i| i as i64),
        }
    };
    let mut positions = Vec::with_capacity(region.len());
    for v in region {
        positions.push((position(v).ok_or_else(|| LineViolation::Missing(v.clone()))?, v));
    }
    positions.sort();
    for w in positions.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(LineViolation::Repeated(w[1].1.clone()));
        }
        if w[1].0 != w[0].0 + 1 {
            return Err(LineViolation::NotContiguous(w[1].1.clone()));
        }
        if bounded_distance(g, w[0].1, w[1].1, line.k).is_none() {
            return Err(LineViolation::TooFar {
                from: w[0].1.clone(),
                to: w[1].1.clone(),
            });
        }
    }
    // the block must really be the line there: round-trip each position
    for (n, v) in &positions {
        let back = line.window(*n, 1);
        if back.first() != Some(*v) {
            return Err(LineViolation::NotContiguous((*v).clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{caterpillar_graph, cycle_graph, line_graph};

    #[test]
    fn builtin_lines() {
        let l = builtin_spanning_line(&GraphDescriptor::Line).unwrap();
        assert_eq!(l.k(), 1);
        assert_eq!(
            l.window(-1, 3),
            vec![VertexKey::int(-1), VertexKey::int(0), VertexKey::int(1)]
        );
        let c = builtin_spanning_line(&GraphDescriptor::Cycle { n: 5 }).unwrap();
        assert_eq!(
            c.line_neighbors(&VertexKey::int(0)),
            vec![VertexKey::int(1), VertexKey::int(4)]
        );
        assert!(builtin_spanning_line(&GraphDescriptor::Grid { d: 2 }).is_err());
    }

    #[test]
    fn caterpillar_order() {
        let l = builtin_spanning_line(&GraphDescriptor::Caterpillar { leaves: 1 }).unwrap();
        assert_eq!(
            l.window(0, 4),
            vec![
                VertexKey::point(&[0, 0]),
                VertexKey::point(&[0, 1]),
                VertexKey::point(&[1, 0]),
                VertexKey::point(&[1, 1])
            ]
        );
        assert_eq!(l.window(-1, 1), vec![VertexKey::point(&[-1, 1])]);
        let g = caterpillar_graph(1).unwrap();
        let region: Vec<VertexKey> = (-3..3)
            .flat_map(|i| [VertexKey::point(&[i, 0]), VertexKey::point(&[i, 1])])
            .collect();
        assert_eq!(check_line_window(g.as_ref(), &l, &region), Ok(()));
        // with k = 1 the leaf -> spine hop is too long
        let tight = SpanningLine::new(l.shape().clone(), 1).unwrap();
        assert!(matches!(
            check_line_window(g.as_ref(), &tight, &region),
            Err(LineViolation::TooFar { .. })
        ));
    }

    #[test]
    fn checker_catches_gaps_and_repeats() {
        let l = builtin_spanning_line(&GraphDescriptor::Line).unwrap();
        let line = line_graph();
        let gap = vec![VertexKey::int(0), VertexKey::int(2)];
        assert!(matches!(
            check_line_window(line.as_ref(), &l, &gap),
            Err(LineViolation::NotContiguous(_))
        ));
        let rep = vec![VertexKey::int(0), VertexKey::int(0)];
        assert!(matches!(
            check_line_window(line.as_ref(), &l, &rep),
            Err(LineViolation::Repeated(_))
        ));
        let cyc = cycle_graph(4).unwrap();
        let c = builtin_spanning_line(&GraphDescriptor::Cycle { n: 4 }).unwrap();
        let all: Vec<VertexKey> = (0..4).map(VertexKey::int).collect();
        assert_eq!(check_line_window(cyc.as_ref(), &c, &all), Ok(()));
    }

    #[test]
    fn json_form() {
        let c = builtin_spanning_line(&GraphDescriptor::Path { n: 3 }).unwrap();
        assert_eq!(c.to_json(0), json!({"kind": "path", "k": 1, "order": ["0", "1", "2"]}));
        assert!(SpanningLine::new(LineShape::Path(vec![VertexKey::int(0), VertexKey::int(0)]), 1).is_err());
    }
}
