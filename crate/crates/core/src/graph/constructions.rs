//! Graph constructions on top of existing oracles: lamplighters, direct
//! products and k-fuzz.

use std::collections::HashSet;
use std::sync::Arc;

use super::oracle::normalize;
use super::{GraphOracle, Oracle, VertexKey};
use crate::error::{Error, Result};

/// Lamplighter graph `L ≀ H` over lamp graph `L` and space graph `H`.
///
/// From `(x, f)` one either moves `x` along an edge of `H` keeping `f`, or
/// stays at `x` and moves the lamp `f(x)` along an edge of `L`.
#[derive(Debug, Clone)]
pub struct Lamplighter {
    lamp: Oracle,
    space: Oracle,
    root: VertexKey,
}

impl Lamplighter {
    pub fn lamp_graph(&self) -> &Oracle {
        &self.lamp
    }

    pub fn space_graph(&self) -> &Oracle {
        &self.space
    }

    pub fn root(&self) -> &VertexKey {
        &self.root
    }
}

fn lamp_at<'a>(lamps: &'a [(VertexKey, VertexKey)], x: &VertexKey) -> Option<&'a VertexKey> {
    lamps.binary_search_by(|(p, _)| p.cmp(x)).ok().map(|i| &lamps[i].1)
}

fn with_lamp(
    lamps: &[(VertexKey, VertexKey)],
    x: &VertexKey,
    val: VertexKey,
    root: &VertexKey,
) -> Vec<(VertexKey, VertexKey)> {
    let mut out = lamps.to_vec();
    match out.binary_search_by(|(p, _)| p.cmp(x)) {
        Ok(i) if &val == root => {
            out.remove(i);
        }
        Ok(i) => out[i].1 = val,
        Err(_) if &val == root => {}
        Err(i) => out.insert(i, (x.clone(), val)),
    }
    out
}

impl GraphOracle for Lamplighter {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let VertexKey::Lamp { base, lamps } = v else {
            panic!("lamplighter vertex expected, got {v}")
        };
        let mut out = Vec::new();
        for x in self.space.neighbors(base) {
            out.push(VertexKey::Lamp {
                base: Box::new(x),
                lamps: lamps.clone(),
            });
        }
        let current = lamp_at(lamps, base).unwrap_or(&self.root);
        for y in self.lamp.neighbors(current) {
            out.push(VertexKey::Lamp {
                base: base.clone(),
                lamps: with_lamp(lamps, base, y, &self.root),
            });
        }
        out.sort();
        out
    }

    fn origin(&self) -> VertexKey {
        VertexKey::Lamp {
            base: Box::new(self.space.origin()),
            lamps: Vec::new(),
        }
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.space.degree_bound()? + self.lamp.degree_bound()?)
    }

    fn contains(&self, v: &VertexKey) -> bool {
        match v {
            VertexKey::Lamp { base, lamps } => {
                self.space.contains(base)
                    && lamps.windows(2).all(|p| p[0].0 < p[1].0)
                    && lamps
                        .iter()
                        .all(|(x, y)| self.space.contains(x) && self.lamp.contains(y) && y != &self.root)
            }
            _ => false,
        }
    }

    fn name(&self) -> String {
        format!("lamplighter({},{})", self.lamp.name(), self.space.name())
    }
}

/// Builds `L ≀ H` with lamp root `root_o`.
pub fn lamplighter(lamp: Oracle, space: Oracle, root_o: VertexKey) -> Result<Oracle> {
    if !lamp.contains(&root_o) {
        return Err(Error::UnknownVertex(root_o, lamp.name()));
    }
    if lamp.neighbors(&root_o).is_empty() {
        return Err(Error::InvalidParameter(
            "lamp graph needs at least one edge at the root".into(),
        ));
    }
    Ok(Arc::new(Lamplighter {
        lamp,
        space,
        root: root_o,
    }))
}

/// Direct product: `(x1,x2) ~ (y1,y2)` when exactly one coordinate moves
/// along an edge and the other stays fixed.
#[derive(Debug, Clone)]
pub struct DirectProduct {
    left: Oracle,
    right: Oracle,
}

impl GraphOracle for DirectProduct {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let VertexKey::Pair(a, b) = v else {
            panic!("pair vertex expected, got {v}")
        };
        let mut out: Vec<VertexKey> = self
            .left
            .neighbors(a)
            .into_iter()
            .map(|x| VertexKey::Pair(Box::new(x), b.clone()))
            .collect();
        out.extend(
            self.right
                .neighbors(b)
                .into_iter()
                .map(|y| VertexKey::Pair(a.clone(), Box::new(y))),
        );
        out.sort();
        out
    }

    fn origin(&self) -> VertexKey {
        VertexKey::pair(self.left.origin(), self.right.origin())
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.left.degree_bound()? + self.right.degree_bound()?)
    }

    fn contains(&self, v: &VertexKey) -> bool {
        matches!(v, VertexKey::Pair(a, b) if self.left.contains(a) && self.right.contains(b))
    }

    fn name(&self) -> String {
        format!("product({},{})", self.left.name(), self.right.name())
    }
}

pub fn direct_product(left: Oracle, right: Oracle) -> Oracle {
    Arc::new(DirectProduct { left, right })
}

/// The k-fuzz `G^[k]`: same vertices, edges between vertices at distance
/// at most `k` in `G`.
#[derive(Debug, Clone)]
pub struct KFuzz {
    base: Oracle,
    k: usize,
}

impl GraphOracle for KFuzz {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let mut seen: HashSet<VertexKey> = HashSet::new();
        seen.insert(v.clone());
        let mut frontier = vec![v.clone()];
        for _ in 0..self.k {
            let mut next = Vec::new();
            for u in &frontier {
                for w in self.base.neighbors(u) {
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        normalize(v, seen.into_iter().collect())
    }

    fn origin(&self) -> VertexKey {
        self.base.origin()
    }

    fn degree_bound(&self) -> Option<usize> {
        let d = self.base.degree_bound()?;
        // sum_{i=1..k} d (d-1)^(i-1)
        let mut total = 0usize;
        let mut layer = d;
        for _ in 0..self.k {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(d.saturating_sub(1).max(1));
        }
        Some(total)
    }

    fn contains(&self, v: &VertexKey) -> bool {
        self.base.contains(v)
    }

    fn name(&self) -> String {
        format!("fuzz({},{})", self.base.name(), self.k)
    }
}

pub fn k_fuzz(base: Oracle, k: usize) -> Result<Oracle> {
    if k == 0 {
        return Err(Error::InvalidParameter("k-fuzz needs k >= 1".into()));
    }
    Ok(Arc::new(KFuzz { base, k }))
}
