//! JSON grammar for graph families, e.g.
//! `{"family":"lamplighter","lamp":{"family":"path","n":2},"space":{"family":"line"},"root":0}`.

use serde::{Deserialize, Serialize};

use super::constructions::{direct_product, k_fuzz, lamplighter};
use super::families::*;
use super::{Oracle, VertexKey};
use crate::error::{Error, Result};

/// A vertex written in descriptor files: an integer, an integer tuple or a
/// word such as `"aB"` (uppercase letters are inverses).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KeySpec {
    Scalar(i64),
    Point(Vec<i64>),
    Word(String),
}

impl KeySpec {
    pub fn to_key(&self) -> Result<VertexKey> {
        match self {
            KeySpec::Scalar(x) => Ok(VertexKey::int(*x)),
            KeySpec::Point(c) => Ok(VertexKey::point(c)),
            KeySpec::Word(s) if s == "e" => Ok(VertexKey::word(&[])),
            KeySpec::Word(s) => {
                let letters = s
                    .chars()
                    .map(|c| {
                        if c.is_ascii_lowercase() {
                            Ok(c as i32 - 'a' as i32 + 1)
                        } else if c.is_ascii_uppercase() {
                            Ok(-(c as i32 - 'A' as i32 + 1))
                        } else {
                            Err(Error::Descriptor(format!("bad letter {c:?} in word {s:?}")))
                        }
                    })
                    .collect::<Result<Vec<i32>>>()?;
                Ok(VertexKey::Word(letters))
            }
        }
    }
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphDescriptor {
    Line,
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Grid {
        d: usize,
    },
    FreeGroup {
        rank: usize,
    },
    Star {
        leaves: usize,
    },
    Caterpillar {
        #[serde(default = "one")]
        leaves: usize,
    },
    /// Cayley graph of `Z^d` generated by the listed translations.
    Cayley {
        generators: Vec<Vec<i64>>,
    },
    Lamplighter {
        lamp: Box<GraphDescriptor>,
        space: Box<GraphDescriptor>,
        #[serde(default)]
        root: Option<KeySpec>,
    },
    Product {
        left: Box<GraphDescriptor>,
        right: Box<GraphDescriptor>,
    },
    Fuzz {
        base: Box<GraphDescriptor>,
        k: usize,
    },
}

impl GraphDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn build(&self) -> Result<Oracle> {
        match self {
            GraphDescriptor::Line => Ok(line_graph()),
            GraphDescriptor::Cycle { n } => cycle_graph(*n),
            GraphDescriptor::Path { n } => path_graph(*n),
            GraphDescriptor::Grid { d } => grid_graph(*d),
            GraphDescriptor::FreeGroup { rank } => free_group_graph(*rank),
            GraphDescriptor::Star { leaves } => star_graph(*leaves),
            GraphDescriptor::Caterpillar { leaves } => caterpillar_graph(*leaves),
            GraphDescriptor::Cayley { generators } => abelian_cayley_graph(generators.clone()),
            GraphDescriptor::Lamplighter { lamp, space, root } => {
                let lamp = lamp.build()?;
                let root = match root {
                    Some(spec) => spec.to_key()?,
                    None => lamp.origin(),
                };
                lamplighter(lamp, space.build()?, root)
            }
            GraphDescriptor::Product { left, right } => Ok(direct_product(left.build()?, right.build()?)),
            GraphDescriptor::Fuzz { base, k } => k_fuzz(base.build()?, *k),
        }
    }
}

/// A neighbor of the origin to pair with it as a second start: for
/// lamplighters the lamp move at the origin, otherwise the first neighbor.
pub fn adjacent_start(g: &Oracle) -> Option<VertexKey> {
    let o = g.origin();
    let nbrs = g.neighbors(&o);
    if let VertexKey::Lamp { base, .. } = &o {
        if let Some(w) = nbrs
            .iter()
            .find(|w| matches!(w, VertexKey::Lamp { base: b, .. } if b == base))
        {
            return Some(w.clone());
        }
    }
    nbrs.into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lamplighter_example() {
        let d = GraphDescriptor::parse(
            r#"{"family":"lamplighter","lamp":{"family":"path","n":2},"space":{"family":"line"},"root":0}"#,
        )
        .unwrap();
        let g = d.build().unwrap();
        assert_eq!(g.degree(&g.origin()), 3);
        assert_eq!(g.name(), "lamplighter(path(2),line)");
        assert_eq!(GraphDescriptor::parse(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn rejects_unknown_family() {
        let err = GraphDescriptor::parse(r#"{"family":"moebius"}"#).unwrap_err();
        assert!(matches!(err, Error::Descriptor(_)));
    }

    #[test]
    fn word_keys() {
        assert_eq!(KeySpec::Word("aB".into()).to_key().unwrap(), VertexKey::word(&[1, -2]));
        assert!(KeySpec::Word("a1".into()).to_key().is_err());
    }

    #[test]
    fn adjacent_start_toggles_lamp() {
        let g = GraphDescriptor::parse(
            r#"{"family":"lamplighter","lamp":{"family":"path","n":2},"space":{"family":"line"}}"#,
        )
        .unwrap()
        .build()
        .unwrap();
        let s = adjacent_start(&g).unwrap();
        assert_eq!(s.to_string(), "[0;0:1]");
    }
}
