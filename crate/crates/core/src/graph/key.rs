use std::fmt;

/// Canonical encoding of a vertex of an implicit graph.
///
/// Equality of keys is equality of vertices: every constructor in this crate
/// produces the canonical form, and the derived `Ord` is the order used to
/// sort neighbor lists and lamp supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKey {
    /// A point of `Z^d`; also used for paths, cycles, stars and caterpillars.
    Int(Vec<i64>),
    /// A freely reduced word. Letter `g` (1-based) is the generator, `-g` its inverse.
    Word(Vec<i32>),
    /// A lamplighter vertex: a position in the space graph plus the lamps
    /// that differ from the root, sorted by position with no duplicates.
    Lamp {
        base: Box<VertexKey>,
        lamps: Vec<(VertexKey, VertexKey)>,
    },
    /// A vertex of a direct product.
    Pair(Box<VertexKey>, Box<VertexKey>),
}

impl VertexKey {
    pub fn int(x: i64) -> Self {
        VertexKey::Int(vec![x])
    }

    pub fn point(coords: &[i64]) -> Self {
        VertexKey::Int(coords.to_vec())
    }

    pub fn word(letters: &[i32]) -> Self {
        VertexKey::Word(letters.to_vec())
    }

    pub fn pair(left: VertexKey, right: VertexKey) -> Self {
        VertexKey::Pair(Box::new(left), Box::new(right))
    }

    /// Builds a lamplighter key, dropping entries equal to `root` and
    /// sorting the support. Later entries for the same position win.
    pub fn lamp(base: VertexKey, lamps: Vec<(VertexKey, VertexKey)>, root: &VertexKey) -> Self {
        let mut support: Vec<(VertexKey, VertexKey)> = Vec::with_capacity(lamps.len());
        for (pos, val) in lamps {
            match support.iter_mut().find(|(p, _)| *p == pos) {
                Some(entry) => entry.1 = val,
                None => support.push((pos, val)),
            }
        }
        support.retain(|(_, v)| v != root);
        support.sort();
        VertexKey::Lamp {
            base: Box::new(base),
            lamps: support,
        }
    }

    /// First integer coordinate of the "space" part of the key: the key
    /// itself for `Int`, the base for `Lamp`, the left factor for `Pair`.
    pub fn base_coordinate(&self) -> Option<i64> {
        match self {
            VertexKey::Int(c) => c.first().copied(),
            VertexKey::Word(_) => None,
            VertexKey::Lamp { base, .. } => base.base_coordinate(),
            VertexKey::Pair(left, _) => left.base_coordinate(),
        }
    }

    /// Checks the lamp-support invariants recursively.
    pub fn is_canonical(&self, root: Option<&VertexKey>) -> bool {
        match self {
            VertexKey::Int(_) => true,
            VertexKey::Word(w) => w.iter().all(|&l| l != 0) && w.windows(2).all(|p| p[0] != -p[1]),
            VertexKey::Lamp { base, lamps } => {
                base.is_canonical(None)
                    && lamps.windows(2).all(|p| p[0].0 < p[1].0)
                    && lamps.iter().all(|(_, v)| root != Some(v))
            }
            VertexKey::Pair(l, r) => l.is_canonical(None) && r.is_canonical(None),
        }
    }
}

fn letter(l: i32) -> char {
    let idx = (l.unsigned_abs() - 1) as u8;
    let c = (b'a' + idx % 26) as char;
    if l < 0 {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKey::Int(c) if c.len() == 1 => write!(f, "{}", c[0]),
            VertexKey::Int(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            VertexKey::Word(w) if w.is_empty() => write!(f, "e"),
            VertexKey::Word(w) => w.iter().try_for_each(|&l| write!(f, "{}", letter(l))),
            VertexKey::Lamp { base, lamps } => {
                write!(f, "[{base};")?;
                for (i, (pos, val)) in lamps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{pos}:{val}")?;
                }
                write!(f, "]")
            }
            VertexKey::Pair(l, r) => write!(f, "<{l},{r}>"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lamp_key_drops_root_and_sorts() {
        let root = VertexKey::int(0);
        let k = VertexKey::lamp(
            VertexKey::int(0),
            vec![
                (VertexKey::int(3), VertexKey::int(1)),
                (VertexKey::int(-2), VertexKey::int(1)),
                (VertexKey::int(1), VertexKey::int(0)),
            ],
            &root,
        );
        match &k {
            VertexKey::Lamp { lamps, .. } => {
                assert_eq!(lamps.len(), 2);
                assert_eq!(lamps[0].0, VertexKey::int(-2));
            }
            _ => unreachable!(),
        }
        assert!(k.is_canonical(Some(&root)));
    }

    #[test]
    fn equal_keys_from_different_orders() {
        let root = VertexKey::int(0);
        let a = VertexKey::lamp(
            VertexKey::int(1),
            vec![
                (VertexKey::int(1), VertexKey::int(1)),
                (VertexKey::int(2), VertexKey::int(1)),
            ],
            &root,
        );
        let b = VertexKey::lamp(
            VertexKey::int(1),
            vec![
                (VertexKey::int(2), VertexKey::int(1)),
                (VertexKey::int(1), VertexKey::int(1)),
            ],
            &root,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn display_forms() {
        assert_eq!(VertexKey::int(-3).to_string(), "-3");
        assert_eq!(VertexKey::point(&[1, 2]).to_string(), "(1,2)");
        assert_eq!(VertexKey::word(&[]).to_string(), "e");
        assert_eq!(VertexKey::word(&[1, -2]).to_string(), "aB");
        let root = VertexKey::int(0);
        let k = VertexKey::lamp(VertexKey::int(0), vec![(VertexKey::int(0), VertexKey::int(1))], &root);
        assert_eq!(k.to_string(), "[0;0:1]");
        assert_eq!(
            VertexKey::pair(VertexKey::int(1), VertexKey::int(2)).to_string(),
            "<1,2>"
        );
    }
}
