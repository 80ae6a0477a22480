use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labelled_graph::Vertex;

/// Finite-support permutation of vertices. Fixed points are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinPerm {
    map: BTreeMap<Vertex, Vertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn times(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl FinPerm {
    pub fn identity() -> Self {
        FinPerm::default()
    }

    /// Builds from pairs `x -> p(x)`; identity pairs are dropped. Fails unless the
    /// pairs describe a bijection of their key set.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let map: BTreeMap<Vertex, Vertex> = pairs.into_iter().filter(|(a, b)| a != b).collect();
        let keys: BTreeSet<&Vertex> = map.keys().collect();
        let values: BTreeSet<&Vertex> = map.values().collect();
        if keys != values || values.len() != map.len() {
            return Err(Error::InvalidParameter("pairs do not define a permutation of their support".into()));
        }
        Ok(FinPerm { map })
    }

    pub fn cycle(points: &[Vertex]) -> Result<Self> {
        let distinct: BTreeSet<&Vertex> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::InvalidParameter("cycle with repeated points".into()));
        }
        if points.len() < 2 {
            return Ok(FinPerm::identity());
        }
        let pairs = (0..points.len()).map(|i| (points[i].clone(), points[(i + 1) % points.len()].clone()));
        FinPerm::from_pairs(pairs)
    }

    pub fn transposition(a: Vertex, b: Vertex) -> Self {
        if a == b {
            return FinPerm::identity();
        }
        let mut map = BTreeMap::new();
        map.insert(a.clone(), b.clone());
        map.insert(b, a);
        FinPerm { map }
    }

    pub fn apply(&self, x: &Vertex) -> Vertex {
        self.map.get(x).cloned().unwrap_or_else(|| x.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vertex> {
        self.map.keys()
    }

    pub fn support_len(&self) -> usize {
        self.map.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> {
        self.map.iter()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let mut map = BTreeMap::new();
        for x in self.map.keys().chain(other.map.keys()) {
            let y = self.apply(&other.apply(x));
            if y != *x {
                map.insert(x.clone(), y);
            }
        }
        FinPerm { map }
    }

    pub fn inverse(&self) -> FinPerm {
        FinPerm { map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// `p ∘ self ∘ p⁻¹`, which relabels each point `x` of a cycle as `p(x)`.
    pub fn conjugate_by(&self, p: &FinPerm) -> FinPerm {
        FinPerm { map: self.map.iter().map(|(a, b)| (p.apply(a), p.apply(b))).collect() }
    }

    /// Non-trivial cycles, each starting at its least point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<Vertex>> {
        let mut seen: BTreeSet<&Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.map.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start;
            while seen.insert(x) {
                c.push(x.clone());
                x = &self.map[x];
            }
            out.push(c);
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1, |acc, c| {
            let l = c.len() as u64;
            acc / gcd(acc, l) * l
        })
    }
}

impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for FinPerm {
    type Err = Error;

    /// Parses cycle notation such as `(o 1 *)(2 3)`; `()` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = FinPerm::identity();
        let mut rest = s;
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("bad cycle notation `{s}`")))?;
            let end = body_start.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in `{s}`")))?;
            let points = body_start[..end]
                .split_whitespace()
                .map(|t| t.parse::<Vertex>())
                .collect::<Result<Vec<_>>>()?;
            out = out.compose(&FinPerm::cycle(&points)?);
            rest = body_start[end + 1..].trim_start();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> Vertex {
        Vertex::Int(n)
    }

    #[test]
    fn parity_of_small_cycles() {
        assert_eq!(FinPerm::transposition(v(0), v(1)).parity(), Parity::Odd);
        assert_eq!(FinPerm::cycle(&[v(0), v(1), v(2)]).unwrap().parity(), Parity::Even);
        assert_eq!(FinPerm::identity().parity(), Parity::Even);
    }

    #[test]
    fn composition_order() {
        let a = FinPerm::transposition(v(0), v(1));
        let b = FinPerm::transposition(v(1), v(2));
        let ab = a.compose(&b);
        assert_eq!(ab.apply(&v(1)), v(2));
        assert_eq!(ab.apply(&v(2)), v(0));
        assert_eq!(ab.compose(&ab.inverse()), FinPerm::identity());
        assert_eq!(ab.order(), 3);
    }

    #[test]
    fn notation_roundtrip() {
        let p: FinPerm = "(o 1 *)(2 3)".parse().unwrap();
        assert_eq!(p.apply(&Vertex::Root), v(1));
        assert_eq!(p.apply(&v(1)), Vertex::Star);
        let q: FinPerm = p.to_string().parse().unwrap();
        assert_eq!(p, q);
        assert_eq!("()".parse::<FinPerm>().unwrap(), FinPerm::identity());
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(FinPerm::from_pairs(vec![(v(0), v(1))]).is_err());
        assert!(FinPerm::cycle(&[v(0), v(0)]).is_err());
    }

    #[test]
    fn conjugation_relabels() {
        let c = FinPerm::cycle(&[v(0), v(1), v(2)]).unwrap();
        let p = FinPerm::transposition(v(0), v(5));
        let d = c.conjugate_by(&p);
        assert_eq!(d, FinPerm::cycle(&[v(5), v(1), v(2)]).unwrap());
        assert_eq!(d, p.compose(&c).compose(&p.inverse()));
    }
}
