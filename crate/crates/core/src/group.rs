use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Debug};
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labelled_graph::Vertex;

/// A group with computable multiplication. Products apply the right factor first.
pub trait Group: Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Stable textual encoding used in witnesses, CSV output and caches.
    fn encode(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        // [a,b] = a b a^-1 b^-1
        let ab = self.mul(a, b);
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ab, &ai), &bi)
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut out = self.identity();
        for _ in 0..n.unsigned_abs() {
            out = self.mul(&base, &out);
        }
        out
    }
}

/// BFS closure of `generators` (symmetrized) from the identity, capped at `budget` elements.
/// Elements come out in BFS order, ties in canonical order.
pub fn enumerate_generated<G: Group>(group: &G, generators: &[G::Elem], budget: usize) -> Result<Vec<G::Elem>> {
    let mut steps: Vec<G::Elem> = generators.to_vec();
    steps.extend(generators.iter().map(|g| group.inv(g)));
    let id = group.identity();
    let mut seen: HashSet<G::Elem> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id.clone()];
    let mut layer = vec![id];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for x in &layer {
            for s in &steps {
                let y = group.mul(s, x);
                if seen.insert(y.clone()) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded(format!(
                            "generated group of {} exceeds {budget} elements",
                            group.name()
                        )));
                    }
                    next.push(y);
                }
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

/// Word-metric ball of radius `r` in the Cayley graph of `steps` (left multiplication).
/// Returns elements with their distances, sorted by (distance, element).
pub fn group_ball<G: Group>(group: &G, steps: &[G::Elem], r: usize) -> Vec<(G::Elem, usize)> {
    let id = group.identity();
    let mut seen: HashSet<G::Elem> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![(id.clone(), 0)];
    let mut layer = vec![id];
    for d in 1..=r {
        let mut next = Vec::new();
        for x in &layer {
            for s in steps {
                let y = group.mul(s, x);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        next.sort();
        out.extend(next.iter().map(|y| (y.clone(), d)));
        layer = next;
    }
    out
}

/// Multiplication table of a finite group on indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    name: String,
    n: usize,
    identity: u32,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl CayleyTable {
    /// `rows[i][j]` is the index of `e_i e_j`. Checks closure, identity, inverses and associativity.
    pub fn new(name: impl Into<String>, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedGroup("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedGroup("table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x as usize >= n) {
            return Err(Error::MalformedGroup("table entry out of range".into()));
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        let at = |i: usize, j: usize| table[i * n + j] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::MalformedGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::MalformedGroup(format!("element e{x} has no inverse")))?;
            inverses.push(y as u32);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::MalformedGroup(format!("not associative at (e{a}, e{b}, e{c})")));
                    }
                }
            }
        }
        Ok(CayleyTable { name: name.into(), n, identity: identity as u32, table, inverses })
    }

    /// Table of a finite permutation group given by its elements.
    pub fn from_perms(name: impl Into<String>, mut elems: Vec<DensePerm>) -> Result<Self> {
        elems.sort();
        elems.dedup();
        let index = |p: &DensePerm| elems.binary_search(p).ok().map(|i| i as u32);
        let mut rows = Vec::with_capacity(elems.len());
        for a in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for b in &elems {
                row.push(index(&a.compose(b)).ok_or_else(|| Error::MalformedGroup("set not closed".into()))?);
            }
            rows.push(row);
        }
        CayleyTable::new(name, rows)
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        CayleyTable::from_perms(format!("S{n}"), PermGroup::symmetric(n).elements())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity_index(&self) -> u32 {
        self.identity
    }

    pub fn mul_index(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    pub fn inv_index(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// The base groups used as building blocks, with elements encoded as [`Vertex`] values.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub enum BaseGroup {
    Integers,
    Lattice(usize),
    Cyclic(u32),
    Table(Arc<CayleyTable>),
}

impl Debug for BaseGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl BaseGroup {
    pub fn cyclic(b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::MalformedGroup("cyclic group of order 0".into()));
        }
        Ok(BaseGroup::Cyclic(b))
    }

    pub fn table(t: CayleyTable) -> Self {
        BaseGroup::Table(Arc::new(t))
    }

    pub fn describe(&self) -> String {
        match self {
            BaseGroup::Integers => "Z".into(),
            BaseGroup::Lattice(d) => format!("Z^{d}"),
            BaseGroup::Cyclic(b) => format!("Z/{b}"),
            BaseGroup::Table(t) => t.name().to_string(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseGroup::Cyclic(_) | BaseGroup::Table(_))
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            BaseGroup::Cyclic(b) => Some(*b as usize),
            BaseGroup::Table(t) => Some(t.order()),
            _ => None,
        }
    }

    pub fn identity(&self) -> Vertex {
        match self {
            BaseGroup::Integers => Vertex::Int(0),
            BaseGroup::Lattice(d) => Vertex::Lattice(vec![0; *d]),
            BaseGroup::Cyclic(_) => Vertex::Residue(0),
            BaseGroup::Table(t) => Vertex::FiniteElem(t.identity_index()),
        }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        match (self, v) {
            (BaseGroup::Integers, Vertex::Int(_)) => true,
            (BaseGroup::Lattice(d), Vertex::Lattice(c)) => c.len() == *d,
            (BaseGroup::Cyclic(b), Vertex::Residue(r)) => r < b,
            (BaseGroup::Table(t), Vertex::FiniteElem(i)) => (*i as usize) < t.order(),
            _ => false,
        }
    }

    /// Product `a b`. Panics on elements of another group; callers check membership first.
    pub fn mul(&self, a: &Vertex, b: &Vertex) -> Vertex {
        match (self, a, b) {
            (BaseGroup::Integers, Vertex::Int(x), Vertex::Int(y)) => Vertex::Int(x + y),
            (BaseGroup::Lattice(_), Vertex::Lattice(x), Vertex::Lattice(y)) => {
                Vertex::Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (BaseGroup::Cyclic(n), Vertex::Residue(x), Vertex::Residue(y)) => Vertex::Residue((x + y) % n),
            (BaseGroup::Table(t), Vertex::FiniteElem(x), Vertex::FiniteElem(y)) => {
                Vertex::FiniteElem(t.mul_index(*x, *y))
            }
            _ => panic!("{a} or {b} is not an element of {}", self.describe()),
        }
    }

    pub fn inv(&self, a: &Vertex) -> Vertex {
        match (self, a) {
            (BaseGroup::Integers, Vertex::Int(x)) => Vertex::Int(-x),
            (BaseGroup::Lattice(_), Vertex::Lattice(x)) => Vertex::Lattice(x.iter().map(|p| -p).collect()),
            (BaseGroup::Cyclic(n), Vertex::Residue(x)) => Vertex::Residue((n - x % n) % n),
            (BaseGroup::Table(t), Vertex::FiniteElem(x)) => Vertex::FiniteElem(t.inv_index(*x)),
            _ => panic!("{a} is not an element of {}", self.describe()),
        }
    }

    /// All elements of a finite group, in canonical order.
    pub fn elements(&self) -> Option<Vec<Vertex>> {
        match self {
            BaseGroup::Cyclic(b) => Some((0..*b).map(Vertex::Residue).collect()),
            BaseGroup::Table(t) => Some((0..t.order() as u32).map(Vertex::FiniteElem).collect()),
            _ => None,
        }
    }

    /// Sup-norm of an element of ℤ or ℤᵈ (0 for finite groups).
    pub fn sup_norm(v: &Vertex) -> i64 {
        match v {
            Vertex::Int(n) => n.abs(),
            Vertex::Lattice(c) => c.iter().map(|x| x.abs()).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// An element of sup-norm exactly `m` along axis `axis` (ℤ and ℤᵈ only).
    pub fn far_point(&self, m: i64, axis: usize) -> Option<Vertex> {
        match self {
            BaseGroup::Integers => Some(Vertex::Int(if axis % 2 == 0 { m } else { -m })),
            BaseGroup::Lattice(d) => {
                let mut c = vec![0; *d];
                c[axis % d] = m;
                Some(Vertex::Lattice(c))
            }
            _ => None,
        }
    }
}

impl Group for BaseGroup {
    type Elem = Vertex;

    fn identity(&self) -> Vertex {
        BaseGroup::identity(self)
    }
    fn mul(&self, a: &Vertex, b: &Vertex) -> Vertex {
        BaseGroup::mul(self, a, b)
    }
    fn inv(&self, a: &Vertex) -> Vertex {
        BaseGroup::inv(self, a)
    }
    fn encode(&self, a: &Vertex) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        self.describe()
    }
}

/// Permutation of `0..n` stored densely; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DensePerm(pub Box<[u16]>);

impl Debug for DensePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DensePerm {
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

impl DensePerm {
    pub fn identity(n: usize) -> Self {
        DensePerm((0..n as u16).collect())
    }

    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::InvalidParameter(format!("{images:?} is not a permutation")));
            }
        }
        Ok(DensePerm(images.into_boxed_slice()))
    }

    pub fn from_cycle(n: usize, cycle: &[u16]) -> Self {
        let mut p: Vec<u16> = (0..n as u16).collect();
        for (i, &x) in cycle.iter().enumerate() {
            p[x as usize] = cycle[(i + 1) % cycle.len()];
        }
        DensePerm(p.into_boxed_slice())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: u16) -> u16 {
        self.0[i as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &DensePerm) -> DensePerm {
        DensePerm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> DensePerm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u16;
        }
        DensePerm(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x as u16);
                x = self.0[x] as usize;
            }
            out.push(c);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

/// Symmetric or alternating group on `degree` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    alternating: bool,
}

impl PermGroup {
    pub fn symmetric(n: usize) -> Self {
        PermGroup { degree: n, alternating: false }
    }

    pub fn alternating(n: usize) -> Self {
        PermGroup { degree: n, alternating: true }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_alternating(&self) -> bool {
        self.alternating
    }

    pub fn order(&self) -> u128 {
        let full = crate::scalar::factorial(self.degree as u64).unwrap_or(u128::MAX);
        if self.alternating && self.degree >= 2 {
            full / 2
        } else {
            full
        }
    }

    pub fn contains(&self, p: &DensePerm) -> bool {
        p.degree() == self.degree && (!self.alternating || p.is_even())
    }

    /// All elements in lexicographic order of image vectors.
    pub fn elements(&self) -> Vec<DensePerm> {
        let mut out = Vec::new();
        let mut cur: Vec<u16> = (0..self.degree as u16).collect();
        loop {
            let p = DensePerm(cur.clone().into_boxed_slice());
            if !self.alternating || p.is_even() {
                out.push(p);
            }
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }

    /// All `2·C(n,3)` three-cycles.
    pub fn three_cycles(&self) -> Vec<DensePerm> {
        let n = self.degree as u16;
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    out.push(DensePerm::from_cycle(self.degree, &[x, y, z]));
                    out.push(DensePerm::from_cycle(self.degree, &[x, z, y]));
                }
            }
        }
        out.sort();
        out
    }
}

fn next_permutation(v: &mut [u16]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Group for PermGroup {
    type Elem = DensePerm;

    fn identity(&self) -> DensePerm {
        DensePerm::identity(self.degree)
    }
    fn mul(&self, a: &DensePerm, b: &DensePerm) -> DensePerm {
        a.compose(b)
    }
    fn inv(&self, a: &DensePerm) -> DensePerm {
        a.inverse()
    }
    fn encode(&self, a: &DensePerm) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("{}{}", if self.alternating { "A" } else { "S" }, self.degree)
    }
}

/// Breadth-first distances from `start` in an implicit graph; stops at `radius`.
pub fn bfs_distances<T, F>(start: T, radius: usize, mut neighbours: F) -> Vec<(T, usize)>
where
    T: Clone + Eq + Hash,
    F: FnMut(&T) -> Vec<T>,
{
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    let mut out = Vec::new();
    while let Some((x, d)) = queue.pop_front() {
        out.push((x.clone(), d));
        if d == radius {
            continue;
        }
        for y in neighbours(&x) {
            if seen.insert(y.clone()) {
                queue.push_back((y, d + 1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_arithmetic() {
        let g = BaseGroup::Cyclic(3);
        assert_eq!(g.mul(&Vertex::Residue(2), &Vertex::Residue(2)), Vertex::Residue(1));
        assert_eq!(g.inv(&Vertex::Residue(1)), Vertex::Residue(2));
        assert_eq!(g.inv(&Vertex::Residue(0)), Vertex::Residue(0));
    }

    #[test]
    fn table_validation() {
        assert!(CayleyTable::new("bad", vec![vec![0, 1], vec![0, 1]]).is_err());
        let z2 = CayleyTable::new("Z2", vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.inv_index(1), 1);
        let s3 = CayleyTable::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
    }

    #[test]
    fn perm_group_orders() {
        assert_eq!(PermGroup::symmetric(4).elements().len(), 24);
        assert_eq!(PermGroup::alternating(5).elements().len(), 60);
        assert_eq!(PermGroup::alternating(5).order(), 60);
        assert_eq!(PermGroup::symmetric(4).three_cycles().len(), 8);
    }

    #[test]
    fn three_cycles_generate_alternating() {
        let g = PermGroup::alternating(5);
        let elems = enumerate_generated(&g, &g.three_cycles(), 1000).unwrap();
        assert_eq!(elems.len(), 60);
    }

    #[test]
    fn dense_compose_applies_right_first() {
        let a = DensePerm::from_cycle(3, &[0, 1]);
        let b = DensePerm::from_cycle(3, &[1, 2]);
        // (a∘b)(1) = a(2) = 2
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&b).to_string(), "(0 1 2)");
        assert!(!a.is_even());
        assert!(a.compose(&b).is_even());
    }

    #[test]
    fn budget_is_enforced() {
        let g = PermGroup::symmetric(6);
        let gens = vec![DensePerm::from_cycle(6, &[0, 1]), DensePerm::from_cycle(6, &[0, 1, 2, 3, 4, 5])];
        assert!(matches!(enumerate_generated(&g, &gens, 100), Err(Error::BudgetExceeded(_))));
        assert_eq!(enumerate_generated(&g, &gens, 1000).unwrap().len(), 720);
    }
}
