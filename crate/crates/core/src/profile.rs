//! Dirichlet forms, Dirichlet eigenvalues and isoperimetric profiles.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{group_ball, Group};
use crate::io::csv_field;
use crate::scalar::Scalar;
use crate::test_functions::TestFunction;
use crate::walk::Measure;

/// Largest number of candidate sets a profile sweep visits before giving up exactness.
pub const SUBSET_BUDGET: usize = 10_000_000;
/// Above this size eigenvalues come from power iteration instead of a dense solve.
pub const DENSE_EIGEN_LIMIT: usize = 2000;
/// Ties between profile values closer than this are broken by witness encoding.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Which side the step multiplies on. The walk of this crate is `x ↦ y·x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    #[default]
    Left,
    Right,
}

fn step<G: Group>(group: &G, side: Side, y: &G::Elem, x: &G::Elem) -> G::Elem {
    match side {
        Side::Left => group.mul(y, x),
        Side::Right => group.mul(x, y),
    }
}

/// `½ Σ_{x,y} |f(yx) − f(x)|^p m(y)`, summed over every pair where either value is nonzero.
pub fn dirichlet_form<G, S>(group: &G, m: &Measure<G::Elem, S>, f: &TestFunction<G::Elem, S>, p: u8) -> S
where
    G: Group,
    S: Scalar,
{
    dirichlet_form_side(group, m, f, p, Side::Left)
}

pub fn dirichlet_form_side<G, S>(
    group: &G,
    m: &Measure<G::Elem, S>,
    f: &TestFunction<G::Elem, S>,
    p: u8,
    side: Side,
) -> S
where
    G: Group,
    S: Scalar,
{
    let mut total = S::zero();
    // x in the support
    for (x, fx) in f.iter() {
        for (y, w) in m.atoms() {
            let d = f.get(&step(group, side, y, x)) - fx.clone();
            total = total + d.pow_p(p) * w.clone();
        }
    }
    // x outside the support landing in it
    for (z, fz) in f.iter() {
        for (y, w) in m.atoms() {
            let x = step(group, side, &group.inv(y), z);
            if !f.contains(&x) {
                total = total + fz.pow_p(p) * w.clone();
            }
        }
    }
    total / S::from_ratio(2, 1)
}

/// `m(∂Ω) = Σ_{x ∈ Ω} Σ_y m(y) 1[yx ∉ Ω]`.
pub fn boundary_measure<G, S>(group: &G, m: &Measure<G::Elem, S>, omega: &[G::Elem]) -> S
where
    G: Group,
    S: Scalar,
{
    let set: HashSet<&G::Elem> = omega.iter().collect();
    let mut total = S::zero();
    for x in set.iter() {
        for (y, w) in m.atoms() {
            if !set.contains(&group.mul(y, x)) {
                total = total + w.clone();
            }
        }
    }
    total
}

/// Lowest eigenvalue of the energy restricted to functions supported in `omega`.
pub fn dirichlet_eigenvalue<G, S>(group: &G, m: &Measure<G::Elem, S>, omega: &[G::Elem]) -> Result<f64>
where
    G: Group,
    S: Scalar,
{
    let elems: Vec<&G::Elem> = omega.iter().collect::<BTreeSet<_>>().into_iter().collect();
    if elems.is_empty() {
        return Err(Error::InvalidParameter("empty domain".into()));
    }
    let index: HashMap<&G::Elem, usize> = elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mass = m.mass().as_f64();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (j, x) in elems.iter().enumerate() {
        for (y, w) in m.atoms() {
            if let Some(&i) = index.get(&group.mul(y, x)) {
                entries.push((i, j, w.as_f64()));
            }
        }
    }
    Ok(lowest_eigenvalue(elems.len(), mass, &entries))
}

/// Lowest eigenvalue of `mass·I − K` where `K` is given by `(row, col, weight)` triplets.
fn lowest_eigenvalue(n: usize, mass: f64, kernel: &[(usize, usize, f64)]) -> f64 {
    if n <= DENSE_EIGEN_LIMIT {
        let mut a = DMatrix::<f64>::identity(n, n) * mass;
        for &(i, j, w) in kernel {
            a[(i, j)] -= w;
        }
        // symmetrize rounding noise
        let a = (&a + a.transpose()) * 0.5;
        let eig = SymmetricEigen::new(a);
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0)
    } else {
        // largest eigenvalue of B = mass·I + K, spectrum of mass·I − K lies in [0, 2·mass]
        let shift = 2.0 * mass;
        let apply = |x: &DVector<f64>| {
            let mut y = x * mass;
            for &(i, j, w) in kernel {
                y[i] += w * x[j];
            }
            y
        };
        let mut x = DVector::<f64>::from_element(n, 1.0 / (n as f64).sqrt());
        let mut theta = 0.0;
        for _ in 0..1_000_000 {
            let y = apply(&x);
            theta = x.dot(&y);
            let residual = (&y - &x * theta).norm();
            let norm = y.norm();
            if norm == 0.0 {
                break;
            }
            x = y / norm;
            if residual <= 1e-10 {
                break;
            }
        }
        (shift - theta).max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    L1,
    L2,
}

impl ProfileKind {
    pub fn from_p(p: u8) -> Result<Self> {
        match p {
            1 => Ok(ProfileKind::L1),
            2 => Ok(ProfileKind::L2),
            _ => Err(Error::InvalidParameter(format!("p must be 1 or 2, got {p}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub v: usize,
    pub value: f64,
    /// True when every connected set of size at most `v` was examined.
    pub exact: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub kind: ProfileKind,
    pub points: Vec<ProfilePoint>,
}

impl ProfileTable {
    pub fn value(&self, v: usize) -> Option<f64> {
        self.points.iter().find(|p| p.v == v).map(|p| p.value)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,value,exact_flag,witness\n");
        for p in &self.points {
            out.push_str(&format!("{},{:.17e},{},{}\n", p.v, p.value, p.exact, csv_field(&p.witness)));
        }
        out
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].value <= w[0].value + TIE_TOLERANCE)
    }
}

/// Ball around the identity with a step table for each atom of the measure.
struct StepTable<E> {
    elems: Vec<E>,
    encodings: Vec<String>,
    /// `next[a][x]` is the index of `atom_a · x`, if inside the ball.
    next: Vec<Vec<Option<u32>>>,
    weights: Vec<f64>,
    mass: f64,
    /// Distinct non-loop neighbours of each element.
    adjacency: Vec<Vec<u32>>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug> StepTable<E> {
    fn build<G, S>(group: &G, m: &Measure<E, S>, radius: usize, side: Side) -> Self
    where
        G: Group<Elem = E>,
        S: Scalar,
    {
        let id = group.identity();
        let steps: Vec<E> = m.support().filter(|e| **e != id).cloned().collect();
        let elems: Vec<E> = match side {
            Side::Left => group_ball(group, &steps, radius).into_iter().map(|(e, _)| e).collect(),
            Side::Right => {
                // the right Cayley ball is the inverse of the left one
                let mut v: Vec<E> =
                    group_ball(group, &steps, radius).into_iter().map(|(e, _)| group.inv(&e)).collect();
                v.sort();
                let pos = v.iter().position(|e| *e == id).unwrap();
                v.swap(0, pos);
                v
            }
        };
        Self::from_elements(group, m, elems, side)
    }

    fn from_elements<G, S>(group: &G, m: &Measure<E, S>, elems: Vec<E>, side: Side) -> Self
    where
        G: Group<Elem = E>,
        S: Scalar,
    {
        let index: HashMap<&E, u32> = elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let next: Vec<Vec<Option<u32>>> = m
            .atoms()
            .iter()
            .map(|(y, _)| elems.iter().map(|x| index.get(&step(group, side, y, x)).copied()).collect())
            .collect();
        let mut adjacency = vec![Vec::new(); elems.len()];
        for (x, adj) in adjacency.iter_mut().enumerate() {
            let mut set: Vec<u32> = next.iter().filter_map(|row| row[x]).filter(|&y| y as usize != x).collect();
            set.sort_unstable();
            set.dedup();
            *adj = set;
        }
        StepTable {
            encodings: elems.iter().map(|e| group.encode(e)).collect(),
            elems,
            next,
            weights: m.atoms().iter().map(|(_, w)| w.as_f64()).collect(),
            mass: m.mass().as_f64(),
            adjacency,
        }
    }

    fn boundary_ratio(&self, set: &[u32]) -> f64 {
        let members: HashSet<u32> = set.iter().copied().collect();
        let mut total = 0.0;
        for &x in set {
            for (row, w) in self.next.iter().zip(&self.weights) {
                match row[x as usize] {
                    Some(y) if members.contains(&y) => {}
                    _ => total += w,
                }
            }
        }
        total / set.len() as f64
    }

    fn eigenvalue(&self, set: &[u32]) -> f64 {
        let local: HashMap<u32, usize> = set.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut entries = Vec::new();
        for (j, &x) in set.iter().enumerate() {
            for (row, w) in self.next.iter().zip(&self.weights) {
                if let Some(i) = row[x as usize].and_then(|y| local.get(&y)) {
                    entries.push((*i, j, *w));
                }
            }
        }
        lowest_eigenvalue(set.len(), self.mass, &entries)
    }

    fn value(&self, set: &[u32], kind: ProfileKind) -> f64 {
        match kind {
            ProfileKind::L1 => self.boundary_ratio(set),
            ProfileKind::L2 => self.eigenvalue(set),
        }
    }

    fn encoding(&self, set: &[u32]) -> Vec<&str> {
        let mut v: Vec<&str> = set.iter().map(|&i| self.encodings[i as usize].as_str()).collect();
        v.sort_unstable();
        v
    }

    fn witness(&self, set: &[u32]) -> String {
        format!("{{{}}}", self.encoding(set).join(" "))
    }
}

#[derive(Clone)]
struct Best {
    value: f64,
    set: Vec<u32>,
}

fn better<E: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug>(table: &StepTable<E>, a: &Best, b: &Best) -> Ordering {
    if a.value < b.value - TIE_TOLERANCE {
        Ordering::Less
    } else if b.value < a.value - TIE_TOLERANCE {
        Ordering::Greater
    } else {
        table.encoding(&a.set).cmp(&table.encoding(&b.set))
    }
}

/// Enumerates connected vertex sets containing vertex 0 of size at most `max_size`,
/// handing them to `visit` in batches. Returns false when the budget ran out.
fn connected_sets(adjacency: &[Vec<u32>], max_size: usize, budget: usize, visit: &mut dyn FnMut(&[Vec<u32>])) -> bool {
    const BATCH: usize = 65_536;
    struct State<'a> {
        adjacency: &'a [Vec<u32>],
        covered: Vec<u32>,
        sub: Vec<u32>,
        max_size: usize,
        seen: usize,
        budget: usize,
        batch: Vec<Vec<u32>>,
    }
    fn extend(st: &mut State<'_>, ext: Vec<u32>, visit: &mut dyn FnMut(&[Vec<u32>])) -> bool {
        st.seen += 1;
        if st.seen > st.budget {
            return false;
        }
        st.batch.push(st.sub.clone());
        if st.batch.len() >= BATCH {
            visit(&st.batch);
            st.batch.clear();
        }
        if st.sub.len() == st.max_size {
            return true;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next_ext = ext.clone();
            for &u in &st.adjacency[w as usize] {
                if u != 0 && st.covered[u as usize] == 0 && !next_ext.contains(&u) {
                    next_ext.push(u);
                }
            }
            st.sub.push(w);
            st.covered[w as usize] += 1;
            for &u in &st.adjacency[w as usize] {
                st.covered[u as usize] += 1;
            }
            let ok = extend(st, next_ext, visit);
            st.sub.pop();
            st.covered[w as usize] -= 1;
            for &u in &st.adjacency[w as usize] {
                st.covered[u as usize] -= 1;
            }
            if !ok {
                return false;
            }
        }
        true
    }
    if adjacency.is_empty() || max_size == 0 {
        return true;
    }
    let mut st = State {
        adjacency,
        covered: vec![0; adjacency.len()],
        sub: vec![0],
        max_size,
        seen: 0,
        budget,
        batch: Vec::new(),
    };
    st.covered[0] += 1;
    for &u in &adjacency[0] {
        st.covered[u as usize] += 1;
    }
    let ext: Vec<u32> = adjacency[0].iter().rev().copied().collect();
    let ok = extend(&mut st, ext, visit);
    if !st.batch.is_empty() {
        visit(&st.batch);
    }
    ok
}

/// Enumerates every vertex set containing vertex 0 of size at most `max_size`.
fn all_sets(n: usize, max_size: usize, budget: usize, visit: &mut dyn FnMut(&[Vec<u32>])) -> bool {
    fn rec(
        start: u32,
        n: u32,
        sub: &mut Vec<u32>,
        max: usize,
        seen: &mut usize,
        budget: usize,
        batch: &mut Vec<Vec<u32>>,
    ) -> bool {
        *seen += 1;
        if *seen > budget {
            return false;
        }
        batch.push(sub.clone());
        if sub.len() == max {
            return true;
        }
        for u in start..n {
            sub.push(u);
            let ok = rec(u + 1, n, sub, max, seen, budget, batch);
            sub.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut batch = Vec::new();
    let mut seen = 0;
    let ok = if n == 0 || max_size == 0 {
        true
    } else {
        rec(1, n as u32, &mut vec![0], max_size, &mut seen, budget, &mut batch)
    };
    visit(&batch);
    ok
}

/// Options for [`lambda_profile_with`].
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub side: Side,
    /// Drop the connectivity restriction (exponentially slower; for cross-checks).
    pub unrestricted: bool,
    pub budget: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { side: Side::Left, unrestricted: false, budget: SUBSET_BUDGET }
    }
}

/// Profile `Λ_p(v)` for `v = 1..=v_max` by exhaustive search over connected sets
/// containing the identity inside the ball of the given radius.
pub fn lambda_profile<G, S>(group: &G, m: &Measure<G::Elem, S>, radius: usize, v_max: usize, p: u8) -> Result<ProfileTable>
where
    G: Group,
    S: Scalar,
{
    lambda_profile_with(group, m, radius, v_max, p, SweepOptions::default())
}

pub fn lambda_profile_with<G, S>(
    group: &G,
    m: &Measure<G::Elem, S>,
    radius: usize,
    v_max: usize,
    p: u8,
    opts: SweepOptions,
) -> Result<ProfileTable>
where
    G: Group,
    S: Scalar,
{
    let kind = ProfileKind::from_p(p)?;
    if v_max == 0 {
        return Err(Error::InvalidParameter("v_max must be at least 1".into()));
    }
    if !m.is_symmetric() {
        return Err(Error::AsymmetricMeasure("profiles need a symmetric measure".into()));
    }
    let table = StepTable::build(group, m, radius, opts.side);
    let v_cap = v_max.min(table.elems.len());
    let mut best: Vec<Option<Best>> = vec![None; v_cap + 1];
    let mut visit = |batch: &[Vec<u32>]| {
        let scored: Vec<Best> =
            batch.par_iter().map(|s| Best { value: table.value(s, kind), set: s.clone() }).collect();
        for b in scored {
            let k = b.set.len();
            let slot = &mut best[k];
            let replace = match slot {
                None => true,
                Some(cur) => better(&table, &b, cur) == Ordering::Less,
            };
            if replace {
                *slot = Some(b);
            }
        }
    };
    let complete = if opts.unrestricted {
        all_sets(table.elems.len(), v_cap, opts.budget, &mut visit)
    } else {
        connected_sets(&table.adjacency, v_cap, opts.budget, &mut visit)
    };
    let mut points = Vec::with_capacity(v_max);
    let mut running: Option<Best> = None;
    for v in 1..=v_max {
        if let Some(Some(b)) = best.get(v) {
            let replace = match &running {
                None => true,
                Some(cur) => better(&table, b, cur) == Ordering::Less,
            };
            if replace {
                running = Some(b.clone());
            }
        }
        let cur = running.as_ref().expect("singleton always present");
        // a connected set of size v through the identity stays within distance v − 1
        let exact = complete && (radius + 1 >= v || ball_is_group(&table));
        points.push(ProfilePoint { v, value: cur.value, exact, witness: table.witness(&cur.set) });
    }
    Ok(ProfileTable { kind, points })
}

/// True when the ball is closed under every step, i.e. it is the whole (finite) group.
fn ball_is_group<E>(table: &StepTable<E>) -> bool {
    table.next.iter().all(|row| row.iter().all(Option::is_some))
}

/// Result of a right-continuous inverse on a finite table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Inverse {
    Finite(usize),
    /// Every computed value exceeds the level.
    RangeExceeded,
}

/// `Λ⁻¹(s) = inf{v > 0 : Λ(v) ≤ s}` over the computed range.
pub fn profile_inverse(table: &ProfileTable, s: f64) -> Inverse {
    table
        .points
        .iter()
        .find(|p| p.value <= s + TIE_TOLERANCE)
        .map(|p| Inverse::Finite(p.v))
        .unwrap_or(Inverse::RangeExceeded)
}

/// `Føl(t) = Λ₁⁻¹(1/t)`.
pub fn folner(table: &ProfileTable, t: f64) -> Result<Inverse> {
    if table.kind != ProfileKind::L1 {
        return Err(Error::InvalidParameter("the Følner function needs an L1 table".into()));
    }
    if t <= 0.0 {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    Ok(profile_inverse(table, 1.0 / t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerReport {
    pub checked: Vec<usize>,
    /// Points where `½Λ₁² ≤ Λ₂ ≤ Λ₁` fails.
    pub violations: Vec<usize>,
}

impl CheegerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && !self.checked.is_empty()
    }
}

/// Checks `½Λ₁(v)² ≤ Λ₂(v) ≤ Λ₁(v)` at every point exact in both tables.
pub fn check_cheeger(l1: &ProfileTable, l2: &ProfileTable, tol: f64) -> Result<CheegerReport> {
    if l1.kind != ProfileKind::L1 || l2.kind != ProfileKind::L2 {
        return Err(Error::InvalidParameter("expected an L1 table and an L2 table".into()));
    }
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    for a in &l1.points {
        if let Some(b) = l2.points.iter().find(|b| b.v == a.v) {
            if !(a.exact && b.exact) {
                continue;
            }
            checked.push(a.v);
            if !(0.5 * a.value * a.value <= b.value + tol && b.value <= a.value + tol) {
                violations.push(a.v);
            }
        }
    }
    Ok(CheegerReport { checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::BaseGroup;
    use crate::labelled_graph::Vertex;

    fn simple_z() -> Measure<Vertex, f64> {
        Measure::uniform(&BaseGroup::Integers, vec![Vertex::Int(-1), Vertex::Int(1)]).unwrap()
    }

    #[test]
    fn delta_energy() {
        let z = BaseGroup::Integers;
        let f = TestFunction::indicator([Vertex::Int(0)]);
        assert_eq!(dirichlet_form(&z, &simple_z(), &f, 2), 1.0);
    }

    #[test]
    fn interval_boundary() {
        let z = BaseGroup::Integers;
        let omega: Vec<Vertex> = (1..=5).map(Vertex::Int).collect();
        assert_eq!(boundary_measure(&z, &simple_z(), &omega), 1.0);
        let f = TestFunction::indicator(omega.clone());
        assert_eq!(dirichlet_form(&z, &simple_z(), &f, 1), 1.0);
    }

    #[test]
    fn interval_eigenvalue() {
        let z = BaseGroup::Integers;
        for v in 1..=12 {
            let omega: Vec<Vertex> = (0..v).map(Vertex::Int).collect();
            let l = dirichlet_eigenvalue(&z, &simple_z(), &omega).unwrap();
            let expect = 1.0 - (std::f64::consts::PI / (v as f64 + 1.0)).cos();
            assert!((l - expect).abs() < 1e-12, "v={v}");
        }
    }

    #[test]
    fn integer_profiles() {
        let z = BaseGroup::Integers;
        let t1 = lambda_profile(&z, &simple_z(), 8, 6, 1).unwrap();
        let t2 = lambda_profile(&z, &simple_z(), 8, 6, 2).unwrap();
        for v in 1..=6 {
            assert!((t1.value(v).unwrap() - 1.0 / v as f64).abs() < 1e-12);
            assert!(t1.points[v - 1].exact);
        }
        assert!((t2.value(2).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(profile_inverse(&t1, 1.0 / 3.0), Inverse::Finite(3));
        assert_eq!(profile_inverse(&t1, 2.0), Inverse::Finite(1));
        assert_eq!(profile_inverse(&t1, 0.01), Inverse::RangeExceeded);
        assert!(check_cheeger(&t1, &t2, 1e-10).unwrap().passed());
    }

    #[test]
    fn connected_enumeration_counts() {
        // path 0-1-2-3: connected sets through 0 are prefixes
        let adj = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
        let mut n = 0;
        connected_sets(&adj, 4, 100, &mut |b| n += b.len());
        assert_eq!(n, 4);
        // 4-cycle: {0}, 3 pairs... sets containing 0: 1 + 2 + 3 + 1 = 7
        let adj = vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![0, 2]];
        let mut n = 0;
        connected_sets(&adj, 4, 100, &mut |b| n += b.len());
        assert_eq!(n, 7);
    }
}
