//! Bubble graphs `X_a` with branching 3-cycles, the sets `U_k(ℓ)` and the test functions `ψ_k`.
//!
//! The graph is truncated after `depth` levels. Branching cycles exist at the far end of
//! every level-`j` bubble with `j < depth`; far ends of the last level carry `β` self-loops.
//! Level `k` sets are computed in a model with `depth ≥ k + 1`, where the truncation does
//! not change `U_k(ℓ)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{DensePerm, Group, PermGroup};
use crate::io::IdentityReport;
use crate::labelled_graph::{LabelledGraph, Vertex};
use crate::profile::dirichlet_form;
use crate::scalar::{factorial_le, ln_factorial, Scalar};
use crate::test_functions::TestFunction;
use crate::walk::Measure;

/// Cap on the number of group elements visited while building `U_k(ℓ)`.
pub const U_SET_BUDGET: usize = 10_000_000;
/// Memory cap for the same search, in bytes of stored permutations.
pub const U_SET_BYTES: usize = 1 << 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BubbleSpec {
    /// Half bubble lengths: the level-`k` bubble has `2·a[k−1]` vertices.
    pub a: Vec<u64>,
    /// Number of levels materialized.
    pub depth: usize,
    /// Adds the point `*` and the letter `tau` transposing it with the root.
    pub pocket: bool,
}

impl BubbleSpec {
    pub fn new(a: Vec<u64>, pocket: bool) -> Result<Self> {
        let depth = a.len();
        let spec = BubbleSpec { a, depth, pocket };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        if self.a.is_empty() || self.depth == 0 || self.depth > self.a.len() {
            return Err(Error::InvalidParameter(format!("depth {} for sequence {:?}", self.depth, self.a)));
        }
        if self.a.iter().any(|&x| x == 0 || x % 4 != 0) {
            return Err(Error::InvalidParameter(format!("entries of {:?} must be positive multiples of 4", self.a)));
        }
        if self.a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!("{:?} is not strictly increasing", self.a)));
        }
        Ok(())
    }

    /// Half length of the level-`k` bubble (`k ≥ 1`).
    pub fn half(&self, level: usize) -> u64 {
        self.a[level - 1]
    }

    /// `s_k = a_1 + … + a_k`.
    pub fn partial_sum(&self, k: usize) -> u64 {
        self.a[..k].iter().sum()
    }

    pub fn describe(&self) -> String {
        let a: Vec<String> = self.a.iter().map(u64::to_string).collect();
        format!("{}bubble({})", if self.pocket { "pocket-" } else { "" }, a.join(","))
    }
}

/// Words over `{1, 2}` of the given length, in lexicographic order.
fn words(len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                [1u8, 2].into_iter().map(move |z| {
                    let mut w2 = w.clone();
                    w2.push(z);
                    w2
                })
            })
            .collect();
    }
    out
}

/// `𝔪_k = (1^{k−1}, a_k/2)`.
pub fn midpoint(spec: &BubbleSpec, k: usize) -> Vertex {
    Vertex::bubble(&vec![1; k - 1], spec.half(k) / 2)
}

/// `𝔟(w)`: the branching cycle at the far end of the bubble of `w`.
pub fn branching_cycle(spec: &BubbleSpec, w: &[u8]) -> Result<[Vertex; 3]> {
    let level = w.len() + 1;
    if level >= spec.depth {
        return Err(Error::CutoffExceeded(format!("no branching cycle past level {}", spec.depth - 1)));
    }
    let mut w1 = w.to_vec();
    w1.push(1);
    let mut w2 = w.to_vec();
    w2.push(2);
    Ok([Vertex::bubble(w, spec.half(level)), Vertex::bubble(&w1, 0), Vertex::bubble(&w2, 0)])
}

/// Labelled graph with letters `alpha`, `beta` (and `tau` for the pocket variant).
pub fn build_bubble(spec: &BubbleSpec) -> Result<LabelledGraph> {
    spec.check()?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for level in 1..=spec.depth {
        let len = 2 * spec.half(level);
        for w in words(level - 1) {
            for u in 0..len {
                vertices.push(Vertex::bubble(&w, u));
                edges.push((1, Vertex::bubble(&w, u), Vertex::bubble(&w, (u + 1) % len)));
            }
            if level < spec.depth {
                let c = branching_cycle(spec, &w)?;
                for i in 0..3 {
                    edges.push((2, c[i].clone(), c[(i + 1) % 3].clone()));
                }
            }
        }
    }
    let mut letters = vec!["alpha".to_string(), "beta".to_string()];
    let root = Vertex::bubble(&[], 0);
    if spec.pocket {
        letters.push("tau".into());
        vertices.push(Vertex::Star);
        edges.push((3, Vertex::Star, root.clone()));
        edges.push((3, root.clone(), Vertex::Star));
    }
    LabelledGraph::from_edges(spec.describe(), vertices, letters, &edges, root)
}

/// Dense permutation model of the truncated bubble group.
#[derive(Clone, Debug)]
pub struct BubbleModel {
    pub spec: BubbleSpec,
    pub vertices: Vec<Vertex>,
    index: HashMap<Vertex, u16>,
    pub alpha: DensePerm,
    pub beta: DensePerm,
    pub tau: Option<DensePerm>,
    adjacency: Vec<Vec<u16>>,
}

impl BubbleModel {
    pub fn new(spec: BubbleSpec) -> Result<Self> {
        let graph = build_bubble(&spec)?;
        let vertices = graph.finite_vertices().expect("finite bubble graph").to_vec();
        if vertices.len() > u16::MAX as usize {
            return Err(Error::BudgetExceeded(format!("{} vertices", vertices.len())));
        }
        let index: HashMap<Vertex, u16> = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i as u16)).collect();
        let perm_of = |letter: usize| -> Result<DensePerm> {
            let images = vertices
                .iter()
                .map(|v| Ok(index[&graph.letter_action(v, crate::labelled_graph::Letter::pos(letter))?]))
                .collect::<Result<Vec<u16>>>()?;
            DensePerm::from_images(images)
        };
        let alpha = perm_of(1)?;
        let beta = perm_of(2)?;
        let tau = if spec.pocket { Some(perm_of(3)?) } else { None };
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for p in [Some(&alpha), Some(&beta), tau.as_ref()].into_iter().flatten() {
            for i in 0..vertices.len() {
                let j = p.apply(i as u16);
                if j as usize != i {
                    adjacency[i].push(j);
                    adjacency[j as usize].push(i as u16);
                }
            }
        }
        for a in &mut adjacency {
            a.sort();
            a.dedup();
        }
        Ok(BubbleModel { spec, vertices, index, alpha, beta, tau, adjacency })
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::symmetric(self.vertices.len())
    }

    pub fn index_of(&self, v: &Vertex) -> Result<u16> {
        self.index.get(v).copied().ok_or_else(|| Error::CutoffExceeded(format!("{v} is outside the model")))
    }

    /// The support of `u`: `α^{±1}`, `β^{±1}`, and `τ` for the pocket variant.
    pub fn steps(&self) -> Vec<DensePerm> {
        let mut out = vec![self.alpha.clone(), self.alpha.inverse(), self.beta.clone(), self.beta.inverse()];
        if let Some(t) = &self.tau {
            out.push(t.clone());
        }
        out
    }

    /// Uniform measure on [`BubbleModel::steps`].
    pub fn measure<S: Scalar>(&self) -> Result<Measure<DensePerm, S>> {
        Measure::uniform(&self.group(), self.steps())
    }

    /// Graph distances from `center`, up to `radius`.
    pub fn distances(&self, center: u16, radius: usize) -> HashMap<u16, usize> {
        let mut dist = HashMap::from([(center, 0)]);
        let mut queue = VecDeque::from([center]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == radius {
                continue;
            }
            for &y in &self.adjacency[x as usize] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Points within `radius` of any of `centers`.
    pub fn neighbourhood(&self, centers: &[u16], radius: usize) -> BTreeSet<u16> {
        centers.iter().flat_map(|&c| self.distances(c, radius).into_keys()).collect()
    }

    fn check_level(&self, k: usize, ell: u64) -> Result<()> {
        if k == 0 || k > self.spec.a.len() {
            return Err(Error::InvalidParameter(format!("level {k} out of range")));
        }
        if k + 1 > self.spec.depth {
            return Err(Error::CutoffExceeded(format!(
                "level {k} needs {} materialized levels, have {}",
                k + 1,
                self.spec.depth
            )));
        }
        if ell + 1 > self.spec.half(k) / 2 {
            return Err(Error::InvalidParameter(format!("radius {ell} exceeds a_k/2 - 1")));
        }
        Ok(())
    }
}

/// `U_k(ℓ)` with its partition by the displacement `t` of `𝔪_k`.
#[derive(Clone, Debug)]
pub struct BubbleUSet {
    pub k: usize,
    pub ell: u64,
    pub members: Vec<DensePerm>,
    /// `t ↦` indices into `members` with `g𝔪_k = α^t 𝔪_k`.
    pub classes: BTreeMap<i64, Vec<usize>>,
}

impl BubbleUSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn class_sizes(&self) -> BTreeMap<i64, usize> {
        self.classes.iter().map(|(t, v)| (*t, v.len())).collect()
    }

    pub fn partition_equal(&self) -> bool {
        let sizes: BTreeSet<usize> = self.classes.values().map(Vec::len).collect();
        sizes.len() == 1 && self.classes.len() as u64 == 2 * self.ell + 1
    }

    /// `α^{−t}·U_k(ℓ, t) = U_k(ℓ, 0)` for every `t`.
    pub fn translation_conjugacy(&self, model: &BubbleModel) -> bool {
        let zero: HashSet<&DensePerm> = match self.classes.get(&0) {
            Some(c) => c.iter().map(|&i| &self.members[i]).collect(),
            None => return false,
        };
        let group = model.group();
        self.classes.iter().all(|(t, idx)| {
            let shift = group.pow(&model.alpha, -t);
            idx.len() == zero.len() && idx.iter().all(|&i| zero.contains(&shift.compose(&self.members[i])))
        })
    }
}

/// Elements reachable from the identity by steps that keep `𝔪_k` within distance `ℓ`.
pub fn bubble_u_set(model: &BubbleModel, k: usize, ell: u64) -> Result<BubbleUSet> {
    model.check_level(k, ell)?;
    let m = model.index_of(&midpoint(&model.spec, k))?;
    let mid = model.spec.half(k) / 2;
    let word = vec![1u8; k - 1];
    // inside B_k(ℓ), each point is (1^{k−1}, a_k/2 + t)
    let ball: HashMap<u16, i64> = (-(ell as i64)..=ell as i64)
        .map(|t| Ok((model.index_of(&Vertex::bubble(&word, (mid as i64 + t) as u64))?, t)))
        .collect::<Result<_>>()?;
    let steps = model.steps();
    // each element is stored twice (queue and visited set)
    let per_elem = 4 * model.vertices.len() + 96;
    let budget = U_SET_BUDGET.min(U_SET_BYTES / per_elem);
    let id = DensePerm::identity(model.vertices.len());
    let mut seen: HashSet<DensePerm> = HashSet::from([id.clone()]);
    let mut members = vec![id];
    let mut head = 0;
    while head < members.len() {
        let g = members[head].clone();
        head += 1;
        for s in &steps {
            let h = s.compose(&g);
            if ball.contains_key(&h.apply(m)) && !seen.contains(&h) {
                if members.len() >= budget {
                    return Err(Error::BudgetExceeded(format!("U_{k}({ell}) exceeds {budget} elements")));
                }
                seen.insert(h.clone());
                members.push(h);
            }
        }
    }
    members.sort();
    let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, g) in members.iter().enumerate() {
        classes.entry(ball[&g.apply(m)]).or_default().push(i);
    }
    Ok(BubbleUSet { k, ell, members, classes })
}

/// `ℓ_k = a_k/4 − 1`.
pub fn test_radius(spec: &BubbleSpec, k: usize) -> u64 {
    (spec.half(k) / 4).saturating_sub(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BubbleEnergyReport {
    pub group: String,
    pub k: usize,
    pub ell: u64,
    pub u_size: usize,
    pub class_sizes: BTreeMap<i64, usize>,
    pub partition_equal: bool,
    pub translation_conjugacy: bool,
    pub norm_squared: f64,
    pub energy: f64,
    pub ratio: f64,
    /// Exact `‖ψ_k‖₂² / |U|`, as a fraction.
    pub norm_per_u: String,
    /// Exact `E(ψ_k, ψ_k) / |U|`, as a fraction.
    pub energy_per_u: String,
    pub identities: Vec<IdentityReport>,
    pub note: String,
}

impl BubbleEnergyReport {
    pub fn passed(&self) -> bool {
        self.partition_equal && self.translation_conjugacy && self.identities.iter().all(|r| r.pass)
    }
}

/// `ψ_k(g) = (1 − s/ℓ)₊` on `U_k(ℓ)` with `s = d(𝔪_k, g𝔪_k)`.
pub fn bubble_psi<S: Scalar>(u: &BubbleUSet) -> Result<TestFunction<DensePerm, S>> {
    if u.ell == 0 {
        return Err(Error::InvalidParameter("the test function needs radius at least 1".into()));
    }
    let ell = u.ell as i64;
    Ok(TestFunction::new(u.classes.iter().flat_map(|(t, idx)| {
        let value = S::from_ratio(ell - t.abs(), ell);
        idx.iter().map(move |&i| (u.members[i].clone(), value.clone()))
    })))
}

/// Computes `ψ_k` on `U_k(ℓ_k)` and compares its norm and energy with the closed forms
/// `(2ℓ+2+1/ℓ)/(3(2ℓ+1))·|U|` and `|U|/(2ℓ(2ℓ+1))`, and the ratio with `3/(2ℓ²)`.
pub fn bubble_test_function<S: Scalar>(model: &BubbleModel, k: usize) -> Result<(BubbleUSet, BubbleEnergyReport)> {
    let ell = test_radius(&model.spec, k);
    if ell == 0 {
        return Err(Error::InvalidParameter(format!("a_{k}/4 - 1 = 0")));
    }
    let u = bubble_u_set(model, k, ell)?;
    let psi = bubble_psi::<S>(&u)?;
    let q = model.measure::<S>()?;
    let energy = dirichlet_form(&model.group(), &q, &psi, 2);
    let norm = psi.l2_squared().clone();
    let size = <S as Scalar>::from_usize(u.len());
    let l = ell as i64;
    let norm_closed = S::from_ratio(2 * l * l + 2 * l + 1, 3 * l * (2 * l + 1)) * size.clone();
    // the closed form assumes weight 1/4 on α; the pocket measure puts 1/5 there
    let alpha_weight = S::from_ratio(4, q.atoms().len() as i64);
    let energy_closed = alpha_weight * size.clone() / S::from_ratio(2 * l * (2 * l + 1), 1);
    let ratio = energy.clone() / norm.clone();
    let bound = S::from_ratio(3, 2 * l * l);
    let eq = |name: &str, lhs: &S, rhs: &S| {
        if S::EXACT {
            IdentityReport::exact(name, lhs.as_f64(), rhs.as_f64(), lhs == rhs)
        } else {
            IdentityReport::compare(name, lhs.as_f64(), rhs.as_f64(), 1e-12 * rhs.as_f64().abs().max(1.0))
        }
    };
    let identities = vec![
        eq("norm^2 = (2l+2+1/l)/(3(2l+1)) |U|", &norm, &norm_closed),
        eq("energy = 4 u(alpha) |U| / (2l(2l+1))", &energy, &energy_closed),
        IdentityReport::at_most("energy / norm^2 <= 3/(2l^2)", ratio.as_f64(), bound.as_f64(), 0.0),
    ];
    let report = BubbleEnergyReport {
        group: model.spec.describe(),
        k,
        ell,
        u_size: u.len(),
        class_sizes: u.class_sizes(),
        partition_equal: u.partition_equal(),
        translation_conjugacy: u.translation_conjugacy(model),
        norm_squared: norm.as_f64(),
        energy: energy.as_f64(),
        ratio: ratio.as_f64(),
        norm_per_u: (norm / size.clone()).to_string(),
        energy_per_u: (energy / size).to_string(),
        identities,
        note: "level restriction k >= 8 not enforced; identities are exact at every level".into(),
    };
    Ok((u, report))
}

/// Support regions of elements of `U_k(ℓ_k, 0)`.
#[derive(Clone, Debug)]
pub struct SupportRegions {
    /// `B(𝔬, s_{k−1} + (k−1) + ℓ)`, with `*` in the pocket variant. The `k − 1` accounts
    /// for the branching edges between the root and `(1^{k−1}, 0)`.
    pub root: BTreeSet<u16>,
    pub root_radius: u64,
    /// `𝔑(w, ℓ)` for branching cycles at the end of level `j ≥ k` bubbles, keyed by `w`.
    pub branching: BTreeMap<Vec<u8>, BTreeSet<u16>>,
    /// Neighbourhoods of the far ends of the last materialized level.
    pub frontier: BTreeMap<Vec<u8>, BTreeSet<u16>>,
    /// Local coordinate of each point in a branching or frontier region:
    /// arm 0 is the parent bubble, arm `z` the child bubble `wz`; `d` is the signed offset.
    pub local: HashMap<u16, (u8, i64)>,
}

pub fn support_regions(model: &BubbleModel, k: usize, ell: u64) -> Result<SupportRegions> {
    model.check_level(k, ell)?;
    let spec = &model.spec;
    let root_v = model.index_of(&Vertex::bubble(&[], 0))?;
    let mut root_centers = vec![root_v];
    if spec.pocket {
        root_centers.push(model.index_of(&Vertex::Star)?);
    }
    let root_radius = spec.partial_sum(k - 1) + (k as u64 - 1) + ell;
    let root = model.neighbourhood(&root_centers, root_radius as usize);
    let mut branching = BTreeMap::new();
    let mut frontier = BTreeMap::new();
    let mut local = HashMap::new();
    for level in k..=spec.depth {
        let a = spec.half(level) as i64;
        for w in words(level - 1) {
            let (centers, region) = if level < spec.depth {
                let c = branching_cycle(spec, &w)?;
                let idx = c.iter().map(|v| model.index_of(v)).collect::<Result<Vec<_>>>()?;
                (idx, &mut branching)
            } else {
                (vec![model.index_of(&Vertex::bubble(&w, a as u64))?], &mut frontier)
            };
            let set = model.neighbourhood(&centers, ell as usize);
            for &x in &set {
                if let Vertex::Bubble { word, offset } = &model.vertices[x as usize] {
                    let coord = if word.len() == w.len() {
                        (0, *offset as i64 - a)
                    } else {
                        let child = 2 * spec.half(level + 1) as i64;
                        let off = *offset as i64;
                        (word[word.len() - 1], if off <= child / 2 { off } else { off - child })
                    };
                    local.insert(x, coord);
                }
            }
            region.insert(w, set);
        }
    }
    Ok(SupportRegions { root, root_radius, branching, frontier, local })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub k: usize,
    pub ell: u64,
    pub checked: usize,
    /// Elements moving a point outside every region.
    pub escaped: usize,
    /// Elements not preserving some region.
    pub not_preserved: usize,
    /// Elements whose branching factors differ from the canonical one under `ι`.
    pub undetermined: usize,
    pub root_radius: u64,
    pub root_region: usize,
    pub branching_region: usize,
    pub class_zero: usize,
    pub bound: IdentityReport,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.escaped == 0 && self.not_preserved == 0 && self.undetermined == 0 && self.bound.pass
    }
}

/// Factor of `g` on `region`, in local coordinates.
fn local_factor(g: &DensePerm, region: &BTreeSet<u16>, local: &HashMap<u16, (u8, i64)>) -> Option<Vec<((u8, i64), (u8, i64))>> {
    region
        .iter()
        .map(|&x| Some((*local.get(&x)?, *local.get(&g.apply(x))?)))
        .collect()
}

/// Checks that each `g ∈ U_k(ℓ_k, 0)` splits into factors on the root ball and the
/// neighbourhoods `𝔑(w, ℓ_k)`, that the factor at `𝔟(1^{k−1})` fixes every other branching
/// factor, and that `|U_k(ℓ_k, 0)| ≤ |B|!·|𝔑|!`.
pub fn bubble_support_factorization(model: &BubbleModel, u: &BubbleUSet) -> Result<FactorizationReport> {
    let regions = support_regions(model, u.k, u.ell)?;
    let zero = u.classes.get(&0).cloned().unwrap_or_default();
    let canonical_key = vec![1u8; u.k - 1];
    let canonical = regions.branching.get(&canonical_key).cloned().unwrap_or_default();
    let frontier_key = vec![1u8; model.spec.depth - 1];
    let mut covered: HashSet<u16> = regions.root.iter().copied().collect();
    let all_regions: Vec<&BTreeSet<u16>> =
        std::iter::once(&regions.root).chain(regions.branching.values()).chain(regions.frontier.values()).collect();
    for r in &all_regions[1..] {
        covered.extend(r.iter().copied());
    }
    let (mut escaped, mut not_preserved, mut undetermined) = (0, 0, 0);
    for &i in &zero {
        let g = &u.members[i];
        let moved = (0..g.degree() as u16).filter(|&x| g.apply(x) != x);
        if moved.clone().any(|x| !covered.contains(&x)) {
            escaped += 1;
            continue;
        }
        if all_regions.iter().any(|r| r.iter().any(|&x| g.apply(x) != x && !r.contains(&g.apply(x)))) {
            not_preserved += 1;
            continue;
        }
        let reference = local_factor(g, &canonical, &regions.local);
        let frontier_ref = regions.frontier.get(&frontier_key).and_then(|r| local_factor(g, r, &regions.local));
        let branching_ok = regions.branching.values().all(|r| local_factor(g, r, &regions.local) == reference);
        let frontier_ok = regions.frontier.values().all(|r| local_factor(g, r, &regions.local) == frontier_ref);
        if !(branching_ok && frontier_ok) {
            undetermined += 1;
        }
    }
    let lhs = (zero.len().max(1) as f64).ln();
    let rhs = ln_factorial(regions.root.len() as u64) + ln_factorial(canonical.len() as u64);
    let mut bound = IdentityReport::at_most("ln|U(l,0)| <= ln(|B|! |N|!)", lhs, rhs, 0.0);
    bound.pass = factorial_le(lhs, rhs);
    Ok(FactorizationReport {
        k: u.k,
        ell: u.ell,
        checked: zero.len(),
        escaped,
        not_preserved,
        undetermined,
        root_radius: regions.root_radius,
        root_region: regions.root.len(),
        branching_region: canonical.len(),
        class_zero: zero.len(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelled_graph::validate_around_root;
    use crate::scalar::Rational;

    #[test]
    fn graph_shape() {
        let spec = BubbleSpec::new(vec![4, 8], false).unwrap();
        let g = build_bubble(&spec).unwrap();
        assert_eq!(g.finite_vertices().unwrap().len(), 8 + 2 * 16);
        assert!(validate_around_root(&g, 10).unwrap().is_valid());
        assert_eq!(midpoint(&spec, 1), Vertex::bubble(&[], 2));
        let c = branching_cycle(&spec, &[]).unwrap();
        assert_eq!(c[1], Vertex::bubble(&[1], 0));
        let alpha = crate::labelled_graph::Letter::pos(1);
        assert_eq!(g.letter_action(&Vertex::bubble(&[], 0), alpha).unwrap(), Vertex::bubble(&[], 1));
    }

    #[test]
    fn level_one_set() {
        let model = BubbleModel::new(BubbleSpec::new(vec![8, 16], false).unwrap()).unwrap();
        let u = bubble_u_set(&model, 1, 1).unwrap();
        assert!(u.partition_equal());
        assert!(u.translation_conjugacy(&model));
        let (_, report) = bubble_test_function::<Rational>(&model, 1).unwrap();
        assert_eq!(report.energy_per_u, "1/6");
        assert!(report.ratio <= 1.5);
    }

    #[test]
    fn level_two_needs_depth() {
        let model = BubbleModel::new(BubbleSpec::new(vec![8, 16], false).unwrap()).unwrap();
        assert!(matches!(bubble_u_set(&model, 2, 3), Err(Error::CutoffExceeded(_))));
    }
}
