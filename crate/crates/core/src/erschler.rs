//! Satisfactory-vertex graphs and edge removal for groups `Γ(β, G)`.
//!
//! An element is written `γ = g·τ` with `g` the eventual translation and `τ` a
//! finitely supported permutation. A `β`-step keeps `g` and changes `τ`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{group_ball, Group};
use crate::labelled_graph::{Letter, Vertex};
use crate::normal_form::{GluedGroup, GroupElement};
use crate::perm::FinPerm;
use crate::scalar::{factorial_le, ln_factorial};

/// One location `g` with `(g, τ) ∈ U`, and the targets of `β^{±1}` when they stay in `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub translation: Vertex,
    pub plus: Option<usize>,
    pub minus: Option<usize>,
}

/// The graph `(K(U), EK(U))` with, for each vertex, the locations where it occurs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatisfactoryGraph {
    pub vertices: Vec<FinPerm>,
    pub edges: BTreeSet<(usize, usize)>,
    pub locations: Vec<Vec<Location>>,
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Finds the `beta` letter of the group.
fn beta_letter(group: &GluedGroup) -> Result<GroupElement> {
    let g = group.graph();
    let i = g
        .letters()
        .iter()
        .position(|l| l == "beta")
        .ok_or_else(|| Error::InvalidParameter("group has no beta letter".into()))?;
    Ok(group.letter(Letter::pos(i + 1)))
}

fn translation_of(g: &GroupElement) -> Vertex {
    g.translations.first().cloned().unwrap_or(Vertex::Root)
}

/// Builds `K(U)`, `EK(U)` and the location lists.
pub fn erschler_graph(group: &GluedGroup, set: &[GroupElement]) -> Result<SatisfactoryGraph> {
    let beta = beta_letter(group)?;
    let beta_inv = group.inv(&beta);
    let members: HashSet<&GroupElement> = set.iter().collect();
    let vertices: Vec<FinPerm> =
        set.iter().map(|g| g.perm.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let index: BTreeMap<&FinPerm, usize> = vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut locations = vec![Vec::new(); vertices.len()];
    let mut edges = BTreeSet::new();
    let mut sorted: Vec<&GroupElement> = members.iter().copied().collect();
    sorted.sort();
    for gamma in sorted {
        let v = index[&gamma.perm];
        let mut targets = [None, None];
        for (slot, b) in targets.iter_mut().zip([&beta, &beta_inv]) {
            let next = group.mul(b, gamma);
            if next.translations != gamma.translations {
                return Err(Error::InvalidParameter("beta moved the translation part".into()));
            }
            if members.contains(&next) {
                let w = index[&next.perm];
                *slot = Some(w);
                edges.insert(edge(v, w));
            }
        }
        locations[v].push(Location { translation: translation_of(gamma), plus: targets[0], minus: targets[1] });
    }
    Ok(SatisfactoryGraph { vertices, edges, locations })
}

impl SatisfactoryGraph {
    /// Number of locations of vertex `v` with a `β`-edge inside the subgraph.
    pub fn count_in(&self, v: usize, alive: &[bool], edges: &BTreeSet<(usize, usize)>) -> usize {
        if !alive[v] {
            return 0;
        }
        self.locations[v]
            .iter()
            .filter(|loc| {
                [loc.plus, loc.minus]
                    .into_iter()
                    .flatten()
                    .any(|w| alive[w] && edges.contains(&edge(v, w)))
            })
            .count()
    }

    /// Satisfaction counts in the full graph: locations where a `β`-step stays in `U`.
    pub fn counts(&self) -> Vec<usize> {
        let alive = vec![true; self.vertices.len()];
        (0..self.vertices.len()).map(|v| self.count_in(v, &alive, &self.edges)).collect()
    }

    /// Edges with at least one end that is not `a`-satisfactory.
    pub fn non_satisfactory_edges(&self, a: f64) -> usize {
        let counts = self.counts();
        self.edges.iter().filter(|(x, y)| (counts[*x] as f64) < a || (counts[*y] as f64) < a).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRemoval {
    pub level: f64,
    /// Vertices left once every vertex is `(level/4)`-satisfactory.
    pub survivors: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
    pub rounds: usize,
    pub non_satisfactory_edges: usize,
    pub total_edges: usize,
    /// `|NS| ≤ ¼|E|` with `E` nonempty.
    pub hypothesis: bool,
}

/// Removes vertices that are not `(a/4)`-satisfactory, with their edges, until none remain.
/// Fails with `LemmaViolation` when the hypothesis `|NS| ≤ ¼|E|` holds but nothing survives.
pub fn edge_removal(graph: &SatisfactoryGraph, a: f64) -> Result<EdgeRemoval> {
    if a < 1.0 {
        return Err(Error::InvalidParameter(format!("level must be at least 1, got {a}")));
    }
    let n = graph.vertices.len();
    let mut alive = vec![true; n];
    let mut edges = graph.edges.clone();
    let threshold = a / 4.0;
    let mut rounds = 0;
    loop {
        let dead: Vec<usize> =
            (0..n).filter(|&v| alive[v] && (graph.count_in(v, &alive, &edges) as f64) < threshold).collect();
        if dead.is_empty() {
            break;
        }
        rounds += 1;
        for v in dead {
            alive[v] = false;
        }
        edges.retain(|(x, y)| alive[*x] && alive[*y]);
    }
    let ns = graph.non_satisfactory_edges(a);
    let total = graph.edges.len();
    let hypothesis = total > 0 && 4 * ns <= total;
    let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if hypothesis && survivors.is_empty() {
        return Err(Error::LemmaViolation(format!(
            "edge removal at level {a} emptied a graph with {ns} of {total} non-satisfactory edges"
        )));
    }
    Ok(EdgeRemoval { level: a, survivors, edges, rounds, non_satisfactory_edges: ns, total_edges: total, hypothesis })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub b: usize,
    pub vertices: usize,
    pub min_neighbours: usize,
    /// Every vertex has at least `2b` distinct neighbours.
    pub hypothesis: bool,
    /// `|K| ≥ b!`, checked only under the hypothesis.
    pub bound_holds: Option<bool>,
}

/// Checks `|K| ≥ b!` for a subgraph in which every vertex has at least `2b` neighbours.
pub fn neighbor_growth_check(vertices: &[usize], edges: &BTreeSet<(usize, usize)>, b: usize) -> Result<GrowthReport> {
    let alive: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut neighbours: BTreeMap<usize, BTreeSet<usize>> = alive.iter().map(|&v| (v, BTreeSet::new())).collect();
    for &(x, y) in edges {
        if alive.contains(&x) && alive.contains(&y) {
            neighbours.get_mut(&x).unwrap().insert(y);
            neighbours.get_mut(&y).unwrap().insert(x);
        }
    }
    let min_neighbours = neighbours.values().map(BTreeSet::len).min().unwrap_or(0);
    let hypothesis = !alive.is_empty() && min_neighbours >= 2 * b;
    let bound_holds = hypothesis.then(|| factorial_le(ln_factorial(b as u64), (alive.len() as f64).ln()));
    if bound_holds == Some(false) {
        return Err(Error::LemmaViolation(format!(
            "{} vertices with {min_neighbours} neighbours each, fewer than {b}!",
            alive.len()
        )));
    }
    Ok(GrowthReport { b, vertices: alive.len(), min_neighbours, hypothesis, bound_holds })
}

/// Ball of the given radius around the identity in the word metric of the letters.
pub fn ball_instance(group: &GluedGroup, radius: usize) -> Vec<GroupElement> {
    let steps = group.symmetric_generators();
    group_ball(group, &steps, radius).into_iter().map(|(g, _)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::beta_extension;
    use crate::group::BaseGroup;
    use crate::labelled_graph::build_cayley;

    fn gamma(b: u32) -> GluedGroup {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        GluedGroup::new(beta_extension(z, b).unwrap()).unwrap()
    }

    #[test]
    fn identity_only() {
        let g = gamma(3);
        let k = erschler_graph(&g, &[g.identity()]).unwrap();
        assert_eq!(k.vertices, vec![FinPerm::identity()]);
        assert!(k.edges.is_empty());
    }

    #[test]
    fn single_beta_step() {
        let g = gamma(3);
        let x = g.letter(Letter::pos(1));
        let beta = beta_letter(&g).unwrap();
        let u = vec![x.clone(), g.mul(&beta, &x)];
        let k = erschler_graph(&g, &u).unwrap();
        assert_eq!(k.vertices.len(), 2);
        assert_eq!(k.edges.len(), 1);
    }

    #[test]
    fn star_graph_empties() {
        let mut edges = BTreeSet::new();
        for leaf in 1..5 {
            edges.insert((0, leaf));
        }
        let r = neighbor_growth_check(&[0, 1, 2, 3, 4], &edges, 1).unwrap();
        assert!(!r.hypothesis);
        let r = neighbor_growth_check(&[0], &BTreeSet::new(), 0).unwrap();
        assert_eq!(r.bound_holds, Some(true));
    }

    #[test]
    fn ball_removal_runs() {
        let g = gamma(2);
        let u = ball_instance(&g, 3);
        let k = erschler_graph(&g, &u).unwrap();
        let r = edge_removal(&k, 1.0).unwrap();
        assert!(!r.survivors.is_empty());
    }
}
