//! Random 3-cycles on alternating groups, and comparison of 3-cycle walks with generator walks.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{group_ball, DensePerm, Group, PermGroup};
use crate::labelled_graph::{enumerate_ball, Embed, Letter, Structure, Vertex};
use crate::normal_form::{GluedGroup, GroupElement};
use crate::perm::FinPerm;
use crate::profile::{dirichlet_form, lambda_profile, ProfileTable};
use crate::scalar::Scalar;
use crate::test_functions::{geodesic_word, star_transposition_word, TestFunction};
use crate::walk::Measure;

/// Largest `N` handled by the dense model.
pub const MAX_DEGREE: usize = 8;

/// `A_N` with its element table and the uniform measure on 3-cycles.
#[derive(Clone, Debug)]
pub struct AlternatingModel {
    pub n: usize,
    pub elements: Vec<DensePerm>,
    pub cycles: Vec<DensePerm>,
    /// `pre[c][y]` = index of `c⁻¹·y`, so that `(μ * d)(y) = Σ_c μ(c) d(c⁻¹y)`.
    pre: Vec<Vec<u32>>,
    identity: usize,
}

impl AlternatingModel {
    pub fn new(n: usize) -> Result<Self> {
        if !(3..=MAX_DEGREE).contains(&n) {
            return Err(Error::InvalidParameter(format!("N = {n} outside 3..={MAX_DEGREE}")));
        }
        let group = PermGroup::alternating(n);
        let elements = group.elements();
        let index: HashMap<&DensePerm, u32> = elements.iter().enumerate().map(|(i, g)| (g, i as u32)).collect();
        let cycles = group.three_cycles();
        let pre = cycles
            .par_iter()
            .map(|c| {
                let ci = c.inverse();
                elements.iter().map(|y| index[&ci.compose(y)]).collect()
            })
            .collect();
        let identity = index[&DensePerm::identity(n)] as usize;
        Ok(AlternatingModel { n, elements, cycles, pre, identity })
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::alternating(self.n)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `μ_N`: uniform on the `2·C(N,3)` three-cycles.
    pub fn measure<S: Scalar>(&self) -> Result<Measure<DensePerm, S>> {
        Measure::uniform(&self.group(), self.cycles.clone())
    }

    /// One step `d ↦ μ_N * d` on dense vectors.
    pub fn step<S: Scalar>(&self, d: &[S]) -> Vec<S> {
        let w = S::from_ratio(1, self.cycles.len() as i64);
        (0..d.len())
            .into_par_iter()
            .map(|y| {
                let sum = self.pre.iter().fold(S::zero(), |acc, row| acc + d[row[y] as usize].clone());
                sum * w.clone()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingSeries {
    pub n: usize,
    /// `μ_N^{(t)}(id)` for `t = 0..=t_max`.
    pub values: Vec<f64>,
    /// `2/N!`.
    pub limit: f64,
    /// First `t` with `|(N!/2)·μ^{(t)}(id) − 1| ≤ ½`.
    pub crossing: Option<usize>,
}

impl MixingSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,return_probability,normalized\n");
        for (t, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{t},{v:.17e},{:.17e}\n", v / self.limit));
        }
        out
    }
}

/// Exact series `μ_N^{(t)}(id)`, `t ≤ t_max`.
pub fn exact_mixing_series<S: Scalar>(model: &AlternatingModel, t_max: usize) -> (Vec<S>, MixingSeries) {
    let mut d = vec![S::zero(); model.order()];
    d[model.identity] = S::one();
    let mut exact = vec![S::one()];
    for _ in 0..t_max {
        d = model.step(&d);
        exact.push(d[model.identity].clone());
    }
    let half_order = model.order() as f64;
    let values: Vec<f64> = exact.iter().map(|v| v.as_f64()).collect();
    let crossing = values.iter().position(|v| (half_order * v - 1.0).abs() <= 0.5);
    let series = MixingSeries { n: model.n, values, limit: 1.0 / half_order, crossing };
    (exact, series)
}

/// `Λ₂` of `A_N` under `μ_N` by exhaustive sweep over connected sets.
pub fn an_dirichlet_profile(model: &AlternatingModel, v_max: usize) -> Result<ProfileTable> {
    if v_max == 0 {
        return Err(Error::InvalidParameter("v_max must be positive".into()));
    }
    let mu = model.measure::<f64>()?;
    lambda_profile(&model.group(), &mu, v_max - 1, v_max, 2)
}

/// How transpositions are synthesized in a group.
#[derive(Clone, Debug)]
enum Synthesis {
    /// Pocket: `(*, x) = w τ w⁻¹` with `w` a path from the root to `x`.
    Pocket { tau: usize, base_letters: Vec<usize> },
    /// Star: `(e, x)` by the recursive star word.
    Star,
}

fn synthesis(group: &GluedGroup) -> Result<Synthesis> {
    match group.graph().structure() {
        Structure::Star { .. } => Ok(Synthesis::Star),
        Structure::Rooted(comps) if comps.len() == 2 && comps[1].embed == Embed::StarPoint => {
            let k0 = comps[0].generators.len();
            Ok(Synthesis::Pocket { tau: k0 + 1, base_letters: (1..=k0).collect() })
        }
        _ => Err(Error::Unsupported(format!("no 3-cycle synthesis for {}", group.name()))),
    }
}

/// Word `λ₁…λ_n` (acting last letter first) sending `from` to `to`, using the given letters.
fn path_word(group: &GluedGroup, letters: &[usize], from: &Vertex, to: &Vertex, max_len: usize) -> Result<Vec<Letter>> {
    let graph = group.graph();
    let mut parent: HashMap<Vertex, (Vertex, Letter)> = HashMap::new();
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    let mut seen = std::collections::HashSet::from([from.clone()]);
    while let Some((v, d)) = queue.pop_front() {
        if v == *to || d == max_len {
            continue;
        }
        for &g in letters {
            for l in [Letter::pos(g), Letter::neg(g)] {
                let w = graph.letter_action(&v, l)?;
                if seen.insert(w.clone()) {
                    parent.insert(w.clone(), (v.clone(), l));
                    queue.push_back((w, d + 1));
                }
            }
        }
    }
    if !seen.contains(to) {
        return Err(Error::CutoffExceeded(format!("{to} not reached from {from}")));
    }
    // walking back from `to` yields the letters in acting order reversed, i.e. word order
    let mut word = Vec::new();
    let mut cur = to.clone();
    while cur != *from {
        let (prev, l) = parent[&cur].clone();
        word.push(l);
        cur = prev;
    }
    Ok(word)
}

/// Hub point of the synthesis: `*` for pockets, the identity for stars.
fn hub(group: &GluedGroup, syn: &Synthesis) -> Vertex {
    match syn {
        Synthesis::Pocket { .. } => Vertex::Star,
        Synthesis::Star => group.graph().root().clone(),
    }
}

/// Word for the transposition `(hub, x)`.
fn hub_transposition(group: &GluedGroup, syn: &Synthesis, x: &Vertex) -> Result<Vec<Letter>> {
    match syn {
        Synthesis::Pocket { tau, base_letters } => {
            let w = path_word(group, base_letters, group.graph().root(), x, 256)?;
            let mut out = w.clone();
            out.push(Letter::pos(*tau));
            out.extend(crate::labelled_graph::inverse_word(&w));
            Ok(out)
        }
        Synthesis::Star => {
            let (base, generators) = match group.graph().structure() {
                Structure::Star { base, generators } => (base.clone(), generators.clone()),
                _ => unreachable!(),
            };
            let sigma = geodesic_word(&base, &generators, x, 256)?;
            star_transposition_word(generators.len(), &sigma)
        }
    }
}

/// Word for the transposition `(a, b)`: `(h a)(h b)(h a)` through the hub `h`.
pub fn transposition_word(group: &GluedGroup, a: &Vertex, b: &Vertex) -> Result<Vec<Letter>> {
    if a == b {
        return Err(Error::InvalidParameter(format!("degenerate transposition ({a} {a})")));
    }
    let syn = synthesis(group)?;
    let h = hub(group, &syn);
    if *a == h {
        return hub_transposition(group, &syn, b);
    }
    if *b == h {
        return hub_transposition(group, &syn, a);
    }
    let ta = hub_transposition(group, &syn, a)?;
    let tb = hub_transposition(group, &syn, b)?;
    Ok([ta.clone(), tb, ta].concat())
}

/// Word for the 3-cycle `(x y z)` as `(x z)(x y)`.
pub fn three_cycle_word(group: &GluedGroup, x: &Vertex, y: &Vertex, z: &Vertex) -> Result<Vec<Letter>> {
    if x == y || y == z || x == z {
        return Err(Error::InvalidParameter(format!("degenerate 3-cycle ({x} {y} {z})")));
    }
    Ok([transposition_word(group, x, z)?, transposition_word(group, x, y)?].concat())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub group: String,
    pub radius: usize,
    pub cycles: usize,
    /// `max |word| / max(d(o,x), d(o,y), d(o,z))`.
    pub d_constant: f64,
    pub max_word_length: usize,
    /// `max_γ u(γ)⁻¹ Σ_c μ(c)·|w_c|·#{γ in w_c}`; `E_μ ≤ A·E_u` for every function.
    pub comparison_constant: f64,
    pub samples: usize,
    /// Largest observed `E_μ(f,f) / E_u(f,f)`.
    pub max_observed_ratio: f64,
    pub comparison_holds: bool,
    /// Whether `E_μ ≤ D·r·E_u` held on the samples.
    pub d_r_holds: bool,
    pub words_evaluate: bool,
}

/// Synthesizes words for all 3-cycles on `B(o, r)`, derives the comparison constants and
/// checks `E_μ ≤ A·E_u` on `samples` random functions supported in a group ball.
pub fn cycle_comparison(group: &GluedGroup, r: usize, samples: usize, seed: u64) -> Result<ComparisonReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    let ball = enumerate_ball(group.graph(), group.graph().root(), r)?;
    let points: Vec<(Vertex, usize)> = ball.vertices.iter().cloned().zip(ball.distances.iter().copied()).collect();
    let steps: Vec<Letter> = (1..=group.graph().alphabet_size()).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
    let step_elems: Vec<GroupElement> = steps.iter().map(|&l| group.letter(l)).collect();
    // u uniform on distinct symmetric generators; letters with equal elements share weight
    let mut u_weight: BTreeMap<GroupElement, f64> = BTreeMap::new();
    for e in &step_elems {
        u_weight.insert(e.clone(), 0.0);
    }
    let wu = 1.0 / u_weight.len() as f64;
    for w in u_weight.values_mut() {
        *w = wu;
    }
    let mut cycles: Vec<(GroupElement, Vec<Letter>)> = Vec::new();
    let mut d_constant: f64 = 0.0;
    let mut max_len = 0;
    let mut words_evaluate = true;
    for i in 0..points.len() {
        for j in 0..points.len() {
            for k in 0..points.len() {
                if i == j || j == k || i == k || !(i < j && i < k) {
                    continue;
                }
                let (x, y, z) = (&points[i].0, &points[j].0, &points[k].0);
                let word = three_cycle_word(group, x, y, z)?;
                let mut target = group.identity();
                target.perm = FinPerm::cycle(&[x.clone(), y.clone(), z.clone()])?;
                words_evaluate &= group.word_element(&word) == target;
                let far = points[i].1.max(points[j].1).max(points[k].1).max(1);
                d_constant = d_constant.max(word.len() as f64 / far as f64);
                max_len = max_len.max(word.len());
                cycles.push((target, word));
            }
        }
    }
    let mu_c = 1.0 / cycles.len() as f64;
    let mut load: BTreeMap<&GroupElement, f64> = BTreeMap::new();
    for (_, word) in &cycles {
        for &l in word {
            let e = &step_elems[steps.iter().position(|s| *s == l).expect("letter")];
            *load.entry(e).or_default() += mu_c * word.len() as f64;
        }
    }
    let comparison_constant = load.iter().map(|(e, v)| v / u_weight[*e]).fold(0.0, f64::max);

    let mu = Measure::<GroupElement, f64>::uniform(group, cycles.iter().map(|(c, _)| c.clone()).collect())?;
    let u = Measure::<GroupElement, f64>::new(group, u_weight.into_iter().collect(), 0.0)?;
    let support: Vec<GroupElement> = group_ball(group, &group.symmetric_generators(), 2).into_iter().map(|(g, _)| g).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    let (mut comparison_holds, mut d_r_holds) = (true, true);
    for _ in 0..samples {
        let f = TestFunction::new(support.iter().map(|g| (g.clone(), rng.random::<f64>())));
        let em = dirichlet_form(group, &mu, &f, 2);
        let eu = dirichlet_form(group, &u, &f, 2);
        max_ratio = max_ratio.max(em / eu);
        comparison_holds &= em <= comparison_constant * eu * (1.0 + 1e-12);
        d_r_holds &= em <= d_constant * r as f64 * eu * (1.0 + 1e-12);
    }
    Ok(ComparisonReport {
        group: group.name(),
        radius: r,
        cycles: cycles.len(),
        d_constant,
        max_word_length: max_len,
        comparison_constant,
        samples,
        max_observed_ratio: max_ratio,
        comparison_holds,
        d_r_holds,
        words_evaluate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn small_series() {
        let m3 = AlternatingModel::new(3).unwrap();
        let (e, _) = exact_mixing_series::<Rational>(&m3, 2);
        assert_eq!(e[2], Rational::new(1.into(), 2.into()));
        let m4 = AlternatingModel::new(4).unwrap();
        let (e, s) = exact_mixing_series::<Rational>(&m4, 2);
        assert_eq!(e[2], Rational::new(1.into(), 8.into()));
        assert!((s.limit - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn singleton_profile() {
        let m = AlternatingModel::new(4).unwrap();
        let t = an_dirichlet_profile(&m, 2).unwrap();
        assert!((t.value(1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycle_rejected() {
        use crate::gluing::pocket_extension;
        use crate::group::BaseGroup;
        use crate::labelled_graph::build_cayley;
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let g = GluedGroup::new(pocket_extension(z).unwrap()).unwrap();
        let x = Vertex::Int(1);
        assert!(three_cycle_word(&g, &x, &x, &Vertex::Int(2)).is_err());
    }
}
