//! Explicit test functions and their energy identities.
//!
//! The product, Houghton and star constructions share one shape: the value at
//! `γ = T(t)∘τ` is `1_V(τ)·f(t)` where `V` is the set of finitary permutations
//! supported in a window `W`. Left steps change `t` and multiply `τ` on the left
//! by a permutation `ρ` that depends only on the step and `t`, so energies can be
//! summed over `t` once and multiplied by `|V|`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{BaseGroup, Group};
use crate::io::IdentityReport;
use crate::labelled_graph::{Letter, LabelledGraph, Structure, Vertex};
use crate::normal_form::{star_points, GluedGroup, GroupElement};
use crate::perm::{FinPerm, Parity};
use crate::profile::dirichlet_form;
use crate::scalar::{ln_factorial, Scalar};
use crate::walk::{make_measure_q, Measure};

/// Largest number of group elements a test function may be expanded to.
pub const MATERIALIZE_BUDGET: usize = 2_000_000;

/// Finitely supported function on group elements. Zero values are not stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction<E: Ord, S> {
    values: BTreeMap<E, S>,
    l1: S,
    l2_squared: S,
}

impl<E: Ord + Clone, S: Scalar> TestFunction<E, S> {
    pub fn new(values: impl IntoIterator<Item = (E, S)>) -> Self {
        let values: BTreeMap<E, S> = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let l1 = values.values().fold(S::zero(), |a, v| a + v.abs());
        let l2_squared = values.values().fold(S::zero(), |a, v| a + v.clone() * v.clone());
        TestFunction { values, l1, l2_squared }
    }

    pub fn indicator(set: impl IntoIterator<Item = E>) -> Self {
        TestFunction::new(set.into_iter().map(|e| (e, S::one())))
    }

    pub fn get(&self, e: &E) -> S {
        self.values.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.values.keys()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.values.contains_key(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &S)> {
        self.values.iter()
    }

    pub fn l1_norm(&self) -> &S {
        &self.l1
    }

    pub fn l2_squared(&self) -> &S {
        &self.l2_squared
    }

    /// `‖f‖_p^p` for `p ∈ {1, 2}`.
    pub fn norm_pow(&self, p: u8) -> S {
        if p == 1 {
            self.l1.clone()
        } else {
            self.l2_squared.clone()
        }
    }
}

/// Tent `(r − |x|)` on the integers, supported on `|x| < r`.
pub fn tent<S: Scalar>(r: i64) -> TestFunction<Vertex, S> {
    TestFunction::new((1 - r..r).map(|x| (Vertex::Int(x), S::from_ratio(r - x.abs(), 1))))
}

/// `f(γ) = 1_V(τ)·g(t)` for `γ = T(t)∘τ`, with `V` the permutations supported in `window`
/// (even ones only when `alternating`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoredFunction<S> {
    pub translation_values: BTreeMap<Vec<Vertex>, S>,
    pub window: BTreeSet<Vertex>,
    pub alternating: bool,
}

impl<S: Scalar> FactoredFunction<S> {
    /// `ln |V|`.
    pub fn ln_v_size(&self) -> f64 {
        let w = self.window.len() as u64;
        let base = ln_factorial(w);
        if self.alternating && w >= 2 {
            base - std::f64::consts::LN_2
        } else {
            base
        }
    }

    /// `Σ_t |g(t)|^p`, so that `‖f‖_p^p = |V|·norm_per_v`.
    pub fn norm_per_v(&self, p: u8) -> S {
        self.translation_values.values().fold(S::zero(), |a, v| a + v.pow_p(p))
    }

    /// `E_q(f, f) / |V|`, exact for any symmetric `q`.
    pub fn energy_per_v(&self, group: &GluedGroup, q: &Measure<GroupElement, S>, p: u8) -> S {
        let two = S::from_ratio(2, 1);
        let mut total = S::zero();
        for (t, value) in &self.translation_values {
            let z = GroupElement { translations: t.clone(), perm: FinPerm::identity() };
            for (h, w) in q.atoms() {
                let moved = group.mul(h, &z);
                let inside = moved.perm.support().all(|x| self.window.contains(x));
                let next = self.translation_values.get(&moved.translations);
                let term = match next {
                    Some(nv) if inside => (nv.clone() - value.clone()).pow_p(p),
                    _ => two.clone() * value.pow_p(p),
                };
                total = total + term * w.clone();
            }
        }
        total / two
    }

    /// Permutations making up `V`.
    pub fn window_perms(&self) -> Result<Vec<FinPerm>> {
        let points: Vec<Vertex> = self.window.iter().cloned().collect();
        if self.ln_v_size() > (MATERIALIZE_BUDGET as f64).ln() {
            return Err(Error::BudgetExceeded(format!("{}! permutations of the window", points.len())));
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..points.len()).collect();
        loop {
            let p = FinPerm::from_pairs(idx.iter().enumerate().map(|(i, &j)| (points[i].clone(), points[j].clone())))?;
            if !self.alternating || p.parity() == Parity::Even {
                out.push(p);
            }
            if !next_permutation(&mut idx) {
                break;
            }
        }
        Ok(out)
    }

    /// Expands to an explicit function on group elements.
    pub fn materialize(&self) -> Result<TestFunction<GroupElement, S>> {
        let perms = self.window_perms()?;
        if perms.len().saturating_mul(self.translation_values.len()) > MATERIALIZE_BUDGET {
            return Err(Error::BudgetExceeded("test function support too large to expand".into()));
        }
        let mut values = Vec::with_capacity(perms.len() * self.translation_values.len());
        for (t, v) in &self.translation_values {
            for p in &perms {
                values.push((GroupElement { translations: t.clone(), perm: p.clone() }, v.clone()));
            }
        }
        Ok(TestFunction::new(values))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
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

/// Tensor product of per-coordinate functions.
fn product_values<S: Scalar>(factors: &[&TestFunction<Vertex, S>]) -> BTreeMap<Vec<Vertex>, S> {
    let mut acc: Vec<(Vec<Vertex>, S)> = vec![(Vec::new(), S::one())];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.support_len());
        for (t, v) in &acc {
            for (x, fx) in f.iter() {
                let mut t2 = t.clone();
                t2.push(x.clone());
                next.push((t2, v.clone() * fx.clone()));
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub construction: String,
    pub p: u8,
    pub window_size: usize,
    pub ln_v_size: f64,
    /// `E(f, f) / ‖f‖_p^p`.
    pub ratio: f64,
    pub identities: Vec<IdentityReport>,
}

impl EnergyReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|r| r.pass)
    }
}

fn tolerance<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-12
    }
}

fn equality<S: Scalar>(name: &str, lhs: &S, rhs: &S) -> IdentityReport {
    if S::EXACT {
        IdentityReport::exact(name, lhs.as_f64(), rhs.as_f64(), lhs == rhs)
    } else {
        let scale = rhs.as_f64().abs().max(1.0);
        IdentityReport::compare(name, lhs.as_f64(), rhs.as_f64(), tolerance::<S>() * scale)
    }
}

/// Expands the factored function and checks its energy and norm by direct summation.
fn brute_force_checks<S: Scalar>(
    group: &GluedGroup,
    q: &Measure<GroupElement, S>,
    f: &FactoredFunction<S>,
    p: u8,
    energy_per_v: &S,
    out: &mut Vec<IdentityReport>,
) {
    if let Ok(expanded) = f.materialize() {
        let v = <S as Scalar>::from_usize(f.window_perms().map(|x| x.len()).unwrap_or(0));
        let direct = dirichlet_form(group, q, &expanded, p);
        out.push(equality("energy (direct sum)", &direct, &(v.clone() * energy_per_v.clone())));
        out.push(equality("norm (direct sum)", &expanded.norm_pow(p), &(v * f.norm_per_v(p))));
    }
}

/// Product test function on a rooted gluing: `ψ(γ) = 1_V(τ) Π ψ_i(γ_i)`.
///
/// `factors[i]` is the function on the `i`-th infinite component; `measures[c]` is the
/// step measure of component `c` (every component, in gluing order).
pub fn product_test_function<S: Scalar>(
    group: &GluedGroup,
    factors: &[TestFunction<Vertex, S>],
    measures: &[Measure<Vertex, S>],
    p: u8,
) -> Result<(FactoredFunction<S>, EnergyReport)> {
    let comps = group.components().ok_or_else(|| Error::Unsupported("product test functions need a rooted gluing".into()))?;
    let infinite = group.infinite_components().to_vec();
    if factors.len() != infinite.len() || measures.len() != comps.len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} factor functions and {} measures",
            infinite.len(),
            comps.len()
        )));
    }
    let mut window = BTreeSet::new();
    for (f, &c) in factors.iter().zip(&infinite) {
        if f.support_len() == 0 {
            return Err(Error::InvalidParameter("factor function vanishes".into()));
        }
        for u in f.support() {
            window.insert(group.component_point(c, &comps[c].base.inv(u))?);
        }
    }
    for (c, comp) in comps.iter().enumerate() {
        if let Some(elems) = comp.base.elements() {
            for h in elems {
                window.insert(group.component_point(c, &h)?);
            }
        }
    }
    let refs: Vec<&TestFunction<Vertex, S>> = factors.iter().collect();
    let f = FactoredFunction {
        translation_values: product_values(&refs),
        window,
        alternating: !group.has_odd_generator(),
    };
    let embedded: Vec<Measure<GroupElement, S>> = measures
        .iter()
        .enumerate()
        .map(|(c, m)| {
            let atoms = m
                .atoms()
                .iter()
                .map(|(g, w)| Ok((group.embed_component(c, g)?, w.clone())))
                .collect::<Result<Vec<_>>>()?;
            Measure::new(group, atoms, m.defect().clone())
        })
        .collect::<Result<_>>()?;
    let q = make_measure_q(group, &embedded)?;
    let energy = f.energy_per_v(group, &q, p);
    let norm = f.norm_per_v(p);

    let mut prod_norms = S::one();
    let mut sum_ratios = S::zero();
    for (f_i, &c) in factors.iter().zip(&infinite) {
        let n_i = f_i.norm_pow(p);
        prod_norms = prod_norms * n_i.clone();
        sum_ratios = sum_ratios + dirichlet_form(&comps[c].base, &measures[c], f_i, p) / n_i;
    }
    let closed = prod_norms.clone() * sum_ratios / <S as Scalar>::from_usize(comps.len());
    let mut identities = vec![
        equality("energy / |V| = prod norms * mean component ratio", &energy, &closed),
        equality("norm / |V| = prod norms", &norm, &prod_norms),
    ];
    let total_u: usize = factors.iter().map(|f| f.support_len()).sum();
    let finite_total: usize = comps.iter().filter_map(|c| c.base.order()).sum();
    let ln_support = f.ln_v_size() + factors.iter().map(|f| (f.support_len() as f64).ln()).sum::<f64>();
    let ln_bound = (total_u as f64).ln() + ln_factorial((total_u + finite_total) as u64);
    identities.push(IdentityReport::at_most("ln support <= ln(sum|U| (sum|U| + sum|G_i|)!)", ln_support, ln_bound, 1e-9));
    brute_force_checks(group, &q, &f, p, &energy, &mut identities);
    let report = EnergyReport {
        construction: "product".into(),
        p,
        window_size: f.window.len(),
        ln_v_size: f.ln_v_size(),
        ratio: energy.as_f64() / norm.as_f64(),
        identities,
    };
    Ok((f, report))
}

/// Smallest `r` with the support of `psi` inside `(−r, r)`.
fn support_radius<S: Scalar>(psi: &TestFunction<Vertex, S>) -> Result<u64> {
    let mut r = 0;
    for x in psi.support() {
        match x {
            Vertex::Int(n) => r = r.max(n.unsigned_abs() + 1),
            other => return Err(Error::InvalidParameter(format!("{other} is not an integer"))),
        }
    }
    Ok(r)
}

/// `Ψ_s(g) = 1_{V_s}(τ) Π_{i<k} ψ_s(z_i)` on the Houghton group, with `V_s` the permutations
/// supported in the star of radius `(k+3)·r(s)`. `family` gives `p_{u,v}` for `u < v`;
/// `q` must be built from the same family. `window_radius` overrides the star radius.
pub fn houghton_test_function<S: Scalar>(
    group: &GluedGroup,
    psi: &TestFunction<Vertex, S>,
    family: &[((usize, usize), Measure<Vertex, S>)],
    q: &Measure<GroupElement, S>,
    p: u8,
    window_radius: Option<u64>,
) -> Result<(FactoredFunction<S>, EnergyReport)> {
    let k = group.houghton_rays().ok_or_else(|| Error::Unsupported("not a Houghton group".into()))?;
    let r = support_radius(psi)?;
    if psi.support().any(|x| !psi.contains(&BaseGroup::Integers.inv(x)) || psi.get(x) != psi.get(&BaseGroup::Integers.inv(x))) {
        return Err(Error::InvalidParameter("psi must be symmetric".into()));
    }
    let radius = window_radius.unwrap_or((k as u64 + 3) * r);
    let window: BTreeSet<Vertex> = star_points(k, radius).into_iter().collect();
    let factors: Vec<&TestFunction<Vertex, S>> = vec![psi; k - 1];
    let f = FactoredFunction { translation_values: product_values(&factors), window, alternating: false };
    let energy = f.energy_per_v(group, q, p);
    let norm = f.norm_per_v(p);
    let ratio = energy.as_f64() / norm.as_f64();
    let component_ratio = family
        .iter()
        .map(|(_, m)| dirichlet_form(&BaseGroup::Integers, m, psi, p).as_f64() / psi.norm_pow(p).as_f64())
        .fold(0.0, f64::max);

    let mut identities = Vec::new();
    let mut psi_power = S::one();
    for _ in 0..k - 1 {
        psi_power = psi_power * psi.norm_pow(p);
    }
    identities.push(equality("norm / |V_s| = ||psi||^(k-1)", &norm, &psi_power));
    identities.push(IdentityReport::at_most("ratio <= 2 s", ratio, 2.0 * component_ratio, 1e-12));
    // each step h_{u,v}^m moves (z_u, z_v) to (z_u + m, z_v − m)
    let mut mismatches = 0usize;
    for ((u, v), m) in family {
        let h = crate::walk::houghton_generator(group, *u, *v)?;
        for (n, _) in m.atoms() {
            let n = match n {
                Vertex::Int(n) => *n,
                _ => continue,
            };
            let hn = group.pow(&h, n);
            for t in f.translation_values.keys() {
                let z = GroupElement { translations: t.clone(), perm: FinPerm::identity() };
                let moved = group.mul(&hn, &z);
                let expect: Vec<Vertex> = t
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        let zi = match x {
                            Vertex::Int(a) => *a,
                            _ => 0,
                        };
                        let e = if i + 1 == *u { n } else if i + 1 == *v { -n } else { 0 };
                        Vertex::Int(zi + e)
                    })
                    .collect();
                if moved.translations != expect {
                    mismatches += 1;
                }
            }
        }
    }
    identities.push(IdentityReport::exact("shifted coordinates z' = z + eps m", mismatches as f64, 0.0, mismatches == 0));
    brute_force_checks(group, q, &f, p, &energy, &mut identities);
    let report = EnergyReport {
        construction: format!("houghton k={k} r={r}"),
        p,
        window_size: f.window.len(),
        ln_v_size: f.ln_v_size(),
        ratio,
        identities,
    };
    Ok((f, report))
}

/// Star measure `ν = ½(ν₁ + ν₂)`: `ν₁` uniform on `s_i^{±1}`, `ν₂` uniform on the `t_i`.
pub fn star_measures<S: Scalar>(group: &GluedGroup) -> Result<(Measure<GroupElement, S>, Measure<GroupElement, S>)> {
    let (_, generators) = star_structure(group.graph())?;
    let k = generators.len();
    let mut translations = Vec::new();
    for i in 1..=k {
        translations.push(group.letter(Letter::pos(i)));
        translations.push(group.letter(Letter::neg(i)));
    }
    translations.sort();
    translations.dedup();
    let nu1 = Measure::uniform(group, translations)?;
    let nu2 = Measure::uniform(group, (k + 1..=2 * k).map(|i| group.letter(Letter::pos(i))).collect())?;
    Ok((nu1, nu2))
}

fn star_structure(graph: &LabelledGraph) -> Result<(BaseGroup, Vec<Vertex>)> {
    match graph.structure() {
        Structure::Star { base, generators } => Ok((base.clone(), generators.clone())),
        _ => Err(Error::Unsupported("not a star extension".into())),
    }
}

/// `G ⋉ Sym(G)` for finite `G`: pairs `(g, τ)` acting as `T(g)∘τ`.
struct StarCover {
    base: BaseGroup,
    universe: Vec<Vertex>,
}

impl StarCover {
    /// `T(g)⁻¹ ∘ τ ∘ T(g)`.
    fn conjugate(&self, tau: &FinPerm, g: &Vertex) -> FinPerm {
        let gi = self.base.inv(g);
        let pairs = self.universe.iter().map(|x| (x.clone(), self.base.mul(&gi, &tau.apply(&self.base.mul(g, x)))));
        FinPerm::from_pairs(pairs).expect("conjugate of a permutation")
    }
}

impl Group for StarCover {
    type Elem = (Vertex, FinPerm);

    fn identity(&self) -> Self::Elem {
        (self.base.identity(), FinPerm::identity())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.mul(&a.0, &b.0), self.conjugate(&a.1, &b.0).compose(&b.1))
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let gi = self.base.inv(&a.0);
        (gi.clone(), self.conjugate(&a.1.inverse(), &gi))
    }
    fn encode(&self, a: &Self::Elem) -> String {
        format!("<{}>{}", a.0, a.1)
    }
    fn name(&self) -> String {
        format!("{} x Sym", self.base.describe())
    }
}

/// `ψ(γ) = 1_V(τ)·φ(g)` on a star extension with `V` the permutations supported in
/// `U⁻¹(S ∪ S⁻¹ ∪ {e})`, `U` the support of `φ`.
pub fn star_test_function<S: Scalar>(
    group: &GluedGroup,
    phi: &TestFunction<Vertex, S>,
    p: u8,
) -> Result<EnergyReport> {
    let (base, generators) = star_structure(group.graph())?;
    if phi.support_len() == 0 {
        return Err(Error::InvalidParameter("phi vanishes".into()));
    }
    let mut steps = vec![base.identity()];
    for s in &generators {
        steps.push(s.clone());
        steps.push(base.inv(s));
    }
    let mut window = BTreeSet::new();
    for u in phi.support() {
        let ui = base.inv(u);
        for s in &steps {
            window.insert(base.mul(&ui, s));
        }
    }
    let (nu1, nu2) = star_measures::<S>(group)?;
    let half = S::from_ratio(1, 2);
    let base_steps: Vec<(Vertex, S)> = steps[1..]
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|s| (s, S::zero()))
        .collect();
    let w = S::from_ratio(1, base_steps.len() as i64);
    let base_measure = Measure::new(&base, base_steps.into_iter().map(|(s, _)| (s, w.clone())).collect(), S::zero())?;
    let base_energy = dirichlet_form(&base, &base_measure, phi, p);
    let base_norm = phi.norm_pow(p);
    let mut identities = Vec::new();

    let (energy1, energy2, norm, ln_v) = if base.is_finite() {
        // ψ does not factor through Sym(G), so evaluate it on the cover G ⋉ Sym(G)
        let cover = StarCover { base: base.clone(), universe: base.elements().expect("finite base") };
        let e = base.identity();
        let perms =
            FactoredFunction::<S> { translation_values: BTreeMap::new(), window: window.clone(), alternating: false }
                .window_perms()?;
        let psi = TestFunction::new(
            phi.iter().flat_map(|(g, v)| perms.iter().map(move |t| ((g.clone(), t.clone()), v.clone()))),
        );
        let mut moves: Vec<(Vertex, FinPerm)> =
            steps[1..].iter().map(|s| (s.clone(), FinPerm::identity())).collect();
        moves.sort();
        moves.dedup();
        let c1 = Measure::uniform(&cover, moves)?;
        let c2 = Measure::uniform(
            &cover,
            generators.iter().map(|s| (e.clone(), FinPerm::transposition(e.clone(), s.clone()))).collect(),
        )?;
        let e1 = dirichlet_form(&cover, &c1, &psi, p);
        let e2 = dirichlet_form(&cover, &c2, &psi, p);
        let v = <S as Scalar>::from_usize(perms.len());
        identities.push(equality("nu1 term / |V| = base energy", &(e1.clone() / v), &base_energy));
        (e1, e2, psi.norm_pow(p), (perms.len() as f64).ln())
    } else {
        let f = FactoredFunction {
            translation_values: phi.iter().map(|(g, v)| (vec![g.clone()], v.clone())).collect(),
            window: window.clone(),
            alternating: false,
        };
        let e1 = f.energy_per_v(group, &nu1, p);
        let e2 = f.energy_per_v(group, &nu2, p);
        let nu = make_measure_q(group, &[nu1.clone(), nu2.clone()])?;
        let energy = f.energy_per_v(group, &nu, p);
        identities.push(equality("energy = (nu1 term + nu2 term) / 2", &energy, &((e1.clone() + e2.clone()) * half.clone())));
        identities.push(equality("nu1 term / |V| = base energy", &e1, &base_energy));
        brute_force_checks(group, &nu, &f, p, &energy, &mut identities);
        (e1, e2, f.norm_per_v(p), f.ln_v_size())
    };
    identities.push(IdentityReport::exact("nu2 cross term", energy2.as_f64(), 0.0, energy2.is_zero()));
    let ratio = ((energy1 + energy2) * half).as_f64() / norm.as_f64();
    let base_ratio = base_energy.as_f64() / base_norm.as_f64();
    identities.push(IdentityReport::at_most("ratio <= base ratio / 2", ratio, 0.5 * base_ratio, 1e-12));
    let k = steps.len() - 1;
    let ln_support = ln_v + (phi.support_len() as f64).ln();
    identities.push(IdentityReport::at_most(
        "ln support <= ln (|S| v)!",
        ln_support,
        ln_factorial((k * phi.support_len()) as u64),
        1e-9,
    ));
    Ok(EnergyReport {
        construction: format!("star({})", base.describe()),
        p,
        window_size: window.len(),
        ln_v_size: ln_v,
        ratio,
        identities,
    })
}

/// Shortest word in the Cayley letters `1..=k` of a star extension for the base element `x`.
pub fn geodesic_word(base: &BaseGroup, generators: &[Vertex], x: &Vertex, max_len: usize) -> Result<Vec<Letter>> {
    use std::collections::{HashMap, VecDeque};
    if !base.contains(x) {
        return Err(Error::MismatchedGroups(format!("{x} is not in {}", base.describe())));
    }
    let id = base.identity();
    let mut parent: HashMap<Vertex, (Vertex, Letter)> = HashMap::new();
    let mut queue = VecDeque::from([(id.clone(), 0usize)]);
    let mut seen = BTreeSet::from([id.clone()]);
    while let Some((g, d)) = queue.pop_front() {
        if g == *x {
            break;
        }
        if d == max_len {
            continue;
        }
        for (i, s) in generators.iter().enumerate() {
            for (l, step) in [(Letter::pos(i + 1), s.clone()), (Letter::neg(i + 1), base.inv(s))] {
                // word σ₁…σ_ℓ evaluates to σ₁·…·σ_ℓ; extend on the right
                let h = base.mul(&g, &step);
                if seen.insert(h.clone()) {
                    parent.insert(h.clone(), (g.clone(), l));
                    queue.push_back((h, d + 1));
                }
            }
        }
    }
    if !seen.contains(x) {
        return Err(Error::CutoffExceeded(format!("{x} not reached within {max_len} steps")));
    }
    let mut word = Vec::new();
    let mut cur = x.clone();
    while cur != id {
        let (prev, l) = parent[&cur].clone();
        word.push(l);
        cur = prev;
    }
    word.reverse();
    Ok(word)
}

/// Word in the letters of a star extension for the transposition `(e, x)`, where
/// `x = σ₁…σ_ℓ`: `t_{σ₁} σ₁ W(σ₂…σ_ℓ) σ₁⁻¹ t_{σ₁}`, ending in `t_{σ_ℓ}`.
pub fn star_transposition_word(k: usize, sigma: &[Letter]) -> Result<Vec<Letter>> {
    if sigma.is_empty() {
        return Err(Error::InvalidParameter("empty word".into()));
    }
    // t_σ: t_i for σ = s_i, and s_i⁻¹ t_i s_i for σ = s_i⁻¹
    let t_of = |l: Letter| -> Vec<Letter> {
        let t = Letter::pos(k + l.generator);
        match l.sign {
            crate::labelled_graph::Sign::Pos => vec![t],
            crate::labelled_graph::Sign::Neg => vec![Letter::neg(l.generator), t, Letter::pos(l.generator)],
        }
    };
    let mut word = t_of(sigma[sigma.len() - 1]);
    for &l in sigma[..sigma.len() - 1].iter().rev() {
        let t = t_of(l);
        let mut next = t.clone();
        next.push(l);
        next.extend(word);
        next.push(l.inverse());
        next.extend(t);
        word = next;
    }
    Ok(word)
}

/// Report for a star word: the evaluated transposition and the length bound `8ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarWordReport {
    pub target: String,
    pub word_length: usize,
    pub base_length: usize,
    pub is_transposition: bool,
    pub within_bound: bool,
}

pub fn check_star_word(group: &GluedGroup, x: &Vertex) -> Result<StarWordReport> {
    let (base, generators) = star_structure(group.graph())?;
    let sigma = geodesic_word(&base, &generators, x, 64)?;
    let word = star_transposition_word(generators.len(), &sigma)?;
    let g = group.word_element(&word);
    let expected = FinPerm::transposition(base.identity(), x.clone());
    let is_transposition = g.perm == expected && g.translations.iter().all(|t| *t == base.identity());
    Ok(StarWordReport {
        target: x.to_string(),
        word_length: word.len(),
        base_length: sigma.len(),
        is_transposition,
        within_bound: word.len() <= 8 * sigma.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::{rooted_gluing, star_extension};
    use crate::labelled_graph::build_cayley;
    use crate::scalar::Rational;

    #[test]
    fn star_word_on_integers() {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let g = GluedGroup::new(star_extension(z).unwrap()).unwrap();
        for x in [1, 2, -3] {
            let r = check_star_word(&g, &Vertex::Int(x)).unwrap();
            assert!(r.is_transposition && r.within_bound, "{r:?}");
        }
    }

    #[test]
    fn product_identity_z_z2() {
        let z = build_cayley(BaseGroup::Integers, vec![Vertex::Int(1)], None).unwrap();
        let c = build_cayley(BaseGroup::Cyclic(2), vec![Vertex::Residue(1)], None)
            .unwrap()
            .with_letters(vec!["beta".into()])
            .unwrap();
        let g = GluedGroup::new(rooted_gluing(vec![z, c]).unwrap()).unwrap();
        let mu1 = Measure::<Vertex, Rational>::uniform(&BaseGroup::Integers, vec![Vertex::Int(-1), Vertex::Int(1)]).unwrap();
        let mu2 = Measure::<Vertex, Rational>::uniform(&BaseGroup::Cyclic(2), vec![Vertex::Residue(1)]).unwrap();
        let (_, report) = product_test_function(&g, &[tent(2)], &[mu1, mu2], 2).unwrap();
        assert!(report.passed(), "{report:#?}");
    }

    #[test]
    fn finite_star_on_cover() {
        let z3 = build_cayley(BaseGroup::Cyclic(3), vec![Vertex::Residue(1)], None).unwrap();
        let g = GluedGroup::new(star_extension(z3).unwrap()).unwrap();
        let phi = TestFunction::new([(Vertex::Residue(0), Rational::from_integer(2.into())), (Vertex::Residue(1), Rational::from_integer(1.into()))]);
        let r = star_test_function::<Rational>(&g, &phi, 2).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn permutations_enumerated() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
