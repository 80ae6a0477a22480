//! Step measures, exact convolution, return probabilities and Monte Carlo.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{BaseGroup, Group};
use crate::labelled_graph::Vertex;
use crate::normal_form::{GluedGroup, GroupElement};
use crate::perm::FinPerm;
use crate::scalar::Scalar;

/// Tolerance on `mass + defect = 1` for floating point weights.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Symmetric step distribution. Atoms are sorted by element and merged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measure<E, S> {
    atoms: Vec<(E, S)>,
    defect: S,
    symmetric: bool,
}

fn merge_atoms<E: Ord + Clone, S: Scalar>(atoms: Vec<(E, S)>) -> Vec<(E, S)> {
    let mut map: BTreeMap<E, S> = BTreeMap::new();
    for (e, w) in atoms {
        let slot = map.entry(e).or_insert_with(S::zero);
        *slot = slot.clone() + w;
    }
    map.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

impl<E: Ord + Clone + fmt::Debug, S: Scalar> Measure<E, S> {
    /// Builds a measure, merging repeated atoms. Weights plus defect must sum to one.
    pub fn new<G: Group<Elem = E>>(group: &G, atoms: Vec<(E, S)>, defect: S) -> Result<Self> {
        if atoms.iter().any(|(_, w)| w.is_negative()) || defect.is_negative() {
            return Err(Error::InvalidParameter("negative weight".into()));
        }
        let atoms = merge_atoms(atoms);
        let total = atoms.iter().fold(defect.clone(), |acc, (_, w)| acc + w.clone());
        if !total.close_to(&S::one(), MASS_TOLERANCE) {
            return Err(Error::InvalidParameter(format!("total mass {total} differs from 1")));
        }
        let mut m = Measure { atoms, defect, symmetric: false };
        m.symmetric = m.check_symmetric(group);
        Ok(m)
    }

    /// Uniform measure on the given (distinct) elements.
    pub fn uniform<G: Group<Elem = E>>(group: &G, elements: Vec<E>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter("uniform measure on an empty set".into()));
        }
        let w = S::from_ratio(1, elements.len() as i64);
        Measure::new(group, elements.into_iter().map(|e| (e, w.clone())).collect(), S::zero())
    }

    fn check_symmetric<G: Group<Elem = E>>(&self, group: &G) -> bool {
        self.atoms.iter().all(|(e, w)| {
            let inv = group.inv(e);
            self.weight(&inv).close_to(w, 1e-15)
        })
    }

    pub fn atoms(&self) -> &[(E, S)] {
        &self.atoms
    }

    pub fn defect(&self) -> &S {
        &self.defect
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn weight(&self, e: &E) -> S {
        match self.atoms.binary_search_by(|(x, _)| x.cmp(e)) {
            Ok(i) => self.atoms[i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn mass(&self) -> S {
        self.atoms.iter().fold(S::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// `s_φ = Σ_{g ≠ id} φ(g)`.
    pub fn off_identity_mass(&self, identity: &E) -> S {
        self.mass() - self.weight(identity)
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.atoms.iter().map(|(e, _)| e)
    }

    /// Pushes the measure forward along an injective map, e.g. an embedding of a factor.
    pub fn map<F, G2>(&self, target: &G2, f: F) -> Result<Measure<G2::Elem, S>>
    where
        G2: Group,
        G2::Elem: fmt::Debug,
        F: Fn(&E) -> G2::Elem,
    {
        Measure::new(target, self.atoms.iter().map(|(e, w)| (f(e), w.clone())).collect(), self.defect.clone())
    }
}

/// Equal-weight mixture `ℓ⁻¹ Σ μ_i` of symmetric measures.
pub fn make_measure_q<G, S>(group: &G, components: &[Measure<G::Elem, S>]) -> Result<Measure<G::Elem, S>>
where
    G: Group,
    S: Scalar,
{
    if components.is_empty() {
        return Err(Error::InvalidParameter("mixture of no measures".into()));
    }
    if let Some(i) = components.iter().position(|m| !m.is_symmetric()) {
        return Err(Error::AsymmetricMeasure(format!("component {} is not symmetric", i + 1)));
    }
    let l = <S as Scalar>::from_usize(components.len());
    let mut atoms = Vec::new();
    let mut defect = S::zero();
    for m in components {
        atoms.extend(m.atoms.iter().map(|(e, w)| (e.clone(), w.clone() / l.clone())));
        defect = defect + m.defect.clone() / l.clone();
    }
    Measure::new(group, atoms, defect)
}

/// Parameter of the measures `ξ_α` on ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum XiParam {
    Power(f64),
    /// Uniform on `{-1, 0, 1}`.
    Simple,
    /// Dirac mass at 0.
    Trivial,
}

impl FromStr for XiParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "s" => Ok(XiParam::Simple),
            "t" => Ok(XiParam::Trivial),
            x => {
                let a: f64 = x.parse().map_err(|_| Error::Parse(format!("bad alpha `{x}`")))?;
                if a > 0.0 && a.is_finite() {
                    Ok(XiParam::Power(a))
                } else {
                    Err(Error::InvalidParameter(format!("alpha must be positive, got {a}")))
                }
            }
        }
    }
}

impl fmt::Display for XiParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiParam::Power(a) => write!(f, "{a}"),
            XiParam::Simple => write!(f, "s"),
            XiParam::Trivial => write!(f, "t"),
        }
    }
}

/// Riemann zeta for `s > 1` by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1");
    const N: usize = 32;
    // B_{2k} / (2k)!
    const COEF: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let n = N as f64;
    let head: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    let mut total = head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s; // s (s+1) ... (s+2k-2)
    for (k, c) in COEF.iter().enumerate() {
        let j = 2 * k + 1;
        total += c * rising * n.powf(-s - j as f64);
        rising *= (s + j as f64) * (s + j as f64 + 1.0);
    }
    total
}

/// Normalizing constant `c_α = 1 / (2ζ(α+1) − 1)`.
pub fn xi_constant(alpha: f64) -> f64 {
    1.0 / (2.0 * zeta(alpha + 1.0) - 1.0)
}

/// Largest number of atoms a truncated `ξ_α` may carry.
pub const XI_ATOM_CAP: usize = 1_000_000;

/// `ξ_α` on ℤ, truncated by mass: atoms `|m| ≤ M` carry mass at least `1 − ε`; the rest is defect.
pub fn make_xi_alpha(param: XiParam, eps: f64) -> Result<Measure<Vertex, f64>> {
    let z = BaseGroup::Integers;
    match param {
        XiParam::Simple => xi_simple(),
        XiParam::Trivial => xi_trivial(),
        XiParam::Power(alpha) => {
            if !(alpha > 0.0) {
                return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
            }
            if !(eps > 0.0 && eps <= 1e-3) {
                return Err(Error::InvalidParameter(format!("truncation {eps} outside (0, 1e-3]")));
            }
            let c = xi_constant(alpha);
            // Σ_{|m|>M} ξ(m) ≤ 2c ∫_{M+1}^∞ x^{-α-1} dx = 2c (M+1)^{-α} / α
            let m_f = (2.0 * c / (alpha * eps)).powf(1.0 / alpha).ceil() - 1.0;
            let m = m_f.max(0.0);
            if 2.0 * m + 1.0 > XI_ATOM_CAP as f64 {
                return Err(Error::BudgetExceeded(format!(
                    "xi_{alpha} at truncation {eps} needs {} atoms",
                    2.0 * m + 1.0
                )));
            }
            let m = m as i64;
            let mut atoms = Vec::with_capacity(2 * m as usize + 1);
            let mut mass = 0.0;
            for n in -m..=m {
                let w = c * (1.0 + n.abs() as f64).powf(-alpha - 1.0);
                mass += w;
                atoms.push((Vertex::Int(n), w));
            }
            let defect = (1.0 - mass).max(0.0);
            Measure::new(&z, atoms, defect)
        }
    }
}

pub fn xi_simple<S: Scalar>() -> Result<Measure<Vertex, S>> {
    let third = S::from_ratio(1, 3);
    Measure::new(
        &BaseGroup::Integers,
        (-1..=1).map(|n| (Vertex::Int(n), third.clone())).collect(),
        S::zero(),
    )
}

pub fn xi_trivial<S: Scalar>() -> Result<Measure<Vertex, S>> {
    Measure::new(&BaseGroup::Integers, vec![(Vertex::Int(0), S::one())], S::zero())
}

/// Houghton measure `q_p = C(k,2)⁻¹ Σ_{i<j} Σ_n p_{i,j}(n) δ_{h_{i,j}^n}`.
/// `family` gives `p_{i,j}` on ℤ for every pair `i < j`.
pub fn make_measure_houghton<S: Scalar>(
    group: &GluedGroup,
    rays: usize,
    family: &[((usize, usize), Measure<Vertex, S>)],
) -> Result<Measure<GroupElement, S>> {
    let pairs = rays * (rays - 1) / 2;
    if family.len() != pairs {
        return Err(Error::InvalidParameter(format!("expected {pairs} pair measures, got {}", family.len())));
    }
    let share = <S as Scalar>::from_usize(pairs);
    let mut atoms = Vec::new();
    let mut defect = S::zero();
    for ((i, j), p) in family {
        if !p.is_symmetric() {
            return Err(Error::AsymmetricMeasure(format!("p_{{{i},{j}}} is not symmetric")));
        }
        let h = houghton_generator(group, *i, *j)?;
        for (n, w) in p.atoms() {
            let n = match n {
                Vertex::Int(n) => *n,
                other => return Err(Error::InvalidParameter(format!("{other} is not an integer"))),
            };
            atoms.push((group.pow(&h, n), w.clone() / share.clone()));
        }
        defect = defect + p.defect().clone() / share.clone();
    }
    Measure::new(group, atoms, defect)
}

/// Normal form of `h_{i,j}`, translation by one along `R_i ∪ {o} ∪ R_j`.
pub fn houghton_generator(group: &GluedGroup, i: usize, j: usize) -> Result<GroupElement> {
    let f = move |x: &Vertex| crate::gluing::shift_along(x, i, j, 1);
    group.element_from_map(&f, 1)
}

/// Uniform measure on all `2·C(N,3)` three-cycles of the given points.
pub fn make_mu_n<G, S>(group: &G, points: &[Vertex]) -> Result<Measure<GroupElement, S>>
where
    G: Group<Elem = GroupElement>,
    S: Scalar,
{
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 points, got {}", points.len())));
    }
    let id = group.identity();
    let mut cycles = Vec::new();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            for c in b + 1..points.len() {
                for cyc in [[a, b, c], [a, c, b]] {
                    let p = FinPerm::cycle(&cyc.map(|i| points[i].clone()))?;
                    cycles.push(GroupElement { translations: id.translations.clone(), perm: p });
                }
            }
        }
    }
    Measure::uniform(group, cycles)
}

/// Sparse probability vector with tracked defect mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution<E: Ord, S> {
    weights: BTreeMap<E, S>,
    defect: S,
}

impl<E: Ord + Clone + Send + Sync, S: Scalar> Distribution<E, S> {
    pub fn delta(e: E) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(e, S::one());
        Distribution { weights, defect: S::zero() }
    }

    pub fn from_measure(m: &Measure<E, S>) -> Self {
        Distribution { weights: m.atoms.iter().cloned().collect(), defect: m.defect.clone() }
    }

    pub fn get(&self, e: &E) -> S {
        self.weights.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn defect(&self) -> &S {
        &self.defect
    }

    pub fn mass(&self) -> S {
        self.weights.values().fold(S::zero(), |acc, w| acc + w.clone())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &S)> {
        self.weights.iter()
    }

    /// `Σ_g d(g)²`.
    pub fn l2_squared(&self) -> S {
        self.weights.values().fold(S::zero(), |acc, w| acc + w.clone() * w.clone())
    }

    /// Moves atoms below the scalar's pruning threshold into the defect.
    fn prune(&mut self) {
        if let Some(threshold) = S::prune_threshold() {
            let small: Vec<E> =
                self.weights.iter().filter(|(_, w)| **w < threshold).map(|(e, _)| e.clone()).collect();
            for e in small {
                let w = self.weights.remove(&e).unwrap();
                self.defect = self.defect.clone() + w;
            }
        }
    }
}

const CONVOLUTION_CHUNK: usize = 256;

/// Left convolution: the walk steps `x ↦ y·x` with `y ~ m`.
pub fn convolve<G, S>(group: &G, d: &Distribution<G::Elem, S>, m: &Measure<G::Elem, S>) -> Distribution<G::Elem, S>
where
    G: Group,
    S: Scalar,
{
    let sources: Vec<(&G::Elem, &S)> = d.weights.iter().collect();
    let partials: Vec<Vec<(G::Elem, S)>> = sources
        .par_chunks(CONVOLUTION_CHUNK)
        .map(|chunk| {
            let mut out = Vec::with_capacity(chunk.len() * m.atoms.len());
            for (x, wx) in chunk {
                for (y, wy) in &m.atoms {
                    out.push((group.mul(y, x), (*wx).clone() * wy.clone()));
                }
            }
            out
        })
        .collect();
    let mut weights: BTreeMap<G::Elem, S> = BTreeMap::new();
    for part in partials {
        for (e, w) in part {
            let slot = weights.entry(e).or_insert_with(S::zero);
            *slot = slot.clone() + w;
        }
    }
    let defect = d.defect.clone() + m.defect.clone() * d.mass();
    let mut out = Distribution { weights, defect };
    out.prune();
    out
}

/// Distribution of the walk after `n` steps from the identity.
pub fn walk_distribution<G, S>(group: &G, m: &Measure<G::Elem, S>, n: usize) -> Distribution<G::Elem, S>
where
    G: Group,
    S: Scalar,
{
    let mut d = Distribution::delta(group.identity());
    for _ in 0..n {
        d = convolve(group, &d, m);
    }
    d
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnPoint {
    /// Number of steps (always even).
    pub steps: usize,
    pub phi_lower: f64,
    pub phi_upper: f64,
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub points: Vec<ReturnPoint>,
    /// `Φ(2(n+1)) ≤ Φ(2n)` on lower values, allowing for pruned defect.
    pub monotone: bool,
}

impl ReturnSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,phi_lower,phi_upper,defect\n");
        for p in &self.points {
            out.push_str(&format!("{},{:.17e},{:.17e},{:.17e}\n", p.steps, p.phi_lower, p.phi_upper, p.defect));
        }
        out
    }
}

/// `Φ(2n) = m^{(2n)}(id)` for `n = 1..=n_max`, as intervals `[value, value + defect]`.
pub fn return_probability<G, S>(group: &G, m: &Measure<G::Elem, S>, n_max: usize) -> Result<(ReturnSeries, Vec<S>)>
where
    G: Group,
    S: Scalar,
{
    if !m.is_symmetric() {
        return Err(Error::AsymmetricMeasure("return probabilities need a symmetric measure".into()));
    }
    let id = group.identity();
    let mut d = Distribution::delta(id.clone());
    let mut points = Vec::with_capacity(n_max);
    let mut exact = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        d = convolve(group, &d, m);
        d = convolve(group, &d, m);
        let v = d.get(&id);
        let defect = d.defect().as_f64();
        points.push(ReturnPoint { steps: 2 * n, phi_lower: v.as_f64(), phi_upper: v.as_f64() + defect, defect });
        exact.push(v);
    }
    let monotone = points.windows(2).all(|w| w[1].phi_lower <= w[0].phi_upper + 1e-15);
    Ok((ReturnSeries { points, monotone }, exact))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub steps: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub returns: u64,
}

impl MonteCarloEstimate {
    pub fn to_csv(&self) -> String {
        format!("n,estimate,stderr,trials\n{},{:.17e},{:.17e},{}\n", self.steps, self.estimate, self.stderr, self.trials)
    }
}

/// Estimates `m^{(n)}(id)`. Trial `i` draws from a ChaCha8 stream seeded by `master_seed`
/// with stream index `i`, so the result does not depend on scheduling. Landing in the
/// defect mass counts as not returning.
pub fn monte_carlo_return<G, S>(
    group: &G,
    m: &Measure<G::Elem, S>,
    n: usize,
    trials: u64,
    master_seed: u64,
) -> Result<MonteCarloEstimate>
where
    G: Group,
    S: Scalar,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(m.atoms.len());
    let mut acc = 0.0;
    for (_, w) in &m.atoms {
        acc += w.as_f64();
        cumulative.push(acc);
    }
    let id = group.identity();
    let returns: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
            rng.set_stream(trial);
            let mut x = id.clone();
            for _ in 0..n {
                let u: f64 = rng.random();
                let i = cumulative.partition_point(|c| *c <= u);
                if i >= m.atoms.len() {
                    return 0;
                }
                x = group.mul(&m.atoms[i].0, &x);
            }
            u64::from(x == id)
        })
        .sum();
    let p = returns as f64 / trials as f64;
    let stderr = if trials > 1 { (p * (1.0 - p) / (trials - 1) as f64).sqrt() } else { 0.0 };
    Ok(MonteCarloEstimate { steps: n, estimate: p, stderr, trials, returns })
}

/// Rate functions `ρ_α(s)` for `s ∈ (0, 1]`.
pub fn rho_alpha(param: XiParam, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (0, 1]")));
    }
    Ok(match param {
        XiParam::Trivial => 0.0,
        XiParam::Simple => s.powf(-0.5),
        XiParam::Power(a) if a < 2.0 => s.powf(-1.0 / a),
        XiParam::Power(a) if a == 2.0 => s.powf(-0.5) * (1.0 + (1.0 / s).ln()).sqrt(),
        XiParam::Power(_) => s.powf(-0.5),
    })
}
