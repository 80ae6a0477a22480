//! Verification suites run by `piecewise verify` and by the acceptance tests.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use piecewise::alternating::{an_dirichlet_profile, cycle_comparison, exact_mixing_series, AlternatingModel};
use piecewise::bubble::{bubble_support_factorization, bubble_test_function, BubbleModel, BubbleSpec};
use piecewise::erschler::{ball_instance, edge_removal, erschler_graph, neighbor_growth_check};
use piecewise::gluing::{beta_extension, build_houghton, pocket_extension, star_extension, HoughtonSpec};
use piecewise::group::{enumerate_generated, DensePerm};
use piecewise::io::IdentityReport;
use piecewise::labelled_graph::{enumerate_ball, Letter};
use piecewise::normal_form::normal_form;
use piecewise::profile::{check_cheeger, lambda_profile, ProfileTable};
use piecewise::scalar::factorial;
use piecewise::test_functions::{check_star_word, houghton_test_function, product_test_function, star_test_function, tent, TestFunction};
use piecewise::walk::{make_measure_houghton, walk_distribution, Measure};
use piecewise::{BaseGroup, Error, FinPerm, GluedGroup, Group, GroupElement, Rational, Result, Vertex};

use crate::registry::{cayley, glued_measure, rooted};

pub const SUITES: &[&str] = &[
    "commutators",
    "finite-orders",
    "normal-forms",
    "z-profile",
    "cheeger",
    "bubble-energy",
    "test-functions",
    "star-words",
    "an-mixing",
    "cycle-comparison",
    "erschler",
];

/// Options shared by the suites; unused fields are ignored.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: Option<u64>,
    pub cases: usize,
    pub bubble: Vec<u64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: None, cases: 1000, bubble: vec![8, 16] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub identities: Vec<IdentityReport>,
    pub details: Vec<Value>,
}

impl SuiteReport {
    fn new(suite: &str, identities: Vec<IdentityReport>, details: Vec<Value>) -> Self {
        let passed = !identities.is_empty() && identities.iter().all(|r| r.pass);
        SuiteReport { suite: suite.into(), passed, identities, details }
    }

    pub fn failures(&self) -> Vec<&IdentityReport> {
        self.identities.iter().filter(|r| !r.pass).collect()
    }
}

fn count_check(name: impl Into<String>, failures: usize) -> IdentityReport {
    IdentityReport::exact(name, failures as f64, 0.0, failures == 0)
}

fn require_seed(opts: &SuiteOptions, suite: &str) -> Result<u64> {
    opts.seed.ok_or_else(|| Error::InvalidParameter(format!("suite {suite} is randomized and needs --seed")))
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "commutators" => commutators(require_seed(opts, name)?, opts.cases),
        "finite-orders" => finite_orders(),
        "normal-forms" => normal_forms(6),
        "z-profile" => z_profile(6),
        "cheeger" => cheeger(),
        "bubble-energy" => bubble_energy(&opts.bubble),
        "test-functions" => test_functions(),
        "star-words" => star_words(6),
        "an-mixing" => an_mixing(),
        "cycle-comparison" => comparison(require_seed(opts, name)?),
        "erschler" => erschler(require_seed(opts, name)?, 50),
        other => Err(Error::InvalidParameter(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    }
}

fn random_nonidentity(base: &BaseGroup, rng: &mut ChaCha8Rng) -> Vertex {
    match base {
        BaseGroup::Integers => {
            let n: i64 = rng.random_range(1..=8);
            Vertex::Int(if rng.random::<bool>() { n } else { -n })
        }
        BaseGroup::Cyclic(b) => Vertex::Residue(rng.random_range(1..*b)),
        other => panic!("no sampler for {}", other.describe()),
    }
}

/// Commutator checks in rooted gluings:
///
/// * `[g_i, g_j] = (o, g_i·o, g_j·o)`;
/// * `[σ, g_j] = (o, σ(o), g_j·o)` when `σ(o) ≠ o` and `σ` avoids the `j` branch, else trivial;
/// * `g_r g_s g_t = g_s g_r g_t · (g_t⁻¹o, g_t⁻¹g_r⁻¹o, g_t⁻¹g_s⁻¹o)`.
pub fn commutators(seed: u64, cases: usize) -> Result<SuiteReport> {
    let z = BaseGroup::Integers;
    let gluings: Vec<(&str, Vec<BaseGroup>)> = vec![
        ("Z,Z/2", vec![z.clone(), BaseGroup::Cyclic(2)]),
        ("Z,Z/3", vec![z.clone(), BaseGroup::Cyclic(3)]),
        ("Z,Z", vec![z.clone(), z.clone()]),
        ("Z,Z/2,Z/3", vec![z.clone(), BaseGroup::Cyclic(2), BaseGroup::Cyclic(3)]),
    ];
    let mut identities = Vec::new();
    let mut details = Vec::new();
    for (stream, (label, bases)) in gluings.iter().enumerate() {
        let g = GluedGroup::new(rooted(bases)?)?;
        let comps = g.components().expect("rooted gluing").to_vec();
        let o = g.root().clone();
        let id = g.identity();
        let cycle = |pts: [Vertex; 3]| -> Result<GroupElement> {
            Ok(GroupElement { translations: id.translations.clone(), perm: FinPerm::cycle(&pts)? })
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        let (mut com_fail, mut conj_fail, mut swap_fail) = (0, 0, 0);
        let (mut conj_moved, mut literal_swap_fail, mut t_equals_s) = (0, 0, 0);
        for _ in 0..cases {
            let i = rng.random_range(0..comps.len());
            let j = (i + rng.random_range(1..comps.len())) % comps.len();
            let (hi, hj) = (random_nonidentity(&comps[i].base, &mut rng), random_nonidentity(&comps[j].base, &mut rng));
            let (gi, gj) = (g.embed_component(i, &hi)?, g.embed_component(j, &hj)?);
            let (pi, pj) = (g.act(&gi, &o), g.act(&gj, &o));
            if g.commutator(&gi, &gj) != cycle([o.clone(), pi, pj.clone()])? {
                com_fail += 1;
            }

            // σ: an even permutation of o and points outside the j branch
            let mut pool = vec![o.clone()];
            for _ in 0..4 {
                let c = loop {
                    let c = rng.random_range(0..comps.len());
                    if c != j {
                        break c;
                    }
                };
                let p = g.component_point(c, &random_nonidentity(&comps[c].base, &mut rng))?;
                if !pool.contains(&p) {
                    pool.push(p);
                }
            }
            let mut sigma = FinPerm::identity();
            if pool.len() >= 3 {
                for _ in 0..rng.random_range(1..=2) {
                    let mut pts = pool.clone();
                    for k in 0..3 {
                        let r = rng.random_range(k..pts.len());
                        pts.swap(k, r);
                    }
                    sigma = FinPerm::cycle(&pts[..3])?.compose(&sigma);
                }
            }
            let s_o = sigma.apply(&o);
            let sigma = GroupElement { translations: id.translations.clone(), perm: sigma };
            let expect = if s_o != o {
                conj_moved += 1;
                cycle([o.clone(), s_o, pj])?
            } else {
                id.clone()
            };
            if g.commutator(&sigma, &gj) != expect {
                conj_fail += 1;
            }

            // swap relation for r ≠ s and any t
            let r = rng.random_range(0..comps.len());
            let s = (r + rng.random_range(1..comps.len())) % comps.len();
            let t = rng.random_range(0..comps.len());
            let er = g.embed_component(r, &random_nonidentity(&comps[r].base, &mut rng))?;
            let es = g.embed_component(s, &random_nonidentity(&comps[s].base, &mut rng))?;
            let et = g.embed_component(t, &random_nonidentity(&comps[t].base, &mut rng))?;
            let lhs = g.mul(&g.mul(&er, &es), &et);
            let base = g.mul(&g.mul(&es, &er), &et);
            let (ti, ri, si) = (g.inv(&et), g.inv(&er), g.inv(&es));
            let pts = [g.act(&ti, &o), g.act(&g.mul(&ti, &ri), &o), g.act(&g.mul(&ti, &si), &o)];
            if lhs != g.mul(&base, &cycle(pts)?) {
                swap_fail += 1;
            }
            if t == s {
                t_equals_s += 1;
                // literal reading with third entry g_s⁻¹·o
                let literal = [g.act(&ti, &o), g.act(&ri, &o), g.act(&si, &o)];
                let ok = FinPerm::cycle(&literal).map(|c| {
                    lhs == g.mul(&base, &GroupElement { translations: id.translations.clone(), perm: c })
                });
                if ok != Ok(true) {
                    literal_swap_fail += 1;
                }
            }
        }
        identities.push(count_check(format!("{label}: [g_i,g_j] = (o,g_i,g_j)"), com_fail));
        identities.push(count_check(format!("{label}: [sigma,g_j] = (o,sigma(o),g_j)"), conj_fail));
        identities.push(count_check(format!("{label}: g_r g_s g_t = g_s g_r g_t (cycle)"), swap_fail));
        details.push(json!({
            "gluing": label,
            "cases": cases,
            "sigma_moves_root": conj_moved,
            "t_equals_s": t_equals_s,
            "t_equals_s_literal_failures": literal_swap_fail,
        }));
    }
    let gb = GluedGroup::new(beta_extension(cayley(BaseGroup::Integers)?, 2)?)?;
    let (s, beta) = (gb.letter(Letter::pos(1)), gb.letter(Letter::pos(2)));
    let o = gb.root().clone();
    let expect = GroupElement {
        translations: gb.identity().translations,
        perm: FinPerm::cycle(&[o.clone(), gb.act(&s, &o), gb.act(&beta, &o)])?,
    };
    identities.push(count_check("gamma(beta2, Z): [s, beta] = (o, 1, *)", usize::from(gb.commutator(&s, &beta) != expect)));
    Ok(SuiteReport::new("commutators", identities, details))
}

/// Orders of pocket and star extensions of finite cyclic groups.
pub fn finite_orders() -> Result<SuiteReport> {
    let mut identities = Vec::new();
    for b in 2..=5u32 {
        let g = GluedGroup::new(pocket_extension(cayley(BaseGroup::Cyclic(b))?)?)?;
        let n = enumerate_generated(&g, g.generators(), 1_000_000)?.len();
        let expect = factorial(b as u64 + 1).unwrap() as f64;
        identities.push(IdentityReport::exact(format!("|pocket(Z/{b})| = {}!", b + 1), n as f64, expect, n as f64 == expect));
    }
    for b in 3..=5u32 {
        let g = GluedGroup::new(star_extension(cayley(BaseGroup::Cyclic(b))?)?)?;
        let n = enumerate_generated(&g, g.generators(), 1_000_000)?.len();
        let expect = factorial(b as u64).unwrap() as f64;
        identities.push(IdentityReport::exact(format!("|star(Z/{b})| = {b}!"), n as f64, expect, n as f64 == expect));
    }
    Ok(SuiteReport::new("finite-orders", identities, Vec::new()))
}

/// Word ball of pocket-of-ℤ: each element's graph evaluation matches its product normal form,
/// and distinct elements act differently on a window of the graph.
pub fn normal_forms(radius: usize) -> Result<SuiteReport> {
    let g = GluedGroup::new(pocket_extension(cayley(BaseGroup::Integers)?)?)?;
    let mut letters = Vec::new();
    for i in 1..=g.graph().alphabet_size() {
        letters.push(Letter::pos(i));
        letters.push(Letter::neg(i));
    }
    let mut words: HashMap<GroupElement, Vec<Letter>> = HashMap::new();
    words.insert(g.identity(), Vec::new());
    let mut layer = vec![g.identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &layer {
            for &l in &letters {
                let y = g.mul(&g.letter(l), x);
                if !words.contains_key(&y) {
                    let mut w = vec![l];
                    w.extend(words[x].iter().copied());
                    words.insert(y.clone(), w);
                    next.push(y);
                }
            }
        }
        next.sort();
        layer = next;
    }
    let window = enumerate_ball(g.graph(), g.root(), radius + 1)?.vertices;
    let mut mismatched = 0;
    let mut actions = HashSet::new();
    let mut forms = HashSet::new();
    let mut elems: Vec<_> = words.iter().collect();
    elems.sort();
    for (e, w) in elems {
        let nf = normal_form(&g, w)?;
        if nf != *e {
            mismatched += 1;
        }
        forms.insert(nf);
        actions.insert(window.iter().map(|x| g.act(e, x)).collect::<Vec<_>>());
    }
    let n = words.len() as f64;
    let identities = vec![
        count_check("graph evaluation = product normal form", mismatched),
        IdentityReport::exact("distinct normal forms = ball size", forms.len() as f64, n, forms.len() == words.len()),
        IdentityReport::exact("distinct window actions = ball size", actions.len() as f64, n, actions.len() == words.len()),
    ];
    let details = vec![json!({ "group": g.name(), "radius": radius, "ball": words.len(), "window": window.len() })];
    Ok(SuiteReport::new("normal-forms", identities, details))
}

fn simple_z() -> Result<Measure<Vertex, f64>> {
    Measure::uniform(&BaseGroup::Integers, vec![Vertex::Int(-1), Vertex::Int(1)])
}

fn is_interval(witness: &str) -> bool {
    let inner = witness.trim_start_matches('{').trim_end_matches('}');
    let mut xs: Vec<i64> = match inner.split(' ').map(str::parse).collect() {
        Ok(v) => v,
        Err(_) => return false,
    };
    xs.sort();
    xs.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Profiles of ℤ with the simple walk against `1/v` and `1 − cos(π/(v+1))`.
pub fn z_profile(v_max: usize) -> Result<SuiteReport> {
    let m = simple_z()?;
    let l1 = lambda_profile(&BaseGroup::Integers, &m, v_max + 1, v_max, 1)?;
    let l2 = lambda_profile(&BaseGroup::Integers, &m, v_max + 1, v_max, 2)?;
    let mut identities = Vec::new();
    for (a, b) in l1.points.iter().zip(&l2.points) {
        let v = a.v as f64;
        identities.push(IdentityReport::compare(format!("L1({}) = 1/v", a.v), a.value, 1.0 / v, 1e-12));
        let cos = 1.0 - (std::f64::consts::PI / (v + 1.0)).cos();
        identities.push(IdentityReport::compare(format!("L2({}) = 1 - cos(pi/(v+1))", b.v), b.value, cos, 1e-10));
        let exact = a.exact && b.exact;
        identities.push(count_check(format!("v={} exhaustive", a.v), usize::from(!exact)));
        let intervals = is_interval(&a.witness) && is_interval(&b.witness);
        identities.push(count_check(format!("v={} witnesses are intervals", a.v), usize::from(!intervals)));
    }
    let details = vec![serde_json::to_value(&l1)?, serde_json::to_value(&l2)?];
    Ok(SuiteReport::new("z-profile", identities, details))
}

/// The pair of tables used by the Cheeger suite for one group.
pub struct TablePair {
    pub name: String,
    pub l1: ProfileTable,
    pub l2: ProfileTable,
}

/// Profile tables of ℤ, `S₄` as pocket of `ℤ/3`, and `A₅` under `μ_N`.
pub fn cheeger_tables() -> Result<Vec<TablePair>> {
    let mut out = Vec::new();
    let m = simple_z()?;
    out.push(TablePair {
        name: "Z".into(),
        l1: lambda_profile(&BaseGroup::Integers, &m, 7, 6, 1)?,
        l2: lambda_profile(&BaseGroup::Integers, &m, 7, 6, 2)?,
    });
    let s4 = GluedGroup::new(pocket_extension(cayley(BaseGroup::Cyclic(3))?)?)?;
    let q = glued_measure::<f64>(&s4)?;
    out.push(TablePair {
        name: "S4 = pocket(Z/3)".into(),
        l1: lambda_profile(&s4, &q, 12, 12, 1)?,
        l2: lambda_profile(&s4, &q, 12, 12, 2)?,
    });
    let a5 = AlternatingModel::new(5)?;
    let mu = a5.measure::<f64>()?;
    out.push(TablePair {
        name: "A5 under mu_N".into(),
        l1: lambda_profile(&a5.group(), &mu, 3, 4, 1)?,
        l2: an_dirichlet_profile(&a5, 4)?,
    });
    Ok(out)
}

pub fn cheeger() -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut details = Vec::new();
    for t in cheeger_tables()? {
        let report = check_cheeger(&t.l1, &t.l2, 1e-10)?;
        identities.push(count_check(format!("{}: 1/2 L1^2 <= L2 <= L1", t.name), report.violations.len()));
        identities.push(count_check(format!("{}: exhaustive points checked", t.name), usize::from(report.checked.is_empty())));
        identities.push(count_check(
            format!("{}: tables nonincreasing", t.name),
            usize::from(!(t.l1.is_nonincreasing() && t.l2.is_nonincreasing())),
        ));
        details.push(json!({ "group": t.name, "checked": report.checked, "violations": report.violations }));
    }
    Ok(SuiteReport::new("cheeger", identities, details))
}

/// Exact energy identities and support factorization of the bubble test functions.
/// Levels whose `U_k` search exceeds the budget are reported in the details and skipped.
pub fn bubble_energy(a: &[u64]) -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut details = Vec::new();
    for pocket in [false, true] {
        let model = BubbleModel::new(BubbleSpec::new(a.to_vec(), pocket)?)?;
        for k in 1..a.len() {
            match bubble_test_function::<Rational>(&model, k) {
                Ok((u, report)) => {
                    let tag = format!("{} k={k}", report.group);
                    identities.push(count_check(format!("{tag}: partition equality"), usize::from(!report.partition_equal)));
                    identities.push(count_check(
                        format!("{tag}: class translation conjugacy"),
                        usize::from(!report.translation_conjugacy),
                    ));
                    for r in &report.identities {
                        identities.push(IdentityReport { identity: format!("{tag}: {}", r.identity), ..r.clone() });
                    }
                    let f = bubble_support_factorization(&model, &u)?;
                    identities.push(count_check(format!("{tag}: support factorization"), usize::from(!f.passed())));
                    details.push(json!({ "energy": report, "factorization": f }));
                }
                Err(e) if e.is_resource_limit() => {
                    details.push(json!({ "group": model.spec.describe(), "k": k, "skipped": e.to_string() }));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(SuiteReport::new("bubble-energy", identities, details))
}

fn uniform_q(base: &BaseGroup) -> Result<Measure<Vertex, Rational>> {
    let mut gens: Vec<Vertex> = piecewise::labelled_graph::standard_generators(base)
        .into_iter()
        .flat_map(|g| [base.inv(&g), g])
        .collect();
    gens.sort();
    gens.dedup();
    Measure::uniform(base, gens)
}

/// Product, star and Houghton test functions with their energy identities.
pub fn test_functions() -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut details = Vec::new();
    let mut push = |report: piecewise::test_functions::EnergyReport, identities: &mut Vec<IdentityReport>| {
        for r in &report.identities {
            identities.push(IdentityReport { identity: format!("{}: {}", report.construction, r.identity), ..r.clone() });
        }
        details.push(serde_json::to_value(&report).expect("report serializes"));
    };
    let z = BaseGroup::Integers;
    let products: Vec<(Vec<BaseGroup>, Vec<TestFunction<Vertex, Rational>>)> = vec![
        (vec![z.clone(), BaseGroup::Cyclic(2)], vec![tent(3)]),
        (vec![z.clone(), BaseGroup::Cyclic(3)], vec![tent(2)]),
        (vec![z.clone(), z.clone()], vec![tent(2), tent(2)]),
    ];
    for (bases, factors) in products {
        let g = GluedGroup::new(rooted(&bases)?)?;
        let measures = bases.iter().map(uniform_q).collect::<Result<Vec<_>>>()?;
        for p in [1u8, 2] {
            let (_, report) = product_test_function(&g, &factors, &measures, p)?;
            push(report, &mut identities);
        }
    }
    let star_z = GluedGroup::new(star_extension(cayley(z.clone())?)?)?;
    for p in [1u8, 2] {
        push(star_test_function::<Rational>(&star_z, &tent(4), p)?, &mut identities);
    }
    let star_z3 = GluedGroup::new(star_extension(cayley(BaseGroup::Cyclic(3))?)?)?;
    let phi = TestFunction::new([(Vertex::Residue(0), Rational::from_integer(2.into())), (Vertex::Residue(1), Rational::from_integer(1.into()))]);
    push(star_test_function::<Rational>(&star_z3, &phi, 2)?, &mut identities);

    let h = GluedGroup::new(build_houghton(&HoughtonSpec::standard(3), None)?)?;
    let family: Vec<((usize, usize), Measure<Vertex, Rational>)> =
        [(1, 2), (1, 3), (2, 3)].into_iter().map(|pair| Ok((pair, uniform_q(&z)?))).collect::<Result<_>>()?;
    let q = make_measure_houghton(&h, 3, &family)?;
    for r in 1..=3 {
        let (_, report) = houghton_test_function(&h, &tent::<Rational>(r), &family, &q, 2, None)?;
        push(report, &mut identities);
    }
    Ok(SuiteReport::new("test-functions", identities, details))
}

/// Star words for every base element of word length at most `max_len`.
pub fn star_words(max_len: usize) -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut details = Vec::new();
    let m = max_len as i64;
    let targets: Vec<(BaseGroup, Vec<Vertex>)> = vec![
        (BaseGroup::Integers, (-m..=m).filter(|&x| x != 0).map(Vertex::Int).collect()),
        (
            BaseGroup::Lattice(2),
            (-m..=m)
                .flat_map(|x| (-m..=m).map(move |y| (x, y)))
                .filter(|&(x, y)| (x, y) != (0, 0) && x.abs() + y.abs() <= m)
                .map(|(x, y)| Vertex::Lattice(vec![x, y]))
                .collect(),
        ),
    ];
    for (base, xs) in targets {
        let g = GluedGroup::new(star_extension(cayley(base.clone())?)?)?;
        let (mut wrong, mut long, mut longest) = (0, 0, 0.0f64);
        for x in &xs {
            let r = check_star_word(&g, x)?;
            wrong += usize::from(!r.is_transposition);
            long += usize::from(!r.within_bound);
            longest = longest.max(r.word_length as f64 / r.base_length as f64);
        }
        identities.push(count_check(format!("star({}): words evaluate to (e, x)", base.describe()), wrong));
        identities.push(count_check(format!("star({}): |word| <= 8|x|", base.describe()), long));
        details.push(json!({ "base": base.describe(), "targets": xs.len(), "max_length_ratio": longest }));
    }
    Ok(SuiteReport::new("star-words", identities, details))
}

/// Exact `μ_N` series on `A₄`–`A₆` and the `A₅` Dirichlet profile.
pub fn an_mixing() -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut details = Vec::new();
    for n in 4..=6usize {
        let model = AlternatingModel::new(n)?;
        let (_, series) = exact_mixing_series::<f64>(&model, 200);
        let rel = (series.values[200] / series.limit - 1.0).abs();
        identities.push(IdentityReport::at_most(format!("A{n}: |mu^(200)(id) N!/2 - 1|"), rel, 1e-10, 0.0));
        let (exact, _) = exact_mixing_series::<Rational>(&model, 2);
        let c3 = (n * (n - 1) * (n - 2) / 6) as i64;
        let oracle = Rational::new(1.into(), (2 * c3).into());
        identities.push(IdentityReport::exact(
            format!("A{n}: mu^(2)(id) = 1/(2 C(N,3))"),
            piecewise::Scalar::as_f64(&exact[2]),
            1.0 / (2 * c3) as f64,
            exact[2] == oracle,
        ));
        let d = walk_distribution(&model.group(), &model.measure::<Rational>()?, 2);
        let conv = d.get(&DensePerm::identity(n));
        identities.push(IdentityReport::exact(
            format!("A{n}: dense series = sparse convolution at t=2"),
            piecewise::Scalar::as_f64(&exact[2]),
            piecewise::Scalar::as_f64(&conv),
            exact[2] == conv,
        ));
        details.push(json!({ "n": n, "limit": series.limit, "crossing": series.crossing, "relative_error_200": rel }));
    }
    let a5 = AlternatingModel::new(5)?;
    let table = an_dirichlet_profile(&a5, 4)?;
    for p in &table.points {
        identities.push(IdentityReport::at_most(format!("A5: 1/2 <= L2({})", p.v), 0.5, p.value, 0.0));
        identities.push(count_check(format!("A5: L2({}) exhaustive", p.v), usize::from(!p.exact)));
    }
    details.push(serde_json::to_value(&table)?);
    Ok(SuiteReport::new("an-mixing", identities, details))
}

/// Comparison of the 3-cycle walk with the generator walk on pocket-ℤ and star-ℤ.
pub fn comparison(seed: u64) -> Result<SuiteReport> {
    let mut identities = Vec::new();
    let mut details = Vec::new();
    for graph in [pocket_extension(cayley(BaseGroup::Integers)?)?, star_extension(cayley(BaseGroup::Integers)?)?] {
        let g = GluedGroup::new(graph)?;
        let r = cycle_comparison(&g, 3, 5, seed)?;
        identities.push(count_check(format!("{}: 3-cycle words evaluate", r.group), usize::from(!r.words_evaluate)));
        identities.push(IdentityReport::at_most(
            format!("{}: E_mu <= A E_u", r.group),
            r.max_observed_ratio,
            r.comparison_constant,
            1e-9,
        ));
        details.push(serde_json::to_value(&r)?);
    }
    Ok(SuiteReport::new("cycle-comparison", identities, details))
}

/// Random subsets of balls in `Γ(β, ℤ)`: edge removal keeps a survivor whenever at most a
/// quarter of the edges are non-satisfactory, and the growth bound holds on the survivors.
pub fn erschler(seed: u64, wanted: usize) -> Result<SuiteReport> {
    let groups = [
        GluedGroup::new(beta_extension(cayley(BaseGroup::Integers)?, 2)?)?,
        GluedGroup::new(beta_extension(cayley(BaseGroup::Integers)?, 3)?)?,
    ];
    let balls: Vec<Vec<Vec<GroupElement>>> =
        groups.iter().map(|g| (2..=6).map(|r| ball_instance(g, r)).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut attempts, mut instances, mut with_hypothesis) = (0usize, 0usize, 0usize);
    let (mut empty, mut growth_checked, mut growth_failed) = (0usize, 0usize, 0usize);
    while with_hypothesis < wanted && attempts < 100 * wanted {
        attempts += 1;
        let gi = rng.random_range(0..groups.len());
        let ball = &balls[gi][rng.random_range(0..balls[gi].len())];
        let keep: f64 = rng.random_range(0.6..1.0);
        let set: Vec<GroupElement> = ball.iter().filter(|_| rng.random::<f64>() < keep).cloned().collect();
        if set.is_empty() {
            continue;
        }
        let graph = erschler_graph(&groups[gi], &set)?;
        let a: f64 = [1.0, 2.0, 3.0, 4.0][rng.random_range(0..4)];
        instances += 1;
        let removal = match edge_removal(&graph, a) {
            Ok(r) => r,
            Err(Error::LemmaViolation(_)) => {
                empty += 1;
                with_hypothesis += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if !removal.hypothesis {
            continue;
        }
        with_hypothesis += 1;
        empty += usize::from(removal.survivors.is_empty());
        for b in 1..=3 {
            match neighbor_growth_check(&removal.survivors, &removal.edges, b) {
                Ok(r) if r.hypothesis => growth_checked += 1,
                Ok(_) => {}
                Err(Error::LemmaViolation(_)) => {
                    growth_checked += 1;
                    growth_failed += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    let identities = vec![
        IdentityReport::at_most("instances with NS <= |E|/4", wanted as f64, with_hypothesis as f64, 0.0),
        count_check("edge removal leaves survivors", empty),
        count_check("|K| >= b! under the neighbour hypothesis", growth_failed),
    ];
    let details = vec![json!({
        "attempts": attempts,
        "instances": instances,
        "with_hypothesis": with_hypothesis,
        "growth_checks": growth_checked,
    })];
    Ok(SuiteReport::new("erschler", identities, details))
}
