use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;

use piecewise::alternating::{exact_mixing_series, AlternatingModel};
use piecewise::bubble::{build_bubble, BubbleSpec};
use piecewise::curves::{ball_volume, window_volume, ReferenceCurve};
use piecewise::erschler::{ball_instance, edge_removal, erschler_graph, neighbor_growth_check};
use piecewise::gluing::{beta_extension, rooted_gluing, star_extension};
use piecewise::group::DensePerm;
use piecewise::io::{decode_cache, encode_cache, read_cache, write_cache};
use piecewise::labelled_graph::{build_cayley, enumerate_ball, standard_generators};
use piecewise::normal_form::normal_form;
use piecewise::profile::{dirichlet_form, ProfileKind, ProfilePoint, ProfileTable};
use piecewise::test_functions::{
    geodesic_word, product_test_function, star_transposition_word, tent, TestFunction,
};
use piecewise::walk::{make_measure_q, Measure, XiParam};
use piecewise::{BaseGroup, Error, FinPerm, GluedGroup, Group, LabelledGraph, Rational, Scalar, Vertex};

fn cayley(base: BaseGroup) -> LabelledGraph {
    let gens = standard_generators(&base);
    build_cayley(base, gens, None).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// `½ Σ_x Σ_y |f(yx) − f(x)|^p m(y)` over the support and everything one step from it.
fn energy_oracle<G: Group>(g: &G, m: &Measure<G::Elem, Rational>, f: &BTreeMap<G::Elem, Rational>, p: u8) -> Rational {
    let mut points: Vec<G::Elem> = f.keys().cloned().collect();
    for x in f.keys() {
        for (y, _) in m.atoms() {
            points.push(g.mul(&g.inv(y), x));
        }
    }
    points.sort();
    points.dedup();
    let value = |x: &G::Elem| f.get(x).cloned().unwrap_or_else(|| q(0, 1));
    let mut total = q(0, 1);
    for x in &points {
        for (y, w) in m.atoms() {
            let d = value(&g.mul(y, x)) - value(x);
            let d = if p == 1 { num_traits::Signed::abs(&d) } else { d.clone() * d };
            total += d * w.clone();
        }
    }
    total / q(2, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tent_norms_and_energy(r in 1i64..25) {
        let f = tent::<Rational>(r);
        prop_assert_eq!(f.l1_norm().clone(), q(r * r, 1));
        prop_assert_eq!(f.l2_squared().clone(), q(r * (2 * r * r + 1), 3));
        let z = BaseGroup::Integers;
        let m = Measure::uniform(&z, vec![Vertex::Int(-1), Vertex::Int(1)]).unwrap();
        // 2r unit jumps
        prop_assert_eq!(dirichlet_form(&z, &m, &f, 2), q(r, 1));
        prop_assert_eq!(dirichlet_form(&z, &m, &f, 1), q(r, 1));
    }

    #[test]
    fn cache_roundtrip(values in prop::collection::vec(0.0f64..2.0, 1..8), exact in any::<bool>()) {
        let points = values
            .iter()
            .enumerate()
            .map(|(i, v)| ProfilePoint { v: i + 1, value: *v, exact, witness: format!("{{w{i}}}") })
            .collect();
        let table = ProfileTable { kind: ProfileKind::L2, points };
        let text = encode_cache("profile", &table).unwrap();
        let back: ProfileTable = decode_cache("profile", &text).unwrap();
        prop_assert_eq!(&back, &table);
        prop_assert_eq!(encode_cache("profile", &back).unwrap(), text.clone());
        let wrong_kind = decode_cache::<ProfileTable>("ball", &text);
        prop_assert!(matches!(wrong_kind, Err(Error::CacheIntegrity(_))));
        let flipped = text.replacen("\"v\":1", "\"v\":9", 1);
        prop_assert!(matches!(decode_cache::<ProfileTable>("profile", &flipped), Err(Error::CacheIntegrity(_))));
    }
}

#[test]
fn cache_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let ball = enumerate_ball(&cayley(BaseGroup::Lattice(2)), &Vertex::Lattice(vec![0, 0]), 3).unwrap();
    let path = dir.path().join("ball.cache");
    write_cache(&path, "ball", &ball).unwrap();
    let back: piecewise::labelled_graph::BallEnumeration = read_cache(&path, "ball").unwrap();
    assert_eq!(back, ball);
}

#[test]
fn product_energy_against_direct_sum() {
    let bases = [BaseGroup::Integers, BaseGroup::Cyclic(3)];
    let comps = vec![cayley(bases[0].clone()), cayley(bases[1].clone()).with_letters(vec!["u".into()]).unwrap()];
    let g = GluedGroup::new(rooted_gluing(comps).unwrap()).unwrap();
    let mut measures = Vec::new();
    let mut parts = Vec::new();
    for (c, base) in bases.iter().enumerate() {
        let mut gens: Vec<Vertex> = standard_generators(base).into_iter().flat_map(|s| [base.inv(&s), s]).collect();
        gens.sort();
        gens.dedup();
        let embedded = gens.iter().map(|s| g.embed_component(c, s).unwrap()).collect();
        parts.push(Measure::uniform(&g, embedded).unwrap());
        measures.push(Measure::uniform(base, gens).unwrap());
    }
    let mix = make_measure_q(&g, &parts).unwrap();
    for p in [1u8, 2] {
        let (f, report) = product_test_function(&g, &[tent::<Rational>(3)], &measures, p).unwrap();
        assert!(report.passed());
        let expanded = f.materialize().unwrap();
        let values: BTreeMap<_, _> = expanded.iter().map(|(e, v)| (e.clone(), v.clone())).collect();
        let v_size = q(f.window_perms().unwrap().len() as i64, 1);
        assert_eq!(energy_oracle(&g, &mix, &values, p), v_size * f.energy_per_v(&g, &mix, p));
    }
}

#[test]
fn star_words_act_as_transpositions() {
    for base in [BaseGroup::Integers, BaseGroup::Lattice(2)] {
        let g = GluedGroup::new(star_extension(cayley(base.clone())).unwrap()).unwrap();
        let gens = standard_generators(&base);
        let probes = enumerate_ball(g.graph(), g.root(), 6).unwrap().vertices;
        for x in probes.iter().filter(|x| **x != base.identity()).take(30) {
            let sigma = geodesic_word(&base, &gens, x, 16).unwrap();
            let w = star_transposition_word(gens.len(), &sigma).unwrap();
            assert!(w.len() <= 8 * sigma.len());
            for y in &probes {
                let image = g.graph().word_action(y, &w).unwrap();
                let expected = if *y == base.identity() {
                    x.clone()
                } else if y == x {
                    base.identity()
                } else {
                    y.clone()
                };
                assert_eq!(image, expected, "word for {x} at {y}");
            }
            assert_eq!(normal_form(&g, &w).unwrap().perm, FinPerm::transposition(base.identity(), x.clone()));
        }
    }
}

#[test]
fn star_word_needs_a_geodesic() {
    assert!(geodesic_word(&BaseGroup::Integers, &[Vertex::Int(1)], &Vertex::Int(20), 5).is_err());
}

fn convolve(a: &HashMap<DensePerm, Rational>, steps: &[DensePerm]) -> HashMap<DensePerm, Rational> {
    let w = q(1, steps.len() as i64);
    let mut out: HashMap<DensePerm, Rational> = HashMap::new();
    for (x, v) in a {
        for s in steps {
            *out.entry(s.compose(x)).or_insert_with(|| q(0, 1)) += v.clone() * w.clone();
        }
    }
    out
}

#[test]
fn alternating_series_against_convolution() {
    for n in [4usize, 5] {
        let model = AlternatingModel::new(n).unwrap();
        let (exact, series) = exact_mixing_series::<Rational>(&model, 6);
        let id = DensePerm::identity(n);
        let mut d = HashMap::from([(id.clone(), q(1, 1))]);
        for value in exact.iter().skip(1) {
            d = convolve(&d, &model.cycles);
            assert_eq!(d.get(&id).cloned().unwrap_or_else(|| q(0, 1)), value.clone());
        }
        let c3 = (n * (n - 1) * (n - 2) / 6) as i64;
        assert_eq!(model.cycles.len() as i64, 2 * c3);
        assert_eq!(exact[2], q(1, 2 * c3));
        assert_eq!(exact[1], q(0, 1));
        assert!((series.limit - 2.0 / (1..=n).product::<usize>() as f64).abs() < 1e-15);
    }
    assert!(AlternatingModel::new(2).is_err());
}

#[test]
fn bubble_ball_volume_curve_matches_graph() {
    let a = vec![8u64, 16];
    let graph = build_bubble(&BubbleSpec::new(a.clone(), false).unwrap()).unwrap();
    let ball = enumerate_ball(&graph, graph.root(), 20).unwrap();
    for t in 1..=20 {
        // the curve ignores the root and the one-step delay of each branching cycle
        let upper = ball_volume(&a, t as f64).unwrap() + 1.0;
        let lower = ball_volume(&a, (t - 1) as f64).unwrap() + 1.0;
        let actual = ball.volume(t) as f64;
        assert!(lower <= actual && actual <= upper, "t={t}: {lower} <= {actual} <= {upper}");
    }
}

#[test]
fn reference_curves() {
    let rho = ReferenceCurve::Rho { param: "2".into() };
    assert!((rho.eval(0.25).unwrap() - 2.0 * (1.0 + 4f64.ln()).sqrt()).abs() < 1e-12);
    assert!(rho.eval(1.5).is_err());
    assert!("2".parse::<XiParam>().is_ok());
    // W_a at 2t = a_1 is a_1/2, at 2t = a_2 it adds the first level
    let a = [8u64, 16, 32];
    assert_eq!(window_volume(&a, 4.0).unwrap(), 4.0);
    assert_eq!(window_volume(&a, 8.0).unwrap(), 2.0 * 8.0 + 16.0);
    assert_eq!(ball_volume(&a, 0.0).unwrap(), 0.0);
    assert_eq!(ball_volume(&a, 8.0).unwrap(), 16.0);
    assert_eq!(ball_volume(&a, 24.0).unwrap(), 16.0 + 64.0);
    let power = ReferenceCurve::Power { exponent: 0.5 };
    assert_eq!(power.eval(16.0).unwrap(), 0.25);
}

#[test]
fn erschler_survivors_on_balls() {
    let z = cayley(BaseGroup::Integers);
    let g = GluedGroup::new(beta_extension(z, 2).unwrap()).unwrap();
    for radius in 2..=5 {
        let set = ball_instance(&g, radius);
        let graph = erschler_graph(&g, &set).unwrap();
        assert_eq!(graph.vertices.len(), set.iter().map(|e| &e.perm).collect::<std::collections::BTreeSet<_>>().len());
        for &(x, y) in &graph.edges {
            assert!(x < y && y < graph.vertices.len());
        }
        let removal = edge_removal(&graph, 1.0).unwrap();
        if removal.hypothesis {
            assert!(!removal.survivors.is_empty());
        }
        let growth = neighbor_growth_check(&removal.survivors, &removal.edges, 1).unwrap();
        assert_ne!(growth.bound_holds, Some(false));
    }
    assert!(edge_removal(&erschler_graph(&g, &ball_instance(&g, 2)).unwrap(), 0.5).is_err());
}

#[test]
fn test_function_bookkeeping() {
    let f = TestFunction::new([(Vertex::Int(0), q(2, 1)), (Vertex::Int(1), q(-1, 1)), (Vertex::Int(2), q(0, 1))]);
    assert_eq!(f.support_len(), 2);
    assert_eq!(f.l1_norm().clone(), q(3, 1));
    assert_eq!(f.l2_squared().clone(), q(5, 1));
    assert_eq!(f.norm_pow(1), q(3, 1));
    assert_eq!(f.norm_pow(2), q(5, 1));
    assert_eq!(f.get(&Vertex::Int(7)), q(0, 1));
    let ind = TestFunction::<Vertex, Rational>::indicator([Vertex::Int(3), Vertex::Int(4)]);
    assert_eq!(ind.norm_pow(2), q(2, 1));
    assert_eq!(q(1, 3).as_f64(), 1.0 / 3.0);
}
