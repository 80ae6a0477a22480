use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use piecewise::gluing::{glue, rooted_gluing, GluingSpec, Identification};
use piecewise::labelled_graph::{build_cayley, enumerate_ball, standard_generators, validate, ActionFn, Violation};
use piecewise::walk::{monte_carlo_return, return_probability, walk_distribution, Measure};
use piecewise::{BaseGroup, Error, GluedGroup, Group, LabelledGraph, PermGroup, Rational, Scalar, Sign, Vertex};

fn cayley(base: BaseGroup) -> LabelledGraph {
    let gens = standard_generators(&base);
    build_cayley(base, gens, None).unwrap()
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[test]
fn halving_map_is_rejected() {
    let halve: ActionFn = Arc::new(|v: &Vertex, s: Sign| match (v, s) {
        (Vertex::Int(n), Sign::Pos) => Vertex::Int(n.div_euclid(2)),
        (Vertex::Int(n), Sign::Neg) => Vertex::Int(2 * n),
        (v, _) => v.clone(),
    });
    let g = LabelledGraph::new("halve", vec!["h".into()], vec![halve], Vertex::Int(0), Arc::new(|v| matches!(v, Vertex::Int(_))));
    let ball = enumerate_ball(&g, &Vertex::Int(3), 3).unwrap();
    let report = validate(&g, &ball);
    assert!(!report.is_valid());
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::NonInjectiveAction { .. } | Violation::InverseMismatch { .. })));
}

#[test]
fn doubled_edge_is_rejected() {
    let vs: Vec<Vertex> = (0..3).map(Vertex::Int).collect();
    let edges = vec![(1, Vertex::Int(0), Vertex::Int(1)), (1, Vertex::Int(0), Vertex::Int(2))];
    let g = LabelledGraph::from_edges("bad", vs, vec!["a".into()], &edges, Vertex::Int(0)).unwrap();
    let ball = enumerate_ball(&g, g.root(), 2).unwrap();
    assert!(!validate(&g, &ball).is_valid());
}

#[test]
fn gluing_errors() {
    assert!(matches!(
        rooted_gluing(vec![cayley(BaseGroup::Integers), cayley(BaseGroup::Integers)]),
        Err(Error::AlphabetCollision(_))
    ));
    assert!(matches!(
        cayley(BaseGroup::Lattice(2)).with_letters(vec!["a".into(), "a".into()]),
        Err(Error::AlphabetCollision(_))
    ));
    let right = cayley(BaseGroup::Integers).with_letters(vec!["t".into()]).unwrap();
    let pairs = vec![(Vertex::Int(0), Vertex::Int(0)), (Vertex::Int(0), Vertex::Int(1))];
    assert!(matches!(
        glue(GluingSpec { left: cayley(BaseGroup::Integers), right, identification: Identification::Pairs(pairs) }),
        Err(Error::NonBijective(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ball_volumes(r in 0usize..7, b in 2u32..8) {
        let line = enumerate_ball(&cayley(BaseGroup::Integers), &Vertex::Int(0), r).unwrap();
        prop_assert_eq!(line.len(), 2 * r + 1);
        let plane = cayley(BaseGroup::Lattice(2));
        let ball = enumerate_ball(&plane, plane.root(), r).unwrap();
        prop_assert_eq!(ball.len(), 2 * r * r + 2 * r + 1);
        let cyc = cayley(BaseGroup::Cyclic(b));
        prop_assert_eq!(enumerate_ball(&cyc, cyc.root(), r).unwrap().len(), (2 * r + 1).min(b as usize));
        let a = cayley(BaseGroup::Integers);
        let c = a.clone().with_letters(vec!["t".into()]).unwrap();
        let cross = rooted_gluing(vec![a, c]).unwrap();
        let ball = enumerate_ball(&cross, cross.root(), r).unwrap();
        prop_assert_eq!(ball.len(), 4 * r + 1);
        prop_assert!(validate(&cross, &ball).is_valid());
    }

    #[test]
    fn integer_return_is_central_binomial(n in 1usize..12) {
        let z = BaseGroup::Integers;
        let m = Measure::<Vertex, Rational>::uniform(&z, vec![Vertex::Int(-1), Vertex::Int(1)]).unwrap();
        let (_, exact) = return_probability(&z, &m, n).unwrap();
        let n = n as u64;
        let expected = Rational::new(binomial(2 * n, n), BigInt::from(4).pow(n as u32));
        prop_assert_eq!(exact.last().unwrap().clone(), expected);
    }

    #[test]
    fn monte_carlo_repeats_per_seed(seed in any::<u64>()) {
        let g = PermGroup::alternating(5);
        let m = Measure::<_, f64>::uniform(&g, g.three_cycles()).unwrap();
        let a = monte_carlo_return(&g, &m, 4, 300, seed).unwrap();
        let b = monte_carlo_return(&g, &m, 4, 300, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn float_and_exact_walks_agree() {
    let g = GluedGroup::new(piecewise::gluing::pocket_extension(cayley(BaseGroup::Integers)).unwrap()).unwrap();
    let steps = g.symmetric_generators();
    let mf = Measure::<_, f64>::uniform(&g, steps.clone()).unwrap();
    let mq = Measure::<_, Rational>::uniform(&g, steps).unwrap();
    let (sf, _) = return_probability(&g, &mf, 5).unwrap();
    let (_, sq) = return_probability(&g, &mq, 5).unwrap();
    for (p, q) in sf.points.iter().zip(&sq) {
        assert!((p.phi_lower - q.as_f64()).abs() < 1e-14);
        assert!(p.phi_lower <= p.phi_upper);
    }
    let d = walk_distribution(&g, &mq, 6);
    assert_eq!(d.mass() + d.defect().clone(), Rational::from_ratio(1, 1));
}

#[test]
fn monte_carlo_tracks_exact_value() {
    // star of Z, 4 steps: exact return probability against a 5-sigma window
    let g = GluedGroup::new(piecewise::gluing::star_extension(cayley(BaseGroup::Integers)).unwrap()).unwrap();
    let m = Measure::<_, f64>::uniform(&g, g.symmetric_generators()).unwrap();
    let exact = walk_distribution(&g, &m, 4).get(&g.identity());
    let est = monte_carlo_return(&g, &m, 4, 20000, 99).unwrap();
    assert!((est.estimate - exact).abs() <= 5.0 * est.stderr.max(1e-3), "{} vs {exact}", est.estimate);
    let other = monte_carlo_return(&g, &m, 4, 20000, 100).unwrap();
    assert_ne!(est.returns, other.returns);
}

#[test]
fn alternating_walk_mixes_to_uniform() {
    let g = PermGroup::alternating(4);
    let m = Measure::<_, Rational>::uniform(&g, g.three_cycles()).unwrap();
    let d = walk_distribution(&g, &m, 12);
    assert_eq!(d.len(), 12);
    let uniform = 1.0 / 12.0;
    for (_, w) in d.iter() {
        assert!((w.as_f64() - uniform).abs() < 1e-3);
    }
}
