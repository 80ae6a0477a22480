use proptest::prelude::*;

use piecewise::gluing::pocket_extension;
use piecewise::group::{enumerate_generated, group_ball};
use piecewise::labelled_graph::{build_cayley, standard_generators};
use piecewise::profile::{
    boundary_measure, check_cheeger, dirichlet_eigenvalue, lambda_profile, lambda_profile_with, Side, SweepOptions,
};
use piecewise::walk::Measure;
use piecewise::{BaseGroup, GluedGroup, Group, PermGroup, Vertex};

fn symmetric_four() -> (GluedGroup, Measure<piecewise::GroupElement, f64>) {
    let c3 = build_cayley(BaseGroup::Cyclic(3), standard_generators(&BaseGroup::Cyclic(3)), None).unwrap();
    let g = GluedGroup::new(pocket_extension(c3).unwrap()).unwrap();
    let m = Measure::uniform(&g, g.symmetric_generators()).unwrap();
    (g, m)
}

fn cyclic(b: u32) -> (BaseGroup, Measure<Vertex, f64>) {
    let z = BaseGroup::Cyclic(b);
    let m = Measure::uniform(&z, vec![Vertex::Residue(1), Vertex::Residue(b - 1)]).unwrap();
    (z, m)
}

/// Minimum over every subset containing the identity, by bitmask.
fn brute_force<G: Group>(g: &G, m: &Measure<G::Elem, f64>, elems: &[G::Elem], v_max: usize) -> Vec<(f64, f64)> {
    let id = g.identity();
    let others: Vec<&G::Elem> = elems.iter().filter(|e| **e != id).collect();
    let mut best = vec![(f64::INFINITY, f64::INFINITY); v_max + 1];
    for mask in 0u32..(1 << others.len()) {
        let size = mask.count_ones() as usize + 1;
        if size > v_max {
            continue;
        }
        let mut set = vec![id.clone()];
        set.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| (*e).clone()));
        let l1 = boundary_measure(g, m, &set) / size as f64;
        let l2 = dirichlet_eigenvalue(g, m, &set).unwrap();
        best[size].0 = best[size].0.min(l1);
        best[size].1 = best[size].1.min(l2);
    }
    for v in 2..=v_max {
        best[v].0 = best[v].0.min(best[v - 1].0);
        best[v].1 = best[v].1.min(best[v - 1].1);
    }
    best
}

fn assert_matches_brute_force<G: Group>(g: &G, m: &Measure<G::Elem, f64>, v_max: usize) {
    let elems = enumerate_generated(g, &m.support().cloned().collect::<Vec<_>>(), 10_000).unwrap();
    let truth = brute_force(g, m, &elems, v_max);
    let l1 = lambda_profile(g, m, elems.len(), v_max, 1).unwrap();
    let l2 = lambda_profile(g, m, elems.len(), v_max, 2).unwrap();
    for v in 1..=v_max {
        assert!((l1.value(v).unwrap() - truth[v].0).abs() < 1e-10, "{} L1({v})", g.name());
        assert!((l2.value(v).unwrap() - truth[v].1).abs() < 1e-10, "{} L2({v})", g.name());
    }
}

#[test]
fn connected_sweep_matches_all_subsets() {
    for b in [5, 7, 9] {
        let (z, m) = cyclic(b);
        assert_matches_brute_force(&z, &m, b as usize);
    }
    let (s3, m) = {
        let c2 = build_cayley(BaseGroup::Cyclic(2), standard_generators(&BaseGroup::Cyclic(2)), None).unwrap();
        let g = GluedGroup::new(pocket_extension(c2).unwrap()).unwrap();
        let m = Measure::uniform(&g, g.symmetric_generators()).unwrap();
        (g, m)
    };
    assert_matches_brute_force(&s3, &m, 6);
    let a4 = PermGroup::alternating(4);
    let m = Measure::uniform(&a4, a4.three_cycles()).unwrap();
    assert_matches_brute_force(&a4, &m, 8);
}

#[test]
fn restricted_sweep_agrees_with_unrestricted_on_s4() {
    let (g, m) = symmetric_four();
    let fast = lambda_profile(&g, &m, 8, 8, 2).unwrap();
    let opts = SweepOptions { unrestricted: true, ..SweepOptions::default() };
    let slow = lambda_profile_with(&g, &m, 8, 8, 2, opts).unwrap();
    for v in 1..=8 {
        assert!((fast.value(v).unwrap() - slow.value(v).unwrap()).abs() < 1e-10, "v={v}");
    }
}

#[test]
fn left_and_right_profiles_agree() {
    // x -> x^-1 swaps left and right boundaries of a symmetric measure
    let (g, m) = symmetric_four();
    for p in [1, 2] {
        let left = lambda_profile(&g, &m, 7, 7, p).unwrap();
        let opts = SweepOptions { side: Side::Right, ..SweepOptions::default() };
        let right = lambda_profile_with(&g, &m, 7, 7, p, opts).unwrap();
        for v in 1..=7 {
            assert!((left.value(v).unwrap() - right.value(v).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn whole_finite_group_has_no_boundary() {
    let (z, m) = cyclic(6);
    let t = lambda_profile(&z, &m, 6, 6, 1).unwrap();
    assert!(t.value(6).unwrap().abs() < 1e-12);
    let t = lambda_profile(&z, &m, 6, 6, 2).unwrap();
    assert!(t.value(6).unwrap().abs() < 1e-10);
}

#[test]
fn integer_intervals() {
    let z = BaseGroup::Integers;
    let m = Measure::<_, f64>::uniform(&z, vec![Vertex::Int(-1), Vertex::Int(1)]).unwrap();
    for v in 1..12i64 {
        let interval: Vec<Vertex> = (0..v).map(Vertex::Int).collect();
        assert!((boundary_measure(&z, &m, &interval) - 1.0).abs() < 1e-15);
        let lambda = dirichlet_eigenvalue(&z, &m, &interval).unwrap();
        let expected = 1.0 - (std::f64::consts::PI / (v + 1) as f64).cos();
        assert!((lambda - expected).abs() < 1e-12);
    }
}

fn subset() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..200, 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalue_bounds(picks in subset()) {
        let (g, m) = symmetric_four();
        let ball: Vec<_> = group_ball(&g, &g.symmetric_generators(), 6).into_iter().map(|(e, _)| e).collect();
        let mut set: Vec<_> = picks.iter().map(|&i| ball[i % ball.len()].clone()).collect();
        set.sort();
        set.dedup();
        let lambda = dirichlet_eigenvalue(&g, &m, &set).unwrap();
        prop_assert!((0.0..=2.0).contains(&lambda));
        // indicator of the set as a test function
        let ratio = boundary_measure(&g, &m, &set) / set.len() as f64;
        prop_assert!(lambda <= ratio + 1e-10);
    }

    #[test]
    fn profiles_are_nonincreasing_and_satisfy_cheeger(b in 3u32..10) {
        let (z, m) = cyclic(b);
        let v = b as usize;
        let l1 = lambda_profile(&z, &m, v, v, 1).unwrap();
        let l2 = lambda_profile(&z, &m, v, v, 2).unwrap();
        prop_assert!(l1.is_nonincreasing() && l2.is_nonincreasing());
        prop_assert!(check_cheeger(&l1, &l2, 1e-10).unwrap().passed());
    }
}
