use proptest::prelude::*;

use piecewise::gluing::{beta_extension, build_houghton, pocket_extension, rooted_gluing, star_extension, HoughtonSpec};
use piecewise::labelled_graph::{build_cayley, enumerate_ball, standard_generators};
use piecewise::normal_form::normal_form;
use piecewise::perm::Parity;
use piecewise::{BaseGroup, FinPerm, GluedGroup, Group, GroupElement, LabelledGraph, Letter, Vertex};

fn cayley(base: BaseGroup) -> LabelledGraph {
    let gens = standard_generators(&base);
    build_cayley(base, gens, None).unwrap()
}

fn suffixed(base: BaseGroup, c: usize) -> LabelledGraph {
    let g = cayley(base);
    let letters = g.letters().iter().map(|l| format!("{l}{c}")).collect();
    g.with_letters(letters).unwrap()
}

fn groups() -> Vec<GluedGroup> {
    let graphs = vec![
        pocket_extension(cayley(BaseGroup::Integers)).unwrap(),
        star_extension(cayley(BaseGroup::Integers)).unwrap(),
        star_extension(cayley(BaseGroup::Lattice(2))).unwrap(),
        beta_extension(cayley(BaseGroup::Integers), 2).unwrap(),
        rooted_gluing(vec![
            suffixed(BaseGroup::Integers, 0),
            suffixed(BaseGroup::Cyclic(2), 1),
            suffixed(BaseGroup::Cyclic(3), 2),
        ])
        .unwrap(),
        build_houghton(&HoughtonSpec::standard(3), None).unwrap(),
        pocket_extension(cayley(BaseGroup::Cyclic(3))).unwrap(),
    ];
    graphs.into_iter().map(|g| GluedGroup::new(g).unwrap()).collect()
}

fn word(raw: &[(usize, bool)], alphabet: usize) -> Vec<Letter> {
    raw.iter()
        .map(|&(i, pos)| {
            let g = i % alphabet + 1;
            if pos {
                Letter::pos(g)
            } else {
                Letter::neg(g)
            }
        })
        .collect()
}

fn raw_word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..16, any::<bool>()), 0..10)
}

fn finperm() -> impl Strategy<Value = FinPerm> {
    Just((0..8).map(Vertex::Int).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|img| FinPerm::from_pairs((0..8).map(Vertex::Int).zip(img).filter(|(a, b)| a != b)).unwrap())
}

fn probe_points(g: &GluedGroup) -> Vec<Vertex> {
    enumerate_ball(g.graph(), g.root(), 3).unwrap().vertices
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebra_matches_graph_action(w in raw_word()) {
        for g in groups() {
            let w = word(&w, g.graph().alphabet_size());
            let e = g.word_element(&w);
            prop_assert_eq!(&normal_form(&g, &w).unwrap(), &e, "{}", g.name());
            for x in probe_points(&g) {
                prop_assert_eq!(g.act(&e, &x), g.graph().word_action(&x, &w).unwrap());
            }
        }
    }

    #[test]
    fn group_axioms(a in raw_word(), b in raw_word(), c in raw_word()) {
        for g in groups() {
            let k = g.graph().alphabet_size();
            let (wa, wb, wc) = (word(&a, k), word(&b, k), word(&c, k));
            let (x, y, z) = (g.word_element(&wa), g.word_element(&wb), g.word_element(&wc));
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
            prop_assert_eq!(g.mul(&g.identity(), &x), x.clone());
            let joined: Vec<Letter> = wa.iter().chain(&wb).copied().collect();
            prop_assert_eq!(normal_form(&g, &joined).unwrap(), g.mul(&x, &y));
            // Houghton translations along different lines only compose up to a finite correction
            if g.houghton_rays().is_none() {
                prop_assert_eq!(g.parity(&g.mul(&x, &y)), g.parity(&x).times(g.parity(&y)), "{}", g.name());
            }
            let text = g.encode(&x);
            prop_assert_eq!(text.parse::<GroupElement>().unwrap(), x.clone());
        }
    }

    #[test]
    fn finperm_parity_is_multiplicative(a in finperm(), b in finperm()) {
        prop_assert_eq!(a.compose(&b).parity(), a.parity().times(b.parity()));
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        let sign = a.cycles().iter().map(|c| if c.len() % 2 == 0 { -1 } else { 1 }).product::<i8>();
        prop_assert_eq!(a.parity().sign(), sign);
        prop_assert_eq!(a.to_string().parse::<FinPerm>().unwrap(), a.clone());
    }

    #[test]
    fn translation_quotient_is_additive(a in raw_word(), b in raw_word()) {
        for g in groups() {
            let k = g.graph().alphabet_size();
            let (x, y) = (g.word_element(&word(&a, k)), g.word_element(&word(&b, k)));
            let (Ok(px), Ok(py)) = (g.phi_quotient(&x), g.phi_quotient(&y)) else { continue };
            let sum: Vec<i64> = px.iter().zip(&py).map(|(u, v)| u + v).collect();
            prop_assert_eq!(g.phi_quotient(&g.mul(&x, &y)).unwrap(), sum);
        }
    }

    #[test]
    fn houghton_quotient_is_depth_change(a in raw_word()) {
        let g = GluedGroup::new(build_houghton(&HoughtonSpec::standard(3), None).unwrap()).unwrap();
        let x = g.word_element(&word(&a, 2));
        let phi = g.phi_quotient(&x).unwrap();
        prop_assert_eq!(phi.len(), 3);
        prop_assert_eq!(phi.iter().sum::<i64>(), 0);
        for ray in 1..=3u32 {
            let far = 500u64;
            let Vertex::Ray { ray: r, depth } = g.act(&x, &Vertex::ray(ray, far)) else {
                panic!("far point left its ray")
            };
            prop_assert_eq!(r, ray);
            prop_assert_eq!(phi[ray as usize - 1], depth as i64 - far as i64);
        }
    }
}

#[test]
fn transposition_letters_are_odd() {
    let g = GluedGroup::new(pocket_extension(cayley(BaseGroup::Integers)).unwrap()).unwrap();
    let t = g.letter(Letter::pos(2));
    assert_eq!(g.parity(&t), Parity::Odd);
    assert_eq!(g.mul(&t, &t), g.identity());
    assert!(g.has_odd_generator());
}

#[test]
fn finite_pocket_is_symmetric_group() {
    // S_{b+1} on Z/b plus the added point
    for (b, order) in [(2u32, 6usize), (3, 24), (4, 120)] {
        let g = GluedGroup::new(pocket_extension(cayley(BaseGroup::Cyclic(b))).unwrap()).unwrap();
        let all = piecewise::group::enumerate_generated(&g, g.generators(), 1000).unwrap();
        assert_eq!(all.len(), order);
    }
}
