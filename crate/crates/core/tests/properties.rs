mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{gain_graph_walks, random_gain_graph, theta_bar_ref, theta_ref, ChainSpace, Reference};
use ig_core::biorder::build_biorder;
use ig_core::contact::VertexGroupMethod;
use ig_core::corpus;
use ig_core::fixtures;
use ig_core::group::{coset_intersect, dual_product, subgroup_closure, Coset, Elem, FiniteGroup};
use ig_core::theta::{ig_equal, theta, theta_bar};
use ig_core::words::{random_rewrite_walk, IgWord};

fn groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(FiniteGroup::cyclic(6)),
        Arc::new(FiniteGroup::symmetric(3)),
        Arc::new(FiniteGroup::klein_four()),
        Arc::new(FiniteGroup::symmetric(4)),
    ]
}

fn coset(g: &Arc<FiniteGroup>, gens: &[usize], x: usize, left: bool) -> Coset {
    let gens: Vec<Elem> = gens.iter().map(|a| a % g.order()).collect();
    let h = subgroup_closure(g, &gens).unwrap();
    let x = x % g.order();
    if left {
        Coset::left(x, h)
    } else {
        Coset::right(h, x)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lagrange(k in 0usize..4, gens in prop::collection::vec(0usize..24, 0..3)) {
        let g = &groups()[k];
        let gens: Vec<Elem> = gens.iter().map(|a| a % g.order()).collect();
        let h = subgroup_closure(g, &gens).unwrap();
        prop_assert_eq!(h.order() * h.index(), g.order());
        for &a in &gens {
            prop_assert!(h.contains(a));
        }
    }

    #[test]
    fn coset_intersection_is_set_intersection(
        k in 0usize..4,
        ga in prop::collection::vec(0usize..24, 0..3),
        gb in prop::collection::vec(0usize..24, 0..3),
        x in 0usize..24, y in 0usize..24, sa: bool, sb: bool,
    ) {
        let g = &groups()[k];
        let (a, b) = (coset(g, &ga, x, sa), coset(g, &gb, y, sb));
        let want: BTreeSet<Elem> = a.elements().into_iter().filter(|&z| b.contains(z)).collect();
        let got: BTreeSet<Elem> = coset_intersect(&a, &b).unwrap().map(|c| c.elements().into_iter().collect()).unwrap_or_default();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn coset_side_conversion_and_inverse(k in 0usize..4, gens in prop::collection::vec(0usize..24, 0..3), x in 0usize..24, left: bool) {
        let g = &groups()[k];
        let c = coset(g, &gens, x, left);
        let set: BTreeSet<Elem> = c.elements().into_iter().collect();
        prop_assert_eq!(&c.to_left().elements().into_iter().collect::<BTreeSet<_>>(), &set);
        prop_assert_eq!(&c.to_right().elements().into_iter().collect::<BTreeSet<_>>(), &set);
        let inv: BTreeSet<Elem> = set.iter().map(|&z| g.inv(z)).collect();
        prop_assert_eq!(c.inverse().elements().into_iter().collect::<BTreeSet<_>>(), inv);
    }

    #[test]
    fn dual_product_law(a in 0usize..6, b in 0usize..4, c in 0usize..6, d in 0usize..4) {
        let (g1, g2) = (Arc::new(FiniteGroup::symmetric(3)), Arc::new(FiniteGroup::cyclic(4)));
        let dp = dual_product(&g1, &g2, 100).unwrap();
        let p = dp.group().mul(dp.pair(a, b), dp.pair(c, d));
        prop_assert_eq!(p, dp.pair(g1.mul(a, c), g2.mul(d, b)));
    }

    #[test]
    fn vertex_group_methods_agree_and_match_walks(k in 0usize..3, seed: u64) {
        let g = groups()[k].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gr = random_gain_graph(&g, 6, 9, &mut rng);
        let walks = gain_graph_walks(&gr, None);
        for u in 0..gr.vertex_count() {
            let a = gr.vertex_group(u, VertexGroupMethod::ConjugatedCycles).unwrap();
            let b = gr.vertex_group(u, VertexGroupMethod::SpanningTree).unwrap();
            prop_assert_eq!(&a, &b);
            let set: BTreeSet<Elem> = a.elements().iter().copied().collect();
            prop_assert_eq!(&set, &walks[u][u]);
        }
    }

    #[test]
    fn rewrites_preserve_ambient_image(k in 0usize..5, letters in prop::collection::vec(0u8..8, 1..7), seed: u64) {
        let (_, t) = corpus::natural_corpus().swap_remove(k);
        let bio = build_biorder(&t).unwrap();
        let w = IgWord::from_letters(&letters.iter().map(|l| l % bio.len() as u8).collect::<Vec<_>>());
        let v = random_rewrite_walk(&bio, &w, 20, 10, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(bio.ambient_image(w.letters()), bio.ambient_image(v.letters()));
    }

    #[test]
    fn theta_matches_reference_on_three_block(x in 0usize..100_000, y in 0usize..100_000, gens in prop::collection::vec(0usize..24, 0..2), r in 0usize..24) {
        let f = fixtures::three_block();
        let st = &f.structure;
        let space = ChainSpace::new(st, &[0, 1, 2]);
        let (u, v) = (space.chain(x % space.len()), space.chain(y % space.len()));
        let (g1, g3) = (&st.models[0].group, &st.models[2].group);
        let a = coset(g1, &gens, r, true);
        let got: BTreeSet<Elem> = theta(st, &a, &u, &v).unwrap().value.map(|c| c.elements().into_iter().collect()).unwrap_or_default();
        prop_assert_eq!(got, theta_ref(st, &a.elements().into_iter().collect(), &u, &v));
        let b = coset(g3, &gens, r, false);
        let got: BTreeSet<Elem> = theta_bar(st, &u, &v, &b).unwrap().value.map(|c| c.elements().into_iter().collect()).unwrap_or_default();
        prop_assert_eq!(got, theta_bar_ref(st, &u, &v, &b.elements().into_iter().collect()));
    }
}

#[test]
fn equality_is_an_equivalence_on_cyclic() {
    let f = fixtures::cyclic();
    let st = &f.structure;
    let mut r = Reference::new(st, &[0, 1, 1]);
    let n = r.space.len();
    for a in 0..n {
        for b in 0..n {
            let (u, v) = (r.space.chain(a), r.space.chain(b));
            let e = ig_equal(st, &u, &v).unwrap().equal;
            assert_eq!(e, ig_equal(st, &v, &u).unwrap().equal);
            assert_eq!(e, r.equal(&u, &v));
        }
    }
}
