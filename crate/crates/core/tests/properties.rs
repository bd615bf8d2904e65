use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vnh::closed::closure_of;
use vnh::io::{element_from_json, element_to_json};
use vnh::rewrite::{apply_inverse_i, find_redexes, reduce, Rewritable, Site};
use vnh::sample::{random_element, random_expansion};
use vnh::tree::Word;
use vnh::{are_conjugate, closed_equal, conjugating_equivalent, diagram_equal, StrandDiagram, SubgroupH, TreePairElement};

fn group(k: usize) -> Arc<SubgroupH> {
    Arc::new(match k % 4 {
        0 => SubgroupH::trivial(2),
        1 => SubgroupH::symmetric(2),
        2 => SubgroupH::cyclic(3),
        _ => SubgroupH::symmetric(3),
    }
    .unwrap())
}

/// A seeded generator plus a group; proptest shrinks the seed and the group
/// index, and the elements follow deterministically.
fn setup() -> impl Strategy<Value = (ChaCha8Rng, Arc<SubgroupH>)> {
    (any::<u64>(), 0..4usize).prop_map(|(seed, k)| (ChaCha8Rng::seed_from_u64(seed), group(k)))
}

fn element(rng: &mut ChaCha8Rng, h: &Arc<SubgroupH>) -> TreePairElement {
    let carets = rng.gen_range(0..=3);
    let g = random_element(rng, h, carets);
    let extra = rng.gen_range(0..=2);
    random_expansion(rng, &g, extra)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative((mut rng, h) in setup()) {
        let (f, g, k) = (element(&mut rng, &h), element(&mut rng, &h), element(&mut rng, &h));
        let left = f.compose(&g).unwrap().compose(&k).unwrap();
        let right = f.compose(&g.compose(&k).unwrap()).unwrap();
        prop_assert!(left.equals(&right).unwrap());
    }

    #[test]
    fn composition_agrees_with_the_action_on_words((mut rng, h) in setup()) {
        let (f, g) = (element(&mut rng, &h), element(&mut rng, &h));
        let fg = f.compose(&g).unwrap();
        let n = h.arity();
        let depth = f.domain().depth() + g.domain().depth() + g.range().depth() + 2;
        for _ in 0..8 {
            let letters: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=n)).collect();
            let u = Word::new(&letters);
            let (v, _) = g.eval_prefix(&u).unwrap();
            let (direct, _) = f.eval_prefix(&v).unwrap();
            prop_assert_eq!(fg.eval_prefix(&u).unwrap().0, direct);
        }
    }

    #[test]
    fn inverse_and_identity((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        let id = TreePairElement::identity(h.clone());
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
        prop_assert!(f.inverse().compose(&f).unwrap().is_identity());
        prop_assert!(f.compose(&id).unwrap().equals(&f).unwrap());
        prop_assert!(f.inverse().inverse().equals(&f).unwrap());
    }

    #[test]
    fn reduction_is_idempotent_and_faithful((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        let r = f.reduced();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduced(), r.clone());
        prop_assert!(r.equals(&f).unwrap());
        prop_assert!(r.leaf_count() <= f.leaf_count());
    }

    #[test]
    fn json_round_trip((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        let back = element_from_json(&element_to_json(&f), Some(&h)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn built_diagrams_satisfy_the_counting_invariant((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        let d = StrandDiagram::build(&f);
        d.check_invariants().unwrap();
        let (splits, merges, _) = d.counts();
        prop_assert_eq!(splits, f.domain().caret_count());
        prop_assert_eq!(merges, f.range().caret_count());
    }

    #[test]
    fn reducing_a_product_cuts_to_the_product((mut rng, h) in setup()) {
        let factors: Vec<TreePairElement> = (0..rng.gen_range(1..=3)).map(|_| element(&mut rng, &h)).collect();
        let d = factors.iter().fold(StrandDiagram::identity(h.clone(), 1), |d, g| {
            d.concatenate(&StrandDiagram::build(g)).unwrap()
        });
        d.check_invariants().unwrap();
        let product = factors.iter().fold(TreePairElement::identity(h.clone()), |acc, g| g.compose(&acc).unwrap());
        let r = reduce(&d);
        r.check_invariants().unwrap();
        prop_assert!(find_redexes(&r).is_empty());
        prop_assert!(diagram_equal(&reduce(&r), &r));
        prop_assert_eq!(r.cut().unwrap(), product.reduced());
    }

    #[test]
    fn inverse_moves_do_not_change_normal_forms((mut rng, h) in setup()) {
        let d = StrandDiagram::build(&element(&mut rng, &h));
        let edges: Vec<usize> = d.graph().edge_ids().collect();
        let e = edges[rng.gen_range(0..edges.len())];
        let (grown, _) = apply_inverse_i(&d, &Site::Edge(e)).unwrap();
        grown.check_invariants().unwrap();
        prop_assert!(diagram_equal(&reduce(&grown), &reduce(&d)));
    }

    #[test]
    fn conjugacy_is_an_equivalence((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        let g = element(&mut rng, &h);
        let k = element(&mut rng, &h);
        prop_assert!(are_conjugate(&f, &f).unwrap());
        prop_assert_eq!(are_conjugate(&f, &g).unwrap(), are_conjugate(&g, &f).unwrap());
        let fk = f.conjugate_by(&k).unwrap();
        prop_assert_eq!(are_conjugate(&fk, &g).unwrap(), are_conjugate(&f, &g).unwrap());
    }

    #[test]
    fn coboundaries_preserve_closed_classes((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        let a = closure_of(&f);
        let shifts: Vec<i64> = (0..a.graph().vertex_ids().max().map_or(0, |v| v + 1)).map(|_| rng.gen_range(-4..=4)).collect();
        let mut b = a.clone();
        b.add_coboundary(&|v| shifts[v]);
        b.validate().unwrap();
        prop_assert!(closed_equal(&a, &b));
        prop_assert!(conjugating_equivalent(&a, &b, &h));
    }

    #[test]
    fn finite_order_implies_torsion((mut rng, h) in setup()) {
        let f = element(&mut rng, &h);
        if f.order(24).is_some() {
            prop_assert!(vnh::is_torsion(&f));
        }
        let k = element(&mut rng, &h);
        prop_assert_eq!(f.order(24), f.conjugate_by(&k).unwrap().order(24));
    }
}
