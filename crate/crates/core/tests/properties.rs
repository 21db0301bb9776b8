use dgs_core::certify::{certify_dgs, check_theorem_sqf, Check};
use dgs_core::cospec::{enumerate_generalized_cospectral_classes, recover_q, spectrum_key};
use dgs_core::factor::{factor_integer, Effort};
use dgs_core::graph::Graph;
use dgs_core::invariants::phi_p;
use dgs_core::linalg::{determinant, smith_normal_form, walk_matrix};
use dgs_core::Int;
use num_bigint::BigUint;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn graph_strategy(orders: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    (orders, any::<u64>()).prop_map(|(n, seed)| Graph::random(n, seed).unwrap())
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut s = seed | 1;
    for i in (1..n).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        perm.swap(i, (s % (i as u64 + 1)) as usize);
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph6_round_trip(g in graph_strategy(1..=40)) {
        prop_assert_eq!(Graph::from_graph6(&g.to_graph6()).unwrap(), g);
    }

    #[test]
    fn snf_product_matches_bareiss(g in graph_strategy(2..=16)) {
        let w = walk_matrix(&g);
        let snf = smith_normal_form(&w).unwrap();
        let det = determinant(&w).unwrap();
        prop_assert_eq!(snf.product() * Int::from(snf.det_sign), det);
        for pair in snf.factors.windows(2) {
            prop_assert!(pair[0].is_positive() && (pair[1].clone() % &pair[0]) == Int::from(0)
                || pair[1] == Int::from(0));
        }
    }

    #[test]
    fn determinant_criterion_implies_phi_criterion(g in graph_strategy(4..=16)) {
        let v = certify_dgs(&g, Effort::Default).unwrap();
        if let Ok(sqf) = check_theorem_sqf(&g, Effort::Default) {
            prop_assert_eq!(sqf, v.theorem_sqf);
            if sqf == Check::Pass {
                prop_assert_eq!(v.theorem_main, Check::Pass);
            }
        }
    }

    #[test]
    fn verdict_and_phi_are_invariant_under_relabeling(g in graph_strategy(3..=14), seed in any::<u64>()) {
        let h = g.permute(&permutation(g.order(), seed));
        prop_assert_eq!(spectrum_key(&g), spectrum_key(&h));
        for p in [3, 5, 7] {
            prop_assert_eq!(phi_p(&g, p).unwrap(), phi_p(&h, p).unwrap());
        }
        let (vg, vh) = (certify_dgs(&g, Effort::Default).unwrap(), certify_dgs(&h, Effort::Default).unwrap());
        prop_assert_eq!(vg.status, vh.status);
        if vg.det_w != Int::from(0) {
            let q = recover_q(&g, &h).unwrap();
            prop_assert!(q.is_permutation());
            prop_assert!(q.level.is_one());
        }
    }

    #[test]
    fn factorization_multiplies_back(a in 1u64.., b in 1u64..) {
        let n = BigUint::from(a) * BigUint::from(b);
        let f = factor_integer(&n, Effort::Default).unwrap();
        prop_assert_eq!(f.value(), n);
    }
}

#[test]
fn phi_is_shared_by_generalized_cospectral_mates() {
    let partition = enumerate_generalized_cospectral_classes(7).unwrap();
    let mut pairs = 0;
    for group in partition.mate_groups() {
        let first = &group.classes[0].graph;
        for class in &group.classes[1..] {
            for p in [3, 5, 7, 11] {
                assert_eq!(phi_p(first, p).unwrap(), phi_p(&class.graph, p).unwrap());
            }
            pairs += 1;
        }
    }
    assert!(pairs > 0);
}

#[test]
fn certified_graphs_have_no_mates_up_to_order_7() {
    for n in 1..=7 {
        let partition = enumerate_generalized_cospectral_classes(n).unwrap();
        for group in &partition.groups {
            for class in &group.classes {
                let v = certify_dgs(&class.graph, Effort::Default).unwrap();
                assert!(
                    !v.status.is_dgs() || group.classes.len() == 1,
                    "{}",
                    class.graph.to_graph6()
                );
            }
        }
    }
}
