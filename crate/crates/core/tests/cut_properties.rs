mod common;

use common::{random_arc_set, subsets_up_to};
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use structroute::corpus;
use structroute::cuts::{
    enumerate_viable_i_cuts, enumerate_viable_i_cuts_exhaustive, in_d_i, is_j_disjoint,
    is_viable_i_cut,
};
use structroute::ArcSet;

#[test]
fn connected_search_matches_subset_scan_on_random_networks() {
    for seed in 0..300 {
        let net = corpus::random(seed, 10, 3).network;
        for i in 0..net.pair_count() {
            let fast = enumerate_viable_i_cuts(&net, i);
            let slow = enumerate_viable_i_cuts_exhaustive(&net, i);
            assert_eq!(fast, slow, "seed {seed} pair {}", i + 1);
            for c in &fast {
                assert!(is_viable_i_cut(&net, &c.vertices, i));
                assert_eq!(
                    c.outgoing,
                    net.out_boundary(&c.vertices)
                        .intersection(net.bundle_arcs(i))
                );
            }
        }
    }
}

#[test]
fn disjointness_is_hereditary() {
    let mut rng = SplitMix64::seed_from_u64(11);
    for seed in 0..100 {
        let net = corpus::random(seed, 10, 3).network;
        let all: Vec<usize> = (0..net.pair_count()).collect();
        for _ in 0..10 {
            let b = random_arc_set(&net, &mut rng, 0.25);
            if !is_j_disjoint(&net, &b, &all) {
                continue;
            }
            for a in b.iter() {
                let mut smaller = b.clone();
                smaller.remove(a);
                assert!(is_j_disjoint(&net, &smaller, &all));
                for j in 0..net.pair_count() {
                    assert!(is_j_disjoint(&net, &smaller, &[j]));
                }
            }
        }
    }
}

#[test]
fn downward_domination_is_nested() {
    let mut rng = SplitMix64::seed_from_u64(5);
    for seed in 0..150 {
        let net = corpus::random(seed, 10, 3).network;
        for _ in 0..5 {
            let e = random_arc_set(&net, &mut rng, 0.2);
            for i in 1..net.pair_count() {
                if in_d_i(&net, &e, i).holds() {
                    assert!(in_d_i(&net, &e, i - 1).holds(), "seed {seed}");
                }
            }
        }
    }
}

/// Exchange fails for disjointness over two pairs: on fig5, `{beta}` and
/// `{alpha, epsilon}` are both {1,2}-disjoint, yet `beta` shares the path
/// `alpha beta` of pair 2 with `alpha` and the path `beta epsilon` of pair 1
/// with `epsilon`.
#[test]
fn disjointness_over_several_pairs_lacks_exchange() {
    let net = corpus::fig5().network;
    let both = [0, 1];
    let b1 = net.arc_set(&["beta"]).unwrap();
    let b2 = net.arc_set(&["alpha", "epsilon"]).unwrap();
    assert!(is_j_disjoint(&net, &b1, &both) && is_j_disjoint(&net, &b2, &both));
    for a in b2.difference(&b1).iter() {
        let mut grown = b1.clone();
        grown.insert(a);
        assert!(!is_j_disjoint(&net, &grown, &both));
    }
}

/// Counts exchange failures among disjoint sets of size at most three.
fn exchange_failures(net: &structroute::Network, pairs: &[usize]) -> usize {
    let arcs: Vec<_> = net.arc_ids().collect();
    let sets: Vec<ArcSet> = subsets_up_to(&arcs, 3)
        .into_iter()
        .map(|s| ArcSet::from_ids(net.arc_count(), s))
        .filter(|s| is_j_disjoint(net, s, pairs))
        .collect();
    let mut failures = 0;
    for b1 in &sets {
        for b2 in sets.iter().filter(|b2| b2.len() > b1.len()) {
            let ok = b2.difference(b1).iter().any(|a| {
                let mut g = b1.clone();
                g.insert(a);
                is_j_disjoint(net, &g, pairs)
            });
            failures += usize::from(!ok);
        }
    }
    failures
}

#[test]
fn single_path_bundles_satisfy_exchange() {
    // with one pair whose paths are arc-disjoint, disjoint sets form a partition matroid
    let net = corpus::line(4, &[(1, 4)]).unwrap().network;
    assert_eq!(exchange_failures(&net, &[0]), 0);
    let net = corpus::butterfly().network;
    assert_eq!(exchange_failures(&net, &[0]), 0);
    assert_eq!(exchange_failures(&net, &[1]), 0);
    assert!(exchange_failures(&net, &[0, 1]) > 0);
}
