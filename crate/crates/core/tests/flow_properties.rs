mod common;

use common::{q, random_capacities, random_demands};
use num_traits::Zero;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use structroute::corpus;
use structroute::cuts::check_viable_i_cut;
use structroute::flows::{
    cut_capacity, cut_is_tight, decompose_flow, max_flow, sequential_construct, solve_mcf,
    MaxFlowOutcome, McfOutcome, Residual, Step,
};
use structroute::{Network, Rational};

/// Minimum outgoing residual capacity over every vertex subset of the bundle
/// separating source from sink; `None` when every cut has an infinite arc.
fn brute_min_cut(net: &Network, r: &Residual, i: usize) -> Option<Rational> {
    let (s, t) = (net.source(i), net.sink(i));
    let free: Vec<_> = net
        .bundle_vertices(i)
        .iter()
        .filter(|&v| v != s && v != t)
        .collect();
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << free.len()) {
        let mut u = net.empty_vertices();
        u.insert(s);
        for (k, &v) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                u.insert(v);
            }
        }
        if let Some(c) = cut_capacity(net, r, i, &u) {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best
}

#[test]
fn max_flow_equals_min_cut() {
    let mut rng = SplitMix64::seed_from_u64(3);
    let mut finite_cases = 0;
    for seed in 0..200 {
        let net = random_capacities(&corpus::random(seed, 10, 3).network, &mut rng);
        let r = Residual::of(&net);
        for i in 0..net.pair_count() {
            match max_flow(&net, &r, i) {
                MaxFlowOutcome::Unbounded { path } => {
                    assert!(path.arcs().iter().all(|&a| !net.is_finite(a)));
                    assert_eq!(brute_min_cut(&net, &r, i), None);
                }
                MaxFlowOutcome::Finite { flow, value, cut } => {
                    finite_cases += 1;
                    assert_eq!(
                        brute_min_cut(&net, &r, i),
                        Some(value.clone()),
                        "seed {seed}"
                    );
                    assert_eq!(cut_capacity(&net, &r, i, &cut), Some(value.clone()));
                    assert!(cut_is_tight(&net, &r, i, &flow, &cut));
                    let d = decompose_flow(&net, &flow, i).unwrap();
                    assert!(d.is_acyclic());
                    assert_eq!(d.value(), value);
                    assert_eq!(d.reconstruct(&net), flow);
                }
            }
        }
    }
    assert!(finite_cases > 100);
}

#[test]
fn lp_flows_decompose_exactly() {
    let mut rng = SplitMix64::seed_from_u64(9);
    for seed in 0..120 {
        let net = random_capacities(&corpus::random(seed, 10, 3).network, &mut rng);
        let h = random_demands(&net, &mut rng);
        for strict in [false, true] {
            let McfOutcome::Feasible { flow, slack } = solve_mcf(&net, &h, strict) else {
                continue;
            };
            assert_eq!(slack.is_some(), strict);
            flow.verify(&net, &h).unwrap();
            for i in 0..net.pair_count() {
                let d = decompose_flow(&net, &flow.flows[i], i).unwrap();
                assert_eq!(d.reconstruct(&net), flow.flows[i]);
                assert_eq!(&d.value(), h.get(i));
                for p in &d.paths {
                    assert!(p.value > Rational::zero());
                    assert_eq!(p.path, net.pair_paths(i)[p.index]);
                }
            }
        }
    }
}

#[test]
fn construction_agrees_with_the_lp() {
    let mut rng = SplitMix64::seed_from_u64(21);
    let (mut ok, mut failed) = (0, 0);
    for seed in 0..200 {
        let net = random_capacities(&corpus::random(seed, 10, 3).network, &mut rng);
        let h = random_demands(&net, &mut rng);
        let lp = solve_mcf(&net, &h, false);
        match sequential_construct(&net, &h) {
            Ok(c) => {
                ok += 1;
                c.flow.verify(&net, &h).unwrap();
                assert!(lp.flow().is_some(), "seed {seed}: construction beat the LP");
            }
            Err(f) => {
                failed += 1;
                assert!(f.value < f.demand);
                assert_eq!(
                    f.outgoing,
                    net.out_boundary(&f.cut)
                        .intersection(net.bundle_arcs(f.pair))
                );
            }
        }
    }
    assert!(ok > 20 && failed > 20, "ok {ok} failed {failed}");
}

#[test]
fn residual_min_cuts_are_viable() {
    let mut rng = SplitMix64::seed_from_u64(77);
    let mut checked = 0;
    for seed in 0..400 {
        let net = random_capacities(&corpus::random(seed, 10, 3).network, &mut rng);
        let h = random_demands(&net, &mut rng);
        let Ok(c) = sequential_construct(&net, &h) else {
            continue;
        };
        for step in &c.steps {
            let Step::Scaled {
                pair, value, cut, ..
            } = step
            else {
                continue;
            };
            let outgoing = net.out_boundary(cut).intersection(net.bundle_arcs(*pair));
            if value.is_zero() || !outgoing.iter().all(|a| net.is_finite(a)) {
                continue;
            }
            checked += 1;
            let report = check_viable_i_cut(&net, cut, *pair);
            assert!(
                report.is_viable(),
                "seed {seed} pair {}: {:?}",
                pair + 1,
                report.failures
            );
        }
    }
    assert!(checked > 50, "only {checked} cuts checked");
}

#[test]
fn butterfly_unit_demands_are_unroutable() {
    let f = corpus::butterfly();
    assert_eq!(
        solve_mcf(&f.network, &f.demands, false),
        McfOutcome::Infeasible
    );
    let fail = sequential_construct(&f.network, &f.demands).unwrap_err();
    assert_eq!(fail.pair, 1);
    assert_eq!(fail.value, q(0, 1));
    assert_eq!(f.network.arc_names(&fail.outgoing), vec!["alpha"]);
}
