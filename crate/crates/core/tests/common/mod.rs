//! Shared helpers for the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_xoshiro::SplitMix64;
use structroute::flows::DemandVector;
use structroute::{ArcId, ArcSet, Capacity, Network, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random positive rational with denominator up to `den` and value up to `max`.
pub fn random_rational(rng: &mut SplitMix64, max: i64, den: i64) -> Rational {
    let d = rng.gen_range(1..=den);
    let n = rng.gen_range(1..=max * d);
    q(n, d)
}

/// Random finite capacities on the finite arcs; infinite arcs stay infinite.
pub fn random_capacities(net: &Network, rng: &mut SplitMix64) -> Network {
    let caps: Vec<Capacity> = net
        .arc_ids()
        .map(|a| match net.capacity(a) {
            Capacity::Infinite => Capacity::Infinite,
            Capacity::Finite(_) => Capacity::Finite(random_rational(rng, 3, 4)),
        })
        .collect();
    net.with_capacities(&caps)
        .expect("same kinds, positive values")
}

pub fn random_demands(net: &Network, rng: &mut SplitMix64) -> DemandVector {
    DemandVector::new(
        (0..net.pair_count())
            .map(|_| random_rational(rng, 2, 4))
            .collect(),
    )
    .unwrap()
}

pub fn random_arc_set(net: &Network, rng: &mut SplitMix64, p: f64) -> ArcSet {
    let mut s = net.empty_arcs();
    for a in net.arc_ids() {
        if rng.gen_bool(p) {
            s.insert(a);
        }
    }
    s
}

pub fn shuffled_arcs(net: &Network, rng: &mut SplitMix64) -> Vec<ArcId> {
    let mut v: Vec<ArcId> = net.arc_ids().collect();
    v.shuffle(rng);
    v
}

/// Every subset of `items` with at most `k` elements, smallest first.
pub fn subsets_up_to<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<T>)> = vec![(0, vec![])];
    for _ in 0..k {
        let mut next = Vec::new();
        for (start, set) in &frontier {
            for (j, &x) in items.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.push(x);
                out.push(s.clone());
                next.push((j + 1, s));
            }
        }
        frontier = next;
    }
    out
}
