//! Structural dominance.
//!
//! An arc is *downstream* of an arc set `C` when every path from any source
//! to its tail meets `C`. An *indirect walk* for pair `i` alternates forward
//! and reversed paths: it starts at source `i`, each forward leg and the
//! following reversed leg meet at a junction vertex that can still reach
//! sink `i`, consecutive legs restart from a common source, and the last leg
//! ends at sink `i`. `sdom(B)` is the least arc set containing `B` that is
//! closed under three rules: pairing of source and sink arcs, inclusion of
//! downstream arcs, and inclusion of a pair's terminal arcs once no indirect
//! walk for that pair avoids the set.

use std::collections::VecDeque;

use crate::graph::{ArcId, Network, Path, VertexId};
use crate::sets::{ArcSet, VertexSet};

/// True iff no source reaches the tail of `arc` without using an arc of `c`.
///
/// Vacuously true when the tail is unreachable from every source.
pub fn is_downstream(net: &Network, arc: ArcId, c: &ArcSet) -> bool {
    let reached = net.forward_closure(&net.sources(), c);
    !reached.contains(net.tail(arc))
}

/// A witness indirect walk for one pair.
///
/// `legs` alternates forward legs (even positions) and reversed legs (odd
/// positions). Every leg is stored in its forward orientation, so a reversed
/// leg is a directed path from a source to the junction it shares with the
/// preceding forward leg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndirectWalk {
    pub pair: usize,
    pub legs: Vec<Path>,
    pub junctions: Vec<VertexId>,
}

impl IndirectWalk {
    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.legs.iter().flat_map(|l| l.arcs().iter().copied())
    }

    pub fn avoids(&self, c: &ArcSet) -> bool {
        self.arcs().all(|a| !c.contains(a))
    }

    /// Checks every structural condition of an indirect walk, returning the
    /// first one that fails.
    pub fn check(&self, net: &Network) -> Result<(), String> {
        let i = self.pair;
        if self.legs.len() % 2 != 1 {
            return Err("walk must have an odd number of legs".into());
        }
        if self.junctions.len() != self.legs.len() / 2 {
            return Err("one junction per forward/reversed leg pair".into());
        }
        for (k, leg) in self.legs.iter().enumerate() {
            if !leg.is_well_formed(net) {
                return Err(format!("leg {k} is not a simple path"));
            }
        }
        if self.legs[0].start() != net.source(i) {
            return Err("first leg must start at the pair's source".into());
        }
        if self.legs.last().unwrap().end() != net.sink(i) {
            return Err("last leg must end at the pair's sink".into());
        }
        let sources = net.sources();
        let reach_sink = net.backward_closure(
            &VertexSet::from_ids(net.vertex_count(), [net.sink(i)]),
            &net.empty_arcs(),
        );
        for (l, &mu) in self.junctions.iter().enumerate() {
            let fwd = &self.legs[2 * l];
            let rev = &self.legs[2 * l + 1];
            let next = &self.legs[2 * l + 2];
            if fwd.end() != mu || rev.end() != mu {
                return Err(format!("legs around junction {l} do not meet there"));
            }
            if rev.start() != next.start() || !sources.contains(rev.start()) {
                return Err(format!(
                    "legs after junction {l} do not restart at a common source"
                ));
            }
            if !reach_sink.contains(mu) {
                return Err(format!("junction {l} cannot reach the sink"));
            }
        }
        Ok(())
    }
}

/// Searches for an indirect walk of pair `i` that uses no arc of `c`.
///
/// Works on source sets rather than walks: starting from source `i`, a source
/// `s` is added whenever some vertex that can reach sink `i` (in the full
/// digraph) is reachable both from an already-added source and from `s`,
/// avoiding `c`. The search succeeds once an added source reaches the sink
/// avoiding `c`. Polynomial, and each leg of the returned witness is a
/// shortest (hence simple) path.
pub fn find_bypassing_ii_walk(net: &Network, i: usize, c: &ArcSet) -> Option<IndirectWalk> {
    let n = net.pair_count();
    let sink = net.sink(i);
    let reach_sink = net.backward_closure(
        &VertexSet::from_ids(net.vertex_count(), [sink]),
        &net.empty_arcs(),
    );
    let forward: Vec<VertexSet> = (0..n)
        .map(|s| net.forward_closure(&VertexSet::from_ids(net.vertex_count(), [net.source(s)]), c))
        .collect();

    // parent[s] = (previous source, junction) in the source search tree
    let mut parent: Vec<Option<(usize, VertexId)>> = vec![None; n];
    let mut added = vec![false; n];
    added[i] = true;
    let mut queue = VecDeque::from([i]);
    let mut last = None;
    while let Some(p) = queue.pop_front() {
        if forward[p].contains(sink) {
            last = Some(p);
            break;
        }
        let candidates = forward[p].intersection(&reach_sink);
        for s in 0..n {
            if added[s] {
                continue;
            }
            if let Some(mu) = candidates.intersection(&forward[s]).first() {
                added[s] = true;
                parent[s] = Some((p, mu));
                queue.push_back(s);
            }
        }
    }
    let last = last?;

    // unwind the chain of sources back to i
    let mut sources = vec![last];
    let mut junctions = Vec::new();
    let mut cur = last;
    while let Some((p, mu)) = parent[cur] {
        sources.push(p);
        junctions.push(mu);
        cur = p;
    }
    sources.reverse();
    junctions.reverse();

    let mut legs = Vec::with_capacity(2 * junctions.len() + 1);
    for (k, &mu) in junctions.iter().enumerate() {
        let (p, s) = (sources[k], sources[k + 1]);
        legs.push(
            net.shortest_path(net.source(p), mu, c)
                .expect("junction reachable"),
        );
        legs.push(
            net.shortest_path(net.source(s), mu, c)
                .expect("junction reachable"),
        );
    }
    legs.push(
        net.shortest_path(net.source(last), sink, c)
            .expect("sink reachable from last source"),
    );
    Some(IndirectWalk {
        pair: i,
        legs,
        junctions,
    })
}

/// Which closure rule admits an arc into the growing set.
fn admitted(net: &Network, arc: ArcId, c: &ArcSet) -> bool {
    // pairing of terminal arcs
    if let Some(i) = net.pair_of_source_arc(arc) {
        if c.contains(net.sink_arc(i)) {
            return true;
        }
    }
    if let Some(i) = net.pair_of_sink_arc(arc) {
        if c.contains(net.source_arc(i)) {
            return true;
        }
    }
    if is_downstream(net, arc, c) {
        return true;
    }
    let pair = net
        .pair_of_source_arc(arc)
        .or_else(|| net.pair_of_sink_arc(arc));
    if let Some(i) = pair {
        if find_bypassing_ii_walk(net, i, c).is_none() {
            return true;
        }
    }
    false
}

/// Structural-dominance closure of `b`, testing arcs in id order.
pub fn sdom(net: &Network, b: &ArcSet) -> ArcSet {
    let priority: Vec<ArcId> = net.arc_ids().collect();
    sdom_with_priority(net, b, &priority)
}

/// Greedy closure: pick the first untested arc in `priority` order; add it if
/// any rule admits it and reset the test set to everything outside the
/// closure, otherwise drop it from the test set. Stops when nothing is left
/// to test. Arcs absent from `priority` are tested last in id order.
pub fn sdom_with_priority(net: &Network, b: &ArcSet, priority: &[ArcId]) -> ArcSet {
    let mut order: Vec<ArcId> = priority.to_vec();
    let mut listed = net.empty_arcs();
    for &a in priority {
        listed.insert(a);
    }
    order.extend(net.arc_ids().filter(|a| !listed.contains(*a)));

    let mut closed = b.clone();
    let mut untested = closed.complement();
    while let Some(&arc) = order.iter().find(|a| untested.contains(**a)) {
        if admitted(net, arc, &closed) {
            closed.insert(arc);
            untested = closed.complement();
        } else {
            untested.remove(arc);
        }
    }
    closed
}

/// How membership of an arc in `sdom(B)` was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The arc is in `B` itself.
    Member,
    /// The arc is downstream of `B`.
    Downstream,
    /// A terminal arc whose pair has no indirect walk avoiding `B`.
    AllWalksBlocked,
    /// Established only by running the full closure.
    Closure,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Member => "member",
            Certificate::Downstream => "downstream",
            Certificate::AllWalksBlocked => "all-ii-walks-blocked",
            Certificate::Closure => "closure",
        }
    }
}

/// Membership test for `target ∈ sdom(b)`, trying the two cheap sufficient
/// conditions before falling back to the full closure. `None` means not
/// contained.
pub fn sdom_contains(net: &Network, b: &ArcSet, target: ArcId) -> Option<Certificate> {
    if b.contains(target) {
        return Some(Certificate::Member);
    }
    if is_downstream(net, target, b) {
        return Some(Certificate::Downstream);
    }
    let pair = net
        .pair_of_source_arc(target)
        .or_else(|| net.pair_of_sink_arc(target));
    if let Some(i) = pair {
        if find_bypassing_ii_walk(net, i, b).is_none() {
            return Some(Certificate::AllWalksBlocked);
        }
    }
    sdom(net, b)
        .contains(target)
        .then_some(Certificate::Closure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn names(net: &Network, walk: &IndirectWalk) -> Vec<Vec<String>> {
        walk.legs
            .iter()
            .map(|l| {
                l.arcs()
                    .iter()
                    .map(|&a| net.arc_name(a).to_string())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn downstream_examples() {
        let net = corpus::butterfly().network;
        let alpha = net.arc_set(&["alpha"]).unwrap();
        assert!(is_downstream(&net, net.arc("beta").unwrap(), &alpha));
        assert!(is_downstream(&net, net.arc("gamma").unwrap(), &alpha));
        let abg = net.arc_set(&["alpha", "beta", "gamma"]).unwrap();
        assert!(!is_downstream(&net, net.arc("chi").unwrap(), &abg));
        let src = net.source_arc(0);
        assert!(!is_downstream(
            &net,
            src,
            &ArcSet::from_ids(net.arc_count(), [src])
        ));
    }

    #[test]
    fn butterfly_bypassing_walks() {
        let net = corpus::butterfly().network;
        let alpha = net.arc_set(&["alpha"]).unwrap();

        let w2 = find_bypassing_ii_walk(&net, 1, &alpha).expect("2-walk bypasses alpha");
        w2.check(&net).unwrap();
        assert!(w2.avoids(&alpha));
        assert_eq!(
            names(&net, &w2),
            vec![
                vec!["out_sigma2", "phi"],
                vec!["out_sigma1", "delta"],
                vec!["out_sigma1", "epsilon", "in_tau2"],
            ]
        );

        let w1 = find_bypassing_ii_walk(&net, 0, &alpha).expect("1-walk bypasses alpha");
        w1.check(&net).unwrap();
        assert_eq!(
            names(&net, &w1),
            vec![
                vec!["out_sigma1", "delta"],
                vec!["out_sigma2", "phi"],
                vec!["out_sigma2", "chi", "in_tau1"],
            ]
        );
    }

    #[test]
    fn empty_blocking_set_gives_direct_path() {
        for net in [corpus::butterfly().network, corpus::fig6().network] {
            for i in 0..net.pair_count() {
                let w = find_bypassing_ii_walk(&net, i, &net.empty_arcs()).unwrap();
                assert_eq!(w.legs.len(), 1);
                w.check(&net).unwrap();
            }
        }
    }

    #[test]
    fn butterfly_sdom() {
        let net = corpus::butterfly().network;
        let alpha = net.arc_set(&["alpha"]).unwrap();
        assert_eq!(
            net.arc_names(&sdom(&net, &alpha)),
            vec!["alpha", "beta", "gamma"]
        );
        assert_eq!(sdom(&net, &net.all_arcs()), net.all_arcs());

        let b = net.arc_set(&["phi", "out_sigma1"]).unwrap();
        let closed = sdom(&net, &b);
        assert!(closed.contains(net.arc("out_sigma2").unwrap()));
        assert!(closed.contains(net.arc("in_tau2").unwrap()));
    }

    #[test]
    fn sdom_contains_examples() {
        let net = corpus::butterfly().network;
        let alpha = net.arc_set(&["alpha"]).unwrap();
        assert_eq!(
            sdom_contains(&net, &alpha, net.arc("gamma").unwrap()),
            Some(Certificate::Downstream)
        );
        assert_eq!(
            sdom_contains(&net, &alpha, net.arc("out_sigma2").unwrap()),
            None
        );
        assert_eq!(
            sdom_contains(&net, &alpha, net.arc("alpha").unwrap()),
            Some(Certificate::Member)
        );
        for a in net.arc_ids() {
            assert_eq!(
                sdom_contains(&net, &alpha, a).is_some(),
                sdom(&net, &alpha).contains(a)
            );
        }
    }
}
