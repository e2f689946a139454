//! Bundle-disjointness, source augmentation, downward-dominated families and
//! viable cuts.
//!
//! Pair indices are 0-based throughout. "Pairs before `i`" is the index range
//! `0..i`.

use std::collections::VecDeque;

use crate::dominance::sdom;
use crate::graph::{ArcId, Network, Path, VertexId};
use crate::sets::{ArcSet, VertexSet};

/// True iff no path of any pair in `pairs` uses two or more arcs of `b`.
///
/// Enumerates every pair path, so the cost grows with the number of simple
/// paths (exponential in the worst case).
pub fn is_j_disjoint(net: &Network, b: &ArcSet, pairs: &[usize]) -> bool {
    if b.len() < 2 {
        return true;
    }
    pairs
        .iter()
        .all(|&j| net.pair_paths(j).iter().all(|p| p.count_in(b) <= 1))
}

/// `e` together with the source arcs of every later pair and of every earlier
/// pair whose bundle misses `e`.
pub fn source_augmented(net: &Network, e: &ArcSet, h: usize) -> ArcSet {
    let mut out = e.clone();
    for j in 0..net.pair_count() {
        let add = if j < h {
            net.bundle_arcs(j).is_disjoint(e)
        } else {
            j > h
        };
        if add {
            out.insert(net.source_arc(j));
        }
    }
    out
}

/// Outcome of the dominance check for one pair index `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub h: usize,
    /// Whether the bundle of `h` meets the set.
    pub touches: bool,
    /// When it does: whether the source-augmented set dominates the source arc of `h`.
    pub dominated: Option<bool>,
}

impl PairCheck {
    pub fn holds(&self) -> bool {
        !self.touches || self.dominated == Some(true)
    }
}

/// Membership report for the downward-dominated family of pairs `0..=i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownwardReport {
    pub disjoint: bool,
    pub per_pair: Vec<PairCheck>,
}

impl DownwardReport {
    pub fn holds(&self) -> bool {
        self.disjoint && self.per_pair.iter().all(PairCheck::holds)
    }

    pub fn first_failure(&self) -> Option<&PairCheck> {
        self.per_pair.iter().find(|c| !c.holds())
    }
}

/// Checks whether `e` is downward dominated through pair `i`: disjoint over
/// the bundles of pairs `0..=i`, and for each such `h` whose bundle meets
/// `e`, the source arc of `h` lies in the closure of `source_augmented(e, h)`.
pub fn in_d_i(net: &Network, e: &ArcSet, i: usize) -> DownwardReport {
    let pairs: Vec<usize> = (0..=i).collect();
    let disjoint = is_j_disjoint(net, e, &pairs);
    let per_pair = pairs
        .iter()
        .map(|&h| {
            let touches = net.bundle_arcs(h).intersects(e);
            let dominated = touches
                .then(|| sdom(net, &source_augmented(net, e, h)).contains(net.source_arc(h)));
            PairCheck {
                h,
                touches,
                dominated,
            }
        })
        .collect();
    DownwardReport { disjoint, per_pair }
}

/// Why a vertex set is not a viable cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutFailure {
    /// Precondition: must contain the source, exclude the sink, and lie in the bundle.
    NotACut(String),
    /// An outgoing bundle arc has infinite capacity.
    InfiniteOutgoing(ArcId),
    /// Every pair path re-enters the set after leaving it.
    NoCleanExit,
    /// An outgoing bundle arc is on no cleanly-exiting path and outside the
    /// bundles of earlier pairs.
    UncoveredOutgoing(ArcId),
    /// A vertex of the set cannot be reached from the source in the mixed graph.
    Unreachable(VertexId),
}

impl CutFailure {
    /// Index of the failed condition (0 for the precondition).
    pub fn condition(&self) -> usize {
        match self {
            CutFailure::NotACut(_) => 0,
            CutFailure::InfiniteOutgoing(_) => 1,
            CutFailure::NoCleanExit => 2,
            CutFailure::UncoveredOutgoing(_) => 3,
            CutFailure::Unreachable(_) => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViabilityReport {
    pub outgoing: ArcSet,
    pub failures: Vec<CutFailure>,
}

impl ViabilityReport {
    pub fn is_viable(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A viable cut of pair `pair` with its outgoing bundle arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViableCut {
    pub pair: usize,
    pub vertices: VertexSet,
    pub outgoing: ArcSet,
}

/// A path leaves `u` without re-entering iff its vertices inside `u` form a
/// prefix of it (the path starts inside `u`).
pub fn exits_cleanly(path: &Path, u: &VertexSet) -> bool {
    let vs = path.vertices();
    let inside = vs.iter().take_while(|v| u.contains(**v)).count();
    inside > 0 && vs[inside..].iter().all(|v| !u.contains(*v))
}

/// Checks all four viability conditions for `u` as a cut of pair `i`,
/// collecting every failure. Precondition violations short-circuit.
pub fn check_viable_i_cut(net: &Network, u: &VertexSet, i: usize) -> ViabilityReport {
    let bundle_v = net.bundle_vertices(i);
    let bundle_a = net.bundle_arcs(i);
    let outgoing = net.out_boundary(u).intersection(bundle_a);
    let mut failures = Vec::new();

    if !u.contains(net.source(i)) {
        failures.push(CutFailure::NotACut("source not in set".into()));
    }
    if u.contains(net.sink(i)) {
        failures.push(CutFailure::NotACut("sink in set".into()));
    }
    if !u.is_subset(bundle_v) {
        failures.push(CutFailure::NotACut("set leaves the bundle".into()));
    }
    if !failures.is_empty() {
        return ViabilityReport { outgoing, failures };
    }

    for a in outgoing.iter() {
        if !net.is_finite(a) {
            failures.push(CutFailure::InfiniteOutgoing(a));
        }
    }

    let clean: Vec<&Path> = net
        .pair_paths(i)
        .iter()
        .filter(|p| exits_cleanly(p, u))
        .collect();
    if clean.is_empty() {
        failures.push(CutFailure::NoCleanExit);
    }

    let mut on_clean = net.empty_arcs();
    for p in &clean {
        for &a in p.arcs() {
            on_clean.insert(a);
        }
    }
    let earlier = net.prefix_bundle_arcs(i);
    for a in outgoing.iter() {
        if !on_clean.contains(a) && !earlier.contains(a) {
            failures.push(CutFailure::UncoveredOutgoing(a));
        }
    }

    // mixed reachability inside u: bundle arcs forward, and backward along
    // arcs of cleanly-exiting paths
    let mut seen = net.empty_vertices();
    seen.insert(net.source(i));
    let mut queue = VecDeque::from([net.source(i)]);
    while let Some(v) = queue.pop_front() {
        for &a in net.out_arcs(v) {
            let h = net.head(a);
            if bundle_a.contains(a) && u.contains(h) && seen.insert(h) {
                queue.push_back(h);
            }
        }
        for &a in net.in_arcs(v) {
            let t = net.tail(a);
            if on_clean.contains(a) && u.contains(t) && seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    for v in u.iter() {
        if !seen.contains(v) {
            failures.push(CutFailure::Unreachable(v));
        }
    }

    ViabilityReport { outgoing, failures }
}

pub fn is_viable_i_cut(net: &Network, u: &VertexSet, i: usize) -> bool {
    check_viable_i_cut(net, u, i).is_viable()
}

fn viable_cut(net: &Network, u: VertexSet, i: usize, infinite: &ArcSet) -> Option<ViableCut> {
    // condition 1 first: it needs no path enumeration
    if infinite
        .iter()
        .any(|a| u.contains(net.tail(a)) && !u.contains(net.head(a)))
    {
        return None;
    }
    let report = check_viable_i_cut(net, &u, i);
    report.is_viable().then(|| ViableCut {
        pair: i,
        vertices: u,
        outgoing: report.outgoing,
    })
}

/// Every viable cut of pair `i`, ordered by vertex set.
///
/// A viable cut is connected through bundle arcs (its vertices are reachable
/// from the source inside it), so only such connected sets are generated,
/// each exactly once, by extension/exclusion search from the source. The
/// worst case is still exponential in the bundle size.
pub fn enumerate_viable_i_cuts(net: &Network, i: usize) -> Vec<ViableCut> {
    let source = net.source(i);
    let bundle_a = net.bundle_arcs(i);
    let infinite = net.finite_arcs().complement().intersection(bundle_a);

    struct Search<'a> {
        net: &'a Network,
        i: usize,
        sink: VertexId,
        bundle_a: &'a ArcSet,
        infinite: ArcSet,
        cuts: Vec<ViableCut>,
    }

    impl Search<'_> {
        fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
            let out = self.net.out_arcs(v).iter().map(|&a| (a, self.net.head(a)));
            let inn = self.net.in_arcs(v).iter().map(|&a| (a, self.net.tail(a)));
            out.chain(inn)
                .filter(|(a, _)| self.bundle_a.contains(*a))
                .map(|(_, w)| w)
        }

        fn grow(&mut self, u: &mut VertexSet, frontier: Vec<VertexId>, banned: &mut VertexSet) {
            if let Some(cut) = viable_cut(self.net, u.clone(), self.i, &self.infinite) {
                self.cuts.push(cut);
            }
            for k in 0..frontier.len() {
                let v = frontier[k];
                let mut next: Vec<VertexId> = frontier[k + 1..].to_vec();
                let fresh: Vec<VertexId> = self
                    .neighbours(v)
                    .filter(|&w| {
                        w != self.sink
                            && !u.contains(w)
                            && !banned.contains(w)
                            && !frontier.contains(&w)
                    })
                    .collect();
                for w in fresh {
                    if !next.contains(&w) {
                        next.push(w);
                    }
                }
                u.insert(v);
                self.grow(u, next, banned);
                u.remove(v);
                banned.insert(v);
            }
            for v in frontier {
                banned.remove(v);
            }
        }
    }

    let mut search = Search {
        net,
        i,
        sink: net.sink(i),
        bundle_a,
        infinite,
        cuts: Vec::new(),
    };
    let mut u = net.empty_vertices();
    u.insert(source);
    let frontier: Vec<VertexId> = {
        let mut f: Vec<VertexId> = search
            .neighbours(source)
            .filter(|&w| w != search.sink)
            .collect();
        f.dedup();
        f
    };
    let mut banned = net.empty_vertices();
    search.grow(&mut u, frontier, &mut banned);
    let mut cuts = search.cuts;
    cuts.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    cuts
}

/// Reference enumeration over every subset of the bundle vertices (besides
/// the pair's terminals). Exponential in the bundle size; used to cross-check
/// [`enumerate_viable_i_cuts`].
pub fn enumerate_viable_i_cuts_exhaustive(net: &Network, i: usize) -> Vec<ViableCut> {
    let source = net.source(i);
    let sink = net.sink(i);
    let free: Vec<VertexId> = net
        .bundle_vertices(i)
        .iter()
        .filter(|&v| v != source && v != sink)
        .collect();
    assert!(
        free.len() < 32,
        "bundle too large for exhaustive cut enumeration"
    );
    let infinite = net
        .finite_arcs()
        .complement()
        .intersection(net.bundle_arcs(i));

    let mut cuts = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut u = net.empty_vertices();
        u.insert(source);
        for (k, &v) in free.iter().enumerate() {
            if mask & (1 << k) != 0 {
                u.insert(v);
            }
        }
        cuts.extend(viable_cut(net, u, i, &infinite));
    }
    cuts.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    cuts
}

/// Viable cuts deduplicated by their outgoing arc set, keeping the first cut
/// (in vertex-set order) for each distinct set. Sorted by outgoing set.
pub fn outgoing_view(cuts: &[ViableCut]) -> Vec<ViableCut> {
    let mut view: Vec<ViableCut> = Vec::new();
    for c in cuts {
        if !view.iter().any(|v| v.outgoing == c.outgoing) {
            view.push(c.clone());
        }
    }
    view.sort_by(|a, b| a.outgoing.cmp(&b.outgoing));
    view
}
