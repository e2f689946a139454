//! Downward dominance and its cheaper sufficient conditions.
//!
//! All checks quantify over the viable cuts of pairs `1..n` (0-based; the
//! first pair has no conditions), deduplicated by their outgoing bundle arcs
//! since only those enter the conditions. From strongest to weakest:
//!
//! * [`Level::SingleArcCuts`] (`l43`): every such set is a single arc, and for
//!   every pair of indices `s <= h <= i` whose bundles it meets, either all or
//!   none of the `s`-source to `h`-sink paths use it.
//! * [`Level::PathSeparation`] (`l42`): the set is disjoint over earlier
//!   bundles and every such source-to-sink path uses it.
//! * [`Level::WalkBlocking`] (`l41`): disjoint, and every indirect walk of each
//!   touched pair meets the source-augmented set.
//! * [`Level::Full`]: the definition itself, via structural-dominance closures.
//!
//! Each level implies the next; [`analyze`] runs them cheapest first.

use std::fmt;

use thiserror::Error;

use crate::cuts::{
    enumerate_viable_i_cuts, in_d_i, is_j_disjoint, outgoing_view, source_augmented, ViableCut,
};
use crate::dominance::{find_bypassing_ii_walk, sdom, IndirectWalk};
use crate::graph::{Network, Path};
use crate::sets::{ArcSet, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    SingleArcCuts,
    PathSeparation,
    WalkBlocking,
    Full,
}

impl Level {
    pub const ALL: [Level; 4] = [
        Level::SingleArcCuts,
        Level::PathSeparation,
        Level::WalkBlocking,
        Level::Full,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Level::SingleArcCuts => "l43",
            Level::PathSeparation => "l42",
            Level::WalkBlocking => "l41",
            Level::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.token() == s)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Why a viable cut defeats a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// The outgoing set has more than one arc.
    MultipleOutgoing { count: usize },
    /// Some but not all paths from source `s` to sink `h` use the outgoing set.
    NotAllOrNothing { s: usize, h: usize, avoiding: Path },
    /// Some path of an earlier pair uses two outgoing arcs.
    NotDisjoint,
    /// A path from source `s` to sink `h` avoids the outgoing set.
    PathBypass { s: usize, h: usize, path: Path },
    /// An indirect walk of pair `h` avoids the source-augmented set.
    WalkBypass { h: usize, walk: IndirectWalk },
    /// The source arc of pair `h` is outside the closure of the
    /// source-augmented set (`h` is the cut's own pair for the second
    /// condition of the definition).
    NotDominated { h: usize },
}

impl Reason {
    pub fn describe(&self, net: &Network) -> String {
        match self {
            Reason::MultipleOutgoing { count } => format!("outgoing set has {count} arcs"),
            Reason::NotAllOrNothing { s, h, avoiding } => format!(
                "some but not all paths from source {} to sink {} cross it; avoiding path: {}",
                s + 1,
                h + 1,
                net.format_path(avoiding)
            ),
            Reason::NotDisjoint => "a path of an earlier pair crosses it twice".to_string(),
            Reason::PathBypass { s, h, path } => format!(
                "path from source {} to sink {} avoids it: {}",
                s + 1,
                h + 1,
                net.format_path(path)
            ),
            Reason::WalkBypass { h, walk } => format!(
                "indirect walk of pair {} avoids the augmented set: {}",
                h + 1,
                walk.legs
                    .iter()
                    .map(|l| net.format_path(l))
                    .collect::<Vec<_>>()
                    .join(" | ")
            ),
            Reason::NotDominated { h } => format!(
                "source arc of pair {} is not structurally dominated by the augmented set",
                h + 1
            ),
        }
    }
}

/// A viable cut on which a level fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub pair: usize,
    pub cut: VertexSet,
    pub outgoing: ArcSet,
    pub reason: Reason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelResult {
    Holds,
    Fails(Box<Witness>),
    /// Not evaluated because a cheaper level already certified the verdict.
    /// This says nothing about the level itself: the single-arc level can
    /// hold while path separation fails.
    Skipped,
    NotRun,
}

/// Viable cuts of every pair, deduplicated by outgoing set. Index 0 is empty.
#[derive(Clone, Debug)]
pub struct CutViews(pub Vec<Vec<ViableCut>>);

impl CutViews {
    pub fn compute(net: &Network) -> Self {
        CutViews(
            (0..net.pair_count())
                .map(|i| {
                    if i == 0 {
                        Vec::new()
                    } else {
                        outgoing_view(&enumerate_viable_i_cuts(net, i))
                    }
                })
                .collect(),
        )
    }

    fn iter(&self) -> impl Iterator<Item = &ViableCut> {
        self.0.iter().flatten()
    }
}

fn witness(cut: &ViableCut, reason: Reason) -> LevelResult {
    LevelResult::Fails(Box::new(Witness {
        pair: cut.pair,
        cut: cut.vertices.clone(),
        outgoing: cut.outgoing.clone(),
        reason,
    }))
}

fn run(views: &CutViews, mut per_cut: impl FnMut(&ViableCut) -> Option<Reason>) -> LevelResult {
    for cut in views.iter() {
        if let Some(reason) = per_cut(cut) {
            return witness(cut, reason);
        }
    }
    LevelResult::Holds
}

/// Index pairs `(s, h)` with `s <= h <= i` whose bundles both meet `o`.
fn touched_pairs(net: &Network, o: &ArcSet, i: usize) -> Vec<(usize, usize)> {
    let touched: Vec<usize> = (0..=i)
        .filter(|&h| net.bundle_arcs(h).intersects(o))
        .collect();
    let mut out = Vec::new();
    for &h in &touched {
        for &s in touched.iter().filter(|&&s| s <= h) {
            out.push((s, h));
        }
    }
    out
}

fn earlier_disjoint(net: &Network, o: &ArcSet, i: usize) -> bool {
    is_j_disjoint(net, o, &(0..i).collect::<Vec<_>>())
}

pub fn check_single_arc_cuts_with(net: &Network, views: &CutViews) -> LevelResult {
    run(views, |cut| {
        let o = &cut.outgoing;
        if o.len() != 1 {
            return Some(Reason::MultipleOutgoing { count: o.len() });
        }
        for (s, h) in touched_pairs(net, o, cut.pair) {
            let paths = net.cross_paths(s, h);
            let crossing = paths.iter().filter(|p| p.count_in(o) > 0).count();
            if crossing != 0 && crossing != paths.len() {
                let avoiding = paths
                    .iter()
                    .find(|p| p.count_in(o) == 0)
                    .expect("exists")
                    .clone();
                return Some(Reason::NotAllOrNothing { s, h, avoiding });
            }
        }
        None
    })
}

pub fn check_path_separation_with(net: &Network, views: &CutViews) -> LevelResult {
    run(views, |cut| {
        let o = &cut.outgoing;
        if !earlier_disjoint(net, o, cut.pair) {
            return Some(Reason::NotDisjoint);
        }
        for (s, h) in touched_pairs(net, o, cut.pair) {
            if let Some(p) = net.cross_paths(s, h).iter().find(|p| p.count_in(o) == 0) {
                return Some(Reason::PathBypass {
                    s,
                    h,
                    path: p.clone(),
                });
            }
        }
        None
    })
}

pub fn check_walk_blocking_with(net: &Network, views: &CutViews) -> LevelResult {
    run(views, |cut| {
        let o = &cut.outgoing;
        if !earlier_disjoint(net, o, cut.pair) {
            return Some(Reason::NotDisjoint);
        }
        for h in (0..=cut.pair).filter(|&h| net.bundle_arcs(h).intersects(o)) {
            if let Some(walk) = find_bypassing_ii_walk(net, h, &source_augmented(net, o, h)) {
                return Some(Reason::WalkBypass { h, walk });
            }
        }
        None
    })
}

pub fn check_full_with(net: &Network, views: &CutViews) -> LevelResult {
    run(views, |cut| {
        let i = cut.pair;
        let o = &cut.outgoing;
        let report = in_d_i(net, o, i - 1);
        if !report.disjoint {
            return Some(Reason::NotDisjoint);
        }
        if let Some(fail) = report.first_failure() {
            return Some(Reason::NotDominated { h: fail.h });
        }
        if !sdom(net, &source_augmented(net, o, i)).contains(net.source_arc(i)) {
            return Some(Reason::NotDominated { h: i });
        }
        None
    })
}

pub fn check_level(net: &Network, views: &CutViews, level: Level) -> LevelResult {
    match level {
        Level::SingleArcCuts => check_single_arc_cuts_with(net, views),
        Level::PathSeparation => check_path_separation_with(net, views),
        Level::WalkBlocking => check_walk_blocking_with(net, views),
        Level::Full => check_full_with(net, views),
    }
}

/// Single-arc cuts with all-or-nothing source-to-sink paths.
pub fn check_single_arc_cuts(net: &Network) -> LevelResult {
    check_single_arc_cuts_with(net, &CutViews::compute(net))
}

/// Disjoint outgoing sets that every relevant source-to-sink path crosses.
pub fn check_path_separation(net: &Network) -> LevelResult {
    check_path_separation_with(net, &CutViews::compute(net))
}

/// Disjoint outgoing sets whose augmentations block every indirect walk.
pub fn check_walk_blocking(net: &Network) -> LevelResult {
    check_walk_blocking_with(net, &CutViews::compute(net))
}

/// The downward dominance definition itself.
pub fn check_downward_dominance(net: &Network) -> LevelResult {
    check_full_with(net, &CutViews::compute(net))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Cheapest level first; the first level that holds certifies, and the
    /// full definition decides when none of the cheaper ones does.
    Auto,
    /// Evaluate one level only.
    Only(Level),
    /// Evaluate every level (for cross-checking the implications).
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Dominated,
    NotDominated,
    /// A single sufficient level was requested and it failed.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Dominated => "downward dominated",
            Verdict::NotDominated => "not downward dominated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutabilityReport {
    /// Pair ordering analysed, as indices into the original pair list.
    pub order: Vec<usize>,
    pub verdict: Verdict,
    /// Cheapest level that holds, when dominated.
    pub certified_by: Option<Level>,
    pub levels: Vec<(Level, LevelResult)>,
    /// Failure witness of the full definition (or of the single requested level).
    pub witness: Option<Witness>,
}

impl RoutabilityReport {
    pub fn result(&self, level: Level) -> &LevelResult {
        &self
            .levels
            .iter()
            .find(|(l, _)| *l == level)
            .expect("every level listed")
            .1
    }
}

/// Analyses `net` with its pairs in the given order.
pub fn analyze(net: &Network, mode: Mode) -> RoutabilityReport {
    analyze_order(net, &(0..net.pair_count()).collect::<Vec<_>>(), mode)
        .expect("identity is a valid order")
}

/// Analyses `net` with pairs reordered: new pair `k` is old pair `order[k]`.
pub fn analyze_order(
    net: &Network,
    order: &[usize],
    mode: Mode,
) -> Result<RoutabilityReport, crate::graph::LookupError> {
    let net = net.with_pair_order(order)?;
    let views = CutViews::compute(&net);
    let mut levels: Vec<(Level, LevelResult)> = Level::ALL
        .iter()
        .map(|&l| (l, LevelResult::NotRun))
        .collect();
    let mut certified_by = None;
    let mut witness = None;
    let verdict = match mode {
        Mode::Only(level) => {
            let r = check_level(&net, &views, level);
            let holds = r == LevelResult::Holds;
            if let LevelResult::Fails(w) = &r {
                witness = Some((**w).clone());
            }
            levels[level as usize].1 = r;
            if holds {
                certified_by = Some(level);
                Verdict::Dominated
            } else if level == Level::Full {
                Verdict::NotDominated
            } else {
                Verdict::Inconclusive
            }
        }
        Mode::Auto | Mode::All => {
            for (level, slot) in levels.iter_mut() {
                if mode == Mode::Auto && certified_by.is_some() {
                    *slot = LevelResult::Skipped;
                    continue;
                }
                let r = check_level(&net, &views, *level);
                if r == LevelResult::Holds && certified_by.is_none() {
                    certified_by = Some(*level);
                }
                if let (Level::Full, LevelResult::Fails(w)) = (*level, &r) {
                    witness = Some((**w).clone());
                }
                *slot = r;
            }
            if certified_by.is_some() {
                Verdict::Dominated
            } else {
                Verdict::NotDominated
            }
        }
    };
    Ok(RoutabilityReport {
        order: order.to_vec(),
        verdict,
        certified_by,
        levels,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("search too large: {pairs} pairs exceeds the limit of {limit} for ordering search")]
pub struct SearchTooLarge {
    pub pairs: usize,
    pub limit: usize,
}

/// Default bound on the number of pairs for [`find_dd_ordering`].
pub const DEFAULT_ORDER_LIMIT: usize = 8;

/// Rearranges `p` into the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(k) = (1..p.len()).rev().find(|&k| p[k - 1] < p[k]) else {
        return false;
    };
    let j = (k..p.len())
        .rev()
        .find(|&j| p[j] > p[k - 1])
        .expect("exists");
    p.swap(k - 1, j);
    p[k..].reverse();
    true
}

/// First ordering (in lexicographic order of permutations) under which the
/// structure is downward dominated.
pub fn find_dd_ordering(net: &Network, limit: usize) -> Result<Option<Vec<usize>>, SearchTooLarge> {
    let n = net.pair_count();
    if n > limit {
        return Err(SearchTooLarge { pairs: n, limit });
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let reordered = net.with_pair_order(&order).expect("permutation");
        if check_downward_dominance(&reordered) == LevelResult::Holds {
            return Ok(Some(order));
        }
        if !next_permutation(&mut order) {
            return Ok(None);
        }
    }
}

/// Re-checks a failure witness against the cut and closure primitives.
/// `net` must already be in the analysed order.
pub fn witness_is_valid(net: &Network, level: Level, w: &Witness) -> bool {
    use crate::cuts::check_viable_i_cut;
    let report = check_viable_i_cut(net, &w.cut, w.pair);
    if !report.is_viable() || report.outgoing != w.outgoing {
        return false;
    }
    let o = &w.outgoing;
    let i = w.pair;
    match (&w.reason, level) {
        (Reason::MultipleOutgoing { count }, Level::SingleArcCuts) => {
            *count == o.len() && o.len() != 1
        }
        (Reason::NotAllOrNothing { s, h, avoiding }, Level::SingleArcCuts) => {
            let paths = net.cross_paths(*s, *h);
            avoiding.count_in(o) == 0
                && paths.contains(avoiding)
                && paths.iter().any(|p| p.count_in(o) > 0)
        }
        (Reason::NotDisjoint, Level::Full) => !in_d_i(net, o, i - 1).disjoint,
        (Reason::NotDisjoint, _) => !earlier_disjoint(net, o, i),
        (Reason::PathBypass { s, h, path }, Level::PathSeparation) => {
            *s <= *h
                && *h <= i
                && net.bundle_arcs(*s).intersects(o)
                && net.bundle_arcs(*h).intersects(o)
                && path.count_in(o) == 0
                && path.is_well_formed(net)
                && path.start() == net.source(*s)
                && path.end() == net.sink(*h)
        }
        (Reason::WalkBypass { h, walk }, Level::WalkBlocking) => {
            net.bundle_arcs(*h).intersects(o)
                && walk.pair == *h
                && walk.check(net).is_ok()
                && walk.avoids(&source_augmented(net, o, *h))
        }
        (Reason::NotDominated { h }, Level::Full) => {
            (*h == i || net.bundle_arcs(*h).intersects(o))
                && !sdom(net, &source_augmented(net, o, *h)).contains(net.source_arc(*h))
        }
        _ => false,
    }
}
