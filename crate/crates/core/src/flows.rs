//! Multicommodity flows in exact rational arithmetic.
//!
//! * [`solve_mcf`] — feasibility (optionally with maximal uniform capacity slack)
//!   of the capacity / supply-equals-demand / conservation system.
//! * [`max_flow`] — single-commodity maximal flow inside one pair's bundle under
//!   residual capacities, made acyclic, with the residual-reachability min cut.
//! * [`decompose_flow`] — path and cycle decomposition.
//! * [`sequential_construct`] — route the pairs one after the other on the
//!   residual capacities left by the earlier ones.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{ArcId, Capacity, Network, Path, VertexId};
use crate::lp::{LinearProgram, LpOutcome, Sense};
use crate::sets::{ArcSet, VertexSet};
use crate::{format_rational, Rational};

/// Strictly positive demand (bits per time step) for each pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandVector(Vec<Rational>);

impl DemandVector {
    /// `None` if some value is not strictly positive.
    pub fn new(values: Vec<Rational>) -> Option<Self> {
        values
            .iter()
            .all(|v| v.is_positive())
            .then_some(DemandVector(values))
    }

    pub fn uniform(n: usize, value: Rational) -> Option<Self> {
        Self::new(vec![value; n])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// New entry `k` is old entry `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        DemandVector(order.iter().map(|&k| self.0[k].clone()).collect())
    }
}

/// Flow value of every commodity on every arc: `flows[j][a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFlow {
    pub flows: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowViolation {
    Negative {
        pair: usize,
        arc: ArcId,
    },
    OverCapacity {
        arc: ArcId,
        total: Rational,
    },
    Supply {
        pair: usize,
        arc: ArcId,
        value: Rational,
    },
    Conservation {
        pair: usize,
        vertex: VertexId,
        imbalance: Rational,
    },
    Shape,
}

impl fmt::Display for FlowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowViolation::Negative { pair, arc } => {
                write!(f, "negative flow of pair {} on arc #{}", pair + 1, arc.0)
            }
            FlowViolation::OverCapacity { arc, total } => {
                write!(
                    f,
                    "arc #{} carries {} above capacity",
                    arc.0,
                    format_rational(total)
                )
            }
            FlowViolation::Supply { pair, arc, value } => write!(
                f,
                "pair {} carries {} on terminal arc #{} instead of its demand",
                pair + 1,
                format_rational(value),
                arc.0
            ),
            FlowViolation::Conservation {
                pair,
                vertex,
                imbalance,
            } => write!(
                f,
                "pair {} is not conserved at vertex #{} (in - out = {})",
                pair + 1,
                vertex.0,
                format_rational(imbalance)
            ),
            FlowViolation::Shape => write!(f, "flow table has the wrong dimensions"),
        }
    }
}

impl MultiFlow {
    pub fn zero(net: &Network) -> Self {
        MultiFlow {
            flows: vec![vec![Rational::zero(); net.arc_count()]; net.pair_count()],
        }
    }

    pub fn total(&self, a: ArcId) -> Rational {
        self.flows.iter().map(|f| &f[a.0]).sum()
    }

    /// Checks nonnegativity, capacity bounds, supply equals demand, and
    /// conservation, exactly. Capacities come from `net`.
    pub fn verify(&self, net: &Network, demands: &DemandVector) -> Result<(), Vec<FlowViolation>> {
        if self.flows.len() != net.pair_count()
            || demands.len() != net.pair_count()
            || self.flows.iter().any(|f| f.len() != net.arc_count())
        {
            return Err(vec![FlowViolation::Shape]);
        }
        let mut out = Vec::new();
        for (j, f) in self.flows.iter().enumerate() {
            for a in net.arc_ids() {
                if f[a.0].is_negative() {
                    out.push(FlowViolation::Negative { pair: j, arc: a });
                }
            }
            for arc in [net.source_arc(j), net.sink_arc(j)] {
                if &f[arc.0] != demands.get(j) {
                    out.push(FlowViolation::Supply {
                        pair: j,
                        arc,
                        value: f[arc.0].clone(),
                    });
                }
            }
            let (s, t) = (net.source(j), net.sink(j));
            for v in net.vertices().filter(|&v| v != s && v != t) {
                let imbalance = imbalance(net, f, v);
                if !imbalance.is_zero() {
                    out.push(FlowViolation::Conservation {
                        pair: j,
                        vertex: v,
                        imbalance,
                    });
                }
            }
        }
        for a in net.arc_ids() {
            if let Capacity::Finite(c) = net.capacity(a) {
                let total = self.total(a);
                if &total > c {
                    out.push(FlowViolation::OverCapacity { arc: a, total });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Smallest unused capacity over finite arcs; `None` when every arc is infinite.
    pub fn min_slack(&self, net: &Network) -> Option<Rational> {
        net.arc_ids()
            .filter_map(|a| net.capacity(a).finite_value().map(|c| c - self.total(a)))
            .min()
    }
}

/// Inflow minus outflow at `v`.
fn imbalance(net: &Network, f: &[Rational], v: VertexId) -> Rational {
    let inflow: Rational = net.in_arcs(v).iter().map(|a| &f[a.0]).sum();
    let outflow: Rational = net.out_arcs(v).iter().map(|a| &f[a.0]).sum();
    inflow - outflow
}

/// Largest uniform slack `t` with `sum_j f[a][j] + t <= c[a]` on every finite arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slack {
    Finite(Rational),
    /// No finite arcs at all.
    Unbounded,
}

impl Slack {
    pub fn is_positive(&self) -> bool {
        match self {
            Slack::Finite(t) => t.is_positive(),
            Slack::Unbounded => true,
        }
    }
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slack::Finite(t) => write!(f, "{}", format_rational(t)),
            Slack::Unbounded => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McfOutcome {
    Feasible {
        flow: MultiFlow,
        /// Present for strict solves: the maximal uniform slack.
        slack: Option<Slack>,
    },
    Infeasible,
}

impl McfOutcome {
    pub fn flow(&self) -> Option<&MultiFlow> {
        match self {
            McfOutcome::Feasible { flow, .. } => Some(flow),
            McfOutcome::Infeasible => None,
        }
    }

    /// Feasible, and (for strict solves) with positive slack.
    pub fn is_strictly_feasible(&self) -> bool {
        matches!(self, McfOutcome::Feasible { slack: Some(s), .. } if s.is_positive())
    }
}

/// Decides whether the demands can be routed within the capacities of `net`.
///
/// Commodity `j` only gets variables on arcs of its own bundle: any feasible
/// flow stays feasible after dropping its cycle components, and what remains
/// lies on `j`-paths. Without `strict`, the returned flow minimizes total
/// arc usage. With `strict`, it maximizes the uniform slack instead and
/// reports it.
pub fn solve_mcf(net: &Network, demands: &DemandVector, strict: bool) -> McfOutcome {
    let n = net.pair_count();
    assert_eq!(demands.len(), n, "one demand per pair");
    // variable layout: per pair, its bundle arcs in id order; then t
    let mut var_of: Vec<Vec<Option<usize>>> = vec![vec![None; net.arc_count()]; n];
    let mut arc_of = Vec::new();
    for (j, row) in var_of.iter_mut().enumerate() {
        for a in net.bundle_arcs(j).iter() {
            row[a.0] = Some(arc_of.len());
            arc_of.push((j, a));
        }
    }
    let t = arc_of.len();
    let finite: Vec<ArcId> = net.arc_ids().filter(|&a| net.is_finite(a)).collect();
    let mut lp = LinearProgram::new(t + usize::from(strict));
    let one = Rational::one();

    for j in 0..n {
        let bundle_v = net.bundle_vertices(j);
        for v in bundle_v.iter() {
            if v == net.source(j) || v == net.sink(j) {
                continue;
            }
            let mut coeffs = Vec::new();
            for a in net.in_arcs(v) {
                if let Some(x) = var_of[j][a.0] {
                    coeffs.push((x, one.clone()));
                }
            }
            for a in net.out_arcs(v) {
                if let Some(x) = var_of[j][a.0] {
                    coeffs.push((x, -one.clone()));
                }
            }
            lp.add(coeffs, Sense::Eq, Rational::zero());
        }
        let src = var_of[j][net.source_arc(j).0].expect("source arc is in its bundle");
        lp.add(vec![(src, one.clone())], Sense::Eq, demands.get(j).clone());
    }
    for &a in &finite {
        let mut coeffs: Vec<(usize, Rational)> = (0..n)
            .filter_map(|j| var_of[j][a.0].map(|x| (x, one.clone())))
            .collect();
        if strict {
            coeffs.push((t, one.clone()));
        }
        if coeffs.is_empty() {
            continue;
        }
        let cap = net.capacity(a).finite_value().expect("finite").clone();
        lp.add(coeffs, Sense::Le, cap);
    }
    if strict {
        lp.objective = vec![(t, one.clone())];
        if finite.is_empty() {
            // t is otherwise unconstrained
            lp.add(vec![(t, one.clone())], Sense::Le, Rational::zero());
        }
    } else {
        lp.objective = (0..t).map(|x| (x, -one.clone())).collect();
    }

    let x = match lp.solve() {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Infeasible => return McfOutcome::Infeasible,
        LpOutcome::Unbounded => {
            // only t can grow without bound, which needs some finite arc to carry no
            // constraint at all; re-solve with t pinned to learn a flow
            unreachable!("every variable is bounded by demand or capacity")
        }
    };
    let mut flow = MultiFlow::zero(net);
    for (k, &(j, a)) in arc_of.iter().enumerate() {
        flow.flows[j][a.0] = x[k].clone();
    }
    let slack = strict.then(|| {
        if finite.is_empty() {
            Slack::Unbounded
        } else {
            Slack::Finite(x[t].clone())
        }
    });
    McfOutcome::Feasible { flow, slack }
}

/// Capacity still available on each arc; `None` means infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual(pub Vec<Option<Rational>>);

impl Residual {
    /// The full capacities of `net`.
    pub fn of(net: &Network) -> Self {
        Residual(
            net.arc_ids()
                .map(|a| net.capacity(a).finite_value().cloned())
                .collect(),
        )
    }

    /// Capacities left after the flows of commodities `0..upto`.
    pub fn after(net: &Network, flow: &MultiFlow, upto: usize) -> Self {
        let mut r = Self::of(net);
        for (k, slot) in r.0.iter_mut().enumerate() {
            if let Some(c) = slot {
                for f in &flow.flows[..upto] {
                    *c -= &f[k];
                }
            }
        }
        r
    }

    pub fn get(&self, a: ArcId) -> Option<&Rational> {
        self.0[a.0].as_ref()
    }

    pub fn is_infinite(&self, a: ArcId) -> bool {
        self.0[a.0].is_none()
    }

    fn has_slack(&self, a: ArcId, q: &Rational) -> bool {
        match self.get(a) {
            None => true,
            Some(r) => q < r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxFlowOutcome {
    Finite {
        /// Acyclic flow per arc (zero outside the bundle).
        flow: Vec<Rational>,
        value: Rational,
        /// Vertices reachable from the source along arcs with forward slack or
        /// backward flow.
        cut: VertexSet,
    },
    /// Some path of the pair has infinite residual capacity throughout.
    Unbounded { path: Path },
}

/// Maximal flow of pair `i` inside its bundle under residual capacities `r`,
/// by shortest augmenting paths, with cycle components removed afterwards.
pub fn max_flow(net: &Network, r: &Residual, i: usize) -> MaxFlowOutcome {
    let bundle = net.bundle_arcs(i);
    if let Some(p) = net
        .pair_paths(i)
        .iter()
        .find(|p| p.arcs().iter().all(|&a| r.is_infinite(a)))
    {
        return MaxFlowOutcome::Unbounded { path: p.clone() };
    }
    assert!(
        net.arc_ids()
            .all(|a| r.get(a).is_none_or(|x| !x.is_negative())),
        "residual capacities must be nonnegative"
    );

    let (s, t) = (net.source(i), net.sink(i));
    let mut q = vec![Rational::zero(); net.arc_count()];
    loop {
        // BFS over residual arcs; parent = (arc, forward?)
        let mut parent: Vec<Option<(ArcId, bool)>> = vec![None; net.vertex_count()];
        let mut seen = net.empty_vertices();
        seen.insert(s);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &a in net.out_arcs(v) {
                let w = net.head(a);
                if bundle.contains(a) && r.has_slack(a, &q[a.0]) && seen.insert(w) {
                    parent[w.0] = Some((a, true));
                    queue.push_back(w);
                }
            }
            for &a in net.in_arcs(v) {
                let w = net.tail(a);
                if bundle.contains(a) && q[a.0].is_positive() && seen.insert(w) {
                    parent[w.0] = Some((a, false));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(t) {
            break;
        }
        let mut steps = Vec::new();
        let mut v = t;
        while v != s {
            let (a, fwd) = parent[v.0].expect("on BFS tree");
            steps.push((a, fwd));
            v = if fwd { net.tail(a) } else { net.head(a) };
        }
        let delta = steps
            .iter()
            .filter_map(|&(a, fwd)| {
                if fwd {
                    r.get(a).map(|c| c - &q[a.0])
                } else {
                    Some(q[a.0].clone())
                }
            })
            .min()
            .expect("an all-infinite augmenting path implies an all-infinite pair path");
        for (a, fwd) in steps {
            if fwd {
                q[a.0] += &delta;
            } else {
                q[a.0] -= &delta;
            }
        }
    }

    let value = q[net.sink_arc(i).0].clone();
    let decomposition = decompose_flow(net, &q, i).expect("augmenting paths conserve flow");
    let flow = decomposition.reconstruct_paths(net);
    let cut = residual_cut(net, r, i, &flow);
    MaxFlowOutcome::Finite { flow, value, cut }
}

/// Vertices reachable from the source of `i` inside its bundle, moving
/// forward along arcs with slack and backward along arcs with flow.
pub fn residual_cut(net: &Network, r: &Residual, i: usize, q: &[Rational]) -> VertexSet {
    let bundle = net.bundle_arcs(i);
    let s = net.source(i);
    let mut seen = net.empty_vertices();
    seen.insert(s);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &a in net.out_arcs(v) {
            if bundle.contains(a) && r.has_slack(a, &q[a.0]) && seen.insert(net.head(a)) {
                queue.push_back(net.head(a));
            }
        }
        for &a in net.in_arcs(v) {
            if bundle.contains(a) && q[a.0].is_positive() && seen.insert(net.tail(a)) {
                queue.push_back(net.tail(a));
            }
        }
    }
    seen
}

/// Checks that `q` saturates every outgoing bundle arc of `u` and is zero on
/// every incoming bundle arc.
pub fn cut_is_tight(net: &Network, r: &Residual, i: usize, q: &[Rational], u: &VertexSet) -> bool {
    let bundle = net.bundle_arcs(i);
    net.out_boundary(u)
        .intersection(bundle)
        .iter()
        .all(|a| r.get(a) == Some(&q[a.0]))
        && net
            .in_boundary(u)
            .intersection(bundle)
            .iter()
            .all(|a| q[a.0].is_zero())
}

/// Total residual capacity of the outgoing bundle arcs of `u` (`None` if one is infinite).
pub fn cut_capacity(net: &Network, r: &Residual, i: usize, u: &VertexSet) -> Option<Rational> {
    net.out_boundary(u)
        .intersection(net.bundle_arcs(i))
        .iter()
        .map(|a| r.get(a).cloned())
        .sum()
}

/// A directed cycle, rotated to start at its smallest arc id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    pub arcs: Vec<ArcId>,
}

impl Cycle {
    fn canonical(mut arcs: Vec<ArcId>) -> Self {
        let k = arcs
            .iter()
            .enumerate()
            .min_by_key(|(_, a)| **a)
            .map(|(k, _)| k)
            .unwrap_or(0);
        arcs.rotate_left(k);
        Cycle { arcs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFlow {
    /// Position in the pair's path list.
    pub index: usize,
    pub path: Path,
    pub value: Rational,
}

/// A single-commodity flow split into source-to-sink path flows and cycle flows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub pair: usize,
    pub paths: Vec<PathFlow>,
    pub cycles: Vec<(Cycle, Rational)>,
}

impl PathDecomposition {
    pub fn is_acyclic(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Per-arc sum of path flows only.
    pub fn reconstruct_paths(&self, net: &Network) -> Vec<Rational> {
        let mut q = vec![Rational::zero(); net.arc_count()];
        for pf in &self.paths {
            for a in pf.path.arcs() {
                q[a.0] += &pf.value;
            }
        }
        q
    }

    /// Per-arc sum of all path and cycle flows.
    pub fn reconstruct(&self, net: &Network) -> Vec<Rational> {
        let mut q = self.reconstruct_paths(net);
        for (c, w) in &self.cycles {
            for a in &c.arcs {
                q[a.0] += w;
            }
        }
        q
    }

    pub fn value(&self) -> Rational {
        self.paths.iter().map(|p| &p.value).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("flow table has {got} entries, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("negative flow on arc {0}")]
    Negative(String),
    #[error("flow not conserved at vertex {0}")]
    NotConserved(String),
}

/// Splits `q` into path flows of pair `i` (largest bottleneck first, ties to
/// the earlier path in the pair's path list) and then cycle flows.
pub fn decompose_flow(
    net: &Network,
    q: &[Rational],
    i: usize,
) -> Result<PathDecomposition, DecomposeError> {
    if q.len() != net.arc_count() {
        return Err(DecomposeError::Shape {
            got: q.len(),
            expected: net.arc_count(),
        });
    }
    if let Some(a) = net.arc_ids().find(|a| q[a.0].is_negative()) {
        return Err(DecomposeError::Negative(net.arc_name(a).to_string()));
    }
    let (s, t) = (net.source(i), net.sink(i));
    if let Some(v) = net
        .vertices()
        .filter(|&v| v != s && v != t)
        .find(|&v| !imbalance(net, q, v).is_zero())
    {
        return Err(DecomposeError::NotConserved(net.vertex_name(v).to_string()));
    }

    let mut rest = q.to_vec();
    let mut paths = Vec::new();
    let pair_paths = net.pair_paths(i);
    loop {
        let mut best: Option<(usize, Rational)> = None;
        for (k, p) in pair_paths.iter().enumerate() {
            let b = p
                .arcs()
                .iter()
                .map(|a| &rest[a.0])
                .min()
                .cloned()
                .unwrap_or_else(Rational::zero);
            if b.is_positive() && best.as_ref().is_none_or(|(_, v)| b > *v) {
                best = Some((k, b));
            }
        }
        let Some((k, b)) = best else { break };
        for a in pair_paths[k].arcs() {
            rest[a.0] -= &b;
        }
        match paths.iter_mut().find(|pf: &&mut PathFlow| pf.index == k) {
            Some(pf) => pf.value += &b,
            None => paths.push(PathFlow {
                index: k,
                path: pair_paths[k].clone(),
                value: b,
            }),
        }
    }
    paths.sort_by_key(|pf| pf.index);

    let mut cycles: Vec<(Cycle, Rational)> = Vec::new();
    while let Some(start) = net.arc_ids().find(|a| rest[a.0].is_positive()) {
        // follow positive-flow arcs until a vertex repeats
        let mut order: Vec<ArcId> = vec![start];
        let mut pos_of = vec![usize::MAX; net.vertex_count()];
        pos_of[net.tail(start).0] = 0;
        let mut v = net.head(start);
        while pos_of[v.0] == usize::MAX {
            pos_of[v.0] = order.len();
            let a = *net
                .out_arcs(v)
                .iter()
                .find(|a| rest[a.0].is_positive())
                .expect("conserved circulation continues");
            order.push(a);
            v = net.head(a);
        }
        let arcs = order[pos_of[v.0]..].to_vec();
        let w = arcs
            .iter()
            .map(|a| &rest[a.0])
            .min()
            .cloned()
            .expect("nonempty");
        for a in &arcs {
            rest[a.0] -= &w;
        }
        let cycle = Cycle::canonical(arcs);
        match cycles.iter_mut().find(|(c, _)| *c == cycle) {
            Some((_, total)) => *total += &w,
            None => cycles.push((cycle, w)),
        }
    }
    cycles.sort();
    Ok(PathDecomposition {
        pair: i,
        paths,
        cycles,
    })
}

/// How one pair was routed by [`sequential_construct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Routed entirely on a path with no finite-capacity arc.
    InfinitePath { pair: usize, path: Path },
    /// Routed as a scaled residual max flow.
    Scaled {
        pair: usize,
        value: Rational,
        scale: Rational,
        cut: VertexSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub flow: MultiFlow,
    pub steps: Vec<Step>,
}

/// The residual max flow of `pair` fell short of its demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructFailure {
    pub pair: usize,
    pub value: Rational,
    pub demand: Rational,
    pub cut: VertexSet,
    pub outgoing: ArcSet,
    pub residual: Residual,
    pub steps: Vec<Step>,
}

/// Routes pairs in order on the capacity left by earlier pairs.
///
/// A pair with a path of only infinite arcs sends its whole demand along the
/// first such path. Otherwise its residual max flow `q` must reach the demand
/// `h`, and the pair is assigned `(h / value) * q`.
pub fn sequential_construct(
    net: &Network,
    demands: &DemandVector,
) -> Result<Construction, Box<ConstructFailure>> {
    let mut flow = MultiFlow::zero(net);
    let mut steps = Vec::new();
    for i in 0..net.pair_count() {
        let r = Residual::after(net, &flow, i);
        let h = demands.get(i);
        match max_flow(net, &r, i) {
            MaxFlowOutcome::Unbounded { path } => {
                for a in path.arcs() {
                    flow.flows[i][a.0] = h.clone();
                }
                steps.push(Step::InfinitePath { pair: i, path });
            }
            MaxFlowOutcome::Finite {
                flow: q,
                value,
                cut,
            } => {
                if &value < h {
                    let outgoing = net.out_boundary(&cut).intersection(net.bundle_arcs(i));
                    return Err(Box::new(ConstructFailure {
                        pair: i,
                        value,
                        demand: h.clone(),
                        cut,
                        outgoing,
                        residual: r,
                        steps,
                    }));
                }
                let scale = h / &value;
                for (slot, qa) in flow.flows[i].iter_mut().zip(&q) {
                    *slot = qa * &scale;
                }
                steps.push(Step::Scaled {
                    pair: i,
                    value,
                    scale,
                    cut,
                });
            }
        }
    }
    Ok(Construction { flow, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn demands(v: &[(i64, i64)]) -> DemandVector {
        DemandVector::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn butterfly_unit_demands_are_infeasible() {
        let net = corpus::butterfly().network;
        assert_eq!(
            solve_mcf(&net, &demands(&[(1, 1), (1, 1)]), false),
            McfOutcome::Infeasible
        );
        assert_eq!(
            solve_mcf(&net, &demands(&[(1, 1), (1, 1)]), true),
            McfOutcome::Infeasible
        );
    }

    #[test]
    fn butterfly_half_demands_are_feasible() {
        let net = corpus::butterfly().network;
        let h = demands(&[(1, 2), (1, 2)]);
        let out = solve_mcf(&net, &h, false);
        let flow = out.flow().unwrap();
        flow.verify(&net, &h).unwrap();
        let alpha = net.arc("alpha").unwrap();
        assert_eq!(flow.flows[0][alpha.0], q(1, 2));
        assert_eq!(flow.flows[1][alpha.0], q(1, 2));
        // alpha is saturated, so no strict slack
        match solve_mcf(&net, &h, true) {
            McfOutcome::Feasible { slack, .. } => assert_eq!(slack, Some(Slack::Finite(q(0, 1)))),
            other => panic!("{other:?}"),
        }
        let strict = solve_mcf(&net, &demands(&[(1, 4), (1, 2)]), true);
        assert_eq!(
            strict,
            McfOutcome::Feasible {
                flow: strict.flow().unwrap().clone(),
                slack: Some(Slack::Finite(q(1, 4)))
            }
        );
    }

    #[test]
    fn all_infinite_internal_arcs_route_anything() {
        let file = corpus::butterfly();
        let caps: Vec<Capacity> = vec![Capacity::Infinite; file.network.arc_count()];
        // kinds must match, so rebuild from the spec instead
        let mut spec = file.network.to_spec();
        for a in &mut spec.arcs {
            a.capacity = Capacity::Infinite;
        }
        let net = Network::validate(&spec).unwrap();
        assert!(file.network.with_capacities(&caps).is_err());
        let h = demands(&[(7, 1), (5, 3)]);
        let out = solve_mcf(&net, &h, true);
        assert!(out.is_strictly_feasible());
        let c = sequential_construct(&net, &h).unwrap();
        assert!(c
            .steps
            .iter()
            .all(|s| matches!(s, Step::InfinitePath { .. })));
        c.flow.verify(&net, &h).unwrap();
    }

    #[test]
    fn butterfly_sequential_failure_and_success() {
        let net = corpus::butterfly().network;
        let fail = sequential_construct(&net, &demands(&[(1, 1), (1, 1)])).unwrap_err();
        assert_eq!(fail.pair, 1);
        assert_eq!(net.arc_names(&fail.outgoing), vec!["alpha"]);
        assert_eq!(fail.residual.get(net.arc("alpha").unwrap()), Some(&q(0, 1)));

        let h = demands(&[(1, 2), (1, 2)]);
        let ok = sequential_construct(&net, &h).unwrap();
        ok.flow.verify(&net, &h).unwrap();
        let alpha = net.arc("alpha").unwrap();
        assert_eq!(ok.flow.flows[0][alpha.0], q(1, 2));
        assert_eq!(ok.flow.flows[1][alpha.0], q(1, 2));
    }

    #[test]
    fn max_flow_examples() {
        let net = corpus::butterfly().network;
        let r = Residual::of(&net);
        let MaxFlowOutcome::Finite { flow, value, cut } = max_flow(&net, &r, 1) else {
            panic!()
        };
        assert_eq!(value, q(1, 1));
        assert!(cut_is_tight(&net, &r, 1, &flow, &cut));
        assert_eq!(cut_capacity(&net, &r, 1, &cut), Some(value));
        assert!(cut.contains(net.source(1)) && !cut.contains(net.sink(1)));

        let f5 = corpus::fig5().network;
        let r = Residual::of(&f5);
        let MaxFlowOutcome::Finite { value, flow, .. } = max_flow(&f5, &r, 1) else {
            panic!()
        };
        assert_eq!(value, q(2, 1));
        let d = decompose_flow(&f5, &flow, 1).unwrap();
        assert_eq!(d.paths.len(), 2);
        assert!(d.is_acyclic());
    }

    #[test]
    fn zero_residual_gives_zero_flow() {
        let net = corpus::butterfly().network;
        let mut r = Residual::of(&net);
        r.0[net.arc("alpha").unwrap().0] = Some(q(0, 1));
        let MaxFlowOutcome::Finite { flow, value, cut } = max_flow(&net, &r, 1) else {
            panic!()
        };
        assert!(value.is_zero());
        assert!(flow.iter().all(|x| x.is_zero()));
        assert!(cut_is_tight(&net, &r, 1, &flow, &cut));
    }

    #[test]
    fn decomposition_examples() {
        let f5 = corpus::fig5().network;
        let mut qv = vec![q(0, 1); f5.arc_count()];
        for name in ["alpha", "beta", "gamma", "out_sigma2"] {
            qv[f5.arc(name).unwrap().0] = q(1, 1);
        }
        qv[f5.arc("out_sigma2").unwrap().0] = q(2, 1);
        qv[f5.arc("in_tau2").unwrap().0] = q(2, 1);
        let d = decompose_flow(&f5, &qv, 1).unwrap();
        let names: Vec<String> = d.paths.iter().map(|p| f5.format_path(&p.path)).collect();
        assert_eq!(names.len(), 2);
        assert!(names.iter().any(|s| s.contains("alpha beta")));
        assert!(d.paths.iter().all(|p| p.value == q(1, 1)));
        assert_eq!(d.reconstruct(&f5), qv);

        assert!(decompose_flow(&f5, &vec![q(0, 1); f5.arc_count()], 1)
            .unwrap()
            .paths
            .is_empty());

        let f6 = corpus::fig6().network;
        let mut qv = vec![q(0, 1); f6.arc_count()];
        qv[f6.arc("beta").unwrap().0] = q(1, 1);
        qv[f6.arc("rho").unwrap().0] = q(1, 1);
        let d = decompose_flow(&f6, &qv, 1).unwrap();
        assert!(d.paths.is_empty());
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(d.cycles[0].1, q(1, 1));
        assert_eq!(d.reconstruct(&f6), qv);
    }

    #[test]
    fn decomposition_rejects_bad_input() {
        let net = corpus::fig5().network;
        let mut qv = vec![q(0, 1); net.arc_count()];
        qv[net.arc("alpha").unwrap().0] = q(1, 1);
        assert!(matches!(
            decompose_flow(&net, &qv, 1),
            Err(DecomposeError::NotConserved(_))
        ));
        qv[net.arc("alpha").unwrap().0] = q(-1, 1);
        assert!(matches!(
            decompose_flow(&net, &qv, 1),
            Err(DecomposeError::Negative(_))
        ));
    }

    #[test]
    fn verify_reports_violations() {
        let net = corpus::butterfly().network;
        let h = demands(&[(1, 1), (1, 1)]);
        let errs = MultiFlow::zero(&net).verify(&net, &h).unwrap_err();
        assert_eq!(
            errs.iter()
                .filter(|e| matches!(e, FlowViolation::Supply { .. }))
                .count(),
            4
        );
    }
}
