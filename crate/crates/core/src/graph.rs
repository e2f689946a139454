//! Network structures: validated n-pairs digraphs with capacities and ordered
//! source-sink pairs, plus the path, reachability and bundle primitives the
//! analysis modules are built on.
//!
//! Vertex and arc ids are strings. Internally both are numbered in
//! lexicographic order of their names, so "smallest id" tie-breaks everywhere
//! in the crate coincide with lexicographic order on names.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::sets::{ArcSet, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

/// Arc capacity: a strictly positive exact rational, or unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(BigRational),
    Infinite,
}

impl Capacity {
    /// Finite capacity, rejecting non-positive values.
    pub fn finite(value: BigRational) -> Option<Capacity> {
        value.is_positive().then_some(Capacity::Finite(value))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Capacity::Finite(_))
    }

    pub fn finite_value(&self) -> Option<&BigRational> {
        match self {
            Capacity::Finite(v) => Some(v),
            Capacity::Infinite => None,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

/// Either end of a reachability query.
///
/// As a target, an arc stands for its tail (a path reaching the arc may then
/// continue over it). As an origin, an arc stands for a path that starts by
/// traversing it, so the arc itself must not be avoided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Vertex(VertexId),
    Arc(ArcId),
}

/// Unvalidated network description, e.g. straight out of a file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NetworkSpec {
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcSpec>,
    pub pairs: Vec<PairSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub capacity: Capacity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairSpec {
    pub source: String,
    pub sink: String,
}

/// A single violated structural invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("empty network: no vertices")]
    Empty,
    #[error("no source-sink pairs")]
    NoPairs,
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("duplicate arc {0}")]
    DuplicateArc(String),
    #[error("arc {arc} references unknown vertex {vertex}")]
    UnknownArcEndpoint { arc: String, vertex: String },
    #[error("pair {pair} references unknown vertex {vertex}")]
    UnknownPairVertex { pair: usize, vertex: String },
    #[error("self-loop: arc {arc} leaves and enters {vertex}")]
    SelfLoop { arc: String, vertex: String },
    #[error("parallel arcs {first} and {second} both lead from {tail} to {head}")]
    ParallelArcs {
        first: String,
        second: String,
        tail: String,
        head: String,
    },
    #[error("capacity must be positive on arc {arc}")]
    NonPositiveCapacity { arc: String },
    #[error("not connected: vertex {vertex} has no undirected path to {anchor}")]
    NotConnected { anchor: String, vertex: String },
    #[error("terminal vertex {vertex} is used more than once among sources and sinks")]
    TerminalReused { vertex: String },
    #[error("source has in-arc: source {vertex} has incoming arc {arc}")]
    SourceHasInArc { vertex: String, arc: String },
    #[error("source {vertex} must have exactly one out-arc, found {count}")]
    SourceOutDegree { vertex: String, count: usize },
    #[error("sink has out-arc: sink {sink} has outgoing arc {arc}")]
    SinkHasOutArc { sink: String, arc: String },
    #[error("sink {sink} must have exactly one in-arc, found {count}")]
    SinkInDegree { sink: String, count: usize },
    #[error("sink unreachable: pair {pair} sink {sink} cannot be reached from source {from}")]
    SinkUnreachable {
        pair: usize,
        from: String,
        sink: String,
    },
    #[error("source arc {arc} must have infinite capacity")]
    FiniteSourceArc { arc: String },
}

impl Violation {
    /// Stable short name of the invariant.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Empty => "empty",
            Violation::NoPairs => "no-pairs",
            Violation::DuplicateVertex(_) => "duplicate-vertex",
            Violation::DuplicateArc(_) => "duplicate-arc",
            Violation::UnknownArcEndpoint { .. } => "unknown-vertex",
            Violation::UnknownPairVertex { .. } => "unknown-vertex",
            Violation::SelfLoop { .. } => "self-loop",
            Violation::ParallelArcs { .. } => "parallel-arcs",
            Violation::NonPositiveCapacity { .. } => "non-positive-capacity",
            Violation::NotConnected { .. } => "not-connected",
            Violation::TerminalReused { .. } => "terminal-reused",
            Violation::SourceHasInArc { .. } => "source-has-in-arc",
            Violation::SourceOutDegree { .. } => "source-out-degree",
            Violation::SinkHasOutArc { .. } => "sink-has-out-arc",
            Violation::SinkInDegree { .. } => "sink-in-degree",
            Violation::SinkUnreachable { .. } => "sink-unreachable",
            Violation::FiniteSourceArc { .. } => "finite-source-arc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid network structure: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown arc {0}")]
    UnknownArc(String),
    #[error("pair index {index} out of range (n = {count})")]
    PairOutOfRange { index: usize, count: usize },
    #[error("capacity change on arc {0} would move it between finite and infinite")]
    CapacityKindChanged(String),
    #[error("capacity must be positive on arc {0}")]
    NonPositiveCapacity(String),
    #[error("{0} is not a permutation of the pair indices")]
    BadOrder(String),
}

/// A simple directed path: `vertices.len() == arcs.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<VertexId>,
    arcs: Vec<ArcId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            vertices: vec![v],
            arcs: Vec::new(),
        }
    }

    /// Builds a path from an arc sequence starting at `start`, checking the
    /// tail/head chaining and vertex simplicity.
    pub fn from_arcs(net: &Network, start: VertexId, arcs: &[ArcId]) -> Option<Self> {
        let mut vertices = vec![start];
        let mut seen = BTreeSet::from([start]);
        for &a in arcs {
            if net.tail(a) != *vertices.last().unwrap() {
                return None;
            }
            let h = net.head(a);
            if !seen.insert(h) {
                return None;
            }
            vertices.push(h);
        }
        Some(Path {
            vertices,
            arcs: arcs.to_vec(),
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains_arc(&self, a: ArcId) -> bool {
        self.arcs.contains(&a)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn arc_set(&self, universe: usize) -> ArcSet {
        ArcSet::from_ids(universe, self.arcs.iter().copied())
    }

    /// Number of arcs of `set` on this path.
    pub fn count_in(&self, set: &ArcSet) -> usize {
        self.arcs.iter().filter(|a| set.contains(**a)).count()
    }

    /// Checks chaining and simplicity against `net`.
    pub fn is_well_formed(&self, net: &Network) -> bool {
        if self.vertices.len() != self.arcs.len() + 1 {
            return false;
        }
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        if distinct.len() != self.vertices.len() {
            return false;
        }
        self.arcs
            .iter()
            .enumerate()
            .all(|(k, &a)| net.tail(a) == self.vertices[k] && net.head(a) == self.vertices[k + 1])
    }
}

/// Vertex and arc sets of a J-bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: VertexSet,
    pub arcs: ArcSet,
}

#[derive(Clone, Debug)]
struct ArcData {
    name: String,
    tail: VertexId,
    head: VertexId,
    capacity: Capacity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pair {
    pub source: VertexId,
    pub sink: VertexId,
}

/// A validated n-pairs network structure. Immutable once built.
#[derive(Debug)]
pub struct Network {
    vertex_names: Vec<String>,
    arcs: Vec<ArcData>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
    pairs: Vec<Pair>,
    // per pair, all simple source-to-sink paths in lexicographic arc order
    pair_paths: Vec<Vec<Path>>,
    bundle_arcs: Vec<ArcSet>,
    bundle_vertices: Vec<VertexSet>,
    // cross paths sigma_s -> tau_h, computed on demand, indexed s * n + h
    cross_paths: OnceLock<Vec<Vec<Path>>>,
}

impl Clone for Network {
    fn clone(&self) -> Self {
        Network {
            vertex_names: self.vertex_names.clone(),
            arcs: self.arcs.clone(),
            out_arcs: self.out_arcs.clone(),
            in_arcs: self.in_arcs.clone(),
            pairs: self.pairs.clone(),
            pair_paths: self.pair_paths.clone(),
            bundle_arcs: self.bundle_arcs.clone(),
            bundle_vertices: self.bundle_vertices.clone(),
            cross_paths: OnceLock::new(),
        }
    }
}

impl Network {
    /// Validates a raw description, reporting every violated invariant.
    pub fn validate(spec: &NetworkSpec) -> Result<Network, ValidationError> {
        let mut violations = Vec::new();

        if spec.vertices.is_empty() {
            violations.push(Violation::Empty);
        }
        if spec.pairs.is_empty() {
            violations.push(Violation::NoPairs);
        }

        let mut names: Vec<String> = Vec::new();
        {
            let mut seen = BTreeSet::new();
            for v in &spec.vertices {
                if !seen.insert(v.clone()) {
                    violations.push(Violation::DuplicateVertex(v.clone()));
                } else {
                    names.push(v.clone());
                }
            }
        }
        names.sort();
        let index: BTreeMap<&str, VertexId> = names
            .iter()
            .enumerate()
            .map(|(k, n)| (n.as_str(), VertexId(k)))
            .collect();

        let mut arc_specs: Vec<&ArcSpec> = Vec::new();
        {
            let mut seen = BTreeSet::new();
            for a in &spec.arcs {
                if !seen.insert(a.id.clone()) {
                    violations.push(Violation::DuplicateArc(a.id.clone()));
                    continue;
                }
                arc_specs.push(a);
            }
        }
        arc_specs.sort_by(|x, y| x.id.cmp(&y.id));

        let mut arcs = Vec::new();
        let mut by_endpoints: BTreeMap<(VertexId, VertexId), String> = BTreeMap::new();
        for a in arc_specs {
            let tail = index.get(a.tail.as_str()).copied();
            let head = index.get(a.head.as_str()).copied();
            for (end, name) in [(tail, &a.tail), (head, &a.head)] {
                if end.is_none() {
                    violations.push(Violation::UnknownArcEndpoint {
                        arc: a.id.clone(),
                        vertex: name.clone(),
                    });
                }
            }
            if let Capacity::Finite(c) = &a.capacity {
                if !c.is_positive() {
                    violations.push(Violation::NonPositiveCapacity { arc: a.id.clone() });
                }
            }
            let (Some(tail), Some(head)) = (tail, head) else {
                continue;
            };
            if tail == head {
                violations.push(Violation::SelfLoop {
                    arc: a.id.clone(),
                    vertex: a.tail.clone(),
                });
                continue;
            }
            if let Some(first) = by_endpoints.get(&(tail, head)) {
                violations.push(Violation::ParallelArcs {
                    first: first.clone(),
                    second: a.id.clone(),
                    tail: a.tail.clone(),
                    head: a.head.clone(),
                });
                continue;
            }
            by_endpoints.insert((tail, head), a.id.clone());
            arcs.push(ArcData {
                name: a.id.clone(),
                tail,
                head,
                capacity: a.capacity.clone(),
            });
        }

        let mut out_arcs = vec![Vec::new(); names.len()];
        let mut in_arcs = vec![Vec::new(); names.len()];
        for (k, a) in arcs.iter().enumerate() {
            out_arcs[a.tail.0].push(ArcId(k));
            in_arcs[a.head.0].push(ArcId(k));
        }

        // connectivity of the underlying undirected graph
        if !names.is_empty() {
            let mut seen = vec![false; names.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for &a in out_arcs[v].iter().chain(in_arcs[v].iter()) {
                    let d = &arcs[a.0];
                    for w in [d.tail.0, d.head.0] {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            for (k, s) in seen.iter().enumerate() {
                if !s {
                    violations.push(Violation::NotConnected {
                        anchor: names[0].clone(),
                        vertex: names[k].clone(),
                    });
                }
            }
        }

        let mut pairs = Vec::new();
        let mut terminals = BTreeSet::new();
        for (p, pair) in spec.pairs.iter().enumerate() {
            let source = index.get(pair.source.as_str()).copied();
            let sink = index.get(pair.sink.as_str()).copied();
            for (end, name) in [(source, &pair.source), (sink, &pair.sink)] {
                if end.is_none() {
                    violations.push(Violation::UnknownPairVertex {
                        pair: p + 1,
                        vertex: name.clone(),
                    });
                } else if !terminals.insert(name.clone()) {
                    violations.push(Violation::TerminalReused {
                        vertex: name.clone(),
                    });
                }
            }
            let (Some(source), Some(sink)) = (source, sink) else {
                continue;
            };
            let sname = &names[source.0];
            let tname = &names[sink.0];
            for &a in &in_arcs[source.0] {
                violations.push(Violation::SourceHasInArc {
                    vertex: sname.clone(),
                    arc: arcs[a.0].name.clone(),
                });
            }
            if out_arcs[source.0].len() != 1 {
                violations.push(Violation::SourceOutDegree {
                    vertex: sname.clone(),
                    count: out_arcs[source.0].len(),
                });
            }
            for &a in &out_arcs[source.0] {
                if arcs[a.0].capacity.is_finite() {
                    violations.push(Violation::FiniteSourceArc {
                        arc: arcs[a.0].name.clone(),
                    });
                }
            }
            for &a in &out_arcs[sink.0] {
                violations.push(Violation::SinkHasOutArc {
                    sink: tname.clone(),
                    arc: arcs[a.0].name.clone(),
                });
            }
            if in_arcs[sink.0].len() != 1 {
                violations.push(Violation::SinkInDegree {
                    sink: tname.clone(),
                    count: in_arcs[sink.0].len(),
                });
            }
            pairs.push(Pair { source, sink });
        }

        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }

        let mut net = Network {
            vertex_names: names,
            arcs,
            out_arcs,
            in_arcs,
            pairs,
            pair_paths: Vec::new(),
            bundle_arcs: Vec::new(),
            bundle_vertices: Vec::new(),
            cross_paths: OnceLock::new(),
        };
        for (p, pair) in net.pairs.iter().enumerate() {
            if !net.reachable(
                Endpoint::Vertex(pair.source),
                Endpoint::Vertex(pair.sink),
                &ArcSet::empty(net.arc_count()),
            ) {
                violations.push(Violation::SinkUnreachable {
                    pair: p + 1,
                    from: net.vertex_name(pair.source).to_string(),
                    sink: net.vertex_name(pair.sink).to_string(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }
        net.rebuild_caches();
        Ok(net)
    }

    fn rebuild_caches(&mut self) {
        self.pair_paths = self
            .pairs
            .iter()
            .map(|p| self.simple_paths(p.source, p.sink))
            .collect();
        self.bundle_arcs = self
            .pair_paths
            .iter()
            .map(|paths| {
                let mut s = ArcSet::empty(self.arc_count());
                for p in paths {
                    for &a in p.arcs() {
                        s.insert(a);
                    }
                }
                s
            })
            .collect();
        self.bundle_vertices = self
            .pair_paths
            .iter()
            .map(|paths| {
                let mut s = VertexSet::empty(self.vertex_count());
                for p in paths {
                    for &v in p.vertices() {
                        s.insert(v);
                    }
                }
                s
            })
            .collect();
        self.cross_paths = OnceLock::new();
    }

    /// The raw description this network was built from, in canonical order.
    pub fn to_spec(&self) -> NetworkSpec {
        NetworkSpec {
            vertices: self.vertex_names.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcSpec {
                    id: a.name.clone(),
                    tail: self.vertex_names[a.tail.0].clone(),
                    head: self.vertex_names[a.head.0].clone(),
                    capacity: a.capacity.clone(),
                })
                .collect(),
            pairs: self
                .pairs
                .iter()
                .map(|p| PairSpec {
                    source: self.vertex_names[p.source.0].clone(),
                    sink: self.vertex_names[p.sink.0].clone(),
                })
                .collect(),
        }
    }

    /// Same structure with the pairs permuted: new pair `k` is old pair `order[k]`.
    pub fn with_pair_order(&self, order: &[usize]) -> Result<Network, LookupError> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.pair_count()).collect::<Vec<_>>() {
            return Err(LookupError::BadOrder(format!("{order:?}")));
        }
        let mut net = self.clone();
        net.pairs = order.iter().map(|&k| self.pairs[k]).collect();
        net.pair_paths = order.iter().map(|&k| self.pair_paths[k].clone()).collect();
        net.bundle_arcs = order.iter().map(|&k| self.bundle_arcs[k].clone()).collect();
        net.bundle_vertices = order
            .iter()
            .map(|&k| self.bundle_vertices[k].clone())
            .collect();
        Ok(net)
    }

    /// Same structure with new capacity values. Each arc must stay on its
    /// side of the finite/infinite split.
    pub fn with_capacities(&self, capacities: &[Capacity]) -> Result<Network, LookupError> {
        assert_eq!(capacities.len(), self.arc_count());
        let mut net = self.clone();
        for (k, c) in capacities.iter().enumerate() {
            let name = &self.arcs[k].name;
            if c.is_finite() != self.arcs[k].capacity.is_finite() {
                return Err(LookupError::CapacityKindChanged(name.clone()));
            }
            if let Capacity::Finite(v) = c {
                if !v.is_positive() {
                    return Err(LookupError::NonPositiveCapacity(name.clone()));
                }
            }
            net.arcs[k].capacity = c.clone();
        }
        Ok(net)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> {
        (0..self.arc_count()).map(ArcId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn arc_name(&self, a: ArcId) -> &str {
        &self.arcs[a.0].name
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, LookupError> {
        self.vertex_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map(VertexId)
            .map_err(|_| LookupError::UnknownVertex(name.to_string()))
    }

    pub fn arc(&self, name: &str) -> Result<ArcId, LookupError> {
        self.arcs
            .binary_search_by(|a| a.name.as_str().cmp(name))
            .map(ArcId)
            .map_err(|_| LookupError::UnknownArc(name.to_string()))
    }

    pub fn arc_set<S: AsRef<str>>(&self, names: &[S]) -> Result<ArcSet, LookupError> {
        let mut set = self.empty_arcs();
        for n in names {
            set.insert(self.arc(n.as_ref())?);
        }
        Ok(set)
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, LookupError> {
        let mut set = self.empty_vertices();
        for n in names {
            set.insert(self.vertex(n.as_ref())?);
        }
        Ok(set)
    }

    pub fn arc_names(&self, set: &ArcSet) -> Vec<&str> {
        set.iter().map(|a| self.arc_name(a)).collect()
    }

    pub fn vertex_names(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.vertex_name(v)).collect()
    }

    pub fn empty_arcs(&self) -> ArcSet {
        ArcSet::empty(self.arc_count())
    }

    pub fn empty_vertices(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }

    pub fn all_arcs(&self) -> ArcSet {
        ArcSet::full(self.arc_count())
    }

    pub fn tail(&self, a: ArcId) -> VertexId {
        self.arcs[a.0].tail
    }

    pub fn head(&self, a: ArcId) -> VertexId {
        self.arcs[a.0].head
    }

    pub fn capacity(&self, a: ArcId) -> &Capacity {
        &self.arcs[a.0].capacity
    }

    pub fn capacities(&self) -> Vec<Capacity> {
        self.arcs.iter().map(|a| a.capacity.clone()).collect()
    }

    pub fn is_finite(&self, a: ArcId) -> bool {
        self.arcs[a.0].capacity.is_finite()
    }

    /// Finite-capacity arcs.
    pub fn finite_arcs(&self) -> ArcSet {
        ArcSet::from_ids(
            self.arc_count(),
            self.arc_ids().filter(|&a| self.is_finite(a)),
        )
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v.0]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v.0]
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> Pair {
        self.pairs[i]
    }

    pub fn check_pair(&self, i: usize) -> Result<(), LookupError> {
        if i < self.pair_count() {
            Ok(())
        } else {
            Err(LookupError::PairOutOfRange {
                index: i,
                count: self.pair_count(),
            })
        }
    }

    pub fn source(&self, i: usize) -> VertexId {
        self.pairs[i].source
    }

    pub fn sink(&self, i: usize) -> VertexId {
        self.pairs[i].sink
    }

    /// The unique arc leaving source `i`.
    pub fn source_arc(&self, i: usize) -> ArcId {
        self.out_arcs[self.pairs[i].source.0][0]
    }

    /// The unique arc entering sink `i`.
    pub fn sink_arc(&self, i: usize) -> ArcId {
        self.in_arcs[self.pairs[i].sink.0][0]
    }

    pub fn sources(&self) -> VertexSet {
        VertexSet::from_ids(self.vertex_count(), self.pairs.iter().map(|p| p.source))
    }

    /// Source and sink vertices.
    pub fn boundary(&self) -> VertexSet {
        VertexSet::from_ids(
            self.vertex_count(),
            self.pairs.iter().flat_map(|p| [p.source, p.sink]),
        )
    }

    /// Pair index whose source arc is `a`, if any.
    pub fn pair_of_source_arc(&self, a: ArcId) -> Option<usize> {
        (0..self.pair_count()).find(|&i| self.source_arc(i) == a)
    }

    /// Pair index whose sink arc is `a`, if any.
    pub fn pair_of_sink_arc(&self, a: ArcId) -> Option<usize> {
        (0..self.pair_count()).find(|&i| self.sink_arc(i) == a)
    }

    /// Vertices reachable from `start` without using arcs in `avoiding`.
    pub fn forward_closure(&self, start: &VertexSet, avoiding: &ArcSet) -> VertexSet {
        let mut seen = start.clone();
        let mut queue: VecDeque<VertexId> = start.iter().collect();
        while let Some(v) = queue.pop_front() {
            for &a in self.out_arcs(v) {
                if avoiding.contains(a) {
                    continue;
                }
                let h = self.head(a);
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Vertices that can reach `target` without using arcs in `avoiding`.
    pub fn backward_closure(&self, target: &VertexSet, avoiding: &ArcSet) -> VertexSet {
        let mut seen = target.clone();
        let mut queue: VecDeque<VertexId> = target.iter().collect();
        while let Some(v) = queue.pop_front() {
            for &a in self.in_arcs(v) {
                if avoiding.contains(a) {
                    continue;
                }
                let t = self.tail(a);
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Whether a directed path leads from `from` to `to` using no arc in
    /// `avoiding`. A vertex always reaches itself.
    pub fn reachable(&self, from: Endpoint, to: Endpoint, avoiding: &ArcSet) -> bool {
        let start = match from {
            Endpoint::Vertex(v) => v,
            Endpoint::Arc(a) => {
                if avoiding.contains(a) {
                    return false;
                }
                self.head(a)
            }
        };
        let target = match to {
            Endpoint::Vertex(v) => v,
            Endpoint::Arc(a) => self.tail(a),
        };
        let seen =
            self.forward_closure(&VertexSet::from_ids(self.vertex_count(), [start]), avoiding);
        seen.contains(target)
    }

    /// Shortest path (fewest arcs, ties broken by arc id) from any vertex of
    /// `from` to `to`, avoiding `avoiding`.
    pub fn shortest_path(&self, from: VertexId, to: VertexId, avoiding: &ArcSet) -> Option<Path> {
        let mut parent: Vec<Option<ArcId>> = vec![None; self.vertex_count()];
        let mut seen = self.empty_vertices();
        seen.insert(from);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &a in self.out_arcs(v) {
                if avoiding.contains(a) {
                    continue;
                }
                let h = self.head(a);
                if seen.insert(h) {
                    parent[h.0] = Some(a);
                    queue.push_back(h);
                }
            }
        }
        if !seen.contains(to) {
            return None;
        }
        let mut arcs = Vec::new();
        let mut v = to;
        while v != from {
            let a = parent[v.0].expect("bfs parent");
            arcs.push(a);
            v = self.tail(a);
        }
        arcs.reverse();
        Path::from_arcs(self, from, &arcs)
    }

    /// All simple paths from `from` to `to`, in lexicographic order of their
    /// arc-id sequences. Exhaustive depth-first search: exponential in the
    /// worst case, intended for networks of a few dozen vertices.
    pub fn simple_paths(&self, from: VertexId, to: VertexId) -> Vec<Path> {
        let mut out = Vec::new();
        let mut on_path = vec![false; self.vertex_count()];
        let mut vertices = vec![from];
        let mut arcs = Vec::new();
        on_path[from.0] = true;
        self.dfs_paths(to, &mut on_path, &mut vertices, &mut arcs, &mut out);
        out
    }

    fn dfs_paths(
        &self,
        to: VertexId,
        on_path: &mut [bool],
        vertices: &mut Vec<VertexId>,
        arcs: &mut Vec<ArcId>,
        out: &mut Vec<Path>,
    ) {
        let v = *vertices.last().unwrap();
        if v == to {
            out.push(Path {
                vertices: vertices.clone(),
                arcs: arcs.clone(),
            });
            return;
        }
        for &a in self.out_arcs(v) {
            let h = self.head(a);
            if on_path[h.0] {
                continue;
            }
            on_path[h.0] = true;
            vertices.push(h);
            arcs.push(a);
            self.dfs_paths(to, on_path, vertices, arcs, out);
            arcs.pop();
            vertices.pop();
            on_path[h.0] = false;
        }
    }

    /// All i-paths (simple source-to-sink paths of pair `i`).
    pub fn pair_paths(&self, i: usize) -> &[Path] {
        &self.pair_paths[i]
    }

    /// All simple paths from source `s` to sink `h`.
    pub fn cross_paths(&self, s: usize, h: usize) -> &[Path] {
        let n = self.pair_count();
        let table = self.cross_paths.get_or_init(|| {
            let mut table = Vec::with_capacity(n * n);
            for s in 0..n {
                for h in 0..n {
                    if s == h {
                        table.push(self.pair_paths[s].clone());
                    } else {
                        table.push(self.simple_paths(self.source(s), self.sink(h)));
                    }
                }
            }
            table
        });
        &table[s * n + h]
    }

    /// Arc set of the i-bundle.
    pub fn bundle_arcs(&self, i: usize) -> &ArcSet {
        &self.bundle_arcs[i]
    }

    /// Vertex set of the i-bundle.
    pub fn bundle_vertices(&self, i: usize) -> &VertexSet {
        &self.bundle_vertices[i]
    }

    /// Union of the bundles of the pairs in `pairs`.
    pub fn bundle(&self, pairs: &[usize]) -> Subgraph {
        let mut sub = Subgraph {
            vertices: self.empty_vertices(),
            arcs: self.empty_arcs(),
        };
        for &i in pairs {
            sub.vertices.union_with(&self.bundle_vertices[i]);
            sub.arcs.union_with(&self.bundle_arcs[i]);
        }
        sub
    }

    /// Arc set of the bundle of pairs `0..upto`.
    pub fn prefix_bundle_arcs(&self, upto: usize) -> ArcSet {
        let mut s = self.empty_arcs();
        for i in 0..upto {
            s.union_with(&self.bundle_arcs[i]);
        }
        s
    }

    /// Arcs with tail in `u` and head outside.
    pub fn out_boundary(&self, u: &VertexSet) -> ArcSet {
        ArcSet::from_ids(
            self.arc_count(),
            self.arc_ids()
                .filter(|&a| u.contains(self.tail(a)) && !u.contains(self.head(a))),
        )
    }

    /// Arcs with head in `u` and tail outside.
    pub fn in_boundary(&self, u: &VertexSet) -> ArcSet {
        ArcSet::from_ids(
            self.arc_count(),
            self.arc_ids()
                .filter(|&a| u.contains(self.head(a)) && !u.contains(self.tail(a))),
        )
    }

    pub fn boundary_arcs(&self, u: &VertexSet, direction: Direction) -> ArcSet {
        match direction {
            Direction::Out => self.out_boundary(u),
            Direction::In => self.in_boundary(u),
        }
    }

    /// Renders an arc set as `{a, b, c}` using arc names.
    pub fn format_arcs(&self, set: &ArcSet) -> String {
        format!("{{{}}}", self.arc_names(set).join(", "))
    }

    pub fn format_vertices(&self, set: &VertexSet) -> String {
        format!("{{{}}}", self.vertex_names(set).join(", "))
    }

    pub fn format_path(&self, p: &Path) -> String {
        p.arcs()
            .iter()
            .map(|&a| self.arc_name(a))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}
