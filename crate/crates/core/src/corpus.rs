//! Built-in example networks and generator families.
//!
//! Every instance attaches pair `i` (1-based in names) through a source
//! vertex `sigma{i}` with arc `out_sigma{i}` and a sink vertex `tau{i}` with
//! arc `in_tau{i}`. Source and sink arcs are infinite; internal arcs have
//! capacity 1; all demands are 1.
//!
//! Greek arc names are spelled out: `alpha` α, `beta` β, `gamma` γ,
//! `delta` δ, `epsilon` ε, `phi` φ, `chi` χ, `rho` ρ.

use std::collections::BTreeSet;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::flows::DemandVector;
use crate::format::NetworkFile;
use crate::graph::{ArcSpec, Capacity, Network, NetworkSpec, PairSpec, ValidationError};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus instance {0:?}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Internal arcs plus attachment points for the pairs, before terminals are added.
#[derive(Clone, Debug, Default)]
pub struct Skeleton {
    pub vertices: Vec<String>,
    /// (id, tail, head)
    pub arcs: Vec<(String, String, String)>,
}

impl Skeleton {
    fn arc(&mut self, id: &str, tail: &str, head: &str) {
        self.arcs.push((id.into(), tail.into(), head.into()));
    }

    /// Attaches pair `k` (0-based) between internal vertices `at[k].0` (source
    /// side) and `at[k].1` (sink side).
    pub fn attach(&self, at: &[(String, String)]) -> Result<NetworkFile, CorpusError> {
        let mut spec = NetworkSpec {
            vertices: self.vertices.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|(id, t, h)| ArcSpec {
                    id: id.clone(),
                    tail: t.clone(),
                    head: h.clone(),
                    capacity: Capacity::Finite(Rational::one()),
                })
                .collect(),
            pairs: Vec::new(),
        };
        for (k, (s, t)) in at.iter().enumerate() {
            let (sigma, tau) = (format!("sigma{}", k + 1), format!("tau{}", k + 1));
            spec.vertices.push(sigma.clone());
            spec.vertices.push(tau.clone());
            spec.arcs.push(ArcSpec {
                id: format!("out_{sigma}"),
                tail: sigma.clone(),
                head: s.clone(),
                capacity: Capacity::Infinite,
            });
            spec.arcs.push(ArcSpec {
                id: format!("in_{tau}"),
                tail: t.clone(),
                head: tau.clone(),
                capacity: Capacity::Infinite,
            });
            spec.pairs.push(PairSpec {
                source: sigma,
                sink: tau,
            });
        }
        let network = Network::validate(&spec)?;
        let demands = DemandVector::new(vec![Rational::one(); at.len()]).expect("positive");
        Ok(NetworkFile { network, demands })
    }

    /// Attachment by 1-based vertex number for the numbered families.
    fn attach_numbered(&self, at: &[(usize, usize)]) -> Result<NetworkFile, CorpusError> {
        let k = self.vertices.len();
        let mut named = Vec::new();
        for &(s, t) in at {
            if s == 0 || t == 0 || s > k || t > k {
                return Err(CorpusError::BadParam(format!(
                    "attachment {s}:{t} outside vertices 1..{k}"
                )));
            }
            named.push((vname(s), vname(t)));
        }
        self.attach(&named)
    }
}

fn vname(k: usize) -> String {
    format!("v{k}")
}

fn fixed(internal: &[&str], arcs: &[(&str, &str, &str)], at: &[(&str, &str)]) -> NetworkFile {
    let mut sk = Skeleton {
        vertices: internal.iter().map(|s| s.to_string()).collect(),
        ..Default::default()
    };
    for (id, t, h) in arcs {
        sk.arc(id, t, h);
    }
    let at: Vec<(String, String)> = at
        .iter()
        .map(|(s, t)| (s.to_string(), t.to_string()))
        .collect();
    sk.attach(&at).expect("built-in instance is valid")
}

/// The two-pair butterfly: both pairs' only paths share the middle arc `alpha`.
pub fn butterfly() -> NetworkFile {
    fixed(
        &["s1", "s2", "a", "b", "t1", "t2"],
        &[
            ("delta", "s1", "a"),
            ("phi", "s2", "a"),
            ("alpha", "a", "b"),
            ("beta", "b", "t1"),
            ("gamma", "b", "t2"),
            ("epsilon", "s1", "t2"),
            ("chi", "s2", "t1"),
        ],
        &[("s1", "t1"), ("s2", "t2")],
    )
}

/// Acyclic two-pair network: one 1-path `beta epsilon`, two 2-paths
/// `alpha beta` and `gamma`.
pub fn fig5() -> NetworkFile {
    fixed(
        &["a", "b", "d", "e"],
        &[
            ("alpha", "b", "a"),
            ("beta", "a", "d"),
            ("gamma", "b", "d"),
            ("epsilon", "d", "e"),
        ],
        &[("a", "e"), ("b", "d")],
    )
}

/// Cyclic two-pair network: one 1-path `epsilon beta`, two 2-paths `phi`
/// and `beta gamma`, and the cycle `beta rho`.
pub fn fig6() -> NetworkFile {
    fixed(
        &["s", "u", "v", "w"],
        &[
            ("epsilon", "s", "u"),
            ("beta", "u", "v"),
            ("gamma", "v", "w"),
            ("phi", "u", "w"),
            ("rho", "v", "u"),
        ],
        &[("s", "v"), ("u", "w")],
    )
}

/// Directed line `v1 -> v2 -> ... -> vk` with arcs `e1..e{k-1}`.
pub fn line_skeleton(k: usize) -> Skeleton {
    let mut sk = Skeleton {
        vertices: (1..=k).map(vname).collect(),
        ..Default::default()
    };
    for j in 1..k {
        sk.arc(&format!("e{j}"), &vname(j), &vname(j + 1));
    }
    sk
}

/// Directed cycle `v1 -> ... -> vk -> v1` with arcs `e1..ek`.
pub fn cycle_skeleton(k: usize) -> Skeleton {
    let mut sk = line_skeleton(k);
    sk.arc(&format!("e{k}"), &vname(k), &vname(1));
    sk
}

/// Oriented tree given by arcs between numbered vertices.
pub fn tree_skeleton(arcs: &[(usize, usize)]) -> Result<Skeleton, CorpusError> {
    let k = arcs.len() + 1;
    let mut parent: Vec<usize> = (0..=k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut sk = Skeleton {
        vertices: (1..=k).map(vname).collect(),
        ..Default::default()
    };
    for (j, &(t, h)) in arcs.iter().enumerate() {
        if t == 0 || h == 0 || t > k || h > k {
            return Err(CorpusError::BadParam(format!(
                "tree arc {t}>{h}: vertices must be numbered 1..{k}"
            )));
        }
        let (rt, rh) = (find(&mut parent, t), find(&mut parent, h));
        if rt == rh {
            return Err(CorpusError::BadParam(format!(
                "tree arc {t}>{h} closes a cycle"
            )));
        }
        parent[rt] = rh;
        sk.arc(&format!("e{}", j + 1), &vname(t), &vname(h));
    }
    Ok(sk)
}

/// Directed cycles glued into a tree. Each cycle lists its vertices in arc
/// order; every cycle after the first must share exactly one vertex (its
/// gateway) with the cycles before it.
pub fn tree_of_cycles_skeleton(cycles: &[Vec<usize>]) -> Result<Skeleton, CorpusError> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut sk = Skeleton::default();
    for (c, cycle) in cycles.iter().enumerate() {
        if cycle.len() < 2 {
            return Err(CorpusError::BadParam(format!(
                "cycle {} has fewer than 2 vertices",
                c + 1
            )));
        }
        let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
        if distinct.len() != cycle.len() || distinct.contains(&0) {
            return Err(CorpusError::BadParam(format!(
                "cycle {} must list distinct positive vertex numbers",
                c + 1
            )));
        }
        let shared = distinct.intersection(&seen).count();
        if (c == 0 && shared != 0) || (c > 0 && shared != 1) {
            return Err(CorpusError::BadParam(format!(
                "cycle {} must share exactly one vertex with earlier cycles",
                c + 1
            )));
        }
        seen.extend(distinct);
        for (j, &v) in cycle.iter().enumerate() {
            let w = cycle[(j + 1) % cycle.len()];
            sk.arc(&format!("c{}e{}", c + 1, j + 1), &vname(v), &vname(w));
        }
    }
    let max = seen.iter().max().copied().unwrap_or(0);
    if seen.len() != max {
        return Err(CorpusError::BadParam(
            "cycle vertices must be numbered 1..k without gaps".into(),
        ));
    }
    sk.vertices = (1..=max).map(vname).collect();
    Ok(sk)
}

pub fn line(k: usize, at: &[(usize, usize)]) -> Result<NetworkFile, CorpusError> {
    if k == 0 {
        return Err(CorpusError::BadParam("line needs k >= 1".into()));
    }
    line_skeleton(k).attach_numbered(at)
}

pub fn cycle(k: usize, at: &[(usize, usize)]) -> Result<NetworkFile, CorpusError> {
    if k < 2 {
        return Err(CorpusError::BadParam("cycle needs k >= 2".into()));
    }
    cycle_skeleton(k).attach_numbered(at)
}

pub fn tree(arcs: &[(usize, usize)], at: &[(usize, usize)]) -> Result<NetworkFile, CorpusError> {
    tree_skeleton(arcs)?.attach_numbered(at)
}

pub fn tree_of_cycles(
    cycles: &[Vec<usize>],
    at: &[(usize, usize)],
) -> Result<NetworkFile, CorpusError> {
    tree_of_cycles_skeleton(cycles)?.attach_numbered(at)
}

/// Seeded random network with at most `max_vertices` vertices in total
/// (terminals included) and between 1 and `max_pairs` pairs.
///
/// The internal graph is a randomly oriented spanning tree plus extra arcs
/// with a per-instance density, so it is weakly connected and may contain
/// antiparallel arcs and cycles. Each pair attaches at a source vertex and a
/// sink vertex reachable from it (possibly the same vertex).
pub fn random(seed: u64, max_vertices: usize, max_pairs: usize) -> NetworkFile {
    assert!(
        max_pairs >= 1 && max_vertices >= 2 * max_pairs + 2,
        "too few vertices for the pairs"
    );
    let mut rng = SplitMix64::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_pairs);
    let k = rng.gen_range(2..=max_vertices - 2 * n);
    let mut sk = Skeleton {
        vertices: (1..=k).map(vname).collect(),
        ..Default::default()
    };
    let mut present = BTreeSet::new();
    for v in 2..=k {
        let u = rng.gen_range(1..v);
        let (t, h) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        present.insert((t, h));
    }
    let density = rng.gen_range(0.05..0.35);
    for t in 1..=k {
        for h in 1..=k {
            if t != h && !present.contains(&(t, h)) && rng.gen_bool(density) {
                present.insert((t, h));
            }
        }
    }
    let mut succ = vec![Vec::new(); k + 1];
    for (j, &(t, h)) in present.iter().enumerate() {
        sk.arc(&format!("e{}", j + 1), &vname(t), &vname(h));
        succ[t].push(h);
    }
    let reach_from = |s: usize| {
        let mut seen = vec![false; k + 1];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &succ[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (1..=k).filter(|&v| seen[v]).collect::<Vec<_>>()
    };
    let at: Vec<(usize, usize)> = (0..n)
        .map(|_| {
            let s = rng.gen_range(1..=k);
            let reach = reach_from(s);
            // prefer a sink other than the source vertex itself
            let others: Vec<usize> = reach.iter().copied().filter(|&t| t != s).collect();
            let t = if others.is_empty() || rng.gen_bool(0.05) {
                reach[rng.gen_range(0..reach.len())]
            } else {
                others[rng.gen_range(0..others.len())]
            };
            (s, t)
        })
        .collect();
    sk.attach_numbered(&at)
        .expect("random instance is valid by construction")
}

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &[
    "butterfly",
    "fig5",
    "fig6",
    "line",
    "cycle",
    "tree",
    "tree_of_cycles",
    "random",
];

/// Default tree: a root with an out-branch and an in-branch, `1>2, 2>3, 2>4, 5>2, 4>6`.
pub const DEFAULT_TREE: &[(usize, usize)] = &[(1, 2), (2, 3), (2, 4), (5, 2), (4, 6)];

/// Default tree of cycles: three triangles in a line, glued at vertices 3 and 5.
pub fn default_cycles() -> Vec<Vec<usize>> {
    vec![vec![1, 2, 3], vec![3, 4, 5], vec![5, 6, 7]]
}

/// Builds a named instance from `key=value` parameters.
///
/// * `line`, `cycle`: `k=<count>` (default 5), `pairs=<s>:<t>,...` (default `1:k`)
/// * `tree`: `arcs=<t>><h>,...` (default [`DEFAULT_TREE`]), `pairs=...` (default `1:3`)
/// * `tree_of_cycles`: `cycles=<v>-<v>-.../...` (default [`default_cycles`]),
///   `pairs=...` (default `1:k`)
/// * `random`: `seed=<u64>` (default 0), `vertices=<max>` (default 10),
///   `pairs=<max>` (default 3)
pub fn named(name: &str, params: &[(String, String)]) -> Result<NetworkFile, CorpusError> {
    let get = |key: &str| {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    for (key, _) in params {
        let allowed: &[&str] = match name {
            "line" | "cycle" => &["k", "pairs"],
            "tree" => &["arcs", "pairs"],
            "tree_of_cycles" => &["cycles", "pairs"],
            "random" => &["seed", "vertices", "pairs"],
            _ => &[],
        };
        if !allowed.contains(&key.as_str()) {
            return Err(CorpusError::BadParam(format!(
                "{name} takes no parameter {key:?}"
            )));
        }
    }
    let pairs = |default: Vec<(usize, usize)>| match get("pairs") {
        Some(s) => parse_pairs(s),
        None => Ok(default),
    };
    match name {
        "butterfly" => Ok(butterfly()),
        "fig5" => Ok(fig5()),
        "fig6" => Ok(fig6()),
        "line" | "cycle" => {
            let k = match get("k") {
                Some(s) => s
                    .parse()
                    .map_err(|_| CorpusError::BadParam(format!("k={s} is not a count")))?,
                None => 5,
            };
            let at = pairs(vec![(1, k)])?;
            if name == "line" {
                line(k, &at)
            } else {
                cycle(k, &at)
            }
        }
        "tree" => {
            let arcs = match get("arcs") {
                Some(s) => parse_list(s, '>')?,
                None => DEFAULT_TREE.to_vec(),
            };
            tree(&arcs, &pairs(vec![(1, 3)])?)
        }
        "tree_of_cycles" => {
            let cycles = match get("cycles") {
                Some(s) => s
                    .split('/')
                    .map(|c| {
                        c.split('-')
                            .map(|v| v.trim().parse::<usize>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|_| CorpusError::BadParam(format!("bad cycle {c:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => default_cycles(),
            };
            let k = cycles.iter().flatten().max().copied().unwrap_or(1);
            tree_of_cycles(&cycles, &pairs(vec![(1, k)])?)
        }
        "random" => {
            let num = |key: &str, default: u64| match get(key) {
                Some(s) => s
                    .parse::<u64>()
                    .map_err(|_| CorpusError::BadParam(format!("{key}={s} is not a number"))),
                None => Ok(default),
            };
            let (seed, vertices, max_pairs) =
                (num("seed", 0)?, num("vertices", 10)?, num("pairs", 3)?);
            if max_pairs == 0 || vertices < 2 * max_pairs + 2 || vertices > 64 {
                return Err(CorpusError::BadParam(
                    "random needs pairs >= 1 and 2*pairs+2 <= vertices <= 64".into(),
                ));
            }
            Ok(random(seed, vertices as usize, max_pairs as usize))
        }
        other => Err(CorpusError::UnknownName(other.to_string())),
    }
}

fn parse_list(s: &str, sep: char) -> Result<Vec<(usize, usize)>, CorpusError> {
    s.split(',')
        .map(|item| {
            let (a, b) = item.split_once(sep).ok_or_else(|| {
                CorpusError::BadParam(format!("expected <a>{sep}<b>, got {item:?}"))
            })?;
            let num = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CorpusError::BadParam(format!("bad vertex number {x:?}")))
            };
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, CorpusError> {
    parse_list(s, ':')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_instances_have_expected_sizes() {
        let b = butterfly().network;
        assert_eq!(
            (b.vertex_count(), b.arc_count(), b.pair_count()),
            (10, 11, 2)
        );
        let f5 = fig5().network;
        assert_eq!((f5.vertex_count(), f5.arc_count()), (8, 8));
        let f6 = fig6().network;
        assert_eq!((f6.vertex_count(), f6.arc_count()), (8, 9));
    }

    #[test]
    fn families_build() {
        assert_eq!(line(4, &[(1, 4), (2, 2)]).unwrap().network.pair_count(), 2);
        assert_eq!(cycle(3, &[(3, 1)]).unwrap().network.arc_count(), 5);
        let t = tree(DEFAULT_TREE, &[(1, 3), (5, 6)]).unwrap().network;
        assert_eq!(t.vertex_count(), 6 + 4);
        let tc = tree_of_cycles(&default_cycles(), &[(2, 6)])
            .unwrap()
            .network;
        assert_eq!(tc.arc_count(), 9 + 2);
    }

    #[test]
    fn unreachable_placement_is_rejected() {
        assert!(matches!(line(4, &[(3, 1)]), Err(CorpusError::Invalid(_))));
        assert!(matches!(line(4, &[(0, 1)]), Err(CorpusError::BadParam(_))));
    }

    #[test]
    fn bad_family_shapes() {
        assert!(tree_skeleton(&[(1, 2), (2, 1)]).is_err());
        assert!(tree_of_cycles_skeleton(&[vec![1, 2, 3], vec![4, 5, 6]]).is_err());
        assert!(tree_of_cycles_skeleton(&[vec![1, 2, 3], vec![2, 3, 4]]).is_err());
    }

    #[test]
    fn named_dispatch() {
        let p = |s: &[(&str, &str)]| -> Vec<(String, String)> {
            s.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        let f = named("line", &p(&[("k", "6"), ("pairs", "1:6,2:4")])).unwrap();
        assert_eq!(f.network.pair_count(), 2);
        let f = named("tree_of_cycles", &p(&[("cycles", "1-2/2-3-4")])).unwrap();
        assert_eq!(f.network.arc_count(), 5 + 2);
        assert!(matches!(
            named("nope", &[]),
            Err(CorpusError::UnknownName(_))
        ));
        assert!(named("butterfly", &p(&[("k", "3")])).is_err());
        assert!(named("tree", &[]).is_ok());
        assert!(named("random", &p(&[("vertices", "3")])).is_err());
    }

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        for seed in 0..200 {
            let f = random(seed, 10, 3);
            assert!(f.network.vertex_count() <= 10);
            assert!((1..=3).contains(&f.network.pair_count()));
            assert_eq!(f.emit(), random(seed, 10, 3).emit());
        }
    }
}
