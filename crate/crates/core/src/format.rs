//! Line-oriented network file format.
//!
//! ```text
//! # comment
//! vertex a
//! arc alpha a b 1/2      # capacity: integer, p/q, decimal, or inf
//! pair sigma1 tau1 1     # pair order = line order; last field is the demand
//! ```
//!
//! Vertices mentioned by `arc` or `pair` lines need not be declared. Emitted
//! files list every vertex, then arcs sorted by id, then pairs in order, with
//! rationals in lowest terms; parsing an emitted file and emitting it again is
//! byte-identical.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Signed;
use thiserror::Error;

use crate::flows::DemandVector;
use crate::graph::{ArcSpec, Capacity, Network, NetworkSpec, PairSpec, ValidationError};
use crate::{format_rational, parse_rational, Rational};

/// A parsed network file: the validated structure plus per-pair demands.
#[derive(Clone, Debug)]
pub struct NetworkFile {
    pub network: Network,
    pub demands: DemandVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_capacity(token: &str, line: usize) -> Result<Capacity, ParseError> {
    if token == "inf" {
        return Ok(Capacity::Infinite);
    }
    let value =
        parse_rational(token).ok_or_else(|| syntax(line, format!("bad capacity {token:?}")))?;
    Capacity::finite(value).ok_or_else(|| syntax(line, "capacity must be positive"))
}

/// Parses the raw description and demands without validating the structure.
pub fn parse_spec(text: &str) -> Result<(NetworkSpec, Vec<Rational>), ParseError> {
    let mut spec = NetworkSpec::default();
    let mut demands = Vec::new();
    let mut declared = BTreeSet::new();
    let mut mentioned: Vec<String> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = fields.split_first() else {
            continue;
        };
        match keyword {
            "vertex" => {
                let [id] = args else {
                    return Err(syntax(line, "expected: vertex <id>"));
                };
                if !declared.insert(id.to_string()) {
                    return Err(syntax(line, format!("vertex {id} declared twice")));
                }
                spec.vertices.push(id.to_string());
            }
            "arc" => {
                let [id, tail, head, cap] = args else {
                    return Err(syntax(line, "expected: arc <id> <tail> <head> <cap>"));
                };
                let capacity = parse_capacity(cap, line)?;
                mentioned.extend([tail.to_string(), head.to_string()]);
                spec.arcs.push(ArcSpec {
                    id: id.to_string(),
                    tail: tail.to_string(),
                    head: head.to_string(),
                    capacity,
                });
            }
            "pair" => {
                let [source, sink, demand] = args else {
                    return Err(syntax(line, "expected: pair <source> <sink> <demand>"));
                };
                let demand = parse_rational(demand)
                    .ok_or_else(|| syntax(line, format!("bad demand {demand:?}")))?;
                if !demand.is_positive() {
                    return Err(syntax(line, "demand must be positive"));
                }
                mentioned.extend([source.to_string(), sink.to_string()]);
                spec.pairs.push(PairSpec {
                    source: source.to_string(),
                    sink: sink.to_string(),
                });
                demands.push(demand);
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        }
    }
    for v in mentioned {
        if declared.insert(v.clone()) {
            spec.vertices.push(v);
        }
    }
    Ok((spec, demands))
}

/// Parses and validates a network file.
pub fn parse_network(text: &str) -> Result<NetworkFile, ParseError> {
    let (spec, demands) = parse_spec(text)?;
    let network = Network::validate(&spec)?;
    Ok(NetworkFile {
        network,
        demands: DemandVector::new(demands).expect("demands checked positive"),
    })
}

/// Canonical text form of a network with its demands.
pub fn emit_network(net: &Network, demands: &DemandVector) -> String {
    let spec = net.to_spec();
    let mut out = String::new();
    for v in &spec.vertices {
        writeln!(out, "vertex {v}").unwrap();
    }
    for a in &spec.arcs {
        writeln!(out, "arc {} {} {} {}", a.id, a.tail, a.head, a.capacity).unwrap();
    }
    for (p, h) in spec.pairs.iter().zip(demands.values()) {
        writeln!(out, "pair {} {} {}", p.source, p.sink, format_rational(h)).unwrap();
    }
    out
}

impl NetworkFile {
    pub fn emit(&self) -> String {
        emit_network(&self.network, &self.demands)
    }

    /// The same file with pairs (and their demands) reordered: new pair `k` is
    /// old pair `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> Result<NetworkFile, crate::graph::LookupError> {
        Ok(NetworkFile {
            network: self.network.with_pair_order(order)?,
            demands: self.demands.permuted(order),
        })
    }
}
