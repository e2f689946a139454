//! Structural routability analysis for directed n-pairs networks.
//!
//! A network carries `n` source-sink pairs over a capacitated digraph. This
//! crate decides whether a given ordering of the pairs makes the structure
//! *downward dominated* (in which case any achievable rate combination can be
//! met by plain routing), computes structural-dominance closures, solves
//! multicommodity flow problems exactly over the rationals, and demonstrates
//! block routing with Huffman-coded sources by simulation.
//!
//! Pair indices are 0-based in the API and 1-based in every text format.

pub mod codec;
pub mod corpus;
pub mod cuts;
pub mod dominance;
pub mod dot;
pub mod flows;
pub mod format;
pub mod graph;
pub mod huffman;
pub mod lp;
pub mod routability;
pub mod sets;

pub use graph::{ArcId, Capacity, Network, NetworkSpec, Path, VertexId};
pub use sets::{ArcSet, VertexSet};

/// Exact rational number used for capacities, demands and flows.
pub type Rational = num_rational::BigRational;

/// Parses `p/q`, an integer, or a plain decimal such as `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().ok()?;
        let mut value = Rational::from_integer(num_traits::Signed::abs(&int_part))
            + Rational::new(frac_part, scale);
        if neg {
            value = -value;
        }
        return Some(value);
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::new(n, BigInt::one()))
}

/// Renders a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
