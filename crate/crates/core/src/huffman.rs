//! Canonical Huffman codes over exact rational distributions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HuffmanError {
    #[error("empty alphabet")]
    Empty,
    #[error("probability of symbol {0} is not positive")]
    NonPositive(usize),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(String),
}

/// A prefix-free code with canonical codeword assignment: symbols sorted by
/// (length, index) receive consecutive binary values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    lengths: Vec<usize>,
    codes: Vec<Vec<bool>>,
    // decoding trie: node -> [child on 0, child on 1]; leaves hold !symbol
    trie: Vec<[i64; 2]>,
}

/// Shannon entropy in bits.
pub fn entropy(probs: &[Rational]) -> f64 {
    probs
        .iter()
        .map(|p| p.to_f64().expect("finite"))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Checks that `probs` is a strictly positive distribution summing to 1.
pub fn check_distribution(probs: &[Rational]) -> Result<(), HuffmanError> {
    if probs.is_empty() {
        return Err(HuffmanError::Empty);
    }
    if let Some(k) = probs.iter().position(|p| !p.is_positive()) {
        return Err(HuffmanError::NonPositive(k));
    }
    let total: Rational = probs.iter().sum();
    if !total.is_one() {
        return Err(HuffmanError::NotNormalized(crate::format_rational(&total)));
    }
    Ok(())
}

/// Optimal prefix-free code for `probs`.
///
/// Merges always take the two lightest nodes, ties going to the node created
/// first (leaves in symbol order precede internal nodes). A one-symbol
/// alphabet gets the single codeword `0`.
pub fn huffman_codebook(probs: &[Rational]) -> Result<Codebook, HuffmanError> {
    check_distribution(probs)?;
    Ok(Codebook::from_lengths(&huffman_lengths(probs)))
}

/// Codeword lengths of the Huffman code for positive `weights` (any scale).
pub fn huffman_lengths(weights: &[Rational]) -> Vec<usize> {
    let k = weights.len();
    if k == 1 {
        return vec![1];
    }
    // node ids: leaves 0..k, internal nodes from k in creation order
    let mut parent: Vec<usize> = vec![usize::MAX; 2 * k - 1];
    let mut heap: BinaryHeap<Reverse<(Rational, usize)>> = weights
        .iter()
        .enumerate()
        .map(|(id, w)| Reverse((w.clone(), id)))
        .collect();
    let mut next = k;
    while heap.len() > 1 {
        let Reverse((w1, a)) = heap.pop().expect("two nodes");
        let Reverse((w2, b)) = heap.pop().expect("two nodes");
        parent[a] = next;
        parent[b] = next;
        heap.push(Reverse((w1 + w2, next)));
        next += 1;
    }
    // internal nodes are created after their children, so depths can be
    // filled from the root downwards
    let root = 2 * k - 2;
    let mut depth = vec![0usize; 2 * k - 1];
    for id in (0..root).rev() {
        depth[id] = depth[parent[id]] + 1;
    }
    depth.truncate(k);
    depth
}

impl Codebook {
    /// Canonical code for the given lengths (which must satisfy Kraft's inequality).
    pub fn from_lengths(lengths: &[usize]) -> Codebook {
        let mut order: Vec<usize> = (0..lengths.len()).collect();
        order.sort_by_key(|&s| (lengths[s], s));
        let mut codes = vec![Vec::new(); lengths.len()];
        let mut code: Vec<bool> = Vec::new();
        for (pos, &s) in order.iter().enumerate() {
            if pos > 0 {
                // increment the previous codeword as a binary number
                let mut j = code.len();
                loop {
                    assert!(j > 0, "lengths violate Kraft's inequality");
                    j -= 1;
                    if code[j] {
                        code[j] = false;
                    } else {
                        code[j] = true;
                        break;
                    }
                }
            }
            code.resize(lengths[s], false);
            codes[s] = code.clone();
        }
        let mut trie: Vec<[i64; 2]> = vec![[0, 0]];
        for (s, c) in codes.iter().enumerate() {
            let mut node = 0usize;
            for (d, &bit) in c.iter().enumerate() {
                let slot = usize::from(bit);
                if d + 1 == c.len() {
                    trie[node][slot] = !(s as i64);
                } else {
                    if trie[node][slot] <= 0 {
                        trie.push([0, 0]);
                        trie[node][slot] = (trie.len() - 1) as i64;
                    }
                    node = trie[node][slot] as usize;
                }
            }
        }
        Codebook {
            lengths: lengths.to_vec(),
            codes,
            trie,
        }
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn codeword(&self, symbol: usize) -> &[bool] {
        &self.codes[symbol]
    }

    /// Decodes one codeword from the front of `bits`; returns the symbol and
    /// the number of bits consumed.
    pub fn decode_one(&self, bits: &[bool]) -> Option<(usize, usize)> {
        let mut node = 0usize;
        for (k, &bit) in bits.iter().enumerate() {
            let next = self.trie[node][usize::from(bit)];
            if next < 0 {
                return Some(((!next) as usize, k + 1));
            }
            if next == 0 {
                return None;
            }
            node = next as usize;
        }
        None
    }

    pub fn expected_length(&self, probs: &[Rational]) -> Rational {
        probs
            .iter()
            .zip(&self.lengths)
            .map(|(p, &l)| p * Rational::from_integer(l.into()))
            .sum()
    }

    /// Sum of `2^-length` over all codewords, exactly.
    pub fn kraft_sum(&self) -> Rational {
        let max = self.lengths.iter().copied().max().unwrap_or(0);
        let denom = num_bigint::BigInt::one() << max;
        let numer: num_bigint::BigInt = self
            .lengths
            .iter()
            .map(|&l| num_bigint::BigInt::one() << (max - l))
            .sum();
        Rational::new(numer, denom)
    }

    /// No codeword is a prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        let mut sorted: Vec<&Vec<bool>> = self.codes.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| !w[1].starts_with(w[0]))
            && self.codes.iter().all(|c| !c.is_empty())
    }
}

/// Expected length minus entropy for a distribution; always in `[0, 1]` for
/// Huffman codes (bounded away from rounding by a small tolerance).
pub fn redundancy(probs: &[Rational], book: &Codebook) -> f64 {
    book.expected_length(probs).to_f64().unwrap_or(f64::NAN) - entropy(probs)
}
