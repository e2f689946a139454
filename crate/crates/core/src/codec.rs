//! Block routing of Huffman-coded i.i.d. sources along path flows.
//!
//! Time is split into epochs of `m` steps. In each epoch every source emits
//! `m / period` symbols, which form one block. The block is Huffman coded
//! into `L` bits and the bits are cut into consecutive sub-blocks, one per
//! path of the pair, sub-block `k` having `ceil(u_k / h * L)` bits (zero
//! padded at the end). At the last step of the epoch every sub-block is
//! forwarded hop by hop along its path as a frame `(pair, path, length,
//! payload)`. The sink concatenates its frames in path order and decodes the
//! first codeword, reconstructing the block with delay `m - 1`.
//!
//! Sources are drawn from SplitMix64 (`rand_xoshiro::SplitMix64`, 64-bit
//! state) seeded with the user seed; pair `i` uses its own stream seeded with
//! `seed + i`. A symbol is the first index whose cumulative probability
//! exceeds the next output divided by `2^64`.

use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::flows::{decompose_flow, DemandVector, MultiFlow};
use crate::graph::{ArcId, Network, Path};
use crate::huffman::{entropy, huffman_codebook, Codebook, HuffmanError};
use crate::{format_rational, Rational};

/// Upper bound on the block alphabet size.
pub const MAX_BLOCK_ALPHABET: usize = 1 << 20;
/// Largest block length tried by automatic selection.
pub const MAX_AUTO_M: usize = 4096;

/// An i.i.d. source emitting one symbol every `period` time steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSource {
    pub probs: Vec<Rational>,
    pub period: usize,
}

impl SymbolSource {
    pub fn uniform(alphabet: usize, period: usize) -> Self {
        SymbolSource {
            probs: vec![Rational::new(1.into(), alphabet.into()); alphabet],
            period,
        }
    }

    /// Entropy in bits per time step.
    pub fn entropy_rate(&self) -> f64 {
        entropy(&self.probs) / self.period as f64
    }
}

/// One source per pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceModel {
    pub sources: Vec<SymbolSource>,
}

impl SourceModel {
    /// Uniform binary sources with one bit every `period` steps, for `n` pairs.
    pub fn uniform_binary(n: usize, period: usize) -> Self {
        SourceModel {
            sources: vec![SymbolSource::uniform(2, period); n],
        }
    }

    /// Uniform sources whose entropy rates equal the demands exactly: a
    /// demand `p/q` (lowest terms) becomes a uniform source over `2^p`
    /// symbols emitting every `q` steps. Returns `None` if some `p` exceeds 20.
    pub fn matching(demands: &DemandVector) -> Option<Self> {
        demands
            .values()
            .iter()
            .map(|h| {
                let p = h.numer().to_usize().filter(|&p| (1..=20).contains(&p))?;
                let q = h.denom().to_usize()?;
                Some(SymbolSource::uniform(1 << p, q))
            })
            .collect::<Option<Vec<_>>>()
            .map(|sources| SourceModel { sources })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ScheduleError {
    #[error("expected {expected} sources, got {got}")]
    SourceCount { expected: usize, got: usize },
    #[error("pair {0}: source has zero entropy")]
    ZeroEntropy(usize),
    #[error("pair {pair}: {cause}")]
    BadDistribution { pair: usize, cause: HuffmanError },
    #[error("pair {pair}: period must be positive")]
    BadPeriod { pair: usize },
    #[error("pair {pair}: entropy rate {entropy:.6} exceeds the routed demand {demand}")]
    DemandBelowEntropy {
        pair: usize,
        entropy: f64,
        demand: String,
    },
    #[error("pair {pair}: flow is not a valid single-commodity flow: {reason}")]
    BadFlow { pair: usize, reason: String },
    #[error("block length {m} is not a positive multiple of every source period")]
    BadBlockLength { m: usize },
    #[error("pair {pair}: block alphabet of {size} exceeds {MAX_BLOCK_ALPHABET}")]
    AlphabetTooLarge { pair: usize, size: f64 },
    #[error("insufficient slack on arc {arc}: load {load} needs about {required:.6} more capacity than {available} allows at m <= {MAX_AUTO_M}")]
    InsufficientSlack {
        arc: String,
        load: String,
        available: String,
        required: f64,
    },
}

/// Path share of one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathShare {
    pub path: Path,
    pub rate: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairSchedule {
    pub demand: Rational,
    pub paths: Vec<PathShare>,
    pub block_symbols: usize,
    pub alphabet: usize,
    pub block_probs: Vec<Rational>,
    pub codebook: Codebook,
}

impl PairSchedule {
    /// Sub-block lengths for a block coded into `len` bits.
    pub fn split(&self, len: usize) -> Vec<usize> {
        self.paths
            .iter()
            .map(|p| {
                let x = &p.rate / &self.demand * Rational::from_integer(len.into());
                x.ceil().to_integer().to_usize().expect("small")
            })
            .collect()
    }

    /// Expected code length per block, exactly.
    pub fn expected_block_bits(&self) -> Rational {
        self.codebook.expected_length(&self.block_probs)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutingSchedule {
    pub m: usize,
    pub epsilon: Rational,
    pub pairs: Vec<PairSchedule>,
}

impl RoutingSchedule {
    /// Path-flow load on each arc (sum of the rates of paths through it).
    pub fn loads(&self, net: &Network) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); net.arc_count()];
        for p in &self.pairs {
            for share in &p.paths {
                for a in share.path.arcs() {
                    load[a.0] += &share.rate;
                }
            }
        }
        load
    }

    /// Allowance on each arc for Huffman overhead (one bit per block) and
    /// ceiling padding (one bit per sub-block), in bits per step.
    pub fn margins(&self, net: &Network) -> Vec<f64> {
        let mut margin = vec![0.0; net.arc_count()];
        for p in &self.pairs {
            for share in &p.paths {
                let extra = 1.0 + (&share.rate / &p.demand).to_f64().unwrap_or(1.0);
                for a in share.path.arcs() {
                    margin[a.0] += extra / self.m as f64;
                }
            }
        }
        margin
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Worst-case expected bits per step on each arc at block length `m`.
fn predicted_rates(
    net: &Network,
    shares: &[(Rational, Vec<PathShare>, f64)],
    m: usize,
    eps: f64,
) -> Vec<f64> {
    let mut rate = vec![0.0; net.arc_count()];
    for (h, paths, entropy_rate) in shares {
        for share in paths {
            let frac = (&share.rate / h).to_f64().unwrap_or(1.0);
            let r = frac * (entropy_rate + eps) + (1.0 + frac) / m as f64;
            for a in share.path.arcs() {
                rate[a.0] += r;
            }
        }
    }
    rate
}

/// Builds a routing schedule from a feasible flow.
///
/// Each commodity is decomposed into path flows (cycle flows are dropped);
/// its demand is the flow on its source arc and must be at least the
/// source's entropy rate. With `m` given, that block length is used as is.
/// Otherwise the smallest multiple of the source periods is chosen for which
/// every finite arc satisfies
/// `sum over paths through it of (u/h)(H + eps) + (1 + u/h)/m <= c`.
pub fn build_schedule(
    net: &Network,
    flow: &MultiFlow,
    sources: &SourceModel,
    epsilon: &Rational,
    m: Option<usize>,
) -> Result<RoutingSchedule, ScheduleError> {
    let n = net.pair_count();
    if sources.sources.len() != n {
        return Err(ScheduleError::SourceCount {
            expected: n,
            got: sources.sources.len(),
        });
    }
    let mut shares = Vec::new();
    for (i, src) in sources.sources.iter().enumerate() {
        if src.period == 0 {
            return Err(ScheduleError::BadPeriod { pair: i + 1 });
        }
        crate::huffman::check_distribution(&src.probs)
            .map_err(|cause| ScheduleError::BadDistribution { pair: i + 1, cause })?;
        let h_rate = src.entropy_rate();
        if h_rate <= 0.0 {
            return Err(ScheduleError::ZeroEntropy(i + 1));
        }
        let d = decompose_flow(net, &flow.flows[i], i).map_err(|e| ScheduleError::BadFlow {
            pair: i + 1,
            reason: e.to_string(),
        })?;
        let demand = flow.flows[i][net.source_arc(i).0].clone();
        if !demand.is_positive() || d.value() != demand {
            return Err(ScheduleError::BadFlow {
                pair: i + 1,
                reason: "no positive source-to-sink flow".into(),
            });
        }
        if h_rate > demand.to_f64().unwrap_or(0.0) * (1.0 + 1e-12) {
            return Err(ScheduleError::DemandBelowEntropy {
                pair: i + 1,
                entropy: h_rate,
                demand: format_rational(&demand),
            });
        }
        let paths: Vec<PathShare> = d
            .paths
            .into_iter()
            .map(|pf| PathShare {
                path: pf.path,
                rate: pf.value,
            })
            .collect();
        shares.push((demand, paths, h_rate));
    }

    let unit = sources
        .sources
        .iter()
        .fold(1, |acc, s| acc / gcd(acc, s.period) * s.period);
    let eps = epsilon.to_f64().unwrap_or(0.0);
    let m = match m {
        Some(m) => {
            if m == 0 || m % unit != 0 {
                return Err(ScheduleError::BadBlockLength { m });
            }
            m
        }
        None => {
            let mut chosen = None;
            let mut m = unit;
            while m <= MAX_AUTO_M {
                let rates = predicted_rates(net, &shares, m, eps);
                let fits = net.arc_ids().all(|a| match net.capacity(a).finite_value() {
                    Some(c) => rates[a.0] <= c.to_f64().unwrap_or(f64::INFINITY),
                    None => true,
                });
                if fits {
                    chosen = Some(m);
                    break;
                }
                m += unit;
            }
            match chosen {
                Some(m) => m,
                None => {
                    let rates = predicted_rates(net, &shares, MAX_AUTO_M, eps);
                    let (a, over) = net
                        .arc_ids()
                        .filter_map(|a| {
                            net.capacity(a)
                                .finite_value()
                                .map(|c| (a, rates[a.0] - c.to_f64().unwrap_or(0.0)))
                        })
                        .max_by(|x, y| x.1.total_cmp(&y.1))
                        .expect("some finite arc is over");
                    let load: Rational = shares
                        .iter()
                        .flat_map(|(_, p, _)| p)
                        .filter(|s| s.path.contains_arc(a))
                        .map(|s| &s.rate)
                        .sum();
                    return Err(ScheduleError::InsufficientSlack {
                        arc: net.arc_name(a).to_string(),
                        load: format_rational(&load),
                        available: net.capacity(a).to_string(),
                        required: over,
                    });
                }
            }
        }
    };

    let mut pairs = Vec::new();
    for (i, ((demand, paths, _), src)) in shares.into_iter().zip(&sources.sources).enumerate() {
        let block_symbols = m / src.period;
        let size = (src.probs.len() as f64).powi(block_symbols as i32);
        if size > MAX_BLOCK_ALPHABET as f64 {
            return Err(ScheduleError::AlphabetTooLarge { pair: i + 1, size });
        }
        let alphabet = size as usize;
        let block_probs = block_distribution(&src.probs, block_symbols);
        let codebook = huffman_codebook(&block_probs)
            .map_err(|cause| ScheduleError::BadDistribution { pair: i + 1, cause })?;
        pairs.push(PairSchedule {
            demand,
            paths,
            block_symbols,
            alphabet,
            block_probs,
            codebook,
        });
    }
    Ok(RoutingSchedule {
        m,
        epsilon: epsilon.clone(),
        pairs,
    })
}

/// Distribution of blocks of `len` i.i.d. symbols; block index is the
/// base-`k` number with the first symbol most significant.
fn block_distribution(probs: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|b| probs.iter().map(move |p| b * p))
            .collect();
    }
    out
}

/// One sub-block in flight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub pair: usize,
    pub path: usize,
    pub payload: Vec<bool>,
}

impl Frame {
    /// Header size in bits when pair, path and length are sent as 32-bit fields.
    pub const HEADER_BITS: usize = 96;
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcStats {
    pub arc: ArcId,
    pub bits_per_step: f64,
    pub sigma: f64,
    pub load: Rational,
    pub margin: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairStats {
    pub blocks: usize,
    pub reconstructed: usize,
    pub delay: usize,
    pub entropy_rate: f64,
    pub code_bits_per_step: f64,
    pub expected_code_bits_per_step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub m: usize,
    pub blocks: usize,
    pub seed: u64,
    pub pairs: Vec<PairStats>,
    /// Finite arcs only, in id order.
    pub arcs: Vec<(String, Option<Rational>, ArcStats)>,
    pub payload_bits: u64,
    pub header_bits: u64,
    pub causal: bool,
}

impl SimReport {
    pub fn all_reconstructed(&self) -> bool {
        self.pairs.iter().all(|p| p.reconstructed == p.blocks)
    }

    pub fn all_within_bound(&self) -> bool {
        self.arcs.iter().all(|(_, _, s)| s.within_bound)
    }

    /// Flat `key=value` text with stable key names; floats use 6 decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k}={v}").unwrap();
        kv("m", self.m.to_string());
        kv("blocks", self.blocks.to_string());
        kv("seed", self.seed.to_string());
        for (i, p) in self.pairs.iter().enumerate() {
            let pre = format!("pair{}", i + 1);
            kv(
                &format!("{pre}.reconstructed"),
                format!("{}/{}", p.reconstructed, p.blocks),
            );
            kv(&format!("{pre}.delay"), p.delay.to_string());
            kv(
                &format!("{pre}.entropy_rate"),
                format!("{:.6}", p.entropy_rate),
            );
            kv(
                &format!("{pre}.code_bits_per_step"),
                format!("{:.6}", p.code_bits_per_step),
            );
            kv(
                &format!("{pre}.expected_code_bits_per_step"),
                format!("{:.6}", p.expected_code_bits_per_step),
            );
        }
        for (name, cap, s) in &self.arcs {
            let pre = format!("arc.{name}");
            kv(
                &format!("{pre}.capacity"),
                cap.as_ref().map_or("inf".to_string(), format_rational),
            );
            kv(&format!("{pre}.load"), format_rational(&s.load));
            kv(
                &format!("{pre}.bits_per_step"),
                format!("{:.6}", s.bits_per_step),
            );
            kv(&format!("{pre}.margin"), format!("{:.6}", s.margin));
            kv(&format!("{pre}.sigma"), format!("{:.6}", s.sigma));
            kv(&format!("{pre}.within_bound"), s.within_bound.to_string());
        }
        kv("total.payload_bits", self.payload_bits.to_string());
        kv("total.header_bits", self.header_bits.to_string());
        kv("causal", self.causal.to_string());
        kv("all_reconstructed", self.all_reconstructed().to_string());
        kv("all_within_bound", self.all_within_bound().to_string());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("pair {pair}, block {block}: reconstruction mismatch")]
    Mismatch { pair: usize, block: usize },
    #[error("pair {pair}, path {path}: frame missing on arc {arc} at hop {hop}")]
    LostFrame {
        pair: usize,
        path: usize,
        arc: String,
        hop: usize,
    },
    #[error("schedule does not match the network or sources")]
    Mismatched,
}

/// Maps a uniform 64-bit draw to a symbol.
struct Sampler {
    // cumulative thresholds scaled by 2^64
    thresholds: Vec<u128>,
}

impl Sampler {
    fn new(probs: &[Rational]) -> Self {
        let scale = Rational::from_integer(num_bigint::BigInt::one() << 64);
        let mut cum = Rational::zero();
        let thresholds = probs
            .iter()
            .map(|p| {
                cum += p;
                (&cum * &scale)
                    .floor()
                    .to_integer()
                    .to_u128()
                    .expect("<= 2^64")
            })
            .collect();
        Sampler { thresholds }
    }

    fn sample(&self, draw: u64) -> usize {
        let x = draw as u128;
        self.thresholds
            .iter()
            .position(|&t| x < t)
            .unwrap_or(self.thresholds.len() - 1)
    }
}

/// Runs `blocks` epochs of the schedule and reports per-arc rates and
/// per-pair reconstruction.
///
/// An arc passes when its mean payload bits per step is at most
/// `capacity + margin + 3 sigma`, with `sigma` the standard error of the
/// per-epoch mean.
pub fn simulate(
    net: &Network,
    schedule: &RoutingSchedule,
    sources: &SourceModel,
    blocks: usize,
    seed: u64,
) -> Result<SimReport, SimError> {
    let n = net.pair_count();
    if schedule.pairs.len() != n || sources.sources.len() != n {
        return Err(SimError::Mismatched);
    }
    let m = schedule.m;
    let mut rngs: Vec<SplitMix64> = (0..n)
        .map(|i| SplitMix64::seed_from_u64(seed.wrapping_add(i as u64)))
        .collect();
    let samplers: Vec<Sampler> = sources
        .sources
        .iter()
        .map(|s| Sampler::new(&s.probs))
        .collect();

    let arc_count = net.arc_count();
    let mut per_epoch_bits: Vec<Vec<u64>> = vec![Vec::with_capacity(blocks); arc_count];
    let mut pair_stats: Vec<PairStats> = sources
        .sources
        .iter()
        .zip(&schedule.pairs)
        .map(|(src, ps)| PairStats {
            blocks,
            reconstructed: 0,
            delay: m - 1,
            entropy_rate: src.entropy_rate(),
            code_bits_per_step: 0.0,
            expected_code_bits_per_step: ps.expected_block_bits().to_f64().unwrap_or(0.0)
                / m as f64,
        })
        .collect();
    let mut code_bits = vec![0u64; n];
    let mut payload_bits = 0u64;
    let mut header_bits = 0u64;
    let mut causal = true;

    for block in 0..blocks {
        let send_time = (block + 1) * m - 1;
        let mut messages: Vec<Vec<Frame>> = vec![Vec::new(); arc_count];
        let mut sent: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);

        for (i, ps) in schedule.pairs.iter().enumerate() {
            if ps.alphabet != sources.sources[i].probs.len().pow(ps.block_symbols as u32) {
                return Err(SimError::Mismatched);
            }
            let k = sources.sources[i].probs.len();
            let symbols: Vec<usize> = (0..ps.block_symbols)
                .map(|_| samplers[i].sample(rngs[i].next_u64()))
                .collect();
            let index = symbols.iter().fold(0usize, |acc, &s| acc * k + s);
            let code = ps.codebook.codeword(index);
            code_bits[i] += code.len() as u64;
            let lens = ps.split(code.len());
            let mut offset = 0;
            for (path_idx, (share, len)) in ps.paths.iter().zip(&lens).enumerate() {
                let payload: Vec<bool> = (offset..offset + len)
                    .map(|b| code.get(b).copied().unwrap_or(false))
                    .collect();
                offset += len;
                messages[share.path.arcs()[0].0].push(Frame {
                    pair: i,
                    path: path_idx,
                    payload,
                });
            }
            sent.push((index, symbols));
        }

        // forward frames hop by hop: a vertex only relays what it received
        for (i, ps) in schedule.pairs.iter().enumerate() {
            for (path_idx, share) in ps.paths.iter().enumerate() {
                let arcs = share.path.arcs();
                let mut hop_time = send_time;
                for hop in 1..arcs.len() {
                    let incoming = arcs[hop - 1];
                    let Some(frame) = messages[incoming.0]
                        .iter()
                        .find(|f| f.pair == i && f.path == path_idx)
                        .cloned()
                    else {
                        return Err(SimError::LostFrame {
                            pair: i + 1,
                            path: path_idx + 1,
                            arc: net.arc_name(incoming).to_string(),
                            hop,
                        });
                    };
                    // every hop happens within the same final step of the epoch
                    let next_time = send_time;
                    causal &= next_time >= hop_time && next_time < (block + 1) * m;
                    hop_time = next_time;
                    messages[arcs[hop].0].push(frame);
                }
            }
        }

        for (a, msgs) in messages.iter().enumerate() {
            let bits: u64 = msgs.iter().map(|f| f.payload.len() as u64).sum();
            payload_bits += bits;
            header_bits += (msgs.len() * Frame::HEADER_BITS) as u64;
            per_epoch_bits[a].push(bits);
        }

        for (i, ps) in schedule.pairs.iter().enumerate() {
            let sink_arc = net.sink_arc(i);
            let mut frames: Vec<&Frame> = messages[sink_arc.0]
                .iter()
                .filter(|f| f.pair == i)
                .collect();
            frames.sort_by_key(|f| f.path);
            let received: Vec<bool> = frames
                .iter()
                .flat_map(|f| f.payload.iter().copied())
                .collect();
            let decoded = ps.codebook.decode_one(&received).map(|(s, _)| s);
            let k = sources.sources[i].probs.len();
            let symbols = decoded.map(|mut idx| {
                let mut out = vec![0; ps.block_symbols];
                for slot in out.iter_mut().rev() {
                    *slot = idx % k;
                    idx /= k;
                }
                out
            });
            if decoded != Some(sent[i].0) || symbols.as_ref() != Some(&sent[i].1) {
                return Err(SimError::Mismatch { pair: i + 1, block });
            }
            pair_stats[i].reconstructed += 1;
        }
    }

    for (i, p) in pair_stats.iter_mut().enumerate() {
        p.code_bits_per_step = code_bits[i] as f64 / (blocks * m) as f64;
    }
    let loads = schedule.loads(net);
    let margins = schedule.margins(net);
    let mut arcs = Vec::new();
    for a in net.arc_ids() {
        let Some(cap) = net.capacity(a).finite_value() else {
            continue;
        };
        let samples: Vec<f64> = per_epoch_bits[a.0]
            .iter()
            .map(|&b| b as f64 / m as f64)
            .collect();
        let mean = samples.iter().sum::<f64>() / blocks.max(1) as f64;
        let var = if blocks > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (blocks - 1) as f64
        } else {
            0.0
        };
        let sigma = (var / blocks.max(1) as f64).sqrt();
        let bound = cap.to_f64().unwrap_or(f64::INFINITY) + margins[a.0] + 3.0 * sigma;
        arcs.push((
            net.arc_name(a).to_string(),
            Some(cap.clone()),
            ArcStats {
                arc: a,
                bits_per_step: mean,
                sigma,
                load: loads[a.0].clone(),
                margin: margins[a.0],
                within_bound: mean <= bound + 1e-12,
            },
        ));
    }
    Ok(SimReport {
        m,
        blocks,
        seed,
        pairs: pair_stats,
        arcs,
        payload_bits,
        header_bits,
        causal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::flows::{sequential_construct, DemandVector};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn butterfly_half() -> (Network, MultiFlow) {
        let net = corpus::butterfly().network;
        let h = DemandVector::uniform(2, q(1, 2)).unwrap();
        let flow = sequential_construct(&net, &h).unwrap().flow;
        (net, flow)
    }

    #[test]
    fn butterfly_simulation_reconstructs_every_block() {
        let (net, flow) = butterfly_half();
        let sources = SourceModel::uniform_binary(2, 2);
        let sched = build_schedule(&net, &flow, &sources, &q(0, 1), Some(8)).unwrap();
        assert_eq!(sched.pairs[0].block_symbols, 4);
        let rep = simulate(&net, &sched, &sources, 200, 7).unwrap();
        assert!(rep.all_reconstructed());
        assert!(rep.all_within_bound(), "{}", rep.to_text());
        assert!(rep.causal);
        let alpha = rep.arcs.iter().find(|(n, _, _)| n == "alpha").unwrap();
        assert!((alpha.2.bits_per_step - 1.0).abs() < 0.05);
        assert_eq!(rep.pairs[0].delay, 7);
    }

    #[test]
    fn zero_slack_rejects_automatic_block_length() {
        let (net, flow) = butterfly_half();
        let sources = SourceModel::uniform_binary(2, 2);
        let err = build_schedule(&net, &flow, &sources, &q(0, 1), None).unwrap_err();
        assert!(
            matches!(err, ScheduleError::InsufficientSlack { .. }),
            "{err}"
        );
    }

    #[test]
    fn automatic_block_length_fits_the_slack() {
        let net = corpus::fig5().network;
        let h = DemandVector::uniform(2, q(1, 2)).unwrap();
        let mut flow = crate::flows::MultiFlow::zero(&net);
        let set = |f: &mut MultiFlow, j: usize, names: &[&str], v: Rational| {
            for name in names {
                f.flows[j][net.arc(name).unwrap().0] += v.clone();
            }
        };
        set(
            &mut flow,
            0,
            &["out_sigma1", "beta", "epsilon", "in_tau1"],
            q(1, 2),
        );
        set(&mut flow, 1, &["out_sigma2", "in_tau2"], q(1, 2));
        set(&mut flow, 1, &["alpha", "beta"], q(1, 4));
        set(&mut flow, 1, &["gamma"], q(1, 4));
        flow.verify(&net, &h).unwrap();
        let sources = SourceModel::uniform_binary(2, 2);
        let sched = build_schedule(&net, &flow, &sources, &q(1, 1000), None).unwrap();
        assert!(sched.m >= 8 && sched.m.is_multiple_of(2));
        assert_eq!(sched.pairs[1].paths.len(), 2);
        let rep = simulate(&net, &sched, &sources, 100, 1).unwrap();
        assert!(rep.all_reconstructed() && rep.all_within_bound());
    }

    #[test]
    fn single_path_identity_routing() {
        let file = corpus::line(3, &[(1, 3)]).unwrap();
        let h = DemandVector::uniform(1, q(1, 1)).unwrap();
        let flow = sequential_construct(&file.network, &h).unwrap().flow;
        let sources = SourceModel::uniform_binary(1, 1);
        let sched = build_schedule(&file.network, &flow, &sources, &q(0, 1), Some(1)).unwrap();
        assert_eq!(sched.pairs[0].paths.len(), 1);
        assert_eq!(sched.pairs[0].paths[0].rate, q(1, 1));
        let rep = simulate(&file.network, &sched, &sources, 10, 3).unwrap();
        assert_eq!(rep.pairs[0].reconstructed, 10);
        assert_eq!(rep.pairs[0].delay, 0);
    }

    #[test]
    fn rejects_zero_entropy_and_low_demand() {
        let (net, flow) = butterfly_half();
        let single = SourceModel {
            sources: vec![
                SymbolSource {
                    probs: vec![q(1, 1)],
                    period: 1,
                };
                2
            ],
        };
        assert!(matches!(
            build_schedule(&net, &flow, &single, &q(0, 1), Some(2)),
            Err(ScheduleError::ZeroEntropy(1))
        ));
        let dense = SourceModel::uniform_binary(2, 1);
        assert!(matches!(
            build_schedule(&net, &flow, &dense, &q(0, 1), Some(2)),
            Err(ScheduleError::DemandBelowEntropy { .. })
        ));
        let sources = SourceModel::uniform_binary(2, 2);
        assert!(matches!(
            build_schedule(&net, &flow, &sources, &q(0, 1), Some(3)),
            Err(ScheduleError::BadBlockLength { m: 3 })
        ));
    }

    #[test]
    fn block_code_overhead_is_at_most_one_bit() {
        let (net, flow) = butterfly_half();
        let sources = SourceModel {
            sources: vec![
                SymbolSource {
                    probs: vec![q(9, 10), q(1, 10)],
                    period: 2,
                },
                SymbolSource::uniform(2, 2),
            ],
        };
        let sched = build_schedule(&net, &flow, &sources, &q(0, 1), Some(12)).unwrap();
        for (ps, src) in sched.pairs.iter().zip(&sources.sources) {
            let expected = ps.expected_block_bits().to_f64().unwrap();
            let h_block = src.entropy_rate() * sched.m as f64;
            assert!(expected >= h_block - 1e-9 && expected <= h_block + 1.0 + 1e-9);
        }
    }

    #[test]
    fn split_covers_the_block() {
        let (net, flow) = butterfly_half();
        let sources = SourceModel::uniform_binary(2, 2);
        let sched = build_schedule(&net, &flow, &sources, &q(0, 1), Some(4)).unwrap();
        for len in 0..20 {
            let parts = sched.pairs[0].split(len);
            assert!(parts.iter().sum::<usize>() >= len);
        }
    }

    #[test]
    fn sampler_respects_thresholds() {
        let s = Sampler::new(&[q(1, 4), q(3, 4)]);
        assert_eq!(s.sample(0), 0);
        assert_eq!(s.sample(u64::MAX / 4), 0);
        assert_eq!(s.sample(u64::MAX / 4 + 1), 1);
        assert_eq!(s.sample(u64::MAX), 1);
    }
}
