//! Command-line front end.
//!
//! Every report is line-oriented `key=value` text. Exit codes: 0 for a
//! positive verdict or success, 1 for a negative verdict (not dominated,
//! infeasible, failed construction), 2 for usage and input errors.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use structroute::codec::{build_schedule, simulate, SourceModel};
use structroute::corpus;
use structroute::dominance::sdom;
use structroute::dot::{export_dot, Highlight};
use structroute::flows::{sequential_construct, McfOutcome, MultiFlow, Step};
use structroute::format::{parse_network, NetworkFile};
use structroute::routability::{
    analyze_order, find_dd_ordering, Level, LevelResult, Mode, Verdict, DEFAULT_ORDER_LIMIT,
};
use structroute::{format_rational, Network, Rational};

#[derive(Parser)]
#[command(
    name = "structroute",
    version,
    about = "Structural routability analysis for n-pairs networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a network file parses and is structurally valid.
    Validate { file: String },
    /// Decide downward dominance for a pair ordering.
    Analyze {
        file: String,
        /// Pair ordering, 1-based, e.g. `2,1`.
        #[arg(long)]
        order: Option<String>,
        /// Try every ordering and report the first dominated one.
        #[arg(long)]
        search_orderings: bool,
        /// auto, l43 (single-arc cuts), l42 (path separation), l41 (walk blocking) or full.
        #[arg(long, default_value = "auto")]
        level: String,
    },
    /// Structural-dominance closure of an arc set.
    Sdom {
        file: String,
        #[arg(long)]
        arcs: String,
    },
    /// Exact multicommodity flow feasibility for the file's demands.
    Flow {
        file: String,
        /// Require positive slack on every finite arc.
        #[arg(long)]
        strict: bool,
    },
    /// Route pairs one at a time on residual max flows.
    Construct {
        file: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// Simulate block routing of uniform sources at the file's demands.
    Simulate {
        file: String,
        #[arg(long, default_value_t = 1000)]
        blocks: usize,
        /// Block length; chosen automatically from the slack when omitted.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Slack reserve per unit demand used in automatic block length selection.
        #[arg(long, default_value = "0")]
        epsilon: String,
    },
    /// Graphviz rendering with optional highlighting.
    ExportDot {
        file: String,
        #[arg(long)]
        highlight_arcs: Option<String>,
        #[arg(long)]
        highlight_vertices: Option<String>,
    },
    /// Print a built-in instance as a network file.
    Corpus {
        name: String,
        /// Parameters as key=value, e.g. `k=6 pairs=1:3,2:5`.
        params: Vec<String>,
    },
}

/// Error carrying the exit code to use.
struct Fail(u8, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

fn load(arg: &str) -> Result<NetworkFile, Fail> {
    match std::fs::read_to_string(arg) {
        Ok(text) => parse_network(&text).map_err(|e| usage(format!("{arg}: {e}"))),
        // a built-in instance name stands in for a file of that name
        Err(_) if corpus::NAMES.contains(&arg) => {
            corpus::named(arg, &[]).map_err(|e| usage(e.to_string()))
        }
        Err(e) => Err(usage(format!("{arg}: {e}"))),
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_order(s: &str, n: usize) -> Result<Vec<usize>, Fail> {
    let order: Vec<usize> = split_list(s)
        .iter()
        .map(|t| t.parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1))
        .collect::<Option<_>>()
        .ok_or_else(|| usage(format!("bad order {s:?}")))?;
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(usage(format!("order {s:?} is not a permutation of 1..{n}")));
    }
    Ok(order)
}

fn format_order(order: &[usize]) -> String {
    order
        .iter()
        .map(|k| (k + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn compact(set_text: String) -> String {
    set_text.replace(", ", ",")
}

fn write_flow(out: &mut String, net: &Network, flow: &MultiFlow) {
    for (j, q) in flow.flows.iter().enumerate() {
        for a in net.arc_ids() {
            if q[a.0] != Rational::from_integer(0.into()) {
                writeln!(
                    out,
                    "flow.{}.{}={}",
                    j + 1,
                    net.arc_name(a),
                    format_rational(&q[a.0])
                )
                .unwrap();
            }
        }
    }
}

fn run(cli: Cli) -> Result<(u8, String), Fail> {
    let mut out = String::new();
    let code = match cli.command {
        Command::Validate { file } => {
            let f = load(&file)?;
            let net = &f.network;
            writeln!(out, "valid=true").unwrap();
            writeln!(out, "vertices={}", net.vertex_count()).unwrap();
            writeln!(out, "arcs={}", net.arc_count()).unwrap();
            writeln!(out, "pairs={}", net.pair_count()).unwrap();
            0
        }
        Command::Analyze {
            file,
            order,
            search_orderings,
            level,
        } => {
            let f = load(&file)?;
            let net = &f.network;
            let mode = match level.as_str() {
                "auto" => Mode::Auto,
                other => Mode::Only(
                    Level::parse(other).ok_or_else(|| usage(format!("unknown level {other:?}")))?,
                ),
            };
            let order = match (order, search_orderings) {
                (Some(_), true) => {
                    return Err(usage("--order and --search-orderings are exclusive"))
                }
                (Some(s), false) => parse_order(&s, net.pair_count())?,
                (None, true) => match find_dd_ordering(net, DEFAULT_ORDER_LIMIT) {
                    Ok(Some(order)) => order,
                    Ok(None) => {
                        writeln!(out, "verdict={}", Verdict::NotDominated.as_str()).unwrap();
                        writeln!(out, "orderings=none").unwrap();
                        return Ok((1, out));
                    }
                    Err(e) => return Err(usage(e.to_string())),
                },
                (None, false) => (0..net.pair_count()).collect(),
            };
            let report = analyze_order(net, &order, mode).map_err(|e| usage(e.to_string()))?;
            let reordered = net.with_pair_order(&order).expect("checked order");
            writeln!(out, "order={}", format_order(&report.order)).unwrap();
            writeln!(out, "verdict={}", report.verdict.as_str()).unwrap();
            if let Some(l) = report.certified_by {
                writeln!(out, "certified_by={}", l.token()).unwrap();
            }
            for (l, r) in &report.levels {
                let s = match r {
                    LevelResult::Holds => "holds",
                    LevelResult::Fails(_) => "fails",
                    LevelResult::Skipped => "skipped",
                    LevelResult::NotRun => "not-run",
                };
                writeln!(out, "level.{}={}", l.token(), s).unwrap();
            }
            if let Some(w) = &report.witness {
                // the reason text numbers pairs by position in the analysed order
                writeln!(out, "witness.position={}", w.pair + 1).unwrap();
                writeln!(out, "witness.pair={}", order[w.pair] + 1).unwrap();
                writeln!(
                    out,
                    "witness.cut={}",
                    compact(reordered.format_vertices(&w.cut))
                )
                .unwrap();
                writeln!(
                    out,
                    "witness.outgoing={}",
                    compact(reordered.format_arcs(&w.outgoing))
                )
                .unwrap();
                writeln!(out, "witness.reason={}", w.reason.describe(&reordered)).unwrap();
            }
            match report.verdict {
                Verdict::Dominated => 0,
                _ => 1,
            }
        }
        Command::Sdom { file, arcs } => {
            let f = load(&file)?;
            let net = &f.network;
            let b = net
                .arc_set(&split_list(&arcs))
                .map_err(|e| usage(e.to_string()))?;
            let closure = sdom(net, &b);
            writeln!(out, "input={}", compact(net.format_arcs(&b))).unwrap();
            writeln!(out, "sdom={}", compact(net.format_arcs(&closure))).unwrap();
            0
        }
        Command::Flow { file, strict } => {
            let f = load(&file)?;
            let net = &f.network;
            match structroute::flows::solve_mcf(net, &f.demands, strict) {
                McfOutcome::Infeasible => {
                    writeln!(out, "feasible=false").unwrap();
                    1
                }
                McfOutcome::Feasible { flow, slack } => {
                    let ok = slack.as_ref().is_none_or(|s| s.is_positive());
                    writeln!(out, "feasible={ok}").unwrap();
                    if let Some(s) = &slack {
                        writeln!(out, "slack={s}").unwrap();
                    }
                    write_flow(&mut out, net, &flow);
                    if ok {
                        0
                    } else {
                        1
                    }
                }
            }
        }
        Command::Construct { file, order } => {
            let f = load(&file)?;
            let f = match order {
                Some(s) => {
                    let order = parse_order(&s, f.network.pair_count())?;
                    f.reordered(&order).map_err(|e| usage(e.to_string()))?
                }
                None => f,
            };
            let net = &f.network;
            match sequential_construct(net, &f.demands) {
                Ok(c) => {
                    writeln!(out, "success=true").unwrap();
                    for step in &c.steps {
                        match step {
                            Step::InfinitePath { pair, path } => writeln!(
                                out,
                                "step.{}=infinite-path {}",
                                pair + 1,
                                net.format_path(path)
                            )
                            .unwrap(),
                            Step::Scaled {
                                pair,
                                value,
                                scale,
                                cut,
                            } => writeln!(
                                out,
                                "step.{}=max-flow value={} scale={} cut={}",
                                pair + 1,
                                format_rational(value),
                                format_rational(scale),
                                compact(net.format_vertices(cut))
                            )
                            .unwrap(),
                        }
                    }
                    write_flow(&mut out, net, &c.flow);
                    0
                }
                Err(fail) => {
                    writeln!(out, "success=false").unwrap();
                    writeln!(out, "failed_pair={}", fail.pair + 1).unwrap();
                    writeln!(out, "max_flow={}", format_rational(&fail.value)).unwrap();
                    writeln!(out, "demand={}", format_rational(&fail.demand)).unwrap();
                    writeln!(out, "cut={}", compact(net.format_vertices(&fail.cut))).unwrap();
                    writeln!(out, "outgoing={}", compact(net.format_arcs(&fail.outgoing))).unwrap();
                    1
                }
            }
        }
        Command::Simulate {
            file,
            blocks,
            m,
            seed,
            epsilon,
        } => {
            let f = load(&file)?;
            let net = &f.network;
            let eps = structroute::parse_rational(&epsilon)
                .filter(|e| *e >= Rational::from_integer(0.into()))
                .ok_or_else(|| usage(format!("bad epsilon {epsilon:?}")))?;
            let sources = SourceModel::matching(&f.demands).ok_or_else(|| {
                usage("demand numerators must be between 1 and 20 in lowest terms")
            })?;
            let flow = match structroute::flows::solve_mcf(net, &f.demands, true) {
                McfOutcome::Feasible { flow, .. } => flow,
                McfOutcome::Infeasible => {
                    writeln!(out, "feasible=false").unwrap();
                    return Ok((1, out));
                }
            };
            let schedule = match build_schedule(net, &flow, &sources, &eps, m) {
                Ok(s) => s,
                Err(e) => {
                    writeln!(out, "schedule=failed").unwrap();
                    writeln!(out, "error={e}").unwrap();
                    return Ok((1, out));
                }
            };
            let report = simulate(net, &schedule, &sources, blocks, seed)
                .map_err(|e| Fail(1, e.to_string()))?;
            out.push_str(&report.to_text());
            if report.all_reconstructed() && report.all_within_bound() {
                0
            } else {
                1
            }
        }
        Command::ExportDot {
            file,
            highlight_arcs,
            highlight_vertices,
        } => {
            let f = load(&file)?;
            let net = &f.network;
            let hl = Highlight {
                arcs: highlight_arcs
                    .map(|s| net.arc_set(&split_list(&s)))
                    .transpose()
                    .map_err(|e| usage(e.to_string()))?,
                vertices: highlight_vertices
                    .map(|s| net.vertex_set(&split_list(&s)))
                    .transpose()
                    .map_err(|e| usage(e.to_string()))?,
            };
            out.push_str(&export_dot(net, &hl));
            0
        }
        Command::Corpus { name, params } => {
            let params = params
                .iter()
                .map(|p| {
                    p.split_once('=')
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .ok_or_else(|| usage(format!("parameter {p:?} is not key=value")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let f = corpus::named(&name, &params).map_err(|e| usage(e.to_string()))?;
            out.push_str(&f.emit());
            0
        }
    };
    Ok((code, out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((code, out)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
