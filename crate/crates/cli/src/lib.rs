//! Batch front end for the `orthomorph` library. Every subcommand writes one
//! JSON document (or CSV for `sweep --format csv`) and maps its verdict to an
//! exit code: 0 found/pass, 1 verified nonexistent/fail, 2 unknown, 64 usage.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthomorph::absorbers::{find_pair_absorber, rmbg_build, rmbg_verify, RMBG_EXHAUSTIVE_THRESHOLD};
use orthomorph::certificate::{Body, Certificate, Shape};
use orthomorph::families::{build_good_families, check_good_families, FAMILY_CONSTANT};
use orthomorph::patterns::{probe_gadget_availability, Pattern};
use orthomorph::rainbow::{typicality_stats, ColoredDigraphView, Equation};
use orthomorph::sequencing::{order_as_cycle_candidate, order_as_path_candidate, parse_index_list};
use orthomorph::solver::{
    cycle_type, find_cycle_type_orthomorphism, find_fgt_orthomorphism, matchable, sweep_plan, verify_orthomorphism,
    CycleType, EquationSystem, Orthomorphism, SweepEntry,
};
use orthomorph::zerosum::{
    generalized_tannenbaum_candidates, partition_fixed_sum_quads, zero_sum_equipartition, zero_sum_partition,
    CandidateMode,
};
use orthomorph::{enumerate_abelian_groups, Element, Error, GroupSpec, Outcome, Search, SearchBudget};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NONEXISTENT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "orthomorph", version, about = "Orthomorphism and rainbow-cycle search toolkit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget per search.
    #[arg(long, global = true, default_value_t = orthomorph::budget::DEFAULT_NODE_CAP)]
    budget_nodes: u64,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Cycle,
    Path,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Cycle => Shape::Cycle,
            ShapeArg::Path => Shape::Path,
        }
    }
}

#[derive(Args, Debug)]
struct Target {
    /// Group such as `Z7`, `Z4xZ2` or `Z2^3`.
    #[arg(long, conflicts_with = "order")]
    group: Option<String>,
    /// Run on every abelian group of this order.
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Args, Debug)]
struct One {
    #[arg(long)]
    group: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orthomorphism fixing zero whose other cycles all have length k.
    Fgt {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: usize,
    },
    /// Orthomorphism with a prescribed cycle type such as `1+3^2`.
    CycleType {
        #[command(flatten)]
        group: One,
        #[arg(long = "cycle-type")]
        cycle_type: String,
    },
    /// Whether the elements sum to zero.
    HallPaige {
        #[command(flatten)]
        target: Target,
    },
    /// FGT search over every admissible group and k up to an order.
    Sweep {
        #[arg(long)]
        max_order: u32,
        /// Report each finished cell on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Order a set as a rainbow cycle- or path-candidate.
    Sequence {
        #[command(flatten)]
        group: One,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = ShapeArg::Cycle)]
        shape: ShapeArg,
    },
    /// Partition a set into blocks with a fixed sum.
    ZerosumPartition {
        #[command(flatten)]
        group: One,
        /// Defaults to all nonzero elements.
        #[arg(long)]
        set: Option<String>,
        /// Equal zero-sum blocks of this size.
        #[arg(long, conflicts_with = "sizes")]
        k: Option<usize>,
        /// Zero-sum blocks of these sizes, e.g. `2,4`.
        #[arg(long)]
        sizes: Option<String>,
        /// 4-blocks summing to this element.
        #[arg(long, conflicts_with_all = ["k", "sizes"])]
        alpha: Option<u64>,
        /// Also order every block as a rainbow candidate.
        #[arg(long, value_enum)]
        candidates: Option<ShapeArg>,
    },
    /// Whether `A·v = 0` has n solutions with bijective coordinates.
    Matchable {
        #[command(flatten)]
        target: Target,
        /// Rows split by `;`, entries by `,`; or `hall-paige` / `queens`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Build and check good families for `Z_p`.
    Families {
        #[command(flatten)]
        group: One,
        #[arg(long)]
        k: usize,
        /// Defaults to `⌊n / (64k)⌋`.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Find and verify a reservoir that 1-absorbs two vertices.
    Absorber {
        #[command(flatten)]
        group: One,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        z: u64,
    },
    /// Build and verify a robustly matchable bipartite graph.
    Rmbg {
        #[arg(long)]
        h: usize,
        /// A fraction such as `1/2`.
        #[arg(long, default_value = "1/2")]
        beta: String,
        #[arg(long, default_value_t = 3)]
        retries: u32,
        /// Random `Y_0` samples for the final check when not exhaustive.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Monte Carlo rate of finding a pattern copy in a random subset.
    Probe {
        /// Built-in path or cycle pattern from these colours.
        #[arg(long)]
        group: Option<String>,
        /// Pattern JSON file.
        #[arg(long, conflicts_with_all = ["path", "cycle"])]
        pattern: Option<PathBuf>,
        #[arg(long, conflicts_with = "cycle")]
        path: Option<String>,
        #[arg(long)]
        cycle: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        forbidden: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 10_000)]
        attempts: u64,
    },
    /// Degree statistics of the solution hypergraph of `a ± b ± c = 0`.
    Typicality {
        #[command(flatten)]
        group: One,
        #[arg(long, default_value = "a-b-c=0", allow_hyphen_values = true)]
        equation: String,
        /// Three element lists split by `;`.
        #[arg(long)]
        parts: String,
        #[arg(long, requires_all = ["p", "n"])]
        gamma: Option<f64>,
        #[arg(long, requires = "gamma")]
        p: Option<f64>,
        #[arg(long, requires = "gamma")]
        n: Option<f64>,
    },
    /// Re-verify a certificate file from scratch.
    Verify { file: PathBuf },
}

/// What a subcommand produced: the document and its exit code.
#[derive(Debug)]
pub struct Report {
    pub code: i32,
    pub body: String,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn code_of<T>(o: &Outcome<T>) -> i32 {
    match o {
        Outcome::Found(_) => EXIT_FOUND,
        Outcome::Nonexistent => EXIT_NONEXISTENT,
        Outcome::Unknown => EXIT_UNKNOWN,
    }
}

/// Worst of several verdicts: unknown over nonexistent over found.
fn worst(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().max_by_key(|&c| match c {
        EXIT_UNKNOWN => 2,
        EXIT_NONEXISTENT => 1,
        _ => 0,
    })
    .unwrap_or(EXIT_FOUND)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise") + "\n"
}

fn cert_value(c: &Certificate) -> Value {
    serde_json::to_value(c).expect("certificates serialise")
}

fn parse_group(s: &str) -> CliResult<GroupSpec> {
    Ok(GroupSpec::parse(s)?)
}

fn groups(t: &Target) -> CliResult<Vec<GroupSpec>> {
    match (&t.group, t.order) {
        (Some(g), None) => Ok(vec![parse_group(g)?]),
        (None, Some(n)) if n >= 1 && u64::from(n) <= orthomorph::group::MAX_ORDER => Ok(enumerate_abelian_groups(n)),
        (None, Some(n)) => Err(usage(format!("order {n} out of range"))),
        _ => Err(usage("exactly one of --group and --order is required")),
    }
}

/// Single result or, for `--order`, an array of them.
fn collect(items: Vec<(i32, Value)>, single: bool) -> Report {
    let code = worst(items.iter().map(|(c, _)| *c));
    let body = if single {
        pretty(&items.into_iter().next().expect("one group").1)
    } else {
        pretty(&Value::Array(items.into_iter().map(|(_, v)| v).collect()))
    };
    Report { code, body }
}

fn not_found(group: &GroupSpec, kind: &str, outcome: &str, nodes: u64, extra: Value) -> Value {
    let mut v = json!({ "group": group.to_string(), "kind": kind, "outcome": outcome, "nodes": nodes });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn orthomorphism_report(
    g: &GroupSpec,
    s: Search<Orthomorphism>,
    requested: &CycleType,
    seed: u64,
    reason: Option<&str>,
) -> (i32, Value) {
    let code = code_of(&s.outcome);
    match s.outcome {
        Outcome::Found(o) => {
            let cert =
                Certificate::new(g, Body::Orthomorphism { perm: o.perm, cycle_type: Some(requested.to_string()) }, seed);
            (if cert.verified { EXIT_FOUND } else { EXIT_NONEXISTENT }, cert_value(&cert))
        }
        other => {
            let extra = match reason {
                Some(r) if other.is_nonexistent() => json!({ "cycle_type": requested.to_string(), "reason": r }),
                _ => json!({ "cycle_type": requested.to_string() }),
            };
            (code, not_found(g, "orthomorphism", other.label(), s.nodes, extra))
        }
    }
}

fn witness_hash(perm: &[Element]) -> String {
    let text: Vec<String> = perm.iter().map(|e| e.index().to_string()).collect();
    let digest = Sha256::digest(text.join(",").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

struct SweepRow {
    group: String,
    k: Option<usize>,
    outcome: &'static str,
    nodes: u64,
    hash: String,
    note: String,
}

fn sweep_cell(entry: &SweepEntry, budget: &SearchBudget) -> SweepRow {
    match entry {
        SweepEntry::Skipped { group, reason } => SweepRow {
            group: group.to_string(),
            k: None,
            outcome: "skipped",
            nodes: 0,
            hash: String::new(),
            note: reason.clone(),
        },
        SweepEntry::Cell { group, k } => {
            let mut row = SweepRow {
                group: group.to_string(),
                k: Some(*k),
                outcome: "unknown",
                nodes: 0,
                hash: String::new(),
                note: String::new(),
            };
            match find_fgt_orthomorphism(group, *k, budget) {
                Err(e) => {
                    row.outcome = "error";
                    row.note = e.to_string();
                }
                Ok(s) => {
                    row.nodes = s.nodes;
                    row.outcome = s.outcome.label();
                    if let Outcome::Found(o) = s.outcome {
                        let want = CycleType::fgt(group.n(), *k).expect("planned cells are admissible");
                        if verify_orthomorphism(group, &o.perm).is_err() || cycle_type(&o.perm) != want {
                            row.outcome = "invalid";
                            row.note = "witness failed re-verification".into();
                        }
                        row.hash = witness_hash(&o.perm);
                    }
                }
            }
            row
        }
    }
}

fn sweep(max_order: u32, jobs: usize, budget: &SearchBudget, format: Format, progress: bool) -> CliResult<Report> {
    if max_order > 64 {
        return Err(usage("sweeps are limited to order 64"));
    }
    let plan = sweep_plan(max_order)?;
    let total = plan.len();
    let run = |(i, e): (usize, &SweepEntry)| {
        let row = sweep_cell(e, budget);
        if progress {
            eprintln!("[{}/{total}] {} k={:?} {}", i + 1, row.group, row.k, row.outcome);
        }
        row
    };
    let rows: Vec<SweepRow> = if jobs <= 1 {
        plan.iter().enumerate().map(run).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| usage(format!("thread pool: {e}")))?;
        pool.install(|| plan.par_iter().enumerate().map(run).collect())
    };
    let code = worst(rows.iter().map(|r| match r.outcome {
        "found" | "skipped" => EXIT_FOUND,
        "unknown" => EXIT_UNKNOWN,
        _ => EXIT_NONEXISTENT,
    }));
    let body = match format {
        Format::Csv => {
            let mut out = String::from("group,k,outcome,nodes,witness_sha256,note\n");
            for r in &rows {
                let k = r.k.map(|k| k.to_string()).unwrap_or_default();
                out += &format!("{},{},{},{},{},{}\n", r.group, k, r.outcome, r.nodes, r.hash, r.note);
            }
            out
        }
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({ "group": r.group, "k": r.k, "outcome": r.outcome, "nodes": r.nodes,
                            "witness_sha256": r.hash, "note": r.note })
                })
                .collect(),
        )),
    };
    Ok(Report { code, body })
}

fn parse_beta(s: &str) -> CliResult<(u64, u64)> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let p = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad fraction {s:?}")));
    Ok((p(a)?, p(b)?))
}

fn parse_sizes(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| usage(format!("bad size {t:?}"))))
        .collect()
}

fn partition_report(
    g: &GroupSpec,
    universe: Vec<Element>,
    target: Element,
    ordered: Option<Shape>,
    s: Search<Vec<Vec<Element>>>,
    seed: u64,
) -> Report {
    let code = code_of(&s.outcome);
    match s.outcome {
        Outcome::Found(blocks) => {
            let cert = Certificate::new(g, Body::Partition { universe, target, blocks, ordered }, seed);
            Report { code: if cert.verified { EXIT_FOUND } else { EXIT_NONEXISTENT }, body: pretty(&cert_value(&cert)) }
        }
        other => Report { code, body: pretty(&not_found(g, "partition", other.label(), s.nodes, json!({}))) },
    }
}

fn execute(cli: Cli) -> CliResult<Report> {
    let budget = SearchBudget::nodes(cli.budget_nodes);
    let seed = cli.seed;
    match cli.command {
        Command::Fgt { target, k } => {
            let gs = groups(&target)?;
            let mut items = Vec::new();
            for g in &gs {
                let requested = CycleType::fgt(g.n(), k)?;
                let s = find_fgt_orthomorphism(g, k, &budget)?;
                let reason = if !g.hall_paige() {
                    "Hall-Paige fails"
                } else {
                    "no zero-sum partition or no rainbow cycle factor"
                };
                items.push(orthomorphism_report(g, s, &requested, seed, Some(reason)));
            }
            Ok(collect(items, target.group.is_some()))
        }
        Command::CycleType { group, cycle_type } => {
            let g = parse_group(&group.group)?;
            let t: CycleType = cycle_type.parse()?;
            let s = find_cycle_type_orthomorphism(&g, &t, &budget)?;
            Ok(collect(vec![orthomorphism_report(&g, s, &t, seed, None)], true))
        }
        Command::HallPaige { target } => {
            let items = groups(&target)?
                .iter()
                .map(|g| {
                    let hp = g.hall_paige();
                    (if hp { EXIT_FOUND } else { EXIT_NONEXISTENT }, json!({ "group": g.to_string(), "hall_paige": hp }))
                })
                .collect();
            Ok(collect(items, target.group.is_some()))
        }
        Command::Sweep { max_order, progress } => sweep(max_order, cli.jobs, &budget, cli.format, progress),
        Command::Sequence { group, set, shape } => {
            let g = parse_group(&group.group)?;
            let elems = parse_index_list(&g, &set)?;
            let found = match shape {
                ShapeArg::Cycle => order_as_cycle_candidate(&g, &elems)?,
                ShapeArg::Path => order_as_path_candidate(&g, &elems)?,
            };
            Ok(match found {
                Some(sequence) => {
                    let cert = Certificate::new(&g, Body::Sequence { shape: shape.into(), sequence }, seed);
                    Report { code: EXIT_FOUND, body: pretty(&cert_value(&cert)) }
                }
                None => Report {
                    code: EXIT_NONEXISTENT,
                    body: pretty(&not_found(&g, "sequence", "nonexistent", 0, json!({}))),
                },
            })
        }
        Command::ZerosumPartition { group, set, k, sizes, alpha, candidates } => {
            let g = parse_group(&group.group)?;
            let universe = match set {
                Some(s) => parse_index_list(&g, &s)?,
                None => g.nonzero_elements().collect(),
            };
            let blocks = |s: Search<orthomorph::zerosum::Partition>| s.map(|p| p.blocks);
            let alpha = alpha.map(|a| g.element(a)).transpose()?;
            Ok(match (candidates, k, sizes, alpha) {
                (Some(ShapeArg::Cycle), Some(k), None, None) => {
                    let s = generalized_tannenbaum_candidates(&g, &universe, k, CandidateMode::Cycle, &budget)?;
                    partition_report(&g, universe, Element::IDENTITY, Some(Shape::Cycle), s, seed)
                }
                (Some(ShapeArg::Path), None, None, Some(a)) => {
                    let s = generalized_tannenbaum_candidates(&g, &universe, 4, CandidateMode::Path { alpha: a }, &budget)?;
                    partition_report(&g, universe, a, Some(Shape::Path), s, seed)
                }
                (None, None, None, Some(a)) => {
                    let s = partition_fixed_sum_quads(&g, &universe, a, &budget)?;
                    partition_report(&g, universe, a, None, blocks(s), seed)
                }
                (None, Some(k), None, None) => {
                    let s = zero_sum_equipartition(&g, &universe, k, &budget)?;
                    partition_report(&g, universe, Element::IDENTITY, None, blocks(s), seed)
                }
                (None, None, Some(sz), None) => {
                    let s = zero_sum_partition(&g, &universe, &parse_sizes(&sz)?, &budget)?;
                    partition_report(&g, universe, Element::IDENTITY, None, blocks(s), seed)
                }
                _ => {
                    return Err(usage(
                        "use one of --k, --sizes, --alpha; --candidates cycle needs --k, --candidates path needs --alpha",
                    ))
                }
            })
        }
        Command::Matchable { target, matrix } => {
            let a = match matrix.as_str() {
                "hall-paige" => EquationSystem::hall_paige(),
                "queens" => EquationSystem::queens(),
                m => EquationSystem::parse(m)?,
            };
            let mut items = Vec::new();
            for g in groups(&target)? {
                let s = matchable(&a, &g, &budget)?;
                let code = code_of(&s.outcome);
                items.push(match s.outcome {
                    Outcome::Found(witness) => {
                        let cert = Certificate::new(&g, Body::Matchable { matrix: a.clone(), witness }, seed);
                        (if cert.verified { EXIT_FOUND } else { EXIT_NONEXISTENT }, cert_value(&cert))
                    }
                    other => {
                        (code, not_found(&g, "matchable", other.label(), s.nodes, json!({ "matrix": a.to_string() })))
                    }
                });
            }
            Ok(collect(items, target.group.is_some()))
        }
        Command::Families { group, k, size } => {
            let g = parse_group(&group.group)?;
            let size = size.unwrap_or(g.n() / (FAMILY_CONSTANT * k.max(1)));
            Ok(match build_good_families(&g, k, size, seed)? {
                Ok(families) => {
                    let report = check_good_families(&families, &g, k);
                    let cert = Certificate::new(&g, Body::GoodFamilies { k, families }, seed);
                    let mut v = cert_value(&cert);
                    v["report"] = serde_json::to_value(&report).expect("report serialises");
                    Report { code: if report.passed() { EXIT_FOUND } else { EXIT_NONEXISTENT }, body: pretty(&v) }
                }
                Err(stage) => Report {
                    code: EXIT_UNKNOWN,
                    body: pretty(&not_found(
                        &g,
                        "good_families",
                        "unknown",
                        0,
                        json!({ "k": k, "stage": format!("{stage:?}") }),
                    )),
                },
            })
        }
        Command::Absorber { group, k, x, z } => {
            let g = parse_group(&group.group)?;
            let view = ColoredDigraphView::full(&g);
            let s = find_pair_absorber(g.element(x)?, g.element(z)?, &view, k, &budget)?;
            let code = code_of(&s.outcome);
            Ok(match s.outcome {
                Outcome::Found(instance) => {
                    let body = Body::Absorber { k, vertices: view.vertices(), colors: view.colors(), instance };
                    let cert = Certificate::new(&g, body, seed);
                    Report { code: if cert.verified { EXIT_FOUND } else { EXIT_NONEXISTENT }, body: pretty(&cert_value(&cert)) }
                }
                other => Report { code, body: pretty(&not_found(&g, "absorber", other.label(), s.nodes, json!({}))) },
            })
        }
        Command::Rmbg { h, beta, retries, samples } => {
            let beta = parse_beta(&beta)?;
            Ok(match rmbg_build(h, beta, seed, retries)? {
                Some((graph, _)) => {
                    let v = rmbg_verify(&graph, samples, seed, RMBG_EXHAUSTIVE_THRESHOLD);
                    let body = json!({
                        "kind": "rmbg",
                        "h": h,
                        "beta": [beta.0, beta.1],
                        "passed": v.passed,
                        "evidence": v.evidence,
                        "checked": v.checked,
                        "max_degree": v.max_degree,
                        "failure": v.failure,
                        "seed": seed,
                        "adjacency": graph.adjacency,
                    });
                    Report { code: if v.passed { EXIT_FOUND } else { EXIT_NONEXISTENT }, body: pretty(&body) }
                }
                None => Report {
                    code: EXIT_UNKNOWN,
                    body: pretty(&json!({ "kind": "rmbg", "h": h, "beta": [beta.0, beta.1], "outcome": "unknown",
                                          "retries": retries, "seed": seed })),
                },
            })
        }
        Command::Probe { group, pattern, path, cycle, p, forbidden, trials, attempts } => {
            let pat = match (pattern, path, cycle) {
                (Some(file), None, None) => {
                    let text = fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
                    Pattern::from_json(&text)?
                }
                (None, Some(colors), None) => {
                    let g = parse_group(group.as_deref().ok_or_else(|| usage("--group is required"))?)?;
                    Pattern::path(&g, &parse_index_list(&g, &colors)?)?
                }
                (None, None, Some(colors)) => {
                    let g = parse_group(group.as_deref().ok_or_else(|| usage("--group is required"))?)?;
                    Pattern::cycle(&g, &parse_index_list(&g, &colors)?)?
                }
                _ => return Err(usage("give one of --pattern, --path, --cycle")),
            };
            let r = probe_gadget_availability(&pat, p, forbidden, trials, seed, attempts)?;
            let body = json!({
                "kind": "probe",
                "group": pat.group.to_string(),
                "evidence": "monte-carlo",
                "p": p,
                "forbidden": forbidden,
                "seed": seed,
                "trials": r.trials,
                "successes": r.successes,
                "rate": r.rate,
                "wilson_low": r.wilson_low,
                "wilson_high": r.wilson_high,
            });
            Ok(Report { code: EXIT_FOUND, body: pretty(&body) })
        }
        Command::Typicality { group, equation, parts, gamma, p, n } => {
            let g = parse_group(&group.group)?;
            let eq = Equation::parse(&equation)?;
            let lists: Vec<&str> = parts.split(';').collect();
            if lists.len() != 3 {
                return Err(usage("--parts needs three lists split by ';'"));
            }
            let ps = lists.iter().map(|l| parse_index_list(&g, l)).collect::<orthomorph::Result<Vec<_>>>()?;
            let params = gamma.map(|gm| (gm, p.expect("clap requires p"), n.expect("clap requires n")));
            let r = typicality_stats(&g, eq, [&ps[0], &ps[1], &ps[2]], params)?;
            let mut v = serde_json::to_value(&r).expect("report serialises");
            v["group"] = json!(g.to_string());
            v["kind"] = json!("typicality");
            let code = if r.typical == Some(false) { EXIT_NONEXISTENT } else { EXIT_FOUND };
            Ok(Report { code, body: pretty(&v) })
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let cert = Certificate::from_json(&text)?;
            Ok(match cert.verify() {
                Ok(()) => Report {
                    code: EXIT_FOUND,
                    body: pretty(&json!({ "kind": cert.body.kind(), "group": cert.group.to_string(), "valid": true })),
                },
                Err(why) => Report {
                    code: EXIT_NONEXISTENT,
                    body: pretty(&json!({ "kind": cert.body.kind(), "group": cert.group.to_string(), "valid": false,
                                          "violation": why })),
                },
            })
        }
    }
}

/// Runs one invocation and returns `(exit code, stdout, stderr)`. With
/// `--out`, the document goes to that file and stdout stays empty.
pub fn run_capture<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            return (code, String::new(), e.render().to_string());
        }
    };
    let out = cli.out.clone();
    match execute(cli) {
        Ok(report) => match out {
            Some(path) => match fs::write(&path, &report.body) {
                Ok(()) => (report.code, String::new(), String::new()),
                Err(e) => (EXIT_USAGE, String::new(), format!("error: {}: {e}\n", path.display())),
            },
            None => (report.code, report.body, String::new()),
        },
        Err(UsageError(msg)) => (EXIT_USAGE, String::new(), format!("error: {msg}\n")),
    }
}
