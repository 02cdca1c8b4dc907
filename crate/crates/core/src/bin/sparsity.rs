use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sparsity::augment::{build_augmented, extract_spanning_tree, verify_claims};
use sparsity::generate::{generate_corpus, ExperimentConfig, Family, GraphSpec};
use sparsity::graph::{write_edge_list, write_order};
use sparsity::reach::{exact_optimum, greedy_order, metric_profile_with, wcol_under, AdmMode, Metric, DEFAULT_ENUMERATION_CAP};
use sparsity::scatter::{audit, largest_m, scatter_extract};
use sparsity::splitter::{play_game, replay, ConnectorKind, WcolSplitter};
use sparsity::suite::{run_suite, CRITERIA};
use sparsity::uniform::{build_uniform_order, short_path_multiplicity, verify_invariant, ConstructionTrace, Variant};
use sparsity::{parse_graph, parse_order, Error, LinearOrder, ParsedGraph, VertexSet};

#[derive(Parser)]
#[command(name = "sparsity", version, about = "Colouring numbers, uniform orders, scattered sets and splitter games")]
struct Cli {
    /// Worker threads for parallel jobs.
    #[arg(long, global = true, env = "SPARSITY_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Edge-list file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Per-vertex reachability and admissibility profile under an order.
    Metrics {
        #[command(flatten)]
        input: Input,
        /// Order file; defaults to ascending ids.
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        /// Close admissibility gaps with the exhaustive search.
        #[arg(long)]
        exact: bool,
    },
    /// Exact optimum over all orders (small graphs only).
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        metric: Metric,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Heuristic order for radius r, written in order-file format.
    GreedyOrder {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radius-independent fragment order with its construction trace.
    Order {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "plain")]
        variant: Variant,
        /// Trace JSON destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Order file destination; stdout when absent.
        #[arg(long)]
        order_out: Option<PathBuf>,
    },
    /// Re-checks a construction trace against its graph.
    VerifyOrder {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        trace: PathBuf,
        /// Also report the short-path multiplicity for this radius.
        #[arg(long)]
        beta: Option<usize>,
    },
    /// Deletion set and scattered set extraction.
    Scatter {
        #[command(flatten)]
        input: Input,
        /// Order file; defaults to the greedy order for r.
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        /// File with one vertex id per line; defaults to all vertices.
        #[arg(long)]
        a: Option<PathBuf>,
        /// Target size; defaults to the largest one the input supports.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Plays the splitter game with the order-minimum strategy.
    Splitter {
        #[command(flatten)]
        input: Input,
        /// Order file; defaults to the greedy order for 2r.
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        /// max-ball, first, random or random:SEED
        #[arg(long, default_value = "max-ball")]
        connector: ConnectorKind,
        /// Round cap; defaults to the vertex count.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the augmented graph, spanning tree, charges and claim report.
    Augment {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs the claim checks for the augmented graph and prints the report.
    VerifyClaims {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
    },
    /// Runs the acceptance suite.
    Suite {
        /// Comma-separated criterion numbers; all when absent.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Directory for report.md and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes generated graphs as edge lists.
    Generate {
        #[arg(long, conflicts_with = "config")]
        family: Option<Family>,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON experiment config listing a whole corpus.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output file (single graph) or directory (config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CliResult = Result<bool, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_graph(input: &Input) -> Result<ParsedGraph, Error> {
    parse_graph(&read(&input.input)?)
}

fn load_order(path: &Path, pg: &ParsedGraph) -> Result<LinearOrder, Error> {
    let order = parse_order(&read(path)?, &pg.labels)?;
    order.check_fits(&pg.graph)?;
    Ok(order)
}

/// Adds the id-to-label map when the input ids were remapped.
fn with_labels(mut value: Value, pg: &ParsedGraph) -> Value {
    if !pg.is_identity() {
        if let Value::Object(map) = &mut value {
            map.insert("labels".into(), json!(pg.labels));
        }
    }
    value
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn edge_list_with_labels(pg: &ParsedGraph, edges: &[(usize, usize)]) -> String {
    edges.iter().map(|&(u, v)| format!("{} {}\n", pg.labels[u], pg.labels[v])).collect()
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Metrics { input, order, r, exact } => {
            let pg = load_graph(&input)?;
            let order = match order {
                Some(p) => load_order(&p, &pg)?,
                None => LinearOrder::identity(pg.graph.n()),
            };
            let mode = if exact { AdmMode::Exact } else { AdmMode::Bounds };
            let profile = metric_profile_with(&pg.graph, &order, r, mode)?;
            emit(&with_labels(serde_json::to_value(profile)?, &pg), None)?;
            Ok(true)
        }
        Command::Oracle { input, r, metric, cap } => {
            let pg = load_graph(&input)?;
            let opt = exact_optimum(&pg.graph, r, metric, cap)?;
            let order: Vec<u64> = opt.order.sequence().iter().map(|&v| pg.labels[v]).collect();
            emit(&json!({ "metric": metric, "r": r, "value": opt.value, "order": order }), None)?;
            Ok(true)
        }
        Command::GreedyOrder { input, r, out } => {
            let pg = load_graph(&input)?;
            let order = greedy_order(&pg.graph, r);
            let text = format!("# greedy order, r = {r}, wcol_r = {}\n", wcol_under(&pg.graph, &order, r))
                + &write_order(&order, &pg.labels);
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Order { input, variant, out, order_out } => {
            let pg = load_graph(&input)?;
            let (order, trace) = build_uniform_order(&pg.graph, variant)?;
            let text = write_order(&order, &pg.labels);
            match order_out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            if let Some(p) = out {
                emit(&with_labels(serde_json::to_value(&trace)?, &pg), Some(&p))?;
            }
            Ok(true)
        }
        Command::VerifyOrder { input, trace, beta } => {
            let pg = load_graph(&input)?;
            let mut raw: Value = serde_json::from_str(&read(&trace)?)?;
            if let Value::Object(map) = &mut raw {
                map.remove("labels");
            }
            let trace: ConstructionTrace = serde_json::from_value(raw)?;
            let report = verify_invariant(&pg.graph, &trace);
            let mut value = serde_json::to_value(&report)?;
            if let (Some(r), true) = (beta, report.partition && report.disjoint) {
                value["short_path_multiplicity"] = json!({ "r": r, "value": short_path_multiplicity(&pg.graph, &trace, r) });
            }
            emit(&value, None)?;
            Ok(report.ok)
        }
        Command::Scatter { input, order, r, a, m } => {
            let pg = load_graph(&input)?;
            let g = &pg.graph;
            let order = match order {
                Some(p) => load_order(&p, &pg)?,
                None => greedy_order(g, r),
            };
            let a: VertexSet = match a {
                Some(p) => {
                    let text = read(&p)?;
                    let index: std::collections::HashMap<u64, usize> =
                        pg.labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
                    let mut out = Vec::new();
                    for (i, line) in text.lines().enumerate() {
                        let t = line.trim();
                        if t.is_empty() || t.starts_with('#') {
                            continue;
                        }
                        let id: u64 = t.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("`{t}` is not a vertex id") })?;
                        out.push(*index.get(&id).ok_or(Error::UnknownVertex(id as usize))?);
                    }
                    VertexSet::from_unsorted(out)
                }
                None => g.vertices().collect(),
            };
            let m = match m {
                Some(m) => m,
                None => {
                    let c = wcol_under(g, &order, r);
                    largest_m(a.len(), c)
                        .ok_or_else(|| Error::Precondition(format!("|A| = {} is below c + 1 = {}", a.len(), c + 1)))?
                }
            };
            let res = scatter_extract(g, &order, r, &a, m)?;
            let rep = audit(g, &a, &res);
            let mut value = serde_json::to_value(&res)?;
            value["audit"] = serde_json::to_value(&rep)?;
            emit(&with_labels(value, &pg), None)?;
            Ok(rep.ok)
        }
        Command::Splitter { input, order, r, connector, cap, out } => {
            let pg = load_graph(&input)?;
            let g = &pg.graph;
            let order_file = order.as_ref().map(|p| p.display().to_string());
            let order = match order {
                Some(p) => load_order(&p, &pg)?,
                None => greedy_order(g, 2 * r),
            };
            let mut splitter = WcolSplitter { order: order.clone() };
            let mut conn = connector.build();
            let mut t = play_game(g, r, &mut splitter, conn.as_mut(), cap.unwrap_or(g.n()).max(1))?;
            t.order_file = order_file;
            let valid = replay(g, &t);
            if let Err(e) = &valid {
                eprintln!("replay failed: {e}");
            }
            log::info!("rounds {} vs wcol_2r {}", t.rounds_used, wcol_under(g, &order, 2 * r));
            emit(&with_labels(serde_json::to_value(&t)?, &pg), out.as_deref())?;
            Ok(valid.is_ok())
        }
        Command::Augment { input, r, out } => {
            let pg = load_graph(&input)?;
            let aug = build_augmented(&pg.graph)?;
            fs::create_dir_all(&out)?;
            let base: Vec<(usize, usize)> = pg.graph.edges().collect();
            // remapped inputs keep their labels, so the header would not apply
            let header = if pg.is_identity() { format!("p {} {}\n", aug.graph.n(), aug.graph.m()) } else { String::new() };
            let h = header + &edge_list_with_labels(&pg, &base) + "# added\n" + &edge_list_with_labels(&pg, &aug.added);
            fs::write(out.join("h.el"), h)?;
            let tree = extract_spanning_tree(&aug);
            if let Ok(t) = &tree {
                emit(&with_labels(serde_json::to_value(t)?, &pg), Some(&out.join("tree.json")))?;
            }
            emit(&with_labels(json!({ "charges": aug.charge_entries() }), &pg), Some(&out.join("charges.json")))?;
            let rep = verify_claims(&aug, r);
            emit(&serde_json::to_value(&rep)?, Some(&out.join("claims.json")))?;
            tree?;
            Ok(rep.ok)
        }
        Command::VerifyClaims { input, r } => {
            let pg = load_graph(&input)?;
            let rep = verify_claims(&build_augmented(&pg.graph)?, r);
            emit(&serde_json::to_value(&rep)?, None)?;
            Ok(rep.ok)
        }
        Command::Suite { criteria, seed, out } => {
            let ids: Vec<u8> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria };
            let report = run_suite(&ids, seed);
            for c in &report.criteria {
                println!("{}", c.line());
            }
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("report.md"), report.to_markdown())?;
                emit(&serde_json::to_value(&report)?, Some(&dir.join("report.json")))?;
            }
            Ok(report.passed)
        }
        Command::Generate { family, size, seed, config, out } => {
            if let Some(path) = config {
                let cfg: ExperimentConfig = serde_json::from_str(&read(&path)?)?;
                cfg.validate()?;
                let dir = out.or(cfg.output.clone()).ok_or_else(|| Error::Precondition("generate --config needs --out or an output directory in the config".into()))?;
                fs::create_dir_all(&dir)?;
                for (spec, g) in generate_corpus(&cfg.corpus) {
                    fs::write(dir.join(format!("{}.el", spec.name())), header(&spec) + &write_edge_list(&g))?;
                }
                return Ok(true);
            }
            let family = family.ok_or_else(|| Error::Precondition("generate needs --family or --config".into()))?;
            let spec = GraphSpec::new(family, size, seed);
            let text = header(&spec) + &write_edge_list(&spec.build());
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn header(spec: &GraphSpec) -> String {
    format!("# {} family={:?} size={} seed={}\n", spec.name(), spec.family, spec.size, spec.seed)
}
