use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lexgames::gen::{random_game, rng, GameParams};
use lexgames::graph::{
    chain_graph, directed_sum, lex_product, loop_graph, parse_graph, tensor, write_graph,
};
use lexgames::reductions::{
    chain_reduction, double_map, lasso_image, limit_collapse, op_max, op_union, successor_step,
};
use lexgames::solver::{oracle_solve, verify_strategy, AutoCache, LiftingTable};
use lexgames::universal::{
    power_graph, power_graph_size, signature_graph, signature_size, wrap_top, PowerLevel,
};
use lexgames::verify::{
    check_almost_universality, check_universality, satisfies_bounded, satisfies_exact,
    UniversalityOptions,
};
use lexgames::{
    Colour, ColourFamily, Error, Game, LassoWord, Machine, ObjectiveExpr, OrderedGraph, Ordinal,
    Player,
};

/// Version of the `--format json` documents.
const JSON_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "lexgames",
    version,
    about = "Lexicographic objectives, universal graphs and games"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the enumeration and sweep commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 200_000)]
    vertex_budget: u128,
    #[arg(long, global = true, default_value_t = 1 << 20)]
    enumeration_budget: u128,
    #[arg(long, global = true, default_value_t = 1 << 20)]
    strategy_budget: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a lasso word belongs to an objective.
    Member { objective: String, lasso: String },
    /// Build a graph and write it in the graph text format.
    Build {
        #[command(subcommand)]
        kind: Build,
        /// Write the graph here instead of standard output.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Check(Check),
    /// Solve a game for Eve by progress-measure lifting.
    Solve(SolveArgs),
    /// Build prefix-function machines and map lasso words.
    Reduce {
        #[command(subcommand)]
        op: Reduce,
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Subcommand)]
enum Build {
    /// Signature graph for MaxParity(alpha).
    Signature {
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        kappa: usize,
    },
    /// Power graph from a spec file of `level <λ> loop|chain <k>|file <path>`
    /// lines and an optional `beta <n>` line.
    Power {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec file's `beta` line.
        #[arg(long)]
        beta: Option<usize>,
    },
    /// One vertex with a loop of every colour.
    Loop {
        #[arg(long)]
        class: String,
    },
    /// Descending chain of `k` vertices.
    Chain {
        #[arg(long)]
        class: String,
        #[arg(long)]
        k: usize,
    },
    /// Directed sum; later files are the higher parts.
    Sum {
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
    },
    /// Directed sum of `k` copies.
    Tensor {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Lexicographic product; `high` carries the higher colours.
    Lexprod { low: PathBuf, high: PathBuf },
    /// ⊤-augmentation followed by `k` copies.
    Wrap {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Does every infinite path of the graph satisfy the objective?
    Satisfies {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        objective: String,
        /// Search closed walks up to this length instead of using the exact criteria.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Does every satisfying graph on `size` vertices map into the graph?
    Universality {
        #[arg(long)]
        universal: PathBuf,
        #[arg(long)]
        objective: String,
        /// Colours of the enumerated graphs, e.g. `0,1,2` or `0:1,0:2`.
        #[arg(long)]
        colours: String,
        #[arg(long)]
        size: usize,
        /// Only some vertex's reachable cone has to map in.
        #[arg(long)]
        almost: bool,
        #[arg(long)]
        bound: Option<usize>,
        /// Directory for the failing graphs.
        #[arg(long)]
        failures: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    objective: String,
    /// Universal graph to lift into.
    #[arg(long, conflicts_with = "auto")]
    universal: Option<PathBuf>,
    /// Build the universal graph from the objective (the default).
    #[arg(long)]
    auto: bool,
    /// Cross-check against the brute-force solver.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Reduce {
    /// Pointwise maximum: the intersection of the coBüchi sets.
    Max {
        #[arg(short)]
        f: PathBuf,
        #[arg(short)]
        g: PathBuf,
    },
    /// The union of the coBüchi sets.
    Union {
        #[arg(short)]
        f: PathBuf,
        #[arg(short)]
        g: PathBuf,
    },
    /// `max(union(small, next), big)` for `big ≤ small`.
    Step {
        #[arg(long)]
        small: PathBuf,
        #[arg(long)]
        big: PathBuf,
        #[arg(long)]
        next: PathBuf,
    },
    /// Priority machine for a decreasing chain `f_0 ≥ f_1 ≥ …`.
    Chain {
        #[arg(required = true)]
        machines: Vec<PathBuf>,
    },
    /// Output word of a machine along a lasso.
    Image {
        #[arg(short)]
        f: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Doubling map from ω-Büchi to min-parity.
    Double {
        #[arg(long)]
        word: String,
    },
    /// Rename the finitely many letters at `alpha` to the ordinals `gammas`.
    Collapse {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alpha: String,
        /// Comma-separated, strictly increasing. Defaults to `0,2,4,…`.
        #[arg(long)]
        gammas: Option<String>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Random sinkless game, seeded by `--seed`.
    Game {
        #[arg(long)]
        objective: String,
        /// Defaults to the objective's colours.
        #[arg(long)]
        colours: Option<String>,
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 8)]
        edges: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

/// What a command prints: a text report, a JSON document, and whether the
/// property it checked held.
struct Report {
    passed: bool,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            passed: true,
            text,
            json,
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<OrderedGraph> {
    parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_machine(path: &Path) -> anyhow::Result<Machine> {
    Machine::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn objective(s: &str) -> anyhow::Result<ObjectiveExpr> {
    s.parse().with_context(|| format!("objective `{s}`"))
}

fn lasso(s: &str) -> anyhow::Result<LassoWord> {
    s.parse().with_context(|| format!("lasso `{s}`"))
}

fn ordinal(s: &str) -> anyhow::Result<Ordinal> {
    s.trim().parse().with_context(|| format!("ordinal `{s}`"))
}

fn colour_family(spec: &str) -> anyhow::Result<ColourFamily> {
    let mut family = ColourFamily::new();
    for c in spec.split([',', ' ']).filter(|s| !s.is_empty()) {
        family.insert(
            &c.parse::<Colour>()
                .with_context(|| format!("colour `{c}`"))?,
        );
    }
    if family.is_empty() {
        bail!("empty colour list");
    }
    Ok(family)
}

fn family_text(family: &ColourFamily) -> String {
    family
        .colours()
        .iter()
        .map(Colour::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn vertex_budget(cli: &Cli, what: &'static str, needed: u128) -> anyhow::Result<()> {
    if needed > cli.vertex_budget {
        return Err(Error::Budget {
            what,
            needed,
            budget: cli.vertex_budget,
        }
        .into());
    }
    Ok(())
}

/// Writes an artifact to `out`, or returns it for printing.
fn emit(
    out: Option<&Path>,
    artifact: String,
    what: &str,
    summary: String,
) -> anyhow::Result<Report> {
    let json = json!({ "kind": what, "summary": summary, "artifact": artifact });
    let text = match out {
        Some(path) => {
            fs::write(path, &artifact).with_context(|| format!("writing {}", path.display()))?;
            format!("{summary}\nwrote {}\n", path.display())
        }
        None => artifact,
    };
    Ok(Report::ok(text, json))
}

fn member(obj: &str, word: &str) -> anyhow::Result<Report> {
    let w = objective(obj)?;
    let x = lasso(word)?;
    let v = w.member(&x)?;
    let verdict = if v.accepted { "accepted" } else { "rejected" };
    Ok(Report::ok(
        format!("{verdict} witness={}\n", v.witness_index),
        json!({ "accepted": v.accepted, "witness_index": v.witness_index, "objective": w, "lasso": x.to_string() }),
    ))
}

fn power_spec(cli: &Cli, spec: &Path, beta: Option<usize>) -> anyhow::Result<OrderedGraph> {
    let text = read(spec)?;
    let dir = spec.parent().unwrap_or(Path::new("."));
    let mut levels = Vec::new();
    let mut file_beta = None;
    for (no, line) in text.lines().enumerate() {
        let at = || format!("{}:{}", spec.display(), no + 1);
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            [w, ..] if w.starts_with('#') => {}
            ["beta", b] => file_beta = Some(b.parse::<usize>().with_context(at)?),
            ["level", index, rest @ ..] => {
                let index = ordinal(index).with_context(at)?;
                let family = ColourFamily::singletons([index.clone()]);
                let base = match rest {
                    ["loop"] => loop_graph(&family),
                    ["chain", k] => {
                        chain_graph(&family, k.parse().with_context(at)?).with_context(at)?
                    }
                    ["file", path] => {
                        let g = read_graph(&dir.join(path)).with_context(at)?;
                        if g.family().indices().any(|i| *i != index) {
                            bail!("{}: base graph uses colours outside level {index}", at());
                        }
                        g
                    }
                    _ => bail!("{}: expected `loop`, `chain <k>` or `file <path>`", at()),
                };
                levels.push(PowerLevel::new(base).with_context(at)?);
            }
            _ => bail!("{}: unrecognised line `{line}`", at()),
        }
    }
    let beta = beta.or(file_beta).ok_or_else(|| anyhow!("no beta given"))?;
    let sizes: Vec<usize> = levels.iter().map(|l| l.base.len()).collect();
    vertex_budget(cli, "power graph vertices", power_graph_size(&sizes, beta))?;
    Ok(power_graph(levels, beta)?.graph)
}

fn build(cli: &Cli, kind: &Build, out: Option<&Path>) -> anyhow::Result<Report> {
    let (g, what) = match kind {
        Build::Signature { alpha, kappa } => {
            vertex_budget(
                cli,
                "signature graph vertices",
                signature_size(*alpha, *kappa),
            )?;
            (
                signature_graph(*alpha, *kappa)?,
                format!("signature graph alpha={alpha} kappa={kappa}"),
            )
        }
        Build::Power { spec, beta } => (power_spec(cli, spec, *beta)?, "power graph".to_string()),
        Build::Loop { class } => (loop_graph(&colour_family(class)?), "loop graph".to_string()),
        Build::Chain { class, k } => {
            vertex_budget(cli, "chain vertices", *k as u128)?;
            (
                chain_graph(&colour_family(class)?, *k)?,
                format!("chain k={k}"),
            )
        }
        Build::Sum { graphs } => {
            let parts = graphs
                .iter()
                .map(|p| read_graph(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            vertex_budget(
                cli,
                "sum vertices",
                parts.iter().map(|g| g.len() as u128).sum(),
            )?;
            (
                directed_sum(&parts)?,
                format!("directed sum of {} parts", parts.len()),
            )
        }
        Build::Tensor { graph, k } => {
            let g = read_graph(graph)?;
            vertex_budget(cli, "tensor vertices", g.len() as u128 * *k as u128)?;
            (tensor(&g, *k)?, format!("{k} copies"))
        }
        Build::Lexprod { low, high } => {
            let (g0, g1) = (read_graph(low)?, read_graph(high)?);
            vertex_budget(cli, "product vertices", g0.len() as u128 * g1.len() as u128)?;
            (lex_product(&g0, &g1)?, "lexicographic product".to_string())
        }
        Build::Wrap { graph, k } => {
            let g = read_graph(graph)?;
            vertex_budget(cli, "wrapped vertices", (g.len() as u128 + 1) * *k as u128)?;
            (wrap_top(&g, *k)?, format!("top-augmented, {k} copies"))
        }
    };
    let summary = format!("{what}: {} vertices, {} edges", g.len(), g.num_edges());
    emit(out, write_graph(&g), "graph", summary)
}

fn check(cli: &Cli, c: &Check) -> anyhow::Result<Report> {
    match c {
        Check::Satisfies {
            graph,
            objective: obj,
            bound,
        } => {
            let g = read_graph(graph)?;
            let w = objective(obj)?;
            let r = match bound {
                Some(l) => satisfies_bounded(&g, &w, *l)?,
                None => satisfies_exact(&g, &w)?,
            };
            let mode = bound.map_or("exact cycle criteria".to_string(), |l| {
                format!("closed walks up to length {l}")
            });
            let mut text = format!(
                "satisfaction of {w} by a {}-vertex graph ({mode})\n",
                g.len()
            );
            match &r.witness {
                None => text.push_str("satisfied\n"),
                Some(wit) => {
                    text.push_str(&format!(
                        "violated: lasso {} along cycle {}\n",
                        wit.lasso,
                        wit.cycle.join(" ")
                    ));
                }
            }
            Ok(Report {
                passed: r.satisfied,
                text,
                json: json!({
                    "check": "satisfies",
                    "objective": w,
                    "mode": if bound.is_some() { "bounded" } else { "exact" },
                    "bound": bound,
                    "satisfied": r.satisfied,
                    "witness": r.witness.as_ref().map(|wit| json!({ "lasso": wit.lasso.to_string(), "cycle": wit.cycle })),
                }),
            })
        }
        Check::Universality {
            universal,
            objective: obj,
            colours,
            size,
            almost,
            bound,
            failures,
        } => {
            let u = read_graph(universal)?;
            let w = objective(obj)?;
            let family = colour_family(colours)?;
            let opts = UniversalityOptions {
                budget: cli.enumeration_budget,
                bound: *bound,
                ..UniversalityOptions::default()
            };
            let r = if *almost {
                check_almost_universality(&u, &w, &family, *size, &opts)?
            } else {
                check_universality(&u, &w, &family, *size, &opts)?
            };
            let name = if *almost {
                "almost-universality"
            } else {
                "universality"
            };
            let mut text = format!(
                "{name} instance: objective {w}, colours {}, n={size}, {}-vertex graph\n\
                 checked {} graphs, {} satisfying, {} failures\n",
                family_text(&family),
                u.len(),
                r.checked_count,
                r.satisfying_count,
                r.failure_count
            );
            if let Some(dir) = failures.as_ref().filter(|_| !r.passed()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for f in &r.failures {
                    let path = dir.join(format!("failure-{}.graph", f.index));
                    fs::write(&path, &f.graph)
                        .with_context(|| format!("writing {}", path.display()))?;
                    text.push_str(&format!("wrote {}\n", path.display()));
                }
            }
            text.push_str(if r.passed() { "PASS\n" } else { "FAIL\n" });
            Ok(Report {
                passed: r.passed(),
                text,
                json: json!({
                    "check": name,
                    "objective": w,
                    "colours": family_text(&family),
                    "size": size,
                    "universal_vertices": u.len(),
                    "report": r,
                }),
            })
        }
    }
}

fn solve(cli: &Cli, a: &SolveArgs) -> anyhow::Result<Report> {
    let w = objective(&a.objective)?;
    let game =
        Game::parse(&read(&a.game)?, w).with_context(|| format!("in {}", a.game.display()))?;
    let (solution, source) = match &a.universal {
        Some(path) => {
            let u = read_graph(path)?;
            let table = LiftingTable::new(&u)?;
            (
                table.solve(&game)?,
                format!("{}-vertex graph from {}", u.len(), path.display()),
            )
        }
        None => {
            let table = AutoCache::new().table(&game, cli.vertex_budget)?;
            (
                table.solve(&game)?,
                format!("automatic {}-vertex graph", table.len()),
            )
        }
    };
    let winning = solution.winning_labels(&game);
    let listed = if winning.is_empty() {
        "(none)".to_string()
    } else {
        winning.join(" ")
    };
    let mut text = format!("lifting into {source}\nwinning: {listed}\n");
    let mut strategy = Vec::new();
    for v in (0..game.len()).filter(|&v| solution.winning[v] && game.owner(v) == Player::Eve) {
        let e = &game.edges()[solution.strategy.choice[v].unwrap()];
        let colour = e
            .colour
            .as_ref()
            .map_or("eps".to_string(), Colour::to_string);
        text.push_str(&format!(
            "strategy {} {} {}\n",
            game.label(v),
            colour,
            game.label(e.dst)
        ));
        strategy.push(
            json!({ "vertex": game.label(v), "colour": colour, "target": game.label(e.dst) }),
        );
    }
    let mut passed = true;
    let mut oracle_json = Value::Null;
    if a.oracle {
        let oracle = oracle_solve(&game, cli.strategy_budget)?;
        let mut strategy_ok = true;
        for v in (0..game.len()).filter(|&v| solution.winning[v]) {
            strategy_ok &= verify_strategy(&game, &solution.strategy, v)?;
        }
        let agree = oracle == solution.winning;
        passed = agree && strategy_ok;
        text.push_str(&format!(
            "oracle: {}; strategy {}\n",
            if agree { "agrees" } else { "DISAGREES" },
            if strategy_ok {
                "wins from every winning vertex"
            } else {
                "LOSES somewhere"
            }
        ));
        oracle_json = json!({ "agrees": agree, "strategy_verified": strategy_ok });
    }
    Ok(Report {
        passed,
        text,
        json: json!({ "winning": winning, "strategy": strategy, "oracle": oracle_json }),
    })
}

fn reduce(op: &Reduce, out: Option<&Path>) -> anyhow::Result<Report> {
    let machine = |m: Machine, what: &str| {
        let summary = format!("{what}: {} states", m.num_states());
        emit(out, m.to_string(), "machine", summary)
    };
    let word = |w: LassoWord, what: &str| emit(out, format!("{w}\n"), "lasso", what.to_string());
    match op {
        Reduce::Max { f, g } => machine(op_max(&read_machine(f)?, &read_machine(g)?)?, "max"),
        Reduce::Union { f, g } => machine(op_union(&read_machine(f)?, &read_machine(g)?)?, "union"),
        Reduce::Step { small, big, next } => machine(
            successor_step(
                &read_machine(small)?,
                &read_machine(big)?,
                &read_machine(next)?,
            )?,
            "successor step",
        ),
        Reduce::Chain { machines } => {
            let chain = machines
                .iter()
                .map(|p| read_machine(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            machine(
                chain_reduction(&chain)?,
                &format!("chain of {}", chain.len()),
            )
        }
        Reduce::Image { f, word: x } => word(lasso_image(&read_machine(f)?, &lasso(x)?)?, "image"),
        Reduce::Double { word: x } => word(double_map(&lasso(x)?)?, "doubled"),
        Reduce::Collapse {
            word: x,
            alpha,
            gammas,
        } => {
            let x = lasso(x)?;
            let gammas = match gammas {
                Some(s) => s
                    .split(',')
                    .map(ordinal)
                    .collect::<anyhow::Result<Vec<_>>>()?,
                None => (0..x.spoke().len() as u64)
                    .map(|i| Ordinal::nat(2 * i))
                    .collect(),
            };
            word(limit_collapse(&x, &ordinal(alpha)?, &gammas)?, "collapsed")
        }
    }
}

fn gen(cli: &Cli, g: &Gen) -> anyhow::Result<Report> {
    let Gen::Game {
        objective: obj,
        colours,
        vertices,
        edges,
        epsilon,
    } = g;
    let w = objective(obj)?;
    let family = match colours {
        Some(spec) => colour_family(spec)?,
        None => w
            .family()
            .ok_or_else(|| anyhow!("objective {w} has infinitely many colours; pass --colours"))?,
    };
    let params = GameParams {
        max_vertices: *vertices,
        max_edges: *edges,
        epsilon_rate: *epsilon,
    };
    let game = random_game(&mut rng(cli.seed), &w, &family, &params)?;
    let text = game.to_string();
    Ok(Report::ok(
        text.clone(),
        json!({ "kind": "game", "seed": cli.seed, "artifact": text }),
    ))
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    match &cli.command {
        Command::Member { objective, lasso } => member(objective, lasso),
        Command::Build { kind, out } => build(cli, kind, out.as_deref()),
        Command::Check(c) => check(cli, c),
        Command::Solve(a) => solve(cli, a),
        Command::Reduce { op, out } => reduce(op, out.as_deref()),
        Command::Gen(g) => gen(cli, g),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::Budget { .. }) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, body) = match run(&cli) {
        Ok(r) => {
            let mut json = r.json;
            json["passed"] = r.passed.into();
            (u8::from(!r.passed), (r.text, json))
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            (code, (String::new(), json!({ "error": format!("{e:#}") })))
        }
    };
    match cli.format {
        Format::Text => print!("{}", body.0),
        Format::Json => {
            let mut json = body.1;
            json["version"] = JSON_VERSION.into();
            json["exit_code"] = code.into();
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
    }
    ExitCode::from(code)
}
