mod output;
mod schemas;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use reflex_core::awareness::{
    graph_from_tree, informational_equilibrium_with_cap, minimize, reflexion_ranks, BeliefGraph,
};
use reflex_core::dynamics::{dynamics_registry, DynamicsConfig, DynamicsGame, StepSchedule, TieBreak};
use reflex_core::game::{make_builtin, pure_nash_with_cap, response, BuiltinGame, ContinuousGame, DEFAULT_ENUM_CAP};
use reflex_core::io;
use reflex_core::puzzle::{run_sum_product, Announcement, NamedBy, Transcript};
use reflex_core::strategic::{
    fit_grid, hierarchy_strategies, level_distribution, rank0_registry, rank_game, reflexive_partition_equilibrium,
    BeliefKind, BeliefModel, ModelFamily, ParamGrid, PartitionAwareness, Rank0Model, Rank0Rule, RankSpec,
};
use reflex_core::{Error, Game, MixedStrategy, Profile, ResponseModel};
use serde::Serialize;

use output::*;

#[derive(Parser)]
#[command(name = "reflex", version, about = "Solvers and simulators for reflexive games")]
struct Cli {
    /// Print the JSON schemas of every input and output format and exit.
    #[arg(long)]
    schemas: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pure Nash equilibria by enumeration.
    Nash(NashArgs),
    /// Quantal best response of every player.
    Qbr(QbrArgs),
    /// Level-k strategies by rank.
    LevelK(HierArgs),
    /// Cognitive-hierarchy strategies (best response unless --response qbr).
    Ch(ChArgs),
    /// Quantal cognitive hierarchy.
    Qch(ChArgs),
    /// Reflexive-partition equilibrium.
    PartitionEq(PartitionEqArgs),
    /// The game whose strategies are reflexion ranks.
    RankGame(RankGameArgs),
    /// Informational equilibria of a belief graph.
    InfoEq(InfoEqArgs),
    /// Merge agents with identical awareness.
    Minimize(GraphArgs),
    /// Reflexion rank of every node.
    Rank(GraphArgs),
    /// Run a dynamics model.
    Dynamics(DynamicsArgs),
    /// Fictitious play.
    Fp(DynamicsArgs),
    /// Cumulative-propensity reinforcement learning.
    Reinforce(DynamicsArgs),
    /// Sum-product puzzle transcript.
    Puzzle(PuzzleArgs),
    /// Maximum-likelihood grid fit of a hierarchy model.
    Fit(FitArgs),
}

#[derive(Args, Clone)]
#[command(group(ArgGroup::new("game_source").args(["game", "builtin"]).required(true)))]
struct GameArgs {
    /// Game file.
    #[arg(long)]
    game: Option<PathBuf>,
    /// Builtin game: prisoners_dilemma, matching_pennies, p_beauty, cournot_linear.
    #[arg(long)]
    builtin: Option<String>,
    /// Builtin parameter as key=value (repeatable).
    #[arg(long = "param", value_parser = parse_kv, requires = "builtin")]
    params: Vec<(String, f64)>,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct NashArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct QbrArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    lambda: f64,
    /// Opponent mixed strategies as JSON, e.g. '[[0.5,0.5],[1,0]]'; uniform when absent.
    #[arg(long)]
    against: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Clone)]
struct ResponseArgs {
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    /// uniform, maximin, maximax or minimax-regret.
    #[arg(long, default_value = "uniform")]
    rank0: String,
    #[arg(long, value_parser = ["best", "qbr"])]
    response: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct HierArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    model: ResponseArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ChArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    model: ResponseArgs,
    #[arg(long, default_value_t = 1.5)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Spike at rank 0: mixes epsilon of rank-0 mass into the Poisson weights.
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct PartitionEqArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long, value_enum, default_value_t = AwarenessArg::Rpm)]
    awareness: AwarenessArg,
    #[arg(long, default_value = "uniform")]
    rank0: String,
    #[arg(long, value_parser = ["best", "qbr"])]
    response: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AwarenessArg {
    Rpm,
    LevelK,
}

#[derive(Args)]
struct RankGameArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    model: ResponseArgs,
    /// Cognitive-hierarchy beliefs with this Poisson rate; level-k when absent.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Clone)]
#[group(id = "graph_source", required = true, multiple = false)]
struct GraphSource {
    /// Belief graph file.
    #[arg(long, group = "graph_source")]
    graph: Option<PathBuf>,
    /// Nested belief tree file.
    #[arg(long, group = "graph_source")]
    tree: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct InfoEqArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    game: PathBuf,
    #[arg(long, default_value = "uniform")]
    rank0: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct DynamicsArgs {
    /// indicator, reflexive, cournot, fp or reinforce.
    #[arg(long)]
    model: Option<String>,
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long, conflicts_with = "harmonic")]
    gamma: Option<f64>,
    /// Step sizes min(1, c/t).
    #[arg(long)]
    harmonic: Option<f64>,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start profile, comma separated: reals for interval games, action indices otherwise.
    #[arg(long, value_delimiter = ',')]
    x0: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = TieArg::Lowest)]
    tie_break: TieArg,
    /// Initial propensity for reinforcement learning.
    #[arg(long, default_value_t = 1.0)]
    q0: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TieArg {
    Lowest,
    Random,
}

#[derive(Args)]
struct PuzzleArgs {
    #[arg(long, default_value_t = 9)]
    max: u32,
    /// The sum-knower answers first and the product-knower hears it.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Observed action counts file.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = BeliefArg::Ch)]
    belief: BeliefArg,
    /// Fit a quantal response precision.
    #[arg(long)]
    quantal: bool,
    /// Fit a spike-Poisson rank distribution.
    #[arg(long)]
    spike: bool,
    #[arg(long, default_value_t = 4)]
    max_rank: usize,
    #[arg(long, default_value = "uniform")]
    rank0: String,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2,2.5,3")]
    tau: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
    lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3")]
    epsilon: Vec<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BeliefArg {
    LevelK,
    Ch,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_size_error() { 3 } else { 2 }, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse_kv(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.to_string(), v))
}

fn enum_cap() -> CliResult<u64> {
    match std::env::var("REFLEX_MAX_ENUM") {
        Ok(v) => v.trim().parse().map_err(|_| input_error(format!("REFLEX_MAX_ENUM must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: reflex_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

enum LoadedGame {
    Finite(Game),
    Continuous(ContinuousGame),
}

fn load_any_game(args: &GameArgs) -> CliResult<LoadedGame> {
    if let Some(path) = &args.game {
        return Ok(match with_path(path, io::parse_any_game(&read(path)?))? {
            io::AnyGame::Finite(g) => LoadedGame::Finite(g),
            io::AnyGame::Continuous(g) => LoadedGame::Continuous(g),
        });
    }
    let name = args.builtin.as_deref().expect("clap requires a game source");
    let params: BTreeMap<String, f64> = args.params.iter().cloned().collect();
    Ok(match make_builtin(name, &params)? {
        BuiltinGame::Finite(g) => LoadedGame::Finite(g),
        BuiltinGame::Continuous(g) => LoadedGame::Continuous(g),
    })
}

fn load_game(args: &GameArgs) -> CliResult<Game> {
    match load_any_game(args)? {
        LoadedGame::Finite(g) => Ok(g),
        LoadedGame::Continuous(_) => Err(input_error("this subcommand needs a finite game")),
    }
}

fn load_graph(src: &GraphSource) -> CliResult<BeliefGraph> {
    if let Some(path) = &src.graph {
        return with_path(path, io::parse_belief_graph(&read(path)?));
    }
    let path = src.tree.as_ref().expect("clap requires a graph source");
    let tree = with_path(path, io::parse_belief_tree(&read(path)?))?;
    with_path(path, graph_from_tree(&tree))
}

fn rank0_rule(name: &str) -> CliResult<Arc<dyn Rank0Rule>> {
    Ok(rank0_registry().get(&name.replace('_', "-"))?)
}

fn response_model(kind: Option<&str>, lambda: Option<f64>) -> CliResult<ResponseModel> {
    let model = match (kind, lambda) {
        (Some("qbr"), Some(lambda)) | (None, Some(lambda)) => ResponseModel::Qbr { lambda },
        (Some("qbr"), None) => return Err(input_error("--response qbr needs --lambda")),
        (Some("best"), Some(_)) => return Err(input_error("--lambda applies only to --response qbr")),
        _ => ResponseModel::Best,
    };
    model.validate()?;
    Ok(model)
}

fn strategy_out(game: &Game, player: usize, s: &MixedStrategy) -> StrategyOut {
    StrategyOut { player: player + 1, actions: game.labels(player).to_vec(), probs: s.probs().to_vec() }
}

fn strategies_out(game: &Game, s: &[MixedStrategy]) -> Vec<StrategyOut> {
    s.iter().enumerate().map(|(j, m)| strategy_out(game, j, m)).collect()
}

fn profile_out(game: &Game, p: &[usize]) -> ProfileOut {
    ProfileOut { profile: p.iter().enumerate().map(|(i, &a)| game.label(i, a).to_string()).collect() }
}

fn emit_json<T: Serialize>(value: &T, out: &OutArgs) -> CliResult<()> {
    if matches!(out.format, Some(Format::Csv) | Some(Format::Table)) {
        return Err(input_error("this subcommand only writes JSON"));
    }
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    text.push('\n');
    emit_text(&text, out)
}

fn emit_text(text: &str, out: &OutArgs) -> CliResult<()> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Nash(a) => {
            let game = load_game(&a.game)?;
            let eqs = pure_nash_with_cap(&game, enum_cap()?)?;
            let out: Vec<ProfileOut> = eqs.iter().map(|p| profile_out(&game, p)).collect();
            emit_json(&out, &a.out)
        }
        Cmd::Qbr(a) => {
            let game = load_game(&a.game)?;
            let opp = match &a.against {
                None => (0..game.n_players()).map(|i| MixedStrategy::uniform(game.n_actions(i))).collect(),
                Some(text) => parse_against(&game, text)?,
            };
            let profile = Profile::mixed(opp);
            let model = ResponseModel::Qbr { lambda: a.lambda };
            let s = (0..game.n_players()).map(|i| response(&game, &profile, i, model)).collect::<Result<Vec<_>, _>>()?;
            emit_json(&QbrOut { lambda: a.lambda, strategies: strategies_out(&game, &s) }, &a.out)
        }
        Cmd::LevelK(a) => {
            let game = load_game(&a.game)?;
            let response = response_model(a.model.response.as_deref(), a.model.lambda)?;
            let out = hierarchy(&game, "level-k", &a.model, response, &BeliefModel::LevelK, None)?;
            emit_json(&out, &a.out)
        }
        Cmd::Ch(a) => {
            let response = response_model(a.model.response.as_deref(), a.model.lambda)?;
            ch(a, response, "ch")
        }
        Cmd::Qch(a) => {
            if a.model.response.as_deref() == Some("best") {
                return Err(input_error("qch always uses --response qbr"));
            }
            let lambda = a.model.lambda.ok_or_else(|| input_error("qch needs --lambda"))?;
            let response = response_model(Some("qbr"), Some(lambda))?;
            ch(a, response, "qch")
        }
        Cmd::PartitionEq(a) => {
            let game = load_game(&a.game)?;
            let partition = with_path(&a.partition, io::parse_partition(&read(&a.partition)?, game.n_players()))?;
            let response = response_model(a.response.as_deref(), a.lambda)?;
            let rule = rank0_rule(&a.rank0)?;
            let awareness = match a.awareness {
                AwarenessArg::Rpm => PartitionAwareness::RpmStyle,
                AwarenessArg::LevelK => PartitionAwareness::LevelKStyle,
            };
            let s = reflexive_partition_equilibrium(&game, &partition, awareness, rule.as_ref(), response)?;
            let strategies = s
                .iter()
                .enumerate()
                .map(|(j, m)| PartitionStrategyOut { rank: partition.rank_of(j), strategy: strategy_out(&game, j, m) })
                .collect();
            emit_json(&PartitionEqOut { awareness, response, rank0: rule.name().to_string(), strategies }, &a.out)
        }
        Cmd::RankGame(a) => {
            let game = load_game(&a.game)?;
            let response = response_model(a.model.response.as_deref(), a.model.lambda)?;
            let belief = match a.tau {
                None => BeliefModel::LevelK,
                Some(tau) => BeliefModel::Ch { dist: level_distribution(RankSpec::Poisson { tau }, a.model.max_rank)?, alpha: a.alpha },
            };
            let rule = rank0_rule(&a.model.rank0)?;
            let rg = rank_game(&game, a.model.max_rank, &belief, rule.as_ref(), response)?;
            let nash = pure_nash_with_cap(&rg, enum_cap()?)?.iter().map(|p| profile_out(&rg, p)).collect();
            emit_json(&RankGameOut { game: io::game_to_value(&rg), nash }, &a.out)
        }
        Cmd::InfoEq(a) => {
            let graph = load_graph(&a.source)?;
            let game = with_path(&a.game, io::parse_game(&read(&a.game)?))?;
            let rule = rank0_rule(&a.rank0)?;
            let eq = informational_equilibrium_with_cap(&graph, &game, rule.as_ref(), enum_cap()?)?;
            let out: Vec<InfoEqOut> = eq
                .assignments
                .iter()
                .map(|asg| InfoEqOut {
                    profile: asg
                        .root_actions
                        .iter()
                        .enumerate()
                        .filter_map(|(i, a)| a.map(|a| game.label(i, a).to_string()))
                        .collect(),
                    nodes: graph
                        .nodes()
                        .iter()
                        .zip(&asg.node_actions)
                        .map(|(v, &a)| (v.id.clone(), game.label(v.owner, a).to_string()))
                        .collect(),
                })
                .collect();
            emit_json(&out, &a.out)
        }
        Cmd::Minimize(a) => {
            let graph = load_graph(&a.source)?;
            let m = minimize(&graph)?;
            let mapping = graph
                .nodes()
                .iter()
                .zip(&m.mapping)
                .map(|(v, &t)| (v.id.clone(), m.graph.node(t).id.clone()))
                .collect();
            let complexity = m.graph.len();
            emit_json(&MinimizeOut { graph: io::belief_graph_to_value(&m.graph), mapping, complexity }, &a.out)
        }
        Cmd::Rank(a) => {
            let graph = load_graph(&a.source)?;
            let ranks = reflexion_ranks(&graph);
            let nodes = graph.nodes().iter().zip(&ranks).map(|(v, r)| (v.id.clone(), *r)).collect();
            let roots = graph
                .roots()
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.map(|r| ((i + 1).to_string(), ranks[r])))
                .collect();
            emit_json(&RankReport { nodes, roots }, &a.out)
        }
        Cmd::Dynamics(a) => {
            let model = a.model.clone().ok_or_else(|| input_error("dynamics needs --model"))?;
            dynamics(a, &model)
        }
        Cmd::Fp(a) => fixed_model(a, "fp"),
        Cmd::Reinforce(a) => fixed_model(a, "reinforce"),
        Cmd::Puzzle(a) => {
            let mode = if a.sequential { Announcement::Sequential } else { Announcement::Simultaneous };
            let transcript = run_sum_product(a.max, mode)?;
            match a.out.format {
                Some(Format::Table) => emit_text(&puzzle_table(&transcript), &a.out),
                Some(Format::Csv) => Err(input_error("puzzle writes json or table")),
                _ => {
                    let last = transcript
                        .outcomes
                        .iter()
                        .filter(|o| matches!(o.named_by, NamedBy::Sum | NamedBy::Both))
                        .map(|o| o.dont_know_rounds)
                        .max();
                    let witnesses = transcript
                        .outcomes
                        .iter()
                        .filter(|o| last.is_some_and(|k| o.sum_knower_after(k)))
                        .cloned()
                        .collect();
                    emit_json(&PuzzleOut { transcript, witnesses }, &a.out)
                }
            }
        }
        Cmd::Fit(a) => {
            let game = load_game(&a.game)?;
            let counts = with_path(&a.data, io::parse_counts(&read(&a.data)?, &game))?;
            let rank0: Rank0Model = a.rank0.parse()?;
            let family = ModelFamily {
                belief: match a.belief {
                    BeliefArg::LevelK => BeliefKind::LevelK,
                    BeliefArg::Ch => BeliefKind::Ch,
                },
                quantal: a.quantal,
                spike: a.spike,
                max_rank: a.max_rank,
                rank0,
            };
            let grid = ParamGrid { tau: a.tau, lambda: a.lambda, alpha: a.alpha, epsilon: a.epsilon };
            let fit = fit_grid(&game, &counts, &family, &grid)?;
            let predicted = strategies_out(&game, &family.predict(&game, &fit.params)?);
            emit_json(
                &FitOut { params: fit.params, log_likelihood: fit.log_likelihood, evaluated: fit.evaluated, predicted },
                &a.out,
            )
        }
    }
}

fn parse_against(game: &Game, text: &str) -> CliResult<Vec<MixedStrategy>> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text).map_err(|e| input_error(format!("--against: {e}")))?;
    if rows.len() != game.n_players() {
        return Err(input_error(format!("--against needs {} strategies, got {}", game.n_players(), rows.len())));
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != game.n_actions(i) {
                return Err(input_error(format!("--against[{i}] needs {} entries, got {}", game.n_actions(i), r.len())));
            }
            MixedStrategy::new(r).map_err(|e| input_error(format!("--against[{i}]: {e}")))
        })
        .collect()
}

fn hierarchy(
    game: &Game,
    name: &str,
    args: &ResponseArgs,
    response: ResponseModel,
    belief: &BeliefModel,
    dist: Option<&reflex_core::strategic::RankDistribution>,
) -> CliResult<HierarchyOut> {
    let rule = rank0_rule(&args.rank0)?;
    let sol = hierarchy_strategies(game, args.max_rank, belief, rule.as_ref(), response)?;
    let ranks = sol
        .by_rank
        .iter()
        .enumerate()
        .map(|(rank, s)| RankOut { rank, strategies: strategies_out(game, s) })
        .collect();
    let population = match dist {
        Some(d) => Some(strategies_out(game, &sol.population_mixture(d)?)),
        None => None,
    };
    Ok(HierarchyOut {
        model: name.to_string(),
        response,
        rank0: sol.rank0,
        max_rank: args.max_rank,
        distribution: dist.map(|d| d.weights().to_vec()),
        ranks,
        population,
    })
}

fn ch(a: ChArgs, response: ResponseModel, name: &str) -> CliResult<()> {
    let game = load_game(&a.game)?;
    let spec = match a.epsilon {
        Some(epsilon) => RankSpec::SpikePoisson { tau: a.tau, epsilon },
        None => RankSpec::Poisson { tau: a.tau },
    };
    let dist = level_distribution(spec, a.model.max_rank)?;
    let belief = BeliefModel::Ch { dist: dist.clone(), alpha: a.alpha };
    let out = hierarchy(&game, name, &a.model, response, &belief, Some(&dist))?;
    emit_json(&out, &a.out)
}

fn fixed_model(a: DynamicsArgs, model: &str) -> CliResult<()> {
    if a.model.as_deref().is_some_and(|m| m != model) {
        return Err(input_error(format!("`{model}` runs only the {model} model")));
    }
    dynamics(a, model)
}

fn dynamics(a: DynamicsArgs, model_name: &str) -> CliResult<()> {
    let model = dynamics_registry().get(model_name)?;
    let game = match load_any_game(&a.game)? {
        LoadedGame::Finite(g) => DynamicsGame::Finite(g),
        LoadedGame::Continuous(g) => DynamicsGame::Continuous(g),
    };
    let n = game.n_players();
    let mut cfg = DynamicsConfig::new(game);
    if let Some(path) = &a.partition {
        cfg.partition = Some(with_path(path, io::parse_partition(&read(path)?, n))?);
    }
    cfg.schedule = match (a.gamma, a.harmonic) {
        (Some(gamma), _) => StepSchedule::Constant { gamma },
        (None, Some(c)) => StepSchedule::Harmonic { c },
        (None, None) => StepSchedule::default(),
    };
    cfg.schedule.validate()?;
    cfg.steps = a.steps;
    cfg.seed = a.seed;
    cfg.x0 = a.x0.clone();
    cfg.q0 = a.q0;
    cfg.tie_break = match a.tie_break {
        TieArg::Lowest => TieBreak::LowestIndex,
        TieArg::Random => TieBreak::UniformRandom { seed: a.seed },
    };
    let result = model.run(&cfg)?;
    let csv = match a.out.format {
        Some(Format::Csv) => true,
        Some(Format::Json) => false,
        Some(Format::Table) => return Err(input_error("dynamics writes json or csv")),
        None => a.out.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv")),
    };
    if csv {
        return emit_text(&result.trajectory.to_csv(), &a.out);
    }
    let out = DynamicsOut {
        model: result.model,
        seed: a.seed,
        steps: a.steps,
        trajectory: result.trajectory,
        frequencies: result.frequencies,
        shifts: result.shifts,
    };
    emit_json(&out, &a.out)
}

fn puzzle_table(t: &Transcript) -> String {
    let mut s = String::new();
    let fmt_pairs = |ps: &[(u32, u32)]| ps.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "max {}  mode {:?}  rounds {}", t.max_value, t.mode, t.rounds.len());
    let _ = writeln!(s, "{:>5}  {:>10}  {:>8}  {:>12}  {:>9}", "round", "candidates", "sum knows", "product knows", "survivors");
    for r in &t.rounds {
        let sk = r.sum_knows.iter().filter(|&&k| k).count();
        let pk = r.product_knows.iter().filter(|&&k| k).count();
        let _ = writeln!(s, "{:>5}  {:>10}  {:>8}  {:>12}  {:>9}", r.round, r.candidates.len(), sk, pk, r.survivors.len());
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "{:>7}  {:>10}  {:>8}  {:>5}", "pair", "dont know", "named by", "round");
    for o in &t.outcomes {
        let named = match o.named_by {
            NamedBy::Sum => "sum",
            NamedBy::Product => "product",
            NamedBy::Both => "both",
            NamedBy::Nobody => "nobody",
        };
        let round = o.named_round.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:>7}  {:>10}  {:>8}  {:>5}", fmt_pairs(&[o.pair]), o.dont_know_rounds, named, round);
    }
    if let Some(last) = t.rounds.last() {
        if !last.survivors.is_empty() {
            let _ = writeln!(s, "\nnever resolved: {}", fmt_pairs(&last.survivors));
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if cli.schemas {
        println!("{}", serde_json::to_string_pretty(&schemas::all()).expect("static schemas serialize"));
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = cli.cmd else {
        use clap::CommandFactory;
        let _ = Cli::command().print_help();
        return ExitCode::from(2);
    };
    match run(cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
