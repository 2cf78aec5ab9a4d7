//! Level-k family solvers: rank-0 behaviors, rank distributions, subjective
//! beliefs, hierarchy strategies, reflexive-partition equilibria, games of
//! ranks and likelihood fitting.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    action_utilities, argmax_set, argmin_set, expected_utility, Game, MixedStrategy, Profile, ProfileIter,
    ResponseModel,
};
use crate::registry::{Named, Registry};

/// Highest reflexion rank accepted unless a caller raises the cap.
pub const DEFAULT_MAX_RANK: usize = 20;

/// Probability floor applied before taking logs in [`log_likelihood`].
pub const LIKELIHOOD_FLOOR: f64 = 1e-10;

/// Behavior of a non-reflexive (rank 0) agent.
pub trait Rank0Rule: Named + Send + Sync {
    fn strategy(&self, game: &Game, i: usize) -> MixedStrategy;
}

/// Visits every pure profile of player `i`'s opponents; the callback gets
/// player `i`'s payoff for each of its actions against that profile.
fn for_each_opponent_profile(game: &Game, i: usize, mut f: impl FnMut(&[f64])) {
    let mut counts = game.action_counts();
    let k = counts[i];
    counts[i] = 1;
    let mut row = vec![0.0; k];
    for mut profile in ProfileIter::new(counts) {
        for (a, u) in row.iter_mut().enumerate() {
            profile[i] = a;
            *u = game.payoff(&profile, i);
        }
        f(&row);
    }
}

struct Uniform;
struct Maximin;
struct Maximax;
struct MinimaxRegret;

impl Named for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }
}
impl Rank0Rule for Uniform {
    fn strategy(&self, game: &Game, i: usize) -> MixedStrategy {
        MixedStrategy::uniform(game.n_actions(i))
    }
}

impl Named for Maximin {
    fn name(&self) -> &'static str {
        "maximin"
    }
}
impl Rank0Rule for Maximin {
    fn strategy(&self, game: &Game, i: usize) -> MixedStrategy {
        let k = game.n_actions(i);
        let mut worst = vec![f64::INFINITY; k];
        for_each_opponent_profile(game, i, |row| {
            for (w, u) in worst.iter_mut().zip(row) {
                *w = w.min(*u);
            }
        });
        MixedStrategy::uniform_over(k, &argmax_set(&worst))
    }
}

impl Named for Maximax {
    fn name(&self) -> &'static str {
        "maximax"
    }
}
impl Rank0Rule for Maximax {
    fn strategy(&self, game: &Game, i: usize) -> MixedStrategy {
        let k = game.n_actions(i);
        let mut best = vec![f64::NEG_INFINITY; k];
        for_each_opponent_profile(game, i, |row| {
            for (b, u) in best.iter_mut().zip(row) {
                *b = b.max(*u);
            }
        });
        MixedStrategy::uniform_over(k, &argmax_set(&best))
    }
}

impl Named for MinimaxRegret {
    fn name(&self) -> &'static str {
        "minimax-regret"
    }
}
impl Rank0Rule for MinimaxRegret {
    fn strategy(&self, game: &Game, i: usize) -> MixedStrategy {
        let k = game.n_actions(i);
        let mut max_regret = vec![0.0f64; k];
        for_each_opponent_profile(game, i, |row| {
            let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for (r, u) in max_regret.iter_mut().zip(row) {
                *r = r.max(top - u);
            }
        });
        MixedStrategy::uniform_over(k, &argmin_set(&max_regret))
    }
}

/// All shipped rank-0 behaviors keyed by their CLI names.
pub fn rank0_registry() -> Registry<dyn Rank0Rule> {
    let mut reg: Registry<dyn Rank0Rule> = Registry::new("rank-0 model");
    reg.register(Arc::new(Uniform))
        .register(Arc::new(Maximin))
        .register(Arc::new(Maximax))
        .register(Arc::new(MinimaxRegret));
    reg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rank0Model {
    #[default]
    Uniform,
    Maximin,
    Maximax,
    MinimaxRegret,
}

impl Rank0Model {
    pub const ALL: [Rank0Model; 4] =
        [Rank0Model::Uniform, Rank0Model::Maximin, Rank0Model::Maximax, Rank0Model::MinimaxRegret];

    pub fn name(&self) -> &'static str {
        match self {
            Rank0Model::Uniform => "uniform",
            Rank0Model::Maximin => "maximin",
            Rank0Model::Maximax => "maximax",
            Rank0Model::MinimaxRegret => "minimax-regret",
        }
    }

    pub fn rule(&self) -> Arc<dyn Rank0Rule> {
        rank0_registry().get(self.name()).expect("every variant is registered")
    }
}

impl FromStr for Rank0Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let canonical = s.replace('_', "-");
        Rank0Model::ALL.into_iter().find(|m| m.name() == canonical).ok_or_else(|| Error::UnknownName {
            kind: "rank-0 model",
            name: s.to_string(),
            known: rank0_registry().names().join(", "),
        })
    }
}

impl fmt::Display for Rank0Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rank-0 strategy of player `i` under `model`.
pub fn rank0_strategy(game: &Game, i: usize, model: Rank0Model) -> MixedStrategy {
    model.rule().strategy(game, i)
}

/// How the weights of a [`RankDistribution`] were produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RankSpec {
    Explicit,
    Poisson { tau: f64 },
    /// `epsilon` extra mass on rank 0 mixed with `(1 - epsilon)` Poisson.
    SpikePoisson { tau: f64, epsilon: f64 },
}

/// Weights `f^0..f^m` over reflexion ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDistribution {
    weights: Vec<f64>,
    spec: RankSpec,
}

impl RankDistribution {
    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("weights", "rank distribution is empty"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param("weights", format!("negative or non-finite weight in {weights:?}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("weights", format!("weights sum to {total}, not 1")));
        }
        Ok(Self { weights, spec: RankSpec::Explicit })
    }

    /// Rank distribution from a reflexive partition: `f^k = n^k / n`.
    pub fn from_partition(partition: &ReflexivePartition) -> Self {
        let n = partition.n_agents() as f64;
        let weights = partition.classes().iter().map(|c| c.len() as f64 / n).collect();
        Self { weights, spec: RankSpec::Explicit }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spec(&self) -> RankSpec {
        self.spec
    }

    pub fn max_rank(&self) -> usize {
        self.weights.len() - 1
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::param("tau", format!("must be finite and positive, got {tau}")));
    }
    Ok(())
}

fn poisson_truncated(tau: f64, m: usize) -> Vec<f64> {
    // e^{-tau} cancels in the normalization
    let mut w = Vec::with_capacity(m + 1);
    let mut term = 1.0;
    for k in 0..=m {
        if k > 0 {
            term *= tau / k as f64;
        }
        w.push(term);
    }
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Builds the rank distribution over `0..=m` described by `spec`.
///
/// Poisson weights are renormalized over the truncated support. The spiked
/// variant is the convex mixture `epsilon * delta_0 + (1 - epsilon) * poisson`.
pub fn level_distribution(spec: RankSpec, m: usize) -> Result<RankDistribution> {
    let weights = match spec {
        RankSpec::Explicit => return Err(Error::param("spec", "explicit distributions are built with RankDistribution::explicit")),
        RankSpec::Poisson { tau } => {
            check_tau(tau)?;
            poisson_truncated(tau, m)
        }
        RankSpec::SpikePoisson { tau, epsilon } => {
            check_tau(tau)?;
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(Error::param("epsilon", format!("must lie in [0, 1], got {epsilon}")));
            }
            let mut w: Vec<f64> = poisson_truncated(tau, m).into_iter().map(|x| (1.0 - epsilon) * x).collect();
            w[0] += epsilon;
            w
        }
    };
    Ok(RankDistribution { weights, spec })
}

/// Beliefs of a rank-`k` agent about opponents' ranks `0..k`.
///
/// `f^{kp} = (f^p)^alpha / sum_{l<k} (f^l)^alpha`; `alpha = 1` is the plain
/// cognitive-hierarchy truncation.
pub fn subjective_belief(dist: &RankDistribution, k: usize, alpha: f64) -> Result<RankDistribution> {
    if k == 0 {
        return Err(Error::Domain("rank-0 agents hold no beliefs about opponents' ranks".into()));
    }
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::param("alpha", format!("must be finite and >= 1, got {alpha}")));
    }
    if dist.weights.len() < k {
        return Err(Error::Domain(format!("distribution covers ranks 0..{} but rank {k} needs 0..{}", dist.max_rank(), k - 1)));
    }
    let lower = &dist.weights[..k];
    let top = lower.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return Err(Error::Domain(format!("no mass on ranks below {k}")));
    }
    let tilted: Vec<f64> = if alpha == 1.0 {
        lower.to_vec()
    } else {
        // log space so that large alpha does not underflow every weight
        lower
            .iter()
            .map(|&f| if f > 0.0 { (alpha * (f.ln() - top.ln())).exp() } else { 0.0 })
            .collect()
    };
    let z: f64 = tilted.iter().sum();
    Ok(RankDistribution { weights: tilted.into_iter().map(|x| x / z).collect(), spec: RankSpec::Explicit })
}

/// Whom a rank-k agent believes it is facing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BeliefModel {
    /// Everyone else is rank `k - 1`.
    LevelK,
    /// Opponents are a mixture of ranks `0..k` weighted by [`subjective_belief`].
    Ch { dist: RankDistribution, alpha: f64 },
}

/// Per-player, per-rank strategies of a strategic hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchySolution {
    /// Indexed `[rank][player]`.
    pub by_rank: Vec<Vec<MixedStrategy>>,
    pub belief: BeliefModel,
    pub response: ResponseModel,
    pub rank0: String,
}

impl HierarchySolution {
    pub fn strategy(&self, player: usize, rank: usize) -> &MixedStrategy {
        &self.by_rank[rank][player]
    }

    pub fn max_rank(&self) -> usize {
        self.by_rank.len() - 1
    }

    /// Population behavior `sum_k f^k s_j^k` for every player.
    pub fn population_mixture(&self, dist: &RankDistribution) -> Result<Vec<MixedStrategy>> {
        population_mixture(&self.by_rank, dist.weights())
    }
}

fn population_mixture(by_rank: &[Vec<MixedStrategy>], weights: &[f64]) -> Result<Vec<MixedStrategy>> {
    if weights.len() != by_rank.len() {
        return Err(Error::Domain(format!(
            "distribution has {} ranks but the hierarchy has {}",
            weights.len(),
            by_rank.len()
        )));
    }
    let n = by_rank[0].len();
    (0..n)
        .map(|j| {
            let parts: Vec<&MixedStrategy> = by_rank.iter().map(|r| &r[j]).collect();
            MixedStrategy::mixture(weights, &parts)
        })
        .collect()
}

/// Strategies of rank `k` given the strategies of ranks `0..k` in `lower`
/// (indexed `[rank][player]`; entries at rank `k` and above are ignored).
pub fn hierarchy_rank(
    game: &Game,
    lower: &[Vec<MixedStrategy>],
    k: usize,
    belief: &BeliefModel,
    response: ResponseModel,
) -> Result<Vec<MixedStrategy>> {
    if k == 0 || lower.len() < k {
        return Err(Error::Domain(format!("rank {k} needs strategies for ranks 0..{k}")));
    }
    let n = game.n_players();
    let opponents: Vec<MixedStrategy> = match belief {
        BeliefModel::LevelK => lower[k - 1].clone(),
        BeliefModel::Ch { dist, alpha } => {
            let sub = subjective_belief(dist, k, *alpha)?;
            population_mixture(&lower[..k], sub.weights())?
        }
    };
    let profile = Profile::mixed(opponents);
    (0..n)
        .map(|j| response.respond_to_utilities(&action_utilities(game, &profile, j)?))
        .collect()
}

/// Rank-0..=m strategies for every player, computed bottom-up.
pub fn hierarchy_strategies(
    game: &Game,
    m: usize,
    belief: &BeliefModel,
    rank0: &dyn Rank0Rule,
    response: ResponseModel,
) -> Result<HierarchySolution> {
    hierarchy_strategies_capped(game, m, belief, rank0, response, DEFAULT_MAX_RANK)
}

pub fn hierarchy_strategies_capped(
    game: &Game,
    m: usize,
    belief: &BeliefModel,
    rank0: &dyn Rank0Rule,
    response: ResponseModel,
    rank_cap: usize,
) -> Result<HierarchySolution> {
    if m > rank_cap {
        return Err(Error::param("max-rank", format!("{m} exceeds the cap of {rank_cap}")));
    }
    response.validate()?;
    if let BeliefModel::Ch { dist, .. } = belief {
        if dist.weights().len() < m {
            return Err(Error::Domain(format!(
                "rank distribution covers ranks 0..={} but max rank {m} needs at least 0..={}",
                dist.max_rank(),
                m.saturating_sub(1)
            )));
        }
    }
    let n = game.n_players();
    let mut by_rank = vec![(0..n).map(|j| rank0.strategy(game, j)).collect::<Vec<_>>()];
    for k in 1..=m {
        let next = hierarchy_rank(game, &by_rank, k, belief, response)?;
        by_rank.push(next);
    }
    Ok(HierarchySolution { by_rank, belief: belief.clone(), response, rank0: rank0.name().to_string() })
}

/// The split `N^0, ..., N^m` of agents into reflexion ranks (0-based agents).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexivePartition {
    classes: Vec<Vec<usize>>,
    #[serde(skip)]
    rank_of: Vec<usize>,
}

impl ReflexivePartition {
    pub fn new(classes: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidPartition("a partition needs at least rank class 0".into()));
        }
        let mut rank_of = vec![usize::MAX; n];
        for (k, class) in classes.iter().enumerate() {
            for &j in class {
                if j >= n {
                    return Err(Error::InvalidPartition(format!("agent {} is outside 1..={n}", j + 1)));
                }
                if rank_of[j] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("agent {} appears in more than one class", j + 1)));
                }
                rank_of[j] = k;
            }
        }
        if let Some(j) = rank_of.iter().position(|&r| r == usize::MAX) {
            return Err(Error::InvalidPartition(format!("agent {} is not assigned a rank", j + 1)));
        }
        let mut classes = classes;
        for c in &mut classes {
            c.sort_unstable();
        }
        Ok(Self { classes, rank_of })
    }

    /// Everyone at rank 0.
    pub fn all_rank0(n: usize) -> Self {
        Self::new(vec![(0..n).collect()], n).expect("trivial partition")
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn max_rank(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn n_agents(&self) -> usize {
        self.rank_of.len()
    }

    pub fn rank_of(&self, agent: usize) -> usize {
        self.rank_of[agent]
    }

    /// The partition agent `j` believes in when it reasons at rank `k`.
    ///
    /// Both styles put `j` alone at rank `k` and everybody not placed below
    /// at rank `k - 1`. `RpmStyle` keeps the true classes `N^0..N^{k-2}`;
    /// `LevelKStyle` leaves them empty.
    pub fn subjective(&self, j: usize, k: usize, style: PartitionAwareness) -> ReflexivePartition {
        let n = self.n_agents();
        let mut rank_of = vec![usize::MAX; n];
        rank_of[j] = k;
        if k >= 2 && style == PartitionAwareness::RpmStyle {
            for (p, class) in self.classes.iter().enumerate().take(k - 1) {
                for &l in class {
                    if l != j {
                        rank_of[l] = p;
                    }
                }
            }
        }
        for r in rank_of.iter_mut() {
            if *r == usize::MAX {
                *r = k.saturating_sub(1);
            }
        }
        let mut classes = vec![Vec::new(); k + 1];
        for (l, &r) in rank_of.iter().enumerate() {
            classes[r].push(l);
        }
        ReflexivePartition { classes, rank_of }
    }
}

/// Which subjective partition a rank-k agent constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionAwareness {
    /// All others are rank `k - 1`.
    LevelKStyle,
    /// Lower classes `N^0..N^{k-2}` known; the rest demoted to `k - 1`.
    RpmStyle,
}

/// Reflexive equilibrium: every agent plays its rank's response against the
/// opponents implied by its subjective partition.
pub fn reflexive_partition_equilibrium(
    game: &Game,
    partition: &ReflexivePartition,
    awareness: PartitionAwareness,
    rank0: &dyn Rank0Rule,
    response: ResponseModel,
) -> Result<Vec<MixedStrategy>> {
    if partition.n_agents() != game.n_players() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} agents, game has {}",
            partition.n_agents(),
            game.n_players()
        )));
    }
    response.validate()?;
    let mut memo: HashMap<(usize, usize), MixedStrategy> = HashMap::new();
    (0..game.n_players())
        .map(|j| phantom_strategy(game, partition, awareness, rank0, response, j, partition.rank_of(j), &mut memo))
        .collect()
}

/// Strategy of agent `j` reasoning at rank `k`. The subjective partition of a
/// rank-k reasoner depends only on `(j, k)`, so results are memoized on that.
#[allow(clippy::too_many_arguments)]
fn phantom_strategy(
    game: &Game,
    truth: &ReflexivePartition,
    awareness: PartitionAwareness,
    rank0: &dyn Rank0Rule,
    response: ResponseModel,
    j: usize,
    k: usize,
    memo: &mut HashMap<(usize, usize), MixedStrategy>,
) -> Result<MixedStrategy> {
    if let Some(s) = memo.get(&(j, k)) {
        return Ok(s.clone());
    }
    let s = if k == 0 {
        rank0.strategy(game, j)
    } else {
        let view = truth.subjective(j, k, awareness);
        let mut opp = Vec::with_capacity(game.n_players());
        for l in 0..game.n_players() {
            if l == j {
                opp.push(MixedStrategy::uniform(game.n_actions(l)));
            } else {
                opp.push(phantom_strategy(game, truth, awareness, rank0, response, l, view.rank_of(l), memo)?);
            }
        }
        response.respond_to_utilities(&action_utilities(game, &Profile::mixed(opp), j)?)?
    };
    memo.insert((j, k), s.clone());
    Ok(s)
}

/// The `(m+1) x (m+1)` game whose strategies are reflexion ranks.
pub fn rank_game(
    game: &Game,
    m: usize,
    belief: &BeliefModel,
    rank0: &dyn Rank0Rule,
    response: ResponseModel,
) -> Result<Game> {
    if game.n_players() != 2 {
        return Err(Error::Domain(format!("the game of ranks needs a 2-player base game, got {}", game.n_players())));
    }
    let sol = hierarchy_strategies(game, m, belief, rank0, response)?;
    let labels: Vec<String> = (0..=m).map(|r| format!("rank{r}")).collect();
    let mut failure = None;
    let out = Game::from_fn(vec![labels.clone(), labels], |ranks| {
        let profile = Profile::mixed(vec![sol.strategy(0, ranks[0]).clone(), sol.strategy(1, ranks[1]).clone()]);
        (0..2)
            .map(|i| {
                expected_utility(game, &profile, i).unwrap_or_else(|e| {
                    failure = Some(e);
                    0.0
                })
            })
            .collect()
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `sum_j sum_a counts[j][a] * ln(max(model[j][a], floor))`.
pub fn log_likelihood(model: &[MixedStrategy], counts: &[Vec<u64>]) -> Result<f64> {
    if model.len() != counts.len() {
        return Err(Error::InvalidProfile(format!("model covers {} players, data {}", model.len(), counts.len())));
    }
    let mut ll = 0.0;
    for (j, (s, c)) in model.iter().zip(counts).enumerate() {
        if s.len() != c.len() {
            return Err(Error::InvalidProfile(format!(
                "player {}: model has {} actions, data {}",
                j + 1,
                s.len(),
                c.len()
            )));
        }
        for (p, &n) in s.probs().iter().zip(c) {
            if n > 0 {
                ll += n as f64 * p.max(LIKELIHOOD_FLOOR).ln();
            }
        }
    }
    Ok(ll)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeliefKind {
    LevelK,
    Ch,
}

/// A parametric hierarchy model to fit. The population rank distribution is
/// always Poisson (or spiked Poisson) in `tau`; `lambda` is used when
/// `quantal`, `alpha` for `Ch`, `epsilon` when `spike`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelFamily {
    pub belief: BeliefKind,
    pub quantal: bool,
    pub spike: bool,
    pub max_rank: usize,
    pub rank0: Rank0Model,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub tau: Vec<f64>,
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
    pub epsilon: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub tau: f64,
    pub lambda: Option<f64>,
    pub alpha: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: FitParams,
    pub log_likelihood: f64,
    pub evaluated: usize,
}

impl ModelFamily {
    /// Population behavior predicted at `params`.
    pub fn predict(&self, game: &Game, params: &FitParams) -> Result<Vec<MixedStrategy>> {
        let spec = if self.spike {
            RankSpec::SpikePoisson { tau: params.tau, epsilon: params.epsilon }
        } else {
            RankSpec::Poisson { tau: params.tau }
        };
        let dist = level_distribution(spec, self.max_rank)?;
        let belief = match self.belief {
            BeliefKind::LevelK => BeliefModel::LevelK,
            BeliefKind::Ch => BeliefModel::Ch { dist: dist.clone(), alpha: params.alpha },
        };
        let response = match params.lambda {
            Some(lambda) => ResponseModel::Qbr { lambda },
            None => ResponseModel::Best,
        };
        let rule = self.rank0.rule();
        let sol = hierarchy_strategies(game, self.max_rank, &belief, rule.as_ref(), response)?;
        sol.population_mixture(&dist)
    }
}

fn sorted_axis(name: &'static str, values: &[f64], used: bool, fixed: f64) -> Result<Vec<f64>> {
    if !used {
        return Ok(vec![fixed]);
    }
    if values.is_empty() {
        return Err(Error::param(name, "grid is empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param(name, "grid contains a non-finite value"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// Exhaustive maximum-likelihood grid search. Among equally likely points the
/// lexicographically smallest `(tau, lambda, alpha, epsilon)` wins.
pub fn fit_grid(game: &Game, counts: &[Vec<u64>], family: &ModelFamily, grid: &ParamGrid) -> Result<FitResult> {
    if counts.iter().flatten().all(|&c| c == 0) {
        return Err(Error::EmptyData("every action count is zero".into()));
    }
    let taus = sorted_axis("tau", &grid.tau, true, 0.0)?;
    let lambdas = sorted_axis("lambda", &grid.lambda, family.quantal, f64::NAN)?;
    let alphas = sorted_axis("alpha", &grid.alpha, family.belief == BeliefKind::Ch, 1.0)?;
    let epsilons = sorted_axis("epsilon", &grid.epsilon, family.spike, 0.0)?;

    let mut points = Vec::new();
    for &tau in &taus {
        for &lambda in &lambdas {
            for &alpha in &alphas {
                for &epsilon in &epsilons {
                    let lambda = if family.quantal { Some(lambda) } else { None };
                    points.push(FitParams { tau, lambda, alpha, epsilon });
                }
            }
        }
    }
    let scores: Vec<Result<f64>> = points
        .par_iter()
        .map(|p| log_likelihood(&family.predict(game, p)?, counts))
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (idx, score) in scores.into_iter().enumerate() {
        let ll = score?;
        if best.is_none_or(|(_, b)| ll > b) {
            best = Some((idx, ll));
        }
    }
    let (idx, ll) = best.expect("grid is nonempty");
    Ok(FitResult { params: points[idx], log_likelihood: ll, evaluated: points.len() })
}
