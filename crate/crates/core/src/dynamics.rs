//! Repeated-game dynamics: indicator behavior, reflexive-rank indicator
//! dynamics, Cournot adjustment, fictitious play and a cumulative-propensity
//! reinforcement learner.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    action_utilities, argmax_set, expected_utility, ContinuousGame, Game, MixedStrategy, Profile, UtilityFamily,
};
use crate::registry::{Named, Registry};
use crate::strategic::{PartitionAwareness, ReflexivePartition};

/// Default step size when none is configured.
pub const DEFAULT_GAMMA: f64 = 0.5;

const GOLDEN_TOL: f64 = 1e-10;

/// Step sizes `gamma_t` in `[0, 1]` (shared by all agents).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    Constant { gamma: f64 },
    /// `gamma_t = min(1, c / t)`.
    Harmonic { c: f64 },
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::Constant { gamma: DEFAULT_GAMMA }
    }
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSchedule::Constant { gamma } if !(0.0..=1.0).contains(&gamma) => {
                Err(Error::param("gamma", format!("must lie in [0, 1], got {gamma}")))
            }
            StepSchedule::Harmonic { c } if !(c.is_finite() && c > 0.0) => {
                Err(Error::param("gamma", format!("harmonic constant must be positive, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// Step size at stage `t >= 1` for agent `_i`.
    pub fn gamma(&self, _i: usize, t: usize) -> f64 {
        match *self {
            StepSchedule::Constant { gamma } => gamma,
            StepSchedule::Harmonic { c } => (c / t.max(1) as f64).min(1.0),
        }
    }
}

/// Best action of player `i` against the others' actions in `profile`
/// (entry `i` ignored), over its interval.
pub fn current_goal(game: &ContinuousGame, i: usize, profile: &[f64]) -> Result<f64> {
    let (lo, hi) = game.bounds(i);
    match game.family() {
        UtilityFamily::LinearCournot { theta, c } => {
            let others: f64 = profile.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).sum();
            Ok(((theta - c - others) / 2.0).clamp(lo, hi))
        }
        UtilityFamily::Custom(u) => {
            if !u.unimodal() {
                return Err(Error::UnsupportedFamily(format!(
                    "`{}` is not unimodal in own action; current goals need a unique maximizer",
                    u.name()
                )));
            }
            let mut x = profile.to_vec();
            let mut f = |y: f64| {
                x[i] = y;
                u.utility(i, &x)
            };
            Ok(golden_section_max(&mut f, lo, hi))
        }
    }
}

fn golden_section_max(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    // an endpoint maximum can sit just outside the final bracket
    [lo, mid, hi].into_iter().fold((mid, f(mid)), |best, x| {
        let v = f(x);
        if v > best.1 {
            (x, v)
        } else {
            best
        }
    })
    .0
}

/// A game on which indicator dynamics can run. Each agent's action is a
/// point in a convex set: a one-element vector for interval games, a
/// probability vector for finite games played in mixed strategies.
pub trait IndicatorGame {
    fn n_players(&self) -> usize;
    /// The current goal `w_i` against `profile` (entry `i` ignored).
    fn goal(&self, i: usize, profile: &[Vec<f64>]) -> Result<Vec<f64>>;
    fn payoff(&self, i: usize, profile: &[Vec<f64>]) -> Result<f64>;
    fn check_point(&self, i: usize, x: &[f64]) -> Result<()>;
    fn to_action(&self, x: &[f64]) -> Action;
}

impl IndicatorGame for ContinuousGame {
    fn n_players(&self) -> usize {
        ContinuousGame::n_players(self)
    }

    fn goal(&self, i: usize, profile: &[Vec<f64>]) -> Result<Vec<f64>> {
        let flat: Vec<f64> = profile.iter().map(|x| x[0]).collect();
        Ok(vec![current_goal(self, i, &flat)?])
    }

    fn payoff(&self, i: usize, profile: &[Vec<f64>]) -> Result<f64> {
        let flat: Vec<f64> = profile.iter().map(|x| x[0]).collect();
        Ok(self.utility(i, &flat))
    }

    fn check_point(&self, i: usize, x: &[f64]) -> Result<()> {
        let (lo, hi) = self.bounds(i);
        match x {
            [v] if (lo..=hi).contains(v) => Ok(()),
            _ => Err(Error::InvalidProfile(format!("agent {} action {:?} outside [{lo}, {hi}]", i + 1, x))),
        }
    }

    fn to_action(&self, x: &[f64]) -> Action {
        Action::Real(x[0])
    }
}

fn mixed_profile(game: &Game, profile: &[Vec<f64>]) -> Result<Profile> {
    let _ = game;
    Ok(Profile::mixed(profile.iter().map(|p| MixedStrategy::from_raw(p.clone())).collect()))
}

impl IndicatorGame for Game {
    fn n_players(&self) -> usize {
        Game::n_players(self)
    }

    /// Uniform mixture over the best-response vertices.
    fn goal(&self, i: usize, profile: &[Vec<f64>]) -> Result<Vec<f64>> {
        let util = action_utilities(self, &mixed_profile(self, profile)?, i)?;
        Ok(MixedStrategy::uniform_over(self.n_actions(i), &argmax_set(&util)).into())
    }

    fn payoff(&self, i: usize, profile: &[Vec<f64>]) -> Result<f64> {
        expected_utility(self, &mixed_profile(self, profile)?, i)
    }

    fn check_point(&self, i: usize, x: &[f64]) -> Result<()> {
        if x.len() != self.n_actions(i) {
            return Err(Error::InvalidProfile(format!("agent {} strategy has {} entries, expected {}", i + 1, x.len(), self.n_actions(i))));
        }
        MixedStrategy::new(x.to_vec()).map(|_| ())
    }

    fn to_action(&self, x: &[f64]) -> Action {
        Action::Mixed(x.to_vec())
    }
}

/// One agent's action at one stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Action {
    Real(f64),
    Pure(usize),
    Mixed(Vec<f64>),
}

impl Action {
    fn csv(&self) -> String {
        match self {
            Action::Real(x) => x.to_string(),
            Action::Pure(a) => a.to_string(),
            Action::Mixed(p) => p.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Action::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_pure(&self) -> Option<usize> {
        match self {
            Action::Pure(a) => Some(*a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub t: usize,
    pub actions: Vec<Action>,
    pub payoffs: Vec<f64>,
    /// `forecasts[j]` is the stage profile agent `j` expected, own action included.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forecasts: Option<Vec<Vec<Action>>>,
}

/// Stages `0..=T` of a dynamics run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub stages: Vec<Stage>,
}

impl Trajectory {
    pub fn last(&self) -> &Stage {
        self.stages.last().expect("trajectories hold at least stage 0")
    }

    /// Real-valued actions of every stage (interval games only).
    pub fn reals(&self) -> Option<Vec<Vec<f64>>> {
        self.stages.iter().map(|s| s.actions.iter().map(Action::as_real).collect()).collect()
    }

    /// Pure actions of every stage.
    pub fn pures(&self) -> Option<Vec<Vec<usize>>> {
        self.stages.iter().map(|s| s.actions.iter().map(Action::as_pure).collect()).collect()
    }

    /// Long-format CSV: `t,agent,action,payoff` plus `forecast_k` columns when
    /// forecasts were logged. Agents are 1-based; mixed actions are
    /// `;`-separated probabilities.
    pub fn to_csv(&self) -> String {
        let n = self.stages.first().map(|s| s.actions.len()).unwrap_or(0);
        let with_forecasts = self.stages.iter().any(|s| s.forecasts.is_some());
        let mut out = String::from("t,agent,action,payoff");
        if with_forecasts {
            for k in 1..=n {
                let _ = write!(out, ",forecast_{k}");
            }
        }
        out.push('\n');
        for s in &self.stages {
            for (j, a) in s.actions.iter().enumerate() {
                let _ = write!(out, "{},{},{},{}", s.t, j + 1, a.csv(), s.payoffs[j]);
                if with_forecasts {
                    for k in 0..n {
                        let cell = s.forecasts.as_ref().map(|f| f[j][k].csv()).unwrap_or_default();
                        let _ = write!(out, ",{cell}");
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

fn stage_of<G: IndicatorGame + ?Sized>(game: &G, t: usize, x: &[Vec<f64>], forecasts: Option<Vec<Vec<Action>>>) -> Result<Stage> {
    let payoffs = (0..x.len()).map(|i| game.payoff(i, x)).collect::<Result<_>>()?;
    Ok(Stage { t, actions: x.iter().map(|p| game.to_action(p)).collect(), payoffs, forecasts })
}

fn step_toward(from: &[f64], goal: &[f64], gamma: f64) -> Vec<f64> {
    from.iter().zip(goal).map(|(x, w)| x + gamma * (w - x)).collect()
}

fn check_start<G: IndicatorGame + ?Sized>(game: &G, x0: &[Vec<f64>]) -> Result<()> {
    if x0.len() != game.n_players() {
        return Err(Error::InvalidProfile(format!("start profile has {} entries for {} agents", x0.len(), game.n_players())));
    }
    for (i, x) in x0.iter().enumerate() {
        game.check_point(i, x)?;
    }
    Ok(())
}

/// `x_i(t) = x_i(t-1) + gamma_i^t (w_i(x_{-i}(t-1)) - x_i(t-1))` for every agent
/// against the same previous profile.
pub fn indicator_step<G: IndicatorGame + ?Sized>(game: &G, x_prev: &[Vec<f64>], schedule: &StepSchedule, t: usize) -> Result<Vec<Vec<f64>>> {
    schedule.validate()?;
    (0..game.n_players())
        .map(|i| Ok(step_toward(&x_prev[i], &game.goal(i, x_prev)?, schedule.gamma(i, t))))
        .collect()
}

/// Runs `steps` indicator steps from `x0`.
pub fn indicator_play<G: IndicatorGame + ?Sized>(game: &G, x0: &[Vec<f64>], schedule: &StepSchedule, steps: usize) -> Result<Trajectory> {
    schedule.validate()?;
    check_start(game, x0)?;
    let mut x = x0.to_vec();
    let mut stages = vec![stage_of(game, 0, &x, None)?];
    for t in 1..=steps {
        x = indicator_step(game, &x, schedule, t)?;
        stages.push(stage_of(game, t, &x, None)?);
    }
    Ok(Trajectory { stages })
}

/// Wraps real actions as indicator points.
pub fn real_points(x: &[f64]) -> Vec<Vec<f64>> {
    x.iter().map(|&v| vec![v]).collect()
}

/// Wraps mixed strategies as indicator points.
pub fn mixed_points(s: &[MixedStrategy]) -> Vec<Vec<f64>> {
    s.iter().map(|m| m.probs().to_vec()).collect()
}

/// Indicator dynamics in the simplex: each agent steps from its mixed
/// strategy toward the uniform mixture over its best-response vertices.
pub fn finite_indicator_play(game: &Game, s0: &[MixedStrategy], schedule: &StepSchedule, steps: usize) -> Result<Trajectory> {
    indicator_play(game, &mixed_points(s0), schedule, steps)
}

/// Indicator dynamics with reflexion ranks.
///
/// Rank-0 agents step toward the best response to last stage's profile. A
/// rank-k agent keeps the true classes `N^0..N^{k-2}`, takes everyone else
/// for rank `k-1`, forecasts their stage-t moves with the same rule one rank
/// down, and steps toward the best response to that forecast. Forecasts look
/// one stage ahead.
pub fn reflexive_trajectory<G: IndicatorGame + ?Sized>(
    game: &G,
    partition: &ReflexivePartition,
    x0: &[Vec<f64>],
    schedule: &StepSchedule,
    steps: usize,
) -> Result<Trajectory> {
    schedule.validate()?;
    check_start(game, x0)?;
    let n = game.n_players();
    if partition.n_agents() != n {
        return Err(Error::InvalidPartition(format!("partition covers {} agents, game has {n}", partition.n_agents())));
    }
    let mut x = x0.to_vec();
    let mut stages = vec![stage_of(game, 0, &x, None)?];
    for t in 1..=steps {
        let mut memo: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        let mut forecasts = Vec::with_capacity(n);
        for j in 0..n {
            let k = partition.rank_of(j);
            let own = reasoned_move(game, partition, schedule, &x, t, j, k, &mut memo)?;
            let mut view = if k == 0 { x.clone() } else { forecast_for(game, partition, schedule, &x, t, j, k, &mut memo)? };
            view[j] = own.clone();
            forecasts.push(view.iter().map(|p| game.to_action(p)).collect());
            next.push(own);
        }
        x = next;
        stages.push(stage_of(game, t, &x, Some(forecasts))?);
    }
    Ok(Trajectory { stages })
}

/// Profile agent `j`, reasoning at rank `k >= 1`, expects at stage `t`
/// (entry `j` holds its previous action).
#[allow(clippy::too_many_arguments)]
fn forecast_for<G: IndicatorGame + ?Sized>(
    game: &G,
    truth: &ReflexivePartition,
    schedule: &StepSchedule,
    prev: &[Vec<f64>],
    t: usize,
    j: usize,
    k: usize,
    memo: &mut HashMap<(usize, usize), Vec<f64>>,
) -> Result<Vec<Vec<f64>>> {
    let view = truth.subjective(j, k, PartitionAwareness::RpmStyle);
    (0..game.n_players())
        .map(|l| if l == j { Ok(prev[j].clone()) } else { reasoned_move(game, truth, schedule, prev, t, l, view.rank_of(l), memo) })
        .collect()
}

/// Stage-t action of agent `j` if it reasons at rank `k`.
#[allow(clippy::too_many_arguments)]
fn reasoned_move<G: IndicatorGame + ?Sized>(
    game: &G,
    truth: &ReflexivePartition,
    schedule: &StepSchedule,
    prev: &[Vec<f64>],
    t: usize,
    j: usize,
    k: usize,
    memo: &mut HashMap<(usize, usize), Vec<f64>>,
) -> Result<Vec<f64>> {
    if let Some(x) = memo.get(&(j, k)) {
        return Ok(x.clone());
    }
    let goal = if k == 0 {
        game.goal(j, prev)?
    } else {
        let expected = forecast_for(game, truth, schedule, prev, t, j, k, memo)?;
        game.goal(j, &expected)?
    };
    let x = step_toward(&prev[j], &goal, schedule.gamma(j, t));
    memo.insert((j, k), x.clone());
    Ok(x)
}

/// Cournot adjustment on an interval game: indicator dynamics with unit steps.
pub fn cournot_play(game: &ContinuousGame, x0: &[f64], steps: usize) -> Result<Trajectory> {
    indicator_play(game, &real_points(x0), &StepSchedule::Constant { gamma: 1.0 }, steps)
}

fn pure_stage(game: &Game, t: usize, x: &[usize]) -> Stage {
    Stage { t, actions: x.iter().map(|&a| Action::Pure(a)).collect(), payoffs: game.payoffs_at(x).to_vec(), forecasts: None }
}

fn check_pure_start(game: &Game, x0: &[usize]) -> Result<()> {
    if x0.len() != game.n_players() || x0.iter().enumerate().any(|(i, &a)| a >= game.n_actions(i)) {
        return Err(Error::InvalidProfile(format!("start profile {x0:?} is not a pure profile of the game")));
    }
    Ok(())
}

/// Cournot adjustment on a finite game: each stage every agent plays its
/// lowest-index best response to the previous pure profile.
pub fn cournot_play_finite(game: &Game, x0: &[usize], steps: usize) -> Result<Trajectory> {
    check_pure_start(game, x0)?;
    let mut x = x0.to_vec();
    let mut stages = vec![pure_stage(game, 0, &x)];
    for t in 1..=steps {
        let prev = Profile::pure(&x);
        x = (0..game.n_players())
            .map(|i| Ok(argmax_set(&action_utilities(game, &prev, i)?)[0]))
            .collect::<Result<_>>()?;
        stages.push(pure_stage(game, t, &x));
    }
    Ok(Trajectory { stages })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    LowestIndex,
    UniformRandom { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FictitiousPlay {
    pub trajectory: Trajectory,
    /// Per-agent action counts over stages `0..=T`.
    pub counts: Vec<Vec<u64>>,
    pub frequencies: Vec<MixedStrategy>,
}

fn frequencies(counts: &[Vec<u64>]) -> Vec<MixedStrategy> {
    counts
        .iter()
        .map(|c| {
            let total: u64 = c.iter().sum();
            MixedStrategy::from_raw(c.iter().map(|&k| k as f64 / total as f64).collect())
        })
        .collect()
}

/// Fictitious play from the pure profile `x0`: each stage, every agent
/// best-responds to the empirical marginals of its opponents' past actions.
pub fn fictitious_play(game: &Game, x0: &[usize], steps: usize, tie_break: TieBreak) -> Result<FictitiousPlay> {
    check_pure_start(game, x0)?;
    let n = game.n_players();
    let mut rng = match tie_break {
        TieBreak::UniformRandom { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::LowestIndex => None,
    };
    let mut counts: Vec<Vec<u64>> = (0..n).map(|i| vec![0; game.n_actions(i)]).collect();
    for (i, &a) in x0.iter().enumerate() {
        counts[i][a] += 1;
    }
    let mut stages = vec![pure_stage(game, 0, x0)];
    for t in 1..=steps {
        let beliefs = Profile::mixed(frequencies(&counts));
        let mut x = Vec::with_capacity(n);
        for i in 0..n {
            let best = argmax_set(&action_utilities(game, &beliefs, i)?);
            let pick = match rng.as_mut() {
                Some(r) if best.len() > 1 => best[r.gen_range(0..best.len())],
                _ => best[0],
            };
            x.push(pick);
        }
        for (i, &a) in x.iter().enumerate() {
            counts[i][a] += 1;
        }
        stages.push(pure_stage(game, t, &x));
    }
    let frequencies = frequencies(&counts);
    Ok(FictitiousPlay { trajectory: Trajectory { stages }, counts, frequencies })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reinforcement {
    pub trajectory: Trajectory,
    /// Amount added to each agent's payoffs so that its minimum is zero.
    pub shifts: Vec<f64>,
    pub propensities: Vec<Vec<f64>>,
}

/// Cumulative-propensity learning: every agent starts each action at
/// propensity `q0`, samples actions in proportion to propensity and adds the
/// shifted realized payoff to the chosen action. Stages `0..=T` are all
/// sampled.
pub fn reinforcement_play(game: &Game, steps: usize, q0: f64, seed: u64) -> Result<Reinforcement> {
    if !(q0.is_finite() && q0 > 0.0) {
        return Err(Error::param("q0", format!("initial propensity must be positive, got {q0}")));
    }
    let n = game.n_players();
    let shifts: Vec<f64> = (0..n).map(|i| -game.min_payoff(i)).collect();
    let mut q: Vec<Vec<f64>> = (0..n).map(|i| vec![q0; game.n_actions(i)]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stages = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        let x: Vec<usize> = q.iter().map(|qi| sample_proportional(qi, &mut rng)).collect();
        for i in 0..n {
            q[i][x[i]] += game.payoff(&x, i) + shifts[i];
        }
        stages.push(pure_stage(game, t, &x));
    }
    Ok(Reinforcement { trajectory: Trajectory { stages }, shifts, propensities: q })
}

fn sample_proportional(weights: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (a, w) in weights.iter().enumerate() {
        if u < *w {
            return a;
        }
        u -= w;
    }
    weights.len() - 1
}

/// The game a dynamics model runs on.
#[derive(Debug, Clone)]
pub enum DynamicsGame {
    Finite(Game),
    Continuous(ContinuousGame),
}

impl DynamicsGame {
    pub fn n_players(&self) -> usize {
        match self {
            DynamicsGame::Finite(g) => g.n_players(),
            DynamicsGame::Continuous(g) => g.n_players(),
        }
    }
}

/// Everything a [`DynamicsModel`] may read.
#[derive(Debug, Clone)]
pub struct DynamicsConfig {
    pub game: DynamicsGame,
    pub partition: Option<ReflexivePartition>,
    /// Start values: reals for interval games, action indices for finite games.
    pub x0: Option<Vec<f64>>,
    /// Mixed start for finite indicator dynamics; overrides `x0`.
    pub s0: Option<Vec<MixedStrategy>>,
    pub schedule: StepSchedule,
    pub steps: usize,
    pub seed: u64,
    pub tie_break: TieBreak,
    pub q0: f64,
}

impl DynamicsConfig {
    pub fn new(game: DynamicsGame) -> Self {
        Self {
            game,
            partition: None,
            x0: None,
            s0: None,
            schedule: StepSchedule::default(),
            steps: 200,
            seed: 0,
            tie_break: TieBreak::LowestIndex,
            q0: 1.0,
        }
    }

    fn finite(&self, model: &str) -> Result<&Game> {
        match &self.game {
            DynamicsGame::Finite(g) => Ok(g),
            DynamicsGame::Continuous(_) => Err(Error::Domain(format!("model `{model}` needs a finite game"))),
        }
    }

    fn pure_start(&self, game: &Game) -> Result<Vec<usize>> {
        match &self.x0 {
            None => Ok(vec![0; game.n_players()]),
            Some(x) => x
                .iter()
                .map(|&v| {
                    if v.fract() == 0.0 && v >= 0.0 {
                        Ok(v as usize)
                    } else {
                        Err(Error::InvalidProfile(format!("finite start actions must be indices, got {v}")))
                    }
                })
                .collect(),
        }
    }

    fn real_start(&self, game: &ContinuousGame) -> Vec<Vec<f64>> {
        match &self.x0 {
            Some(x) => real_points(x),
            None => (0..game.n_players()).map(|i| vec![game.bounds(i).0]).collect(),
        }
    }

    fn mixed_start(&self, game: &Game) -> Result<Vec<Vec<f64>>> {
        if let Some(s) = &self.s0 {
            return Ok(mixed_points(s));
        }
        match &self.x0 {
            Some(_) => {
                let x = self.pure_start(game)?;
                check_pure_start(game, &x)?;
                Ok(x.iter().enumerate().map(|(i, &a)| MixedStrategy::pure(game.n_actions(i), a).into()).collect())
            }
            None => Ok((0..game.n_players()).map(|i| MixedStrategy::uniform(game.n_actions(i)).into()).collect()),
        }
    }
}

/// Output of a dynamics model run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsOutput {
    pub model: String,
    pub trajectory: Trajectory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Vec<MixedStrategy>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<f64>>,
}

/// A dynamics model selectable by name.
pub trait DynamicsModel: Named + Send + Sync {
    fn run(&self, cfg: &DynamicsConfig) -> Result<DynamicsOutput>;
}

fn output(model: &str, trajectory: Trajectory) -> DynamicsOutput {
    DynamicsOutput { model: model.to_string(), trajectory, frequencies: None, shifts: None }
}

struct Indicator;
struct Reflexive;
struct Cournot;
struct Fp;
struct Reinforce;

impl Named for Indicator {
    fn name(&self) -> &'static str {
        "indicator"
    }
}
impl DynamicsModel for Indicator {
    fn run(&self, cfg: &DynamicsConfig) -> Result<DynamicsOutput> {
        let traj = match &cfg.game {
            DynamicsGame::Continuous(g) => indicator_play(g, &cfg.real_start(g), &cfg.schedule, cfg.steps)?,
            DynamicsGame::Finite(g) => indicator_play(g, &cfg.mixed_start(g)?, &cfg.schedule, cfg.steps)?,
        };
        Ok(output(self.name(), traj))
    }
}

impl Named for Reflexive {
    fn name(&self) -> &'static str {
        "reflexive"
    }
}
impl DynamicsModel for Reflexive {
    fn run(&self, cfg: &DynamicsConfig) -> Result<DynamicsOutput> {
        let partition = cfg.partition.clone().unwrap_or_else(|| ReflexivePartition::all_rank0(cfg.game.n_players()));
        let traj = match &cfg.game {
            DynamicsGame::Continuous(g) => reflexive_trajectory(g, &partition, &cfg.real_start(g), &cfg.schedule, cfg.steps)?,
            DynamicsGame::Finite(g) => reflexive_trajectory(g, &partition, &cfg.mixed_start(g)?, &cfg.schedule, cfg.steps)?,
        };
        Ok(output(self.name(), traj))
    }
}

impl Named for Cournot {
    fn name(&self) -> &'static str {
        "cournot"
    }
}
impl DynamicsModel for Cournot {
    fn run(&self, cfg: &DynamicsConfig) -> Result<DynamicsOutput> {
        let traj = match &cfg.game {
            DynamicsGame::Continuous(g) => {
                indicator_play(g, &cfg.real_start(g), &StepSchedule::Constant { gamma: 1.0 }, cfg.steps)?
            }
            DynamicsGame::Finite(g) => cournot_play_finite(g, &cfg.pure_start(g)?, cfg.steps)?,
        };
        Ok(output(self.name(), traj))
    }
}

impl Named for Fp {
    fn name(&self) -> &'static str {
        "fp"
    }
}
impl DynamicsModel for Fp {
    fn run(&self, cfg: &DynamicsConfig) -> Result<DynamicsOutput> {
        let g = cfg.finite(self.name())?;
        let fp = fictitious_play(g, &cfg.pure_start(g)?, cfg.steps, cfg.tie_break)?;
        Ok(DynamicsOutput { frequencies: Some(fp.frequencies), ..output(self.name(), fp.trajectory) })
    }
}

impl Named for Reinforce {
    fn name(&self) -> &'static str {
        "reinforce"
    }
}
impl DynamicsModel for Reinforce {
    fn run(&self, cfg: &DynamicsConfig) -> Result<DynamicsOutput> {
        let g = cfg.finite(self.name())?;
        let r = reinforcement_play(g, cfg.steps, cfg.q0, cfg.seed)?;
        let freq = {
            let mut counts: Vec<Vec<u64>> = (0..g.n_players()).map(|i| vec![0; g.n_actions(i)]).collect();
            for s in &r.trajectory.stages {
                for (i, a) in s.actions.iter().enumerate() {
                    if let Action::Pure(a) = a {
                        counts[i][*a] += 1;
                    }
                }
            }
            frequencies(&counts)
        };
        Ok(DynamicsOutput { frequencies: Some(freq), shifts: Some(r.shifts), ..output(self.name(), r.trajectory) })
    }
}

/// All shipped dynamics models keyed by their CLI names.
pub fn dynamics_registry() -> Registry<dyn DynamicsModel> {
    let mut reg: Registry<dyn DynamicsModel> = Registry::new("dynamics model");
    reg.register(Arc::new(Indicator))
        .register(Arc::new(Reflexive))
        .register(Arc::new(Cournot))
        .register(Arc::new(Fp))
        .register(Arc::new(Reinforce));
    reg
}
