//! Finite and parametric games, expected utility, best and quantal responses,
//! and pure-equilibrium enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used by every argmax in the crate.
pub const ARGMAX_TOL: f64 = 1e-9;

/// Default cap on exhaustive enumerations (profiles, class assignments).
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

const SIMPLEX_TOL: f64 = 1e-9;

/// A finite n-player normal-form game with a dense payoff tensor.
///
/// Profiles are stored row-major with player 0 as the slowest axis; every
/// entry of the tensor is an n-vector of payoffs. Optional theta variants
/// carry alternative tensors over the same action sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    actions: Vec<Vec<String>>,
    strides: Vec<usize>,
    payoffs: Vec<f64>,
    theta_variants: BTreeMap<String, Vec<f64>>,
}

impl Game {
    /// Builds a game from per-player action labels and the flat payoff tensor
    /// (`num_profiles * n` values, profile-major).
    pub fn new(actions: Vec<Vec<String>>, payoffs: Vec<f64>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        for (i, a) in actions.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidGame(format!("player {} has no actions", i + 1)));
            }
        }
        let n = actions.len();
        let mut strides = vec![1usize; n];
        let mut total: usize = 1;
        for i in (0..n).rev() {
            strides[i] = total;
            total = total
                .checked_mul(actions[i].len())
                .ok_or_else(|| Error::InvalidGame("profile space overflows".into()))?;
        }
        check_tensor(&payoffs, total, n)?;
        Ok(Self { actions, strides, payoffs, theta_variants: BTreeMap::new() })
    }

    /// Builds a game by evaluating `f` on every pure profile.
    pub fn from_fn<F>(actions: Vec<Vec<String>>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<f64>,
    {
        let counts: Vec<usize> = actions.iter().map(Vec::len).collect();
        let n = counts.len();
        let mut payoffs = Vec::new();
        for profile in ProfileIter::new(counts) {
            let u = f(&profile);
            if u.len() != n {
                return Err(Error::InvalidGame(format!(
                    "payoff vector at {:?} has {} entries, expected {}",
                    profile,
                    u.len(),
                    n
                )));
            }
            payoffs.extend(u);
        }
        Self::new(actions, payoffs)
    }

    /// Numeric labels `0..k` for each player.
    pub fn default_labels(counts: &[usize]) -> Vec<Vec<String>> {
        counts.iter().map(|&k| (0..k).map(|a| a.to_string()).collect()).collect()
    }

    /// Random game with payoffs drawn uniformly from [-10, 10].
    pub fn random<R: Rng + ?Sized>(counts: &[usize], rng: &mut R) -> Self {
        let n = counts.len();
        Self::from_fn(Self::default_labels(counts), |_| (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect())
            .expect("random game dimensions are valid")
    }

    /// Adds (or replaces) the payoff tensor used when the state of nature is `label`.
    pub fn with_theta_variant(mut self, label: impl Into<String>, payoffs: Vec<f64>) -> Result<Self> {
        check_tensor(&payoffs, self.num_profiles(), self.n_players())?;
        self.theta_variants.insert(label.into(), payoffs);
        Ok(self)
    }

    /// The game played when every agent believes the state of nature is `label`.
    pub fn at_theta(&self, label: &str) -> Result<Game> {
        let payoffs = self
            .theta_variants
            .get(label)
            .ok_or_else(|| Error::UnknownTheta(label.to_string()))?;
        Ok(Game {
            actions: self.actions.clone(),
            strides: self.strides.clone(),
            payoffs: payoffs.clone(),
            theta_variants: BTreeMap::new(),
        })
    }

    pub fn theta_labels(&self) -> impl Iterator<Item = &str> {
        self.theta_variants.keys().map(String::as_str)
    }

    pub fn has_theta(&self, label: &str) -> bool {
        self.theta_variants.contains_key(label)
    }

    pub(crate) fn theta_tensor(&self, label: &str) -> Result<&[f64]> {
        self.theta_variants
            .get(label)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownTheta(label.to_string()))
    }

    pub fn n_players(&self) -> usize {
        self.actions.len()
    }

    pub fn n_actions(&self, i: usize) -> usize {
        self.actions[i].len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, i: usize) -> &[String] {
        &self.actions[i]
    }

    pub fn label(&self, i: usize, a: usize) -> &str {
        &self.actions[i][a]
    }

    pub fn num_profiles(&self) -> usize {
        self.payoffs.len() / self.n_players()
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    /// Payoff of player `i` at a pure profile.
    pub fn payoff(&self, profile: &[usize], i: usize) -> f64 {
        self.payoffs[self.profile_index(profile) * self.n_players() + i]
    }

    /// All players' payoffs at a pure profile.
    pub fn payoffs_at(&self, profile: &[usize]) -> &[f64] {
        let n = self.n_players();
        let k = self.profile_index(profile) * n;
        &self.payoffs[k..k + n]
    }

    pub(crate) fn tensor(&self) -> &[f64] {
        &self.payoffs
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn profiles(&self) -> ProfileIter {
        ProfileIter::new(self.action_counts())
    }

    /// Applies `u -> scale * u + shift` to player `i`'s payoffs in every tensor.
    pub fn affine_transform(&self, i: usize, scale: f64, shift: f64) -> Game {
        let n = self.n_players();
        let mut g = self.clone();
        let apply = |t: &mut Vec<f64>| {
            for k in (i..t.len()).step_by(n) {
                t[k] = scale * t[k] + shift;
            }
        };
        apply(&mut g.payoffs);
        for t in g.theta_variants.values_mut() {
            apply(t);
        }
        g
    }

    pub fn min_payoff(&self, i: usize) -> f64 {
        let n = self.n_players();
        self.payoffs[i..].iter().step_by(n).copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_tensor(payoffs: &[f64], profiles: usize, n: usize) -> Result<()> {
    if payoffs.len() != profiles * n {
        return Err(Error::InvalidGame(format!(
            "payoff tensor has {} values, expected {} profiles x {} players",
            payoffs.len(),
            profiles,
            n
        )));
    }
    if let Some(k) = payoffs.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidGame(format!("non-finite payoff at flat index {k}")));
    }
    Ok(())
}

/// Odometer over pure profiles (last player fastest).
#[derive(Debug, Clone)]
pub struct ProfileIter {
    counts: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ProfileIter {
    pub fn new(counts: Vec<usize>) -> Self {
        let next = if counts.iter().all(|&c| c > 0) { Some(vec![0; counts.len()]) } else { None };
        Self { counts, next }
    }
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.counts[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// A probability distribution over one player's actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProfile("empty mixed strategy".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidProfile(format!("negative or non-finite probability in {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidProfile(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self(probs))
    }

    pub fn pure(n: usize, a: usize) -> Self {
        let mut p = vec![0.0; n];
        p[a] = 1.0;
        Self(p)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Uniform over `support` (the `U(A)` rule).
    pub fn uniform_over(n: usize, support: &[usize]) -> Self {
        let mut p = vec![0.0; n];
        let w = 1.0 / support.len() as f64;
        for &a in support {
            p[a] = w;
        }
        Self(p)
    }

    /// Convex combination `sum_k weights[k] * parts[k]`.
    pub fn mixture(weights: &[f64], parts: &[&MixedStrategy]) -> Result<Self> {
        let len = parts.first().map(|s| s.len()).unwrap_or(0);
        let mut p = vec![0.0; len];
        for (w, s) in weights.iter().zip(parts) {
            if s.len() != len {
                return Err(Error::InvalidProfile("mixture of strategies with different dimensions".into()));
            }
            for (acc, x) in p.iter_mut().zip(s.probs()) {
                *acc += w * x;
            }
        }
        Self::new(p)
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn prob(&self, a: usize) -> f64 {
        self.0[a]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&a| self.0[a] > 0.0).collect()
    }

    /// Actions carrying the maximal probability (within [`ARGMAX_TOL`]).
    pub fn modes(&self) -> Vec<usize> {
        argmax_set(&self.0)
    }

    pub fn total_variation(&self, other: &MixedStrategy) -> f64 {
        0.5 * self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Self {
        s.0
    }
}

/// One player's entry in a [`Profile`].
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Pure(usize),
    Mixed(MixedStrategy),
}

impl Strategy {
    fn prob(&self, a: usize) -> f64 {
        match self {
            Strategy::Pure(b) => f64::from(u8::from(a == *b)),
            Strategy::Mixed(s) => s.prob(a),
        }
    }

    fn support(&self) -> Vec<usize> {
        match self {
            Strategy::Pure(a) => vec![*a],
            Strategy::Mixed(s) => s.support(),
        }
    }

    pub fn to_mixed(&self, n_actions: usize) -> MixedStrategy {
        match self {
            Strategy::Pure(a) => MixedStrategy::pure(n_actions, *a),
            Strategy::Mixed(s) => s.clone(),
        }
    }
}

/// A strategy for every player. Where an operation asks for the opponents
/// of player `i`, entry `i` is present but ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile(pub Vec<Strategy>);

impl Profile {
    pub fn pure(actions: &[usize]) -> Self {
        Self(actions.iter().map(|&a| Strategy::Pure(a)).collect())
    }

    pub fn mixed(strategies: Vec<MixedStrategy>) -> Self {
        Self(strategies.into_iter().map(Strategy::Mixed).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn validate(&self, game: &Game, skip: Option<usize>) -> Result<()> {
        if self.0.len() != game.n_players() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries for a {}-player game",
                self.0.len(),
                game.n_players()
            )));
        }
        for (j, s) in self.0.iter().enumerate() {
            if Some(j) == skip {
                continue;
            }
            let k = game.n_actions(j);
            match s {
                Strategy::Pure(a) if *a >= k => {
                    return Err(Error::InvalidProfile(format!("player {} action {} out of range 0..{}", j + 1, a, k)))
                }
                Strategy::Mixed(m) if m.len() != k => {
                    return Err(Error::InvalidProfile(format!(
                        "player {} strategy has dimension {}, expected {}",
                        j + 1,
                        m.len(),
                        k
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Expected payoff of each of player `i`'s pure actions against `opp`.
pub fn action_utilities(game: &Game, opp: &Profile, i: usize) -> Result<Vec<f64>> {
    check_player(game, i)?;
    opp.validate(game, Some(i))?;
    Ok(action_utilities_in(game, game.tensor(), opp, i))
}

/// Same as [`action_utilities`] over an explicit payoff tensor (theta variant).
pub(crate) fn action_utilities_in(game: &Game, tensor: &[f64], opp: &Profile, i: usize) -> Vec<f64> {
    let n = game.n_players();
    let strides = game.strides();
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let supports: Vec<Vec<usize>> = others.iter().map(|&j| opp.0[j].support()).collect();
    let mut util = vec![0.0; game.n_actions(i)];
    let mut idx = vec![0usize; others.len()];
    loop {
        let mut weight = 1.0;
        let mut base = 0usize;
        for (k, &j) in others.iter().enumerate() {
            let a = supports[k][idx[k]];
            weight *= opp.0[j].prob(a);
            base += a * strides[j];
        }
        for (a, u) in util.iter_mut().enumerate() {
            *u += weight * tensor[(base + a * strides[i]) * n + i];
        }
        let mut k = others.len();
        loop {
            if k == 0 {
                return util;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < supports[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn check_player(game: &Game, i: usize) -> Result<()> {
    if i >= game.n_players() {
        return Err(Error::InvalidProfile(format!("player index {} out of range for {} players", i + 1, game.n_players())));
    }
    Ok(())
}

/// Expected utility of player `i` under `profile`.
pub fn expected_utility(game: &Game, profile: &Profile, i: usize) -> Result<f64> {
    check_player(game, i)?;
    profile.validate(game, None)?;
    let util = action_utilities_in(game, game.tensor(), profile, i);
    Ok(match &profile.0[i] {
        Strategy::Pure(a) => util[*a],
        Strategy::Mixed(s) => s.probs().iter().zip(&util).map(|(p, u)| p * u).sum(),
    })
}

/// Indices within [`ARGMAX_TOL`] of the maximum.
pub fn argmax_set(values: &[f64]) -> Vec<usize> {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len()).filter(|&a| values[a] >= best - ARGMAX_TOL).collect()
}

/// Indices within [`ARGMAX_TOL`] of the minimum.
pub fn argmin_set(values: &[f64]) -> Vec<usize> {
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    (0..values.len()).filter(|&a| values[a] <= best + ARGMAX_TOL).collect()
}

/// Every best response of player `i` to `opp`, ties kept.
pub fn best_response_set(game: &Game, opp: &Profile, i: usize) -> Result<Vec<usize>> {
    Ok(argmax_set(&action_utilities(game, opp, i)?))
}

/// Logit choice probabilities with precision `lambda`, shifted by the max for stability.
pub fn softmax(utilities: &[f64], lambda: f64) -> Result<MixedStrategy> {
    check_lambda(lambda)?;
    let top = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = utilities.iter().map(|u| (lambda * (u - top)).exp()).collect();
    let z: f64 = weights.iter().sum();
    Ok(MixedStrategy::from_raw(weights.into_iter().map(|w| w / z).collect()))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::param("lambda", format!("must be finite and nonnegative, got {lambda}")));
    }
    Ok(())
}

/// Quantal best response of player `i` to `opp` at precision `lambda`.
pub fn qbr(game: &Game, opp: &Profile, i: usize, lambda: f64) -> Result<MixedStrategy> {
    check_lambda(lambda)?;
    softmax(&action_utilities(game, opp, i)?, lambda)
}

/// How an agent turns expected utilities into a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResponseModel {
    /// Uniform over the argmax set.
    Best,
    Qbr { lambda: f64 },
}

impl ResponseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ResponseModel::Best => Ok(()),
            ResponseModel::Qbr { lambda } => check_lambda(*lambda),
        }
    }

    /// Applies the model to a vector of action utilities.
    pub fn respond_to_utilities(&self, utilities: &[f64]) -> Result<MixedStrategy> {
        match self {
            ResponseModel::Best => Ok(MixedStrategy::uniform_over(utilities.len(), &argmax_set(utilities))),
            ResponseModel::Qbr { lambda } => softmax(utilities, *lambda),
        }
    }
}

impl fmt::Display for ResponseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponseModel::Best => write!(f, "best"),
            ResponseModel::Qbr { lambda } => write!(f, "qbr({lambda})"),
        }
    }
}

/// Response of player `i` to `opp` under `model`.
pub fn response(game: &Game, opp: &Profile, i: usize, model: ResponseModel) -> Result<MixedStrategy> {
    model.validate()?;
    model.respond_to_utilities(&action_utilities(game, opp, i)?)
}

/// All pure Nash equilibria, using the default enumeration cap.
pub fn pure_nash(game: &Game) -> Result<Vec<Vec<usize>>> {
    pure_nash_with_cap(game, DEFAULT_ENUM_CAP)
}

/// All pure profiles with no strictly improving unilateral deviation.
pub fn pure_nash_with_cap(game: &Game, cap: u64) -> Result<Vec<Vec<usize>>> {
    let size = game.num_profiles() as u128;
    if size > cap as u128 {
        return Err(Error::Size { what: "pure-profile enumeration", size, cap });
    }
    let n = game.n_players();
    let mut out = Vec::new();
    for profile in game.profiles() {
        let mut dev = profile.clone();
        let stable = (0..n).all(|i| {
            let current = game.payoff(&profile, i);
            (0..game.n_actions(i)).all(|a| {
                dev[i] = a;
                let ok = game.payoff(&dev, i) <= current + ARGMAX_TOL;
                dev[i] = profile[i];
                ok
            })
        });
        if stable {
            out.push(profile);
        }
    }
    Ok(out)
}

/// A utility family over interval action sets.
pub trait ContinuousUtility: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    /// Payoff of player `i` at the real-valued profile `x`.
    fn utility(&self, i: usize, x: &[f64]) -> f64;
    /// Whether each player's utility is unimodal in its own action.
    fn unimodal(&self) -> bool;
}

#[derive(Debug, Clone)]
pub enum UtilityFamily {
    /// `u_i = x_i (theta - sum_j x_j) - c x_i`.
    LinearCournot { theta: f64, c: f64 },
    Custom(Arc<dyn ContinuousUtility>),
}

/// A game whose action sets are closed intervals of reals.
#[derive(Debug, Clone)]
pub struct ContinuousGame {
    bounds: Vec<(f64, f64)>,
    family: UtilityFamily,
}

impl ContinuousGame {
    pub fn new(bounds: Vec<(f64, f64)>, family: UtilityFamily) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidGame(format!("player {} has invalid bounds [{lo}, {hi}]", i + 1)));
            }
        }
        if let UtilityFamily::LinearCournot { theta, c } = family {
            if !(theta.is_finite() && c.is_finite() && theta > c && c >= 0.0) {
                return Err(Error::param("theta", format!("Cournot needs theta > c >= 0, got theta={theta}, c={c}")));
            }
        }
        Ok(Self { bounds, family })
    }

    /// Linear Cournot oligopoly with action sets `[0, theta]`.
    pub fn cournot(n: usize, theta: f64, c: f64) -> Result<Self> {
        Self::new(vec![(0.0, theta.max(0.0)); n], UtilityFamily::LinearCournot { theta, c })
    }

    pub fn n_players(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self, i: usize) -> (f64, f64) {
        self.bounds[i]
    }

    pub fn family(&self) -> &UtilityFamily {
        &self.family
    }

    pub fn utility(&self, i: usize, x: &[f64]) -> f64 {
        match &self.family {
            UtilityFamily::LinearCournot { theta, c } => {
                let total: f64 = x.iter().sum();
                x[i] * (theta - total) - c * x[i]
            }
            UtilityFamily::Custom(u) => u.utility(i, x),
        }
    }

    /// Symmetric interior Nash equilibrium `(theta - c) / (n + 1)` of the Cournot family.
    pub fn cournot_nash(&self) -> Option<Vec<f64>> {
        match self.family {
            UtilityFamily::LinearCournot { theta, c } => {
                let n = self.n_players();
                Some(vec![(theta - c) / (n as f64 + 1.0); n])
            }
            UtilityFamily::Custom(_) => None,
        }
    }
}

/// A finite or continuous game produced by [`make_builtin`].
#[derive(Debug, Clone)]
pub enum BuiltinGame {
    Finite(Game),
    Continuous(ContinuousGame),
}

pub const BUILTIN_NAMES: [&str; 4] = ["prisoners_dilemma", "matching_pennies", "p_beauty", "cournot_linear"];

/// Canonical game instances by name.
///
/// `p_beauty` reads `n` (3), `lo` (0), `hi` (100) and `p` (2/3);
/// `cournot_linear` reads `n` (2), `theta` (10) and `c` (1).
pub fn make_builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<BuiltinGame> {
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    let count = |key: &'static str, default: f64| -> Result<usize> {
        let v = get(key, default);
        if v.fract() != 0.0 || v < 1.0 {
            return Err(Error::param(key, format!("must be a positive integer, got {v}")));
        }
        Ok(v as usize)
    };
    match name {
        "prisoners_dilemma" => Ok(BuiltinGame::Finite(prisoners_dilemma())),
        "matching_pennies" => Ok(BuiltinGame::Finite(matching_pennies())),
        "p_beauty" => {
            let n = count("n", 3.0)?;
            let (lo, hi) = (get("lo", 0.0), get("hi", 100.0));
            if lo.fract() != 0.0 || hi.fract() != 0.0 || lo > hi {
                return Err(Error::param("lo", format!("grid must be integer lo <= hi, got {lo}..{hi}")));
            }
            let p = get("p", 2.0 / 3.0);
            if !p.is_finite() || p < 0.0 {
                return Err(Error::param("p", format!("must be finite and nonnegative, got {p}")));
            }
            Ok(BuiltinGame::Finite(p_beauty(n, lo as i64, hi as i64, p)?))
        }
        "cournot_linear" => {
            let n = count("n", 2.0)?;
            Ok(BuiltinGame::Continuous(ContinuousGame::cournot(n, get("theta", 10.0), get("c", 1.0))?))
        }
        other => Err(Error::UnknownName { kind: "builtin game", name: other.to_string(), known: BUILTIN_NAMES.join(", ") }),
    }
}

/// Prisoner's dilemma with T=5, R=3, P=1, S=0; action 0 is Cooperate.
pub fn prisoners_dilemma() -> Game {
    let labels = vec![vec!["C".to_string(), "D".to_string()]; 2];
    Game::new(labels, vec![3.0, 3.0, 0.0, 5.0, 5.0, 0.0, 1.0, 1.0]).expect("static game")
}

/// Matching pennies; player 1 wins on a match.
pub fn matching_pennies() -> Game {
    let labels = vec![vec!["H".to_string(), "T".to_string()]; 2];
    Game::new(labels, vec![1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]).expect("static game")
}

/// The p-beauty contest on the integer grid `lo..=hi`: a unit prize is split
/// equally among the players closest to `p` times the mean guess (own guess
/// included).
pub fn p_beauty(n: usize, lo: i64, hi: i64, p: f64) -> Result<Game> {
    let grid: Vec<String> = (lo..=hi).map(|g| g.to_string()).collect();
    Game::from_fn(vec![grid; n], |profile| {
        let guesses: Vec<f64> = profile.iter().map(|&a| (lo + a as i64) as f64).collect();
        let target = p * guesses.iter().sum::<f64>() / n as f64;
        let dist: Vec<f64> = guesses.iter().map(|g| -(g - target).abs()).collect();
        let winners = argmax_set(&dist);
        let prize = 1.0 / winners.len() as f64;
        let mut u = vec![0.0; n];
        for w in winners {
            u[w] = prize;
        }
        u
    })
}
