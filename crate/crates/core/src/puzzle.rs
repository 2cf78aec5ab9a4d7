//! Sum-product awareness dynamics.
//!
//! A pair `a <= b` is drawn from `1..=max`. One knower hears the sum, the
//! other the product; each round both say whether they know the pair. Every
//! "I don't know" is public, so candidates whose sum or product would have
//! been identifying are struck off before the next round.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Pair = (u32, u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Announcement {
    /// Both answer against the same candidate set.
    #[default]
    Simultaneous,
    /// The sum-knower answers first; the product-knower hears that answer.
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleState {
    pub max_value: u32,
    pub candidates: Vec<Pair>,
    pub round: usize,
}

impl PuzzleState {
    pub fn new(max_value: u32) -> Result<Self> {
        if max_value == 0 {
            return Err(Error::param("max", "must be at least 1"));
        }
        let candidates = (1..=max_value).flat_map(|a| (a..=max_value).map(move |b| (a, b))).collect();
        Ok(Self { max_value, candidates, round: 0 })
    }
}

/// What each knower would have known in one round, per candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based.
    pub round: usize,
    pub candidates: Vec<Pair>,
    pub sum_knows: Vec<bool>,
    pub product_knows: Vec<bool>,
    pub survivors: Vec<Pair>,
}

fn singleton_flags(set: &[Pair], key: impl Fn(&Pair) -> u32) -> Vec<bool> {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for p in set {
        *counts.entry(key(p)).or_default() += 1;
    }
    set.iter().map(|p| counts[&key(p)] == 1).collect()
}

fn sum(p: &Pair) -> u32 {
    p.0 + p.1
}

fn product(p: &Pair) -> u32 {
    p.0 * p.1
}

/// One round of announcements. A candidate survives iff neither knower
/// would have identified it.
pub fn knowledge_round(state: &PuzzleState, mode: Announcement) -> Result<(PuzzleState, RoundRecord)> {
    if state.candidates.is_empty() {
        return Err(Error::Terminated);
    }
    let cands = &state.candidates;
    let sum_knows = singleton_flags(cands, sum);
    let product_knows = match mode {
        Announcement::Simultaneous => singleton_flags(cands, product),
        Announcement::Sequential => {
            // the product-knower reasons over the candidates left after the
            // sum-knower's answer; struck-off candidates keep the round-t view
            let after: Vec<Pair> = cands.iter().zip(&sum_knows).filter(|(_, k)| !**k).map(|(p, _)| *p).collect();
            let after_flags: HashMap<Pair, bool> = after.iter().copied().zip(singleton_flags(&after, product)).collect();
            let before = singleton_flags(cands, product);
            cands.iter().zip(before).map(|(p, b)| after_flags.get(p).copied().unwrap_or(b)).collect()
        }
    };
    let survivors: Vec<Pair> = cands
        .iter()
        .enumerate()
        .filter(|&(k, _)| !sum_knows[k] && !product_knows[k])
        .map(|(_, p)| *p)
        .collect();
    let record = RoundRecord {
        round: state.round + 1,
        candidates: cands.clone(),
        sum_knows,
        product_knows,
        survivors: survivors.clone(),
    };
    Ok((PuzzleState { max_value: state.max_value, candidates: survivors, round: state.round + 1 }, record))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedBy {
    Sum,
    Product,
    /// Both knowers identify the pair in the same round.
    Both,
    /// The candidate outlives every elimination.
    Nobody,
}

/// How the game goes if `pair` is the one actually drawn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub pair: Pair,
    /// Rounds in which both answered "I don't know".
    pub dont_know_rounds: usize,
    pub named_by: NamedBy,
    /// Round in which the pair was named, if ever.
    pub named_round: Option<usize>,
}

impl PairOutcome {
    /// Whether the sum-knower names the pair after exactly `k` mutual
    /// "I don't know" rounds.
    pub fn sum_knower_after(&self, k: usize) -> bool {
        matches!(self.named_by, NamedBy::Sum | NamedBy::Both) && self.dont_know_rounds == k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub max_value: u32,
    pub mode: Announcement,
    pub rounds: Vec<RoundRecord>,
    pub outcomes: Vec<PairOutcome>,
    /// True when iteration stopped because a round eliminated nothing.
    pub fixed_point: bool,
}

impl Transcript {
    /// Pairs the sum-knower names after exactly `k` mutual "I don't know" rounds.
    pub fn witnesses(&self, k: usize) -> Vec<&PairOutcome> {
        self.outcomes.iter().filter(|o| o.sum_knower_after(k)).collect()
    }
}

/// Plays rounds until the candidate set is empty or stops shrinking, and
/// derives every pair's outcome from the shared history.
pub fn run_sum_product(max_value: u32, mode: Announcement) -> Result<Transcript> {
    let mut state = PuzzleState::new(max_value)?;
    let initial = state.candidates.clone();
    let mut rounds = Vec::new();
    let mut fixed_point = false;
    while !state.candidates.is_empty() {
        let (next, record) = knowledge_round(&state, mode)?;
        let stalled = next.candidates.len() == state.candidates.len();
        rounds.push(record);
        state = next;
        if stalled {
            fixed_point = true;
            break;
        }
    }

    let outcomes = initial
        .iter()
        .map(|&pair| {
            for r in &rounds {
                let Some(k) = r.candidates.iter().position(|&p| p == pair) else { break };
                let named_by = match (r.sum_knows[k], r.product_knows[k]) {
                    (true, true) => NamedBy::Both,
                    (true, false) => NamedBy::Sum,
                    (false, true) => NamedBy::Product,
                    (false, false) => continue,
                };
                return PairOutcome { pair, dont_know_rounds: r.round - 1, named_by, named_round: Some(r.round) };
            }
            PairOutcome { pair, dont_know_rounds: rounds.len(), named_by: NamedBy::Nobody, named_round: None }
        })
        .collect();
    Ok(Transcript { max_value, mode, rounds, outcomes, fixed_point })
}
