//! Serialized shapes of every subcommand's JSON output.

use std::collections::BTreeMap;

use reflex_core::awareness::Rank;
use reflex_core::dynamics::Trajectory;
use reflex_core::game::ResponseModel;
use reflex_core::puzzle::{PairOutcome, Transcript};
use reflex_core::strategic::{FitParams, PartitionAwareness};
use reflex_core::MixedStrategy;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileOut {
    pub profile: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyOut {
    /// 1-based.
    pub player: usize,
    pub actions: Vec<String>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QbrOut {
    pub lambda: f64,
    pub strategies: Vec<StrategyOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankOut {
    pub rank: usize,
    pub strategies: Vec<StrategyOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyOut {
    pub model: String,
    pub response: ResponseModel,
    pub rank0: String,
    pub max_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<f64>>,
    pub ranks: Vec<RankOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<Vec<StrategyOut>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionStrategyOut {
    pub rank: usize,
    #[serde(flatten)]
    pub strategy: StrategyOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionEqOut {
    pub awareness: PartitionAwareness,
    pub response: ResponseModel,
    pub rank0: String,
    pub strategies: Vec<PartitionStrategyOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankGameOut {
    pub game: Value,
    pub nash: Vec<ProfileOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoEqOut {
    /// Root actions of the players that have a root.
    pub profile: Vec<String>,
    /// Action of every node of the input graph.
    pub nodes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOut {
    pub graph: Value,
    /// Input node id to the id of the node that stands for it.
    pub mapping: BTreeMap<String, String>,
    pub complexity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub nodes: BTreeMap<String, Rank>,
    /// Keyed by 1-based player.
    pub roots: BTreeMap<String, Rank>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsOut {
    pub model: String,
    pub seed: u64,
    pub steps: usize,
    pub trajectory: Trajectory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Vec<MixedStrategy>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuzzleOut {
    #[serde(flatten)]
    pub transcript: Transcript,
    /// Pairs the sum-knower names last.
    pub witnesses: Vec<PairOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOut {
    pub params: FitParams,
    pub log_likelihood: f64,
    pub evaluated: usize,
    pub predicted: Vec<StrategyOut>,
}
