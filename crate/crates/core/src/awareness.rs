//! Finite awareness structures as belief graphs.
//!
//! Every node is a real or phantom agent: it is owned by a player, carries
//! that agent's belief about the state of nature, and for every player `j`
//! points at the node describing how it pictures `j`. A node's belief about
//! its own owner is itself (self-awareness).
//!
//! Hanging nodes are rank-0 phantoms. Their beliefs about other players point
//! at shared rank-0 closure nodes so that the graph stays complete, but they
//! are treated as leaves when ranking and do not best-respond when solving:
//! they may take any action the configured rank-0 rule plays with maximal
//! probability.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{action_utilities_in, argmax_set, Game, Profile, Strategy, DEFAULT_ENUM_CAP};
use crate::strategic::Rank0Rule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    /// 0-based player index.
    pub owner: usize,
    pub theta: String,
    pub hanging: bool,
    /// Node index for every player, own entry included.
    pub beliefs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefGraph {
    n: usize,
    theta_space: Vec<String>,
    nodes: Vec<Node>,
    roots: Vec<Option<usize>>,
}

/// A broken invariant reported by [`BeliefGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoRoots,
    DuplicateId { node: String },
    BadOwner { node: String, owner: usize },
    BeliefArity { node: String, found: usize, expected: usize },
    DanglingBelief { node: String, player: usize },
    SelfAwareness { node: String, target: String },
    WrongOwner { node: String, player: usize, target: String },
    UnknownTheta { node: String, theta: String },
    BadRoot { player: usize },
    Unreachable { node: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoots => write!(f, "graph has no root nodes"),
            Violation::DuplicateId { node } => write!(f, "node id `{node}` is used twice"),
            Violation::BadOwner { node, owner } => write!(f, "node `{node}` has owner {owner} outside the player set"),
            Violation::BeliefArity { node, found, expected } => {
                write!(f, "node `{node}` has {found} beliefs, expected {expected}")
            }
            Violation::DanglingBelief { node, player } => {
                write!(f, "node `{node}` belief about player {player} targets no node")
            }
            Violation::SelfAwareness { node, target } => {
                write!(f, "node `{node}` violates self-awareness: its belief about its owner is `{target}`")
            }
            Violation::WrongOwner { node, player, target } => {
                write!(f, "node `{node}` belief about player {player} targets `{target}`, owned by another player")
            }
            Violation::UnknownTheta { node, theta } => write!(f, "node `{node}` has theta `{theta}` outside theta_space"),
            Violation::BadRoot { player } => write!(f, "root of player {player} is missing or owned by someone else"),
            Violation::Unreachable { node } => write!(f, "node `{node}` is unreachable from every root"),
        }
    }
}

impl BeliefGraph {
    /// Assembles a graph without checking it; see [`BeliefGraph::validate`].
    pub fn from_parts(n: usize, theta_space: Vec<String>, nodes: Vec<Node>, roots: Vec<Option<usize>>) -> Self {
        Self { n, theta_space, nodes, roots }
    }

    /// Assembles and validates a graph.
    pub fn new(n: usize, theta_space: Vec<String>, nodes: Vec<Node>, roots: Vec<Option<usize>>) -> Result<Self> {
        let g = Self::from_parts(n, theta_space, nodes, roots);
        let v = g.validate();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(v))
        }
    }

    pub fn n_players(&self) -> usize {
        self.n
    }

    pub fn theta_space(&self) -> &[String] {
        &self.theta_space
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &Node {
        &self.nodes[idx]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Root node of each real player, if that player has one.
    pub fn roots(&self) -> &[Option<usize>] {
        &self.roots
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|v| v.id == id)
    }

    /// Every broken invariant; empty when the graph is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let thetas: BTreeSet<&str> = self.theta_space.iter().map(String::as_str).collect();
        for v in &self.nodes {
            if !seen.insert(v.id.as_str()) {
                out.push(Violation::DuplicateId { node: v.id.clone() });
            }
            if v.owner >= self.n {
                out.push(Violation::BadOwner { node: v.id.clone(), owner: v.owner + 1 });
                continue;
            }
            if !thetas.contains(v.theta.as_str()) {
                out.push(Violation::UnknownTheta { node: v.id.clone(), theta: v.theta.clone() });
            }
            if v.beliefs.len() != self.n {
                out.push(Violation::BeliefArity { node: v.id.clone(), found: v.beliefs.len(), expected: self.n });
                continue;
            }
            for (j, &t) in v.beliefs.iter().enumerate() {
                let Some(target) = self.nodes.get(t) else {
                    out.push(Violation::DanglingBelief { node: v.id.clone(), player: j + 1 });
                    continue;
                };
                if j == v.owner && target.id != v.id {
                    out.push(Violation::SelfAwareness { node: v.id.clone(), target: target.id.clone() });
                } else if target.owner != j {
                    out.push(Violation::WrongOwner { node: v.id.clone(), player: j + 1, target: target.id.clone() });
                }
            }
        }
        if self.roots.len() != self.n || self.roots.iter().all(Option::is_none) {
            out.push(Violation::NoRoots);
            return out;
        }
        for (i, r) in self.roots.iter().enumerate() {
            if let Some(r) = r {
                if self.nodes.get(*r).is_none_or(|v| v.owner != i) {
                    out.push(Violation::BadRoot { player: i + 1 });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        let order = self.bfs_order();
        let mut reached = vec![false; self.nodes.len()];
        for &v in &order {
            reached[v] = true;
        }
        for (v, ok) in reached.iter().enumerate() {
            if !ok {
                out.push(Violation::Unreachable { node: self.nodes[v].id.clone() });
            }
        }
        out
    }

    /// Nodes reachable from the roots, in breadth-first order (roots by
    /// player, then beliefs by player).
    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for r in self.roots.iter().flatten() {
            if !seen[*r] {
                seen[*r] = true;
                queue.push_back(*r);
            }
        }
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &t in &self.nodes[v].beliefs {
                if t < seen.len() && !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(v))
        }
    }

    /// Same graph up to node names: owners, thetas, hanging flags, roots and
    /// belief edges agree after breadth-first renumbering.
    pub fn same_shape(&self, other: &BeliefGraph) -> bool {
        if self.n != other.n || self.nodes.len() != other.nodes.len() {
            return false;
        }
        let (a, b) = (self.bfs_order(), other.bfs_order());
        if a.len() != b.len() {
            return false;
        }
        let renum = |order: &[usize], len: usize| {
            let mut pos = vec![usize::MAX; len];
            for (k, &v) in order.iter().enumerate() {
                pos[v] = k;
            }
            pos
        };
        let (pa, pb) = (renum(&a, self.nodes.len()), renum(&b, other.nodes.len()));
        let roots_a: Vec<Option<usize>> = self.roots.iter().map(|r| r.map(|v| pa[v])).collect();
        let roots_b: Vec<Option<usize>> = other.roots.iter().map(|r| r.map(|v| pb[v])).collect();
        roots_a == roots_b
            && a.iter().zip(&b).all(|(&u, &v)| {
                let (x, y) = (&self.nodes[u], &other.nodes[v]);
                x.owner == y.owner
                    && x.theta == y.theta
                    && x.hanging == y.hanging
                    && x.beliefs.iter().map(|&t| pa[t]).eq(y.beliefs.iter().map(|&t| pb[t]))
            })
    }
}

/// A minimized graph with the class of every input node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimized {
    pub graph: BeliefGraph,
    /// `mapping[v]` is the minimized node standing for input node `v`.
    pub mapping: Vec<usize>,
}

/// Merges agents with identical awareness (the graph of the reflexive game).
///
/// Moore-style partition refinement: start from classes keyed by
/// `(owner, theta, hanging)` and split by the classes of belief targets until
/// stable. Output nodes appear in breadth-first order and keep the id of the
/// first input node of their class met in that order, so the result is
/// canonical and `minimize` is idempotent.
pub fn minimize(graph: &BeliefGraph) -> Result<Minimized> {
    graph.ensure_valid()?;
    let nodes = &graph.nodes;
    let mut keys: HashMap<(usize, &str, bool), usize> = HashMap::new();
    let mut class: Vec<usize> = nodes
        .iter()
        .map(|v| {
            let next = keys.len();
            *keys.entry((v.owner, v.theta.as_str(), v.hanging)).or_insert(next)
        })
        .collect();
    let mut count = keys.len();
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let refined: Vec<usize> = nodes
            .iter()
            .enumerate()
            .map(|(v, node)| {
                let sig = (class[v], node.beliefs.iter().map(|&t| class[t]).collect::<Vec<_>>());
                let next = sigs.len();
                *sigs.entry(sig).or_insert(next)
            })
            .collect();
        let new_count = sigs.len();
        class = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    let order = graph.bfs_order();
    let mut class_pos = vec![usize::MAX; count];
    let mut reps = Vec::with_capacity(count);
    for &v in &order {
        if class_pos[class[v]] == usize::MAX {
            class_pos[class[v]] = reps.len();
            reps.push(v);
        }
    }
    let mapping: Vec<usize> = class.iter().map(|&c| class_pos[c]).collect();
    let new_nodes = reps
        .iter()
        .map(|&v| {
            let node = &nodes[v];
            Node {
                id: node.id.clone(),
                owner: node.owner,
                theta: node.theta.clone(),
                hanging: node.hanging,
                beliefs: node.beliefs.iter().map(|&t| mapping[t]).collect(),
            }
        })
        .collect();
    let roots = graph.roots.iter().map(|r| r.map(|v| mapping[v])).collect();
    Ok(Minimized {
        graph: BeliefGraph::from_parts(graph.n, graph.theta_space.clone(), new_nodes, roots),
        mapping,
    })
}

/// Node count of the minimized graph.
pub fn complexity(graph: &BeliefGraph) -> Result<usize> {
    Ok(minimize(graph)?.graph.len())
}

/// Reflexion rank of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    Finite(usize),
    /// A cycle of non-self beliefs is reachable (common-knowledge component).
    Unbounded,
}

impl Serialize for Rank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(k) => s.serialize_u64(*k as u64),
            Rank::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) => Ok(Rank::Finite(k)),
            Raw::Word(w) if w == "unbounded" => Ok(Rank::Unbounded),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("invalid rank `{w}`"))),
        }
    }
}

/// Length of the longest belief path from `node` down to a leaf. Self-loops
/// are ignored and hanging nodes are leaves.
pub fn reflexion_rank(graph: &BeliefGraph, node: usize) -> Rank {
    let mut memo: Vec<Option<Rank>> = vec![None; graph.nodes.len()];
    let mut on_stack = vec![false; graph.nodes.len()];
    rank_dfs(graph, node, &mut memo, &mut on_stack)
}

/// Ranks of every node.
pub fn reflexion_ranks(graph: &BeliefGraph) -> Vec<Rank> {
    let mut memo: Vec<Option<Rank>> = vec![None; graph.nodes.len()];
    let mut on_stack = vec![false; graph.nodes.len()];
    (0..graph.nodes.len()).map(|v| rank_dfs(graph, v, &mut memo, &mut on_stack)).collect()
}

fn rank_dfs(graph: &BeliefGraph, v: usize, memo: &mut [Option<Rank>], on_stack: &mut [bool]) -> Rank {
    if let Some(r) = memo[v] {
        return r;
    }
    if on_stack[v] {
        return Rank::Unbounded;
    }
    let node = &graph.nodes[v];
    if node.hanging {
        memo[v] = Some(Rank::Finite(0));
        return Rank::Finite(0);
    }
    on_stack[v] = true;
    let mut best = Rank::Finite(0);
    for (j, &t) in node.beliefs.iter().enumerate() {
        if j == node.owner || t == v {
            continue;
        }
        best = match rank_dfs(graph, t, memo, on_stack) {
            Rank::Unbounded => Rank::Unbounded,
            Rank::Finite(k) => best.max(Rank::Finite(k + 1)),
        };
        if best == Rank::Unbounded {
            break;
        }
    }
    on_stack[v] = false;
    memo[v] = Some(best);
    best
}

/// `n` real agents, each correctly modeling everyone: node `i` believes
/// player `j` is node `j`.
pub fn common_knowledge_graph(n: usize, theta: &str) -> BeliefGraph {
    assert!(n >= 1, "a belief graph needs at least one player");
    let nodes = (0..n)
        .map(|i| Node { id: (i + 1).to_string(), owner: i, theta: theta.to_string(), hanging: false, beliefs: (0..n).collect() })
        .collect();
    BeliefGraph::from_parts(n, vec![theta.to_string()], nodes, (0..n).map(Some).collect())
}

/// Nested description of one real agent's beliefs. A node without beliefs is
/// a hanging (rank 0) agent; missing beliefs of a non-hanging node are filled
/// with hanging agents.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeNode {
    /// 1-based player; optional below the root (taken from the belief key).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<usize>,
    /// Inherited from the parent when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    /// Keyed by 1-based player number.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub beliefs: BTreeMap<String, TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeliefTree {
    pub players: usize,
    /// Default theta for roots that do not set one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    pub roots: Vec<TreeNode>,
}

struct TreeBuilder {
    n: usize,
    nodes: Vec<Node>,
    closure: BTreeMap<(usize, String), usize>,
}

impl TreeBuilder {
    fn child_name(&self, parent: &str, owner: usize) -> String {
        if self.n <= 9 {
            format!("{parent}{}", owner + 1)
        } else {
            format!("{parent}.{}", owner + 1)
        }
    }

    fn push(&mut self, id: String, owner: usize, theta: String, hanging: bool) -> usize {
        let idx = self.nodes.len();
        let mut beliefs = vec![usize::MAX; self.n];
        beliefs[owner] = idx;
        self.nodes.push(Node { id, owner, theta, hanging, beliefs });
        idx
    }

    fn closure_node(&mut self, owner: usize, theta: &str) -> usize {
        if let Some(&v) = self.closure.get(&(owner, theta.to_string())) {
            return v;
        }
        let v = self.push(format!("rank0-{}-{}", owner + 1, theta), owner, theta.to_string(), true);
        self.closure.insert((owner, theta.to_string()), v);
        for j in 0..self.n {
            if j != owner {
                let t = self.closure_node(j, theta);
                self.nodes[v].beliefs[j] = t;
            }
        }
        v
    }

    fn build(&mut self, tree: &TreeNode, id: String, owner: usize, theta: String) -> Result<usize> {
        if let Some(o) = tree.owner {
            if o != owner + 1 {
                return Err(Error::InvalidTree(format!("node `{id}` is listed under player {} but declares owner {o}", owner + 1)));
            }
        }
        let theta = tree.theta.clone().unwrap_or(theta);
        let hanging = tree.beliefs.is_empty();
        let v = self.push(id.clone(), owner, theta.clone(), hanging);
        let mut children: BTreeMap<usize, &TreeNode> = BTreeMap::new();
        for (key, child) in &tree.beliefs {
            let j: usize = key
                .parse()
                .ok()
                .filter(|j| (1..=self.n).contains(j))
                .ok_or_else(|| Error::InvalidTree(format!("node `{id}` has a belief about nonexistent player `{key}`")))?;
            if j - 1 == owner {
                return Err(Error::InvalidTree(format!("node `{id}` lists a belief about its own player {j}")));
            }
            children.insert(j - 1, child);
        }
        for j in 0..self.n {
            if j == owner {
                continue;
            }
            let t = if hanging {
                self.closure_node(j, &theta)
            } else {
                let empty = TreeNode::default();
                let child = children.get(&j).copied().unwrap_or(&empty);
                let name = self.child_name(&id, j);
                self.build(child, name, j, theta.clone())?
            };
            self.nodes[v].beliefs[j] = t;
        }
        Ok(v)
    }
}

/// Expands nested belief descriptions into an explicit graph, closing hanging
/// agents over shared rank-0 nodes.
pub fn graph_from_tree(tree: &BeliefTree) -> Result<BeliefGraph> {
    let n = tree.players;
    if n == 0 {
        return Err(Error::InvalidTree("a belief tree needs at least one player".into()));
    }
    if tree.roots.is_empty() {
        return Err(Error::InvalidTree("a belief tree needs at least one root".into()));
    }
    let mut b = TreeBuilder { n, nodes: Vec::new(), closure: BTreeMap::new() };
    let mut roots = vec![None; n];
    for root in &tree.roots {
        let owner = root.owner.ok_or_else(|| Error::InvalidTree("root nodes must declare their owner".into()))?;
        if !(1..=n).contains(&owner) {
            return Err(Error::InvalidTree(format!("root owner {owner} is not a player in 1..={n}")));
        }
        if roots[owner - 1].is_some() {
            return Err(Error::InvalidTree(format!("player {owner} has two roots")));
        }
        let theta = root
            .theta
            .clone()
            .or_else(|| tree.theta.clone())
            .ok_or_else(|| Error::InvalidTree(format!("root of player {owner} has no theta and the tree sets no default")))?;
        roots[owner - 1] = Some(b.build(root, owner.to_string(), owner - 1, theta)?);
    }
    let theta_space: BTreeSet<String> = b.nodes.iter().map(|v| v.theta.clone()).collect();
    BeliefGraph::new(n, theta_space.into_iter().collect(), b.nodes, roots)
}

/// One informational equilibrium.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumAssignment {
    /// Action per node of the minimized graph.
    pub class_actions: Vec<usize>,
    /// Action per node of the input graph (equal on merged nodes).
    pub node_actions: Vec<usize>,
    /// Action of each real player's root, if it has one.
    pub root_actions: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct InfoEquilibria {
    pub minimized: Minimized,
    /// Sorted lexicographically by `class_actions`.
    pub assignments: Vec<EquilibriumAssignment>,
}

impl InfoEquilibria {
    /// Distinct root-action profiles (players without roots omitted).
    pub fn root_profiles(&self) -> BTreeSet<Vec<usize>> {
        self.assignments.iter().map(|a| a.root_actions.iter().flatten().copied().collect()).collect()
    }
}

fn check_graph_against_game(graph: &BeliefGraph, game: &Game) -> Result<()> {
    if graph.n_players() != game.n_players() {
        return Err(Error::Domain(format!(
            "belief graph has {} players, game has {}",
            graph.n_players(),
            game.n_players()
        )));
    }
    for v in graph.nodes() {
        if !game.has_theta(&v.theta) {
            return Err(Error::UnknownTheta(v.theta.clone()));
        }
    }
    Ok(())
}

/// Pure-action assignments to the nodes of `graph` (taken as given, without
/// merging) in which every non-hanging node best-responds under its own theta
/// to the actions of its belief targets. Lexicographic order.
pub fn enumerate_assignments(graph: &BeliefGraph, game: &Game, rank0: &dyn Rank0Rule, cap: u64) -> Result<Vec<Vec<usize>>> {
    graph.ensure_valid()?;
    check_graph_against_game(graph, game)?;
    let nodes = graph.nodes();
    let mut rank0_cache: HashMap<(usize, &str), Vec<usize>> = HashMap::new();
    let mut allowed: Vec<Vec<usize>> = Vec::with_capacity(nodes.len());
    for v in nodes {
        if v.hanging {
            let key = (v.owner, v.theta.as_str());
            let modes = match rank0_cache.entry(key) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(rank0.strategy(&game.at_theta(&v.theta)?, v.owner).modes()),
            };
            allowed.push(modes.clone());
        } else {
            allowed.push((0..game.n_actions(v.owner)).collect());
        }
    }
    let size = allowed.iter().try_fold(1u128, |acc, a| acc.checked_mul(a.len() as u128)).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::Size { what: "informational-equilibrium class assignments", size, cap });
    }
    let tensors: Vec<&[f64]> = nodes.iter().map(|v| game.theta_tensor(&v.theta)).collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut idx = vec![0usize; nodes.len()];
    let mut actions: Vec<usize> = allowed.iter().map(|a| a[0]).collect();
    loop {
        let ok = nodes.iter().enumerate().all(|(k, v)| {
            if v.hanging {
                return true;
            }
            let opp = Profile(v.beliefs.iter().map(|&t| Strategy::Pure(actions[t])).collect());
            let util = action_utilities_in(game, tensors[k], &opp, v.owner);
            argmax_set(&util).contains(&actions[k])
        });
        if ok {
            out.push(actions.clone());
        }
        let mut k = nodes.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < allowed[k].len() {
                actions[k] = allowed[k][idx[k]];
                break;
            }
            idx[k] = 0;
            actions[k] = allowed[k][0];
        }
    }
}

/// All informational equilibria of `graph` in `game`, with the default cap.
pub fn informational_equilibrium(graph: &BeliefGraph, game: &Game, rank0: &dyn Rank0Rule) -> Result<InfoEquilibria> {
    informational_equilibrium_with_cap(graph, game, rank0, DEFAULT_ENUM_CAP)
}

/// Minimizes the graph (so equal awareness implies equal action), enumerates
/// pure actions per class and keeps assignments where every agent
/// best-responds to its beliefs. May be empty.
pub fn informational_equilibrium_with_cap(
    graph: &BeliefGraph,
    game: &Game,
    rank0: &dyn Rank0Rule,
    cap: u64,
) -> Result<InfoEquilibria> {
    check_graph_against_game(graph, game)?;
    let minimized = minimize(graph)?;
    let classes = enumerate_assignments(&minimized.graph, game, rank0, cap)?;
    let assignments = classes
        .into_iter()
        .map(|class_actions| {
            let node_actions = minimized.mapping.iter().map(|&c| class_actions[c]).collect();
            let root_actions = minimized.graph.roots().iter().map(|r| r.map(|c| class_actions[c])).collect();
            EquilibriumAssignment { class_actions, node_actions, root_actions }
        })
        .collect();
    Ok(InfoEquilibria { minimized, assignments })
}
