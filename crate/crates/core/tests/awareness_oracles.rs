use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflex_core::awareness::{
    common_knowledge_graph, enumerate_assignments, graph_from_tree, informational_equilibrium, minimize,
    reflexion_rank, BeliefGraph, BeliefTree, Node, Rank,
};
use reflex_core::game::{pure_nash, ARGMAX_TOL};
use reflex_core::strategic::Rank0Model;
use reflex_core::Game;

fn random_tensor(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    // small integer payoffs so ties and multiple equilibria show up
    (0..len).map(|_| rng.gen_range(0..4) as f64).collect()
}

fn theta_game(rng: &mut impl Rng, counts: &[usize], thetas: &[&str]) -> Game {
    let len = counts.iter().product::<usize>() * counts.len();
    let mut g = Game::new(Game::default_labels(counts), random_tensor(rng, len)).unwrap();
    for t in thetas {
        g = g.with_theta_variant(*t, random_tensor(rng, len)).unwrap();
    }
    g
}

/// Random valid graph: every node reachable, beliefs owner-consistent.
fn random_graph(rng: &mut impl Rng, n: usize, per_player: usize, thetas: &[&str], hanging_rate: f64) -> BeliefGraph {
    let mut owners = Vec::new();
    for p in 0..n {
        for _ in 0..rng.gen_range(1..=per_player) {
            owners.push(p);
        }
    }
    let of: Vec<Vec<usize>> = (0..n).map(|p| (0..owners.len()).filter(|&v| owners[v] == p).collect()).collect();
    let raw: Vec<Node> = owners
        .iter()
        .enumerate()
        .map(|(v, &p)| Node {
            id: format!("v{v}"),
            owner: p,
            theta: thetas[rng.gen_range(0..thetas.len())].to_string(),
            hanging: rng.gen_bool(hanging_rate),
            beliefs: (0..n).map(|j| if j == p { v } else { of[j][rng.gen_range(0..of[j].len())] }).collect(),
        })
        .collect();
    let roots: Vec<usize> = (0..n).map(|p| of[p][0]).collect();
    // keep only what the roots reach
    let mut keep = vec![false; raw.len()];
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    for &r in &roots {
        keep[r] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &t in &raw[v].beliefs {
            if !keep[t] {
                keep[t] = true;
                queue.push_back(t);
            }
        }
    }
    let new_index: Vec<usize> = keep.iter().scan(0, |c, &k| {
        let i = *c;
        if k {
            *c += 1;
        }
        Some(i)
    })
    .collect();
    let nodes: Vec<Node> = raw
        .iter()
        .enumerate()
        .filter(|&(v, _)| keep[v])
        .map(|(_, node)| Node { beliefs: node.beliefs.iter().map(|&t| new_index[t]).collect(), ..node.clone() })
        .collect();
    let theta_space = thetas.iter().map(|t| t.to_string()).collect();
    BeliefGraph::new(n, theta_space, nodes, roots.iter().map(|&r| Some(new_index[r])).collect()).unwrap()
}

/// Greatest bisimulation by pair elimination: related iff same owner, theta
/// and hanging flag, and every belief lands on related nodes.
fn bisimulation(g: &BeliefGraph) -> Vec<Vec<bool>> {
    let nodes = g.nodes();
    let len = nodes.len();
    let mut rel = vec![vec![false; len]; len];
    for a in 0..len {
        for b in 0..len {
            rel[a][b] = nodes[a].owner == nodes[b].owner && nodes[a].theta == nodes[b].theta && nodes[a].hanging == nodes[b].hanging;
        }
    }
    loop {
        let mut changed = false;
        for a in 0..len {
            for b in 0..len {
                if rel[a][b] && !(0..g.n_players()).all(|j| rel[nodes[a].beliefs[j]][nodes[b].beliefs[j]]) {
                    rel[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

fn classes(rel: &[Vec<bool>]) -> usize {
    let mut seen = vec![false; rel.len()];
    let mut count = 0;
    for a in 0..rel.len() {
        if !seen[a] {
            count += 1;
            for b in 0..rel.len() {
                if rel[a][b] {
                    seen[b] = true;
                }
            }
        }
    }
    count
}

#[test]
fn minimize_agrees_with_bisimulation_and_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(12345);
    for case in 0..50 {
        let n = rng.gen_range(1..=3);
        let g = random_graph(&mut rng, n, 4, &["a", "b"], 0.15);
        let m = minimize(&g).unwrap();
        let rel = bisimulation(&g);
        assert_eq!(m.graph.len(), classes(&rel), "case {case}");
        for a in 0..g.len() {
            for b in 0..g.len() {
                assert_eq!(m.mapping[a] == m.mapping[b], rel[a][b], "case {case} nodes {a} {b}");
                if m.mapping[a] == m.mapping[b] {
                    assert_eq!(g.node(a).owner, g.node(b).owner);
                    assert_eq!(g.node(a).theta, g.node(b).theta);
                }
            }
        }
        let again = minimize(&m.graph).unwrap();
        assert_eq!(again.graph, m.graph, "case {case}");
        assert!(again.mapping.iter().enumerate().all(|(v, &c)| v == c));
    }
}

fn check_assignment(g: &BeliefGraph, game: &Game, actions: &[usize]) -> bool {
    g.nodes().iter().all(|v| {
        if v.hanging {
            return true;
        }
        let t = game.at_theta(&v.theta).unwrap();
        let mut profile: Vec<usize> = v.beliefs.iter().map(|&b| actions[b]).collect();
        let mine = t.payoff(&profile, v.owner);
        (0..t.n_actions(v.owner)).all(|a| {
            profile[v.owner] = a;
            t.payoff(&profile, v.owner) <= mine + ARGMAX_TOL
        })
    })
}

#[test]
fn root_actions_survive_minimization() {
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let rule = Rank0Model::Uniform.rule();
    let mut nonempty = 0;
    for case in 0..20 {
        let n = 2;
        let g = random_graph(&mut rng, n, 3, &["a", "b"], 0.0);
        let game = theta_game(&mut rng, &[2, 2], &["a", "b"]);
        let eq = informational_equilibrium(&g, &game, rule.as_ref()).unwrap();
        for asg in &eq.assignments {
            assert!(check_assignment(&g, &game, &asg.node_actions), "case {case}");
        }
        // unmerged enumeration, then keep assignments that give bisimilar nodes equal actions
        let rel = bisimulation(&g);
        let raw = enumerate_assignments(&g, &game, rule.as_ref(), 1 << 20).unwrap();
        let from_raw: BTreeSet<Vec<usize>> = raw
            .iter()
            .filter(|a| (0..g.len()).all(|x| (0..g.len()).all(|y| !rel[x][y] || a[x] == a[y])))
            .map(|a| g.roots().iter().flatten().map(|&r| a[r]).collect())
            .collect();
        assert_eq!(eq.root_profiles(), from_raw, "case {case}");
        let on_min = informational_equilibrium(&eq.minimized.graph, &game, rule.as_ref()).unwrap();
        assert_eq!(on_min.root_profiles(), eq.root_profiles());
        if !from_raw.is_empty() {
            nonempty += 1;
        }
    }
    assert!(nonempty > 0);
}

#[test]
fn common_knowledge_equals_nash_on_100_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let rule = Rank0Model::Uniform.rule();
    for case in 0..100 {
        let cols = if case % 2 == 0 { 2 } else { 3 };
        let game = theta_game(&mut rng, &[2, cols], &["t"]);
        let eq = informational_equilibrium(&common_knowledge_graph(2, "t"), &game, rule.as_ref()).unwrap();
        let nash: BTreeSet<Vec<usize>> = pure_nash(&game.at_theta("t").unwrap()).unwrap().into_iter().collect();
        assert_eq!(eq.root_profiles(), nash, "case {case}");
    }
}

#[test]
fn three_node_theta_disagreement_hand_enumeration() {
    let rule = Rank0Model::Uniform.rule();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..30 {
        let game = theta_game(&mut rng, &[2, 2], &["a", "b"]);
        // 1 thinks theta = a; 1 thinks 2 thinks theta = b (and that 2 thinks 1 thinks b)
        let node = |id: &str, owner, theta: &str, beliefs| Node { id: id.into(), owner, theta: theta.into(), hanging: false, beliefs };
        let g = BeliefGraph::new(
            2,
            vec!["a".into(), "b".into()],
            vec![node("1", 0, "a", vec![0, 1]), node("12", 1, "b", vec![2, 1]), node("121", 0, "b", vec![2, 1])],
            vec![Some(0), None],
        )
        .unwrap();
        let ua = |p: [usize; 2], i| game.at_theta("a").unwrap().payoff(&p, i);
        let ub = |p: [usize; 2], i| game.at_theta("b").unwrap().payoff(&p, i);
        let mut expected = BTreeSet::new();
        for x1 in 0..2 {
            for x12 in 0..2 {
                for x121 in 0..2 {
                    let c1 = (0..2).all(|d| ua([d, x12], 0) <= ua([x1, x12], 0) + 1e-9);
                    let c12 = (0..2).all(|d| ub([x121, d], 1) <= ub([x121, x12], 1) + 1e-9);
                    let c121 = (0..2).all(|d| ub([d, x12], 0) <= ub([x121, x12], 0) + 1e-9);
                    if c1 && c12 && c121 {
                        expected.insert(vec![x1, x12, x121]);
                    }
                }
            }
        }
        let eq = informational_equilibrium(&g, &game, rule.as_ref()).unwrap();
        let got: BTreeSet<Vec<usize>> = eq.assignments.iter().map(|a| a.node_actions.clone()).collect();
        assert_eq!(got, expected, "case {case}");
    }
}

#[test]
fn theta_difference_blocks_merge_but_equal_hanging_agents_merge() {
    // in 1's view, 2 thinks 3 holds theta b while every other agent is at theta a
    let tree: BeliefTree = serde_json::from_str(
        r#"{"players": 3, "theta": "a", "roots": [{"owner": 1, "beliefs": {
            "2": {"beliefs": {"1": {}, "3": {"theta": "b"}}},
            "3": {"beliefs": {"1": {}, "2": {}}}
        }}]}"#,
    )
    .unwrap();
    let g = graph_from_tree(&tree).unwrap();
    let m = minimize(&g).unwrap();
    let at = |id: &str| m.mapping[g.index_of(id).unwrap()];
    // same owner and closure, different theta
    assert_ne!(at("123"), at("rank0-3-a"));
    // hanging player-1 agents with theta a are interchangeable
    assert_eq!(at("121"), at("131"));
    assert_eq!(at("121"), at("rank0-1-a"));
    assert!(m.graph.len() < g.len());
}

#[test]
fn ranks_of_simple_structures() {
    let tree: BeliefTree = serde_json::from_str(r#"{"players": 2, "theta": "a", "roots": [{"owner": 1}]}"#).unwrap();
    let g = graph_from_tree(&tree).unwrap();
    assert_eq!(reflexion_rank(&g, g.index_of("1").unwrap()), Rank::Finite(0));
    // 1 believes 2 is rank 1 (2 believes 1 is a hanging agent)
    let tree: BeliefTree =
        serde_json::from_str(r#"{"players": 2, "theta": "a", "roots": [{"owner": 1, "beliefs": {"2": {"beliefs": {"1": {}}}}}]}"#).unwrap();
    let g = graph_from_tree(&tree).unwrap();
    assert_eq!(reflexion_rank(&g, g.index_of("12").unwrap()), Rank::Finite(1));
    assert_eq!(reflexion_rank(&g, g.index_of("1").unwrap()), Rank::Finite(2));
    assert_eq!(reflexion_rank(&common_knowledge_graph(2, "a"), 1), Rank::Unbounded);
}
