//! JSON file formats.
//!
//! Players are numbered from 1 in every file; the library is 0-based.
//! Parse errors carry a field path such as `payoffs[1][0]` or
//! `nodes[2].beliefs.1`.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::awareness::{BeliefGraph, BeliefTree, Node};
use crate::error::{Error, Result};
use crate::game::{ContinuousGame, Game};
use crate::strategic::ReflexivePartition;

/// Parses JSON text, reporting syntax errors with line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(display_path(path), "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(display_path(path), "expected an array"))
}

fn display_path(path: &str) -> String {
    if path.is_empty() {
        "<root>".into()
    } else {
        path.into()
    }
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(path, format!("expected a nonnegative integer, got {v}")))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    // serde_json rejects NaN/inf literals, but strings like "NaN" must not sneak in either
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::parse(path, format!("expected a finite number, got {v}"))),
    }
}

fn as_string(v: &Value, path: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| Error::parse(path, format!("expected a string, got {v}")))
}

/// Node ids may be written as strings or integers.
fn as_id(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() || n.is_i64() => Ok(n.to_string()),
        _ => Err(Error::parse(path, format!("expected a node id, got {v}"))),
    }
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::parse(join(path, k), format!("unknown field; expected one of {allowed:?}"))),
        None => Ok(()),
    }
}

fn player_key(key: &str, n: usize, path: &str) -> Result<usize> {
    match key.parse::<usize>() {
        Ok(p) if (1..=n).contains(&p) => Ok(p - 1),
        _ => Err(Error::parse(path, format!("`{key}` is not a player in 1..={n}"))),
    }
}

/// Flattens a nested payoff array into the profile-major tensor.
fn flatten_payoffs(v: &Value, counts: &[usize], path: &str) -> Result<Vec<f64>> {
    let n = counts.len();
    let mut out = Vec::new();
    fn walk(v: &Value, counts: &[usize], n: usize, path: String, out: &mut Vec<f64>) -> Result<()> {
        let arr = v.as_array().ok_or_else(|| Error::parse(&path, "expected an array"))?;
        let (expected, leaf) = match counts.first() {
            Some(&k) => (k, false),
            None => (n, true),
        };
        if arr.len() != expected {
            let what = if leaf { "payoff entries (one per player)" } else { "entries (one per action)" };
            return Err(Error::parse(&path, format!("expected {expected} {what}, found {}", arr.len())));
        }
        for (k, item) in arr.iter().enumerate() {
            let p = format!("{path}[{k}]");
            if leaf {
                out.push(as_f64(item, &p)?);
            } else {
                walk(item, &counts[1..], n, p, out)?;
            }
        }
        Ok(())
    }
    walk(v, counts, n, path.to_string(), &mut out)?;
    Ok(out)
}

fn nest_payoffs(flat: &[f64], counts: &[usize]) -> Value {
    match counts.split_first() {
        None => json!(flat),
        Some((&k, rest)) => {
            let block = flat.len() / k;
            Value::Array((0..k).map(|a| nest_payoffs(&flat[a * block..(a + 1) * block], rest)).collect())
        }
    }
}

/// Reads a finite game.
pub fn game_from_value(v: &Value) -> Result<Game> {
    let obj = as_object(v, "")?;
    reject_unknown(obj, &["players", "actions", "payoffs", "theta_variants"], "")?;
    let actions_v = as_array(field(obj, "actions", "")?, "actions")?;
    let mut actions = Vec::with_capacity(actions_v.len());
    for (i, a) in actions_v.iter().enumerate() {
        let p = format!("actions[{i}]");
        let labels = as_array(a, &p)?
            .iter()
            .enumerate()
            .map(|(k, l)| as_string(l, &format!("{p}[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        if labels.is_empty() {
            return Err(Error::parse(p, "a player needs at least one action"));
        }
        actions.push(labels);
    }
    if let Some(pv) = obj.get("players") {
        let n = as_usize(pv, "players")?;
        if n != actions.len() {
            return Err(Error::parse("players", format!("{n} players but {} action lists", actions.len())));
        }
    }
    if actions.is_empty() {
        return Err(Error::parse("actions", "a game needs at least one player"));
    }
    let counts: Vec<usize> = actions.iter().map(Vec::len).collect();
    let payoffs = flatten_payoffs(field(obj, "payoffs", "")?, &counts, "payoffs")?;
    let mut game = Game::new(actions, payoffs)?;
    if let Some(tv) = obj.get("theta_variants") {
        for (label, t) in as_object(tv, "theta_variants")? {
            let flat = flatten_payoffs(t, &counts, &format!("theta_variants.{label}"))?;
            game = game.with_theta_variant(label.clone(), flat)?;
        }
    }
    Ok(game)
}

pub fn parse_game(text: &str) -> Result<Game> {
    game_from_value(&parse_json(text)?)
}

pub fn game_to_value(game: &Game) -> Value {
    let counts = game.action_counts();
    let n = game.n_players();
    let mut obj = json!({
        "players": n,
        "actions": (0..n).map(|i| game.labels(i)).collect::<Vec<_>>(),
        "payoffs": nest_payoffs(game.tensor(), &counts),
    });
    let variants: Map<String, Value> = game
        .theta_labels()
        .map(|l| (l.to_string(), nest_payoffs(game.at_theta(l).expect("listed label").tensor(), &counts)))
        .collect();
    if !variants.is_empty() {
        obj["theta_variants"] = Value::Object(variants);
    }
    obj
}

/// Reads an interval game: `{"family": "cournot_linear", "players", "theta", "c", "bounds"?}`.
pub fn continuous_game_from_value(v: &Value) -> Result<ContinuousGame> {
    let obj = as_object(v, "")?;
    reject_unknown(obj, &["family", "players", "theta", "c", "bounds"], "")?;
    let family = as_string(field(obj, "family", "")?, "family")?;
    if family != "cournot_linear" {
        return Err(Error::parse("family", format!("unknown family `{family}`; expected \"cournot_linear\"")));
    }
    let n = as_usize(field(obj, "players", "")?, "players")?;
    let theta = as_f64(field(obj, "theta", "")?, "theta")?;
    let c = match obj.get("c") {
        Some(c) => as_f64(c, "c")?,
        None => 0.0,
    };
    let mut game = ContinuousGame::cournot(n, theta, c)?;
    if let Some(b) = obj.get("bounds") {
        let arr = as_array(b, "bounds")?;
        if arr.len() != n {
            return Err(Error::parse("bounds", format!("expected {n} intervals, found {}", arr.len())));
        }
        let bounds = arr
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let p = format!("bounds[{i}]");
                match as_array(iv, &p)?.as_slice() {
                    [lo, hi] => Ok((as_f64(lo, &format!("{p}[0]"))?, as_f64(hi, &format!("{p}[1]"))?)),
                    _ => Err(Error::parse(p, "expected [lo, hi]")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        game = ContinuousGame::new(bounds, game.family().clone())?;
    }
    Ok(game)
}

/// Either kind of game file, told apart by the `family` field.
#[derive(Debug, Clone)]
pub enum AnyGame {
    Finite(Game),
    Continuous(ContinuousGame),
}

pub fn parse_any_game(text: &str) -> Result<AnyGame> {
    let v = parse_json(text)?;
    if v.get("family").is_some() {
        Ok(AnyGame::Continuous(continuous_game_from_value(&v)?))
    } else {
        Ok(AnyGame::Finite(game_from_value(&v)?))
    }
}

/// Reads a belief graph and validates it; every axiom violation is reported.
pub fn belief_graph_from_value(v: &Value) -> Result<BeliefGraph> {
    let obj = as_object(v, "")?;
    reject_unknown(obj, &["players", "theta_space", "nodes", "roots"], "")?;
    let n = as_usize(field(obj, "players", "")?, "players")?;
    if n == 0 {
        return Err(Error::parse("players", "a graph needs at least one player"));
    }
    let theta_space = as_array(field(obj, "theta_space", "")?, "theta_space")?
        .iter()
        .enumerate()
        .map(|(k, t)| as_string(t, &format!("theta_space[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let nodes_v = as_array(field(obj, "nodes", "")?, "nodes")?;

    struct Raw {
        id: String,
        owner: usize,
        theta: String,
        hanging: bool,
        beliefs: Vec<(usize, String, String)>,
    }
    let mut raw = Vec::with_capacity(nodes_v.len());
    let mut index: HashMap<String, usize> = HashMap::new();
    for (k, nv) in nodes_v.iter().enumerate() {
        let p = format!("nodes[{k}]");
        let no = as_object(nv, &p)?;
        reject_unknown(no, &["id", "owner", "theta", "beliefs", "hanging"], &p)?;
        let id = as_id(field(no, "id", &p)?, &join(&p, "id"))?;
        let owner_path = join(&p, "owner");
        let owner = as_usize(field(no, "owner", &p)?, &owner_path)?;
        if !(1..=n).contains(&owner) {
            return Err(Error::parse(owner_path, format!("owner {owner} is not a player in 1..={n}")));
        }
        let theta = as_string(field(no, "theta", &p)?, &join(&p, "theta"))?;
        let hanging = match no.get("hanging") {
            Some(h) => h.as_bool().ok_or_else(|| Error::parse(join(&p, "hanging"), "expected a boolean"))?,
            None => false,
        };
        let bp = join(&p, "beliefs");
        let mut beliefs = Vec::new();
        if let Some(b) = no.get("beliefs") {
            for (key, target) in as_object(b, &bp)? {
                let kp = join(&bp, key);
                beliefs.push((player_key(key, n, &kp)?, as_id(target, &kp)?, kp));
            }
        }
        if index.insert(id.clone(), k).is_some() {
            return Err(Error::parse(join(&p, "id"), format!("duplicate node id `{id}`")));
        }
        raw.push(Raw { id, owner: owner - 1, theta, hanging, beliefs });
    }

    let mut nodes: Vec<Node> = Vec::with_capacity(raw.len());
    let mut closure: BTreeMap<(usize, String), usize> = BTreeMap::new();
    for (k, r) in raw.iter().enumerate() {
        let mut beliefs = vec![usize::MAX; n];
        beliefs[r.owner] = k;
        for (player, target, kp) in &r.beliefs {
            beliefs[*player] = *index.get(target).ok_or_else(|| Error::parse(kp, format!("unknown node id `{target}`")))?;
        }
        nodes.push(Node { id: r.id.clone(), owner: r.owner, theta: r.theta.clone(), hanging: r.hanging, beliefs });
    }
    // hanging nodes may omit beliefs; those point at shared rank-0 nodes
    for k in 0..raw.len() {
        for j in 0..n {
            if nodes[k].beliefs[j] != usize::MAX {
                continue;
            }
            if !nodes[k].hanging {
                return Err(Error::parse(format!("nodes[{k}].beliefs"), format!("missing belief about player {}", j + 1)));
            }
            let theta = nodes[k].theta.clone();
            nodes[k].beliefs[j] = closure_node(&mut nodes, &mut closure, &mut index, n, j, &theta);
        }
    }

    let roots_obj = as_object(field(obj, "roots", "")?, "roots")?;
    let mut roots = vec![None; n];
    for (key, id) in roots_obj {
        let p = format!("roots.{key}");
        let player = player_key(key, n, &p)?;
        let id = as_id(id, &p)?;
        roots[player] = Some(*index.get(&id).ok_or_else(|| Error::parse(&p, format!("unknown node id `{id}`")))?);
    }
    BeliefGraph::new(n, theta_space, nodes, roots)
}

fn closure_node(
    nodes: &mut Vec<Node>,
    closure: &mut BTreeMap<(usize, String), usize>,
    index: &mut HashMap<String, usize>,
    n: usize,
    owner: usize,
    theta: &str,
) -> usize {
    if let Some(&v) = closure.get(&(owner, theta.to_string())) {
        return v;
    }
    let mut id = format!("rank0-{}-{}", owner + 1, theta);
    while index.contains_key(&id) {
        id.push('\'');
    }
    let v = nodes.len();
    let mut beliefs = vec![usize::MAX; n];
    beliefs[owner] = v;
    index.insert(id.clone(), v);
    nodes.push(Node { id, owner, theta: theta.to_string(), hanging: true, beliefs });
    closure.insert((owner, theta.to_string()), v);
    for j in 0..n {
        if j != owner {
            let t = closure_node(nodes, closure, index, n, j, theta);
            nodes[v].beliefs[j] = t;
        }
    }
    v
}

pub fn parse_belief_graph(text: &str) -> Result<BeliefGraph> {
    belief_graph_from_value(&parse_json(text)?)
}

pub fn belief_graph_to_value(g: &BeliefGraph) -> Value {
    let nodes: Vec<Value> = g
        .nodes()
        .iter()
        .map(|v| {
            let beliefs: Map<String, Value> = v
                .beliefs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != v.owner)
                .map(|(j, &t)| ((j + 1).to_string(), json!(g.node(t).id)))
                .collect();
            let mut o = json!({"id": v.id, "owner": v.owner + 1, "theta": v.theta, "beliefs": beliefs});
            if v.hanging {
                o["hanging"] = json!(true);
            }
            o
        })
        .collect();
    let roots: Map<String, Value> = g
        .roots()
        .iter()
        .enumerate()
        .filter_map(|(j, r)| r.map(|r| ((j + 1).to_string(), json!(g.node(r).id))))
        .collect();
    json!({"players": g.n_players(), "theta_space": g.theta_space(), "nodes": nodes, "roots": roots})
}

pub fn parse_belief_tree(text: &str) -> Result<BeliefTree> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

/// `{"classes": [[1-based agents of rank 0], [rank 1], ...]}`.
pub fn partition_from_value(v: &Value, n_agents: usize) -> Result<ReflexivePartition> {
    let obj = as_object(v, "")?;
    reject_unknown(obj, &["classes"], "")?;
    let classes_v = as_array(field(obj, "classes", "")?, "classes")?;
    let mut classes = Vec::with_capacity(classes_v.len());
    for (r, c) in classes_v.iter().enumerate() {
        let p = format!("classes[{r}]");
        let members = as_array(c, &p)?
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let ap = format!("{p}[{k}]");
                match as_usize(a, &ap)? {
                    a if (1..=n_agents).contains(&a) => Ok(a - 1),
                    a => Err(Error::parse(ap, format!("agent {a} is not in 1..={n_agents}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        classes.push(members);
    }
    ReflexivePartition::new(classes, n_agents)
}

pub fn parse_partition(text: &str, n_agents: usize) -> Result<ReflexivePartition> {
    partition_from_value(&parse_json(text)?, n_agents)
}

pub fn partition_to_value(p: &ReflexivePartition) -> Value {
    let classes: Vec<Vec<usize>> = p.classes().iter().map(|c| c.iter().map(|a| a + 1).collect()).collect();
    json!({ "classes": classes })
}

/// `{"counts": [[per-action counts of player 1], ...]}`.
pub fn counts_from_value(v: &Value, game: &Game) -> Result<Vec<Vec<u64>>> {
    let obj = as_object(v, "")?;
    reject_unknown(obj, &["counts"], "")?;
    let rows = as_array(field(obj, "counts", "")?, "counts")?;
    if rows.len() != game.n_players() {
        return Err(Error::parse("counts", format!("expected {} rows (one per player), found {}", game.n_players(), rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("counts[{i}]");
            let row = as_array(row, &p)?;
            if row.len() != game.n_actions(i) {
                return Err(Error::parse(&p, format!("expected {} entries, found {}", game.n_actions(i), row.len())));
            }
            row.iter().enumerate().map(|(a, c)| as_usize(c, &format!("{p}[{a}]")).map(|c| c as u64)).collect()
        })
        .collect()
}

pub fn parse_counts(text: &str, game: &Game) -> Result<Vec<Vec<u64>>> {
    counts_from_value(&parse_json(text)?, game)
}

/// JSON schemas of every input file format, keyed by format name.
pub fn schemas() -> BTreeMap<&'static str, Value> {
    let payoff_tree = json!({
        "description": "nested array indexed by player 1's action, then player 2's, ...; each leaf is an array with one payoff per player",
        "type": "array"
    });
    let mut m = BTreeMap::new();
    m.insert(
        "game",
        json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "finite game",
            "type": "object",
            "required": ["actions", "payoffs"],
            "additionalProperties": false,
            "properties": {
                "players": {"type": "integer", "minimum": 1},
                "actions": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": {"type": "string"}}},
                "payoffs": payoff_tree,
                "theta_variants": {"type": "object", "additionalProperties": payoff_tree}
            }
        }),
    );
    m.insert(
        "continuous_game",
        json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "interval game",
            "type": "object",
            "required": ["family", "players", "theta"],
            "additionalProperties": false,
            "properties": {
                "family": {"const": "cournot_linear"},
                "players": {"type": "integer", "minimum": 1},
                "theta": {"type": "number"},
                "c": {"type": "number", "minimum": 0, "default": 0},
                "bounds": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}}
            }
        }),
    );
    let id = json!({"type": ["string", "integer"]});
    m.insert(
        "belief_graph",
        json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "belief graph",
            "type": "object",
            "required": ["players", "theta_space", "nodes", "roots"],
            "additionalProperties": false,
            "properties": {
                "players": {"type": "integer", "minimum": 1},
                "theta_space": {"type": "array", "items": {"type": "string"}},
                "nodes": {"type": "array", "items": {
                    "type": "object",
                    "required": ["id", "owner", "theta"],
                    "additionalProperties": false,
                    "properties": {
                        "id": id,
                        "owner": {"type": "integer", "minimum": 1},
                        "theta": {"type": "string"},
                        "beliefs": {"type": "object", "patternProperties": {"^[0-9]+$": id}, "additionalProperties": false},
                        "hanging": {"type": "boolean", "default": false}
                    }
                }},
                "roots": {"type": "object", "patternProperties": {"^[0-9]+$": id}, "additionalProperties": false}
            }
        }),
    );
    m.insert(
        "belief_tree",
        json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "belief tree",
            "type": "object",
            "required": ["players", "roots"],
            "additionalProperties": false,
            "properties": {
                "players": {"type": "integer", "minimum": 1},
                "theta": {"type": "string"},
                "roots": {"type": "array", "items": {"$ref": "#/$defs/node"}}
            },
            "$defs": {"node": {
                "type": "object",
                "additionalProperties": false,
                "properties": {
                    "owner": {"type": "integer", "minimum": 1},
                    "theta": {"type": "string"},
                    "beliefs": {"type": "object", "patternProperties": {"^[0-9]+$": {"$ref": "#/$defs/node"}}, "additionalProperties": false}
                }
            }}
        }),
    );
    m.insert(
        "partition",
        json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "reflexive partition",
            "type": "object",
            "required": ["classes"],
            "additionalProperties": false,
            "properties": {
                "classes": {"description": "classes[k] lists the agents of rank k", "type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 1}}}
            }
        }),
    );
    m.insert(
        "counts",
        json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "title": "observed action counts",
            "type": "object",
            "required": ["counts"],
            "additionalProperties": false,
            "properties": {
                "counts": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}
            }
        }),
    );
    m
}
