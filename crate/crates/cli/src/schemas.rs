use std::collections::BTreeMap;

use reflex_core::io;
use serde_json::{json, Value};

const DRAFT: &str = "https://json-schema.org/draft/2020-12/schema";

fn strategy() -> Value {
    json!({
        "type": "object",
        "required": ["player", "actions", "probs"],
        "properties": {
            "player": {"type": "integer", "minimum": 1},
            "actions": {"type": "array", "items": {"type": "string"}},
            "probs": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}}
        }
    })
}

fn response() -> Value {
    json!({
        "oneOf": [
            {"type": "object", "required": ["kind"], "properties": {"kind": {"const": "best"}}},
            {"type": "object", "required": ["kind", "lambda"], "properties": {"kind": {"const": "qbr"}, "lambda": {"type": "number", "minimum": 0}}}
        ]
    })
}

fn profile_list(title: &str) -> Value {
    json!({
        "$schema": DRAFT,
        "title": title,
        "type": "array",
        "items": {"type": "object", "required": ["profile"], "properties": {"profile": {"type": "array", "items": {"type": "string"}}}}
    })
}

fn rank() -> Value {
    json!({"oneOf": [{"type": "integer", "minimum": 0}, {"const": "unbounded"}]})
}

/// Input schemas under `input.*`, subcommand outputs under `output.*`.
pub fn all() -> BTreeMap<String, Value> {
    let inputs = io::schemas();
    let embedded = |name: &str| {
        let mut v = inputs[name].clone();
        v.as_object_mut().unwrap().remove("$schema");
        v
    };
    let game = embedded("game");
    let graph = embedded("belief_graph");
    let mut m: BTreeMap<String, Value> = inputs.iter().map(|(k, v)| (format!("input.{k}"), v.clone())).collect();
    let mut out = |name: &str, v: Value| {
        m.insert(format!("output.{name}"), v);
    };
    out("nash", profile_list("pure Nash equilibria"));
    out(
        "qbr",
        json!({"$schema": DRAFT, "title": "quantal best responses", "type": "object", "required": ["lambda", "strategies"],
               "properties": {"lambda": {"type": "number"}, "strategies": {"type": "array", "items": strategy()}}}),
    );
    let hierarchy = json!({
        "$schema": DRAFT,
        "title": "hierarchy strategies",
        "type": "object",
        "required": ["model", "response", "rank0", "max_rank", "ranks"],
        "properties": {
            "model": {"enum": ["level-k", "ch", "qch"]},
            "response": response(),
            "rank0": {"type": "string"},
            "max_rank": {"type": "integer", "minimum": 0},
            "distribution": {"type": "array", "items": {"type": "number"}},
            "ranks": {"type": "array", "items": {"type": "object", "required": ["rank", "strategies"],
                "properties": {"rank": {"type": "integer"}, "strategies": {"type": "array", "items": strategy()}}}},
            "population": {"type": "array", "items": strategy()}
        }
    });
    for name in ["level-k", "ch", "qch"] {
        out(name, hierarchy.clone());
    }
    out(
        "partition-eq",
        json!({"$schema": DRAFT, "title": "reflexive-partition equilibrium", "type": "object",
               "required": ["awareness", "response", "rank0", "strategies"],
               "properties": {"awareness": {"enum": ["level_k_style", "rpm_style"]}, "response": response(),
                              "rank0": {"type": "string"},
                              "strategies": {"type": "array", "items": {"allOf": [strategy(), {"required": ["rank"], "properties": {"rank": {"type": "integer"}}}]}}}}),
    );
    out(
        "rank-game",
        json!({"$schema": DRAFT, "title": "game of ranks", "type": "object", "required": ["game", "nash"],
               "properties": {"game": game, "nash": profile_list("pure Nash equilibria of the game of ranks")}}),
    );
    out(
        "info-eq",
        json!({"$schema": DRAFT, "title": "informational equilibria", "type": "array", "items": {
            "type": "object", "required": ["profile", "nodes"],
            "properties": {"profile": {"type": "array", "items": {"type": "string"}},
                           "nodes": {"type": "object", "additionalProperties": {"type": "string"}}}}}),
    );
    out(
        "minimize",
        json!({"$schema": DRAFT, "title": "minimized belief graph", "type": "object", "required": ["graph", "mapping", "complexity"],
               "properties": {"graph": graph,
                              "mapping": {"type": "object", "additionalProperties": {"type": "string"}},
                              "complexity": {"type": "integer", "minimum": 1}}}),
    );
    out(
        "rank",
        json!({"$schema": DRAFT, "title": "reflexion ranks", "type": "object", "required": ["nodes", "roots"],
               "properties": {"nodes": {"type": "object", "additionalProperties": rank()},
                              "roots": {"type": "object", "additionalProperties": rank()}}}),
    );
    let action = json!({"anyOf": [{"type": "number"}, {"type": "integer", "minimum": 0}, {"type": "array", "items": {"type": "number"}}]});
    let trajectory = json!({
        "$schema": DRAFT,
        "title": "dynamics run",
        "type": "object",
        "required": ["model", "seed", "steps", "trajectory"],
        "properties": {
            "model": {"enum": ["indicator", "reflexive", "cournot", "fp", "reinforce"]},
            "seed": {"type": "integer", "minimum": 0},
            "steps": {"type": "integer", "minimum": 0},
            "trajectory": {"type": "object", "required": ["stages"], "properties": {"stages": {"type": "array", "items": {
                "type": "object", "required": ["t", "actions", "payoffs"],
                "properties": {"t": {"type": "integer"}, "actions": {"type": "array", "items": action},
                               "payoffs": {"type": "array", "items": {"type": "number"}},
                               "forecasts": {"type": "array", "items": {"type": "array", "items": action}}}}}}},
            "frequencies": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
            "shifts": {"type": "array", "items": {"type": "number"}}
        },
        "description": "with --format csv: columns t,agent,action,payoff then forecast_1..forecast_n for the reflexive model; mixed actions are ';'-joined probabilities"
    });
    for name in ["dynamics", "fp", "reinforce"] {
        out(name, trajectory.clone());
    }
    let pair = json!({"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2});
    let outcome = json!({"type": "object", "required": ["pair", "dont_know_rounds", "named_by", "named_round"],
        "properties": {"pair": pair, "dont_know_rounds": {"type": "integer"}, "named_by": {"enum": ["sum", "product", "both", "nobody"]},
                       "named_round": {"type": ["integer", "null"]}}});
    out(
        "puzzle",
        json!({"$schema": DRAFT, "title": "sum-product transcript", "type": "object",
               "required": ["max_value", "mode", "rounds", "outcomes", "fixed_point", "witnesses"],
               "properties": {
                   "max_value": {"type": "integer", "minimum": 1},
                   "mode": {"enum": ["simultaneous", "sequential"]},
                   "rounds": {"type": "array", "items": {"type": "object",
                       "required": ["round", "candidates", "sum_knows", "product_knows", "survivors"],
                       "properties": {"round": {"type": "integer", "minimum": 1},
                                      "candidates": {"type": "array", "items": pair},
                                      "sum_knows": {"type": "array", "items": {"type": "boolean"}},
                                      "product_knows": {"type": "array", "items": {"type": "boolean"}},
                                      "survivors": {"type": "array", "items": pair}}}},
                   "outcomes": {"type": "array", "items": outcome},
                   "fixed_point": {"type": "boolean"},
                   "witnesses": {"type": "array", "items": outcome}
               }}),
    );
    out(
        "fit",
        json!({"$schema": DRAFT, "title": "grid fit", "type": "object", "required": ["params", "log_likelihood", "evaluated", "predicted"],
               "properties": {"params": {"type": "object", "required": ["tau", "lambda", "alpha", "epsilon"],
                                         "properties": {"tau": {"type": "number"}, "lambda": {"type": ["number", "null"]},
                                                        "alpha": {"type": "number"}, "epsilon": {"type": "number"}}},
                              "log_likelihood": {"type": "number"}, "evaluated": {"type": "integer"},
                              "predicted": {"type": "array", "items": strategy()}}}),
    );
    m
}
