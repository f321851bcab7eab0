//! JSON documents printed by the subcommands. Keys come out sorted because
//! `serde_json::Map` is ordered.

use ctsmin_core::minimise::{pair_names, Algorithm, Stage};
use ctsmin_core::{ChainResult, LatticeRelation, Poset, QuotientCoalgebra, UpgradeCoalgebra};
use serde_json::{json, Map, Value};

/// Pairs `x,y` with `x` before `y` in state order and a non-empty value.
pub fn relation_pairs(states: &Poset, conditions: &Poset, r: &LatticeRelation) -> Value {
    let mut pairs = Map::new();
    for x in 0..states.len() {
        for y in x + 1..states.len() {
            let value = r.get(x, y);
            if value.is_empty() {
                continue;
            }
            let names: Vec<Value> = conditions.names_of(value.bits()).map(Value::from).collect();
            pairs.insert(format!("{},{}", states.name(x), states.name(y)), Value::Array(names));
        }
    }
    Value::Object(pairs)
}

pub fn relation_report(algorithm: &str, iterations: usize, states: &Poset, conditions: &Poset, r: &LatticeRelation) -> Value {
    json!({
        "algorithm": algorithm,
        "iterations": iterations,
        "pairs": relation_pairs(states, conditions, r),
    })
}

fn order_pairs(p: &Poset) -> Value {
    p.hasse_pairs()
        .into_iter()
        .map(|(a, b)| json!([p.name(a), p.name(b)]))
        .collect()
}

fn stage_json(c: &UpgradeCoalgebra, states: &Poset, stage: &Stage) -> Value {
    let names = pair_names(c);
    let kernel: Vec<Vec<&str>> = stage
        .kernel
        .classes
        .iter()
        .map(|cls| cls.iter().map(|&i| names[i].as_str()).collect())
        .collect();
    let mut out = json!({
        "index": stage.index,
        "kernel": kernel,
        "states": stage.states.named(states),
        "order": order_pairs(&stage.factorisation.codomain),
        "matrix": relation_pairs(states, c.conditions(), &stage.matrix),
    });
    if let Some(terms) = &stage.terms {
        out["terms"] = json!(terms);
    }
    out
}

fn quotient_json(q: &QuotientCoalgebra) -> Value {
    let mut transitions = Vec::new();
    for (k, per_action) in q.transitions.iter().enumerate() {
        for (a, succ) in per_action.iter().enumerate() {
            for &(t, v) in succ {
                transitions.push(json!({
                    "from": q.states[k],
                    "action": q.actions.name(a),
                    "to": q.states[t],
                    "condition": q.conditions.name(v),
                }));
            }
        }
    }
    json!({
        "size": q.len(),
        "states": q.states,
        "order": order_pairs(&q.order),
        "transitions": transitions,
    })
}

pub fn chain_report(c: &UpgradeCoalgebra, states: &Poset, r: &ChainResult) -> Value {
    let algorithm = match r.algorithm {
        Algorithm::Chain => "chain",
        Algorithm::FixpointKernel => "fixpoint-kernel",
    };
    let stages: Vec<Value> = r.stages.iter().map(|s| stage_json(c, states, s)).collect();
    json!({
        "algorithm": algorithm,
        "stage": r.stage,
        "confirmed_at": r.confirmed_at,
        "separation_stage": r.separation_stage,
        "partition": r.final_stage().states.named(states),
        "stages": stages,
        "quotient": quotient_json(&r.quotient),
    })
}
