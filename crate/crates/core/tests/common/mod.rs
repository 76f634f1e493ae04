#![allow(dead_code)]

//! Shared helpers for the integration suites: a seeded random-automaton
//! generator over the alphabet `{f/2, a, b}` and small conveniences.

use rand::rngs::StdRng;
use rand::Rng;

use resta::bu::{BottomUpAutomaton, Rule, State};
use resta::trees::RankedAlphabet;

pub fn small_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap()
}

/// One random automaton with at most five states. Not necessarily
/// trimmed; callers trim and filter as needed.
pub fn random_automaton(rng: &mut StdRng) -> BottomUpAutomaton {
    let alphabet = small_alphabet();
    let n = rng.random_range(2..=5usize);
    let states: Vec<State> = (0..n).map(|i| State::new(format!("q{i}"))).collect();
    let mut rules: Vec<Rule> = Vec::new();
    for constant in ["a", "b"] {
        for target in &states {
            if rng.random_bool(0.35) {
                rules.push(Rule::new(constant, vec![], target.clone()));
            }
        }
    }
    for left in &states {
        for right in &states {
            for target in &states {
                if rng.random_bool(0.08) {
                    rules.push(Rule::new(
                        "f",
                        vec![left.clone(), right.clone()],
                        target.clone(),
                    ));
                }
            }
        }
    }
    let finals: Vec<State> = states
        .iter()
        .filter(|_| rng.random_bool(0.4))
        .cloned()
        .collect();
    BottomUpAutomaton::new(alphabet, states, finals, rules).unwrap()
}

/// Draws random automata, trims them, and keeps the first `count` whose
/// trimmed form still has states. Deterministic for a fixed seed.
pub fn trimmed_population(rng: &mut StdRng, count: usize) -> Vec<BottomUpAutomaton> {
    let mut out = Vec::new();
    while out.len() < count {
        let trimmed = random_automaton(rng).trim();
        if !trimmed.states().is_empty() {
            out.push(trimmed);
        }
    }
    out
}

/// A deterministic complete random automaton: one target per frame.
pub fn random_dfta(rng: &mut StdRng) -> resta::bu::Dfta {
    let alphabet = small_alphabet();
    let n = rng.random_range(1..=4usize);
    let states: Vec<State> = (0..n).map(|i| State::new(format!("d{i}"))).collect();
    let mut rules: Vec<Rule> = Vec::new();
    for constant in ["a", "b"] {
        let target = states[rng.random_range(0..n)].clone();
        rules.push(Rule::new(constant, vec![], target));
    }
    for left in &states {
        for right in &states {
            let target = states[rng.random_range(0..n)].clone();
            rules.push(Rule::new("f", vec![left.clone(), right.clone()], target));
        }
    }
    let finals: Vec<State> = states
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect();
    let auto = BottomUpAutomaton::new(alphabet, states, finals, rules).unwrap();
    let d = resta::bu::Dfta::from_automaton(auto);
    assert!(d.is_deterministic() && d.is_complete());
    d
}
