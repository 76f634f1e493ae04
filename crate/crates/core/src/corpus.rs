//! Named witness languages and the generator families used throughout
//! the test suites and the command line.

use std::str::FromStr;

use crate::bu::{BottomUpAutomaton, Rule, State};
use crate::error::Error;
use crate::format::AnyAutomaton;
use crate::td::{TdRule, TopDownAutomaton};
use crate::trees::RankedAlphabet;
use crate::Result;

/// Bottom-up generator for the path language over `{f/2, a}`: trees
/// containing at least one root-to-leaf path of length exactly `n`.
///
/// States are `qstar, q0, ..., qn` with `q0` final; `q_k` is reached by
/// the terms with a path of length exactly `n - k`, and every `f`-rule
/// toward a numbered state is duplicated toward the unconstrained state
/// `qstar`. The automaton has `n + 2` states, against the `2^n + 1` of
/// the minimal deterministic recognizer.
pub fn gen_an(n: usize) -> Result<BottomUpAutomaton> {
    if n < 1 {
        return Err(Error::InvalidParameter("family index must be >= 1".into()));
    }
    let alphabet = RankedAlphabet::new([("f", 2), ("a", 0)])?;
    let qstar = State::from("qstar");
    let q = |k: usize| State::new(format!("q{k}"));
    let mut states: Vec<State> = vec![qstar.clone()];
    states.extend((0..=n).map(q));
    let mut rules = vec![
        Rule::new("a", vec![], qstar.clone()),
        Rule::new("a", vec![], q(n)),
        Rule::new("f", vec![qstar.clone(), qstar.clone()], qstar.clone()),
    ];
    for k in 1..=n {
        for other in states.iter().filter(|s| **s != q(0)) {
            rules.push(Rule::new("f", vec![q(k), other.clone()], q(k - 1)));
            rules.push(Rule::new("f", vec![other.clone(), q(k)], q(k - 1)));
            rules.push(Rule::new("f", vec![q(k), other.clone()], qstar.clone()));
            rules.push(Rule::new("f", vec![other.clone(), q(k)], qstar.clone()));
        }
    }
    BottomUpAutomaton::new(alphabet, states, [q(0)], rules)
}

/// Top-down generator for the same path language: `q0` is initial and
/// `q_{k-1}(f)` branches the obligation `q_k` to either child, the
/// other side being unconstrained (`qstar`). The automaton has `n + 2`
/// states.
pub fn gen_aprime_n(n: usize) -> Result<TopDownAutomaton> {
    if n < 1 {
        return Err(Error::InvalidParameter("family index must be >= 1".into()));
    }
    let alphabet = RankedAlphabet::new([("f", 2), ("a", 0)])?;
    let qstar = State::from("qstar");
    let q = |k: usize| State::new(format!("q{k}"));
    let mut states: Vec<State> = vec![qstar.clone()];
    states.extend((0..=n).map(q));
    let mut rules = vec![
        TdRule::new(qstar.clone(), "a", vec![]),
        TdRule::new(q(n), "a", vec![]),
        TdRule::new(qstar.clone(), "f", vec![qstar.clone(), qstar.clone()]),
    ];
    for k in 1..=n {
        rules.push(TdRule::new(q(k - 1), "f", vec![q(k), qstar.clone()]));
        rules.push(TdRule::new(q(k - 1), "f", vec![qstar.clone(), q(k)]));
    }
    TopDownAutomaton::new(alphabet, states, [q(0)], rules)
}

/// The five-state recognizer of `{f(a1,b1), f(a1,b2), f(a2,b2)}`; its
/// state `q1` accepts `{f(<>,b1)}`, which is not a residual, so the
/// automaton is not a residual automaton.
pub fn example1() -> BottomUpAutomaton {
    let alphabet =
        RankedAlphabet::new([("f", 2), ("a1", 0), ("b1", 0), ("a2", 0), ("b2", 0)])
            .expect("well-formed alphabet");
    let q = State::from;
    BottomUpAutomaton::new(
        alphabet,
        ["q1", "q2", "q3", "q4", "q5"].map(State::from),
        [q("q5")],
        [
            Rule::new("a1", vec![], q("q1")),
            Rule::new("b1", vec![], q("q2")),
            Rule::new("b2", vec![], q("q3")),
            Rule::new("a2", vec![], q("q4")),
            Rule::new("a1", vec![], q("q4")),
            Rule::new("f", vec![q("q1"), q("q2")], q("q5")),
            Rule::new("f", vec![q("q4"), q("q3")], q("q5")),
        ],
    )
    .expect("well-formed automaton")
}

/// Minimal recognizer of the six-term language
/// `{f(x,y) | x,y in {a,b,c}, x != y}`, which no top-down residual
/// automaton recognizes.
pub fn lprime() -> BottomUpAutomaton {
    let alphabet = RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0), ("c", 0)])
        .expect("well-formed alphabet");
    let q = State::from;
    let mut rules = vec![
        Rule::new("a", vec![], q("qa")),
        Rule::new("b", vec![], q("qb")),
        Rule::new("c", vec![], q("qc")),
    ];
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            if x != y {
                rules.push(Rule::new(
                    "f",
                    vec![State::new(format!("q{x}")), State::new(format!("q{y}"))],
                    q("qf"),
                ));
            }
        }
    }
    BottomUpAutomaton::new(
        alphabet,
        ["qa", "qb", "qc", "qf"].map(State::from),
        [q("qf")],
        rules,
    )
    .expect("well-formed automaton")
}

/// Minimal recognizer of `{f(a,b), f(b,a)}`: homogeneous but not
/// path-closed.
pub fn fab_fba() -> BottomUpAutomaton {
    let alphabet =
        RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).expect("well-formed alphabet");
    let q = State::from;
    BottomUpAutomaton::new(
        alphabet,
        ["qa", "qb", "qf"].map(State::from),
        [q("qf")],
        [
            Rule::new("a", vec![], q("qa")),
            Rule::new("b", vec![], q("qb")),
            Rule::new("f", vec![q("qa"), q("qb")], q("qf")),
            Rule::new("f", vec![q("qb"), q("qa")], q("qf")),
        ],
    )
    .expect("well-formed automaton")
}

/// Names accepted by [`gen_named`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedLanguage {
    Example1,
    LPrime,
    FabFba,
}

impl FromStr for NamedLanguage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example1" => Ok(NamedLanguage::Example1),
            "Lprime" | "lprime" => Ok(NamedLanguage::LPrime),
            "fab_fba" => Ok(NamedLanguage::FabFba),
            other => Err(Error::InvalidParameter(format!(
                "unknown language name `{other}`"
            ))),
        }
    }
}

pub fn gen_named(name: NamedLanguage) -> BottomUpAutomaton {
    match name {
        NamedLanguage::Example1 => example1(),
        NamedLanguage::LPrime => lprime(),
        NamedLanguage::FabFba => fab_fba(),
    }
}

/// Expected classification of one corpus language. Rule counts are
/// pinned only where they were derived by hand ahead of time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub path_closed: bool,
    pub homogeneous: bool,
    pub down_rfta: bool,
    pub prime_count_up: usize,
    pub prime_count_down: usize,
    pub canonical_up_states: usize,
    pub canonical_up_rules: Option<usize>,
    pub canonical_down_states: usize,
    pub canonical_down_rules: Option<usize>,
}

/// A corpus language with its expected classification.
pub struct CorpusEntry {
    pub name: &'static str,
    pub automaton: AnyAutomaton,
    pub expected: Classification,
}

/// The witness corpus: the three named languages plus the path-language
/// family for n = 1..3.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut entries = vec![
        CorpusEntry {
            name: "example1",
            automaton: AnyAutomaton::Up(example1()),
            expected: Classification {
                path_closed: false,
                homogeneous: false,
                down_rfta: true,
                prime_count_up: 5,
                prime_count_down: 5,
                canonical_up_states: 5,
                canonical_up_rules: Some(9),
                canonical_down_states: 5,
                canonical_down_rules: Some(9),
            },
        },
        CorpusEntry {
            name: "Lprime",
            automaton: AnyAutomaton::Up(lprime()),
            expected: Classification {
                path_closed: false,
                homogeneous: false,
                down_rfta: false,
                prime_count_up: 4,
                prime_count_down: 4,
                canonical_up_states: 4,
                canonical_up_rules: Some(9),
                canonical_down_states: 4,
                canonical_down_rules: Some(6),
            },
        },
        CorpusEntry {
            name: "fab_fba",
            automaton: AnyAutomaton::Up(fab_fba()),
            expected: Classification {
                path_closed: false,
                homogeneous: true,
                down_rfta: true,
                prime_count_up: 3,
                prime_count_down: 3,
                canonical_up_states: 3,
                canonical_up_rules: Some(4),
                canonical_down_states: 3,
                canonical_down_rules: Some(4),
            },
        },
    ];
    for n in 1..=3 {
        entries.push(CorpusEntry {
            name: match n {
                1 => "A1",
                2 => "A2",
                _ => "A3",
            },
            automaton: AnyAutomaton::Up(gen_an(n).expect("n >= 1")),
            expected: Classification {
                path_closed: false,
                homogeneous: false,
                down_rfta: true,
                prime_count_up: n + 2,
                prime_count_down: n + 2,
                canonical_up_states: n + 2,
                canonical_up_rules: None,
                canonical_down_states: n + 2,
                canonical_down_rules: None,
            },
        });
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{enumerate_terms, parse_term};

    #[test]
    fn gen_an_sizes_and_membership() {
        for n in 1..=4 {
            let a = gen_an(n).unwrap();
            assert_eq!(a.states().len(), n + 2, "n={n}");
            for t in enumerate_terms(a.alphabet(), 4) {
                assert_eq!(
                    a.accepts(&t).unwrap(),
                    t.has_path_of_length(n),
                    "n={n} t={t}"
                );
            }
        }
        assert!(gen_an(0).is_err());
    }

    #[test]
    fn gen_an_hand_runs() {
        let a = gen_an(2).unwrap();
        assert_eq!(a.states().len(), 4);
        let t = parse_term(a.alphabet(), "f(f(a,a),a)").unwrap();
        assert!(a.accepts(&t).unwrap());
        let t = parse_term(a.alphabet(), "a").unwrap();
        assert!(!a.accepts(&t).unwrap());
    }

    #[test]
    fn gen_aprime_matches_gen_an() {
        for n in 1..=3 {
            let up = gen_an(n).unwrap();
            let down = gen_aprime_n(n).unwrap();
            assert_eq!(down.states().len(), n + 2);
            assert_eq!(down.initials().len(), 1);
            assert!(down.to_bottom_up().equivalent(&up).unwrap(), "n={n}");
        }
        assert!(gen_aprime_n(0).is_err());
    }

    #[test]
    fn named_languages_accept_exactly_their_members() {
        let l = lprime();
        let members: Vec<&str> = vec![
            "f(a,b)", "f(a,c)", "f(b,a)", "f(b,c)", "f(c,a)", "f(c,b)",
        ];
        let mut count = 0;
        for t in enumerate_terms(l.alphabet(), 3) {
            let expected = members.contains(&t.to_string().as_str());
            assert_eq!(l.accepts(&t).unwrap(), expected, "{t}");
            if expected {
                count += 1;
            }
        }
        assert_eq!(count, 6);

        let f = fab_fba();
        for t in enumerate_terms(f.alphabet(), 3) {
            let expected = t.to_string() == "f(a,b)" || t.to_string() == "f(b,a)";
            assert_eq!(f.accepts(&t).unwrap(), expected, "{t}");
        }
    }

    #[test]
    fn named_lookup() {
        assert_eq!("example1".parse::<NamedLanguage>().unwrap(), NamedLanguage::Example1);
        assert_eq!("Lprime".parse::<NamedLanguage>().unwrap(), NamedLanguage::LPrime);
        assert_eq!("fab_fba".parse::<NamedLanguage>().unwrap(), NamedLanguage::FabFba);
        assert!("nope".parse::<NamedLanguage>().is_err());
    }
}
