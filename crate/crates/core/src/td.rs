//! Top-down finite tree automata: acceptance (tree-walking and
//! streaming), state languages, conversions to and from bottom-up form,
//! and the context-to-states map used by the residual machinery.

use std::collections::BTreeSet;
use std::fmt;

use crate::bu::{BottomUpAutomaton, Rule, State};
use crate::error::Error;
use crate::trees::{Context, RankedAlphabet, Term};
use crate::Result;

/// A rewrite rule `source(symbol) -> symbol(children...)`; for a
/// constant the right-hand side is just the constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TdRule {
    pub source: State,
    pub symbol: String,
    pub children: Vec<State>,
}

impl TdRule {
    pub fn new(source: State, symbol: impl Into<String>, children: Vec<State>) -> Self {
        TdRule {
            source,
            symbol: symbol.into(),
            children,
        }
    }
}

impl fmt::Display for TdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) -> {}", self.source, self.symbol, self.symbol)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopDownAutomaton {
    alphabet: RankedAlphabet,
    states: BTreeSet<State>,
    initials: BTreeSet<State>,
    rules: BTreeSet<TdRule>,
}

impl TopDownAutomaton {
    pub fn new(
        alphabet: RankedAlphabet,
        states: impl IntoIterator<Item = State>,
        initials: impl IntoIterator<Item = State>,
        rules: impl IntoIterator<Item = TdRule>,
    ) -> Result<Self> {
        let states: BTreeSet<State> = states.into_iter().collect();
        let initials: BTreeSet<State> = initials.into_iter().collect();
        let rules: BTreeSet<TdRule> = rules.into_iter().collect();
        for q in &initials {
            if !states.contains(q) {
                return Err(Error::InvalidAutomaton(format!(
                    "initial state `{q}` is not declared"
                )));
            }
        }
        for r in &rules {
            let arity = alphabet
                .arity(&r.symbol)
                .ok_or_else(|| Error::UnknownSymbol(r.symbol.clone()))?;
            if arity != r.children.len() {
                return Err(Error::ArityMismatch {
                    symbol: r.symbol.clone(),
                    expected: arity,
                    found: r.children.len(),
                });
            }
            for q in r.children.iter().chain(std::iter::once(&r.source)) {
                if !states.contains(q) {
                    return Err(Error::InvalidAutomaton(format!(
                        "rule `{r}` references undeclared state `{q}`"
                    )));
                }
            }
        }
        Ok(TopDownAutomaton {
            alphabet,
            states,
            initials,
            rules,
        })
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn initials(&self) -> &BTreeSet<State> {
        &self.initials
    }

    pub fn rules(&self) -> &BTreeSet<TdRule> {
        &self.rules
    }

    /// No two rules share source state and symbol.
    pub fn is_deterministic(&self) -> bool {
        let mut seen: BTreeSet<(&State, &String)> = BTreeSet::new();
        self.rules.iter().all(|r| seen.insert((&r.source, &r.symbol)))
    }

    /// The set of states accepting `t`, computed bottom-up (this is the
    /// memoization of the top-down recursion: each subtree's set is
    /// computed once).
    pub fn accepting_states(&self, t: &Term) -> Result<BTreeSet<State>> {
        self.alphabet.check_term(t)?;
        Ok(self.accepting_unchecked(t))
    }

    fn accepting_unchecked(&self, t: &Term) -> BTreeSet<State> {
        let child_sets: Vec<BTreeSet<State>> = t
            .children()
            .iter()
            .map(|c| self.accepting_unchecked(c))
            .collect();
        self.step(t.root(), &child_sets)
    }

    fn step(&self, symbol: &str, child_sets: &[BTreeSet<State>]) -> BTreeSet<State> {
        self.rules
            .iter()
            .filter(|r| r.symbol == symbol)
            .filter(|r| {
                r.children
                    .iter()
                    .zip(child_sets)
                    .all(|(q, set)| set.contains(q))
            })
            .map(|r| r.source.clone())
            .collect()
    }

    /// Whether some initial state accepts `t`.
    pub fn accepts(&self, t: &Term) -> Result<bool> {
        Ok(self
            .accepting_states(t)?
            .iter()
            .any(|q| self.initials.contains(q)))
    }

    /// Streaming acceptance over a preorder `(symbol, arity)` token
    /// stream. Only the frontier of open nodes is kept, one state set
    /// per pending subtree, so memory is bounded by the tree depth
    /// rather than its size.
    pub fn accepts_stream<I>(&self, tokens: I) -> Result<bool>
    where
        I: IntoIterator<Item = Result<(String, usize)>>,
    {
        struct Frame {
            symbol: String,
            arity: usize,
            child_sets: Vec<BTreeSet<State>>,
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut root_set: Option<BTreeSet<State>> = None;
        for token in tokens {
            let (symbol, arity) = token?;
            if root_set.is_some() {
                return Err(Error::InvalidParameter(
                    "trailing tokens after a complete tree".into(),
                ));
            }
            match self.alphabet.arity(&symbol) {
                None => return Err(Error::UnknownSymbol(symbol)),
                Some(a) if a != arity => {
                    return Err(Error::ArityMismatch {
                        symbol,
                        expected: a,
                        found: arity,
                    })
                }
                Some(_) => {}
            }
            if arity > 0 {
                stack.push(Frame {
                    symbol,
                    arity,
                    child_sets: Vec::with_capacity(arity),
                });
                continue;
            }
            let mut set = self.step(&symbol, &[]);
            loop {
                match stack.last_mut() {
                    None => {
                        root_set = Some(set);
                        break;
                    }
                    Some(frame) => {
                        frame.child_sets.push(set);
                        if frame.child_sets.len() < frame.arity {
                            break;
                        }
                        let frame = stack.pop().expect("frame exists");
                        set = self.step(&frame.symbol, &frame.child_sets);
                    }
                }
            }
        }
        match root_set {
            Some(set) => Ok(set.iter().any(|q| self.initials.contains(q))),
            None => Err(Error::InvalidParameter(
                "token stream did not contain a complete tree".into(),
            )),
        }
    }

    /// The tree language accepted from `q`, as a bottom-up automaton:
    /// the rule-reversal of this automaton with `q` as the only final
    /// state.
    pub fn state_language(&self, q: &State) -> Result<BottomUpAutomaton> {
        if !self.states.contains(q) {
            return Err(Error::UnknownState(q.to_string()));
        }
        let bu = self.to_bottom_up();
        BottomUpAutomaton::new(
            self.alphabet.clone(),
            bu.states().clone(),
            [q.clone()],
            bu.rules().clone(),
        )
    }

    /// Rule reversal: `q(f) -> f(q1,...,qn)` becomes
    /// `f(q1,...,qn) -> q`, initial states become final. Preserves the
    /// language exactly.
    pub fn to_bottom_up(&self) -> BottomUpAutomaton {
        BottomUpAutomaton::new(
            self.alphabet.clone(),
            self.states.iter().cloned(),
            self.initials.iter().cloned(),
            self.rules
                .iter()
                .map(|r| Rule::new(r.symbol.clone(), r.children.clone(), r.source.clone())),
        )
        .expect("reversal preserves well-formedness")
    }

    /// The states `q` such that some initial state rewrites the context
    /// skeleton down to `q` at the hole, ground siblings being accepted
    /// along the way.
    pub fn context_states(&self, c: &Context) -> Result<BTreeSet<State>> {
        self.alphabet.check_context(c)?;
        let mut current: BTreeSet<State> = self.initials.clone();
        for step in c.hole_path() {
            let sibling_sets: Vec<(usize, BTreeSet<State>)> = step
                .siblings
                .iter()
                .map(|(i, t)| (*i, self.accepting_unchecked(t)))
                .collect();
            let mut next: BTreeSet<State> = BTreeSet::new();
            for r in self.rules.iter().filter(|r| r.symbol == step.symbol) {
                if !current.contains(&r.source) {
                    continue;
                }
                if sibling_sets
                    .iter()
                    .all(|(i, set)| set.contains(&r.children[*i]))
                {
                    next.insert(r.children[step.hole_index].clone());
                }
            }
            current = next;
        }
        Ok(current)
    }
}

/// Rule reversal in the other direction: final states become initial.
pub fn to_top_down(a: &BottomUpAutomaton) -> TopDownAutomaton {
    TopDownAutomaton::new(
        a.alphabet().clone(),
        a.states().iter().cloned(),
        a.finals().iter().cloned(),
        a.rules()
            .iter()
            .map(|r| TdRule::new(r.target.clone(), r.symbol.clone(), r.children.clone())),
    )
    .expect("reversal preserves well-formedness")
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// A context-deterministic recognizer of {f(a,b), f(b,a)}.
    pub fn cfta_fab_fba() -> TopDownAutomaton {
        let alphabet = RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap();
        let q = State::from;
        TopDownAutomaton::new(
            alphabet,
            ["qi", "qa", "qb"].map(State::from),
            [State::from("qi")],
            [
                TdRule::new(q("qi"), "f", vec![q("qa"), q("qb")]),
                TdRule::new(q("qi"), "f", vec![q("qb"), q("qa")]),
                TdRule::new(q("qa"), "a", vec![]),
                TdRule::new(q("qb"), "b", vec![]),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::cfta_fab_fba;
    use super::*;
    use crate::corpus::{gen_an, gen_aprime_n};
    use crate::trees::{enumerate_contexts, enumerate_terms, parse_context, parse_term};

    #[test]
    fn aprime2_accepts_paths_of_length_two() {
        let a = gen_aprime_n(2).unwrap();
        let t = parse_term(a.alphabet(), "f(f(a,a),a)").unwrap();
        assert!(a.accepts(&t).unwrap());
        let t = parse_term(a.alphabet(), "a").unwrap();
        assert!(!a.accepts(&t).unwrap());
    }

    #[test]
    fn trivial_constant_acceptance() {
        let alphabet = RankedAlphabet::new([("a", 0)]).unwrap();
        let a = TopDownAutomaton::new(
            alphabet.clone(),
            [State::from("q")],
            [State::from("q")],
            [TdRule::new(State::from("q"), "a", vec![])],
        )
        .unwrap();
        assert!(a.accepts(&parse_term(&alphabet, "a").unwrap()).unwrap());
    }

    #[test]
    fn state_languages_of_aprime() {
        let a = gen_aprime_n(2).unwrap();
        // state language of q_k is the language of paths of length n-k
        let l2 = a.state_language(&State::from("q0")).unwrap();
        let l1 = a.state_language(&State::from("q1")).unwrap();
        let l0 = a.state_language(&State::from("q2")).unwrap();
        let all = a.state_language(&State::from("qstar")).unwrap();
        for t in enumerate_terms(a.alphabet(), 4) {
            assert_eq!(l2.accepts(&t).unwrap(), t.has_path_of_length(2), "{t}");
            assert_eq!(l1.accepts(&t).unwrap(), t.has_path_of_length(1), "{t}");
            assert_eq!(l0.accepts(&t).unwrap(), t.has_path_of_length(0), "{t}");
            assert!(all.accepts(&t).unwrap(), "{t}");
        }
        // a state with no rules accepts nothing
        let alphabet = RankedAlphabet::new([("a", 0)]).unwrap();
        let lone = TopDownAutomaton::new(
            alphabet,
            [State::from("q")],
            [State::from("q")],
            [],
        )
        .unwrap();
        assert!(lone
            .state_language(&State::from("q"))
            .unwrap()
            .is_empty_language());
    }

    #[test]
    fn conversions_round_trip_and_preserve_language() {
        let a = gen_aprime_n(2).unwrap();
        let bu = a.to_bottom_up();
        let an = gen_an(2).unwrap();
        assert!(bu.equivalent(&an).unwrap());
        let back = to_top_down(&bu);
        assert_eq!(back.rules(), a.rules());
        assert_eq!(back.initials(), a.initials());

        let empty = BottomUpAutomaton::empty(a.alphabet().clone());
        let td = to_top_down(&empty);
        assert!(td.states().is_empty());
    }

    #[test]
    fn determinism_check() {
        assert!(!gen_aprime_n(2).unwrap().is_deterministic());
        assert!(!cfta_fab_fba().is_deterministic());
        let alphabet = RankedAlphabet::new([("a", 0)]).unwrap();
        let single = TopDownAutomaton::new(
            alphabet,
            [State::from("q")],
            [State::from("q")],
            [TdRule::new(State::from("q"), "a", vec![])],
        )
        .unwrap();
        assert!(single.is_deterministic());
    }

    #[test]
    fn streaming_agrees_with_recursive_acceptance() {
        let a = gen_aprime_n(2).unwrap();
        for t in enumerate_terms(a.alphabet(), 4) {
            let tokens: Vec<_> = t
                .preorder()
                .iter()
                .map(|(s, n)| Ok((s.to_string(), *n)))
                .collect();
            assert_eq!(
                a.accepts_stream(tokens).unwrap(),
                a.accepts(&t).unwrap(),
                "{t}"
            );
        }
    }

    #[test]
    fn bottom_up_and_top_down_acceptance_agree() {
        let a = gen_aprime_n(2).unwrap();
        let bu = a.to_bottom_up();
        for t in enumerate_terms(a.alphabet(), 4) {
            assert_eq!(a.accepts(&t).unwrap(), bu.accepts(&t).unwrap(), "{t}");
        }
    }

    #[test]
    fn context_states_of_cfta_are_at_most_singletons() {
        let a = cfta_fab_fba();
        for c in enumerate_contexts(a.alphabet(), 3) {
            let qc = a.context_states(&c).unwrap();
            assert!(qc.len() <= 1, "{c} gave {qc:?}");
        }
        let qa = a
            .context_states(&parse_context(a.alphabet(), "f(<>,b)").unwrap())
            .unwrap();
        assert_eq!(qa, BTreeSet::from([State::from("qa")]));
        let qb = a
            .context_states(&parse_context(a.alphabet(), "f(<>,a)").unwrap())
            .unwrap();
        assert_eq!(qb, BTreeSet::from([State::from("qb")]));
    }

    #[test]
    fn residual_is_union_of_state_languages_over_context_states() {
        let a = gen_aprime_n(1).unwrap();
        let bu = a.to_bottom_up();
        for c in enumerate_contexts(a.alphabet(), 3) {
            let qc = a.context_states(&c).unwrap();
            for t in enumerate_terms(a.alphabet(), 3) {
                let in_residual = bu.accepts(&c.plug(&t)).unwrap();
                let in_union = qc.iter().any(|q| {
                    a.state_language(q).unwrap().accepts(&t).unwrap()
                });
                assert_eq!(in_residual, in_union, "c={c} t={t}");
            }
        }
    }
}
