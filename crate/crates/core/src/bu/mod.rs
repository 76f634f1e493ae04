//! Bottom-up finite tree automata.
//!
//! An automaton is a set of rules `f(q1,...,qn) -> q` over a ranked
//! alphabet together with a set of final states. Values are immutable
//! after construction; every operation returns a new automaton.

mod minimize;
mod ops;

pub use ops::ProductMode;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::trees::{RankedAlphabet, Term};
use crate::Result;

/// An opaque state identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(String);

impl State {
    pub fn new(name: impl Into<String>) -> Self {
        State(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for State {
    fn from(s: &str) -> Self {
        State(s.to_string())
    }
}

impl From<String> for State {
    fn from(s: String) -> Self {
        State(s)
    }
}

/// A transition `symbol(children...) -> target`; constants have no
/// children.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub symbol: String,
    pub children: Vec<State>,
    pub target: State,
}

impl Rule {
    pub fn new(symbol: impl Into<String>, children: Vec<State>, target: State) -> Self {
        Rule {
            symbol: symbol.into(),
            children,
            target,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
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
        write!(f, " -> {}", self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomUpAutomaton {
    alphabet: RankedAlphabet,
    states: BTreeSet<State>,
    finals: BTreeSet<State>,
    rules: BTreeSet<Rule>,
}

impl BottomUpAutomaton {
    /// Validates that finals are states, and that every rule uses
    /// declared states and a declared symbol with matching arity.
    pub fn new(
        alphabet: RankedAlphabet,
        states: impl IntoIterator<Item = State>,
        finals: impl IntoIterator<Item = State>,
        rules: impl IntoIterator<Item = Rule>,
    ) -> Result<Self> {
        let states: BTreeSet<State> = states.into_iter().collect();
        let finals: BTreeSet<State> = finals.into_iter().collect();
        let rules: BTreeSet<Rule> = rules.into_iter().collect();
        for q in &finals {
            if !states.contains(q) {
                return Err(Error::InvalidAutomaton(format!(
                    "final state `{q}` is not declared"
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
            for q in r.children.iter().chain(std::iter::once(&r.target)) {
                if !states.contains(q) {
                    return Err(Error::InvalidAutomaton(format!(
                        "rule `{r}` references undeclared state `{q}`"
                    )));
                }
            }
        }
        Ok(BottomUpAutomaton {
            alphabet,
            states,
            finals,
            rules,
        })
    }

    /// The automaton with no states, recognizing the empty language.
    pub fn empty(alphabet: RankedAlphabet) -> Self {
        BottomUpAutomaton {
            alphabet,
            states: BTreeSet::new(),
            finals: BTreeSet::new(),
            rules: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn rules(&self) -> &BTreeSet<Rule> {
        &self.rules
    }

    pub fn is_final(&self, q: &State) -> bool {
        self.finals.contains(q)
    }

    /// Rules grouped by symbol, in rule order.
    pub fn rules_for<'a>(&'a self, symbol: &'a str) -> impl Iterator<Item = &'a Rule> {
        self.rules.iter().filter(move |r| r.symbol == symbol)
    }

    /// The set of states reached by `t`, computed bottom-up.
    pub fn reachable_states(&self, t: &Term) -> Result<BTreeSet<State>> {
        self.alphabet.check_term(t)?;
        Ok(self.reach_unchecked(t))
    }

    fn reach_unchecked(&self, t: &Term) -> BTreeSet<State> {
        let child_sets: Vec<BTreeSet<State>> =
            t.children().iter().map(|c| self.reach_unchecked(c)).collect();
        self.step(t.root(), &child_sets)
    }

    /// One bottom-up step: targets of rules for `symbol` whose i-th
    /// child lies in `child_sets[i]`.
    pub(crate) fn step(&self, symbol: &str, child_sets: &[BTreeSet<State>]) -> BTreeSet<State> {
        self.rules_for(symbol)
            .filter(|r| {
                r.children
                    .iter()
                    .zip(child_sets)
                    .all(|(q, set)| set.contains(q))
            })
            .map(|r| r.target.clone())
            .collect()
    }

    /// Whether some final state is reached by `t`.
    pub fn accepts(&self, t: &Term) -> Result<bool> {
        Ok(self
            .reachable_states(t)?
            .iter()
            .any(|q| self.finals.contains(q)))
    }

    /// Streaming acceptance over a preorder `(symbol, arity)` token
    /// stream; keeps one state set per open node instead of the tree.
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
            Some(set) => Ok(set.iter().any(|q| self.finals.contains(q))),
            None => Err(Error::InvalidParameter(
                "token stream did not contain a complete tree".into(),
            )),
        }
    }

    /// States reachable by at least one ground term.
    pub fn term_reachable_states(&self) -> BTreeSet<State> {
        let mut reached: BTreeSet<State> = BTreeSet::new();
        loop {
            let mut grew = false;
            for r in &self.rules {
                if !reached.contains(&r.target)
                    && r.children.iter().all(|q| reached.contains(q))
                {
                    reached.insert(r.target.clone());
                    grew = true;
                }
            }
            if !grew {
                return reached;
            }
        }
    }

    /// States that accept at least one context whose other branches are
    /// fillable by ground terms; intersected with reachability this
    /// gives the trimmed state set.
    fn useful_states(&self, reachable: &BTreeSet<State>) -> BTreeSet<State> {
        let mut useful: BTreeSet<State> = self
            .finals
            .iter()
            .filter(|q| reachable.contains(*q))
            .cloned()
            .collect();
        loop {
            let mut grew = false;
            for r in &self.rules {
                if useful.contains(&r.target)
                    && r.children.iter().all(|q| reachable.contains(q))
                {
                    for q in &r.children {
                        if useful.insert(q.clone()) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return useful;
            }
        }
    }

    /// Removes states that no term reaches or that accept no context,
    /// together with the rules mentioning them. Language-preserving and
    /// idempotent.
    pub fn trim(&self) -> BottomUpAutomaton {
        let reachable = self.term_reachable_states();
        let useful = self.useful_states(&reachable);
        let keep: BTreeSet<State> = reachable.intersection(&useful).cloned().collect();
        let rules = self
            .rules
            .iter()
            .filter(|r| {
                keep.contains(&r.target) && r.children.iter().all(|q| keep.contains(q))
            })
            .cloned()
            .collect();
        BottomUpAutomaton {
            alphabet: self.alphabet.clone(),
            finals: self.finals.intersection(&keep).cloned().collect(),
            states: keep,
            rules,
        }
    }

    /// True when no final state is term-reachable.
    pub fn is_empty_language(&self) -> bool {
        let reachable = self.term_reachable_states();
        !self.finals.iter().any(|q| reachable.contains(q))
    }

    fn check_same_alphabet(&self, other: &BottomUpAutomaton) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(
                "operands are over different alphabets".into(),
            ));
        }
        Ok(())
    }

    /// Picks a state name not already in use.
    pub(crate) fn fresh_state(&self, base: &str) -> State {
        let candidate = State::new(base);
        if !self.states.contains(&candidate) {
            return candidate;
        }
        let mut i = 0usize;
        loop {
            let candidate = State::new(format!("{base}{i}"));
            if !self.states.contains(&candidate) {
                return candidate;
            }
            i += 1;
        }
    }
}

/// A bottom-up automaton tagged with its determinism and completeness,
/// checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfta {
    auto: BottomUpAutomaton,
    deterministic: bool,
    complete: bool,
}

impl Dfta {
    /// Wraps an automaton, computing the two flags.
    pub fn from_automaton(auto: BottomUpAutomaton) -> Self {
        let mut seen: BTreeSet<(&String, &Vec<State>)> = BTreeSet::new();
        let mut deterministic = true;
        for r in &auto.rules {
            if !seen.insert((&r.symbol, &r.children)) {
                deterministic = false;
                break;
            }
        }
        let complete = Self::check_complete(&auto);
        Dfta {
            auto,
            deterministic,
            complete,
        }
    }

    fn check_complete(auto: &BottomUpAutomaton) -> bool {
        let states: Vec<&State> = auto.states.iter().collect();
        for (symbol, arity) in auto.alphabet.symbols() {
            let mut lhs: BTreeSet<&Vec<State>> = BTreeSet::new();
            for r in auto.rules_for(symbol) {
                lhs.insert(&r.children);
            }
            let mut missing = false;
            each_tuple(&states, arity, &mut |tuple| {
                if missing {
                    return;
                }
                let owned: Vec<State> = tuple.iter().map(|q| (*q).clone()).collect();
                if !lhs.contains(&owned) {
                    missing = true;
                }
            });
            if missing {
                return false;
            }
        }
        true
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn as_automaton(&self) -> &BottomUpAutomaton {
        &self.auto
    }

    pub fn into_automaton(self) -> BottomUpAutomaton {
        self.auto
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        self.auto.alphabet()
    }

    pub fn states(&self) -> &BTreeSet<State> {
        self.auto.states()
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        self.auto.finals()
    }

    pub fn is_final(&self, q: &State) -> bool {
        self.auto.is_final(q)
    }

    /// Transition function: the unique target for `symbol` applied to
    /// `children`, if a rule exists.
    pub fn delta(&self, symbol: &str, children: &[State]) -> Option<&State> {
        self.auto
            .rules
            .iter()
            .find(|r| r.symbol == symbol && r.children.as_slice() == children)
            .map(|r| &r.target)
    }

    /// Runs a deterministic automaton over `t`; `None` when incomplete
    /// and stuck.
    pub fn run(&self, t: &Term) -> Result<Option<State>> {
        if !self.deterministic {
            return Err(Error::NotDeterministic);
        }
        self.auto.alphabet.check_term(t)?;
        Ok(self.run_unchecked(t))
    }

    fn run_unchecked(&self, t: &Term) -> Option<State> {
        let mut children = Vec::with_capacity(t.children().len());
        for c in t.children() {
            children.push(self.run_unchecked(c)?);
        }
        self.delta(t.root(), &children).cloned()
    }

    pub fn accepts(&self, t: &Term) -> Result<bool> {
        self.auto.accepts(t)
    }
}

/// Calls `emit` for every `arity`-tuple over `pool`, in lexicographic
/// pool order.
pub(crate) fn each_tuple<'a, T>(
    pool: &[&'a T],
    arity: usize,
    emit: &mut impl FnMut(&[&'a T]),
) {
    fn go<'a, T>(
        pool: &[&'a T],
        arity: usize,
        tuple: &mut Vec<&'a T>,
        emit: &mut impl FnMut(&[&'a T]),
    ) {
        if tuple.len() == arity {
            emit(tuple);
            return;
        }
        for item in pool {
            tuple.push(item);
            go(pool, arity, tuple, emit);
            tuple.pop();
        }
    }
    let mut tuple = Vec::with_capacity(arity);
    go(pool, arity, &mut tuple, emit);
}

/// Builds a rule-index map `(symbol, children) -> targets` for faster
/// repeated lookups.
pub(crate) fn rule_index(
    auto: &BottomUpAutomaton,
) -> BTreeMap<(String, Vec<State>), Vec<State>> {
    let mut map: BTreeMap<(String, Vec<State>), Vec<State>> = BTreeMap::new();
    for r in auto.rules() {
        map.entry((r.symbol.clone(), r.children.clone()))
            .or_default()
            .push(r.target.clone());
    }
    map
}
