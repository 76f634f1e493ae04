//! Top-down residual machinery: the residual catalog, prime
//! classification, the canonical top-down residual automaton, the
//! residual-automaton and class-membership deciders, and the
//! path-closed / homogeneous checks behind the expressiveness
//! hierarchy.
//!
//! The residual of a language `L` with respect to a context `c` is the
//! tree language of terms `t` with `c[t] ∈ L`. On the minimal
//! deterministic complete automaton for `L`, such a residual is the set
//! of terms evaluating into some state subset `S`, so the catalog is a
//! family of subsets of the minimal automaton's states, closed under
//! one-step context extension starting from the final-state set (the
//! residual of the bare hole).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::bu::{each_tuple, BottomUpAutomaton, Dfta, State};
use crate::residuals_up::representatives;
use crate::td::{TdRule, TopDownAutomaton};
use crate::trees::{Context, Term};
use crate::Result;

/// One top-down residual: a subset of the minimal automaton's states
/// (restricted to term-reachable ones), with a context witnessing it.
#[derive(Debug, Clone)]
pub struct TdResidual {
    set: BTreeSet<State>,
    witness: Context,
    prime: bool,
    /// Whether the residual is a subset of the language itself.
    initial: bool,
}

impl TdResidual {
    /// The state subset; the residual language is the set of terms
    /// evaluating into it.
    pub fn states(&self) -> &BTreeSet<State> {
        &self.set
    }

    /// A context whose residual this is.
    pub fn witness(&self) -> &Context {
        &self.witness
    }

    pub fn is_prime(&self) -> bool {
        self.prime
    }

    /// Whether the residual is included in the language (such primes
    /// become initial states of the canonical automaton).
    pub fn is_initial(&self) -> bool {
        self.initial
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// The finite set of top-down residuals of a regular tree language.
#[derive(Debug, Clone)]
pub struct TdResidualCatalog {
    base: Dfta,
    /// Term-reachable states of the base; every catalog subset lives
    /// inside this set, and language equality of subsets is equality
    /// here. This is the one place where determinism of the base is
    /// load-bearing: a term evaluates to exactly one reachable state,
    /// so membership in a residual only depends on that state.
    reachable: BTreeSet<State>,
    residuals: Vec<TdResidual>,
}

impl TdResidualCatalog {
    /// Enumerates all residuals of the language of `l` by fixpoint
    /// closure from the final-state set under one-step context
    /// extension; terminates because there are at most `2^|Q|` subsets.
    pub fn build(l: &BottomUpAutomaton) -> Self {
        let base = l
            .determinize()
            .minimize()
            .expect("subset construction is deterministic");
        let reachable = base.as_automaton().term_reachable_states();
        let reps = representatives(&base);

        let restrict = |s: &BTreeSet<State>| -> BTreeSet<State> {
            s.intersection(&reachable).cloned().collect()
        };
        let finals = restrict(base.finals());

        let mut order: Vec<BTreeSet<State>> = Vec::new();
        let mut witness: BTreeMap<BTreeSet<State>, Context> = BTreeMap::new();
        let mut queue: VecDeque<BTreeSet<State>> = VecDeque::new();
        order.push(finals.clone());
        witness.insert(finals.clone(), Context::hole());
        queue.push_back(finals);

        let pool: Vec<&State> = reachable.iter().collect();
        while let Some(current) = queue.pop_front() {
            let parent_witness = witness[&current].clone();
            for (symbol, arity) in base.alphabet().symbols() {
                if arity == 0 {
                    continue;
                }
                for hole_index in 0..arity {
                    each_tuple(&pool, arity - 1, &mut |others| {
                        let mut extension: BTreeSet<State> = BTreeSet::new();
                        for q in &reachable {
                            let mut children: Vec<State> = Vec::with_capacity(arity);
                            children.extend(others[..hole_index].iter().map(|s| (*s).clone()));
                            children.push(q.clone());
                            children.extend(others[hole_index..].iter().map(|s| (*s).clone()));
                            let target = base
                                .delta(symbol, &children)
                                .expect("minimal automaton is complete");
                            if current.contains(target) {
                                extension.insert(q.clone());
                            }
                        }
                        if !witness.contains_key(&extension) {
                            let frame = Context::node(
                                symbol,
                                others.iter().map(|s| reps[*s].clone()).collect(),
                                hole_index,
                                Context::hole(),
                            )
                            .expect("hole index in range");
                            let w = parent_witness.compose(&frame);
                            witness.insert(extension.clone(), w);
                            order.push(extension.clone());
                            queue.push_back(extension);
                        }
                    });
                }
            }
        }

        // Prime flags: composite means equal to the union of the
        // strictly contained residuals. Initial flags compare against
        // the first entry, the residual of the bare hole, i.e. the
        // language itself.
        let language_set = order[0].clone();
        let residuals: Vec<TdResidual> = order
            .iter()
            .map(|set| {
                let union: BTreeSet<State> = order
                    .iter()
                    .filter(|other| *other != set && other.is_subset(set))
                    .flat_map(|other| other.iter().cloned())
                    .collect();
                TdResidual {
                    prime: union != *set,
                    initial: set.is_subset(&language_set),
                    set: set.clone(),
                    witness: witness[set].clone(),
                }
            })
            .collect();

        TdResidualCatalog {
            base,
            reachable,
            residuals,
        }
    }

    /// The minimal deterministic complete automaton underlying the
    /// catalog.
    pub fn base(&self) -> &Dfta {
        &self.base
    }

    /// Residuals in discovery order; the first is the language itself.
    pub fn residuals(&self) -> &[TdResidual] {
        &self.residuals
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }

    /// Residuals denoting a non-empty tree language.
    pub fn nonempty_count(&self) -> usize {
        self.residuals.iter().filter(|r| !r.set.is_empty()).count()
    }

    pub fn prime_count(&self) -> usize {
        self.residuals.iter().filter(|r| r.prime).count()
    }

    pub fn primes(&self) -> impl Iterator<Item = (usize, &TdResidual)> {
        self.residuals.iter().enumerate().filter(|(_, r)| r.prime)
    }

    /// The residual of a concrete context: evaluate the context with a
    /// symbolic hole and collect the states driven into the finals. The
    /// result is guaranteed to be in the catalog.
    pub fn residual_of_context(&self, c: &Context) -> Result<usize> {
        self.base.alphabet().check_context(c)?;
        let mut set: BTreeSet<State> = BTreeSet::new();
        for q in &self.reachable {
            let plugged = c.plug(&hole_marker());
            let value = self.eval_with_hole(&plugged, q);
            if self.base.is_final(&value) {
                set.insert(q.clone());
            }
        }
        let restricted: BTreeSet<State> =
            set.intersection(&self.reachable).cloned().collect();
        Ok(self
            .residuals
            .iter()
            .position(|r| r.set == restricted)
            .expect("closure covers every context residual"))
    }

    fn eval_with_hole(&self, t: &Term, hole_value: &State) -> State {
        if t.root() == crate::trees::HOLE_TOKEN {
            return hole_value.clone();
        }
        let children: Vec<State> = t
            .children()
            .iter()
            .map(|c| self.eval_with_hole(c, hole_value))
            .collect();
        self.base
            .delta(t.root(), &children)
            .expect("minimal automaton is complete")
            .clone()
    }

    /// The residual's tree language as a bottom-up automaton: the base
    /// with the subset as finals.
    pub fn language_automaton(&self, index: usize) -> BottomUpAutomaton {
        let auto = self.base.as_automaton();
        BottomUpAutomaton::new(
            auto.alphabet().clone(),
            auto.states().clone(),
            self.residuals[index].set.iter().cloned(),
            auto.rules().clone(),
        )
        .expect("subset of declared states")
    }

    /// Index of the residual whose language equals `lang`, if any.
    /// Subsets are canonical, so a semantic check against each catalog
    /// automaton suffices.
    pub fn matching_residual(&self, lang: &BottomUpAutomaton) -> Result<Option<usize>> {
        for i in 0..self.residuals.len() {
            if self.language_automaton(i).equivalent(lang)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn delta_in_set(&self, symbol: &str, children: &[State], set: &BTreeSet<State>) -> bool {
        let target = self
            .base
            .delta(symbol, children)
            .expect("minimal automaton is complete");
        set.contains(target)
    }
}

fn hole_marker() -> Term {
    Term::constant(crate::trees::HOLE_TOKEN)
}

/// The canonical top-down residual automaton of the language of `l`:
/// one state per prime residual, initial states the primes included in
/// the language, and every rule whose child residuals only combine into
/// the target residual. When the language lies in the top-down residual
/// class this recognizes it and is minimal in states; otherwise it
/// under-approximates.
pub fn canonical_down_rfta(l: &BottomUpAutomaton) -> TopDownAutomaton {
    let catalog = TdResidualCatalog::build(l);
    let primes: Vec<usize> = catalog.primes().map(|(i, _)| i).collect();
    let name_of: BTreeMap<usize, State> = primes
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, State::new(format!("r{k}"))))
        .collect();
    let states: Vec<State> = primes.iter().map(|i| name_of[i].clone()).collect();
    let initials: Vec<State> = primes
        .iter()
        .filter(|&&i| catalog.residuals()[i].is_initial())
        .map(|i| name_of[i].clone())
        .collect();

    let mut rules: Vec<TdRule> = Vec::new();
    for &source in &primes {
        let target_set = catalog.residuals()[source].states().clone();
        for (symbol, arity) in catalog.base().alphabet().symbols() {
            if arity == 0 {
                if catalog.delta_in_set(symbol, &[], &target_set) {
                    rules.push(TdRule::new(name_of[&source].clone(), symbol, vec![]));
                }
                continue;
            }
            let pool: Vec<&usize> = primes.iter().collect();
            each_tuple(&pool, arity, &mut |tuple| {
                let child_sets: Vec<&BTreeSet<State>> = tuple
                    .iter()
                    .map(|&&i| catalog.residuals()[i].states())
                    .collect();
                // Every combination of child values must land in the
                // target residual.
                let mut all_in = true;
                let refs: Vec<Vec<&State>> =
                    child_sets.iter().map(|s| s.iter().collect()).collect();
                each_combination(&refs, &mut |values| {
                    if !all_in {
                        return;
                    }
                    let children: Vec<State> =
                        values.iter().map(|q| (*q).clone()).collect();
                    if !catalog.delta_in_set(symbol, &children, &target_set) {
                        all_in = false;
                    }
                });
                if all_in {
                    rules.push(TdRule::new(
                        name_of[&source].clone(),
                        symbol,
                        tuple.iter().map(|&&i| name_of[&i].clone()).collect(),
                    ));
                }
            });
        }
    }
    TopDownAutomaton::new(l.alphabet().clone(), states, initials, rules)
        .expect("canonical construction is well-formed")
}

/// Calls `emit` for every choice of one element per inner pool.
fn each_combination<'a, T>(pools: &[Vec<&'a T>], emit: &mut impl FnMut(&[&'a T])) {
    fn go<'a, T>(
        pools: &[Vec<&'a T>],
        chosen: &mut Vec<&'a T>,
        emit: &mut impl FnMut(&[&'a T]),
    ) {
        if chosen.len() == pools.len() {
            emit(chosen);
            return;
        }
        for item in &pools[chosen.len()] {
            chosen.push(item);
            go(pools, chosen, emit);
            chosen.pop();
        }
    }
    let mut chosen = Vec::with_capacity(pools.len());
    go(pools, &mut chosen, emit);
}

/// Whether every state language of `a` is a residual of its language.
pub fn is_down_rfta(a: &TopDownAutomaton) -> bool {
    let language = a.to_bottom_up();
    let catalog = TdResidualCatalog::build(&language);
    for q in a.states() {
        let lq = a.state_language(q).expect("state exists");
        match catalog.matching_residual(&lq) {
            Ok(Some(_)) => {}
            Ok(None) => return false,
            Err(_) => unreachable!("state language shares the alphabet"),
        }
    }
    true
}

/// Whether the language of `l` is recognized by any top-down residual
/// automaton. Decided constructively: build the canonical candidate and
/// check that it recognizes the language and that every state language
/// equals its defining residual. Both hold whenever the language is in
/// the class, and together they exhibit a witness when they do.
pub fn is_down_rfta_language(l: &BottomUpAutomaton) -> bool {
    let catalog = TdResidualCatalog::build(l);
    let candidate = canonical_down_rfta(l);
    if !candidate
        .to_bottom_up()
        .equivalent(l)
        .expect("same alphabet")
    {
        return false;
    }
    let primes: Vec<usize> = catalog.primes().map(|(i, _)| i).collect();
    for (k, &i) in primes.iter().enumerate() {
        let q = State::new(format!("r{k}"));
        let lq = candidate.state_language(&q).expect("state exists");
        let defining = catalog.language_automaton(i);
        if !lq.equivalent(&defining).expect("same alphabet") {
            return false;
        }
    }
    true
}

/// Relation `{ tuple | delta(symbol, tuple) ∈ S }` over term-reachable
/// states, for each residual `S` and symbol: the residual-level view of
/// which sibling combinations stay inside the language.
fn frame_relation(
    catalog: &TdResidualCatalog,
    set: &BTreeSet<State>,
    symbol: &str,
    arity: usize,
) -> BTreeSet<Vec<State>> {
    let pool: Vec<&State> = catalog.reachable.iter().collect();
    let mut relation = BTreeSet::new();
    each_tuple(&pool, arity, &mut |tuple| {
        let children: Vec<State> = tuple.iter().map(|q| (*q).clone()).collect();
        if catalog.delta_in_set(symbol, &children, set) {
            relation.insert(children);
        }
    });
    relation
}

/// A language is path-closed when sibling subtrees recombine freely
/// across members sharing a context: every frame relation is the full
/// product of its coordinate projections. Path-closed languages are
/// exactly those recognized by deterministic top-down automata.
pub fn is_path_closed(l: &BottomUpAutomaton) -> bool {
    let catalog = TdResidualCatalog::build(l);
    for residual in catalog.residuals() {
        for (symbol, arity) in catalog.base().alphabet().symbols() {
            if arity == 0 {
                continue;
            }
            let relation = frame_relation(&catalog, residual.states(), symbol, arity);
            let projections: Vec<BTreeSet<&State>> = (0..arity)
                .map(|i| relation.iter().map(|t| &t[i]).collect())
                .collect();
            let mut closed = true;
            let pools: Vec<Vec<&State>> = projections
                .iter()
                .map(|p| p.iter().copied().collect())
                .collect();
            each_combination(&pools, &mut |values| {
                if !closed {
                    return;
                }
                let tuple: Vec<State> = values.iter().map(|q| (*q).clone()).collect();
                if !relation.contains(&tuple) {
                    closed = false;
                }
            });
            if !closed {
                return false;
            }
        }
    }
    true
}

/// A language is homogeneous when every frame relation is closed under
/// single-coordinate exchange: if a tuple is in the relation and every
/// single-coordinate replacement toward a candidate tuple stays in the
/// relation, the candidate is in the relation. At arity two this is the
/// three-out-of-four exchange property; homogeneous languages are
/// exactly those recognized by context-deterministic top-down automata.
pub fn is_homogeneous(l: &BottomUpAutomaton) -> bool {
    let catalog = TdResidualCatalog::build(l);
    let pool: Vec<&State> = catalog.reachable.iter().collect();
    for residual in catalog.residuals() {
        for (symbol, arity) in catalog.base().alphabet().symbols() {
            if arity < 2 {
                continue;
            }
            let relation = frame_relation(&catalog, residual.states(), symbol, arity);
            let mut closed = true;
            for base in &relation {
                each_tuple(&pool, arity, &mut |candidate| {
                    if !closed {
                        return;
                    }
                    let candidate: Vec<State> =
                        candidate.iter().map(|q| (*q).clone()).collect();
                    if relation.contains(&candidate) {
                        return;
                    }
                    let all_swaps_in = (0..arity).all(|i| {
                        let mut swapped = base.clone();
                        swapped[i] = candidate[i].clone();
                        relation.contains(&swapped)
                    });
                    if all_swaps_in {
                        closed = false;
                    }
                });
                if !closed {
                    return false;
                }
            }
        }
    }
    true
}
