//! Bottom-up residual machinery: state context languages, the residual
//! lattice with its inclusion preorder and prime flags, the residual
//! automaton decider and the canonical construction.
//!
//! Terminology: the residual of a language `L` with respect to a ground
//! term `t` is the set of contexts `c` with `c[t] ∈ L`. On the minimal
//! deterministic complete automaton for `L`, the residual of `t` is the
//! context language of the state `t` reaches, so residuals are in
//! bijection with the live states of that automaton. A residual is
//! composite when it equals the union of the residuals it strictly
//! contains, prime otherwise; the canonical residual automaton has one
//! state per prime residual and the maximal consistent rule set.

use std::collections::{BTreeMap, BTreeSet};

use crate::bu::{each_tuple, BottomUpAutomaton, Dfta, Rule, State};
use crate::error::Error;
use crate::trees::{Context, Term};
use crate::Result;

/// An automaton over the hole-extended alphabet recognizing exactly the
/// contexts accepted by one state of a base automaton.
///
/// States are pairs of a base state and a hole-seen flag; each rule
/// propagates the flag from at most one child, so accepted trees carry
/// exactly one hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedContextAutomaton {
    auto: BottomUpAutomaton,
}

fn ground_name(q: &State) -> State {
    State::new(format!("g:{q}"))
}

fn marked_name(q: &State) -> State {
    State::new(format!("h:{q}"))
}

impl MarkedContextAutomaton {
    pub fn automaton(&self) -> &BottomUpAutomaton {
        &self.auto
    }

    pub fn accepts_context(&self, c: &Context) -> Result<bool> {
        self.auto.accepts(&c.to_hole_term())
    }

    pub fn is_empty_language(&self) -> bool {
        self.auto.is_empty_language()
    }

    pub fn included_in(&self, other: &MarkedContextAutomaton) -> Result<bool> {
        self.auto.included_in(&other.auto)
    }

    pub fn equivalent(&self, other: &MarkedContextAutomaton) -> Result<bool> {
        self.auto.equivalent(&other.auto)
    }
}

/// The automaton recognizing `C_q`, the set of contexts `c` such that
/// `c` with the hole valued `q` rewrites to a final state of `a`.
pub fn context_language(a: &BottomUpAutomaton, q: &State) -> Result<MarkedContextAutomaton> {
    if !a.states().contains(q) {
        return Err(Error::UnknownState(q.to_string()));
    }
    let alphabet = a.alphabet().with_hole();
    let states: BTreeSet<State> = a
        .states()
        .iter()
        .flat_map(|p| [ground_name(p), marked_name(p)])
        .collect();
    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    rules.insert(Rule::new(
        crate::trees::HOLE_TOKEN,
        vec![],
        marked_name(q),
    ));
    for r in a.rules() {
        rules.insert(Rule::new(
            r.symbol.clone(),
            r.children.iter().map(ground_name).collect(),
            ground_name(&r.target),
        ));
        for i in 0..r.children.len() {
            let children: Vec<State> = r
                .children
                .iter()
                .enumerate()
                .map(|(j, p)| if i == j { marked_name(p) } else { ground_name(p) })
                .collect();
            rules.insert(Rule::new(r.symbol.clone(), children, marked_name(&r.target)));
        }
    }
    let finals: BTreeSet<State> = a.finals().iter().map(marked_name).collect();
    Ok(MarkedContextAutomaton {
        auto: BottomUpAutomaton::new(alphabet, states, finals, rules)?,
    })
}

/// Minimal-height representative term per term-reachable state of a
/// deterministic automaton, ties broken by enumeration order.
pub(crate) fn representatives(d: &Dfta) -> BTreeMap<State, Term> {
    let auto = d.as_automaton();
    let mut reps: BTreeMap<State, Term> = BTreeMap::new();
    loop {
        let mut candidates: Vec<(Term, State)> = Vec::new();
        for (symbol, arity) in auto.alphabet().symbols() {
            if arity == 0 {
                if let Some(target) = d.delta(symbol, &[]) {
                    if !reps.contains_key(target) {
                        candidates.push((Term::constant(symbol), target.clone()));
                    }
                }
            } else {
                let assigned: Vec<&State> = reps.keys().collect();
                each_tuple(&assigned, arity, &mut |tuple| {
                    let children: Vec<State> = tuple.iter().map(|q| (*q).clone()).collect();
                    if let Some(target) = d.delta(symbol, &children) {
                        if !reps.contains_key(target) {
                            let term = Term::new(
                                symbol,
                                tuple.iter().map(|q| reps[*q].clone()).collect(),
                            );
                            candidates.push((term, target.clone()));
                        }
                    }
                });
            }
        }
        if candidates.is_empty() {
            return reps;
        }
        candidates.sort();
        let mut assigned_any = false;
        for (term, target) in candidates {
            if !reps.contains_key(&target) {
                reps.insert(target.clone(), term);
                assigned_any = true;
            }
        }
        if !assigned_any {
            return reps;
        }
    }
}

/// Decides `C_p ⊆ C_q` on a deterministic complete automaton as the
/// greatest fixpoint of the one-step context-extension relation.
pub fn context_inclusion(d: &Dfta, p: &State, q: &State) -> Result<bool> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    if !d.is_complete() {
        return Err(Error::NotComplete);
    }
    for s in [p, q] {
        if !d.states().contains(s) {
            return Err(Error::UnknownState(s.to_string()));
        }
    }
    Ok(context_inclusion_relation(d).contains(&(p.clone(), q.clone())))
}

/// The full relation `{ (p, q) | C_p ⊆ C_q }` of a deterministic
/// complete automaton.
///
/// Starts from the pairs respecting finality and repeatedly removes a
/// pair when some depth-one frame, with live states at the other
/// positions, maps it outside the relation. Frames over non-live states
/// cannot discriminate: every transition with a dead child lands in the
/// dead class.
pub fn context_inclusion_relation(d: &Dfta) -> BTreeSet<(State, State)> {
    let auto = d.as_automaton();
    let live: Vec<State> = d.live_states().into_iter().collect();
    let states: Vec<&State> = auto.states().iter().collect();
    let mut relation: BTreeSet<(State, State)> = BTreeSet::new();
    for p in &states {
        for q in &states {
            if !d.is_final(p) || d.is_final(q) {
                relation.insert(((*p).clone(), (*q).clone()));
            }
        }
    }
    let live_refs: Vec<&State> = live.iter().collect();
    loop {
        let mut removals: Vec<(State, State)> = Vec::new();
        'pairs: for (p, q) in &relation {
            for (symbol, arity) in auto.alphabet().symbols() {
                if arity == 0 {
                    continue;
                }
                for position in 0..arity {
                    let mut violated = false;
                    each_tuple(&live_refs, arity - 1, &mut |others| {
                        if violated {
                            return;
                        }
                        let mut with_p: Vec<State> = Vec::with_capacity(arity);
                        let mut with_q: Vec<State> = Vec::with_capacity(arity);
                        for s in &others[..position] {
                            with_p.push((*s).clone());
                            with_q.push((*s).clone());
                        }
                        with_p.push(p.clone());
                        with_q.push(q.clone());
                        for s in &others[position..] {
                            with_p.push((*s).clone());
                            with_q.push((*s).clone());
                        }
                        let tp = d.delta(symbol, &with_p).expect("complete");
                        let tq = d.delta(symbol, &with_q).expect("complete");
                        if !relation.contains(&(tp.clone(), tq.clone())) {
                            violated = true;
                        }
                    });
                    if violated {
                        removals.push((p.clone(), q.clone()));
                        continue 'pairs;
                    }
                }
            }
        }
        if removals.is_empty() {
            return relation;
        }
        for pair in removals {
            relation.remove(&pair);
        }
    }
}

/// One node of the residual lattice: a live state of the minimal
/// automaton, which is one non-empty residual of the language.
#[derive(Debug, Clone)]
pub struct LatticeNode {
    state: State,
    rep: Term,
    prime: bool,
    is_final: bool,
}

impl LatticeNode {
    /// The minimal-automaton state this node is.
    pub fn state(&self) -> &State {
        &self.state
    }

    /// A minimal-height term whose residual this node is.
    pub fn representative(&self) -> &Term {
        &self.rep
    }

    pub fn is_prime(&self) -> bool {
        self.prime
    }

    /// Whether the residual contains the bare hole, i.e. the
    /// representative belongs to the language.
    pub fn is_final(&self) -> bool {
        self.is_final
    }
}

/// Where a term's residual sits in the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidualOfTerm {
    /// Index into [`ResidualLatticeUp::nodes`].
    Node(usize),
    /// The empty residual: no context completes the term into the
    /// language.
    Empty,
}

/// The finite set of residuals of a regular tree language, ordered by
/// context-language inclusion and classified prime/composite.
#[derive(Debug, Clone)]
pub struct ResidualLatticeUp {
    base: Dfta,
    nodes: Vec<LatticeNode>,
    /// Pairs of node indices `(i, j)` with residual(i) ⊆ residual(j).
    leq: BTreeSet<(usize, usize)>,
    sink: Option<State>,
}

impl ResidualLatticeUp {
    /// Builds the lattice for the language of `l`: minimize the subset
    /// construction, order the live states by context-language
    /// inclusion, and flag the primes.
    pub fn build(l: &BottomUpAutomaton) -> Self {
        let base = l.determinize().minimize().expect("subset construction is deterministic");
        let live = base.live_states();
        let sink = base
            .states()
            .iter()
            .find(|q| !live.contains(*q))
            .cloned();
        let reps = representatives(&base);
        let mut ordered: Vec<State> = live.iter().cloned().collect();
        ordered.sort_by(|a, b| reps[a].cmp(&reps[b]));

        let relation = context_inclusion_relation(&base);
        let index_of: BTreeMap<&State, usize> =
            ordered.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let mut leq: BTreeSet<(usize, usize)> = BTreeSet::new();
        for p in &ordered {
            for q in &ordered {
                if relation.contains(&(p.clone(), q.clone())) {
                    leq.insert((index_of[p], index_of[q]));
                }
            }
        }

        // Prime flags: a node is composite when its context language is
        // included in (hence equal to) the union of the strictly smaller
        // ones, decided on the marked-context automata.
        let mut nodes: Vec<LatticeNode> = ordered
            .iter()
            .map(|q| LatticeNode {
                state: q.clone(),
                rep: reps[q].clone(),
                prime: true,
                is_final: base.is_final(q),
            })
            .collect();
        for i in 0..nodes.len() {
            let smaller: Vec<usize> = (0..nodes.len())
                .filter(|&j| j != i && leq.contains(&(j, i)))
                .collect();
            if smaller.is_empty() {
                continue;
            }
            let own = context_language(base.as_automaton(), &nodes[i].state)
                .expect("state exists");
            let mut union: Option<BottomUpAutomaton> = None;
            for j in smaller {
                let part = context_language(base.as_automaton(), &nodes[j].state)
                    .expect("state exists");
                union = Some(match union {
                    None => part.automaton().clone(),
                    Some(u) => u
                        .union_disjoint(part.automaton())
                        .expect("same extended alphabet"),
                });
            }
            let union = union.expect("at least one smaller node");
            if own
                .automaton()
                .included_in(&union)
                .expect("same extended alphabet")
            {
                nodes[i].prime = false;
            }
        }

        ResidualLatticeUp {
            base,
            nodes,
            leq,
            sink,
        }
    }

    /// The minimal deterministic complete automaton underlying the
    /// lattice.
    pub fn base(&self) -> &Dfta {
        &self.base
    }

    /// Live nodes, one per non-empty residual, in representative order.
    pub fn nodes(&self) -> &[LatticeNode] {
        &self.nodes
    }

    /// The dead state of the base automaton, when the language has the
    /// empty residual.
    pub fn sink(&self) -> Option<&State> {
        self.sink.as_ref()
    }

    pub fn prime_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.prime).count()
    }

    pub fn primes(&self) -> impl Iterator<Item = (usize, &LatticeNode)> {
        self.nodes.iter().enumerate().filter(|(_, n)| n.prime)
    }

    /// Residual inclusion between two nodes.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.contains(&(i, j))
    }

    /// The node whose context language is the residual of `t`, or
    /// [`ResidualOfTerm::Empty`] when the term reaches the dead state.
    pub fn residual_of_term(&self, t: &Term) -> Result<ResidualOfTerm> {
        let state = self
            .base
            .run(t)?
            .expect("minimal automaton is complete");
        match self.nodes.iter().position(|n| n.state == state) {
            Some(i) => Ok(ResidualOfTerm::Node(i)),
            None => Ok(ResidualOfTerm::Empty),
        }
    }

    /// The marked-context automaton for a node's residual.
    pub fn node_context_language(&self, i: usize) -> MarkedContextAutomaton {
        context_language(self.base.as_automaton(), &self.nodes[i].state)
            .expect("node state exists")
    }
}

/// Whether every state of `a` (after trimming) accepts exactly some
/// residual of the recognized language.
///
/// Compares each state's context language against the live states of
/// the minimal automaton directly; the prime/composite classification
/// is not needed for this decision. Candidate pairs are prefiltered by
/// their acceptance pattern on small contexts before the exact
/// equivalence runs.
pub fn is_bottom_up_rfta(a: &BottomUpAutomaton) -> bool {
    let trimmed = a.trim();
    let base = trimmed
        .determinize()
        .minimize()
        .expect("subset construction is deterministic");
    let probes = crate::trees::enumerate_contexts(trimmed.alphabet(), 2);
    let fingerprint = |m: &MarkedContextAutomaton| -> Vec<bool> {
        probes
            .iter()
            .map(|c| m.accepts_context(c).expect("probe context fits the alphabet"))
            .collect()
    };
    let residual_langs: Vec<(Vec<bool>, MarkedContextAutomaton)> = base
        .live_states()
        .iter()
        .map(|q| {
            let m = context_language(base.as_automaton(), q).expect("state exists");
            (fingerprint(&m), m)
        })
        .collect();
    for q in trimmed.states() {
        let cq = context_language(&trimmed, q).expect("state exists");
        let print = fingerprint(&cq);
        let matched = residual_langs
            .iter()
            .filter(|(p, _)| *p == print)
            .any(|(_, r)| cq.equivalent(r).expect("shared extended alphabet"));
        if !matched {
            return false;
        }
    }
    true
}

/// The canonical residual automaton of the language of `l`: one state
/// per prime residual, finals the primes containing the bare hole, and
/// every rule whose target residual contains the residual of the
/// rewritten left-hand side. Minimal in states among residual automata
/// for the language and unique up to renaming.
pub fn canonical_up_rfta(l: &BottomUpAutomaton) -> BottomUpAutomaton {
    let lattice = ResidualLatticeUp::build(l);
    let primes: Vec<usize> = lattice.primes().map(|(i, _)| i).collect();
    let name_of: BTreeMap<usize, State> = primes
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, State::new(format!("p{k}"))))
        .collect();
    let states: BTreeSet<State> = name_of.values().cloned().collect();
    let finals: BTreeSet<State> = primes
        .iter()
        .filter(|&&i| lattice.nodes()[i].is_final())
        .map(|i| name_of[i].clone())
        .collect();

    let base = lattice.base();
    let node_state: BTreeMap<usize, &State> = primes
        .iter()
        .map(|&i| (i, lattice.nodes()[i].state()))
        .collect();
    let state_node: BTreeMap<&State, usize> = lattice
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.state(), i))
        .collect();

    let mut rules: BTreeSet<Rule> = BTreeSet::new();
    let pool: Vec<&usize> = primes.iter().collect();
    for (symbol, arity) in l.alphabet().symbols() {
        each_tuple(&pool, arity, &mut |tuple| {
            let children: Vec<State> = tuple
                .iter()
                .map(|&&i| node_state[&i].clone())
                .collect();
            let target = base
                .delta(symbol, &children)
                .expect("minimal automaton is complete")
                .clone();
            // Rules into every prime whose residual is below the target's.
            if let Some(&target_node) = state_node.get(&target) {
                for &i in &primes {
                    if lattice.leq(i, target_node) {
                        rules.insert(Rule::new(
                            symbol,
                            tuple.iter().map(|&&j| name_of[&j].clone()).collect(),
                            name_of[&i].clone(),
                        ));
                    }
                }
            }
        });
    }
    BottomUpAutomaton::new(l.alphabet().clone(), states, finals, rules)
        .expect("canonical construction is well-formed")
}

/// Whether `a` is exactly the canonical residual automaton of its own
/// language, up to a renaming of states.
pub fn is_canonical_up_rfta(a: &BottomUpAutomaton) -> bool {
    isomorphic(a, &canonical_up_rfta(a))
}

/// Rules of the canonical automaton of `L(a)` that `a` lacks, expressed
/// over `a`'s own states.
///
/// Each state of the trimmed automaton is identified with the
/// inclusion-minimal residual containing its context language (for a
/// residual automaton this is the residual it equals). The comparison
/// is meaningful when that identification is a bijection onto the
/// prime residuals; returns `None` otherwise.
pub fn missing_canonical_rules(a: &BottomUpAutomaton) -> Option<BTreeSet<Rule>> {
    let trimmed = a.trim();
    let lattice = ResidualLatticeUp::build(&trimmed);
    let node_of_language = |cq: &MarkedContextAutomaton| -> Option<usize> {
        let candidates: Vec<usize> = (0..lattice.nodes().len())
            .filter(|&i| {
                cq.included_in(&lattice.node_context_language(i))
                    .expect("shared extended alphabet")
            })
            .collect();
        let minimal: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| {
                !candidates
                    .iter()
                    .any(|&j| j != i && lattice.leq(j, i))
            })
            .collect();
        match minimal.as_slice() {
            [unique] => Some(*unique),
            _ => None,
        }
    };
    let mut node_of: BTreeMap<State, usize> = BTreeMap::new();
    for q in trimmed.states() {
        let cq = context_language(&trimmed, q).ok()?;
        node_of.insert(q.clone(), node_of_language(&cq)?);
    }
    // The identification must be a bijection onto the primes.
    let image: BTreeSet<usize> = node_of.values().copied().collect();
    if image.len() != node_of.len()
        || image.len() != lattice.prime_count()
        || !image.iter().all(|&i| lattice.nodes()[i].is_prime())
    {
        return None;
    }
    let state_of: BTreeMap<usize, State> =
        node_of.iter().map(|(q, i)| (*i, q.clone())).collect();

    let canonical = canonical_up_rfta(&trimmed);
    let mut canon_node: BTreeMap<State, usize> = BTreeMap::new();
    for q in canonical.states() {
        let cq = context_language(&canonical, q).ok()?;
        canon_node.insert(q.clone(), node_of_language(&cq)?);
    }
    let mut missing: BTreeSet<Rule> = BTreeSet::new();
    for r in canonical.rules() {
        let translated = Rule::new(
            r.symbol.clone(),
            r.children
                .iter()
                .map(|q| state_of[&canon_node[q]].clone())
                .collect(),
            state_of[&canon_node[&r.target]].clone(),
        );
        if !trimmed.rules().contains(&translated) {
            missing.insert(translated);
        }
    }
    Some(missing)
}

/// Exact automaton isomorphism: a bijection on states carrying finals
/// to finals and rules to rules. Backtracking over candidate pairs,
/// pruned by occurrence signatures.
pub fn isomorphic(a: &BottomUpAutomaton, b: &BottomUpAutomaton) -> bool {
    if a.alphabet() != b.alphabet()
        || a.states().len() != b.states().len()
        || a.finals().len() != b.finals().len()
        || a.rules().len() != b.rules().len()
    {
        return false;
    }

    // (finality, per-(symbol, position) occurrence counts) with the
    // target counted at position usize::MAX
    type Signature = (bool, Vec<(String, usize, usize)>);

    fn signature(auto: &BottomUpAutomaton, q: &State) -> Signature {
        let mut counts: BTreeMap<(String, usize), usize> = BTreeMap::new();
        for r in auto.rules() {
            if r.target == *q {
                *counts.entry((r.symbol.clone(), usize::MAX)).or_default() += 1;
            }
            for (i, c) in r.children.iter().enumerate() {
                if c == q {
                    *counts.entry((r.symbol.clone(), i)).or_default() += 1;
                }
            }
        }
        (
            auto.is_final(q),
            counts.into_iter().map(|((s, i), n)| (s, i, n)).collect(),
        )
    }

    let a_states: Vec<&State> = a.states().iter().collect();
    let sig_a: BTreeMap<&State, Signature> = a_states
        .iter()
        .map(|q| (*q, signature(a, q)))
        .collect();
    let mut sig_b: BTreeMap<Signature, Vec<&State>> = BTreeMap::new();
    for q in b.states() {
        sig_b.entry(signature(b, q)).or_default().push(q);
    }

    fn extend<'a>(
        a: &BottomUpAutomaton,
        b: &BottomUpAutomaton,
        order: &[&'a State],
        sig_a: &BTreeMap<&State, Signature>,
        sig_b: &BTreeMap<Signature, Vec<&'a State>>,
        map: &mut BTreeMap<&'a State, &'a State>,
        used: &mut BTreeSet<&'a State>,
    ) -> bool {
        let Some(q) = order.get(map.len()).copied() else {
            // Full map: verify the rule bijection.
            let translated: BTreeSet<Rule> = a
                .rules()
                .iter()
                .map(|r| {
                    Rule::new(
                        r.symbol.clone(),
                        r.children.iter().map(|c| map[c].clone()).collect(),
                        map[&r.target].clone(),
                    )
                })
                .collect();
            return &translated == b.rules();
        };
        let Some(candidates) = sig_b.get(&sig_a[q]) else {
            return false;
        };
        for cand in candidates {
            if used.contains(cand) {
                continue;
            }
            map.insert(q, cand);
            used.insert(cand);
            if extend(a, b, order, sig_a, sig_b, map, used) {
                return true;
            }
            map.remove(q);
            used.remove(cand);
        }
        false
    }

    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    extend(a, b, &a_states, &sig_a, &sig_b, &mut map, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bu::test_support::example1;
    use crate::trees::{enumerate_contexts, parse_context, parse_term, RankedAlphabet};

    fn ctx_set(m: &MarkedContextAutomaton, alphabet: &RankedAlphabet, h: usize) -> BTreeSet<String> {
        enumerate_contexts(alphabet, h)
            .into_iter()
            .filter(|c| m.accepts_context(c).unwrap())
            .map(|c| c.to_string())
            .collect()
    }

    #[test]
    fn context_language_of_example_states() {
        let a = example1();
        let alphabet = a.alphabet().clone();
        let cq1 = context_language(&a, &State::from("q1")).unwrap();
        assert_eq!(
            ctx_set(&cq1, &alphabet, 3),
            BTreeSet::from(["f(<>,b1)".to_string()])
        );
        let cq5 = context_language(&a, &State::from("q5")).unwrap();
        assert_eq!(ctx_set(&cq5, &alphabet, 3), BTreeSet::from(["<>".to_string()]));
        assert!(context_language(&a, &State::from("nope")).is_err());
    }

    #[test]
    fn marked_automaton_rejects_non_contexts() {
        let a = example1();
        let m = context_language(&a, &State::from("q1")).unwrap();
        // zero holes
        let ground = parse_term(a.alphabet(), "f(a1,b1)").unwrap();
        assert!(!m.automaton().accepts(&ground).unwrap());
        // two holes
        let hole = Term::constant(crate::trees::HOLE_TOKEN);
        let double = Term::new("f", vec![hole.clone(), hole]);
        assert!(!m.automaton().accepts(&double).unwrap());
    }

    #[test]
    fn context_language_empty_for_useless_state() {
        let a = example1();
        let mut states = a.states().clone();
        states.insert(State::from("loose"));
        let padded = BottomUpAutomaton::new(
            a.alphabet().clone(),
            states,
            a.finals().clone(),
            a.rules().clone(),
        )
        .unwrap();
        let c = context_language(&padded, &State::from("loose")).unwrap();
        assert!(c.is_empty_language());
    }

    #[test]
    fn lattice_of_example1() {
        let a = example1();
        let lattice = ResidualLatticeUp::build(&a);
        assert_eq!(lattice.nodes().len(), 5);
        assert!(lattice.sink().is_some());
        assert!(lattice.nodes().iter().all(|n| n.is_prime()));

        // Named residuals via representative terms.
        let by_rep: BTreeMap<String, usize> = lattice
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.representative().to_string(), i))
            .collect();
        let a1 = by_rep["a1"];
        let a2 = by_rep["a2"];
        let b1 = by_rep["b1"];
        let b2 = by_rep["b2"];
        assert!(lattice.leq(a2, a1) && !lattice.leq(a1, a2));
        assert!(lattice.leq(b1, b2) && !lattice.leq(b2, b1));

        // residual_of_term examples
        let t = parse_term(a.alphabet(), "a1").unwrap();
        assert_eq!(lattice.residual_of_term(&t).unwrap(), ResidualOfTerm::Node(a1));
        let t = parse_term(a.alphabet(), "f(a1,b1)").unwrap();
        let node = match lattice.residual_of_term(&t).unwrap() {
            ResidualOfTerm::Node(i) => i,
            ResidualOfTerm::Empty => panic!("member of L has the hole residual"),
        };
        let m = lattice.node_context_language(node);
        assert!(m
            .accepts_context(&parse_context(a.alphabet(), "<>").unwrap())
            .unwrap());
        let t = parse_term(a.alphabet(), "f(b1,b1)").unwrap();
        assert_eq!(lattice.residual_of_term(&t).unwrap(), ResidualOfTerm::Empty);
    }

    #[test]
    fn context_inclusion_examples() {
        let a = example1();
        let lattice = ResidualLatticeUp::build(&a);
        let base = lattice.base();
        for q in base.states() {
            assert!(context_inclusion(base, q, q).unwrap());
        }
    }

    #[test]
    fn example1_is_not_rfta_but_canonical_is() {
        let a = example1();
        assert!(!is_bottom_up_rfta(&a));
        let canonical = canonical_up_rfta(&a);
        assert_eq!(canonical.states().len(), 5);
        assert!(canonical.equivalent(&a).unwrap());
        assert!(is_bottom_up_rfta(&canonical));
        assert!(is_canonical_up_rfta(&canonical));
        assert!(!is_canonical_up_rfta(&a));
    }

    #[test]
    fn minimized_dfta_is_rfta() {
        let a = example1();
        let min = a.determinize().minimize().unwrap();
        assert!(is_bottom_up_rfta(min.as_automaton()));
    }

    #[test]
    fn canonical_idempotent_up_to_renaming() {
        let a = example1();
        let c1 = canonical_up_rfta(&a);
        let c2 = canonical_up_rfta(&c1);
        assert!(isomorphic(&c1, &c2));
    }

    #[test]
    fn isomorphic_detects_renaming_and_rejects_different_sizes() {
        let a = example1();
        // rename all states
        let rename = |q: &State| State::new(format!("s_{q}"));
        let renamed = BottomUpAutomaton::new(
            a.alphabet().clone(),
            a.states().iter().map(rename),
            a.finals().iter().map(rename),
            a.rules().iter().map(|r| {
                Rule::new(
                    r.symbol.clone(),
                    r.children.iter().map(rename).collect(),
                    rename(&r.target),
                )
            }),
        )
        .unwrap();
        assert!(isomorphic(&a, &renamed));
        let fewer = a.trim();
        let min = a.determinize().minimize().unwrap();
        assert!(!isomorphic(&fewer, min.as_automaton()));
    }
}
