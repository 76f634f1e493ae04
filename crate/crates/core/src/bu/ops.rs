//! Closure and decision algebra: subset construction, completion,
//! products, complement, inclusion and equivalence.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::Result;

use super::{each_tuple, BottomUpAutomaton, Dfta, Rule, State};

/// Boolean mode for [`BottomUpAutomaton::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    /// Intersection of the two languages.
    And,
    /// Union of the two languages; both operands are completed first.
    Or,
}

/// Calls `emit` once per choice of one element from each pool.
fn each_choice<'a>(pools: &[Vec<&'a State>], emit: &mut impl FnMut(&[&'a State])) {
    fn go<'a>(
        pools: &[Vec<&'a State>],
        chosen: &mut Vec<&'a State>,
        emit: &mut impl FnMut(&[&'a State]),
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
    go(pools, &mut Vec::with_capacity(pools.len()), emit);
}

fn subset_name(set: &BTreeSet<State>) -> State {
    let mut s = String::from("{");
    for (i, q) in set.iter().enumerate() {
        if i > 0 {
            s.push('|');
        }
        s.push_str(q.as_str());
    }
    s.push('}');
    State::new(s)
}

fn pair_name(p: &State, q: &State) -> State {
    State::new(format!("[{}&{}]", p.as_str(), q.as_str()))
}

impl BottomUpAutomaton {
    /// Subset construction. The result is deterministic and complete;
    /// its states are exactly the reachable subsets of this automaton's
    /// states (the empty subset acts as the sink when reachable).
    pub fn determinize(&self) -> Dfta {
        let mut by_symbol: std::collections::BTreeMap<&str, Vec<&Rule>> =
            std::collections::BTreeMap::new();
        for r in &self.rules {
            by_symbol.entry(r.symbol.as_str()).or_default().push(r);
        }
        let mut discovered: Vec<BTreeSet<State>> = Vec::new();
        let mut seen: BTreeSet<BTreeSet<State>> = BTreeSet::new();
        let mut rules: BTreeSet<Rule> = BTreeSet::new();

        let image = |sets: &[&BTreeSet<State>], symbol: &str| -> BTreeSet<State> {
            let mut out = BTreeSet::new();
            for r in by_symbol.get(symbol).into_iter().flatten() {
                if r.children.iter().zip(sets).all(|(q, s)| s.contains(q)) {
                    out.insert(r.target.clone());
                }
            }
            out
        };

        for (symbol, arity) in self.alphabet.symbols() {
            if arity == 0 {
                let img = image(&[], symbol);
                if seen.insert(img.clone()) {
                    discovered.push(img);
                }
            }
        }
        loop {
            let mut added = false;
            let pool: Vec<&BTreeSet<State>> = discovered.iter().collect();
            let mut new_subsets: Vec<BTreeSet<State>> = Vec::new();
            for (symbol, arity) in self.alphabet.symbols() {
                if arity == 0 {
                    continue;
                }
                each_tuple(&pool, arity, &mut |tuple| {
                    let img = image(tuple, symbol);
                    if !seen.contains(&img) {
                        seen.insert(img.clone());
                        new_subsets.push(img);
                    }
                });
            }
            if !new_subsets.is_empty() {
                discovered.extend(new_subsets);
                added = true;
            }
            if !added {
                break;
            }
        }

        let pool: Vec<&BTreeSet<State>> = discovered.iter().collect();
        for (symbol, arity) in self.alphabet.symbols() {
            each_tuple(&pool, arity, &mut |tuple| {
                let img = image(tuple, symbol);
                rules.insert(Rule::new(
                    symbol,
                    tuple.iter().map(|s| subset_name(s)).collect(),
                    subset_name(&img),
                ));
            });
        }

        let states: BTreeSet<State> = discovered.iter().map(subset_name).collect();
        let finals: BTreeSet<State> = discovered
            .iter()
            .filter(|s| s.iter().any(|q| self.finals.contains(q)))
            .map(subset_name)
            .collect();
        let auto = BottomUpAutomaton {
            alphabet: self.alphabet.clone(),
            states,
            finals,
            rules,
        };
        debug_assert!(auto.states.len() == discovered.len());
        Dfta::from_automaton(auto)
    }

    /// Adds a sink state (if needed) so that every symbol/tuple has at
    /// least one rule. Preserves the language and determinism.
    pub fn complete(&self) -> BottomUpAutomaton {
        let mut lhs: BTreeSet<(String, Vec<State>)> = BTreeSet::new();
        for r in &self.rules {
            lhs.insert((r.symbol.clone(), r.children.clone()));
        }
        let sink = self.fresh_state("sink");
        let mut states = self.states.clone();
        let mut rules = self.rules.clone();
        let mut used_sink = false;
        let with_sink: Vec<State> = states
            .iter()
            .cloned()
            .chain(std::iter::once(sink.clone()))
            .collect();
        let pool: Vec<&State> = with_sink.iter().collect();
        for (symbol, arity) in self.alphabet.symbols() {
            each_tuple(&pool, arity, &mut |tuple| {
                let children: Vec<State> = tuple.iter().map(|q| (*q).clone()).collect();
                if !lhs.contains(&(symbol.to_string(), children.clone())) {
                    rules.insert(Rule::new(symbol, children, sink.clone()));
                    used_sink = true;
                }
            });
        }
        if !used_sink {
            return self.clone();
        }
        states.insert(sink);
        BottomUpAutomaton {
            alphabet: self.alphabet.clone(),
            states,
            finals: self.finals.clone(),
            rules,
        }
    }

    /// Product automaton restricted to term-reachable pairs. `And`
    /// recognizes the intersection, `Or` the union. For the union both
    /// operands are completed first; intersection works on stuck runs
    /// directly.
    pub fn product(&self, other: &BottomUpAutomaton, mode: ProductMode) -> Result<BottomUpAutomaton> {
        self.check_same_alphabet(other)?;
        let (left, right) = match mode {
            ProductMode::And => (self.clone(), other.clone()),
            ProductMode::Or => (self.complete(), other.complete()),
        };

        // Rule pairs grouped by symbol; each pair is materialized once,
        // as soon as all its child pairs are term-reachable.
        let mut pending: Vec<(&Rule, &Rule)> = Vec::new();
        for rl in left.rules() {
            for rr in right.rules() {
                if rl.symbol == rr.symbol {
                    pending.push((rl, rr));
                }
            }
        }
        let mut discovered: BTreeSet<(State, State)> = BTreeSet::new();
        let mut rules: BTreeSet<Rule> = BTreeSet::new();
        loop {
            let mut grew = false;
            pending.retain(|(rl, rr)| {
                let ready = rl
                    .children
                    .iter()
                    .zip(&rr.children)
                    .all(|(p, q)| discovered.contains(&(p.clone(), q.clone())));
                if !ready {
                    return true;
                }
                rules.insert(Rule::new(
                    rl.symbol.clone(),
                    rl.children
                        .iter()
                        .zip(&rr.children)
                        .map(|(p, q)| pair_name(p, q))
                        .collect(),
                    pair_name(&rl.target, &rr.target),
                ));
                if discovered.insert((rl.target.clone(), rr.target.clone())) {
                    grew = true;
                }
                false
            });
            if !grew {
                break;
            }
        }

        let states: BTreeSet<State> =
            discovered.iter().map(|(p, q)| pair_name(p, q)).collect();
        let finals: BTreeSet<State> = discovered
            .iter()
            .filter(|(p, q)| match mode {
                ProductMode::And => left.finals.contains(p) && right.finals.contains(q),
                ProductMode::Or => left.finals.contains(p) || right.finals.contains(q),
            })
            .map(|(p, q)| pair_name(p, q))
            .collect();
        Ok(BottomUpAutomaton {
            alphabet: self.alphabet.clone(),
            states,
            finals,
            rules,
        })
    }

    /// Whether some term is accepted by both automata. Joint
    /// reachability over state pairs, stopping at the first jointly
    /// final pair.
    pub(crate) fn intersects(&self, other: &BottomUpAutomaton) -> Result<bool> {
        self.check_same_alphabet(other)?;
        let other_index = super::rule_index(other);
        // discovered B-partners per A-state
        let mut partners: BTreeMap<&State, BTreeSet<&State>> = BTreeMap::new();
        let mut known: BTreeSet<(&State, &State)> = BTreeSet::new();
        loop {
            let mut grew = false;
            for rule in &self.rules {
                let pools: Vec<Vec<&State>> = rule
                    .children
                    .iter()
                    .map(|a| {
                        partners
                            .get(a)
                            .map(|s| s.iter().copied().collect())
                            .unwrap_or_default()
                    })
                    .collect();
                if pools.iter().any(|p| p.is_empty()) {
                    continue;
                }
                let mut found_final = false;
                each_choice(&pools, &mut |chosen| {
                    if found_final {
                        return;
                    }
                    let key = (
                        rule.symbol.clone(),
                        chosen.iter().map(|q| (*q).clone()).collect::<Vec<_>>(),
                    );
                    for target in other_index.get(&key).into_iter().flatten() {
                        if known.insert((&rule.target, target)) {
                            grew = true;
                            if self.finals.contains(&rule.target)
                                && other.finals.contains(target)
                            {
                                found_final = true;
                                return;
                            }
                        }
                    }
                });
                if found_final {
                    return Ok(true);
                }
            }
            if !grew {
                return Ok(false);
            }
            partners.clear();
            for &(a, b) in &known {
                partners.entry(a).or_default().insert(b);
            }
        }
    }

    /// Language inclusion, decided as emptiness of the intersection
    /// with the complement of the right-hand side. An
    /// already-deterministic right operand skips the subset
    /// construction and is merely completed.
    pub fn included_in(&self, other: &BottomUpAutomaton) -> Result<bool> {
        self.check_same_alphabet(other)?;
        let flagged = Dfta::from_automaton(other.clone());
        let complement = if flagged.is_deterministic() {
            Dfta::from_automaton(flagged.into_automaton().complete()).complement()?
        } else {
            other.determinize().complement()?
        };
        Ok(!self.intersects(complement.as_automaton())?)
    }

    /// Language equality, decided by mutual inclusion.
    pub fn equivalent(&self, other: &BottomUpAutomaton) -> Result<bool> {
        Ok(self.included_in(other)? && other.included_in(self)?)
    }

    /// Disjoint union: recognizes the union of the two languages
    /// without completing or multiplying states.
    pub(crate) fn union_disjoint(&self, other: &BottomUpAutomaton) -> Result<BottomUpAutomaton> {
        self.check_same_alphabet(other)?;
        let rename_l = |q: &State| State::new(format!("l:{q}"));
        let rename_r = |q: &State| State::new(format!("r:{q}"));
        let states: BTreeSet<State> = self
            .states
            .iter()
            .map(rename_l)
            .chain(other.states.iter().map(rename_r))
            .collect();
        let finals: BTreeSet<State> = self
            .finals
            .iter()
            .map(rename_l)
            .chain(other.finals.iter().map(rename_r))
            .collect();
        let rules: BTreeSet<Rule> = self
            .rules
            .iter()
            .map(|r| {
                Rule::new(
                    r.symbol.clone(),
                    r.children.iter().map(rename_l).collect(),
                    rename_l(&r.target),
                )
            })
            .chain(other.rules.iter().map(|r| {
                Rule::new(
                    r.symbol.clone(),
                    r.children.iter().map(rename_r).collect(),
                    rename_r(&r.target),
                )
            }))
            .collect();
        Ok(BottomUpAutomaton {
            alphabet: self.alphabet.clone(),
            states,
            finals,
            rules,
        })
    }
}

impl Dfta {
    /// Complements a deterministic complete automaton by flipping the
    /// final states.
    pub fn complement(&self) -> Result<Dfta> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        let auto = self.as_automaton();
        let finals: BTreeSet<State> = auto
            .states
            .difference(&auto.finals)
            .cloned()
            .collect();
        Ok(Dfta {
            auto: BottomUpAutomaton {
                alphabet: auto.alphabet.clone(),
                states: auto.states.clone(),
                finals,
                rules: auto.rules.clone(),
            },
            deterministic: true,
            complete: true,
        })
    }
}

/// Builds the map from subset display names back to subsets, exposed for
/// diagnostics in the subset-construction tests.
#[allow(dead_code)]
pub(crate) fn subset_members(name: &State) -> Vec<String> {
    let s = name.as_str();
    let inner = s.trim_start_matches('{').trim_end_matches('}');
    if inner.is_empty() {
        Vec::new()
    } else {
        inner.split('|').map(|p| p.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::example1;
    use super::*;
    use crate::trees::{enumerate_terms, parse_term, RankedAlphabet};

    #[test]
    fn determinize_example1_reaches_subset() {
        let a = example1();
        let d = a.determinize();
        assert!(d.is_deterministic());
        assert!(d.is_complete());
        let t = parse_term(a.alphabet(), "a1").unwrap();
        let q = d.run(&t).unwrap().unwrap();
        assert_eq!(q.as_str(), "{q1|q4}");
    }

    #[test]
    fn determinize_preserves_language_on_small_terms() {
        let a = example1();
        let d = a.determinize();
        for t in enumerate_terms(a.alphabet(), 3) {
            assert_eq!(a.accepts(&t).unwrap(), d.accepts(&t).unwrap(), "{t}");
        }
    }

    #[test]
    fn complete_empty_automaton() {
        let alphabet = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        let empty = BottomUpAutomaton::empty(alphabet.clone());
        let completed = empty.complete();
        assert_eq!(completed.states().len(), 1);
        assert!(Dfta::from_automaton(completed.clone()).is_complete());
        assert!(completed.is_empty_language());
    }

    #[test]
    fn complement_of_empty_accepts_everything() {
        let alphabet = RankedAlphabet::new([("f", 2), ("a", 0)]).unwrap();
        let empty = BottomUpAutomaton::empty(alphabet.clone());
        let comp = empty.determinize().complement().unwrap();
        for t in enumerate_terms(&alphabet, 3) {
            assert!(comp.accepts(&t).unwrap());
        }
    }

    #[test]
    fn complement_requires_deterministic_complete() {
        let a = example1();
        let nondet = Dfta::from_automaton(a.clone());
        assert!(nondet.complement().is_err());
    }

    #[test]
    fn product_modes() {
        let a = example1();
        let alphabet = a.alphabet().clone();
        // Singleton language {f(a1,b1)}.
        let single = BottomUpAutomaton::new(
            alphabet.clone(),
            ["x", "y", "z"].map(State::from),
            [State::from("z")],
            [
                Rule::new("a1", vec![], State::from("x")),
                Rule::new("b1", vec![], State::from("y")),
                Rule::new("f", vec![State::from("x"), State::from("y")], State::from("z")),
            ],
        )
        .unwrap();
        let and = a.product(&single, ProductMode::And).unwrap();
        let or = a.product(&single, ProductMode::Or).unwrap();
        for t in enumerate_terms(&alphabet, 2) {
            let in_a = a.accepts(&t).unwrap();
            let in_s = single.accepts(&t).unwrap();
            assert_eq!(and.accepts(&t).unwrap(), in_a && in_s, "{t}");
            assert_eq!(or.accepts(&t).unwrap(), in_a || in_s, "{t}");
        }
    }

    #[test]
    fn inclusion_reflexive_and_intersection_with_complement_empty() {
        let a = example1();
        assert!(a.included_in(&a).unwrap());
        assert!(a.equivalent(&a).unwrap());
        let comp = a.determinize().complement().unwrap();
        let both = a.product(comp.as_automaton(), ProductMode::And).unwrap();
        assert!(both.is_empty_language());
    }

    #[test]
    fn union_disjoint_is_union() {
        let a = example1();
        let alphabet = a.alphabet().clone();
        let single = BottomUpAutomaton::new(
            alphabet.clone(),
            ["x", "y", "z"].map(State::from),
            [State::from("z")],
            [
                Rule::new("a2", vec![], State::from("x")),
                Rule::new("b1", vec![], State::from("y")),
                Rule::new("f", vec![State::from("x"), State::from("y")], State::from("z")),
            ],
        )
        .unwrap();
        let u = a.union_disjoint(&single).unwrap();
        for t in enumerate_terms(&alphabet, 2) {
            assert_eq!(
                u.accepts(&t).unwrap(),
                a.accepts(&t).unwrap() || single.accepts(&t).unwrap(),
                "{t}"
            );
        }
    }
}
