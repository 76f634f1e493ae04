//! DFTA minimization by partition refinement.
//!
//! The input is completed and restricted to term-reachable states, then
//! states are split until no depth-one frame over concrete states can
//! distinguish two members of a class. The quotient's classes are in
//! one-to-one correspondence with the distinct bottom-up residual
//! languages of the recognized language, the dead class (when it
//! exists) standing for the empty residual.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::Result;

use super::{each_tuple, BottomUpAutomaton, Dfta, Rule, State};

impl Dfta {
    /// Minimal deterministic complete automaton for the same language,
    /// unique up to state renaming.
    pub fn minimize(&self) -> Result<Dfta> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        let completed = Dfta::from_automaton(self.as_automaton().complete());
        let auto = completed.as_automaton();
        // Completion gives every constant a rule, so at least the sink
        // is term-reachable.
        let reachable: Vec<State> = auto.term_reachable_states().into_iter().collect();

        let index = super::rule_index(auto);
        let delta = |symbol: &str, children: &[&State]| -> State {
            let key = (
                symbol.to_string(),
                children.iter().map(|q| (*q).clone()).collect::<Vec<_>>(),
            );
            index.get(&key).and_then(|ts| ts.first()).cloned().expect(
                "complete deterministic automaton has exactly one target per frame",
            )
        };

        // class id per state; start from the final/non-final split.
        let mut class: BTreeMap<State, usize> = reachable
            .iter()
            .map(|q| (q.clone(), usize::from(auto.finals.contains(q))))
            .collect();

        loop {
            // Signature: per state, the class of every depth-one frame
            // target, frames ranging over concrete reachable states.
            let mut signatures: BTreeMap<State, Vec<usize>> = BTreeMap::new();
            for q in &reachable {
                let mut sig = vec![class[q]];
                for (symbol, arity) in auto.alphabet.symbols() {
                    if arity == 0 {
                        continue;
                    }
                    let pool: Vec<&State> = reachable.iter().collect();
                    for position in 0..arity {
                        each_tuple(&pool, arity - 1, &mut |others| {
                            let mut children: Vec<&State> = Vec::with_capacity(arity);
                            children.extend_from_slice(&others[..position]);
                            children.push(q);
                            children.extend_from_slice(&others[position..]);
                            sig.push(class[&delta(symbol, &children)]);
                        });
                    }
                }
                signatures.insert(q.clone(), sig);
            }
            let mut new_ids: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
            let mut new_class: BTreeMap<State, usize> = BTreeMap::new();
            for q in &reachable {
                let sig = &signatures[q];
                let next = new_ids.len();
                let id = *new_ids.entry(sig).or_insert(next);
                new_class.insert(q.clone(), id);
            }
            let stable = {
                let old_count = class.values().collect::<BTreeSet<_>>().len();
                let new_count = new_ids.len();
                old_count == new_count
            };
            class = new_class;
            if stable {
                break;
            }
        }

        // Quotient construction. Class names list their members so runs
        // of the minimizer are reproducible.
        let mut members: BTreeMap<usize, BTreeSet<State>> = BTreeMap::new();
        for q in &reachable {
            members.entry(class[q]).or_default().insert(q.clone());
        }
        let class_list: Vec<&BTreeSet<State>> = {
            let mut v: Vec<&BTreeSet<State>> = members.values().collect();
            v.sort();
            v
        };
        let name_of: BTreeMap<usize, State> = members
            .iter()
            .map(|(id, set)| {
                let idx = class_list
                    .iter()
                    .position(|s| *s == set)
                    .expect("class set present");
                (*id, State::new(format!("m{idx}")))
            })
            .collect();
        let representative: BTreeMap<usize, &State> = members
            .iter()
            .map(|(id, set)| (*id, set.iter().next().expect("non-empty class")))
            .collect();

        let mut rules: BTreeSet<Rule> = BTreeSet::new();
        let ids: Vec<usize> = members.keys().copied().collect();
        for (symbol, arity) in auto.alphabet.symbols() {
            let pool: Vec<&usize> = ids.iter().collect();
            each_tuple(&pool, arity, &mut |tuple| {
                let children: Vec<&State> =
                    tuple.iter().map(|id| representative[id]).collect();
                let target = delta(symbol, &children);
                rules.insert(Rule::new(
                    symbol,
                    tuple.iter().map(|id| name_of[id].clone()).collect(),
                    name_of[&class[&target]].clone(),
                ));
            });
        }
        let states: BTreeSet<State> = name_of.values().cloned().collect();
        let finals: BTreeSet<State> = members
            .iter()
            .filter(|(_, set)| set.iter().any(|q| auto.finals.contains(q)))
            .map(|(id, _)| name_of[id].clone())
            .collect();
        let auto = BottomUpAutomaton {
            alphabet: auto.alphabet.clone(),
            states,
            finals,
            rules,
        };
        Ok(Dfta {
            auto,
            deterministic: true,
            complete: true,
        })
    }

    /// States of a minimal automaton whose residual is non-empty: the
    /// complement of the dead class.
    pub fn live_states(&self) -> BTreeSet<State> {
        let auto = self.as_automaton();
        let reachable = auto.term_reachable_states();
        let mut useful: BTreeSet<State> = auto.finals.clone();
        loop {
            let mut grew = false;
            for r in &auto.rules {
                if useful.contains(&r.target)
                    && r.children.iter().all(|q| reachable.contains(q))
                {
                    for q in &r.children {
                        if reachable.contains(q) && useful.insert(q.clone()) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        reachable.intersection(&useful).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::example1;
    use crate::residuals_up::isomorphic;
    use crate::trees::enumerate_terms;

    #[test]
    fn minimize_example1_has_five_live_states() {
        let a = example1();
        let min = a.determinize().minimize().unwrap();
        assert!(min.is_deterministic() && min.is_complete());
        assert_eq!(min.live_states().len(), 5);
        // one dead class: f(b1,b1) and friends have the empty residual
        assert_eq!(min.states().len(), 6);
        for t in enumerate_terms(a.alphabet(), 3) {
            assert_eq!(a.accepts(&t).unwrap(), min.accepts(&t).unwrap(), "{t}");
        }
        assert!(min.as_automaton().equivalent(&a).unwrap());
    }

    #[test]
    fn minimize_is_idempotent_up_to_iso() {
        let a = example1();
        let min = a.determinize().minimize().unwrap();
        let min2 = min.minimize().unwrap();
        assert!(isomorphic(min.as_automaton(), min2.as_automaton()));
    }

    #[test]
    fn minimize_completes_incomplete_deterministic_input() {
        // one rule per left-hand side but nowhere near complete
        let l = crate::corpus::lprime();
        let d = crate::bu::Dfta::from_automaton(l.clone());
        assert!(d.is_deterministic() && !d.is_complete());
        // a stuck run reports no state
        let dead = crate::trees::parse_term(l.alphabet(), "f(f(a,b),c)").unwrap();
        assert_eq!(d.run(&dead).unwrap(), None);
        let min = d.minimize().unwrap();
        assert!(min.is_complete());
        assert!(min.as_automaton().equivalent(&l).unwrap());
        assert_eq!(min.live_states().len(), 4);
        assert_eq!(min.states().len(), 5);
    }

    #[test]
    fn minimize_rejects_nondeterministic_input() {
        let d = crate::bu::Dfta::from_automaton(example1());
        assert!(!d.is_deterministic());
        assert!(d.minimize().is_err());
    }
}
