//! Cross-module invariants: randomized preservation checks for the
//! automata algebra, the residual/state-language identities on corpus
//! and random automata, the inclusion-relation congruence property, and
//! the canonical constructions' defining equalities.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use resta::bu::{Dfta, ProductMode, Rule, State};
use resta::corpus::{corpus, example1, gen_an, gen_aprime_n};
use resta::oracle::{brute_residual_up, BoundedLanguage};
use resta::residuals_up::{
    canonical_up_rfta, context_language, isomorphic, ResidualLatticeUp,
};
use resta::td::to_top_down;
use resta::trees::{enumerate_contexts, enumerate_terms, Context, Term};

#[test]
fn determinize_and_trim_preserve_acceptance_on_random_automata() {
    let mut rng = StdRng::seed_from_u64(11);
    let terms = enumerate_terms(&common::small_alphabet(), 4);
    for _ in 0..30 {
        let a = common::random_automaton(&mut rng);
        let trimmed = a.trim();
        let det = a.determinize();
        for t in &terms {
            let expected = a.accepts(t).unwrap();
            assert_eq!(trimmed.accepts(t).unwrap(), expected, "trim changed {t}");
            assert_eq!(det.accepts(t).unwrap(), expected, "determinize changed {t}");
        }
    }
}

#[test]
fn runs_of_trimmed_complete_dfta_are_singletons() {
    let mut rng = StdRng::seed_from_u64(12);
    let terms = enumerate_terms(&common::small_alphabet(), 3);
    for _ in 0..20 {
        let d = common::random_dfta(&mut rng);
        for t in &terms {
            let states = d.as_automaton().reachable_states(t).unwrap();
            assert_eq!(states.len(), 1, "{t} reached {states:?}");
            assert_eq!(d.run(t).unwrap().as_ref(), states.iter().next());
        }
    }
}

#[test]
fn de_morgan_on_random_dftas() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..12 {
        let d1 = common::random_dfta(&mut rng);
        let d2 = common::random_dfta(&mut rng);
        let lhs = Dfta::from_automaton(
            d1.as_automaton()
                .product(d2.as_automaton(), ProductMode::And)
                .unwrap(),
        );
        let lhs = lhs.complement().unwrap();
        let rhs = d1
            .complement()
            .unwrap()
            .as_automaton()
            .product(d2.complement().unwrap().as_automaton(), ProductMode::Or)
            .unwrap();
        assert!(lhs.as_automaton().equivalent(&rhs).unwrap());
    }
}

#[test]
fn minimize_is_idempotent_on_random_automata() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..12 {
        let a = common::random_automaton(&mut rng);
        let min = a.determinize().minimize().unwrap();
        let again = min.minimize().unwrap();
        assert!(isomorphic(min.as_automaton(), again.as_automaton()));
        assert!(min.as_automaton().equivalent(&a).unwrap());
    }
}

/// Residuals are unions of state languages: for every term, the bounded
/// residual of the whole language equals the union of the bounded
/// context languages of the states the term reaches.
#[test]
fn residuals_are_unions_of_state_languages_on_corpus() {
    for entry in corpus() {
        let a = entry.automaton.to_bottom_up().trim();
        let contexts = enumerate_contexts(a.alphabet(), 3);
        // which states accept each context, computed once
        let acceptors: Vec<BTreeSet<State>> = {
            let state_langs: Vec<(State, resta::residuals_up::MarkedContextAutomaton)> = a
                .states()
                .iter()
                .map(|q| (q.clone(), context_language(&a, q).unwrap()))
                .collect();
            contexts
                .iter()
                .map(|c| {
                    state_langs
                        .iter()
                        .filter(|(_, m)| m.accepts_context(c).unwrap())
                        .map(|(q, _)| q.clone())
                        .collect()
                })
                .collect()
        };
        for t in enumerate_terms(a.alphabet(), 3) {
            let reached = a.reachable_states(&t).unwrap();
            for (c, acceptors) in contexts.iter().zip(&acceptors) {
                let in_residual = a.accepts(&c.plug(&t)).unwrap();
                let in_union = acceptors.iter().any(|q| reached.contains(q));
                assert_eq!(in_residual, in_union, "{}: t={t} c={c}", entry.name);
            }
        }
    }
}

/// The inclusion relation is a precongruence: it is preserved by every
/// depth-one frame over live states.
#[test]
fn context_inclusion_is_a_precongruence_on_corpus() {
    for entry in corpus() {
        let l = entry.automaton.to_bottom_up();
        let lattice = ResidualLatticeUp::build(&l);
        let base = lattice.base();
        let relation = resta::residuals_up::context_inclusion_relation(base);
        let live: Vec<State> = base.live_states().into_iter().collect();
        for (p, q) in &relation {
            for other in &live {
                let frames = [
                    (vec![p.clone(), other.clone()], vec![q.clone(), other.clone()]),
                    (vec![other.clone(), p.clone()], vec![other.clone(), q.clone()]),
                ];
                for (with_p, with_q) in frames {
                    let tp = base.delta("f", &with_p);
                    let tq = base.delta("f", &with_q);
                    if let (Some(tp), Some(tq)) = (tp, tq) {
                        assert!(
                            relation.contains(&(tp.clone(), tq.clone())),
                            "{}: frame broke {p} <= {q}",
                            entry.name
                        );
                    }
                }
            }
        }
    }
}

/// In the canonical automaton, the bounded residual of every small term
/// equals the union of the prime residuals of the states it reaches.
#[test]
fn canonical_defining_equality_holds_on_small_terms() {
    for entry in corpus() {
        let l = entry.automaton.to_bottom_up();
        let canonical = canonical_up_rfta(&l);
        let contexts = enumerate_contexts(l.alphabet(), 3);
        let acceptors: Vec<BTreeSet<State>> = {
            let node_langs: Vec<(State, resta::residuals_up::MarkedContextAutomaton)> =
                canonical
                    .states()
                    .iter()
                    .map(|q| (q.clone(), context_language(&canonical, q).unwrap()))
                    .collect();
            contexts
                .iter()
                .map(|c| {
                    node_langs
                        .iter()
                        .filter(|(_, m)| m.accepts_context(c).unwrap())
                        .map(|(q, _)| q.clone())
                        .collect()
                })
                .collect()
        };
        for t in enumerate_terms(l.alphabet(), 3) {
            let reached = canonical.reachable_states(&t).unwrap();
            for (c, acceptors) in contexts.iter().zip(&acceptors) {
                let in_union = acceptors.iter().any(|q| reached.contains(q));
                assert_eq!(
                    l.accepts(&c.plug(&t)).unwrap(),
                    in_union,
                    "{}: t={t} c={c}",
                    entry.name
                );
            }
        }
    }
}

/// Strict residual inclusion between primes transfers to strict
/// inclusion of the canonical automaton's state context languages.
#[test]
fn canonical_preserves_strict_inclusions() {
    for entry in corpus() {
        let l = entry.automaton.to_bottom_up();
        let lattice = ResidualLatticeUp::build(&l);
        let canonical = canonical_up_rfta(&l);
        let primes: Vec<usize> = lattice.primes().map(|(i, _)| i).collect();
        // canonical states are named p0, p1, ... in prime order
        for (ki, &i) in primes.iter().enumerate() {
            for (kj, &j) in primes.iter().enumerate() {
                if i == j || !lattice.leq(i, j) {
                    continue;
                }
                let ci = context_language(&canonical, &State::new(format!("p{ki}"))).unwrap();
                let cj = context_language(&canonical, &State::new(format!("p{kj}"))).unwrap();
                assert!(
                    ci.included_in(&cj).unwrap() && !cj.included_in(&ci).unwrap(),
                    "{}: prime inclusion not preserved",
                    entry.name
                );
            }
        }
    }
}

/// Every residual automaton in the corpus has at least as many states
/// as the canonical one, whose state count is the number of primes.
#[test]
fn canonical_is_minimal_on_corpus_rftas() {
    for n in 1..=3 {
        let an = gen_an(n).unwrap();
        let lattice = ResidualLatticeUp::build(&an);
        let canonical = canonical_up_rfta(&an);
        assert_eq!(canonical.states().len(), lattice.prime_count());
        assert!(an.states().len() >= canonical.states().len());
    }
    let e1 = example1();
    let lattice = ResidualLatticeUp::build(&e1);
    let canonical = canonical_up_rfta(&e1);
    assert_eq!(canonical.states().len(), lattice.prime_count());
}

/// Adding any absent rule to the canonical automaton either changes the
/// language or breaks some state's residual equality.
#[test]
fn canonical_rules_are_maximal() {
    for l in [example1(), gen_an(2).unwrap()] {
        let canonical = canonical_up_rfta(&l);
        let states: Vec<State> = canonical.states().iter().cloned().collect();
        let mut absent: Vec<Rule> = Vec::new();
        for (symbol, arity) in l.alphabet().symbols() {
            let mut tuples: Vec<Vec<State>> = vec![vec![]];
            for _ in 0..arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        states.iter().map(move |q| {
                            let mut t = t.clone();
                            t.push(q.clone());
                            t
                        })
                    })
                    .collect();
            }
            for tuple in tuples {
                for target in &states {
                    let rule = Rule::new(symbol, tuple.clone(), target.clone());
                    if !canonical.rules().contains(&rule) {
                        absent.push(rule);
                    }
                }
            }
        }
        let node_langs: Vec<resta::residuals_up::MarkedContextAutomaton> = states
            .iter()
            .map(|q| context_language(&canonical, q).unwrap())
            .collect();
        for rule in absent {
            let extended = resta::bu::BottomUpAutomaton::new(
                l.alphabet().clone(),
                canonical.states().clone(),
                canonical.finals().clone(),
                canonical
                    .rules()
                    .iter()
                    .cloned()
                    .chain(std::iter::once(rule.clone())),
            )
            .unwrap();
            let same_language = extended.equivalent(&l).unwrap();
            let states_intact = states.iter().zip(&node_langs).all(|(q, old)| {
                context_language(&extended, q)
                    .unwrap()
                    .equivalent(old)
                    .unwrap()
            });
            assert!(
                !(same_language && states_intact),
                "adding {rule} changed nothing"
            );
        }
    }
}

/// Appendix-style check in the top-down direction: every prime residual
/// of a residual automaton's language is some state language.
#[test]
fn primes_appear_as_state_languages_of_down_rftas() {
    use resta::residuals_down::TdResidualCatalog;
    for n in 1..=2 {
        let a = gen_aprime_n(n).unwrap();
        let language = a.to_bottom_up();
        let catalog = TdResidualCatalog::build(&language);
        for (i, _) in catalog.primes() {
            let residual_lang = catalog.language_automaton(i);
            let matched = a.states().iter().any(|q| {
                a.state_language(q)
                    .unwrap()
                    .equivalent(&residual_lang)
                    .unwrap()
            });
            assert!(matched, "n={n}: prime residual {i} not a state language");
        }
    }
}

/// The canonical top-down automaton's state languages are exactly their
/// defining residuals.
#[test]
fn canonical_down_state_languages_equal_residuals() {
    use resta::residuals_down::{canonical_down_rfta, TdResidualCatalog};
    for n in 1..=3 {
        let l = gen_an(n).unwrap();
        let catalog = TdResidualCatalog::build(&l);
        let canonical = canonical_down_rfta(&l);
        let primes: Vec<usize> = catalog.primes().map(|(i, _)| i).collect();
        for (k, &i) in primes.iter().enumerate() {
            let q = State::new(format!("r{k}"));
            let lq = canonical.state_language(&q).unwrap();
            assert!(
                lq.equivalent(&catalog.language_automaton(i)).unwrap(),
                "n={n} state r{k}"
            );
        }
    }
}

/// Every context's residual is present in the catalog, and the
/// catalog's set-level view agrees with brute-force enumeration.
#[test]
fn catalog_covers_all_small_contexts() {
    use resta::residuals_down::TdResidualCatalog;
    for entry in corpus() {
        let l = entry.automaton.to_bottom_up();
        let catalog = TdResidualCatalog::build(&l);
        let base = catalog.base();
        let terms = enumerate_terms(l.alphabet(), 3);
        // minimal-automaton value of each term, computed once
        let values: Vec<State> = terms
            .iter()
            .map(|t| base.run(t).unwrap().expect("complete"))
            .collect();
        for c in enumerate_contexts(l.alphabet(), 3) {
            let idx = catalog.residual_of_context(&c).unwrap();
            let set = catalog.residuals()[idx].states();
            for (t, value) in terms.iter().zip(&values) {
                assert_eq!(
                    set.contains(value),
                    l.accepts(&c.plug(t)).unwrap(),
                    "{}: c={c} t={t}",
                    entry.name
                );
            }
        }
    }
}

/// Streaming and tree-walking acceptance agree for both directions.
#[test]
fn streaming_acceptance_agrees_everywhere() {
    let up = example1();
    let down = gen_aprime_n(2).unwrap();
    for t in enumerate_terms(up.alphabet(), 3) {
        let tokens: Vec<_> = t
            .preorder()
            .iter()
            .map(|(s, n)| Ok((s.to_string(), *n)))
            .collect();
        assert_eq!(up.accepts_stream(tokens).unwrap(), up.accepts(&t).unwrap());
    }
    for t in enumerate_terms(down.alphabet(), 4) {
        let tokens: Vec<_> = t
            .preorder()
            .iter()
            .map(|(s, n)| Ok((s.to_string(), *n)))
            .collect();
        assert_eq!(
            down.accepts_stream(tokens).unwrap(),
            down.accepts(&t).unwrap()
        );
    }
}

#[test]
fn top_down_and_reversal_agree_on_corpus() {
    for entry in corpus() {
        let l = entry.automaton.to_bottom_up();
        let td = to_top_down(&l);
        for t in enumerate_terms(l.alphabet(), 4) {
            assert_eq!(
                td.accepts(&t).unwrap(),
                l.accepts(&t).unwrap(),
                "{}: {t}",
                entry.name
            );
        }
    }
}

// Structural properties of terms and contexts under randomized
// generation.

fn arb_term(alphabet_depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::constant("a")), Just(Term::constant("b"))];
    leaf.prop_recursive(alphabet_depth, 64, 2, |inner| {
        (inner.clone(), inner)
            .prop_map(|(l, r)| Term::new("f", vec![l, r]))
    })
}

fn arb_context() -> impl Strategy<Value = Context> {
    // A context is a spine of frames above the hole.
    let frame = (any::<bool>(), arb_term(2));
    proptest::collection::vec(frame, 0..4).prop_map(|frames| {
        let mut c = Context::hole();
        for (hole_left, ground) in frames {
            let index = usize::from(!hole_left);
            c = Context::node("f", vec![ground], index, c).unwrap();
        }
        c
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(t in arb_term(3)) {
        let alphabet = common::small_alphabet();
        let back = resta::trees::parse_term(&alphabet, &t.to_string()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn context_print_parse_round_trip(c in arb_context()) {
        let alphabet = common::small_alphabet();
        let back = resta::trees::parse_context(&alphabet, &c.to_string()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn compose_is_associative(c1 in arb_context(), c2 in arb_context(), c3 in arb_context()) {
        prop_assert_eq!(
            c1.compose(&c2).compose(&c3),
            c1.compose(&c2.compose(&c3))
        );
    }

    #[test]
    fn plug_after_compose_is_nested_plug(c1 in arb_context(), c2 in arb_context(), t in arb_term(2)) {
        prop_assert_eq!(c1.compose(&c2).plug(&t), c1.plug(&c2.plug(&t)));
    }

    #[test]
    fn union_and_product_agree_with_membership(seed in 0u64..500, t in arb_term(2)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let x = common::random_automaton(&mut rng);
        let y = common::random_automaton(&mut rng);
        let and = x.product(&y, ProductMode::And).unwrap();
        let or = x.product(&y, ProductMode::Or).unwrap();
        let in_x = x.accepts(&t).unwrap();
        let in_y = y.accepts(&t).unwrap();
        prop_assert_eq!(and.accepts(&t).unwrap(), in_x && in_y);
        prop_assert_eq!(or.accepts(&t).unwrap(), in_x || in_y);
    }
}

/// The expressiveness hierarchy is respected on random languages:
/// path-closed implies homogeneous implies residual-recognizable, and
/// a recognizable language's canonical automaton is itself residual.
#[test]
fn hierarchy_implications_on_random_languages() {
    use resta::residuals_down::{
        canonical_down_rfta, is_down_rfta, is_down_rfta_language, is_homogeneous,
        is_path_closed,
    };
    let mut rng = StdRng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 25 {
        let a = common::random_automaton(&mut rng).trim();
        if a.states().is_empty() {
            continue;
        }
        // keep the minimal base small so the catalog closure stays
        // desk-sized
        let base = a.determinize().minimize().unwrap();
        if base.states().len() > 8 {
            continue;
        }
        checked += 1;
        let pc = is_path_closed(&a);
        let hom = is_homogeneous(&a);
        let rfta = is_down_rfta_language(&a);
        if pc {
            assert!(hom, "path-closed language not homogeneous");
        }
        if hom {
            assert!(rfta, "homogeneous language not residual-recognizable");
        }
        if rfta {
            let canonical = canonical_down_rfta(&a);
            assert!(canonical.to_bottom_up().equivalent(&a).unwrap());
            assert!(is_down_rfta(&canonical));
        }
    }
}

/// Bounded residual sets of corpus nodes coincide with the brute-force
/// residuals of their representative terms.
#[test]
fn lattice_nodes_match_brute_residuals() {
    for entry in corpus() {
        let l = entry.automaton.to_bottom_up();
        let lattice = ResidualLatticeUp::build(&l);
        let lang = BoundedLanguage::from_automaton(&l, 7);
        for (i, node) in lattice.nodes().iter().enumerate() {
            let brute: BTreeSet<Context> =
                brute_residual_up(&lang, node.representative(), 3);
            let marked = lattice.node_context_language(i);
            for c in enumerate_contexts(l.alphabet(), 3) {
                assert_eq!(
                    brute.contains(&c),
                    marked.accepts_context(&c).unwrap(),
                    "{}: node {i} context {c}",
                    entry.name
                );
            }
        }
    }
}
