//! Brute-force reference implementations used as ground truth in
//! tests: bounded residuals, bounded primality, bounded equivalence and
//! the definitional closure properties, all by exhaustive enumeration
//! over terms and contexts up to a height bound.
//!
//! Nothing here consults the automata machinery beyond the membership
//! predicate handed in by the caller; the implementations work from the
//! definitions using only enumeration and plugging. Mismatches found by
//! the comparison helpers are dumped to standard error, one term or
//! context per line.

use std::collections::BTreeSet;

use crate::bu::BottomUpAutomaton;
use crate::trees::{enumerate_contexts, enumerate_terms, Context, RankedAlphabet, Term};

/// Default context height bound used by the suites.
pub const DEFAULT_CONTEXT_HEIGHT: usize = 3;
/// Default term height bound used by the suites.
pub const DEFAULT_TERM_HEIGHT: usize = 4;

/// A language given by a membership predicate, usable up to a height
/// bound.
pub struct BoundedLanguage {
    alphabet: RankedAlphabet,
    height_bound: usize,
    membership: Box<dyn Fn(&Term) -> bool>,
}

impl BoundedLanguage {
    pub fn from_fn(
        alphabet: RankedAlphabet,
        height_bound: usize,
        membership: impl Fn(&Term) -> bool + 'static,
    ) -> Self {
        BoundedLanguage {
            alphabet,
            height_bound,
            membership: Box::new(membership),
        }
    }

    /// Wraps an automaton's raw acceptance as the membership predicate.
    pub fn from_automaton(a: &BottomUpAutomaton, height_bound: usize) -> Self {
        let auto = a.clone();
        BoundedLanguage {
            alphabet: a.alphabet().clone(),
            height_bound,
            membership: Box::new(move |t| auto.accepts(t).unwrap_or(false)),
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn height_bound(&self) -> usize {
        self.height_bound
    }

    pub fn contains(&self, t: &Term) -> bool {
        (self.membership)(t)
    }
}

/// The bounded residual of a term: all contexts of height at most
/// `ctx_height` that complete `t` into the language.
pub fn brute_residual_up(
    lang: &BoundedLanguage,
    t: &Term,
    ctx_height: usize,
) -> BTreeSet<Context> {
    enumerate_contexts(&lang.alphabet, ctx_height)
        .into_iter()
        .filter(|c| lang.contains(&c.plug(t)))
        .collect()
}

/// The bounded residual of a context: all terms of height at most
/// `term_height` that the context completes into the language.
pub fn brute_residual_down(
    lang: &BoundedLanguage,
    c: &Context,
    term_height: usize,
) -> BTreeSet<Term> {
    enumerate_terms(&lang.alphabet, term_height)
        .into_iter()
        .filter(|t| lang.contains(&c.plug(t)))
        .collect()
}

/// Pointwise agreement of two languages on every term up to `height`.
/// Disagreements are dumped to standard error.
pub fn bounded_equivalent(a: &BoundedLanguage, b: &BoundedLanguage, height: usize) -> bool {
    assert_eq!(a.alphabet, b.alphabet, "languages over different alphabets");
    let mut agree = true;
    for t in enumerate_terms(&a.alphabet, height) {
        if a.contains(&t) != b.contains(&t) {
            eprintln!("{t}");
            agree = false;
        }
    }
    agree
}

/// One bounded bottom-up residual with its primality verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedUpResidual {
    /// A smallest term having this residual.
    pub representative: Term,
    /// The residual restricted to the context bound.
    pub contexts: BTreeSet<Context>,
    /// Not the union of the strictly contained bounded residuals.
    pub prime: bool,
}

/// Enumerates the bounded bottom-up residuals over terms up to
/// `term_height` and classifies each against the union of the strictly
/// smaller discovered residuals. A bounded verdict is a necessary
/// condition only: exact primes are bounded-prime, but a
/// bounded-composite residual may still be exactly prime.
pub fn brute_prime_up(
    lang: &BoundedLanguage,
    term_height: usize,
    ctx_height: usize,
) -> Vec<BoundedUpResidual> {
    let mut residuals: Vec<BoundedUpResidual> = Vec::new();
    for t in enumerate_terms(&lang.alphabet, term_height) {
        let contexts = brute_residual_up(lang, &t, ctx_height);
        if !residuals.iter().any(|r| r.contexts == contexts) {
            residuals.push(BoundedUpResidual {
                representative: t,
                contexts,
                prime: true,
            });
        }
    }
    let sets: Vec<BTreeSet<Context>> = residuals.iter().map(|r| r.contexts.clone()).collect();
    for r in &mut residuals {
        let union: BTreeSet<Context> = sets
            .iter()
            .filter(|s| **s != r.contexts && s.is_subset(&r.contexts))
            .flat_map(|s| s.iter().cloned())
            .collect();
        r.prime = union != r.contexts;
    }
    residuals
}

/// One bounded top-down residual with its primality verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedDownResidual {
    /// A smallest context having this residual.
    pub witness: Context,
    /// The residual restricted to the term bound.
    pub terms: BTreeSet<Term>,
    /// Not the union of the strictly contained bounded residuals.
    pub prime: bool,
}

/// Top-down counterpart of [`brute_prime_up`]: enumerates bounded
/// residuals over contexts up to `ctx_height`.
pub fn brute_prime_down(
    lang: &BoundedLanguage,
    ctx_height: usize,
    term_height: usize,
) -> Vec<BoundedDownResidual> {
    let mut residuals: Vec<BoundedDownResidual> = Vec::new();
    for c in enumerate_contexts(&lang.alphabet, ctx_height) {
        let terms = brute_residual_down(lang, &c, term_height);
        if !residuals.iter().any(|r| r.terms == terms) {
            residuals.push(BoundedDownResidual {
                witness: c,
                terms,
                prime: true,
            });
        }
    }
    let sets: Vec<BTreeSet<Term>> = residuals.iter().map(|r| r.terms.clone()).collect();
    for r in &mut residuals {
        let union: BTreeSet<Term> = sets
            .iter()
            .filter(|s| **s != r.terms && s.is_subset(&r.terms))
            .flat_map(|s| s.iter().cloned())
            .collect();
        r.prime = union != r.terms;
    }
    residuals
}

/// Definitional path-closure check for binary symbols: for every
/// context and every pair of in-language fillings `f(t1,t2)` and
/// `f(t1',t2')`, the mixed filling `f(t1,t2')` is also in the language.
/// Violations are dumped to standard error.
pub fn brute_path_closed(lang: &BoundedLanguage, ctx_height: usize, term_height: usize) -> bool {
    let terms = enumerate_terms(&lang.alphabet, term_height);
    let binaries: Vec<&str> = lang
        .alphabet
        .symbols()
        .filter(|(_, a)| *a == 2)
        .map(|(n, _)| n)
        .collect();
    for c in enumerate_contexts(&lang.alphabet, ctx_height) {
        for f in &binaries {
            for t1 in &terms {
                for t2 in &terms {
                    let whole = c.plug(&Term::new(*f, vec![t1.clone(), t2.clone()]));
                    if !lang.contains(&whole) {
                        continue;
                    }
                    for t1p in &terms {
                        for t2p in &terms {
                            let other =
                                c.plug(&Term::new(*f, vec![t1p.clone(), t2p.clone()]));
                            if !lang.contains(&other) {
                                continue;
                            }
                            let mixed =
                                c.plug(&Term::new(*f, vec![t1.clone(), t2p.clone()]));
                            if !lang.contains(&mixed) {
                                eprintln!("{mixed}");
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Definitional homogeneity check for binary symbols: whenever
/// `f(t1,t2)`, `f(t1,t2')` and `f(t1',t2)` all fill a context into the
/// language, so does `f(t1',t2')`. Violations are dumped to standard
/// error.
pub fn brute_homogeneous(lang: &BoundedLanguage, ctx_height: usize, term_height: usize) -> bool {
    let terms = enumerate_terms(&lang.alphabet, term_height);
    let binaries: Vec<&str> = lang
        .alphabet
        .symbols()
        .filter(|(_, a)| *a == 2)
        .map(|(n, _)| n)
        .collect();
    for c in enumerate_contexts(&lang.alphabet, ctx_height) {
        for f in &binaries {
            for t1 in &terms {
                for t2 in &terms {
                    if !lang.contains(&c.plug(&Term::new(*f, vec![t1.clone(), t2.clone()]))) {
                        continue;
                    }
                    for t1p in &terms {
                        if !lang
                            .contains(&c.plug(&Term::new(*f, vec![t1p.clone(), t2.clone()])))
                        {
                            continue;
                        }
                        for t2p in &terms {
                            if !lang.contains(
                                &c.plug(&Term::new(*f, vec![t1.clone(), t2p.clone()])),
                            ) {
                                continue;
                            }
                            let full = c.plug(&Term::new(*f, vec![t1p.clone(), t2p.clone()]));
                            if !lang.contains(&full) {
                                eprintln!("{full}");
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{example1, fab_fba, gen_an, lprime};
    use crate::trees::{parse_context, parse_term};

    fn example1_by_listing() -> BoundedLanguage {
        let members = ["f(a1,b1)", "f(a1,b2)", "f(a2,b2)"];
        BoundedLanguage::from_fn(
            example1().alphabet().clone(),
            4,
            move |t| members.contains(&t.to_string().as_str()),
        )
    }

    #[test]
    fn residual_up_of_a1() {
        let lang = example1_by_listing();
        let t = parse_term(lang.alphabet(), "a1").unwrap();
        let got: BTreeSet<String> = brute_residual_up(&lang, &t, 2)
            .into_iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(
            got,
            BTreeSet::from(["f(<>,b1)".to_string(), "f(<>,b2)".to_string()])
        );
    }

    #[test]
    fn residual_up_empty_for_foreign_subterm() {
        let lang = example1_by_listing();
        let t = parse_term(lang.alphabet(), "f(b1,b1)").unwrap();
        assert!(brute_residual_up(&lang, &t, 3).is_empty());
    }

    #[test]
    fn residual_down_of_lprime_context() {
        let l = lprime();
        let lang = BoundedLanguage::from_automaton(&l, 3);
        let c = parse_context(l.alphabet(), "f(a,<>)").unwrap();
        let got: BTreeSet<String> = brute_residual_down(&lang, &c, 1)
            .into_iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(got, BTreeSet::from(["b".to_string(), "c".to_string()]));

        let hole = Context::hole();
        let members = brute_residual_down(&lang, &hole, 2);
        assert_eq!(members.len(), 6);
    }

    #[test]
    fn bounded_equivalence_of_determinization() {
        let a2 = gen_an(2).unwrap();
        let lang_a = BoundedLanguage::from_automaton(&a2, 5);
        let det = a2.determinize();
        let lang_d = BoundedLanguage::from_automaton(det.as_automaton(), 5);
        assert!(bounded_equivalent(&lang_a, &lang_d, 5));
    }

    #[test]
    fn bounded_primality_on_example1() {
        let lang = example1_by_listing();
        let report = brute_prime_up(&lang, 2, 3);
        let nonempty: Vec<&BoundedUpResidual> =
            report.iter().filter(|r| !r.contexts.is_empty()).collect();
        assert_eq!(nonempty.len(), 5);
        assert!(nonempty.iter().all(|r| r.prime));
        // the empty residual is composite by the empty-union convention
        let empty = report.iter().find(|r| r.contexts.is_empty()).unwrap();
        assert!(!empty.prime);
    }

    #[test]
    fn bounded_down_primality_on_lprime() {
        let l = lprime();
        let lang = BoundedLanguage::from_automaton(&l, 4);
        let report = brute_prime_down(&lang, 2, 2);
        let nonempty: Vec<&BoundedDownResidual> =
            report.iter().filter(|r| !r.terms.is_empty()).collect();
        assert_eq!(nonempty.len(), 4);
        assert!(nonempty.iter().all(|r| r.prime));
    }

    #[test]
    fn definitional_closure_checks() {
        let fab = fab_fba();
        let lang = BoundedLanguage::from_automaton(&fab, 4);
        assert!(!brute_path_closed(&lang, 2, 2));
        assert!(brute_homogeneous(&lang, 2, 2));

        let a1 = gen_an(1).unwrap();
        let lang = BoundedLanguage::from_fn(a1.alphabet().clone(), 5, |t| {
            t.has_path_of_length(1)
        });
        assert!(!brute_homogeneous(&lang, 2, 2));
        assert!(!brute_path_closed(&lang, 2, 2));
    }
}
