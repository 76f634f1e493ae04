//! Text and JSON reports for the residual machinery.

use resta::bu::BottomUpAutomaton;
use resta::oracle::{
    brute_homogeneous, brute_path_closed, brute_prime_down, brute_prime_up, BoundedLanguage,
};
use resta::residuals_down::{canonical_down_rfta, is_down_rfta_language, is_homogeneous, is_path_closed, TdResidualCatalog};
use resta::residuals_up::{canonical_up_rfta, ResidualLatticeUp};

use crate::json::Json;

pub fn residuals_up(language: &BottomUpAutomaton, as_json: bool) {
    let lattice = ResidualLatticeUp::build(language);
    if as_json {
        let nodes: Vec<Json> = lattice
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, node)| {
                let below: Vec<Json> = (0..lattice.nodes().len())
                    .filter(|&j| j != i && lattice.leq(j, i))
                    .map(Json::Num)
                    .collect();
                Json::Object(vec![
                    ("index", Json::Num(i)),
                    ("representative", Json::Str(node.representative().to_string())),
                    ("prime", Json::Bool(node.is_prime())),
                    ("accepts_hole", Json::Bool(node.is_final())),
                    ("strictly_contains", Json::Array(below)),
                ])
            })
            .collect();
        let value = Json::Object(vec![
            ("direction", Json::Str("up".into())),
            ("count", Json::Num(lattice.nodes().len())),
            ("has_empty_residual", Json::Bool(lattice.sink().is_some())),
            ("residuals", Json::Array(nodes)),
        ]);
        println!("{value}");
        return;
    }
    println!(
        "bottom-up residuals: {} non-empty{}",
        lattice.nodes().len(),
        if lattice.sink().is_some() {
            ", plus the empty residual"
        } else {
            ""
        }
    );
    for (i, node) in lattice.nodes().iter().enumerate() {
        let below: Vec<String> = (0..lattice.nodes().len())
            .filter(|&j| j != i && lattice.leq(j, i))
            .map(|j| j.to_string())
            .collect();
        println!(
            "residual {i}: representative={} prime={} accepts-hole={} strictly-contains=[{}]",
            node.representative(),
            if node.is_prime() { "yes" } else { "no" },
            if node.is_final() { "yes" } else { "no" },
            below.join(",")
        );
    }
}

pub fn residuals_down(language: &BottomUpAutomaton, as_json: bool) {
    let catalog = TdResidualCatalog::build(language);
    if as_json {
        let entries: Vec<Json> = catalog
            .residuals()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Json::Object(vec![
                    ("index", Json::Num(i)),
                    ("witness", Json::Str(r.witness().to_string())),
                    ("prime", Json::Bool(r.is_prime())),
                    ("subset_of_language", Json::Bool(r.is_initial())),
                    ("empty", Json::Bool(r.is_empty())),
                ])
            })
            .collect();
        let value = Json::Object(vec![
            ("direction", Json::Str("down".into())),
            ("count", Json::Num(catalog.len())),
            ("nonempty", Json::Num(catalog.nonempty_count())),
            ("residuals", Json::Array(entries)),
        ]);
        println!("{value}");
        return;
    }
    println!(
        "top-down residuals: {} ({} non-empty)",
        catalog.len(),
        catalog.nonempty_count()
    );
    for (i, r) in catalog.residuals().iter().enumerate() {
        println!(
            "residual {i}: witness={} prime={} subset-of-language={} empty={}",
            r.witness(),
            if r.is_prime() { "yes" } else { "no" },
            if r.is_initial() { "yes" } else { "no" },
            if r.is_empty() { "yes" } else { "no" },
        );
    }
}

pub fn primes_up(language: &BottomUpAutomaton, as_json: bool) {
    let lattice = ResidualLatticeUp::build(language);
    if as_json {
        let primes: Vec<Json> = lattice
            .primes()
            .map(|(i, node)| {
                Json::Object(vec![
                    ("index", Json::Num(i)),
                    ("representative", Json::Str(node.representative().to_string())),
                ])
            })
            .collect();
        let value = Json::Object(vec![
            ("direction", Json::Str("up".into())),
            ("prime_count", Json::Num(lattice.prime_count())),
            ("primes", Json::Array(primes)),
        ]);
        println!("{value}");
        return;
    }
    println!("prime bottom-up residuals: {}", lattice.prime_count());
    for (i, node) in lattice.primes() {
        println!("prime {i}: representative={}", node.representative());
    }
}

pub fn primes_down(language: &BottomUpAutomaton, as_json: bool) {
    let catalog = TdResidualCatalog::build(language);
    if as_json {
        let primes: Vec<Json> = catalog
            .primes()
            .map(|(i, r)| {
                Json::Object(vec![
                    ("index", Json::Num(i)),
                    ("witness", Json::Str(r.witness().to_string())),
                ])
            })
            .collect();
        let value = Json::Object(vec![
            ("direction", Json::Str("down".into())),
            ("prime_count", Json::Num(catalog.prime_count())),
            ("primes", Json::Array(primes)),
        ]);
        println!("{value}");
        return;
    }
    println!("prime top-down residuals: {}", catalog.prime_count());
    for (i, r) in catalog.primes() {
        println!("prime {i}: witness={}", r.witness());
    }
}

/// The classification record used by `classify` and the corpus
/// manifest checks.
pub struct Classification {
    pub path_closed: bool,
    pub homogeneous: bool,
    pub down_rfta: bool,
    pub prime_count_up: usize,
    pub prime_count_down: usize,
    pub canonical_up: (usize, usize),
    pub canonical_down: (usize, usize),
}

pub fn classify(language: &BottomUpAutomaton, as_json: bool) -> Classification {
    let lattice = ResidualLatticeUp::build(language);
    let catalog = TdResidualCatalog::build(language);
    let canonical_up = canonical_up_rfta(language);
    let canonical_down = canonical_down_rfta(language);
    let record = Classification {
        path_closed: is_path_closed(language),
        homogeneous: is_homogeneous(language),
        down_rfta: is_down_rfta_language(language),
        prime_count_up: lattice.prime_count(),
        prime_count_down: catalog.prime_count(),
        canonical_up: (canonical_up.states().len(), canonical_up.rules().len()),
        canonical_down: (canonical_down.states().len(), canonical_down.rules().len()),
    };
    if as_json {
        let sizes = |(states, rules): (usize, usize)| {
            Json::Object(vec![
                ("states", Json::Num(states)),
                ("rules", Json::Num(rules)),
            ])
        };
        let value = Json::Object(vec![
            ("regular", Json::Bool(true)),
            ("path_closed", Json::Bool(record.path_closed)),
            ("homogeneous", Json::Bool(record.homogeneous)),
            ("down_rfta", Json::Bool(record.down_rfta)),
            ("prime_count_up", Json::Num(record.prime_count_up)),
            ("prime_count_down", Json::Num(record.prime_count_down)),
            (
                "canonical_sizes",
                Json::Object(vec![
                    ("up", sizes(record.canonical_up)),
                    ("down", sizes(record.canonical_down)),
                ]),
            ),
        ]);
        println!("{value}");
    } else {
        println!("regular: true");
        println!("path_closed: {}", record.path_closed);
        println!("homogeneous: {}", record.homogeneous);
        println!("down_rfta: {}", record.down_rfta);
        println!("prime_count_up: {}", record.prime_count_up);
        println!("prime_count_down: {}", record.prime_count_down);
        println!(
            "canonical_up: states={} rules={}",
            record.canonical_up.0, record.canonical_up.1
        );
        println!(
            "canonical_down: states={} rules={}",
            record.canonical_down.0, record.canonical_down.1
        );
    }
    record
}

/// Cross-checks a classification against the enumeration oracle at
/// bounded heights, in the directions where the bounded check is
/// conclusive: a bounded counterexample refutes a reported closure
/// property, and the bounded enumeration can only under-count
/// residuals, never over-count them. `RESTA_MAX_HEIGHT` overrides the
/// default bounds (contexts 3, terms one lower for the quadratic
/// closure checks). Mismatches are dumped to stderr.
pub fn verify_classification(language: &BottomUpAutomaton, record: &Classification) -> bool {
    let max_height: usize = std::env::var("RESTA_MAX_HEIGHT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(3);
    let ctx_height = max_height;
    let term_height = max_height.saturating_sub(1).max(1);
    let lang = BoundedLanguage::from_automaton(language, max_height + 2);

    let mut agreed = true;
    if record.path_closed && !brute_path_closed(&lang, ctx_height, term_height) {
        eprintln!(
            "path_closed: reported true, oracle found a violation at heights \
             {ctx_height}/{term_height}"
        );
        agreed = false;
    }
    if record.homogeneous && !brute_homogeneous(&lang, ctx_height, term_height) {
        eprintln!(
            "homogeneous: reported true, oracle found a violation at heights \
             {ctx_height}/{term_height}"
        );
        agreed = false;
    }
    let up = brute_prime_up(&lang, term_height, ctx_height);
    let bounded_up = up.iter().filter(|r| !r.contexts.is_empty()).count();
    let exact_up = ResidualLatticeUp::build(language).nodes().len();
    if exact_up < bounded_up {
        eprintln!(
            "bottom-up residuals: reported {exact_up} non-empty, oracle distinguishes \
             {bounded_up}"
        );
        agreed = false;
    }
    let down = brute_prime_down(&lang, ctx_height, term_height);
    let bounded_down = down.iter().filter(|r| !r.terms.is_empty()).count();
    let exact_down = TdResidualCatalog::build(language).nonempty_count();
    if exact_down < bounded_down {
        eprintln!(
            "top-down residuals: reported {exact_down} non-empty, oracle distinguishes \
             {bounded_down}"
        );
        agreed = false;
    }
    agreed
}
