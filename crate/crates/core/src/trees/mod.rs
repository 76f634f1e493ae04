//! Ranked alphabets, ground terms and one-hole contexts.
//!
//! Terms are plain trees; the governing alphabet is kept separate and
//! enforced at validation points ([`RankedAlphabet::check_term`] and the
//! automaton operations). Contexts are terms with exactly one occurrence
//! of a reserved hole leaf, written `<>` in the text syntax.

mod parse;

pub use parse::{parse_context, parse_term};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// Reserved text token for the context hole. Never a member of an
/// alphabet built through [`RankedAlphabet::new`].
pub const HOLE_TOKEN: &str = "<>";

fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite set of symbols, each with a fixed arity. Contains at least
/// one constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedAlphabet {
    arities: BTreeMap<String, usize>,
}

impl RankedAlphabet {
    /// Builds an alphabet from `(name, arity)` pairs.
    ///
    /// Rejects duplicate or non-identifier names, the reserved hole
    /// token, and symbol sets without a constant.
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut arities = BTreeMap::new();
        for (name, arity) in symbols {
            let name = name.into();
            if name == HOLE_TOKEN {
                return Err(Error::InvalidAlphabet(format!(
                    "`{HOLE_TOKEN}` is reserved for the context hole"
                )));
            }
            if !is_ident(&name) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol name `{name}` is not an identifier"
                )));
            }
            if arities.insert(name.clone(), arity).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{name}`")));
            }
        }
        if !arities.values().any(|&a| a == 0) {
            return Err(Error::InvalidAlphabet(
                "alphabet must contain at least one constant".into(),
            ));
        }
        Ok(RankedAlphabet { arities })
    }

    /// The arity of `name`, if declared.
    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arities.contains_key(name)
    }

    /// Symbols in name order.
    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    /// The same alphabet extended with the hole as an extra constant.
    ///
    /// Terms over the extended alphabet with exactly one hole leaf are
    /// context skeletons; the residual machinery runs automata over
    /// this alphabet to recognize context languages.
    pub fn with_hole(&self) -> RankedAlphabet {
        let mut arities = self.arities.clone();
        arities.insert(HOLE_TOKEN.to_string(), 0);
        RankedAlphabet { arities }
    }

    /// Whether this alphabet already carries the hole constant.
    pub fn has_hole(&self) -> bool {
        self.arities.contains_key(HOLE_TOKEN)
    }

    /// Checks that every node of `t` uses a declared symbol with the
    /// right number of children.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        match self.arity(t.root()) {
            None => Err(Error::UnknownSymbol(t.root().to_string())),
            Some(a) if a != t.children().len() => Err(Error::ArityMismatch {
                symbol: t.root().to_string(),
                expected: a,
                found: t.children().len(),
            }),
            Some(_) => t.children().iter().try_for_each(|c| self.check_term(c)),
        }
    }

    /// Checks a context skeleton against this alphabet (the hole is
    /// always admitted).
    pub fn check_context(&self, c: &Context) -> Result<()> {
        fn go(alphabet: &RankedAlphabet, n: &CtxNode) -> Result<()> {
            match n {
                CtxNode::Hole => Ok(()),
                CtxNode::Node { root, children } => match alphabet.arity(root) {
                    None => Err(Error::UnknownSymbol(root.clone())),
                    Some(a) if a != children.len() => Err(Error::ArityMismatch {
                        symbol: root.clone(),
                        expected: a,
                        found: children.len(),
                    }),
                    Some(_) => children.iter().try_for_each(|c| go(alphabet, c)),
                },
            }
        }
        go(self, &c.skeleton)
    }
}

/// A ground term: a symbol applied to as many subterms as its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    root: String,
    children: Vec<Term>,
}

impl Term {
    pub fn new(root: impl Into<String>, children: Vec<Term>) -> Self {
        Term {
            root: root.into(),
            children,
        }
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::new(name, Vec::new())
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn children(&self) -> &[Term] {
        &self.children
    }

    /// Height with constants at height 1.
    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(Term::height)
            .max()
            .unwrap_or(0)
    }

    /// Lengths of all root-to-leaf paths, counted in edges: a constant
    /// alone has the single path length 0.
    pub fn path_lengths(&self) -> std::collections::BTreeSet<usize> {
        if self.children.is_empty() {
            return std::iter::once(0).collect();
        }
        self.children
            .iter()
            .flat_map(|c| c.path_lengths().into_iter().map(|l| l + 1))
            .collect()
    }

    pub fn has_path_of_length(&self, n: usize) -> bool {
        self.path_lengths().contains(&n)
    }

    fn push_preorder<'a>(&'a self, out: &mut Vec<(&'a str, usize)>) {
        out.push((&self.root, self.children.len()));
        for c in &self.children {
            c.push_preorder(out);
        }
    }

    /// Preorder `(symbol, arity)` sequence; determines the term uniquely.
    pub fn preorder(&self) -> Vec<(&str, usize)> {
        let mut out = Vec::new();
        self.push_preorder(&mut out);
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
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

/// Enumeration order: height first, then the preorder symbol sequence.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.preorder().cmp(&other.preorder()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One node of a context skeleton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CtxNode {
    Hole,
    Node { root: String, children: Vec<CtxNode> },
}

impl CtxNode {
    fn hole_count(&self) -> usize {
        match self {
            CtxNode::Hole => 1,
            CtxNode::Node { children, .. } => children.iter().map(CtxNode::hole_count).sum(),
        }
    }

    fn height(&self) -> usize {
        match self {
            CtxNode::Hole => 1,
            CtxNode::Node { children, .. } => {
                1 + children.iter().map(CtxNode::height).max().unwrap_or(0)
            }
        }
    }

    fn plug(&self, t: &Term) -> Term {
        match self {
            CtxNode::Hole => t.clone(),
            CtxNode::Node { root, children } => Term::new(
                root.clone(),
                children.iter().map(|c| c.plug(t)).collect(),
            ),
        }
    }

    fn substitute_hole(&self, inner: &CtxNode) -> CtxNode {
        match self {
            CtxNode::Hole => inner.clone(),
            CtxNode::Node { root, children } => CtxNode::Node {
                root: root.clone(),
                children: children.iter().map(|c| c.substitute_hole(inner)).collect(),
            },
        }
    }

    fn push_preorder<'a>(&'a self, out: &mut Vec<(Option<&'a str>, usize)>) {
        match self {
            // `None` sorts before `Some`, so the hole precedes every symbol.
            CtxNode::Hole => out.push((None, 0)),
            CtxNode::Node { root, children } => {
                out.push((Some(root), children.len()));
                for c in children {
                    c.push_preorder(out);
                }
            }
        }
    }

    fn from_term(t: &Term) -> CtxNode {
        if t.root() == HOLE_TOKEN && t.children().is_empty() {
            CtxNode::Hole
        } else {
            CtxNode::Node {
                root: t.root().to_string(),
                children: t.children().iter().map(CtxNode::from_term).collect(),
            }
        }
    }
}

/// A term over the alphabet extended with the hole, containing exactly
/// one hole occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    skeleton: CtxNode,
}

/// One step on the path from the root of a context to its hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleStep {
    /// Symbol at this node.
    pub symbol: String,
    /// Child index the hole lies under.
    pub hole_index: usize,
    /// Ground siblings, one per child position except `hole_index`,
    /// in position order.
    pub siblings: Vec<(usize, Term)>,
}

impl Context {
    /// The identity context, a bare hole.
    pub fn hole() -> Self {
        Context {
            skeleton: CtxNode::Hole,
        }
    }

    /// Wraps ground children and one context child under `root`;
    /// `hole_index` selects which child is the context.
    pub fn node(
        root: impl Into<String>,
        mut ground: Vec<Term>,
        hole_index: usize,
        inner: Context,
    ) -> Result<Self> {
        let root = root.into();
        if hole_index > ground.len() {
            return Err(Error::InvalidContext(format!(
                "hole index {hole_index} out of range for `{root}`"
            )));
        }
        let mut children: Vec<CtxNode> = Vec::with_capacity(ground.len() + 1);
        for t in ground.drain(..hole_index) {
            children.push(CtxNode::from_term(&t));
        }
        children.push(inner.skeleton);
        for t in ground {
            children.push(CtxNode::from_term(&t));
        }
        Ok(Context {
            skeleton: CtxNode::Node { root, children },
        })
    }

    /// Builds a context from a term over `alphabet.with_hole()` that
    /// contains exactly one hole leaf.
    pub fn from_hole_term(t: &Term) -> Result<Self> {
        let skeleton = CtxNode::from_term(t);
        match skeleton.hole_count() {
            1 => Ok(Context { skeleton }),
            n => Err(Error::InvalidContext(format!(
                "expected exactly one `{HOLE_TOKEN}`, found {n}"
            ))),
        }
    }

    /// The skeleton as a term with the hole as an ordinary constant.
    pub fn to_hole_term(&self) -> Term {
        fn go(n: &CtxNode) -> Term {
            match n {
                CtxNode::Hole => Term::constant(HOLE_TOKEN),
                CtxNode::Node { root, children } => {
                    Term::new(root.clone(), children.iter().map(go).collect())
                }
            }
        }
        go(&self.skeleton)
    }

    pub fn is_hole(&self) -> bool {
        matches!(self.skeleton, CtxNode::Hole)
    }

    pub fn height(&self) -> usize {
        self.skeleton.height()
    }

    /// Number of edges from the root to the hole.
    pub fn hole_depth(&self) -> usize {
        fn go(n: &CtxNode) -> Option<usize> {
            match n {
                CtxNode::Hole => Some(0),
                CtxNode::Node { children, .. } => {
                    children.iter().find_map(go).map(|d| d + 1)
                }
            }
        }
        go(&self.skeleton).expect("context has a hole")
    }

    /// Replaces the hole by `t`.
    pub fn plug(&self, t: &Term) -> Term {
        self.skeleton.plug(t)
    }

    /// Plugs `inner` into this context's hole: for every term `t`,
    /// `outer.compose(inner).plug(t) == outer.plug(&inner.plug(t))`.
    pub fn compose(&self, inner: &Context) -> Context {
        Context {
            skeleton: self.skeleton.substitute_hole(&inner.skeleton),
        }
    }

    /// The root-to-hole path as a sequence of [`HoleStep`]s; empty for
    /// the bare hole.
    pub fn hole_path(&self) -> Vec<HoleStep> {
        fn ground(n: &CtxNode) -> Term {
            match n {
                CtxNode::Hole => unreachable!("sibling subtrees are ground"),
                CtxNode::Node { root, children } => {
                    Term::new(root.clone(), children.iter().map(ground).collect())
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = &self.skeleton;
        loop {
            match cur {
                CtxNode::Hole => return steps,
                CtxNode::Node { root, children } => {
                    let hole_index = children
                        .iter()
                        .position(|c| c.hole_count() == 1)
                        .expect("context has a hole");
                    let siblings = children
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != hole_index)
                        .map(|(i, c)| (i, ground(c)))
                        .collect();
                    steps.push(HoleStep {
                        symbol: root.clone(),
                        hole_index,
                        siblings,
                    });
                    cur = &children[hole_index];
                }
            }
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(n: &CtxNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                CtxNode::Hole => write!(f, "{HOLE_TOKEN}"),
                CtxNode::Node { root, children } => {
                    write!(f, "{root}")?;
                    if !children.is_empty() {
                        write!(f, "(")?;
                        for (i, c) in children.iter().enumerate() {
                            if i > 0 {
                                write!(f, ",")?;
                            }
                            go(c, f)?;
                        }
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(&self.skeleton, f)
    }
}

impl Ord for Context {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height().cmp(&other.height()).then_with(|| {
            let mut a = Vec::new();
            let mut b = Vec::new();
            self.skeleton.push_preorder(&mut a);
            other.skeleton.push_preorder(&mut b);
            a.cmp(&b)
        })
    }
}

impl PartialOrd for Context {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All terms of height at most `max_height`, without duplicates, ordered
/// by height and then by preorder symbol sequence.
pub fn enumerate_terms(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Term> {
    let mut by_height: Vec<Vec<Term>> = Vec::new();
    let mut all: Vec<Term> = Vec::new();
    for h in 1..=max_height {
        let mut layer: Vec<Term> = Vec::new();
        if h == 1 {
            for (name, arity) in alphabet.symbols() {
                if arity == 0 {
                    layer.push(Term::constant(name));
                }
            }
        } else {
            for (name, arity) in alphabet.symbols() {
                if arity == 0 {
                    continue;
                }
                // Children of height <= h-1, at least one of exactly h-1.
                let pool: Vec<&Term> = all.iter().collect();
                let mut tuple: Vec<&Term> = Vec::with_capacity(arity);
                fill_tuples(&pool, arity, h - 1, &mut tuple, &mut |tuple| {
                    layer.push(Term::new(
                        name,
                        tuple.iter().map(|t| (*t).clone()).collect(),
                    ));
                });
            }
        }
        layer.sort();
        layer.dedup();
        by_height.push(layer);
        all = by_height.iter().flatten().cloned().collect();
    }
    all
}

/// Enumerates `arity`-tuples over `pool` whose maximum height is exactly
/// `target`; `pool` must only contain terms of height <= `target`.
fn fill_tuples<'a>(
    pool: &[&'a Term],
    arity: usize,
    target: usize,
    tuple: &mut Vec<&'a Term>,
    emit: &mut impl FnMut(&[&'a Term]),
) {
    if tuple.len() == arity {
        if tuple.iter().any(|t| t.height() == target) {
            emit(tuple);
        }
        return;
    }
    for t in pool {
        tuple.push(t);
        fill_tuples(pool, arity, target, tuple, emit);
        tuple.pop();
    }
}

/// All contexts of height at most `max_height`, ordered like
/// [`enumerate_terms`] with the hole sorting before every symbol.
pub fn enumerate_contexts(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Context> {
    let mut out: Vec<Context> = Vec::new();
    if max_height == 0 {
        return out;
    }
    out.push(Context::hole());
    let mut prev_ctx: Vec<Context> = out.clone();
    for h in 2..=max_height {
        let terms = enumerate_terms(alphabet, h - 1);
        let mut layer: Vec<Context> = Vec::new();
        for (name, arity) in alphabet.symbols() {
            if arity == 0 {
                continue;
            }
            for hole_index in 0..arity {
                for inner in &prev_ctx {
                    let mut ground_tuple: Vec<&Term> = Vec::with_capacity(arity - 1);
                    emit_ground(
                        &terms,
                        arity - 1,
                        &mut ground_tuple,
                        &mut |ground: &[&Term]| {
                            let c = Context::node(
                                name,
                                ground.iter().map(|t| (*t).clone()).collect(),
                                hole_index,
                                inner.clone(),
                            )
                            .expect("hole index in range");
                            if c.height() <= h {
                                layer.push(c);
                            }
                        },
                    );
                }
            }
        }
        layer.sort();
        layer.dedup();
        let mut next = out.clone();
        next.extend(layer);
        next.sort();
        next.dedup();
        prev_ctx = next.clone();
        out = next;
    }
    out
}

fn emit_ground<'a>(
    pool: &'a [Term],
    count: usize,
    tuple: &mut Vec<&'a Term>,
    emit: &mut impl FnMut(&[&'a Term]),
) {
    if tuple.len() == count {
        emit(tuple);
        return;
    }
    for t in pool {
        tuple.push(t);
        emit_ground(pool, count, tuple, emit);
        tuple.pop();
    }
}
