//! Safety automata for one-sided sequences over `{1, m}` that avoid a finite
//! set of forbidden factors.
//!
//! The automaton is the failure-function (Aho–Corasick) prefix automaton of
//! the forbidden words with every state that completes a forbidden word
//! removed, then trimmed so that each remaining state has an infinite
//! continuation. Its infinite paths from the start state spell exactly the
//! admissible sequences. States are renumbered breadth-first from the start
//! (symbol `1` before `m`), which makes the representation canonical: two
//! automata are isomorphic iff their transition tables are equal.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::real::Real;
use crate::seq::{Word, M, ONE};

/// The two symbols in transition order.
pub const SYMBOLS: [u8; 2] = [ONE, M];

/// Largest word length accepted by [`count_words`].
pub const MAX_COUNT_LEN: usize = 64;

/// Iterations used by [`growth_rate`].
pub const POWER_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubshiftError {
    #[error("forbidden word {index} is empty")]
    EmptyForbiddenWord { index: usize },
    #[error("forbidden word {index} uses a symbol outside {{1, m}}")]
    BadSymbol { index: usize },
    #[error("automaton is not trimmed")]
    Untrimmed,
    #[error("word length {0} exceeds the supported maximum of {MAX_COUNT_LEN}")]
    TooLong(usize),
}

fn slot(symbol: u8) -> Option<usize> {
    match symbol {
        ONE => Some(0),
        M => Some(1),
        _ => None,
    }
}

/// Deterministic automaton over `{1, m}`; state 0 is the start state when
/// the automaton is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    trans: Vec<[Option<usize>; 2]>,
    forbidden: Vec<Word>,
}

impl Automaton {
    /// Wraps a raw transition table (state 0 is the start). No trimming or
    /// renumbering is done; see [`Automaton::trim`].
    pub fn from_transitions(trans: Vec<[Option<usize>; 2]>) -> Self {
        Automaton {
            trans,
            forbidden: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.trans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trans.is_empty()
    }

    pub fn start(&self) -> Option<usize> {
        (!self.trans.is_empty()).then_some(0)
    }

    /// The forbidden set this automaton was built from.
    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn transitions(&self) -> &[[Option<usize>; 2]] {
        &self.trans
    }

    pub fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        self.trans[state][slot(symbol)?]
    }

    /// Follows `word` from `state`.
    pub fn run(&self, state: usize, word: &[u8]) -> Option<usize> {
        word.iter().try_fold(state, |s, &sym| self.step(s, sym))
    }

    /// Whether `word` labels a path from the start state.
    pub fn accepts_prefix(&self, word: &[u8]) -> bool {
        self.start().and_then(|s| self.run(s, word)).is_some()
    }

    /// `(from, symbol, to)` in state order, `1` before `m`.
    pub fn edges(&self) -> Vec<(usize, u8, usize)> {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(s, row)| {
                SYMBOLS
                    .iter()
                    .zip(row)
                    .filter_map(move |(&sym, t)| t.map(|t| (s, sym, t)))
            })
            .collect()
    }

    /// Removes states without an infinite continuation and states
    /// unreachable from the start, then renumbers breadth-first.
    pub fn trim(&self) -> Automaton {
        let n = self.trans.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for s in 0..n {
                if alive[s] && !self.trans[s].iter().flatten().any(|&t| alive[t]) {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let trans = self
            .trans
            .iter()
            .map(|row| row.map(|t| t.filter(|&t| alive[t])))
            .collect::<Vec<_>>();
        let mut trimmed = Automaton {
            trans,
            forbidden: self.forbidden.clone(),
        };
        if n == 0 || !alive[0] {
            trimmed.trans.clear();
            return trimmed;
        }
        trimmed.canonicalize();
        trimmed
    }

    pub fn is_trimmed(&self) -> bool {
        self.trim() == *self
    }

    /// Breadth-first renumbering from the start; drops unreachable states.
    fn canonicalize(&mut self) {
        if self.trans.is_empty() {
            return;
        }
        let mut order = vec![0usize];
        let mut index = vec![usize::MAX; self.trans.len()];
        index[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for t in self.trans[s].iter().flatten() {
                if index[*t] == usize::MAX {
                    index[*t] = order.len();
                    order.push(*t);
                }
            }
        }
        self.trans = order
            .iter()
            .map(|&s| self.trans[s].map(|t| t.map(|t| index[t])))
            .collect();
    }
}

/// Builds the trimmed safety automaton of `{1, m}`-sequences avoiding every
/// word in `forbidden`.
pub fn build_safety_automaton(forbidden: &[Word]) -> Result<Automaton, SubshiftError> {
    for (index, w) in forbidden.iter().enumerate() {
        if w.is_empty() {
            return Err(SubshiftError::EmptyForbiddenWord { index });
        }
        if w.symbols().iter().any(|&s| slot(s).is_none()) {
            return Err(SubshiftError::BadSymbol { index });
        }
    }

    // trie of the forbidden words
    let mut goto: Vec<[Option<usize>; 2]> = vec![[None, None]];
    let mut hit = vec![false];
    for w in forbidden {
        let mut s = 0;
        for &sym in w.symbols() {
            let k = slot(sym).expect("checked above");
            s = match goto[s][k] {
                Some(t) => t,
                None => {
                    goto.push([None, None]);
                    hit.push(false);
                    let t = goto.len() - 1;
                    goto[s][k] = Some(t);
                    t
                }
            };
        }
        hit[s] = true;
    }

    // failure links and the complete transition function, breadth-first
    let n = goto.len();
    let mut fail = vec![0usize; n];
    let mut delta = vec![[0usize; 2]; n];
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for k in 0..2 {
            match goto[s][k] {
                Some(t) => {
                    fail[t] = if s == 0 { 0 } else { delta[fail[s]][k] };
                    hit[t] = hit[t] || hit[fail[t]];
                    delta[s][k] = t;
                    queue.push_back(t);
                }
                None => delta[s][k] = if s == 0 { 0 } else { delta[fail[s]][k] },
            }
        }
    }

    let trans = (0..n)
        .map(|s| {
            if hit[s] {
                [None, None]
            } else {
                delta[s].map(|t| (!hit[t]).then_some(t))
            }
        })
        .collect();
    let raw = Automaton {
        trans,
        forbidden: forbidden.to_vec(),
    };
    if hit[0] {
        return Ok(Automaton {
            trans: Vec::new(),
            forbidden: forbidden.to_vec(),
        });
    }
    Ok(raw.trim())
}

/// Cardinality of the set of infinite paths from the start state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    Empty,
    FinitePaths(u128),
    CountablyInfinite,
    Uncountable,
}

impl GrowthKind {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthKind::Empty => "Empty",
            GrowthKind::FinitePaths(_) => "FinitePaths",
            GrowthKind::CountablyInfinite => "CountablyInfinite",
            GrowthKind::Uncountable => "Uncountable",
        }
    }
}

/// Cycle-structure facts backing a [`GrowthKind`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    NoStates,
    /// A strongly connected component with more internal edges than
    /// states, hence two distinct cycles.
    BranchingComponent { states: Vec<usize>, edges: usize },
    /// Two cycles, the second reachable from the first.
    ChainedCycles { from: Vec<usize>, to: Vec<usize> },
    /// Pairwise unreachable simple cycles and the number of infinite paths.
    PathCensus { cycles: usize, paths: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthClass {
    pub kind: GrowthKind,
    pub evidence: Evidence,
}

/// Strongly connected components, Tarjan's algorithm without recursion.
/// Components come out in reverse topological order.
pub fn strongly_connected_components(a: &Automaton) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next_index = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (state, next transition slot to explore)
        let mut work = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut k)) = work.last_mut() {
            if *k < 2 {
                let slot = *k;
                *k += 1;
                if let Some(w) = a.trans[v][slot] {
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

struct Components {
    comps: Vec<Vec<usize>>,
    comp_of: Vec<usize>,
    internal_edges: Vec<usize>,
}

impl Components {
    fn new(a: &Automaton) -> Self {
        let comps = strongly_connected_components(a);
        let mut comp_of = vec![0; a.len()];
        for (c, states) in comps.iter().enumerate() {
            for &s in states {
                comp_of[s] = c;
            }
        }
        let mut internal_edges = vec![0; comps.len()];
        for (s, _, t) in a.edges() {
            if comp_of[s] == comp_of[t] {
                internal_edges[comp_of[s]] += 1;
            }
        }
        Components {
            comps,
            comp_of,
            internal_edges,
        }
    }

    fn has_cycle(&self, c: usize) -> bool {
        self.internal_edges[c] >= self.comps[c].len()
    }
}

/// Classifies the set of infinite paths of a trimmed automaton as empty,
/// finite, countably infinite or uncountable.
pub fn classify_growth(a: &Automaton) -> Result<GrowthClass, SubshiftError> {
    if !a.is_trimmed() {
        return Err(SubshiftError::Untrimmed);
    }
    if a.is_empty() {
        return Ok(GrowthClass {
            kind: GrowthKind::Empty,
            evidence: Evidence::NoStates,
        });
    }
    let cs = Components::new(a);

    if let Some(c) = (0..cs.comps.len()).find(|&c| cs.internal_edges[c] > cs.comps[c].len()) {
        return Ok(GrowthClass {
            kind: GrowthKind::Uncountable,
            evidence: Evidence::BranchingComponent {
                states: cs.comps[c].clone(),
                edges: cs.internal_edges[c],
            },
        });
    }

    // Condensation: which cyclic components can reach another cyclic one.
    // Tarjan emits sinks first, so a forward pass sees successors before
    // predecessors.
    let k = cs.comps.len();
    let mut succ = vec![Vec::new(); k];
    for (s, _, t) in a.edges() {
        let (cs_, ct) = (cs.comp_of[s], cs.comp_of[t]);
        if cs_ != ct {
            succ[cs_].push(ct);
        }
    }
    // reach_cycle[c]: some cyclic component reachable from c (c included)
    let mut reach_cycle: Vec<Option<usize>> = vec![None; k];
    for c in 0..k {
        if cs.has_cycle(c) {
            reach_cycle[c] = Some(c);
        }
        let downstream = succ[c].iter().find_map(|&d| reach_cycle[d]);
        if cs.has_cycle(c) {
            if let Some(d) = downstream {
                return Ok(GrowthClass {
                    kind: GrowthKind::CountablyInfinite,
                    evidence: Evidence::ChainedCycles {
                        from: cs.comps[c].clone(),
                        to: cs.comps[d].clone(),
                    },
                });
            }
        } else {
            reach_cycle[c] = downstream;
        }
    }

    // Every cycle is a sink simple cycle: count the acyclic lead-ins.
    let mut ways = vec![0u128; k];
    let start_comp = cs.comp_of[0];
    ways[start_comp] = 1;
    let mut paths: u128 = 0;
    for c in (0..k).rev() {
        if ways[c] == 0 {
            continue;
        }
        if cs.has_cycle(c) {
            paths = paths.saturating_add(ways[c]);
            continue;
        }
        let s = cs.comps[c][0];
        for t in a.trans[s].iter().flatten() {
            let d = cs.comp_of[*t];
            ways[d] = ways[d].saturating_add(ways[c]);
        }
    }
    let cycles = (0..k).filter(|&c| cs.has_cycle(c)).count();
    Ok(GrowthClass {
        kind: GrowthKind::FinitePaths(paths),
        evidence: Evidence::PathCensus { cycles, paths },
    })
}

/// Number of words of length `n` that label a path from the start state.
pub fn count_words(a: &Automaton, n: usize) -> Result<u128, SubshiftError> {
    if n > MAX_COUNT_LEN {
        return Err(SubshiftError::TooLong(n));
    }
    if a.is_empty() {
        return Ok(0);
    }
    let mut counts = vec![0u128; a.len()];
    counts[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; a.len()];
        for (s, _, t) in a.edges() {
            next[t] += counts[s];
        }
        counts = next;
    }
    Ok(counts.iter().sum())
}

/// Lower and upper bounds on the spectral radius of the transition count
/// matrix after [`POWER_ITERATIONS`] power iterations.
///
/// The spectral radius of a block-triangular matrix is the largest one among
/// its diagonal blocks, so each cyclic strongly connected component is
/// iterated on its own. The shift `A + I` makes every such block primitive,
/// which removes the oscillation a periodic component would cause. The
/// bounds are the Collatz–Wielandt quotients of the final iterate.
pub fn growth_rate_bounds<T: Real>(a: &Automaton) -> (T, T) {
    if a.is_empty() {
        return (T::zero(), T::zero());
    }
    let cs = Components::new(a);
    let mut best = (T::zero(), T::zero());
    for (c, states) in cs.comps.iter().enumerate() {
        if !cs.has_cycle(c) {
            continue;
        }
        let local = |s: usize| states.binary_search(&s).ok();
        let edges: Vec<(usize, usize)> = states
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| {
                a.trans[s]
                    .iter()
                    .flatten()
                    .filter_map(move |&t| local(t).map(|j| (i, j)))
                    .collect::<Vec<_>>()
            })
            .collect();
        let apply = |x: &[T]| {
            let mut y = x.to_vec();
            for &(i, j) in &edges {
                y[i] = y[i] + x[j];
            }
            y
        };
        let mut x = vec![T::one(); states.len()];
        for _ in 0..POWER_ITERATIONS {
            let y = apply(&x);
            let norm = y.iter().fold(T::zero(), |acc, &v| acc.max(v));
            x = y.into_iter().map(|v| v / norm).collect();
        }
        let y = apply(&x);
        let (lo, hi) = x.iter().zip(&y).fold(
            (T::infinity(), T::zero()),
            |(lo, hi), (&xi, &yi)| {
                let r = yi / xi;
                (lo.min(r), hi.max(r))
            },
        );
        let bounds = (lo - T::one(), hi - T::one());
        if bounds.1 > best.1 {
            best = bounds;
        }
    }
    best
}

/// Estimated exponential growth rate of the number of admissible words:
/// the dominant eigenvalue of the transition count matrix.
pub fn growth_rate<T: Real>(a: &Automaton) -> T {
    let (lo, hi) = growth_rate_bounds::<T>(a);
    (lo + hi) / T::lit(2.0)
}

/// Graphviz rendering with states in canonical order.
pub fn export_dot(a: &Automaton) -> String {
    let mut out = String::from("digraph safety {\n  rankdir=LR;\n  start [shape=point];\n");
    if !a.is_empty() {
        out.push_str("  start -> 0;\n");
    }
    for s in 0..a.len() {
        let _ = writeln!(out, "  {s} [shape=circle];");
    }
    for (s, sym, t) in a.edges() {
        let label = if sym == ONE { "1" } else { "m" };
        let _ = writeln!(out, "  {s} -> {t} [label=\"{label}\"];");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|w| Word::parse_ternary(w).unwrap()).collect()
    }

    #[test]
    fn one_m_forbidden() {
        let a = build_safety_automaton(&words(&["1m"])).unwrap();
        assert_eq!(a.len(), 2);
        // start loops on m, moves to the 1-loop on 1
        assert_eq!(a.transitions(), &[[Some(1), Some(0)], [Some(1), None]]);
        assert_eq!(classify_growth(&a).unwrap().kind, GrowthKind::CountablyInfinite);
        assert_eq!(count_words(&a, 5).unwrap(), 6);
    }

    #[test]
    fn eleven_and_one_mm_forbidden() {
        let a = build_safety_automaton(&words(&["11", "1mm"])).unwrap();
        // m^∞ and m^*(1m)^∞
        assert_eq!(a.len(), 3);
        assert!(a.accepts_prefix(words(&["mmm1m1m1m"])[0].symbols()));
        assert!(!a.accepts_prefix(words(&["m1mm"])[0].symbols()));
        assert_eq!(classify_growth(&a).unwrap().kind, GrowthKind::CountablyInfinite);
    }

    #[test]
    fn full_shift() {
        let a = build_safety_automaton(&[]).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(classify_growth(&a).unwrap().kind, GrowthKind::Uncountable);
        assert_eq!(count_words(&a, 10).unwrap(), 1024);
        assert_eq!(count_words(&a, 64).unwrap(), 1u128 << 64);
        assert!((growth_rate::<f64>(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn finite_and_empty() {
        let only_m = build_safety_automaton(&words(&["1"])).unwrap();
        assert_eq!(only_m.len(), 1);
        let g = classify_growth(&only_m).unwrap();
        assert_eq!(g.kind, GrowthKind::FinitePaths(1));
        assert!((growth_rate::<f64>(&only_m) - 1.0).abs() < 1e-12);

        let none = build_safety_automaton(&words(&["1", "m"])).unwrap();
        assert!(none.is_empty());
        assert_eq!(classify_growth(&none).unwrap().kind, GrowthKind::Empty);
        assert_eq!(count_words(&none, 3).unwrap(), 0);
        assert_eq!(growth_rate::<f64>(&none), 0.0);
    }

    #[test]
    fn finite_census_counts_lead_ins() {
        // start -1-> A, start -m-> B, A -1-> C, B -1-> C, C loops on m
        let raw = Automaton::from_transitions(vec![
            [Some(1), Some(2)],
            [Some(3), None],
            [Some(3), None],
            [None, Some(3)],
        ]);
        let a = raw.trim();
        assert_eq!(
            classify_growth(&a).unwrap(),
            GrowthClass {
                kind: GrowthKind::FinitePaths(2),
                evidence: Evidence::PathCensus {
                    cycles: 1,
                    paths: 2
                },
            }
        );
    }

    #[test]
    fn untrimmed_is_rejected() {
        let raw = Automaton::from_transitions(vec![[Some(1), Some(0)], [None, None]]);
        assert_eq!(classify_growth(&raw), Err(SubshiftError::Untrimmed));
        let t = raw.trim();
        assert!(t.is_trimmed());
        assert_eq!(t.trim(), t);
    }

    #[test]
    fn bad_forbidden_words() {
        assert_eq!(
            build_safety_automaton(&[Word::default()]),
            Err(SubshiftError::EmptyForbiddenWord { index: 0 })
        );
        assert_eq!(
            build_safety_automaton(&words(&["1m", "10"])),
            Err(SubshiftError::BadSymbol { index: 1 })
        );
        let a = build_safety_automaton(&[]).unwrap();
        assert_eq!(count_words(&a, 65), Err(SubshiftError::TooLong(65)));
    }

    #[test]
    fn dot_is_stable() {
        let a = build_safety_automaton(&words(&["1m"])).unwrap();
        let dot = export_dot(&a);
        assert_eq!(
            dot,
            "digraph safety {\n  rankdir=LR;\n  start [shape=point];\n  start -> 0;\n  \
             0 [shape=circle];\n  1 [shape=circle];\n  0 -> 1 [label=\"1\"];\n  \
             0 -> 0 [label=\"m\"];\n  1 -> 1 [label=\"1\"];\n}\n"
        );
    }

    #[test]
    fn scc_on_two_cycles() {
        let a = build_safety_automaton(&words(&["11", "1mm"])).unwrap();
        let comps = strongly_connected_components(&a);
        let mut sizes: Vec<_> = comps.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);
    }
}
