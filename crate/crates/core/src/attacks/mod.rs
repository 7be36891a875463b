//! Length-based attacks on an AAG instance.
//!
//! Every variant searches for `x ∈ <a_1, ..., a_N1>` with `b̄'^x = b̄`, guided
//! by the total length of the conjugated tuple, and reports `A' = x^{-1}` as
//! a word over Alice's public set. Only the eavesdropper's view
//! ([`PublicView`]) is used.

mod backtrack;
mod dynamic;
mod memory;
mod star;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::rc::Rc;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::aag::{inverse_word, Factor, PublicView};
use crate::presentation::Sign;
use crate::{Group, GroupElement, Int};

pub use backtrack::lba_backtracking;
pub use dynamic::lba_dynamic_set;
pub use memory::lba_memory;
pub use star::lba_star;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Success,
    FailExhausted,
    FailTimeout,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Success => "SUCCESS",
            Outcome::FailExhausted => "FAIL_EXHAUSTED",
            Outcome::FailTimeout => "FAIL_TIMEOUT",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Backtrack,
    Dynamic,
    Memory,
    Star,
}

impl Variant {
    pub fn uses_memory(self) -> bool {
        matches!(self, Variant::Memory | Variant::Star)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Backtrack => "backtrack",
            Variant::Dynamic => "dynamic",
            Variant::Memory => "memory",
            Variant::Star => "star",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "backtrack" => Ok(Variant::Backtrack),
            "dynamic" => Ok(Variant::Dynamic),
            "memory" => Ok(Variant::Memory),
            "star" => Ok(Variant::Star),
            _ => Err(format!(
                "unknown variant {s:?} (expected backtrack, dynamic, memory or star)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackOptions {
    /// Capacity `M` of the stored set for the memory variants.
    pub memory: usize,
    /// Skip tuples already seen (memory variants only).
    pub dedup: bool,
    /// Test `c̄^w = b̄` only for the last extension word, as the dynamic-set
    /// pseudocode literally reads.
    pub literal_alg2: bool,
}

impl Default for AttackOptions {
    fn default() -> Self {
        Self {
            memory: 500,
            dedup: true,
            literal_alg2: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    /// Tuple conjugations performed.
    pub conjugations: u64,
    pub nodes_expanded: u64,
    pub peak_set_size: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recovered {
    /// `A'` as a word over Alice's public set.
    pub word: Vec<Factor>,
    pub element: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub outcome: Outcome,
    pub recovered: Option<Recovered>,
    pub stats: Stats,
}

/// Whether `b_i^cand = b'_i` for every `i`.
pub fn verify_candidate(group: &Group, view: &PublicView<'_>, cand: &GroupElement) -> bool {
    let inv = group.invert(cand);
    view.bob_public.elements.len() == view.bob_conjugated.len()
        && view
            .bob_public
            .elements
            .iter()
            .zip(view.bob_conjugated)
            .all(|(b, b2)| group.conjugate_with_inverse(b, cand, &inv) == *b2)
}

/// Runs the chosen variant until success, exhaustion or `timeout`.
pub fn run_attack(
    variant: Variant,
    group: &Group,
    view: &PublicView<'_>,
    timeout: Duration,
    opts: &AttackOptions,
) -> AttackResult {
    let deadline = Instant::now() + timeout;
    match variant {
        Variant::Backtrack => lba_backtracking(group, view, deadline),
        Variant::Dynamic => lba_dynamic_set(group, view, deadline, opts.literal_alg2),
        Variant::Memory => lba_memory(group, view, deadline, opts.memory, opts.dedup),
        Variant::Star => lba_star(group, view, deadline, opts.memory, opts.dedup),
    }
}

/// Conjugator trace as a persistent list, so siblings share their prefix.
#[derive(Clone, Default)]
struct Trace(Option<Rc<TraceLink>>);

struct TraceLink {
    factor: Factor,
    prev: Trace,
}

impl Trace {
    fn extend(&self, word: &[Factor]) -> Trace {
        let mut t = self.clone();
        for &factor in word {
            t = Trace(Some(Rc::new(TraceLink { factor, prev: t })));
        }
        t
    }

    fn to_vec(&self) -> Vec<Factor> {
        let mut out = Vec::new();
        let mut cur = &self.0;
        while let Some(link) = cur {
            out.push(link.factor);
            cur = &link.prev.0;
        }
        out.reverse();
        out
    }
}

struct Node {
    tuple: Vec<GroupElement>,
    len: Int,
    trace: Trace,
}

/// A conjugator `w` over Alice's public set, with `w` and `w^{-1}` collected.
struct Move {
    word: Vec<Factor>,
    elem: GroupElement,
    inv: GroupElement,
}

fn tuple_hash(tuple: &[GroupElement]) -> u64 {
    let mut h = DefaultHasher::new();
    tuple.hash(&mut h);
    h.finish()
}

const COHERENCE_SAMPLE: u64 = 1000;

/// State shared by all variants: the public data, the deadline and counters.
struct Search<'a> {
    group: &'a Group,
    view: &'a PublicView<'a>,
    started: Instant,
    deadline: Instant,
    stats: Stats,
}

impl<'a> Search<'a> {
    fn new(group: &'a Group, view: &'a PublicView<'a>, deadline: Instant) -> Self {
        Self {
            group,
            view,
            started: Instant::now(),
            deadline,
            stats: Stats::default(),
        }
    }

    fn target(&self) -> &'a [GroupElement] {
        &self.view.bob_public.elements
    }

    fn root(&self) -> Node {
        let tuple = self.view.bob_conjugated.to_vec();
        let len = crate::tuple_length(&tuple);
        Node {
            tuple,
            len,
            trace: Trace::default(),
        }
    }

    fn make_move(&self, word: Vec<Factor>) -> Move {
        let elem = self.view.alice_public.evaluate(self.group, &word);
        let inv = self.group.invert(&elem);
        Move { word, elem, inv }
    }

    /// `a_i^{±1}` for every `i`, in the order `a_1, a_1^{-1}, a_2, ...`.
    fn single_moves(&self) -> Vec<Move> {
        (0..self.view.alice_public.len())
            .flat_map(|i| [Factor::new(i, Sign::Pos), Factor::new(i, Sign::Neg)])
            .map(|f| self.make_move(vec![f]))
            .collect()
    }

    fn timed_out(&self) -> bool {
        Instant::now() >= self.deadline
    }

    fn conjugate(&mut self, tuple: &[GroupElement], mv: &Move) -> Vec<GroupElement> {
        self.stats.conjugations += 1;
        tuple
            .iter()
            .map(|c| self.group.conjugate_with_inverse(c, &mv.elem, &mv.inv))
            .collect()
    }

    fn child(&mut self, node: &Node, mv: &Move) -> Node {
        let tuple = self.conjugate(&node.tuple, mv);
        let len = crate::tuple_length(&tuple);
        Node {
            tuple,
            len,
            trace: node.trace.extend(&mv.word),
        }
    }

    fn is_target(&self, tuple: &[GroupElement]) -> bool {
        tuple == self.target()
    }

    /// Counts an expansion; in debug builds, periodically recomputes the
    /// node's tuple from `b̄'` and its trace.
    fn expand(&mut self, node: &Node) {
        self.stats.nodes_expanded += 1;
        if cfg!(debug_assertions) && self.stats.nodes_expanded % COHERENCE_SAMPLE == 1 {
            let x = self
                .view
                .alice_public
                .evaluate(self.group, &node.trace.to_vec());
            let x_inv = self.group.invert(&x);
            let recomputed: Vec<_> = self
                .view
                .bob_conjugated
                .iter()
                .map(|b| self.group.conjugate_with_inverse(b, &x, &x_inv))
                .collect();
            debug_assert_eq!(recomputed, node.tuple, "trace out of sync with tuple");
        }
    }

    fn observe_set_size(&mut self, size: usize) {
        self.stats.peak_set_size = self.stats.peak_set_size.max(size as u64);
    }

    fn finish(mut self, outcome: Outcome, recovered: Option<Recovered>) -> AttackResult {
        self.stats.wall_seconds = self.started.elapsed().as_secs_f64();
        AttackResult {
            outcome,
            recovered,
            stats: self.stats,
        }
    }

    fn fail(self, outcome: Outcome) -> AttackResult {
        self.finish(outcome, None)
    }

    /// Reports `A' = (trace)^{-1}` after checking it against the public data.
    fn succeed(self, trace: &Trace) -> AttackResult {
        let word = inverse_word(&trace.to_vec());
        let element = self.view.alice_public.evaluate(self.group, &word);
        assert!(
            verify_candidate(self.group, self.view, &element),
            "search reached b̄ but the recovered conjugator does not verify"
        );
        self.finish(Outcome::Success, Some(Recovered { word, element }))
    }
}
