use std::collections::HashSet;
use std::time::Instant;

use super::{tuple_hash, AttackResult, Node, Outcome, Search};
use crate::aag::PublicView;
use crate::Group;

/// Generational beam search: every stored tuple is conjugated by every
/// `a_i^{±1}`, and the `m` shortest children form the next generation.
///
/// With `dedup`, tuples that were already admitted to some generation are
/// skipped. If a generation comes out empty the search reports exhaustion.
pub fn lba_memory(
    group: &Group,
    view: &PublicView<'_>,
    deadline: Instant,
    m: usize,
    dedup: bool,
) -> AttackResult {
    let m = m.max(1);
    let mut search = Search::new(group, view, deadline);
    let root = search.root();
    if search.is_target(&root.tuple) {
        return search.succeed(&root.trace);
    }
    let moves = search.single_moves();
    let mut visited = HashSet::new();
    if dedup {
        visited.insert(tuple_hash(&root.tuple));
    }
    let mut generation = vec![root];
    search.observe_set_size(1);

    while !generation.is_empty() {
        let mut pool: Vec<Node> = Vec::with_capacity(generation.len() * moves.len());
        for node in &generation {
            search.expand(node);
            for mv in &moves {
                if search.timed_out() {
                    return search.fail(Outcome::FailTimeout);
                }
                let child = search.child(node, mv);
                if search.is_target(&child.tuple) {
                    return search.succeed(&child.trace);
                }
                pool.push(child);
            }
        }
        // stable: equal lengths keep generation order
        pool.sort_by(|a, b| a.len.cmp(&b.len));
        generation = Vec::with_capacity(m);
        for child in pool {
            if generation.len() == m {
                break;
            }
            if dedup && !visited.insert(tuple_hash(&child.tuple)) {
                continue;
            }
            generation.push(child);
        }
        search.observe_set_size(generation.len());
    }
    search.fail(Outcome::FailExhausted)
}
