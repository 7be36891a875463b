use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use super::{tuple_hash, AttackResult, Outcome, Search};
use crate::aag::PublicView;
use crate::Group;

/// Best-first search with at most `m` stored tuples. When the store is full
/// a child replaces the current longest member if it is strictly shorter.
///
/// With `dedup`, a tuple that has been stored once is never stored again.
pub fn lba_star(
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
    let mut counter = 0u64;
    let mut set = BTreeMap::new();
    set.insert((root.len.clone(), counter), root);
    search.observe_set_size(1);

    while let Some((_, node)) = set.pop_first() {
        search.expand(&node);
        for mv in &moves {
            if search.timed_out() {
                return search.fail(Outcome::FailTimeout);
            }
            let child = search.child(&node, mv);
            if search.is_target(&child.tuple) {
                return search.succeed(&child.trace);
            }
            if set.len() >= m {
                let worst = set.last_key_value().map(|((len, _), _)| len);
                if worst.is_some_and(|w| child.len >= *w) {
                    continue;
                }
            }
            if dedup && !visited.insert(tuple_hash(&child.tuple)) {
                continue;
            }
            if set.len() >= m {
                set.pop_last();
            }
            counter += 1;
            set.insert((child.len.clone(), counter), child);
        }
        search.observe_set_size(set.len());
    }
    search.fail(Outcome::FailExhausted)
}
