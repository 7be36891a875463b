use std::collections::BTreeMap;
use std::time::Instant;

use super::{AttackResult, Outcome, Search};
use crate::aag::PublicView;
use crate::Group;

/// Best-first search over single conjugations `a_i^{±1}`, keeping only
/// children that strictly shorten the tuple. Ties on length are broken
/// oldest first.
pub fn lba_backtracking(group: &Group, view: &PublicView<'_>, deadline: Instant) -> AttackResult {
    let mut search = Search::new(group, view, deadline);
    let root = search.root();
    if search.is_target(&root.tuple) {
        return search.succeed(&root.trace);
    }
    let moves = search.single_moves();
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
            if child.len < node.len {
                counter += 1;
                set.insert((child.len.clone(), counter), child);
            }
        }
        search.observe_set_size(set.len());
    }
    search.fail(Outcome::FailExhausted)
}
