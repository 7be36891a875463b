use std::collections::BTreeMap;
use std::time::Instant;

use super::{AttackResult, Move, Node, Outcome, Search};
use crate::aag::{Factor, PublicView};
use crate::Group;

/// Extension words used when no single conjugation shortens the tuple:
/// `x_i x_j x_i^{-1}` and `x_i x_j` for `x_i, x_j` from distinct public
/// elements, and `x_i^2`.
fn flat_extension(singles: &[Factor]) -> Vec<Vec<Factor>> {
    let mut words = Vec::new();
    for &xi in singles {
        for &xj in singles {
            if xi.index != xj.index {
                words.push(vec![xi, xj, xi.inverse()]);
                words.push(vec![xi, xj]);
            }
        }
    }
    words.extend(singles.iter().map(|&x| vec![x, x]));
    words
}

/// Extension words around the best single move `x_m`: `x_j x_m x_j^{-1}`,
/// `x_m x_j`, `x_j x_m` for `x_j` from another public element, and `x_m^2`.
fn focused_extension(singles: &[Factor], xm: Factor) -> Vec<Vec<Factor>> {
    let mut words = Vec::new();
    for &xj in singles {
        if xj.index != xm.index {
            words.push(vec![xj, xm, xj.inverse()]);
            words.push(vec![xm, xj]);
            words.push(vec![xj, xm]);
        }
    }
    words.push(vec![xm, xm]);
    words
}

/// Best-first search as in [`super::lba_backtracking`], but each expansion
/// also tries short products of public elements so that the search can climb
/// over peaks that no single conjugation crosses.
///
/// The extension set always contains the single moves `a_i^{±1}` (their
/// conjugates are already computed for the `δ` test). `c̄^w = b̄` is tested for
/// every `w`; with `literal` only the last `w` of the extension set is tested.
pub fn lba_dynamic_set(
    group: &Group,
    view: &PublicView<'_>,
    deadline: Instant,
    literal: bool,
) -> AttackResult {
    let mut search = Search::new(group, view, deadline);
    let root = search.root();
    if search.is_target(&root.tuple) {
        return search.succeed(&root.trace);
    }
    let singles = search.single_moves();
    let letters: Vec<Factor> = singles.iter().map(|mv| mv.word[0]).collect();
    let to_moves = |search: &Search<'_>, words: Vec<Vec<Factor>>| -> Vec<Move> {
        words.into_iter().map(|w| search.make_move(w)).collect()
    };
    let flat = to_moves(&search, flat_extension(&letters));
    let focused: Vec<Vec<Move>> = letters
        .iter()
        .map(|&xm| to_moves(&search, focused_extension(&letters, xm)))
        .collect();

    let mut counter = 0u64;
    let mut set = BTreeMap::new();
    set.insert((root.len.clone(), counter), root);
    search.observe_set_size(1);

    while let Some((_, node)) = set.pop_first() {
        search.expand(&node);
        let mut single_children: Vec<Node> = Vec::with_capacity(singles.len());
        for mv in &singles {
            if search.timed_out() {
                return search.fail(Outcome::FailTimeout);
            }
            single_children.push(search.child(&node, mv));
        }
        // x_m: first (i, ε) with the largest reduction
        let best = single_children
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len < node.len)
            .min_by(|(i, a), (j, b)| a.len.cmp(&b.len).then(i.cmp(j)))
            .map(|(i, _)| i);
        let extension = match best {
            None => &flat,
            Some(m) => &focused[m],
        };
        let total = single_children.len() + extension.len();
        let mut position = 0;
        let mut consider = |search: &mut Search<'_>, child: Node| -> Option<Node> {
            position += 1;
            if (!literal || position == total) && search.is_target(&child.tuple) {
                return Some(child);
            }
            if child.len < node.len {
                counter += 1;
                set.insert((child.len.clone(), counter), child);
            }
            None
        };
        for child in single_children {
            if let Some(hit) = consider(&mut search, child) {
                return search.succeed(&hit.trace);
            }
        }
        for mv in extension {
            if search.timed_out() {
                return search.fail(Outcome::FailTimeout);
            }
            let child = search.child(&node, mv);
            if let Some(hit) = consider(&mut search, child) {
                return search.succeed(&hit.trace);
            }
        }
        search.observe_set_size(set.len());
    }
    search.fail(Outcome::FailExhausted)
}
