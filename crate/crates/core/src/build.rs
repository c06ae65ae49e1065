//! Online construction: consume one byte, maintain the active point, create
//! leaves and splits, and hand the new suffix-link chain to the caller for
//! ancestry attachment.
//!
//! The automaton has two states. While the extended buffer keeps matching the
//! tree (buffering), only the active point moves. On a mismatch (expanding)
//! the current buffer-plus-byte suffix is finalized as a leaf, the buffer
//! shortens by one, and the active point relocates through a suffix link;
//! this repeats until the byte matches or the buffer empties.

use crate::node::{ActivePoint, NodeId};
use crate::window::StreamPos;
use crate::WindowIndex;

/// Internal nodes created by one expanding cascade, in creation order,
/// plus the pre-existing node the last of them links to.
///
/// Suffix links between consecutive chain nodes are already set when the
/// cascade finishes; `attach_target` is resolved on the transition back to
/// buffering (or at the first insertion that lands exactly on an existing
/// node).
#[derive(Debug, Default)]
pub(crate) struct ChainBuffer {
    pub nodes: Vec<NodeId>,
    pub attach_target: Option<NodeId>,
}

impl WindowIndex {
    /// True iff the active point rests exactly on its node (rather than in
    /// the middle of the node's incoming edge).
    fn active_at_node(&self) -> bool {
        !self.tree.is_leaf(self.active.node)
            && self.active.buffer_len == self.tree.depth(self.active.node)
    }

    /// Consumes one byte: extends the buffer or runs an expanding cascade.
    /// The byte must already be pushed to the window.
    pub(crate) fn add_char(&mut self, c: u8) -> ChainBuffer {
        // Position of the byte being consumed; the buffer ends just before it.
        let pos: StreamPos = self.win.n() - 1;
        let mut chain = ChainBuffer::default();
        // Last split node whose suffix link is still unresolved.
        let mut pending: Option<NodeId> = None;

        loop {
            let beta = self.active.node;
            let b = self.active.buffer_len;

            if self.active_at_node() {
                if let Some(child) = self.tree.child(beta, c) {
                    // Buffering: descend onto the matching child's edge.
                    if let Some(p) = pending.take() {
                        self.tree.internal_mut(p).suffix_link = beta;
                        chain.attach_target = Some(beta);
                    }
                    self.active = ActivePoint { node: child, buffer_len: b + 1 };
                    self.counters.buffering_steps += 1;
                    break;
                }
            } else if self.tree.edge_char(beta, b, &self.win) == c {
                // Buffering: the edge continues with `c`.
                debug_assert!(
                    pending.is_none(),
                    "a split is always followed by an exact landing or another split"
                );
                self.active.buffer_len = b + 1;
                self.counters.buffering_steps += 1;
                break;
            }

            // Expanding: finalize the suffix of length b+1 ending at `pos`.
            self.counters.expanding_iters += 1;
            let suffix_start = pos - b;
            let relocate_from_parent; // pre-split parent, when mid-edge
            if self.active_at_node() {
                // The buffer ends exactly at an existing node: no split. Any
                // pending link resolves here and the chain attaches here.
                if let Some(p) = pending.take() {
                    self.tree.internal_mut(p).suffix_link = beta;
                    chain.attach_target = Some(beta);
                }
                self.tree.insert_leaf(beta, suffix_start, &self.win, &mut self.counters);
                relocate_from_parent = None;
            } else {
                let alpha = self.tree.parent(beta);
                let mid = self.tree.split_edge(beta, b, &self.win, &mut self.counters);
                if let Some(p) = pending.take() {
                    self.tree.internal_mut(p).suffix_link = mid;
                }
                pending = Some(mid);
                chain.nodes.push(mid);
                self.tree.insert_leaf(mid, suffix_start, &self.win, &mut self.counters);
                relocate_from_parent = Some(alpha);
            }

            if b == 0 {
                // Nothing shorter to try; the buffer stays empty.
                debug_assert!(pending.is_none(), "a root insertion resolves the pending link");
                break;
            }

            // Shorten the buffer by one and relocate the active point.
            let b_next = b - 1;
            self.active = match relocate_from_parent {
                None => {
                    // Exact landing: the suffix link points straight at the
                    // buffer's new locus.
                    let target = self.tree.suffix_link(beta);
                    debug_assert_eq!(self.tree.depth(target), b_next);
                    self.counters.rescan_hops += 1;
                    ActivePoint { node: target, buffer_len: b_next }
                }
                Some(alpha) => {
                    let from = self.tree.suffix_link(alpha);
                    let lo = (pos - b_next) + self.tree.depth(from);
                    self.rescan(from, lo, pos)
                }
            };
        }

        debug_assert!(chain.nodes.is_empty() || chain.attach_target.is_some());
        chain
    }

    /// Skip/count descent: navigates the window bytes `[lo, hi)` downward
    /// from `from`, comparing only branch characters. The string is known to
    /// exist below `from`, so per-byte verification is skipped.
    pub(crate) fn rescan(&mut self, from: NodeId, lo: StreamPos, hi: StreamPos) -> ActivePoint {
        debug_assert!(lo <= hi);
        let mut node = from;
        let mut off = lo;
        loop {
            if off == hi {
                let depth = self.tree.string_depth(node, &self.win);
                return ActivePoint { node, buffer_len: depth };
            }
            let c = self.win.char_at(off);
            let child = self
                .tree
                .child(node, c)
                .expect("rescan: navigated string missing from the tree");
            self.counters.rescan_hops += 1;
            let node_depth = self.tree.depth(node);
            let child_depth = self.tree.string_depth(child, &self.win);
            let remaining = hi - off;
            if remaining < child_depth - node_depth {
                return ActivePoint { node: child, buffer_len: node_depth + remaining };
            }
            off += child_depth - node_depth;
            node = child;
        }
    }
}
