//! The shift operation: append one byte, then evict the oldest suffix once
//! the window is over capacity.

use crate::node::{ActivePoint, ROOT};
use crate::WindowIndex;

impl WindowIndex {
    /// Appends `c` to the window; once the window is full, also removes the
    /// oldest retained byte and its suffix. During the growing phase this
    /// only appends.
    pub fn shift(&mut self, c: u8) {
        self.win.push(c);
        let chain = self.add_char(c);
        if let Some(target) = chain.attach_target {
            self.links.attach_chain(target, &chain.nodes);
        }
        if self.win.len() > self.win.capacity() {
            self.evict_oldest();
            self.win.advance_start();
        }
    }

    /// Removes the oldest stored suffix from the tree. The window still
    /// retains its byte; the caller advances the window start afterwards.
    fn evict_oldest(&mut self) {
        debug_assert_eq!(self.win.len(), self.win.capacity() + 1);
        let leaf = self.tree.queue_head.expect("eviction with no leaves");
        assert_eq!(
            self.tree.leaf_suffix_start(leaf),
            self.win.start(),
            "queue head is not the oldest suffix"
        );
        let n = self.win.n();
        let b = self.active.buffer_len;

        let expiring = self.win.start();

        // The re-label case must fire exactly when the evicted suffix is the
        // buffer's only finalized carrier. Quadratic census, small windows only.
        #[cfg(debug_assertions)]
        if b > 0 && self.win.len() <= 256 {
            let buffer = self.win.extract(n - b, n);
            let carriers: Vec<u64> = (self.win.start()..n - b)
                .filter(|&s| self.win.substring_equals(s, &buffer))
                .collect();
            let sole_carrier_is_oldest = carriers == [self.win.start()];
            assert_eq!(
                self.active.node == leaf,
                sole_carrier_is_oldest,
                "re-label trigger disagrees with the carrier census {:?}",
                carriers
            );
        }

        if self.active.node == leaf {
            // The buffer ends on the evicted leaf's edge, so this leaf was
            // the buffer's only finalized carrier. The deepest implicit
            // suffix becomes explicit: re-label the leaf instead of deleting
            // it, shorten the buffer, and relocate the active point.
            let parent = self.tree.parent(leaf);
            self.tree.relabel_leaf(leaf, n - b);
            self.tree.deposit_credit(parent, n - b, &mut self.counters);
            let b_next = b - 1;
            let from = self.tree.suffix_link(parent);
            let lo = (n - b_next) + self.tree.depth(from);
            self.active = self.rescan(from, lo, n);
            debug_assert_eq!(self.active.buffer_len, b_next);
        } else {
            let parent = self.tree.parent(leaf);
            self.tree.remove_leaf(leaf, &mut self.counters);
            if parent != ROOT && self.tree.child_count(parent) == 1 {
                // Path compression: the parent became unary. It is
                // necessarily a leaf in the suffix-links tree (no suffix
                // link terminates at it), so it can be dropped from the
                // ancestry structure first.
                self.links.remove_leaf(parent);
                let survivor = self.tree.merge_unary(parent, &mut self.counters);
                if self.active.node == parent {
                    // The buffer now ends in the middle of the fused edge.
                    self.active = ActivePoint { node: survivor, buffer_len: b };
                }
            }
        }

        // Any representative still pointing at the expiring position takes a
        // fresh witness before the position leaves the window.
        self.tree.refresh_expiring_reps(expiring, &mut self.counters);
    }
}
