//! Arena of PATRICIA suffix-tree nodes.
//!
//! Edges are never stored as position ranges. An edge carries only its first
//! byte plus the skip implied by the string depths of its endpoints; the bytes
//! in the middle of an edge are recovered from an in-window occurrence of the
//! node's spelled string (`suffix_start` for leaves, `rep_pos` for internal
//! nodes). `rep_pos` is kept fresh by credit propagation, with a walk to a
//! descendant leaf as the correctness backstop.

use crate::window::{StreamPos, WindowBuffer};
use crate::OpCounters;

/// Handle into the node arena. Handles stay valid until the node is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(pub(crate) u32);

/// The root is created with the arena and never removed.
pub const ROOT: NodeId = NodeId(0);

impl NodeId {
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }

    /// Builds a handle from a raw index. Meant for driving the ancestry
    /// structure standalone; handles made up this way must not be fed to a
    /// tree that did not issue them.
    pub fn from_raw(raw: u32) -> NodeId {
        NodeId(raw)
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

#[derive(Debug)]
pub(crate) struct InternalData {
    /// String depth in bytes (sum of skips from the root).
    pub depth: u64,
    /// Children sorted by the first byte of their incoming edge.
    pub children: Vec<(u8, NodeId)>,
    /// Node spelling this node's string minus its first byte; ROOT for
    /// depth-1 nodes and for the root itself.
    pub suffix_link: NodeId,
    /// Start of some in-window occurrence of the spelled string. Never
    /// decreases while the node lives.
    pub rep_pos: StreamPos,
    /// One buffered refresh is waiting here (percolates on the next deposit).
    pub credit: bool,
    /// Position of this node's single armed expiry-check entry; always
    /// between the window start and `rep_pos`.
    pub armed_at: StreamPos,
}

#[derive(Debug)]
pub(crate) struct LeafData {
    /// The finalized suffix this leaf stores. The leaf's string depth is
    /// open-ended: `n - suffix_start`.
    pub suffix_start: StreamPos,
    pub queue_prev: Option<NodeId>,
    pub queue_next: Option<NodeId>,
}

#[derive(Debug)]
pub(crate) enum Kind {
    Internal(InternalData),
    Leaf(LeafData),
    Free { next: Option<NodeId> },
}

#[derive(Debug)]
pub(crate) struct Node {
    pub parent: NodeId,
    /// First byte of the incoming edge. Unused for the root.
    pub first_char: u8,
    pub kind: Kind,
}

/// The pair (β, |B|): the node terminating the edge on which the buffer ends,
/// and the buffer length. `buffer_len == depth(node)` means the buffer ends
/// exactly at `node`; `buffer_len == 0` forces `node == ROOT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActivePoint {
    pub node: NodeId,
    pub buffer_len: u64,
}

impl ActivePoint {
    pub(crate) fn at_root() -> Self {
        ActivePoint { node: ROOT, buffer_len: 0 }
    }
}

/// Node arena plus the eviction queue of leaves (oldest suffix first).
#[derive(Debug)]
pub(crate) struct Tree {
    nodes: Vec<Node>,
    free_head: Option<NodeId>,
    pub queue_head: Option<NodeId>,
    pub queue_tail: Option<NodeId>,
    pub leaf_count: usize,
    /// Internal nodes excluding the root.
    pub internal_count: usize,
    /// Ring of pending expiry checks: each internal node keeps one entry
    /// armed at a position no later than its `rep_pos`. Draining the bucket
    /// of the position leaving the window either re-arms the entry at the
    /// node's current (younger) rep or, if the rep itself is expiring,
    /// re-witnesses it from the node's subtree. Keeps every rep inside the
    /// window at amortized constant cost per shift.
    rep_buckets: Vec<Vec<NodeId>>,
}

impl Tree {
    pub fn new(capacity: usize) -> Self {
        let root = Node {
            parent: ROOT,
            first_char: 0,
            kind: Kind::Internal(InternalData {
                depth: 0,
                children: Vec::new(),
                suffix_link: ROOT,
                rep_pos: 0,
                credit: false,
                armed_at: 0,
            }),
        };
        Tree {
            nodes: vec![root],
            free_head: None,
            queue_head: None,
            queue_tail: None,
            leaf_count: 0,
            internal_count: 0,
            rep_buckets: (0..capacity + 1).map(|_| Vec::new()).collect(),
        }
    }

    fn bucket_slot(&self, p: StreamPos) -> usize {
        (p % self.rep_buckets.len() as u64) as usize
    }

    fn set_rep(&mut self, v: NodeId, pos: StreamPos) {
        let d = self.internal_mut(v);
        debug_assert!(d.rep_pos <= pos);
        d.rep_pos = pos;
    }

    fn arm_expiry_check(&mut self, v: NodeId, pos: StreamPos) {
        let slot = self.bucket_slot(pos);
        self.internal_mut(v).armed_at = pos;
        self.rep_buckets[slot].push(v);
    }

    /// Called while the oldest retained position is being evicted: every
    /// node armed at that position either re-arms at its current (younger)
    /// rep or, if the rep itself is expiring, takes a fresh witness from its
    /// (always in-window) subtree leaves.
    pub fn refresh_expiring_reps(&mut self, expiring: StreamPos, counters: &mut OpCounters) {
        let slot = self.bucket_slot(expiring);
        let pending = std::mem::take(&mut self.rep_buckets[slot]);
        for v in pending {
            counters.credit_steps += 1;
            // The arena slot may have been freed or reused since arming;
            // a changed armed_at identifies such garbage entries.
            let rep = match &self.nodes[v.index()].kind {
                Kind::Internal(d) if d.depth > 0 && d.armed_at == expiring => d.rep_pos,
                _ => continue,
            };
            if rep <= expiring {
                let (fresh, hops) = self.witness_counted(v);
                counters.credit_steps += hops;
                self.set_rep(v, fresh);
                self.arm_expiry_check(v, fresh);
            } else {
                self.arm_expiry_check(v, rep);
            }
        }
    }

    pub fn node(&self, v: NodeId) -> &Node {
        &self.nodes[v.index()]
    }

    fn node_mut(&mut self, v: NodeId) -> &mut Node {
        &mut self.nodes[v.index()]
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        matches!(self.node(v).kind, Kind::Leaf(_))
    }

    pub fn internal(&self, v: NodeId) -> &InternalData {
        match &self.node(v).kind {
            Kind::Internal(d) => d,
            _ => panic!("node {:?} is not internal", v),
        }
    }

    pub(crate) fn internal_mut(&mut self, v: NodeId) -> &mut InternalData {
        match &mut self.node_mut(v).kind {
            Kind::Internal(d) => d,
            _ => panic!("node {:?} is not internal", v),
        }
    }

    pub fn leaf(&self, v: NodeId) -> &LeafData {
        match &self.node(v).kind {
            Kind::Leaf(d) => d,
            _ => panic!("node {:?} is not a leaf", v),
        }
    }

    fn leaf_mut(&mut self, v: NodeId) -> &mut LeafData {
        match &mut self.node_mut(v).kind {
            Kind::Leaf(d) => d,
            _ => panic!("node {:?} is not a leaf", v),
        }
    }

    pub fn parent(&self, v: NodeId) -> NodeId {
        self.node(v).parent
    }

    pub fn suffix_link(&self, v: NodeId) -> NodeId {
        self.internal(v).suffix_link
    }

    pub fn depth(&self, v: NodeId) -> u64 {
        self.internal(v).depth
    }

    /// String depth: stored depth for internal nodes, open-ended for leaves.
    pub fn string_depth(&self, v: NodeId, w: &WindowBuffer) -> u64 {
        match &self.node(v).kind {
            Kind::Internal(d) => d.depth,
            Kind::Leaf(d) => w.n() - d.suffix_start,
            Kind::Free { .. } => panic!("string_depth on freed node {:?}", v),
        }
    }

    /// Start of an in-window occurrence of `v`'s spelled string, taken from a
    /// descendant leaf. Always fresh; used by audits and as edge_char backstop.
    pub fn witness(&self, v: NodeId) -> StreamPos {
        self.witness_counted(v).0
    }

    /// `witness` plus the number of hops the walk took.
    pub fn witness_counted(&self, v: NodeId) -> (StreamPos, u64) {
        let mut cur = v;
        let mut hops = 0;
        loop {
            match &self.node(cur).kind {
                Kind::Leaf(d) => return (d.suffix_start, hops),
                Kind::Internal(d) => {
                    cur = d.children.first().expect("internal node with no children").1;
                    hops += 1;
                }
                Kind::Free { .. } => panic!("witness walk hit freed node"),
            }
        }
    }

    fn alloc(&mut self, node: Node, counters: &mut OpCounters) -> NodeId {
        counters.node_creations += 1;
        match self.free_head {
            Some(id) => {
                let next = match self.nodes[id.index()].kind {
                    Kind::Free { next } => next,
                    _ => panic!("free list corrupt"),
                };
                self.free_head = next;
                self.nodes[id.index()] = node;
                id
            }
            None => {
                self.nodes.push(node);
                NodeId((self.nodes.len() - 1) as u32)
            }
        }
    }

    fn release(&mut self, v: NodeId, counters: &mut OpCounters) {
        assert!(v != ROOT, "cannot free the root");
        counters.node_deletions += 1;
        self.nodes[v.index()].kind = Kind::Free { next: self.free_head };
        self.free_head = Some(v);
    }

    /// The child of `v` whose incoming edge starts with `c`, if any.
    /// Calling this on a leaf is a logic fault.
    pub fn child(&self, v: NodeId, c: u8) -> Option<NodeId> {
        let d = self.internal(v);
        d.children
            .binary_search_by_key(&c, |&(ch, _)| ch)
            .ok()
            .map(|i| d.children[i].1)
    }

    pub fn child_count(&self, v: NodeId) -> usize {
        self.internal(v).children.len()
    }

    fn add_child(&mut self, v: NodeId, c: u8, child: NodeId) {
        let d = self.internal_mut(v);
        match d.children.binary_search_by_key(&c, |&(ch, _)| ch) {
            Ok(_) => panic!("duplicate branch {:?} under {:?}", c as char, v),
            Err(i) => d.children.insert(i, (c, child)),
        }
    }

    fn remove_child(&mut self, v: NodeId, c: u8) -> NodeId {
        let d = self.internal_mut(v);
        match d.children.binary_search_by_key(&c, |&(ch, _)| ch) {
            Ok(i) => d.children.remove(i).1,
            Err(_) => panic!("no branch {:?} under {:?}", c as char, v),
        }
    }

    fn rebind_child(&mut self, v: NodeId, c: u8, child: NodeId) {
        let d = self.internal_mut(v);
        match d.children.binary_search_by_key(&c, |&(ch, _)| ch) {
            Ok(i) => d.children[i].1 = child,
            Err(_) => panic!("no branch {:?} under {:?}", c as char, v),
        }
    }

    /// Byte at `string_offset` of `v`'s spelled string.
    ///
    /// Reads through the node's occurrence position. A stale internal
    /// `rep_pos` falls back to a descendant-leaf walk and refreshes the
    /// position, so the answer is always correct.
    pub fn edge_char(&mut self, v: NodeId, string_offset: u64, w: &WindowBuffer) -> u8 {
        debug_assert!(string_offset < self.string_depth(v, w));
        debug_assert!(string_offset >= self.depth(self.parent(v)));
        match &self.node(v).kind {
            Kind::Leaf(d) => w.char_at(d.suffix_start + string_offset),
            Kind::Internal(d) => {
                if d.rep_pos >= w.start() && d.rep_pos + d.depth <= w.n() {
                    w.char_at(d.rep_pos + string_offset)
                } else {
                    // Backstop for a corrupt or stale occurrence: repair from
                    // a live leaf. Direct assignment, since a repaired value
                    // may be older than the bad one it replaces.
                    let fresh = self.witness(v);
                    self.internal_mut(v).rep_pos = fresh;
                    w.char_at(fresh + string_offset)
                }
            }
            Kind::Free { .. } => panic!("edge_char on freed node"),
        }
    }

    /// Records an in-window occurrence of `v`'s spelled string starting at
    /// `fresh` and percolates one buffered refresh per visited node: a node
    /// already holding a credit forwards the occurrence to its parent (the
    /// parent's string is a prefix, so the same start is a valid witness).
    pub fn deposit_credit(&mut self, v: NodeId, fresh: StreamPos, counters: &mut OpCounters) {
        let mut cur = v;
        while cur != ROOT {
            counters.credit_steps += 1;
            let parent = self.parent(cur);
            if self.internal(cur).rep_pos < fresh {
                self.set_rep(cur, fresh);
            }
            let d = self.internal_mut(cur);
            if d.credit {
                d.credit = false;
                cur = parent;
            } else {
                d.credit = true;
                return;
            }
        }
    }

    /// Attaches a new leaf for `suffix_start` under `parent`, appends it to
    /// the eviction queue, and deposits a credit at `parent`.
    pub fn insert_leaf(
        &mut self,
        parent: NodeId,
        suffix_start: StreamPos,
        w: &WindowBuffer,
        counters: &mut OpCounters,
    ) -> NodeId {
        let branch = w.char_at(suffix_start + self.depth(parent));
        let leaf = self.alloc(
            Node {
                parent,
                first_char: branch,
                kind: Kind::Leaf(LeafData {
                    suffix_start,
                    queue_prev: None,
                    queue_next: None,
                }),
            },
            counters,
        );
        self.add_child(parent, branch, leaf);
        self.leaf_count += 1;
        self.queue_append(leaf);
        self.deposit_credit(parent, suffix_start, counters);
        leaf
    }

    /// Splits the incoming edge of `v`, inserting a new internal node at
    /// string depth `split_depth`. Its suffix link is left for the caller
    /// (the construction cascade) to resolve.
    pub fn split_edge(
        &mut self,
        v: NodeId,
        split_depth: u64,
        w: &WindowBuffer,
        counters: &mut OpCounters,
    ) -> NodeId {
        let parent = self.parent(v);
        assert!(
            self.depth(parent) < split_depth && split_depth < self.string_depth(v, w),
            "split depth {} outside open interval ({}, {})",
            split_depth,
            self.depth(parent),
            self.string_depth(v, w)
        );
        let upper_char = self.node(v).first_char;
        let lower_char = self.edge_char(v, split_depth, w);
        // Any occurrence of v's string witnesses the new node's string.
        let rep = match &self.node(v).kind {
            Kind::Leaf(d) => d.suffix_start,
            Kind::Internal(d) => d.rep_pos,
            Kind::Free { .. } => unreachable!(),
        };
        let mid = self.alloc(
            Node {
                parent,
                first_char: upper_char,
                kind: Kind::Internal(InternalData {
                    depth: split_depth,
                    children: vec![(lower_char, v)],
                    suffix_link: ROOT, // placeholder until the cascade resolves it
                    rep_pos: rep,
                    credit: false,
                    armed_at: rep,
                }),
            },
            counters,
        );
        self.arm_expiry_check(mid, rep);
        self.rebind_child(parent, upper_char, mid);
        let lower = self.node_mut(v);
        lower.parent = mid;
        lower.first_char = lower_char;
        self.internal_count += 1;
        mid
    }

    /// Removes a unary internal node, fusing its incoming and outgoing edges.
    /// Returns the surviving child. A waiting credit percolates to the parent.
    pub fn merge_unary(&mut self, v: NodeId, counters: &mut OpCounters) -> NodeId {
        assert!(v != ROOT, "cannot merge the root");
        let d = self.internal(v);
        assert!(d.children.len() == 1, "merge_unary on node with {} children", d.children.len());
        let survivor = d.children[0].1;
        let had_credit = d.credit;
        let rep = d.rep_pos;
        let parent = self.parent(v);
        let edge_char = self.node(v).first_char;
        self.rebind_child(parent, edge_char, survivor);
        let s = self.node_mut(survivor);
        s.parent = parent;
        s.first_char = edge_char;
        self.internal_count -= 1;
        self.release(v, counters);
        if had_credit {
            self.deposit_credit(parent, rep, counters);
        }
        survivor
    }

    /// Detaches a leaf from the tree and the queue and frees it.
    /// Structural repair of the parent is the caller's job.
    pub fn remove_leaf(&mut self, leaf: NodeId, counters: &mut OpCounters) {
        let parent = self.parent(leaf);
        let branch = self.node(leaf).first_char;
        self.remove_child(parent, branch);
        self.queue_detach(leaf);
        self.leaf_count -= 1;
        self.release(leaf, counters);
    }

    pub fn leaf_suffix_start(&self, leaf: NodeId) -> StreamPos {
        self.leaf(leaf).suffix_start
    }

    /// Re-labels a leaf to carry a different (younger) suffix and moves it to
    /// the queue tail.
    pub fn relabel_leaf(&mut self, leaf: NodeId, suffix_start: StreamPos) {
        self.queue_detach(leaf);
        self.leaf_mut(leaf).suffix_start = suffix_start;
        self.queue_append(leaf);
    }

    fn queue_append(&mut self, leaf: NodeId) {
        if let Some(tail) = self.queue_tail {
            debug_assert!(
                self.leaf(tail).suffix_start < self.leaf(leaf).suffix_start,
                "queue order violated on append"
            );
            self.leaf_mut(tail).queue_next = Some(leaf);
            self.leaf_mut(leaf).queue_prev = Some(tail);
            self.leaf_mut(leaf).queue_next = None;
            self.queue_tail = Some(leaf);
        } else {
            self.leaf_mut(leaf).queue_prev = None;
            self.leaf_mut(leaf).queue_next = None;
            self.queue_head = Some(leaf);
            self.queue_tail = Some(leaf);
        }
    }

    fn queue_detach(&mut self, leaf: NodeId) {
        let (prev, next) = {
            let d = self.leaf(leaf);
            (d.queue_prev, d.queue_next)
        };
        match prev {
            Some(p) => self.leaf_mut(p).queue_next = next,
            None => self.queue_head = next,
        }
        match next {
            Some(nx) => self.leaf_mut(nx).queue_prev = prev,
            None => self.queue_tail = prev,
        }
        let d = self.leaf_mut(leaf);
        d.queue_prev = None;
        d.queue_next = None;
    }

    /// All live node ids, root first (arena order). Test and audit helper.
    pub fn live_nodes(&self) -> Vec<NodeId> {
        (0..self.nodes.len() as u32)
            .map(NodeId)
            .filter(|&v| !matches!(self.node(v).kind, Kind::Free { .. }))
            .collect()
    }

    /// Fault injection for audit tests.
    #[cfg(test)]
    pub(crate) fn corrupt_first_char_for_test(&mut self, v: NodeId, c: u8) {
        self.node_mut(v).first_char = c;
    }
}
