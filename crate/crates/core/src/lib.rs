//! An online substring index over a sliding window of a byte stream.
//!
//! [`WindowIndex`] maintains a suffix tree of the most recent `capacity`
//! bytes. [`WindowIndex::find`] reports every occurrence position of a query
//! in the current window in time proportional to the query length plus the
//! number of occurrences; [`WindowIndex::shift`] appends one byte and (once
//! the window is full) evicts the oldest one in amortized constant
//! structural work.
//!
//! Positions are absolute stream offsets: they never change as the window
//! slides, only expire.
//!
//! ```
//! use slidetree::WindowIndex;
//!
//! let mut idx = WindowIndex::new(8);
//! for &c in b"abcabdab" {
//!     idx.shift(c);
//! }
//! assert_eq!(idx.find(b"ab").positions, vec![0, 3, 6]);
//! ```

pub mod ancestry;
mod build;
mod node;
pub mod oracle;
mod query;
mod slide;
mod window;

pub use ancestry::AncestryForest;
pub use node::{ActivePoint, NodeId};
pub use query::QueryResult;
pub use window::{StreamPos, WindowBuffer};

use node::{Tree, ROOT};

/// Cumulative structural work counters, for amortized-cost reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub node_creations: u64,
    pub node_deletions: u64,
    pub rescan_hops: u64,
    pub credit_steps: u64,
    pub marker_ops: u64,
    pub expanding_iters: u64,
    pub buffering_steps: u64,
}

impl OpCounters {
    /// Total structural operations: creations, deletions, rescan hops,
    /// credit propagations and marker operations.
    pub fn structural_total(&self) -> u64 {
        self.node_creations
            + self.node_deletions
            + self.rescan_hops
            + self.credit_steps
            + self.marker_ops
    }

    /// Construction-automaton work: expanding iterations, buffering steps
    /// and rescan hops.
    pub fn automaton_total(&self) -> u64 {
        self.expanding_iters + self.buffering_steps + self.rescan_hops
    }
}

/// Suffix-tree index over the most recent `capacity` bytes of a stream.
#[derive(Debug)]
pub struct WindowIndex {
    pub(crate) win: window::WindowBuffer,
    pub(crate) tree: Tree,
    pub(crate) active: ActivePoint,
    pub(crate) links: AncestryForest,
    pub(crate) counters: OpCounters,
}

impl WindowIndex {
    pub fn new(capacity: usize) -> Self {
        WindowIndex {
            win: window::WindowBuffer::new(capacity),
            tree: Tree::new(capacity),
            active: ActivePoint::at_root(),
            links: AncestryForest::new(ROOT),
            counters: OpCounters::default(),
        }
    }

    /// Total bytes consumed from the stream.
    pub fn n(&self) -> StreamPos {
        self.win.n()
    }

    /// Absolute position of the oldest indexed byte.
    pub fn start(&self) -> StreamPos {
        self.win.start()
    }

    pub fn capacity(&self) -> usize {
        self.win.capacity()
    }

    /// Number of currently indexed bytes.
    pub fn window_len(&self) -> usize {
        self.win.len()
    }

    /// Length of the unfinalized buffer (the longest repeated suffix).
    pub fn buffer_len(&self) -> u64 {
        self.active.buffer_len
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count
    }

    /// Internal nodes, excluding the root.
    pub fn internal_count(&self) -> usize {
        self.tree.internal_count
    }

    /// The currently indexed bytes, oldest first.
    pub fn contents(&self) -> Vec<u8> {
        self.win.contents()
    }

    /// Snapshot of the cumulative structural work counters.
    pub fn op_counters(&self) -> OpCounters {
        let mut c = self.counters;
        c.marker_ops = self.links.marker_ops;
        c
    }

    /// When the unfinalized buffer ends on a leaf edge, the window tail from
    /// that leaf's stored suffix onward is periodic. Returns the leaf's
    /// suffix start and the period.
    pub fn active_leaf_period(&self) -> Option<(StreamPos, u64)> {
        if self.active.buffer_len > 0 && self.tree.is_leaf(self.active.node) {
            let x = self.tree.leaf_suffix_start(self.active.node);
            Some((x, (self.win.n() - self.active.buffer_len) - x))
        } else {
            None
        }
    }
}
