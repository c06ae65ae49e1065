//! All-occurrence substring queries: blind PATRICIA descent plus one
//! verification, finalized-leaf collection, and the buffer cases.

use crate::node::{NodeId, ROOT};
use crate::window::StreamPos;
use crate::WindowIndex;

/// Sorted absolute occurrence positions plus work counters.
#[derive(Debug, Clone, Default)]
pub struct QueryResult {
    /// Ascending absolute stream positions of every occurrence.
    pub positions: Vec<StreamPos>,
    /// Nodes entered during descent and subtree collection.
    pub visited_nodes: u64,
    /// Ancestor tests against the active node.
    pub link_checks: u64,
    /// Bytes compared or copied while verifying and scanning.
    pub scan_chars: u64,
}

/// Lower node of the edge (or the exact node) where navigating the query
/// ended.
struct Locus {
    node: NodeId,
}

struct Collected {
    leaf_starts: Vec<StreamPos>,
    internal_nodes: Vec<NodeId>,
}

impl WindowIndex {
    /// Returns every position whose window substring equals `q`.
    ///
    /// Descent is blind (branch bytes and skips only), so a located subtree
    /// is verified against one witness leaf before anything is emitted; a
    /// failed verification means the query occurs nowhere in the window,
    /// buffer included.
    pub fn find(&self, q: &[u8]) -> QueryResult {
        assert!(!q.is_empty(), "empty query");
        let mut result = QueryResult::default();
        let locus = match self.locate_locus(q, &mut result) {
            Some(l) => l,
            None => return result,
        };
        let collected = self.collect_finalized(&locus, &mut result);
        debug_assert!(!collected.leaf_starts.is_empty());
        result.scan_chars += q.len() as u64;
        if !self.win.substring_equals(collected.leaf_starts[0], q) {
            return result;
        }
        result.positions.extend_from_slice(&collected.leaf_starts);
        self.buffer_occurrences(&locus, &collected, q, &mut result);
        result.positions.sort_unstable();
        debug_assert!(
            result.positions.windows(2).all(|p| p[0] < p[1]),
            "duplicate occurrence emitted"
        );
        result
    }

    /// Blind descent: compares only the branch byte at each node and consumes
    /// skips. `None` means a missing branch, or the query running past a
    /// leaf's open end.
    fn locate_locus(&self, q: &[u8], result: &mut QueryResult) -> Option<Locus> {
        let qlen = q.len() as u64;
        let mut node = ROOT;
        let mut depth = 0u64;
        loop {
            let c = q[depth as usize];
            let child = self.tree.child(node, c)?;
            result.visited_nodes += 1;
            let child_depth = self.tree.string_depth(child, &self.win);
            if child_depth >= qlen {
                return Some(Locus { node: child });
            }
            if self.tree.is_leaf(child) {
                return None;
            }
            node = child;
            depth = child_depth;
        }
    }

    /// DFS below the locus: suffix starts of every leaf, and the internal
    /// nodes for the ancestor checks, in one pass.
    fn collect_finalized(&self, locus: &Locus, result: &mut QueryResult) -> Collected {
        let mut collected = Collected { leaf_starts: Vec::new(), internal_nodes: Vec::new() };
        let mut stack = vec![locus.node];
        while let Some(v) = stack.pop() {
            result.visited_nodes += 1;
            if self.tree.is_leaf(v) {
                collected.leaf_starts.push(self.tree.leaf_suffix_start(v));
            } else {
                collected.internal_nodes.push(v);
                for &(_, child) in self.tree.internal(v).children.iter().rev() {
                    stack.push(child);
                }
            }
        }
        collected
    }

    /// Occurrences that start inside the unfinalized buffer.
    fn buffer_occurrences(
        &self,
        locus: &Locus,
        collected: &Collected,
        q: &[u8],
        result: &mut QueryResult,
    ) {
        let b = self.active.buffer_len;
        let qlen = q.len() as u64;
        let n = self.win.n();
        if b < qlen {
            return;
        }
        if b == qlen {
            if self.active.node == locus.node {
                result.positions.push(n - b);
            }
            return;
        }
        let beta = self.active.node;
        if !self.tree.is_leaf(beta) {
            // The buffer's suffixes that start with the query correspond to
            // suffix-link ancestors of the active node inside the located
            // subtree; the hop count is the offset into the buffer.
            for &alpha in &collected.internal_nodes {
                result.link_checks += 1;
                if self.links.is_ancestor(alpha, beta) {
                    let i = self.links.link_distance(alpha, beta) as u64;
                    if i + qlen <= b {
                        result.positions.push(n - b + i);
                    }
                }
            }
            return;
        }

        // The active node is a leaf: the window tail from that leaf's suffix
        // onward is periodic, and buffer occurrences form arithmetic
        // progressions with the period as the difference.
        let x = self.tree.leaf_suffix_start(beta);
        let p = (n - b) - x;
        debug_assert!(p >= 1);
        #[cfg(debug_assertions)]
        self.assert_periodic(x, p);
        if p <= qlen {
            // Seed each residue class once from a short scan, then pump.
            let scan_len = b.min(p + qlen - 1);
            let text = self.win.extract(n - b, n - b + scan_len);
            result.scan_chars += scan_len + qlen;
            for y in linear_find(&text, q) {
                let y = y as u64;
                debug_assert!(y < p);
                let mut pos = y;
                while pos + qlen <= b {
                    result.positions.push(n - b + pos);
                    pos += p;
                }
            }
        } else {
            // Pump each finalized occurrence inside the period interval.
            for &z in &collected.leaf_starts {
                if z >= x && z < n - b {
                    let mut pos = z + p;
                    while pos + qlen <= n {
                        result.positions.push(pos);
                        pos += p;
                    }
                }
            }
        }
    }

    /// The executable form of the periodicity argument: the window bytes
    /// from `x` on repeat with period `p`.
    #[cfg(debug_assertions)]
    fn assert_periodic(&self, x: StreamPos, p: StreamPos) {
        let n = self.win.n();
        let mut j = x;
        while j + p < n {
            assert_eq!(
                self.win.char_at(j),
                self.win.char_at(j + p),
                "pumping failed: window not {}-periodic from {} at {}",
                p,
                x,
                j
            );
            j += 1;
        }
    }
}

/// KMP over a copied-out range; the internal subroutine for buffer scans.
fn linear_find(text: &[u8], pat: &[u8]) -> Vec<usize> {
    debug_assert!(!pat.is_empty());
    let m = pat.len();
    let mut lps = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pat[i] != pat[k] {
            k = lps[k - 1];
        }
        if pat[i] == pat[k] {
            k += 1;
        }
        lps[i] = k;
    }
    let mut out = Vec::new();
    let mut k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pat[k] {
            k = lps[k - 1];
        }
        if c == pat[k] {
            k += 1;
        }
        if k == m {
            out.push(i + 1 - m);
            k = lps[k - 1];
        }
    }
    out
}
