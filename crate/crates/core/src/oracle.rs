//! Independent brute-force references used by every derived test value and
//! by the structural audit.
//!
//! The pure functions here operate on extracted window content only, never on
//! the index structures, so they stay valid checks of those structures.

use crate::node::{NodeId, ROOT};
use crate::window::StreamPos;
use crate::WindowIndex;

/// Every 0-based offset where `q` occurs in `text`, by direct comparison.
pub fn naive_find(text: &[u8], q: &[u8]) -> Vec<usize> {
    assert!(!q.is_empty(), "empty query");
    if q.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - q.len()).filter(|&s| &text[s..s + q.len()] == q).collect()
}

/// Length of the longest proper suffix of `text` that also occurs starting
/// at an earlier position; 0 if none does.
pub fn naive_longest_repeated_suffix(text: &[u8]) -> usize {
    for b in (1..text.len()).rev() {
        let suffix = &text[text.len() - b..];
        if (0..text.len() - b).any(|s| &text[s..s + b] == suffix) {
            return b;
        }
    }
    0
}

/// Canonical (sorted child order) encoding of a suffix tree, used as the
/// isomorphism reference.
#[derive(Debug, PartialEq, Eq)]
pub enum CanonTree {
    Leaf { suffix_start: usize },
    Branch { depth: usize, children: Vec<(u8, CanonTree)> },
}

/// Suffix tree of `text` over all suffixes except the `implicit_count`
/// shortest ones, built by direct quadratic grouping.
///
/// `implicit_count` must equal `naive_longest_repeated_suffix(text)`; that
/// makes the stored suffixes pairwise prefix-free, so no terminator byte is
/// needed.
pub fn naive_suffix_tree(text: &[u8], implicit_count: usize) -> CanonTree {
    assert!(implicit_count <= text.len());
    let starts: Vec<usize> = (0..text.len() - implicit_count).collect();
    CanonTree::Branch { depth: 0, children: group_children(text, &starts, 0) }
}

fn group_children(text: &[u8], starts: &[usize], depth: usize) -> Vec<(u8, CanonTree)> {
    let mut groups: Vec<(u8, Vec<usize>)> = Vec::new();
    for &s in starts {
        assert!(s + depth < text.len(), "stored suffix exhausted: suffixes not prefix-free");
        let c = text[s + depth];
        match groups.iter_mut().find(|(ch, _)| *ch == c) {
            Some((_, g)) => g.push(s),
            None => groups.push((c, vec![s])),
        }
    }
    groups.sort_by_key(|&(c, _)| c);
    groups
        .into_iter()
        .map(|(c, group)| (c, build_node(text, &group, depth + 1)))
        .collect()
}

fn build_node(text: &[u8], starts: &[usize], mut depth: usize) -> CanonTree {
    if starts.len() == 1 {
        return CanonTree::Leaf { suffix_start: starts[0] };
    }
    // Extend the shared prefix until the group branches.
    loop {
        for &s in starts {
            assert!(s + depth < text.len(), "stored suffix exhausted: suffixes not prefix-free");
        }
        let c = text[starts[0] + depth];
        if starts.iter().any(|&s| text[s + depth] != c) {
            break;
        }
        depth += 1;
    }
    CanonTree::Branch { depth, children: group_children(text, starts, depth) }
}

impl WindowIndex {
    /// Exports the live tree in the canonical form, with window-relative
    /// leaf positions.
    pub fn to_canonical(&self) -> CanonTree {
        self.canon_node(ROOT)
    }

    fn canon_node(&self, v: NodeId) -> CanonTree {
        if self.tree.is_leaf(v) {
            CanonTree::Leaf {
                suffix_start: (self.tree.leaf_suffix_start(v) - self.win.start()) as usize,
            }
        } else {
            let d = self.tree.internal(v);
            CanonTree::Branch {
                depth: d.depth as usize,
                children: d.children.iter().map(|&(c, ch)| (c, self.canon_node(ch))).collect(),
            }
        }
    }

    /// Runs every structural invariant; an empty report is a pass.
    pub fn audit(&self) -> Vec<String> {
        let mut report = Vec::new();
        let n = self.win.n();
        let start = self.win.start();
        let window_len = self.win.len() as u64;
        let live = self.tree.live_nodes();

        // Reachability walk, child-table and per-node shape checks.
        let mut reachable = std::collections::HashSet::new();
        let mut stack = vec![ROOT];
        let mut seen_leaves = 0usize;
        let mut seen_internal = 0usize;
        while let Some(v) = stack.pop() {
            if !reachable.insert(v) {
                report.push(format!("node {:?} reached twice", v));
                continue;
            }
            if self.tree.is_leaf(v) {
                seen_leaves += 1;
                let s = self.tree.leaf_suffix_start(v);
                if s < start || s >= n {
                    report.push(format!("leaf {:?} stores expired suffix {}", v, s));
                }
                continue;
            }
            if v != ROOT {
                seen_internal += 1;
            }
            let d = self.tree.internal(v);
            if v != ROOT && d.children.len() < 2 {
                report.push(format!("internal node {:?} has {} children", v, d.children.len()));
            }
            for pair in d.children.windows(2) {
                if pair[0].0 >= pair[1].0 {
                    report.push(format!("child table of {:?} not strictly sorted", v));
                }
            }
            for &(c, child) in &d.children {
                if self.tree.node(child).first_char != c {
                    report.push(format!(
                        "child key {:?} under {:?} disagrees with first_char of {:?}",
                        c as char, v, child
                    ));
                }
                if self.tree.parent(child) != v {
                    report.push(format!("parent pointer of {:?} is not {:?}", child, v));
                }
                if !self.tree.is_leaf(child) && self.tree.depth(child) <= d.depth {
                    report.push(format!("depth not increasing from {:?} to {:?}", v, child));
                }
                stack.push(child);
            }
        }
        if reachable.len() != live.len() {
            report.push(format!(
                "{} live arena slots but {} reachable nodes",
                live.len(),
                reachable.len()
            ));
        }
        if seen_leaves != self.tree.leaf_count || seen_internal != self.tree.internal_count {
            report.push("node counters disagree with reachability walk".to_string());
        }

        // Leaf queue: complete, strictly increasing, head at the oldest.
        let mut queue_len = 0usize;
        let mut prev: Option<StreamPos> = None;
        let mut cur = self.tree.queue_head;
        while let Some(v) = cur {
            queue_len += 1;
            let s = self.tree.leaf_suffix_start(v);
            if let Some(p) = prev {
                if p >= s {
                    report.push(format!("queue order violated at leaf {:?}", v));
                }
            }
            prev = Some(s);
            cur = self.tree.leaf(v).queue_next;
        }
        if queue_len != self.tree.leaf_count {
            report.push(format!(
                "queue holds {} leaves, tree has {}",
                queue_len, self.tree.leaf_count
            ));
        }

        // Exactly buffer_len suffixes are implicit.
        let b = self.active.buffer_len;
        if self.tree.leaf_count as u64 + b != window_len {
            report.push(format!(
                "leaf count {} + buffer {} != window length {}",
                self.tree.leaf_count, b, window_len
            ));
        }

        // Representative freshness and content, suffix-link rule.
        for &v in &live {
            if v == ROOT || self.tree.is_leaf(v) {
                continue;
            }
            let d = self.tree.internal(v);
            if d.rep_pos < start || d.rep_pos + d.depth > n {
                report.push(format!(
                    "stale rep {} (+{}) on {:?}, window [{}, {})",
                    d.rep_pos, d.depth, v, start, n
                ));
            } else {
                let wit = self.tree.witness(v);
                let spelled = self.win.extract(wit, wit + d.depth);
                if !self.win.substring_equals(d.rep_pos, &spelled) {
                    report.push(format!("rep of {:?} does not spell the node's string", v));
                }
            }
            let link = d.suffix_link;
            if self.tree.is_leaf(link) {
                report.push(format!("suffix link of {:?} points at a leaf", v));
                continue;
            }
            let link_depth = self.tree.depth(link);
            if link_depth + 1 != d.depth {
                report.push(format!(
                    "suffix link of {:?} drops depth {} -> {}",
                    v, d.depth, link_depth
                ));
            } else {
                let wit = self.tree.witness(v);
                let tail = self.win.extract(wit + 1, wit + d.depth);
                let link_wit = self.tree.witness(link);
                if !self.win.substring_equals(link_wit, &tail) {
                    report.push(format!("suffix link of {:?} spells the wrong string", v));
                }
            }
        }

        // Suffix-links tree: membership, nesting, parents, link depths.
        for &v in &live {
            let internal = !self.tree.is_leaf(v);
            if internal != self.links.contains(v) {
                report.push(format!("ancestry membership wrong for {:?}", v));
            }
        }
        let walk = self.links.marker_walk();
        for pair in walk.windows(2) {
            if pair[0].2 >= pair[1].2 {
                report.push("marker labels not strictly increasing".to_string());
            }
        }
        let mut open: Vec<NodeId> = Vec::new();
        for &(owner, is_in, _) in &walk {
            if is_in {
                let expected_parent = open.last().copied();
                if owner != ROOT {
                    let link = self.tree.suffix_link(owner);
                    if expected_parent != Some(link) {
                        report.push(format!(
                            "ancestry parent of {:?} is {:?}, suffix link says {:?}",
                            owner, expected_parent, link
                        ));
                    }
                    let want_depth = expected_parent
                        .map(|p| self.links.link_depth(p) + 1)
                        .unwrap_or(u32::MAX);
                    if self.links.link_depth(owner) != want_depth {
                        report.push(format!("link depth of {:?} inconsistent", owner));
                    }
                } else if expected_parent.is_some() {
                    report.push("root marker nested inside another node".to_string());
                }
                open.push(owner);
            } else {
                match open.pop() {
                    Some(top) if top == owner => {}
                    _ => report.push(format!("marker nesting broken at {:?}", owner)),
                }
            }
        }
        if !open.is_empty() {
            report.push("unclosed markers at end of list".to_string());
        }

        // Active point shape and content.
        let beta = self.active.node;
        if b == 0 {
            if beta != ROOT {
                report.push("empty buffer but active node is not the root".to_string());
            }
        } else if window_len == 0 {
            report.push("nonempty buffer in an empty window".to_string());
        } else {
            if b >= window_len {
                report.push(format!("buffer {} not a proper suffix of window {}", b, window_len));
            }
            let parent_depth = self.tree.depth(self.tree.parent(beta));
            let beta_depth = self.tree.string_depth(beta, &self.win);
            let lower_ok = parent_depth < b;
            let upper_ok =
                if self.tree.is_leaf(beta) { b < beta_depth } else { b <= beta_depth };
            if !lower_ok || !upper_ok {
                report.push(format!(
                    "active point ({:?}, {}) outside edge interval ({}, {}]",
                    beta, b, parent_depth, beta_depth
                ));
            }
            let wit = self.tree.witness(beta);
            let buffer = self.win.extract(n - b, n);
            if !self.win.substring_equals(wit, &buffer) {
                report.push("buffer is not a prefix of the active node's string".to_string());
            }
            if self.tree.is_leaf(beta) {
                // Periodicity of the window tail (the pumping argument).
                let x = self.tree.leaf_suffix_start(beta);
                let p = (n - b) - x;
                for j in x..n.saturating_sub(p) {
                    if self.win.char_at(j) != self.win.char_at(j + p) {
                        report.push(format!(
                            "window tail not {}-periodic from {} at {}",
                            p, x, j
                        ));
                        break;
                    }
                }
            }
        }

        // Oracle cross-checks on the extracted content.
        let content = self.win.contents();
        let lrs = naive_longest_repeated_suffix(&content);
        if b != lrs as u64 {
            report.push(format!("buffer length {} but longest repeated suffix {}", b, lrs));
        } else if self.to_canonical() != naive_suffix_tree(&content, lrs) {
            report.push("tree is not isomorphic to the reference suffix tree".to_string());
        }

        report
    }
}
