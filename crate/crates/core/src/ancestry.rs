//! The suffix-links tree with ancestor tests by Euler-interval enclosure.
//!
//! Every internal node of the suffix tree (including the root) owns an
//! `in`/`out` marker pair in one ordered list; a node's markers strictly
//! enclose exactly the markers of its descendants. `is_ancestor` is two label
//! comparisons and `link_distance` a depth subtraction.
//!
//! The ordered list is a labeled linked list over `u64` tags. An insertion
//! into a gap of width < 2 evenly redistributes the smallest run of `j`
//! successors whose label span exceeds `j²` (amortized logarithmic
//! relabeling; in measured replays relabels are a vanishing fraction of
//! marker operations; see the crate stats counters).

use crate::node::NodeId;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Cell {
    label: u64,
    prev: u32,
    next: u32,
    /// Owning node and marker side, for audits.
    owner: NodeId,
    is_in: bool,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    cell_in: u32,
    cell_out: u32,
    link_depth: u32,
}

#[derive(Debug)]
pub struct AncestryForest {
    cells: Vec<Cell>,
    free: Vec<u32>,
    head: u32,
    tail: u32,
    entries: Vec<Option<Entry>>,
    /// Marker insertions + deletions + relabel moves.
    pub marker_ops: u64,
}

impl AncestryForest {
    /// Creates the forest with `root` as the sole member.
    pub fn new(root: NodeId) -> Self {
        let mut f = AncestryForest {
            cells: Vec::new(),
            free: Vec::new(),
            head: NIL,
            tail: NIL,
            entries: Vec::new(),
            marker_ops: 0,
        };
        f.head = f.alloc_cell(Cell { label: 0, prev: NIL, next: NIL, owner: root, is_in: false });
        f.tail = f.alloc_cell(Cell {
            label: u64::MAX,
            prev: f.head,
            next: NIL,
            owner: root,
            is_in: false,
        });
        f.cells[f.head as usize].next = f.tail;
        let cell_in = f.insert_after(f.head, root, true);
        let cell_out = f.insert_after(cell_in, root, false);
        f.set_entry(root, Entry { cell_in, cell_out, link_depth: 0 });
        f
    }

    fn alloc_cell(&mut self, cell: Cell) -> u32 {
        match self.free.pop() {
            Some(i) => {
                self.cells[i as usize] = cell;
                i
            }
            None => {
                self.cells.push(cell);
                (self.cells.len() - 1) as u32
            }
        }
    }

    fn set_entry(&mut self, node: NodeId, entry: Entry) {
        let i = node.index();
        if i >= self.entries.len() {
            self.entries.resize(i + 1, None);
        }
        assert!(self.entries[i].is_none(), "node {:?} attached twice", node);
        self.entries[i] = Some(entry);
    }

    fn entry(&self, node: NodeId) -> Entry {
        self.entries
            .get(node.index())
            .copied()
            .flatten()
            .unwrap_or_else(|| panic!("node {:?} is not in the suffix-links tree", node))
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.entries.get(node.index()).copied().flatten().is_some()
    }

    pub fn link_depth(&self, node: NodeId) -> u32 {
        self.entry(node).link_depth
    }

    /// Inserts a new cell immediately after `at`, relabeling locally if the
    /// gap is exhausted.
    fn insert_after(&mut self, at: u32, owner: NodeId, is_in: bool) -> u32 {
        loop {
            let next = self.cells[at as usize].next;
            debug_assert!(next != NIL, "insert after the tail sentinel");
            let lo = self.cells[at as usize].label;
            let hi = self.cells[next as usize].label;
            if hi - lo >= 2 {
                let cell = self.alloc_cell(Cell {
                    label: lo + (hi - lo) / 2,
                    prev: at,
                    next,
                    owner,
                    is_in,
                });
                self.cells[at as usize].next = cell;
                self.cells[next as usize].prev = cell;
                self.marker_ops += 1;
                return cell;
            }
            self.make_room_after(at);
        }
    }

    /// Evenly redistributes the smallest run of successors of `at` whose
    /// label span exceeds the square of its length.
    fn make_room_after(&mut self, at: u32) {
        let base = self.cells[at as usize].label;
        let mut run: Vec<u32> = Vec::new();
        let mut cur = self.cells[at as usize].next;
        loop {
            debug_assert!(cur != NIL);
            run.push(cur);
            let j = run.len() as u128;
            let span = (self.cells[cur as usize].label - base) as u128;
            if span > j * j {
                break;
            }
            cur = self.cells[cur as usize].next;
        }
        let j = run.len() as u128;
        let span = (self.cells[*run.last().unwrap() as usize].label - base) as u128;
        // Spread the first j-1 cells; the j-th keeps its label.
        for (k, &cell) in run.iter().enumerate().take(run.len() - 1) {
            let offset = (span * (k as u128 + 1) / j) as u64;
            self.cells[cell as usize].label = base + offset;
            self.marker_ops += 1;
        }
    }

    fn unlink(&mut self, cell: u32) {
        let Cell { prev, next, .. } = self.cells[cell as usize];
        self.cells[prev as usize].next = next;
        self.cells[next as usize].prev = prev;
        self.free.push(cell);
        self.marker_ops += 1;
    }

    /// Inserts a construction-cascade chain top-down: the last created node
    /// attaches under `parent`, each earlier node under its successor. Marker
    /// pairs are placed immediately inside the parent's in-marker.
    pub fn attach_chain(&mut self, parent: NodeId, chain: &[NodeId]) {
        let mut p = parent;
        for &node in chain.iter().rev() {
            let pe = self.entry(p);
            let cell_in = self.insert_after(pe.cell_in, node, true);
            let cell_out = self.insert_after(cell_in, node, false);
            self.set_entry(node, Entry { cell_in, cell_out, link_depth: pe.link_depth + 1 });
            p = node;
        }
    }

    /// Removes a node that has no descendants in the suffix-links tree.
    ///
    /// The no-descendant precondition is asserted: a violation would mean a
    /// suffix link still terminates at the node, and silently relinking would
    /// corrupt every later ancestor query.
    pub fn remove_leaf(&mut self, node: NodeId) {
        let e = self.entry(node);
        assert!(
            self.cells[e.cell_in as usize].next == e.cell_out,
            "removing {:?} which still has suffix-link children",
            node
        );
        self.unlink(e.cell_in);
        self.unlink(e.cell_out);
        self.entries[node.index()] = None;
    }

    /// True iff `a == b` or `a`'s interval encloses `b`'s, i.e. `a` is
    /// reachable from `b` by following suffix links.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let ea = self.entry(a);
        let eb = self.entry(b);
        let label = |c: u32| self.cells[c as usize].label;
        label(ea.cell_in) <= label(eb.cell_in) && label(eb.cell_out) <= label(ea.cell_out)
    }

    /// Number of suffix-link hops from `b` up to `a`. Requires
    /// `is_ancestor(a, b)`.
    pub fn link_distance(&self, a: NodeId, b: NodeId) -> u32 {
        debug_assert!(self.is_ancestor(a, b), "link_distance on non-ancestor pair");
        self.entry(b).link_depth - self.entry(a).link_depth
    }

    /// Marker stream in list order, for nesting audits: (owner, is_in, label).
    pub fn marker_walk(&self) -> Vec<(NodeId, bool, u64)> {
        let mut out = Vec::new();
        let mut cur = self.cells[self.head as usize].next;
        while cur != self.tail {
            let c = &self.cells[cur as usize];
            out.push((c.owner, c.is_in, c.label));
            cur = c.next;
        }
        out
    }
}
