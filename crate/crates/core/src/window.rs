//! Ring buffer holding the live window of the stream.
//!
//! Every position handed out by this module is an absolute 0-based stream
//! position, never a window-relative offset. All character comparisons in the
//! crate go through here.

/// Absolute 0-based position in the (unbounded) input stream.
pub type StreamPos = u64;

/// Ring buffer mapping absolute stream positions to bytes for the live window.
///
/// Allocates `capacity + 1` cells: a shift appends the new byte before the
/// oldest one is evicted, so the retained range transiently holds
/// `capacity + 1` bytes.
#[derive(Debug, Clone)]
pub struct WindowBuffer {
    cells: Box<[u8]>,
    capacity: usize,
    /// Total bytes pushed so far; the next push gets this position.
    n: StreamPos,
    /// Position of the oldest retained byte.
    start: StreamPos,
}

impl WindowBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "window capacity must be at least 1");
        WindowBuffer {
            cells: vec![0u8; capacity + 1].into_boxed_slice(),
            capacity,
            n: 0,
            start: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Total number of bytes pushed so far.
    pub fn n(&self) -> StreamPos {
        self.n
    }

    /// Position of the oldest retained byte.
    pub fn start(&self) -> StreamPos {
        self.start
    }

    /// Number of retained bytes (`n - start`).
    pub fn len(&self) -> usize {
        (self.n - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == self.start
    }

    fn slot(&self, p: StreamPos) -> usize {
        (p % (self.capacity as u64 + 1)) as usize
    }

    /// Appends a byte and returns its assigned position.
    ///
    /// Pushing while the buffer already retains `capacity + 1` bytes would
    /// overwrite a cell that has not been evicted yet; that is a logic fault.
    pub fn push(&mut self, c: u8) -> StreamPos {
        assert!(
            self.len() <= self.capacity,
            "push would overwrite an unevicted cell (retained {} of capacity {})",
            self.len(),
            self.capacity
        );
        let pos = self.n;
        let slot = self.slot(pos);
        self.cells[slot] = c;
        self.n += 1;
        pos
    }

    /// The byte pushed at position `p`. `p` must still be retained.
    pub fn char_at(&self, p: StreamPos) -> u8 {
        assert!(
            p >= self.start && p < self.n,
            "position {} outside live window [{}, {})",
            p,
            self.start,
            self.n
        );
        self.cells[self.slot(p)]
    }

    /// True iff the retained bytes at `p..p + s.len()` equal `s`.
    pub fn substring_equals(&self, p: StreamPos, s: &[u8]) -> bool {
        assert!(
            p >= self.start && p + s.len() as u64 <= self.n,
            "range [{}, {}) escapes live window [{}, {})",
            p,
            p + s.len() as u64,
            self.start,
            self.n
        );
        s.iter()
            .enumerate()
            .all(|(i, &c)| self.cells[self.slot(p + i as u64)] == c)
    }

    /// Drops the oldest retained byte; returns the new start.
    pub fn advance_start(&mut self) -> StreamPos {
        assert!(self.n > self.start, "advance_start on empty window");
        self.start += 1;
        self.start
    }

    /// Copies the retained bytes in `[lo, hi)` out of the ring.
    pub fn extract(&self, lo: StreamPos, hi: StreamPos) -> Vec<u8> {
        assert!(
            lo >= self.start && hi <= self.n && lo <= hi,
            "range [{}, {}) escapes live window [{}, {})",
            lo,
            hi,
            self.start,
            self.n
        );
        (lo..hi).map(|p| self.cells[self.slot(p)]).collect()
    }

    /// The whole live window content, oldest byte first.
    pub fn contents(&self) -> Vec<u8> {
        self.extract(self.start, self.n)
    }
}
