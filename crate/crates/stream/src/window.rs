//! Sliding-window driver: every edge lives for the next `W` insertions.

use std::collections::{HashSet, VecDeque};

use evofreq_core::{EventOp, StreamEvent, VertexId};

fn pair(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Turns an insertion-only stream into a fully dynamic one incrementally.
#[derive(Debug, Clone)]
pub struct WindowDriver {
    window: usize,
    /// One entry per insertion seen; `None` for insertions of an edge that
    /// was already live (they own nothing to expire).
    queue: VecDeque<Option<(VertexId, VertexId)>>,
    live: HashSet<(VertexId, VertexId)>,
    next_seq: u64,
}

impl WindowDriver {
    pub fn new(window: usize) -> Self {
        assert!(window >= 1, "window must hold at least one edge");
        WindowDriver {
            window,
            queue: VecDeque::new(),
            live: HashSet::new(),
            next_seq: 0,
        }
    }

    pub fn live_edges(&self) -> usize {
        self.live.len()
    }

    /// Events to emit for one insertion: the expiring deletion, if any, then
    /// the insertion itself. Sequence numbers are reassigned.
    ///
    /// # Panics
    /// On a deletion event; the input must be insertion-only.
    pub fn push(&mut self, event: StreamEvent) -> Vec<StreamEvent> {
        let EventOp::Add { .. } = event.op else {
            panic!("window input must not contain deletions");
        };
        let mut out = Vec::with_capacity(2);
        if self.queue.len() >= self.window {
            if let Some(Some((a, b))) = self.queue.pop_front() {
                if self.live.remove(&(a, b)) {
                    out.push(StreamEvent::delete(self.next_seq, a, b));
                    self.next_seq += 1;
                }
            }
        }
        let key = pair(event.u, event.v);
        self.queue
            .push_back(if self.live.insert(key) { Some(key) } else { None });
        out.push(StreamEvent {
            seq: self.next_seq,
            ..event
        });
        self.next_seq += 1;
        out
    }
}

/// Applies a window of `window` insertions to a whole insertion-only stream.
pub fn drive_window(events: &[StreamEvent], window: usize) -> Vec<StreamEvent> {
    let mut driver = WindowDriver::new(window);
    events.iter().flat_map(|&e| driver.push(e)).collect()
}
