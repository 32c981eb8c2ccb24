use core::fmt;

use crate::graph::{EdgeLabel, VertexId, VertexLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventOp {
    Add {
        label_u: VertexLabel,
        label_v: VertexLabel,
        label_e: EdgeLabel,
    },
    Delete,
}

/// One update of the edge stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamEvent {
    pub seq: u64,
    pub u: VertexId,
    pub v: VertexId,
    pub op: EventOp,
}

impl StreamEvent {
    pub fn add(
        seq: u64,
        u: VertexId,
        label_u: VertexLabel,
        v: VertexId,
        label_v: VertexLabel,
        label_e: EdgeLabel,
    ) -> Self {
        StreamEvent {
            seq,
            u,
            v,
            op: EventOp::Add {
                label_u,
                label_v,
                label_e,
            },
        }
    }

    pub fn delete(seq: u64, u: VertexId, v: VertexId) -> Self {
        StreamEvent {
            seq,
            u,
            v,
            op: EventOp::Delete,
        }
    }

    pub fn is_add(&self) -> bool {
        matches!(self.op, EventOp::Add { .. })
    }
}

/// Wire format: `+ u label_u v label_v label_e` or `- u v`.
impl fmt::Display for StreamEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            EventOp::Add {
                label_u,
                label_v,
                label_e,
            } => write!(f, "+ {} {} {} {} {}", self.u, label_u, self.v, label_v, label_e),
            EventOp::Delete => write!(f, "- {} {}", self.u, self.v),
        }
    }
}
