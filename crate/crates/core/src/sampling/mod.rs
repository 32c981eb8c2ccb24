//! The uniform subgraph sample and its skip-counter generators.

mod reservoir;
pub mod skip;

pub use reservoir::{Placement, SubgraphReservoir};
pub use skip::{skip_rp, skip_rp_sequential, skip_rs, skip_rs_rejection, skip_rs_sequential};
