//! Frequent subgraph pattern estimation over evolving labeled graphs.
//!
//! The crate maintains a uniform fixed-size sample of connected `k`-vertex
//! induced subgraphs while edges are inserted into and deleted from a labeled
//! graph, and reports the patterns (isomorphism classes) whose estimated
//! frequency clears a threshold. The engines share one interface:
//!
//! * exact counting of every pattern ([`engine::Mode::Exact`]),
//! * a subgraph reservoir fed one new subgraph at a time, using random
//!   pairing once deletions occur ([`engine::Mode::Sr`]),
//! * the same reservoir driven by skip counters so that new subgraphs are
//!   counted rather than listed ([`engine::Mode::Osr`]), optionally with the
//!   counts themselves estimated from bottom-k neighborhood sketches.
//!
//! ```
//! use evofreq_core::{Engine, EngineConfig, Mode, StreamEvent};
//!
//! let mut engine = Engine::new(EngineConfig {
//!     mode: Mode::Osr,
//!     sample_size: Some(100),
//!     tau: 0.3,
//!     seed: 7,
//!     ..EngineConfig::default()
//! })
//! .unwrap();
//! engine.process_event(&StreamEvent::add(0, 1, 0, 2, 0, 0)).unwrap();
//! engine.process_event(&StreamEvent::add(1, 2, 0, 3, 1, 0)).unwrap();
//! engine.process_event(&StreamEvent::add(2, 1, 0, 3, 1, 0)).unwrap();
//! engine.process_event(&StreamEvent::delete(3, 1, 2)).unwrap();
//! assert_eq!(engine.population(), 1);
//! for (pattern, p) in engine.report_frequent().entries {
//!     println!("{pattern}\t{p:.3}");
//! }
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. File formats, stream
//! generation and the command-line driver live in the `evofreq-stream` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod event;
pub mod exploration;
pub mod graph;
pub mod pattern;
pub mod rng;
pub mod sampling;
pub mod sketch;

pub use engine::{
    recommended_sample_size, Engine, EngineConfig, EventStats, FrequencyEstimate, FrequentReport,
    Metrics, Mode, WMode,
};
pub use error::{Error, Result};
pub use event::{EventOp, StreamEvent};
pub use graph::{DynamicLabeledGraph, EdgeLabel, SubgraphInstance, VertexId, VertexLabel};
pub use pattern::{canonical_key, count_patterns, PatternKey, PatternUniverse};
pub use sampling::{skip_rp, skip_rs, SubgraphReservoir};
pub use sketch::{BottomKSketch, VertexHasher};

pub(crate) type FxHashMap<K, V> = hashbrown::HashMap<K, V, rustc_hash::FxBuildHasher>;
pub(crate) type FxHashSet<K> = hashbrown::HashSet<K, rustc_hash::FxBuildHasher>;
