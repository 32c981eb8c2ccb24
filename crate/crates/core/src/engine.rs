//! Exact counting and the sampling engines behind one event-driven interface.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use libm::{ceil, log};

use crate::error::{Error, Result};
use crate::event::{EventOp, StreamEvent};
use crate::exploration::{
    compute_d_approx, compute_d_exact, compute_w_approx, compute_w_exact, connected_without_pair, round_estimate,
    sample_new_subgraph, SketchStore,
};
use crate::graph::{DeleteOutcome, DynamicLabeledGraph, EdgeLabel, VertexId};
use crate::pattern::{count_patterns, PatternKey, DEFAULT_ENUMERATION_BUDGET, MAX_CANONICAL_K};
use crate::rng::{substream, StreamRng, Substream};
use crate::sampling::{skip_rp, skip_rs, Placement, SubgraphReservoir};
use crate::sketch::VertexHasher;
use crate::FxHashMap;

/// `M = ceil(ln(T_k / delta) * (4 + epsilon) / epsilon^2)`, at least 1.
pub fn recommended_sample_size(t_k: u64, epsilon: f64, delta: f64) -> usize {
    let m = ceil(log(t_k.max(1) as f64 / delta) * (4.0 + epsilon) / (epsilon * epsilon));
    if m.is_finite() && m >= 1.0 {
        m as usize
    } else {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Exact per-pattern counts.
    Exact,
    /// Subgraph reservoir fed every new subgraph.
    Sr,
    /// Subgraph reservoir driven by skip counters.
    Osr,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sr => "sr",
            Mode::Osr => "osr",
        }
    }
}

/// How the skip-counter engine learns how many subgraphs an event created or destroyed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WMode {
    Exact,
    Sketch,
}

/// What to do with a deletion of an edge that is not in the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MissingEdgePolicy {
    /// Leave everything unchanged and flag the event in its stats.
    Skip,
    Abort,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub k: usize,
    pub tau: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: Mode,
    /// Whether deletions are accepted.
    pub dynamic: bool,
    /// Overrides the sample size derived from `epsilon`, `delta` and the class count.
    pub sample_size: Option<usize>,
    /// Vertex and edge label alphabet sizes, used to count pattern classes.
    pub vertex_labels: u32,
    pub edge_labels: u32,
    pub w_mode: WMode,
    pub sketch_size: usize,
    pub seed: u64,
    pub missing_edge: MissingEdgePolicy,
    /// Exact mode: recount from scratch and compare every this many events.
    pub verify_every: Option<u64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            k: 3,
            tau: 0.1,
            epsilon: 0.01,
            delta: 0.1,
            mode: Mode::Osr,
            dynamic: true,
            sample_size: None,
            vertex_labels: 1,
            edge_labels: 1,
            w_mode: WMode::Exact,
            sketch_size: 64,
            seed: 0,
            missing_edge: MissingEdgePolicy::Skip,
            verify_every: None,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.k > MAX_CANONICAL_K {
            return Err(Error::UnsupportedK {
                k: self.k,
                min: 2,
                max: MAX_CANONICAL_K,
            });
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidConfig("tau must lie in (0, 1]"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig("epsilon must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig("delta must lie in (0, 1)"));
        }
        if self.sample_size == Some(0) {
            return Err(Error::InvalidConfig("sample size must be at least 1"));
        }
        if self.sketch_size < 2 {
            return Err(Error::InvalidConfig("sketch size must be at least 2"));
        }
        if self.verify_every == Some(0) {
            return Err(Error::InvalidConfig("verification interval must be positive"));
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.tau <= self.epsilon {
            out.push("tau <= epsilon: every class clears the reporting threshold");
        }
        if self.w_mode == WMode::Sketch && self.mode != Mode::Osr {
            out.push("sketch W-mode only affects the osr engine");
        }
        out
    }

    /// Number of pattern classes for `k` and the label alphabets.
    pub fn pattern_classes(&self) -> Result<u64> {
        count_patterns(self.k, self.vertex_labels, self.edge_labels, DEFAULT_ENUMERATION_BUDGET)
    }

    /// The sample size `M`: the override if given, else the bound from the
    /// class count.
    pub fn resolved_sample_size(&self) -> Result<usize> {
        match self.sample_size {
            Some(m) => Ok(m),
            None => Ok(recommended_sample_size(self.pattern_classes()?, self.epsilon, self.delta)),
        }
    }
}

/// What one event did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventStats {
    /// False when the event was a duplicate insertion or a deletion of a
    /// missing edge and was ignored.
    pub applied: bool,
    /// Subgraphs created (W) or destroyed (D); estimated in sketch mode.
    pub created: u64,
    pub destroyed: u64,
    /// Sampled (or, in exact mode, counted) subgraphs whose edges changed.
    pub modified: u64,
    /// New subgraphs placed into the sample.
    pub admitted: u64,
    /// Sampled subgraphs dropped because the event disconnected them.
    pub removed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyEstimate {
    /// Per-class count: sample count, or exact count in exact mode.
    pub counts: BTreeMap<PatternKey, u64>,
    /// Denominator of the frequencies: occupancy, or `N` in exact mode.
    pub denominator: u64,
    pub population: u64,
    pub occupancy: u64,
    pub c1: u64,
    pub c2: u64,
}

impl FrequencyEstimate {
    pub fn frequency(&self, key: &PatternKey) -> f64 {
        match self.counts.get(key) {
            Some(&c) if self.denominator > 0 => c as f64 / self.denominator as f64,
            _ => 0.0,
        }
    }

    /// `(class, frequency)` in key order.
    pub fn frequencies(&self) -> impl Iterator<Item = (&PatternKey, f64)> + '_ {
        let d = self.denominator.max(1) as f64;
        self.counts.iter().map(move |(k, &c)| (k, c as f64 / d))
    }

    pub fn is_empty(&self) -> bool {
        self.denominator == 0
    }

    /// Classes with frequency at least `threshold`, by frequency descending
    /// then key text ascending.
    pub fn above(&self, threshold: f64) -> Vec<(PatternKey, f64)> {
        let mut out: Vec<(PatternKey, f64)> = self
            .frequencies()
            .filter(|&(_, p)| p >= threshold)
            .map(|(k, p)| (k.clone(), p))
            .collect();
        out.sort_by_cached_key(|(k, p)| (core::cmp::Reverse(OrdF64(*p)), k.to_text()));
        out
    }
}

#[derive(PartialEq, PartialOrd)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Classes reported as frequent at one point of the stream.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentReport {
    pub event: u64,
    /// `tau - epsilon / 2`.
    pub threshold: f64,
    pub population: u64,
    pub occupancy: u64,
    pub c1: u64,
    pub c2: u64,
    pub entries: Vec<(PatternKey, f64)>,
}

/// Snapshot text: a `#` header line, then `key<TAB>frequency` rows.
impl fmt::Display for FrequentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# event={} N={} occ={} c1={} c2={}",
            self.event, self.population, self.occupancy, self.c1, self.c2
        )?;
        for (key, p) in &self.entries {
            writeln!(f, "{key}\t{p:.6}")?;
        }
        Ok(())
    }
}

/// Accuracy of an estimate against exact frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Mean of `|p^ - p| / p` over the classes present in the truth.
    pub relative_error: f64,
    pub precision: f64,
    pub recall: f64,
    /// Number of classes the relative error was averaged over.
    pub truth_classes: usize,
}

impl Metrics {
    /// Reported classes are those with `p^ >= tau - epsilon / 2`; truly
    /// frequent ones have `p >= tau`.
    pub fn compute(est: &FrequencyEstimate, truth: &FrequencyEstimate, tau: f64, epsilon: f64) -> Metrics {
        let mut err = 0.0;
        let mut classes = 0;
        for (key, p) in truth.frequencies() {
            if p > 0.0 {
                err += (est.frequency(key) - p).abs() / p;
                classes += 1;
            }
        }
        let reported: Vec<&PatternKey> = if est.is_empty() {
            Vec::new()
        } else {
            est.frequencies()
                .filter(|&(_, p)| p >= tau - epsilon / 2.0)
                .map(|(k, _)| k)
                .collect()
        };
        let frequent: Vec<&PatternKey> = if truth.is_empty() {
            Vec::new()
        } else {
            truth.frequencies().filter(|&(_, p)| p >= tau).map(|(k, _)| k).collect()
        };
        let hits = reported.iter().filter(|k| frequent.contains(k)).count();
        Metrics {
            relative_error: if classes == 0 { 0.0 } else { err / classes as f64 },
            precision: if reported.is_empty() { 1.0 } else { hits as f64 / reported.len() as f64 },
            recall: if frequent.is_empty() { 1.0 } else { hits as f64 / frequent.len() as f64 },
            truth_classes: classes,
        }
    }
}

#[derive(Debug, Clone)]
struct ExactState {
    counts: FxHashMap<PatternKey, u64>,
    population: u64,
}

impl ExactState {
    fn bump(&mut self, key: &PatternKey) {
        bump(&mut self.counts, key);
    }

    fn drop_one(&mut self, key: &PatternKey) -> Result<()> {
        let c = self
            .counts
            .get_mut(key)
            .ok_or(Error::Invariant("exact count of a missing class"))?;
        *c -= 1;
        if *c == 0 {
            self.counts.remove(key);
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct SampleState {
    reservoir: SubgraphReservoir,
    /// Eviction slots and pairing coins.
    rng: StreamRng,
    skip_rng: StreamRng,
    explore_rng: StreamRng,
    /// Skip-counter engine: rejections still owed from the last reservoir
    /// skip, carried across events.
    pending_skip: Option<u64>,
    sketches: Option<SketchStore>,
}

#[derive(Debug, Clone)]
enum State {
    Exact(ExactState),
    Sample(SampleState),
}

/// One estimator instance over one stream.
#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
    graph: DynamicLabeledGraph,
    events: u64,
    state: State,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        let state = match config.mode {
            Mode::Exact => State::Exact(ExactState {
                counts: FxHashMap::default(),
                population: 0,
            }),
            Mode::Sr | Mode::Osr => {
                let m = config.resolved_sample_size()?;
                let sketches = if config.mode == Mode::Osr && config.w_mode == WMode::Sketch {
                    let salt = rand::RngCore::next_u64(&mut substream(config.seed, Substream::Hasher));
                    Some(SketchStore::new(config.sketch_size, VertexHasher::new(salt))?)
                } else {
                    None
                };
                State::Sample(SampleState {
                    reservoir: SubgraphReservoir::new(m)?,
                    rng: substream(config.seed, Substream::Reservoir),
                    skip_rng: substream(config.seed, Substream::Skip),
                    explore_rng: substream(config.seed, Substream::Exploration),
                    pending_skip: None,
                    sketches,
                })
            }
        };
        Ok(Engine {
            config,
            graph: DynamicLabeledGraph::new(),
            events: 0,
            state,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn graph(&self) -> &DynamicLabeledGraph {
        &self.graph
    }

    /// Events processed so far, ignored ones included.
    pub fn events_processed(&self) -> u64 {
        self.events
    }

    pub fn reservoir(&self) -> Option<&SubgraphReservoir> {
        match &self.state {
            State::Sample(s) => Some(&s.reservoir),
            State::Exact(_) => None,
        }
    }

    pub fn sketches(&self) -> Option<&SketchStore> {
        match &self.state {
            State::Sample(s) => s.sketches.as_ref(),
            State::Exact(_) => None,
        }
    }

    /// Current subgraph count `N` (exact except in sketch mode).
    pub fn population(&self) -> u64 {
        match &self.state {
            State::Exact(e) => e.population,
            State::Sample(s) => s.reservoir.population(),
        }
    }

    pub fn process_event(&mut self, event: &StreamEvent) -> Result<EventStats> {
        let stats = match event.op {
            EventOp::Add {
                label_u,
                label_v,
                label_e,
            } => self.insert(event.u, label_u, event.v, label_v, label_e)?,
            EventOp::Delete => {
                if !self.config.dynamic {
                    return Err(Error::DeletionNotAllowed);
                }
                if !self.graph.has_edge(event.u, event.v) {
                    if event.u == event.v {
                        return Err(Error::SelfLoop(event.u));
                    }
                    match self.config.missing_edge {
                        MissingEdgePolicy::Skip => EventStats::default(),
                        MissingEdgePolicy::Abort => return Err(Error::MissingEdge(event.u, event.v)),
                    }
                } else {
                    self.delete(event.u, event.v)?
                }
            }
        };
        self.events += 1;
        if let (Some(every), State::Exact(_)) = (self.config.verify_every, &self.state) {
            if self.events % every == 0 && !self.exact_counts_match_recount() {
                return Err(Error::Invariant("exact counts differ from a full recount"));
            }
        }
        Ok(stats)
    }

    fn insert(
        &mut self,
        u: VertexId,
        label_u: u32,
        v: VertexId,
        label_v: u32,
        label_e: EdgeLabel,
    ) -> Result<EventStats> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        // labels are validated by a dry run before any state changes
        if self.graph.has_edge(u, v) {
            self.graph.add_edge(u, label_u, v, label_v, label_e)?;
            return Ok(EventStats::default());
        }
        for (x, l) in [(u, label_u), (v, label_v)] {
            if let Some(existing) = self.graph.vertex_label(x) {
                if existing != l {
                    return Err(Error::LabelConflict {
                        vertex: x,
                        existing,
                        given: l,
                    });
                }
            }
        }
        let mut pre = EventStats {
            applied: true,
            ..EventStats::default()
        };
        let k = self.config.k;
        let mode = self.config.mode;
        let w_mode = self.config.w_mode;
        let Engine { graph, state, .. } = self;
        // new endpoints need their labels before induced subgraphs are cut
        graph.add_vertex(u, label_u)?;
        graph.add_vertex(v, label_v)?;
        match state {
            State::Exact(ex) => {
                let mut err = Ok(());
                graph.for_each_candidate(u, v, k, |h| {
                    if err.is_err() {
                        return;
                    }
                    let before = match graph.induced_subgraph(h) {
                        Ok(b) => b,
                        Err(e) => {
                            err = Err(e);
                            return;
                        }
                    };
                    let after = before.with_edge(u, v, label_e);
                    if before.is_connected() {
                        pre.modified += 1;
                        err = ex.drop_one(before.key());
                    } else {
                        pre.created += 1;
                        ex.population += 1;
                    }
                    ex.bump(after.key());
                });
                err?;
            }
            State::Sample(st) if mode == Mode::Sr => {
                let mut fresh: Vec<Vec<VertexId>> = Vec::new();
                let mut modified: Vec<Vec<VertexId>> = Vec::new();
                graph.for_each_candidate(u, v, k, |h| {
                    if connected_without_pair(graph, h, u, v) {
                        if st.reservoir.contains(h) {
                            modified.push(h.to_vec());
                        }
                    } else {
                        fresh.push(h.to_vec());
                    }
                });
                for h in &modified {
                    let inst = graph.induced_subgraph(h)?.with_edge(u, v, label_e);
                    st.reservoir.replace_modified(h, inst)?;
                }
                pre.modified = modified.len() as u64;
                pre.created = fresh.len() as u64;
                for h in &fresh {
                    st.reservoir.add_population(1);
                    if let Some(p) = st.reservoir.offer_rp(&mut st.rng)? {
                        let inst = graph.induced_subgraph(h)?.with_edge(u, v, label_e);
                        st.reservoir.place(p, inst)?;
                        pre.admitted += 1;
                    }
                }
            }
            State::Sample(st) => {
                let members = st.reservoir.members_containing_pair(u, v);
                for &slot in &members {
                    let inst = st.reservoir.slot(slot).with_edge(u, v, label_e);
                    let ids = inst.vertices().to_vec();
                    st.reservoir.replace_modified(&ids, inst)?;
                }
                pre.modified = members.len() as u64;
                let (w, exact) = match (&st.sketches, w_mode) {
                    (Some(sk), WMode::Sketch) => (round_estimate(compute_w_approx(sk, graph, u, v, k)), false),
                    _ => (compute_w_exact(graph, u, v, k), true),
                };
                pre.created = w;
                let plan = plan_admissions(st, w)?;
                if !plan.is_empty() {
                    let mut count = plan.len();
                    if !exact {
                        count = count.min(compute_w_exact(graph, u, v, k) as usize);
                    }
                    let drawn = sample_new_subgraph(graph, u, v, k, label_e, count, &mut st.explore_rng)?;
                    for (p, inst) in plan.into_iter().zip(drawn) {
                        st.reservoir.place(p, inst)?;
                        pre.admitted += 1;
                    }
                }
            }
        }
        graph.add_edge(u, label_u, v, label_v, label_e)?;
        if let State::Sample(SampleState {
            sketches: Some(sk), ..
        }) = state
        {
            sk.edge_added(u, v);
        }
        Ok(pre)
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<EventStats> {
        let k = self.config.k;
        let mode = self.config.mode;
        let Engine { graph, state, .. } = self;
        let DeleteOutcome::Deleted(label) = graph.delete_edge(u, v) else {
            return Err(Error::MissingEdge(u, v));
        };
        let mut stats = EventStats {
            applied: true,
            ..EventStats::default()
        };
        match state {
            State::Exact(ex) => {
                let mut err = Ok(());
                graph.for_each_candidate(u, v, k, |h| {
                    if err.is_err() {
                        return;
                    }
                    let after = match graph.induced_subgraph(h) {
                        Ok(a) => a,
                        Err(e) => {
                            err = Err(e);
                            return;
                        }
                    };
                    let before = after.with_edge(u, v, label);
                    if let Err(e) = ex.drop_one(before.key()) {
                        err = Err(e);
                        return;
                    }
                    if after.is_connected() {
                        stats.modified += 1;
                        ex.bump(after.key());
                    } else {
                        stats.destroyed += 1;
                        ex.population -= 1;
                    }
                });
                err?;
            }
            State::Sample(st) if mode == Mode::Sr => {
                let mut lost: Vec<Vec<VertexId>> = Vec::new();
                let mut modified: Vec<Vec<VertexId>> = Vec::new();
                graph.for_each_candidate(u, v, k, |h| {
                    if connected_without_pair(graph, h, u, v) {
                        if st.reservoir.contains(h) {
                            modified.push(h.to_vec());
                        }
                    } else {
                        lost.push(h.to_vec());
                    }
                });
                for h in &modified {
                    st.reservoir.replace_modified(h, graph.induced_subgraph(h)?)?;
                }
                stats.modified = modified.len() as u64;
                stats.destroyed = lost.len() as u64;
                for h in &lost {
                    if st.reservoir.notify_subgraph_deleted(h) {
                        stats.removed += 1;
                    }
                }
            }
            State::Sample(st) => {
                if let Some(sk) = st.sketches.as_mut() {
                    sk.edge_deleted(u, v)?;
                }
                let members: Vec<Vec<VertexId>> = st
                    .reservoir
                    .members_containing_pair(u, v)
                    .into_iter()
                    .map(|s| st.reservoir.slot(s).vertices().to_vec())
                    .collect();
                for h in &members {
                    let after = graph.induced_subgraph(h)?;
                    if after.is_connected() {
                        st.reservoir.replace_modified(h, after)?;
                        stats.modified += 1;
                    } else {
                        st.reservoir.remove_sampled(h);
                        stats.removed += 1;
                    }
                }
                let d = match &st.sketches {
                    Some(sk) => round_estimate(compute_d_approx(sk, graph, u, v, k)),
                    None => compute_d_exact(graph, u, v, k),
                };
                let d = d.max(stats.removed);
                stats.destroyed = d;
                st.reservoir.add_unsampled_deletions(d - stats.removed);
                st.reservoir.remove_population(d);
                if d > 0 {
                    st.pending_skip = None;
                }
            }
        }
        Ok(stats)
    }

    pub fn estimate_frequencies(&self) -> FrequencyEstimate {
        match &self.state {
            State::Exact(ex) => FrequencyEstimate {
                counts: ex.counts.iter().map(|(k, &c)| (k.clone(), c)).collect(),
                denominator: ex.population,
                population: ex.population,
                occupancy: ex.population,
                c1: 0,
                c2: 0,
            },
            State::Sample(st) => {
                let r = &st.reservoir;
                let mut counts = BTreeMap::new();
                for inst in r.slots() {
                    *counts.entry(inst.key().clone()).or_insert(0) += 1;
                }
                FrequencyEstimate {
                    counts,
                    denominator: r.occupancy() as u64,
                    population: r.population(),
                    occupancy: r.occupancy() as u64,
                    c1: r.c1(),
                    c2: r.c2(),
                }
            }
        }
    }

    pub fn report_frequent(&self) -> FrequentReport {
        let est = self.estimate_frequencies();
        let threshold = self.config.tau - self.config.epsilon / 2.0;
        FrequentReport {
            event: self.events,
            threshold,
            population: est.population,
            occupancy: est.occupancy,
            c1: est.c1,
            c2: est.c2,
            entries: est.above(threshold),
        }
    }

    /// Exact mode: whether the maintained counts equal a from-scratch count.
    /// Always true in sampling modes.
    pub fn exact_counts_match_recount(&self) -> bool {
        let State::Exact(ex) = &self.state else {
            return true;
        };
        let fresh = recount(&self.graph, self.config.k);
        fresh.len() == ex.counts.len() && fresh.iter().all(|(k, c)| ex.counts.get(k) == Some(c))
    }

    /// Sampling modes: index exactness, counter sanity, and (outside sketch
    /// mode) `N` against a full recount. Meant for small graphs.
    pub fn check_invariants(&self) -> Result<()> {
        match &self.state {
            State::Exact(ex) => {
                let total: u64 = ex.counts.values().sum();
                if total != ex.population {
                    return Err(Error::Invariant("exact counts do not sum to N"));
                }
            }
            State::Sample(st) => {
                let r = &st.reservoir;
                if !r.index_is_exact() {
                    return Err(Error::Invariant("reservoir index out of sync"));
                }
                if r.occupancy() > r.capacity() {
                    return Err(Error::Invariant("reservoir over capacity"));
                }
                if r.slots().iter().any(|s| !s.is_connected()) {
                    return Err(Error::Invariant("disconnected subgraph in the sample"));
                }
                for s in r.slots() {
                    if self.graph.induced_subgraph(s.vertices())? != *s {
                        return Err(Error::Invariant("sampled subgraph out of date"));
                    }
                }
                if let Some(sk) = &st.sketches {
                    if !sk.matches(&self.graph) {
                        return Err(Error::Invariant("sketches out of sync"));
                    }
                } else {
                    if r.population() != self.graph.count_connected_sets(self.config.k) {
                        return Err(Error::Invariant("N differs from the subgraph count"));
                    }
                    if r.pending_deletions() == 0 && r.occupancy() as u64 != r.population().min(r.capacity() as u64) {
                        return Err(Error::Invariant("occupancy differs from min(M, N) with no pending deletions"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn bump(counts: &mut FxHashMap<PatternKey, u64>, key: &PatternKey) {
    match counts.get_mut(key) {
        Some(c) => *c += 1,
        None => {
            counts.insert(key.clone(), 1);
        }
    }
}

/// Per-class counts of every connected `k`-subgraph of `g`.
pub fn recount(g: &DynamicLabeledGraph, k: usize) -> FxHashMap<PatternKey, u64> {
    let mut counts: FxHashMap<PatternKey, u64> = FxHashMap::default();
    g.for_each_connected_set(k, |h| {
        let inst = g.induced_subgraph(h).expect("vertices of g");
        bump(&mut counts, inst.key());
    });
    counts
}

/// Decides, for `w` new subgraphs arriving in one event, which of them are
/// admitted and where they go, advancing `N`, `c1`, `c2` and the carried skip.
/// Returns one placement per admitted subgraph, in arrival order.
fn plan_admissions(st: &mut SampleState, w: u64) -> Result<Vec<Placement>> {
    let mut plan = Vec::new();
    let mut remaining = w;
    let r = &mut st.reservoir;
    let m = r.capacity() as u64;
    let mut occupancy = r.occupancy() as u64;
    // pairing regime while deletions are uncompensated
    while remaining > 0 && r.pending_deletions() > 0 {
        let (c1, d) = (r.c1(), r.pending_deletions());
        if c1 == 0 {
            let z = remaining.min(r.c2());
            r.compensate_rejections(z)?;
            r.add_population(z);
            remaining -= z;
            continue;
        }
        let z = skip_rp(c1, d, &mut st.skip_rng)?;
        if z >= remaining {
            r.compensate_rejections(remaining)?;
            r.add_population(remaining);
            remaining = 0;
        } else {
            r.compensate_rejections(z)?;
            r.add_population(z + 1);
            remaining -= z + 1;
            r.consume_admission()?;
            if occupancy >= m {
                return Err(Error::Invariant("pairing admission into a full sample"));
            }
            plan.push(Placement::Append);
            occupancy += 1;
        }
    }
    // reservoir regime
    while remaining > 0 {
        let z = match st.pending_skip.take() {
            Some(z) => z,
            None => skip_rs(r.population(), m, &mut st.skip_rng),
        };
        if z >= remaining {
            st.pending_skip = Some(z - remaining);
            r.add_population(remaining);
            remaining = 0;
        } else {
            r.add_population(z + 1);
            remaining -= z + 1;
            if occupancy < m {
                plan.push(Placement::Append);
                occupancy += 1;
            } else {
                let slot = crate::rng::below(&mut st.rng, occupancy as usize);
                plan.push(Placement::Replace(slot));
            }
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cfg(mode: Mode) -> EngineConfig {
        EngineConfig {
            mode,
            sample_size: Some(10),
            tau: 0.3,
            epsilon: 0.2,
            ..EngineConfig::default()
        }
    }

    fn add(seq: u64, u: u64, v: u64) -> StreamEvent {
        StreamEvent::add(seq, u, 0, v, 0, 0)
    }

    #[test]
    fn sample_size_rule() {
        assert_eq!(recommended_sample_size(1, 0.5, 0.999_999), 1);
        assert_eq!(recommended_sample_size(1000, 0.1, 0.1), 3777);
        assert_eq!(recommended_sample_size(1000, 0.01, 0.1), 369_335);
    }

    #[test]
    fn wedge_then_triangle_then_wedge() {
        for mode in [Mode::Sr, Mode::Osr, Mode::Exact] {
            let mut e = Engine::new(cfg(mode)).unwrap();
            e.process_event(&add(0, 1, 2)).unwrap();
            e.process_event(&add(1, 2, 3)).unwrap();
            assert_eq!(e.population(), 1);
            let est = e.estimate_frequencies();
            assert_eq!(est.counts.len(), 1);
            let wedge = est.counts.keys().next().unwrap().clone();
            assert_eq!(wedge.edges().len(), 2);

            e.process_event(&add(2, 1, 3)).unwrap();
            assert_eq!(e.population(), 1);
            let est = e.estimate_frequencies();
            assert_eq!(est.counts.keys().next().unwrap().edges().len(), 3);

            e.process_event(&StreamEvent::delete(3, 1, 3)).unwrap();
            let est = e.estimate_frequencies();
            assert_eq!((est.population, est.c1, est.c2), (1, 0, 0));
            assert_eq!(est.counts.keys().next(), Some(&wedge));
            e.check_invariants().unwrap();
        }
    }

    #[test]
    fn deletions_need_a_dynamic_engine() {
        let mut e = Engine::new(EngineConfig {
            dynamic: false,
            ..cfg(Mode::Sr)
        })
        .unwrap();
        assert_eq!(e.process_event(&StreamEvent::delete(0, 1, 2)), Err(Error::DeletionNotAllowed));
    }

    #[test]
    fn missing_edge_policy() {
        let mut e = Engine::new(cfg(Mode::Osr)).unwrap();
        assert!(!e.process_event(&StreamEvent::delete(0, 1, 2)).unwrap().applied);
        let mut e = Engine::new(EngineConfig {
            missing_edge: MissingEdgePolicy::Abort,
            ..cfg(Mode::Osr)
        })
        .unwrap();
        assert_eq!(e.process_event(&StreamEvent::delete(0, 1, 2)), Err(Error::MissingEdge(1, 2)));
    }

    #[test]
    fn label_conflicts_leave_state_untouched() {
        let mut e = Engine::new(cfg(Mode::Exact)).unwrap();
        e.process_event(&add(0, 1, 2)).unwrap();
        let bad = StreamEvent::add(1, 2, 5, 3, 0, 0);
        assert!(matches!(e.process_event(&bad), Err(Error::LabelConflict { .. })));
        assert!(!e.graph().contains_vertex(3));
    }

    #[test]
    fn exact_path_frequencies() {
        let mut e = Engine::new(cfg(Mode::Exact)).unwrap();
        for (i, (a, b)) in [(1, 2), (2, 3), (3, 4)].into_iter().enumerate() {
            e.process_event(&add(i as u64, a, b)).unwrap();
        }
        let est = e.estimate_frequencies();
        assert_eq!(est.population, 2);
        assert_eq!(est.frequencies().map(|(_, p)| p).collect::<Vec<_>>(), vec![1.0]);
        assert!(e.exact_counts_match_recount());
    }

    fn key(text_edges: &[(u64, u64)]) -> PatternKey {
        let inst = crate::graph::SubgraphInstance::new(&[(0, 0), (1, 0), (2, 0)], &text_edges.iter().map(|&(a, b)| (a, b, 0)).collect::<Vec<_>>()).unwrap();
        inst.key().clone()
    }

    fn estimate(pairs: &[(PatternKey, u64)], denom: u64) -> FrequencyEstimate {
        FrequencyEstimate {
            counts: pairs.iter().cloned().collect(),
            denominator: denom,
            population: denom,
            occupancy: denom,
            c1: 0,
            c2: 0,
        }
    }

    #[test]
    fn reporting_threshold_and_order() {
        let a = key(&[(0, 1), (1, 2)]);
        let b = key(&[(0, 1), (1, 2), (0, 2)]);
        let est = estimate(&[(a.clone(), 45), (b.clone(), 30)], 100);
        assert_eq!(est.above(0.5 - 0.2 / 2.0), vec![(a.clone(), 0.45)]);
        let est = estimate(&[(a.clone(), 5), (b.clone(), 5)], 10);
        let both = est.above(0.0);
        assert_eq!(both[0].0.to_text() < both[1].0.to_text(), true);
        assert!(estimate(&[], 0).above(0.0).is_empty());
    }

    #[test]
    fn metric_examples() {
        let a = key(&[(0, 1), (1, 2)]);
        let b = key(&[(0, 1), (1, 2), (0, 2)]);
        let truth = estimate(&[(a.clone(), 5), (b.clone(), 5)], 10);
        let est = estimate(&[(a.clone(), 6), (b.clone(), 4)], 10);
        let m = Metrics::compute(&est, &truth, 0.5, 0.1);
        assert!((m.relative_error - 0.2).abs() < 1e-12);
        let same = Metrics::compute(&truth, &truth, 0.5, 0.1);
        assert_eq!((same.relative_error, same.precision, same.recall), (0.0, 1.0, 1.0));
    }

    #[test]
    fn snapshot_format() {
        let mut e = Engine::new(cfg(Mode::Sr)).unwrap();
        e.process_event(&add(0, 1, 2)).unwrap();
        e.process_event(&add(1, 2, 3)).unwrap();
        let text = e.report_frequent().to_string();
        assert_eq!(text, "# event=2 N=1 occ=1 c1=0 c2=0\nk=3;V=0,0,0;E=(0,2,0),(1,2,0)\t1.000000\n");
    }
}
