use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{SubgraphInstance, VertexId};
use crate::rng::{below, unit};
use crate::FxHashMap;

/// Where an admitted subgraph goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Into a free slot.
    Append,
    /// Over the subgraph currently in this slot.
    Replace(usize),
}

/// Fixed-capacity uniform sample of connected `k`-subgraphs.
///
/// Besides the slots it tracks the population size `N`, the random-pairing
/// counters `c1`/`c2`, an identity map from sorted vertex tuples to slots,
/// and a vertex index from each vertex to the slots containing it.
#[derive(Debug, Clone)]
pub struct SubgraphReservoir {
    capacity: usize,
    slots: Vec<SubgraphInstance>,
    by_identity: FxHashMap<Vec<VertexId>, usize>,
    index: FxHashMap<VertexId, Vec<usize>>,
    population: u64,
    c1: u64,
    c2: u64,
}

impl SubgraphReservoir {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfig("sample size must be at least 1"));
        }
        Ok(SubgraphReservoir {
            capacity,
            slots: Vec::with_capacity(capacity.min(1 << 16)),
            by_identity: FxHashMap::default(),
            index: FxHashMap::default(),
            population: 0,
            c1: 0,
            c2: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn occupancy(&self) -> usize {
        self.slots.len()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() >= self.capacity
    }

    /// `N`: current number of connected k-subgraphs in the graph.
    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn c1(&self) -> u64 {
        self.c1
    }

    pub fn c2(&self) -> u64 {
        self.c2
    }

    /// Uncompensated deletions `c1 + c2`.
    pub fn pending_deletions(&self) -> u64 {
        self.c1 + self.c2
    }

    pub fn slots(&self) -> &[SubgraphInstance] {
        &self.slots
    }

    pub fn slot(&self, slot: usize) -> &SubgraphInstance {
        &self.slots[slot]
    }

    pub fn slot_of(&self, vertices: &[VertexId]) -> Option<usize> {
        self.by_identity.get(vertices).copied()
    }

    pub fn contains(&self, vertices: &[VertexId]) -> bool {
        self.by_identity.contains_key(vertices)
    }

    pub fn add_population(&mut self, n: u64) {
        self.population += n;
    }

    /// Lowers `N`, saturating at zero (only reachable with estimated counts).
    pub fn remove_population(&mut self, n: u64) {
        self.population = self.population.saturating_sub(n);
    }

    /// Records `n` subgraph deletions that did not hit the sample.
    pub fn add_unsampled_deletions(&mut self, n: u64) {
        self.c2 += n;
    }

    /// Sets `c2` so that `c1 + c2 = d`, clamped at zero.
    pub fn set_pending_deletions(&mut self, d: u64) {
        self.c2 = d.saturating_sub(self.c1);
    }

    /// Compensates `n` pending deletions by rejections (`c2 -= n`).
    pub fn compensate_rejections(&mut self, n: u64) -> Result<()> {
        if n > self.c2 {
            return Err(Error::Invariant("more pairing rejections than c2"));
        }
        self.c2 -= n;
        Ok(())
    }

    /// Compensates one sample-side deletion by an admission (`c1 -= 1`); the
    /// caller places the admitted subgraph into a free slot.
    pub fn consume_admission(&mut self) -> Result<()> {
        if self.c1 == 0 {
            return Err(Error::Invariant("pairing admission with c1 = 0"));
        }
        self.c1 -= 1;
        Ok(())
    }

    /// Reservoir-sampling decision for one arrival; `N` must already count it.
    pub fn offer_rs<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Placement> {
        if !self.is_full() {
            return Some(Placement::Append);
        }
        let n = self.population.max(1);
        // admit with probability M/N
        if rng.random_range(0..n) < self.capacity as u64 {
            Some(Placement::Replace(below(rng, self.slots.len())))
        } else {
            None
        }
    }

    /// Adds a newly created subgraph by reservoir sampling. The caller has
    /// already counted it in `N`.
    pub fn reservoir_insert<R: Rng + ?Sized>(&mut self, inst: SubgraphInstance, rng: &mut R) -> Result<bool> {
        if self.contains(inst.vertices()) {
            return Err(Error::DuplicateInstance(inst.vertices().to_vec()));
        }
        match self.offer_rs(rng) {
            Some(p) => self.place(p, inst).map(|_| true),
            None => Ok(false),
        }
    }

    /// Random-pairing decision for one arrival. With no pending deletions
    /// this is [`offer_rs`](Self::offer_rs); otherwise the arrival is admitted
    /// with probability `c1 / (c1 + c2)` and the matching counter is
    /// decremented here.
    pub fn offer_rp<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Placement>> {
        let d = self.pending_deletions();
        if d == 0 {
            return Ok(self.offer_rs(rng));
        }
        if self.c1 > 0 && self.is_full() {
            return Err(Error::Invariant("c1 > 0 with a full sample"));
        }
        if unit(rng) * (d as f64) < self.c1 as f64 {
            self.c1 -= 1;
            Ok(Some(Placement::Append))
        } else {
            self.c2 -= 1;
            Ok(None)
        }
    }

    pub fn rp_insert<R: Rng + ?Sized>(&mut self, inst: SubgraphInstance, rng: &mut R) -> Result<bool> {
        if self.contains(inst.vertices()) {
            return Err(Error::DuplicateInstance(inst.vertices().to_vec()));
        }
        match self.offer_rp(rng)? {
            Some(p) => self.place(p, inst).map(|_| true),
            None => Ok(false),
        }
    }

    /// Puts `inst` into the sample; returns its slot.
    pub fn place(&mut self, placement: Placement, inst: SubgraphInstance) -> Result<usize> {
        if self.contains(inst.vertices()) {
            return Err(Error::DuplicateInstance(inst.vertices().to_vec()));
        }
        match placement {
            Placement::Append => {
                if self.is_full() {
                    return Err(Error::Invariant("append into a full sample"));
                }
                let slot = self.slots.len();
                self.link(slot, &inst);
                self.slots.push(inst);
                Ok(slot)
            }
            Placement::Replace(slot) => {
                let old = core::mem::replace(&mut self.slots[slot], inst);
                self.unlink(slot, &old);
                let new = self.slots[slot].clone();
                self.link(slot, &new);
                Ok(slot)
            }
        }
    }

    /// A subgraph was disconnected by an edge deletion: drop it from the
    /// sample if present (`c1 += 1`), else `c2 += 1`; `N -= 1` either way.
    /// Returns whether it was sampled.
    pub fn notify_subgraph_deleted(&mut self, vertices: &[VertexId]) -> bool {
        self.population = self.population.saturating_sub(1);
        if self.remove_sampled(vertices) {
            true
        } else {
            self.c2 += 1;
            false
        }
    }

    /// Removes a sampled subgraph that was destroyed (`c1 += 1`), leaving `N`
    /// alone. Returns false if it is not sampled.
    pub fn remove_sampled(&mut self, vertices: &[VertexId]) -> bool {
        match self.slot_of(vertices) {
            Some(slot) => {
                self.remove_slot(slot);
                self.c1 += 1;
                true
            }
            None => false,
        }
    }

    /// Swaps a sampled subgraph for its modified version (same vertices).
    pub fn replace_modified(&mut self, old: &[VertexId], new: SubgraphInstance) -> Result<()> {
        let slot = self.slot_of(old).ok_or_else(|| Error::NotInSample(old.to_vec()))?;
        if new.vertices() != old {
            return Err(Error::Invariant("modified subgraph changed its vertex set"));
        }
        self.slots[slot] = new;
        Ok(())
    }

    /// Slots whose subgraph contains both `u` and `v`, ascending.
    pub fn members_containing_pair(&self, u: VertexId, v: VertexId) -> Vec<usize> {
        let (Some(a), Some(b)) = (self.index.get(&u), self.index.get(&v)) else {
            return Vec::new();
        };
        let (probe, other) = if a.len() <= b.len() { (a, v) } else { (b, u) };
        let mut out: Vec<usize> = probe
            .iter()
            .copied()
            .filter(|&s| self.slots[s].contains(other))
            .collect();
        out.sort_unstable();
        out
    }

    fn remove_slot(&mut self, slot: usize) {
        let last = self.slots.len() - 1;
        let removed = self.slots.swap_remove(slot);
        self.unlink(slot, &removed);
        if slot != last {
            let moved = self.slots[slot].clone();
            self.unlink(last, &moved);
            self.link(slot, &moved);
        }
    }

    fn link(&mut self, slot: usize, inst: &SubgraphInstance) {
        self.by_identity.insert(inst.vertices().to_vec(), slot);
        for &v in inst.vertices() {
            self.index.entry(v).or_default().push(slot);
        }
    }

    fn unlink(&mut self, slot: usize, inst: &SubgraphInstance) {
        self.by_identity.remove(inst.vertices());
        for &v in inst.vertices() {
            if let Some(list) = self.index.get_mut(&v) {
                if let Some(p) = list.iter().position(|&s| s == slot) {
                    list.swap_remove(p);
                }
                if list.is_empty() {
                    self.index.remove(&v);
                }
            }
        }
    }

    /// Rebuilds identity map and vertex index from the slots and compares.
    pub fn index_is_exact(&self) -> bool {
        let mut index: FxHashMap<VertexId, Vec<usize>> = FxHashMap::default();
        for (s, inst) in self.slots.iter().enumerate() {
            if self.by_identity.get(inst.vertices()) != Some(&s) {
                return false;
            }
            for &v in inst.vertices() {
                index.entry(v).or_default().push(s);
            }
        }
        if self.by_identity.len() != self.slots.len() || index.len() != self.index.len() {
            return false;
        }
        index.iter().all(|(v, want)| {
            let mut have = self.index.get(v).cloned().unwrap_or_default();
            have.sort_unstable();
            have == *want
        })
    }

    /// One line per slot: `slot<TAB>sorted vertex ids<TAB>pattern key`.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for (s, inst) in self.slots.iter().enumerate() {
            let ids: Vec<String> = inst.vertices().iter().map(|v| alloc::format!("{v}")).collect();
            let _ = writeln!(out, "{}\t{}\t{}", s, ids.join(","), inst.key());
        }
        out
    }
}
