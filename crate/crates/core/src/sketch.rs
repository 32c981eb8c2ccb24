//! Bottom-k neighborhood sketches with deletion support.
//!
//! Each sketch keeps the `s` smallest hash values of a vertex's neighborhood
//! in `plus` and every other neighbor hash in `minus`. Deleting a value from
//! `plus` promotes the smallest value of `minus`, so the sketch always equals
//! the one built from the surviving neighbors alone. `minus` is unordered:
//! a promotion scans it, but only deletions that hit the bottom part (about
//! `s / degree` of them) pay for that.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::FxHashSet;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// Salted 64-bit vertex hash. [`unit`](Self::unit) maps it to `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexHasher {
    salt: u64,
    key: u64,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl VertexHasher {
    /// Nearby salts give unrelated hash functions: the salt is scrambled
    /// before it touches any id.
    pub fn new(salt: u64) -> Self {
        VertexHasher {
            salt,
            key: splitmix64(salt ^ 0x5851_f42d_4c95_7f2d),
        }
    }

    pub fn salt(&self) -> u64 {
        self.salt
    }

    /// splitmix64 finalizer over the keyed id.
    pub fn hash(&self, v: VertexId) -> u64 {
        splitmix64(v ^ self.key)
    }

    pub fn unit(&self, v: VertexId) -> f64 {
        to_unit(self.hash(v))
    }
}

#[inline]
pub fn to_unit(h: u64) -> f64 {
    h as f64 / TWO_POW_64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomKSketch {
    size: usize,
    salt: u64,
    plus: BTreeSet<u64>,
    minus: FxHashSet<u64>,
}

impl BottomKSketch {
    /// Empty sketch keeping the `size` smallest values.
    pub fn new(size: usize, hasher: VertexHasher) -> Self {
        assert!(size >= 2, "sketch size must be at least 2");
        BottomKSketch {
            size,
            salt: hasher.salt(),
            plus: BTreeSet::new(),
            minus: FxHashSet::default(),
        }
    }

    pub fn sketch_size(&self) -> usize {
        self.size
    }

    /// Values currently in the bottom-s part, ascending.
    pub fn bottom(&self) -> impl Iterator<Item = u64> + '_ {
        self.plus.iter().copied()
    }

    pub fn overflow_len(&self) -> usize {
        self.minus.len()
    }

    /// Number of neighbor hashes held in total.
    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// Largest value of the bottom part, as a real in `[0, 1)`.
    pub fn gamma(&self) -> Option<f64> {
        self.plus.last().map(|&h| to_unit(h))
    }

    pub fn is_full(&self) -> bool {
        self.plus.len() == self.size
    }

    pub fn insert(&mut self, value: u64) {
        if self.plus.len() < self.size {
            self.plus.insert(value);
            return;
        }
        let max = *self.plus.last().expect("full sketch");
        if value < max {
            self.plus.pop_last();
            self.minus.insert(max);
            self.plus.insert(value);
        } else {
            self.minus.insert(value);
        }
    }

    pub fn delete(&mut self, value: u64) -> Result<()> {
        if self.minus.remove(&value) {
            return Ok(());
        }
        if !self.plus.remove(&value) {
            return Err(Error::SketchValueAbsent(value));
        }
        if let Some(promoted) = self.minus.iter().min().copied() {
            self.minus.remove(&promoted);
            self.plus.insert(promoted);
        }
        Ok(())
    }

    /// Exact count while underfull, `(s - 1) / gamma` once full.
    pub fn size_estimate(&self) -> f64 {
        if self.plus.len() < self.size {
            return self.len() as f64;
        }
        (self.size - 1) as f64 / self.gamma().expect("full sketch")
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.size != other.size || self.salt != other.salt {
            return Err(Error::SketchMismatch(self.size, other.size));
        }
        Ok(())
    }

    /// Bottom-s values of the union of both sets.
    fn merged_bottom(&self, other: &Self) -> Vec<u64> {
        let mut merged = Vec::with_capacity(self.size);
        let mut a = self.plus.iter().peekable();
        let mut b = other.plus.iter().peekable();
        while merged.len() < self.size {
            let next = match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) => {
                    if x < y {
                        a.next();
                    } else if y < x {
                        b.next();
                    } else {
                        a.next();
                        b.next();
                    }
                    x.min(y)
                }
                (Some(&&x), None) => {
                    a.next();
                    x
                }
                (None, Some(&&y)) => {
                    b.next();
                    y
                }
                (None, None) => break,
            };
            merged.push(next);
        }
        merged
    }

    /// Union-size estimate from the merged bottom-s values.
    pub fn union_estimate(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let merged = self.merged_bottom(other);
        if merged.len() < self.size {
            return Ok(merged.len() as f64);
        }
        Ok((self.size - 1) as f64 / to_unit(*merged.last().expect("non-empty")))
    }

    /// Inclusion-exclusion intersection estimate, clamped at zero.
    pub fn intersection_estimate(&self, other: &Self) -> Result<f64> {
        let union = self.union_estimate(other)?;
        Ok((self.size_estimate() + other.size_estimate() - union).max(0.0))
    }

    /// Sketch of the union of several sets; the merged sketch holds only
    /// bottom values, so it must not be used for deletions.
    pub fn merged<'a>(sketches: impl IntoIterator<Item = &'a BottomKSketch>, size: usize, hasher: VertexHasher) -> Self {
        let mut out = BottomKSketch::new(size, hasher);
        for sk in sketches {
            for &h in &sk.plus {
                if out.plus.contains(&h) {
                    continue;
                }
                if out.plus.len() < size {
                    out.plus.insert(h);
                } else if h < *out.plus.last().expect("full") {
                    out.plus.pop_last();
                    out.plus.insert(h);
                }
            }
        }
        out
    }

    /// Checks the structural invariants; used by tests and debug assertions.
    pub fn check_invariants(&self) -> bool {
        if self.plus.len() > self.size {
            return false;
        }
        if !self.minus.is_empty() && self.plus.len() < self.size {
            return false;
        }
        match (self.plus.last(), self.minus.iter().min()) {
            (Some(p), Some(m)) => p < m,
            _ => true,
        }
    }
}
