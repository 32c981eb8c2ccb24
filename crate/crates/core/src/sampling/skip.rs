//! Skip counters: how many consecutive new subgraphs are rejected before the
//! next one is admitted.
//!
//! For reservoir sampling after `n` arrivals with capacity `m`,
//! `Pr[Z = z] = m/(n+z+1) * prod_{i<z} (1 - m/(n+i+1))`. For random pairing
//! with `c1` sample-side uncompensated deletions out of `d`,
//! `Pr[Z = z] = c1/(d-z) * prod_{i<z} (1 - c1/(d-i))`.
//!
//! Both have an `O(z)` sequential sampler, which is the reference, and a
//! constant-expected-time acceptance-rejection sampler used once the
//! population is large relative to the sample.

use libm::{exp, floor, log};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{unit, unit_open};

/// Above `RS_THRESHOLD * m` arrivals the reservoir skip uses acceptance-rejection.
pub const RS_THRESHOLD: u64 = 22;
/// Above `RP_THRESHOLD * c1` pending deletions the pairing skip uses acceptance-rejection.
pub const RP_THRESHOLD: u64 = 13;

/// Reservoir skip after `n` arrivals with capacity `m`; `0` while `n < m`.
pub fn skip_rs<R: Rng + ?Sized>(n: u64, m: u64, rng: &mut R) -> u64 {
    assert!(m >= 1, "reservoir capacity must be positive");
    if n < m {
        return 0;
    }
    if n <= RS_THRESHOLD * m {
        skip_rs_sequential(n, m, rng)
    } else {
        skip_rs_rejection(n, m, rng)
    }
}

/// Inverse-CDF walk over the survival function.
pub fn skip_rs_sequential<R: Rng + ?Sized>(n: u64, m: u64, rng: &mut R) -> u64 {
    if n < m {
        return 0;
    }
    let v = unit(rng);
    let m = m as f64;
    let mut t = n as f64 + 1.0;
    let mut quot = (t - m) / t;
    let mut s = 0;
    while quot > v {
        s += 1;
        t += 1.0;
        quot *= (t - m) / t;
    }
    s
}

/// Acceptance-rejection against the continuous envelope
/// `g(x) = m/(n+x) * (n/(n+x))^m` with a squeeze test before the exact one.
/// Requires `n >= m`.
pub fn skip_rs_rejection<R: Rng + ?Sized>(n: u64, m: u64, rng: &mut R) -> u64 {
    debug_assert!(n >= m);
    let t = n as f64;
    let nf = m as f64;
    let term = t - nf + 1.0;
    loop {
        let w = exp(-log(unit_open(rng)) / nf);
        let u = unit_open(rng);
        let x = t * (w - 1.0);
        let s = floor(x);
        let tmp = (t + 1.0) / term;
        let lhs = exp(log(((u * tmp * tmp) * (term + s)) / (t + x)) / nf);
        let rhs = (((t + x) / (term + s)) * term) / t;
        if lhs <= rhs {
            return s as u64;
        }
        let mut y = (((u * (t + 1.0)) / term) * (t + s + 1.0)) / (t + x);
        let (mut denom, numer_lim) = if nf < s { (t, term + s) } else { (t - nf + s, t + 1.0) };
        let mut numer = t + s;
        while numer >= numer_lim {
            y = (y * numer) / denom;
            denom -= 1.0;
            numer -= 1.0;
        }
        if exp(log(y) / nf) <= (t + x) / t {
            return s as u64;
        }
    }
}

fn check_rp(c1: u64, d: u64) -> Result<()> {
    if c1 == 0 {
        return Err(Error::InvalidConfig("pairing skip needs c1 >= 1"));
    }
    if c1 > d {
        return Err(Error::Invariant("c1 exceeds uncompensated deletions"));
    }
    Ok(())
}

/// Random-pairing skip with `c1` of `d` pending deletions on the sample side.
/// Always `<= d - c1`.
pub fn skip_rp<R: Rng + ?Sized>(c1: u64, d: u64, rng: &mut R) -> Result<u64> {
    check_rp(c1, d)?;
    if c1 == 1 {
        // uniform over 0..d
        return Ok(rng.random_range(0..d));
    }
    if d > RP_THRESHOLD * c1 {
        Ok(skip_rp_rejection(c1, d, rng))
    } else {
        Ok(skip_rp_sequential_unchecked(c1, d, rng))
    }
}

/// Sequential reference sampler for [`skip_rp`].
pub fn skip_rp_sequential<R: Rng + ?Sized>(c1: u64, d: u64, rng: &mut R) -> Result<u64> {
    check_rp(c1, d)?;
    Ok(skip_rp_sequential_unchecked(c1, d, rng))
}

fn skip_rp_sequential_unchecked<R: Rng + ?Sized>(c1: u64, d: u64, rng: &mut R) -> u64 {
    let v = unit(rng);
    let mut top = (d - c1) as f64;
    let mut remaining = d as f64;
    let mut quot = top / remaining;
    let mut s = 0;
    while quot > v {
        s += 1;
        top -= 1.0;
        remaining -= 1.0;
        quot *= top / remaining;
    }
    s
}

/// Acceptance-rejection for sequential sampling of `c1 >= 2` out of `d`.
fn skip_rp_rejection<R: Rng + ?Sized>(c1: u64, d: u64, rng: &mut R) -> u64 {
    debug_assert!(c1 >= 2);
    let n = c1 as f64;
    let big_n = d as f64;
    let ninv = 1.0 / n;
    let nmin1inv = 1.0 / (n - 1.0);
    let qu1 = big_n - n + 1.0;
    loop {
        let mut vprime = exp(log(unit_open(rng)) * ninv);
        let (x, s) = loop {
            let x = big_n * (1.0 - vprime);
            let s = floor(x);
            if s < qu1 {
                break (x, s);
            }
            vprime = exp(log(unit_open(rng)) * ninv);
        };
        let u = unit_open(rng);
        let y1 = exp(log(u * big_n / qu1) * nmin1inv);
        let squeeze = y1 * (1.0 - x / big_n) * (qu1 / (qu1 - s));
        if squeeze <= 1.0 {
            return s as u64;
        }
        let mut y2 = 1.0;
        let mut top = big_n - 1.0;
        let (mut bottom, limit) = if n - 1.0 > s {
            (big_n - n, big_n - s)
        } else {
            (big_n - s - 1.0, qu1)
        };
        let mut t = big_n - 1.0;
        while t >= limit {
            y2 = (y2 * top) / bottom;
            top -= 1.0;
            bottom -= 1.0;
            t -= 1.0;
        }
        if big_n / (big_n - x) >= y1 * exp(log(y2) * nmin1inv) {
            return s as u64;
        }
    }
}
