//! Closed-form packet counts and their brute-force counterparts.
//!
//! For a divisor d of n, `g_closed(n, q, d)` is the number of regular
//! supersingular characters whose rotation orbit has size dividing d,
//! given by the Möbius sum
//!
//! ```text
//! g(d) = sum over e | n of mu(n/e) * [gcd(d,e)] * gcd(e/gcd(d,e), q-1)
//! ```
//!
//! with `[a]` the q-analog, and `h_closed(n, q, d)` is the number of
//! regular packets of size exactly d,
//!
//! ```text
//! h(d) = (1/d) * sum over e | d of mu(d/e) * g(e).
//! ```
//!
//! The brute counterparts tally the actual orbit partition. Closed and
//! brute must agree exactly everywhere; the `h` evaluator refuses to
//! round if the Möbius sum ever failed to be divisible by d, since that
//! would falsify the counting theorem rather than call for a rational.

use crate::arith::{divisors, mobius, q_analog};
use crate::characters::{all_packets, LPacket};
use num_bigint::{BigInt, BigUint};
use num_integer::gcd;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Ranks exercised by the default verification grid.
pub const DEFAULT_GRID_N: [usize; 5] = [2, 3, 4, 5, 6];
/// Prime powers exercised by the default verification grid.
pub const DEFAULT_GRID_Q: [u64; 9] = [3, 4, 5, 7, 8, 9, 11, 13, 16];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountingError {
    #[error("{d} does not divide {n}")]
    NotADivisor { n: usize, d: usize },
    /// The Möbius sum for h(d) was not divisible by d. This cannot happen
    /// if the counting theorems hold; surfacing it loudly beats rounding.
    #[error("packet count for (n = {n}, q = {q}, d = {d}) is not integral: sum = {sum}")]
    NonIntegral { n: usize, q: u64, d: usize, sum: BigInt },
}

fn check_divisor(n: usize, d: usize) -> Result<(), CountingError> {
    if d == 0 || n % d != 0 {
        return Err(CountingError::NotADivisor { n, d });
    }
    Ok(())
}

/// Number of regular supersingular characters with orbit size dividing d,
/// by the closed formula.
pub fn g_closed(n: usize, q: u64, d: usize) -> Result<BigUint, CountingError> {
    check_divisor(n, d)?;
    let mut sum = BigInt::zero();
    for e in divisors(n as u64) {
        let de = gcd(d as u64, e);
        let analog = BigInt::from(q_analog(q, de as u32));
        let tail = BigInt::from(gcd(e / de, q - 1));
        sum += BigInt::from(mobius(n as u64 / e)) * analog * tail;
    }
    assert!(
        !sum.is_negative(),
        "character count came out negative for n = {n}, q = {q}, d = {d}"
    );
    Ok(sum.to_biguint().unwrap())
}

/// Number of regular packets of size exactly d, by Möbius inversion of g.
pub fn h_closed(n: usize, q: u64, d: usize) -> Result<BigUint, CountingError> {
    check_divisor(n, d)?;
    let mut sum = BigInt::zero();
    for e in divisors(d as u64) {
        sum += BigInt::from(mobius(d as u64 / e)) * BigInt::from(g_closed(n, q, e as usize)?);
    }
    let (quot, rem) = num_integer::Integer::div_rem(&sum, &BigInt::from(d));
    if !rem.is_zero() {
        return Err(CountingError::NonIntegral { n, q, d, sum });
    }
    assert!(
        !quot.is_negative(),
        "packet count came out negative for n = {n}, q = {q}, d = {d}"
    );
    Ok(quot.to_biguint().unwrap())
}

/// g(d) is nonzero exactly when gcd(n/d, q-1) = n/d.
pub fn g_nonzero_criterion(n: usize, q: u64, d: usize) -> Result<bool, CountingError> {
    check_divisor(n, d)?;
    let nd = (n / d) as u64;
    Ok(gcd(nd, q - 1) == nd)
}

/// Brute count of regular characters with orbit size dividing d, from an
/// already-computed orbit partition.
pub fn g_brute_from_packets(packets: &[LPacket], d: usize) -> BigUint {
    let total: u64 = packets
        .iter()
        .filter(|p| p.regular() && d % p.size() == 0)
        .map(|p| p.size() as u64)
        .sum();
    BigUint::from(total)
}

/// Brute count of regular packets of size exactly d.
pub fn h_brute_from_packets(packets: &[LPacket], d: usize) -> BigUint {
    let total = packets.iter().filter(|p| p.regular() && p.size() == d).count();
    BigUint::from(total)
}

/// Brute counterpart of [`g_closed`], enumerating the orbit partition.
pub fn g_brute(n: usize, q: u64, d: usize) -> Result<BigUint, CountingError> {
    check_divisor(n, d)?;
    Ok(g_brute_from_packets(&all_packets(n, q), d))
}

/// Brute counterpart of [`h_closed`].
pub fn h_brute(n: usize, q: u64, d: usize) -> Result<BigUint, CountingError> {
    check_divisor(n, d)?;
    Ok(h_brute_from_packets(&all_packets(n, q), d))
}

/// One divisor's worth of counts. Values are decimal strings so that
/// arbitrary-precision results serialize exactly.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CountRow {
    pub d: usize,
    pub g_closed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_brute: Option<String>,
    pub h_closed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_brute: Option<String>,
}

/// The per-divisor count table for one (n, q).
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub q: u64,
    pub rows: Vec<CountRow>,
    /// True when every brute column agrees with its closed column;
    /// vacuously true when brute counts were not requested.
    pub matched: bool,
}

/// Build the count table for one (n, q), optionally running the
/// brute-force enumeration next to the closed forms.
pub fn count_report(n: usize, q: u64, brute: bool) -> Result<CountReport, CountingError> {
    let packets = if brute { Some(all_packets(n, q)) } else { None };
    let mut rows = Vec::new();
    let mut matched = true;
    for d in divisors(n as u64) {
        let d = d as usize;
        let g = g_closed(n, q, d)?;
        let h = h_closed(n, q, d)?;
        let (gb, hb) = match &packets {
            Some(p) => {
                let gb = g_brute_from_packets(p, d);
                let hb = h_brute_from_packets(p, d);
                matched &= gb == g && hb == h;
                (Some(gb.to_string()), Some(hb.to_string()))
            }
            None => (None, None),
        };
        rows.push(CountRow {
            d,
            g_closed: g.to_string(),
            g_brute: gb,
            h_closed: h.to_string(),
            h_brute: hb,
        });
    }
    Ok(CountReport { n, q, rows, matched })
}
