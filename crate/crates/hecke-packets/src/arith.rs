//! Exact integer number theory shared by every other module: divisors, the
//! Möbius function, Euler's phi function, q-analogs, and the Möbius-sum /
//! inclusion–exclusion identity used by the packet-counting formulas.
//!
//! Everything here is exact. Q-analogs are accumulated as big-integer sums
//! (never via division), and the literal inclusion–exclusion evaluator is
//! kept around purely as an independent oracle for the Möbius sum it is
//! equal to.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Cap on the number of proper-divisor tuples the literal
/// inclusion–exclusion evaluator will enumerate. It exists only as an
/// oracle; anything past this is not worth waiting for.
pub const LHS_TUPLE_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    /// The value table does not cover a divisor the sum needs.
    #[error("value table is missing f({divisor}) (required for m = {m})")]
    MissingValue { divisor: u64, m: u64 },
    /// The literal evaluator would enumerate too many divisor tuples.
    #[error("inclusion-exclusion over {tuples} tuples exceeds the budget of {budget}")]
    TupleBudgetExceeded { tuples: u64, budget: u64 },
}

/// All divisors of `m`, ascending. Trial division; inputs here are tiny.
pub fn divisors(m: u64) -> Vec<u64> {
    assert!(m >= 1, "divisors undefined for m = 0");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Divisors of `m` strictly less than `m`, ascending.
pub fn proper_divisors(m: u64) -> Vec<u64> {
    let mut d = divisors(m);
    d.pop();
    d
}

/// The Möbius function: 0 unless `m` is squarefree, otherwise (-1)^(number
/// of prime factors).
pub fn mobius(m: u64) -> i64 {
    assert!(m >= 1, "mobius undefined for m = 0");
    let mut m = m;
    let mut factors = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if m > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler's phi function by trial-division factorization.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi undefined for m = 0");
    let mut m = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi -= phi / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Primality by trial division; callers only pass small moduli.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Decompose `q` as `p^f` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut f = 0;
            while rest % p == 0 {
                rest /= p;
                f += 1;
            }
            return if rest == 1 { Some((p, f)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// The q-analog `[a] = 1 + q + ... + q^(a-1)`, computed as the sum so the
/// result is exact for any size of input. `[0] = 0` and `[1] = 1`.
pub fn q_analog(q: u64, a: u32) -> BigUint {
    assert!(q >= 2, "q-analog needs q >= 2");
    let q = BigUint::from(q);
    let mut power = BigUint::one();
    let mut sum = BigUint::zero();
    for _ in 0..a {
        sum += &power;
        power *= &q;
    }
    sum
}

/// A q-analog together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QAnalog {
    pub q: u64,
    pub a: u32,
    pub value: BigUint,
}

impl QAnalog {
    pub fn new(q: u64, a: u32) -> Self {
        QAnalog {
            q,
            a,
            value: q_analog(q, a),
        }
    }
}

fn table_value<'a>(
    f: &'a BTreeMap<u64, BigInt>,
    divisor: u64,
    m: u64,
) -> Result<&'a BigInt, ArithError> {
    f.get(&divisor)
        .ok_or(ArithError::MissingValue { divisor, m })
}

/// The Möbius sum `sum over e | m of mu(m/e) f(e)` for an arithmetic
/// function given as a value table on the divisors of `m`.
pub fn mobius_sum(f: &BTreeMap<u64, BigInt>, m: u64) -> Result<BigInt, ArithError> {
    assert!(m >= 1, "mobius_sum undefined for m = 0");
    let mut sum = BigInt::zero();
    for e in divisors(m) {
        sum += table_value(f, e, m)? * BigInt::from(mobius(m / e));
    }
    Ok(sum)
}

/// Literal evaluation of the inclusion–exclusion expression
///
/// ```text
/// f(m) - sum over j of (-1)^(j+1) * sum over e_1 < ... < e_j of f(gcd(e_1, ..., e_j))
/// ```
///
/// where the inner sum runs over strictly increasing tuples of proper
/// divisors of `m`. Equal to [`mobius_sum`]; this evaluator exists only as
/// an independent oracle for that identity and errors out rather than
/// enumerate more than [`LHS_TUPLE_BUDGET`] tuples.
pub fn inclusion_exclusion_lhs(f: &BTreeMap<u64, BigInt>, m: u64) -> Result<BigInt, ArithError> {
    assert!(m >= 1, "inclusion_exclusion_lhs undefined for m = 0");
    let proper = proper_divisors(m);
    let k = proper.len();
    let tuples = if k >= 63 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    };
    if tuples > LHS_TUPLE_BUDGET {
        return Err(ArithError::TupleBudgetExceeded {
            tuples,
            budget: LHS_TUPLE_BUDGET,
        });
    }

    let mut correction = BigInt::zero();
    for mask in 1u64..=tuples {
        let mut g = 0u64;
        for (bit, &e) in proper.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                g = num_integer::gcd(g, e);
            }
        }
        let j = mask.count_ones();
        let term = table_value(f, g, m)?;
        if j % 2 == 1 {
            correction += term;
        } else {
            correction -= term;
        }
    }
    Ok(table_value(f, m, m)? - correction)
}
