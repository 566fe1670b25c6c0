//! Arithmetic in small finite fields F_q, q = p^f, in discrete-log (Zech)
//! form.
//!
//! Every use in this crate is multiplicative-character evaluation plus the
//! occasional sum, and q stays tiny, so full exp/log/Zech tables are cheap
//! and make both operations O(1). Elements are either zero or a discrete
//! log with respect to a fixed generator of the (cyclic) multiplicative
//! group.
//!
//! Internally elements of F_p[x]/(pi) are encoded base p: the code of a
//! residue with coefficients c_0, ..., c_{f-1} is `sum c_i p^i`. The
//! modulus pi is the lexicographically first irreducible monic polynomial
//! of degree f (ordered by that code), so a field built twice comes out
//! identical.

use crate::arith;
use thiserror::Error;

/// Largest field size the table builder accepts by default.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("field size {q} exceeds the bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
}

/// An element of a [`FieldSpec`]: zero, or a discrete log in Z/(q-1)Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Zero,
    Log(u32),
}

/// Tables for one field F_q. Immutable once built; all element operations
/// are pure methods on the spec.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u64,
    f: u32,
    q: u64,
    /// Base-p codes of the non-leading coefficients of the modulus.
    modulus_code: u64,
    /// exp[i] = base-p code of g^i, 0 <= i < q-1.
    exp: Vec<u64>,
    /// log[code] = i with g^i = code, None for code 0.
    log: Vec<Option<u32>>,
    /// zech[k] = log(1 + g^k), None when 1 + g^k = 0.
    zech: Vec<Option<u32>>,
}

/// Multiply two residue codes modulo the defining polynomial.
fn poly_mul_mod(a: u64, b: u64, p: u64, f: u32, modulus_code: u64) -> u64 {
    // Coefficients of the product, degree < 2f - 1.
    let digits = |mut v: u64| -> Vec<u64> {
        let mut out = vec![0u64; f as usize];
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
        out
    };
    let da = digits(a);
    let db = digits(b);
    let mut prod = vec![0u64; 2 * f as usize];
    for (i, &ca) in da.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca * cb) % p;
        }
    }
    // Reduce: x^f = -(non-leading part of the modulus).
    let mdigits = digits(modulus_code);
    for i in (f as usize..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mc) in mdigits.iter().enumerate() {
            let idx = i - f as usize + j;
            prod[idx] = (prod[idx] + c * (p - mc) % p) % p;
        }
    }
    let mut code = 0u64;
    for i in (0..f as usize).rev() {
        code = code * p + prod[i];
    }
    code
}

/// Coefficient-wise sum of two residue codes.
fn poly_add(a: u64, b: u64, p: u64, f: u32) -> u64 {
    let mut code = 0u64;
    let mut mult = 1u64;
    let (mut a, mut b) = (a, b);
    for _ in 0..f {
        code += (a % p + b % p) % p * mult;
        mult *= p;
        a /= p;
        b /= p;
    }
    code
}

/// Remainder of monic polynomial `a` (coefficient vector, ascending) by
/// monic `b` over F_p. Used only by the irreducibility search.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for (j, &cb) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + lead * (p - cb % p) % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn is_irreducible(coeffs: &[u64], p: u64) -> bool {
    let deg = coeffs.len() - 1;
    if deg == 1 {
        return true;
    }
    if coeffs[0] == 0 {
        return false; // divisible by x
    }
    // Trial division by every monic polynomial of degree up to deg/2.
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = code;
            for _ in 0..d {
                divisor.push(v % p);
                v /= p;
            }
            divisor.push(1);
            if poly_rem(coeffs, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Build the tables for F_(p^f) with the default size bound.
pub fn build_field(p: u64, f: u32) -> Result<FieldSpec, FieldError> {
    build_field_bounded(p, f, DEFAULT_FIELD_BOUND)
}

/// Build the tables for F_(p^f), rejecting q = p^f above `bound`.
pub fn build_field_bounded(p: u64, f: u32, bound: u64) -> Result<FieldSpec, FieldError> {
    assert!(f >= 1, "field exponent must be at least 1");
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime { p });
    }
    let mut q_wide: u128 = 1;
    for _ in 0..f {
        q_wide = q_wide.saturating_mul(p as u128);
    }
    if q_wide > bound as u128 {
        return Err(FieldError::BoundExceeded {
            q: q_wide.min(u64::MAX as u128) as u64,
            bound,
        });
    }
    let q = q_wide as u64;

    // Lexicographically first irreducible monic polynomial of degree f,
    // ordered by the base-p code of its non-leading coefficients.
    let mut modulus_code = None;
    for code in 0..q {
        let mut coeffs = Vec::with_capacity(f as usize + 1);
        let mut v = code;
        for _ in 0..f {
            coeffs.push(v % p);
            v /= p;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            modulus_code = Some(code);
            break;
        }
    }
    let modulus_code = modulus_code.expect("an irreducible polynomial of any degree exists");

    // Find a generator of the multiplicative group.
    let group_order = q - 1;
    let prime_factors: Vec<u64> = {
        let mut rest = group_order;
        let mut out = Vec::new();
        let mut p0 = 2;
        while p0 * p0 <= rest {
            if rest % p0 == 0 {
                out.push(p0);
                while rest % p0 == 0 {
                    rest /= p0;
                }
            }
            p0 += 1;
        }
        if rest > 1 {
            out.push(rest);
        }
        out
    };
    let pow_code = |mut base: u64, mut e: u64| -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(acc, base, p, f, modulus_code);
            }
            base = poly_mul_mod(base, base, p, f, modulus_code);
            e >>= 1;
        }
        acc
    };
    let mut generator = 1u64;
    if group_order > 1 {
        generator = (2..q)
            .find(|&g| {
                prime_factors
                    .iter()
                    .all(|&ell| pow_code(g, group_order / ell) != 1)
            })
            .expect("the multiplicative group of a finite field is cyclic");
    }

    let mut exp = Vec::with_capacity(group_order as usize);
    let mut log = vec![None; q as usize];
    let mut acc = 1u64;
    for i in 0..group_order {
        exp.push(acc);
        log[acc as usize] = Some(i as u32);
        acc = poly_mul_mod(acc, generator, p, f, modulus_code);
    }
    debug_assert_eq!(acc, 1, "generator order must be exactly q - 1");

    let zech = exp
        .iter()
        .map(|&code| log[poly_add(code, 1, p, f) as usize])
        .collect();

    Ok(FieldSpec {
        p,
        f,
        q,
        modulus_code,
        exp,
        log,
        zech,
    })
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Base-p code of the non-leading coefficients of the modulus.
    pub fn modulus_code(&self) -> u64 {
        self.modulus_code
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::Zero
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::Log(0)
    }

    /// The element with the given discrete log.
    pub fn from_log(&self, log: u64) -> FieldElement {
        FieldElement::Log((log % (self.q - 1)) as u32)
    }

    /// The image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let c = v.rem_euclid(self.p as i64) as u64;
        match self.log[c as usize] {
            _ if c == 0 => FieldElement::Zero,
            Some(l) => FieldElement::Log(l),
            None => unreachable!("nonzero prime-subfield element must have a log"),
        }
    }

    pub fn neg_one(&self) -> FieldElement {
        self.from_int(-1)
    }

    /// Base-p code of an element (0 for zero).
    pub fn code_of(&self, a: FieldElement) -> u64 {
        match a {
            FieldElement::Zero => 0,
            FieldElement::Log(l) => self.exp[l as usize],
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Zero, _) | (_, FieldElement::Zero) => FieldElement::Zero,
            (FieldElement::Log(la), FieldElement::Log(lb)) => {
                FieldElement::Log(((la as u64 + lb as u64) % (self.q - 1)) as u32)
            }
        }
    }

    /// Zech-table addition: a + b = g^la (1 + g^(lb - la)).
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Zero, x) | (x, FieldElement::Zero) => x,
            (FieldElement::Log(la), FieldElement::Log(lb)) => {
                let order = self.q - 1;
                let diff = ((lb as u64 + order) - la as u64) % order;
                match self.zech[diff as usize] {
                    None => FieldElement::Zero,
                    Some(z) => FieldElement::Log(((la as u64 + z as u64) % order) as u32),
                }
            }
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            a
        } else {
            self.mul(a, self.neg_one())
        }
    }

    /// a^e, with the empty-product convention a^0 = 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        match a {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Log(l) => {
                FieldElement::Log(((l as u64 as u128 * e as u128) % (self.q as u128 - 1)) as u32)
            }
        }
    }

    /// The power sum over the multiplicative group, by literal summation:
    /// `sum of a^m over all nonzero a`. Equals -1 when (q-1) | m and 0
    /// otherwise, but this method never uses that fact.
    pub fn power_sum(&self, m: u64) -> FieldElement {
        let mut acc = FieldElement::Zero;
        for k in 0..self.q - 1 {
            acc = self.add(acc, self.pow(FieldElement::Log(k as u32), m));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_elements(spec: &FieldSpec) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::Zero];
        for l in 0..spec.q() - 1 {
            out.push(FieldElement::Log(l as u32));
        }
        out
    }

    const SMALL_Q: [(u64, u32); 10] = [
        (2, 1),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (2, 3),
        (3, 2),
        (11, 1),
        (13, 1),
        (2, 4),
    ];

    #[test]
    fn builds_the_field_with_two_elements() {
        let spec = build_field(2, 1).unwrap();
        assert_eq!(spec.q(), 2);
        assert_eq!(spec.add(spec.one(), spec.one()), FieldElement::Zero);
    }

    #[test]
    fn f9_has_multiplicative_order_eight() {
        let spec = build_field(3, 2).unwrap();
        assert_eq!(spec.q(), 9);
        // Walk the table: every nonzero x satisfies x^8 = 1 and the
        // generator's powers are pairwise distinct.
        let codes: Vec<u64> = (0..8).map(|l| spec.code_of(FieldElement::Log(l))).collect();
        let mut sorted = codes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        for l in 0..8u32 {
            assert_eq!(spec.pow(FieldElement::Log(l), 8), spec.one());
        }
    }

    #[test]
    fn rejects_non_prime_characteristic() {
        match build_field(4, 1) {
            Err(FieldError::NotPrime { p: 4 }) => {}
            other => panic!("expected NotPrime, got {other:?}"),
        }
    }

    #[test]
    fn rejects_oversized_fields() {
        match build_field_bounded(2, 17, 1 << 16) {
            Err(FieldError::BoundExceeded { .. }) => {}
            other => panic!("expected BoundExceeded, got {other:?}"),
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = build_field(3, 2).unwrap();
        let b = build_field(3, 2).unwrap();
        assert_eq!(a.modulus_code(), b.modulus_code());
        assert_eq!(a.exp, b.exp);
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, f) in SMALL_Q {
            let spec = build_field(p, f).unwrap();
            for x in all_elements(&spec) {
                assert_eq!(spec.pow(x, spec.q()), spec.pow(x, 1), "q = {}", spec.q());
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        for (p, f) in [(2, 2), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let spec = build_field(p, f).unwrap();
            let elems = all_elements(&spec);
            for &a in &elems {
                for &b in &elems {
                    assert_eq!(spec.mul(a, b), spec.mul(b, a));
                    assert_eq!(spec.add(a, b), spec.add(b, a));
                    for &c in &elems {
                        assert_eq!(spec.mul(spec.mul(a, b), c), spec.mul(a, spec.mul(b, c)));
                        assert_eq!(spec.add(spec.add(a, b), c), spec.add(a, spec.add(b, c)));
                        assert_eq!(
                            spec.mul(a, spec.add(b, c)),
                            spec.add(spec.mul(a, b), spec.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn addition_matches_polynomial_addition() {
        for (p, f) in SMALL_Q {
            let spec = build_field(p, f).unwrap();
            let elems = all_elements(&spec);
            for &a in &elems {
                for &b in &elems {
                    let code = poly_add(spec.code_of(a), spec.code_of(b), p, f);
                    assert_eq!(spec.code_of(spec.add(a, b)), code);
                }
            }
        }
    }

    #[test]
    fn power_sum_examples() {
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f3.power_sum(0), f3.from_int(2)); // 1 + 1 = -1 in F_3
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.power_sum(2), FieldElement::Zero); // 1 + 4 + 4 + 1
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.power_sum(3), f4.one()); // -1 = 1 in characteristic 2
    }

    #[test]
    fn power_sum_dichotomy_small() {
        for (p, f) in SMALL_Q {
            let spec = build_field(p, f).unwrap();
            let q = spec.q();
            for m in 0..3 * (q - 1) {
                let expected = if m % (q - 1) == 0 {
                    spec.neg_one()
                } else {
                    FieldElement::Zero
                };
                assert_eq!(spec.power_sum(m), expected, "q = {q}, m = {m}");
            }
        }
    }
}
