//! Residue combinatorics of irreducible mod-p Galois representations of
//! dimension n, done entirely as exact arithmetic on residue classes —
//! no actual representations appear.
//!
//! A residue r mod q^n - 1 is primitive when r is nonzero modulo
//! [n]/[d] for every proper divisor d of n ([a] is the q-analog).
//! Primitive residues up to multiplication by q (Frobenius twist) are the
//! isomorphism classes of irreducible representations; adding translation
//! by [n] (twist by a character of the base) coarsens them into classes
//! of *projective* representations. Each projective class carries the
//! invariant d_sigma — the minimal e with q^e r = r mod [n] — which
//! divides n and controls how many genuine classes lie above it.
//!
//! Single-residue operations work on arbitrary-precision residues. The
//! full orbit enumerations run on u64 with u128 intermediates: they have
//! to touch every residue mod q^n - 1, so anything beyond the enumeration
//! cap is infeasible outright, not merely slow.

use crate::arith::{divisors, mobius, proper_divisors, q_analog};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Hard cap on full residue enumerations (scans of [0, q^n - 1)).
pub const MAX_RESIDUE_ENUMERATION: u64 = 1 << 27;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaloisError {
    #[error("residue {r} is not primitive")]
    NotPrimitive { r: BigUint },
    #[error("enumerating {size} residues exceeds the cap of {max}")]
    EnumerationTooLarge { size: BigUint, max: u64 },
}

/// q^n - 1, the modulus residues live in.
pub fn modulus(n: usize, q: u64) -> BigUint {
    BigUint::from(q).pow(n as u32) - BigUint::one()
}

/// The q-analog [n] = (q^n - 1)/(q - 1), the modulus d_sigma is defined
/// against and the translation step between lifts.
pub fn reduced_modulus(n: usize, q: u64) -> BigUint {
    q_analog(q, n as u32)
}

/// The moduli [n]/[d] for proper divisors d of n; r is primitive iff it
/// is nonzero mod each of them.
fn primitivity_moduli(n: usize, q: u64) -> Vec<BigUint> {
    let bracket_n = q_analog(q, n as u32);
    proper_divisors(n as u64)
        .into_iter()
        .map(|d| {
            let bracket_d = q_analog(q, d as u32);
            let (quot, rem) = num_integer::Integer::div_rem(&bracket_n, &bracket_d);
            debug_assert!(rem.is_zero(), "[d] divides [n] when d divides n");
            quot
        })
        .collect()
}

/// Whether r (taken mod q^n - 1) is primitive.
pub fn is_primitive(n: usize, q: u64, r: &BigUint) -> bool {
    let r = r % modulus(n, q);
    primitivity_moduli(n, q)
        .iter()
        .all(|m| !(&r % m).is_zero())
}

/// The minimal e > 0 with q^e r = r mod [n]; always a divisor of n for
/// primitive r.
pub fn d_sigma_of(n: usize, q: u64, r: &BigUint) -> Result<usize, GaloisError> {
    if !is_primitive(n, q, r) {
        return Err(GaloisError::NotPrimitive { r: r.clone() });
    }
    let bracket_n = reduced_modulus(n, q);
    let r = r % &bracket_n;
    let q_big = BigUint::from(q);
    let mut power = BigUint::one();
    for e in 1..=n {
        power = power * &q_big % &bracket_n;
        if &power * &r % &bracket_n == r {
            debug_assert_eq!(n % e, 0, "the minimal exponent divides n");
            return Ok(e);
        }
    }
    unreachable!("q^n is 1 mod [n], so the loop always terminates")
}

/// Fixed-width context for full enumerations.
struct Ctx {
    /// q^n - 1.
    m: u64,
    /// [n].
    bracket_n: u64,
    /// [n]/[d] for proper divisors d.
    prim_mods: Vec<u64>,
    /// q^e mod [n] for e = 1..=n.
    q_powers: Vec<u64>,
    q: u64,
}

impl Ctx {
    fn new(n: usize, q: u64, cap: u64) -> Result<Ctx, GaloisError> {
        assert!(n >= 2, "rank must be at least 2");
        assert!(q >= 2, "residue field must have at least 2 elements");
        let m_big = modulus(n, q);
        let m = m_big.to_u64().filter(|&m| m <= cap).ok_or_else(|| {
            GaloisError::EnumerationTooLarge {
                size: m_big.clone(),
                max: cap,
            }
        })?;
        let bracket_n = m / (q - 1);
        let prim_mods = primitivity_moduli(n, q)
            .into_iter()
            .map(|v| v.to_u64().expect("divides q^n - 1 which fits"))
            .collect();
        let mut q_powers = Vec::with_capacity(n);
        let mut acc = 1u64;
        for _ in 0..n {
            acc = ((acc as u128 * q as u128) % bracket_n as u128) as u64;
            q_powers.push(acc);
        }
        Ok(Ctx {
            m,
            bracket_n,
            prim_mods,
            q_powers,
            q,
        })
    }

    fn primitive(&self, r: u64) -> bool {
        self.prim_mods.iter().all(|&md| r % md != 0)
    }

    fn mul_q(&self, r: u64) -> u64 {
        ((r as u128 * self.q as u128) % self.m as u128) as u64
    }

    fn add_bracket(&self, r: u64) -> u64 {
        let s = r + self.bracket_n;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    fn d_sigma(&self, r: u64) -> usize {
        let rb = r % self.bracket_n;
        for (e, &qe) in self.q_powers.iter().enumerate() {
            if (qe as u128 * rb as u128) % self.bracket_n as u128 == rb as u128 {
                return e + 1;
            }
        }
        unreachable!("q^n fixes every residue mod [n]")
    }
}

/// All primitive residues in the reduced range [0, [n]), ascending. Every
/// projective class has a lift with r in this range.
pub fn reduced_primitives(n: usize, q: u64) -> Result<Vec<BigUint>, GaloisError> {
    let ctx = Ctx::new(n, q, MAX_RESIDUE_ENUMERATION)?;
    Ok((0..ctx.bracket_n)
        .filter(|&r| ctx.primitive(r))
        .map(BigUint::from)
        .collect())
}

/// Count of primitive r in [0, [n]) fixed by multiplication by q^d
/// modulo [n]. Matches `counting::g_closed(n, q, d)` exactly.
pub fn count_frobenius_fixed(n: usize, q: u64, d: usize) -> Result<u64, GaloisError> {
    let ctx = Ctx::new(n, q, MAX_RESIDUE_ENUMERATION)?;
    let qd = ctx.q_powers[d - 1];
    Ok((0..ctx.bracket_n)
        .filter(|&r| ctx.primitive(r))
        .filter(|&r| (qd as u128 * r as u128) % ctx.bracket_n as u128 == r as u128)
        .count() as u64)
}

/// Count of primitive r in [0, [n]) whose *minimal* fixing exponent is
/// exactly d. Matches the Möbius transform of g over divisors of d.
pub fn count_frobenius_minimal(n: usize, q: u64, d: usize) -> Result<u64, GaloisError> {
    let ctx = Ctx::new(n, q, MAX_RESIDUE_ENUMERATION)?;
    Ok((0..ctx.bracket_n)
        .filter(|&r| ctx.primitive(r))
        .filter(|&r| ctx.d_sigma(r) == d)
        .count() as u64)
}

/// An orbit of primitive residues under multiplication by q: an
/// isomorphism class of irreducible representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenuineClass {
    members: Vec<BigUint>,
}

impl GenuineClass {
    pub fn members(&self) -> &[BigUint] {
        &self.members
    }

    pub fn representative(&self) -> &BigUint {
        &self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// All genuine classes, sorted by least member.
pub fn genuine_classes(n: usize, q: u64) -> Result<Vec<GenuineClass>, GaloisError> {
    let ctx = Ctx::new(n, q, MAX_RESIDUE_ENUMERATION)?;
    let mut visited = Bitset::new(ctx.m);
    let mut classes = Vec::new();
    for seed in 0..ctx.m {
        if visited.get(seed) || !ctx.primitive(seed) {
            continue;
        }
        let mut members = Vec::new();
        let mut r = seed;
        loop {
            visited.set(r);
            members.push(BigUint::from(r));
            r = ctx.mul_q(r);
            if r == seed {
                break;
            }
        }
        members.sort_unstable();
        classes.push(GenuineClass { members });
    }
    Ok(classes)
}

/// An orbit of primitive residues under multiplication by q and
/// translation by [n]: an equivalence class of irreducible projective
/// representations. Residue fields serialize as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectiveClass {
    pub n: usize,
    pub q: u64,
    /// Least residue in the orbit.
    #[serde(serialize_with = "crate::serialize_biguint")]
    pub representative: BigUint,
    pub d_sigma: usize,
    /// Number of genuine classes lying above this projective class;
    /// always d_sigma * (q-1) / n.
    pub lift_count: u64,
    /// Number of residues in the orbit.
    pub size: u64,
}

/// The full projective-class partition plus a residue -> class lookup.
#[derive(Debug, Clone)]
pub struct ProjectiveClassSet {
    n: usize,
    q: u64,
    classes: Vec<ProjectiveClass>,
    class_of: Vec<u32>,
    m: u64,
}

const NO_CLASS: u32 = u32::MAX;

impl ProjectiveClassSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Classes sorted by representative.
    pub fn classes(&self) -> &[ProjectiveClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing r, or None when r is not primitive.
    pub fn class_index_of(&self, r: &BigUint) -> Option<usize> {
        let reduced = (r % BigUint::from(self.m))
            .to_u64()
            .expect("reduced below a u64 modulus");
        match self.class_of[reduced as usize] {
            NO_CLASS => None,
            idx => Some(idx as usize),
        }
    }
}

struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn new(len: u64) -> Bitset {
        Bitset {
            words: vec![0; (len as usize + 63) / 64],
        }
    }

    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }
}

/// Partition all primitive residues mod q^n - 1 into projective classes
/// by breadth-first closure under the two generators. Each class is
/// annotated with d_sigma (computed on every member and required to be
/// constant) and its lift count (the number of Frobenius orbits inside).
pub fn projective_classes(n: usize, q: u64) -> Result<ProjectiveClassSet, GaloisError> {
    let ctx = Ctx::new(n, q, MAX_RESIDUE_ENUMERATION)?;
    let mut class_of = vec![NO_CLASS; ctx.m as usize];
    let mut classes = Vec::new();

    for seed in 0..ctx.m {
        if class_of[seed as usize] != NO_CLASS || !ctx.primitive(seed) {
            continue;
        }
        let idx = classes.len() as u32;
        let mut members = vec![seed];
        class_of[seed as usize] = idx;
        let mut queue = vec![seed];
        while let Some(r) = queue.pop() {
            for next in [ctx.mul_q(r), ctx.add_bracket(r)] {
                debug_assert!(ctx.primitive(next), "the generators preserve primitivity");
                if class_of[next as usize] == NO_CLASS {
                    class_of[next as usize] = idx;
                    members.push(next);
                    queue.push(next);
                }
            }
        }

        let d_sigma = ctx.d_sigma(seed);
        assert!(
            members.iter().all(|&r| ctx.d_sigma(r) == d_sigma),
            "d_sigma must not depend on the representative (n = {n}, q = {q}, class {idx})"
        );

        // Lift count: Frobenius orbits inside the class.
        let mut in_lift = std::collections::HashSet::new();
        let mut lift_count = 0u64;
        for &r in &members {
            if in_lift.contains(&r) {
                continue;
            }
            lift_count += 1;
            let mut s = r;
            loop {
                in_lift.insert(s);
                s = ctx.mul_q(s);
                if s == r {
                    break;
                }
            }
        }

        classes.push(ProjectiveClass {
            n,
            q,
            representative: BigUint::from(seed),
            d_sigma,
            lift_count,
            size: members.len() as u64,
        });
    }

    Ok(ProjectiveClassSet {
        n,
        q,
        classes,
        class_of,
        m: ctx.m,
    })
}

/// Number of projective classes with each d_sigma, as (d, count) rows
/// over the divisors of n.
pub fn class_counts_by_d_sigma(set: &ProjectiveClassSet) -> Vec<(usize, u64)> {
    divisors(set.n as u64)
        .into_iter()
        .map(|d| {
            let d = d as usize;
            let count = set.classes.iter().filter(|c| c.d_sigma == d).count() as u64;
            (d, count)
        })
        .collect()
}

/// The Möbius transform `sum over e | d of mu(d/e) g(e)` used by the
/// exact-period count check.
pub fn mobius_transform_of_g(n: usize, q: u64, d: usize) -> BigInt {
    divisors(d as u64)
        .into_iter()
        .map(|e| {
            BigInt::from(mobius(d as u64 / e))
                * BigInt::from(crate::counting::g_closed(n, q, e as usize).unwrap())
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{g_closed, h_closed};

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn primitivity_examples() {
        assert!(!is_primitive(2, 3, &big(0)));
        assert!(is_primitive(2, 3, &big(2)));
        assert!(!is_primitive(2, 3, &big(4)));
        assert!(is_primitive(2, 3, &big(1)));
    }

    #[test]
    fn reduced_primitives_examples() {
        assert_eq!(
            reduced_primitives(2, 3).unwrap(),
            vec![big(1), big(2), big(3)]
        );
        assert_eq!(reduced_primitives(2, 5).unwrap().len(), 5);
        assert_eq!(
            reduced_primitives(2, 5).unwrap(),
            (1..=5).map(big).collect::<Vec<_>>()
        );
    }

    #[test]
    fn reduced_primitive_count_is_g_n() {
        for n in [2usize, 3, 4] {
            for q in [3u64, 4, 5, 7, 8] {
                assert_eq!(
                    big(reduced_primitives(n, q).unwrap().len() as u64),
                    g_closed(n, q, n).unwrap(),
                    "n = {n}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn frobenius_fixed_examples() {
        assert_eq!(count_frobenius_fixed(2, 3, 1).unwrap(), 1);
        assert_eq!(count_frobenius_fixed(2, 3, 2).unwrap(), 3);
    }

    #[test]
    fn frobenius_counts_match_the_formulas() {
        for n in [2usize, 3, 4] {
            for q in [3u64, 4, 5, 7] {
                for d in divisors(n as u64) {
                    let d = d as usize;
                    assert_eq!(
                        big(count_frobenius_fixed(n, q, d).unwrap()),
                        g_closed(n, q, d).unwrap(),
                        "fixed count at n = {n}, q = {q}, d = {d}"
                    );
                    let exact = BigInt::from(count_frobenius_minimal(n, q, d).unwrap());
                    assert_eq!(
                        exact,
                        mobius_transform_of_g(n, q, d),
                        "minimal count at n = {n}, q = {q}, d = {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn d_sigma_examples() {
        assert_eq!(d_sigma_of(2, 3, &big(1)).unwrap(), 2);
        assert_eq!(d_sigma_of(2, 3, &big(2)).unwrap(), 1);
        assert_eq!(
            d_sigma_of(2, 3, &big(4)),
            Err(GaloisError::NotPrimitive { r: big(4) })
        );
    }

    #[test]
    fn projective_classes_mod_eight() {
        let set = projective_classes(2, 3).unwrap();
        assert_eq!(set.len(), 2);
        let c0 = &set.classes()[0];
        assert_eq!(c0.representative, big(1));
        assert_eq!(c0.size, 4); // {1, 3, 5, 7}
        assert_eq!(c0.d_sigma, 2);
        assert_eq!(c0.lift_count, 2);
        let c1 = &set.classes()[1];
        assert_eq!(c1.representative, big(2));
        assert_eq!(c1.size, 2); // {2, 6}
        assert_eq!(c1.d_sigma, 1);
        assert_eq!(c1.lift_count, 1);

        assert_eq!(set.class_index_of(&big(7)), Some(0));
        assert_eq!(set.class_index_of(&big(6)), Some(1));
        assert_eq!(set.class_index_of(&big(4)), None);
    }

    #[test]
    fn lift_counts_satisfy_the_lifting_law() {
        for n in [2usize, 3, 4] {
            for q in [3u64, 4, 5, 7, 9] {
                let set = projective_classes(n, q).unwrap();
                for class in set.classes() {
                    assert_eq!(
                        (q - 1) % (n / class.d_sigma) as u64,
                        0,
                        "n/d_sigma must divide q-1 at n = {n}, q = {q}"
                    );
                    assert_eq!(
                        class.lift_count,
                        class.d_sigma as u64 * (q - 1) / n as u64,
                        "lift count law at n = {n}, q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn class_counts_match_h() {
        for n in [2usize, 3, 4] {
            for q in [3u64, 4, 5, 7] {
                let set = projective_classes(n, q).unwrap();
                for (d, count) in class_counts_by_d_sigma(&set) {
                    assert_eq!(
                        big(count),
                        h_closed(n, q, d).unwrap(),
                        "n = {n}, q = {q}, d = {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn partition_sanity() {
        for n in [2usize, 3] {
            for q in [3u64, 4, 5, 7] {
                let set = projective_classes(n, q).unwrap();
                let genuine = genuine_classes(n, q).unwrap();
                let lifts: u64 = set.classes().iter().map(|c| c.lift_count).sum();
                assert_eq!(lifts, genuine.len() as u64, "n = {n}, q = {q}");

                let m = modulus(n, q).to_u64().unwrap();
                let primitive_total = (0..m).filter(|r| is_primitive(n, q, &big(*r))).count();
                let genuine_total: usize = genuine.iter().map(|c| c.size()).sum();
                assert_eq!(genuine_total, primitive_total);
                let class_total: u64 = set.classes().iter().map(|c| c.size).sum();
                assert_eq!(class_total, primitive_total as u64);
            }
        }
    }

    #[test]
    fn d_sigma_divides_n() {
        for n in [2usize, 3, 4, 6] {
            for q in [3u64, 4, 5] {
                for r in reduced_primitives(n, q).unwrap() {
                    let d = d_sigma_of(n, q, &r).unwrap();
                    assert_eq!(n % d, 0, "n = {n}, q = {q}, r = {r}");
                }
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        match projective_classes(12, 16) {
            Err(GaloisError::EnumerationTooLarge { .. }) => {}
            other => panic!("expected EnumerationTooLarge, got {other:?}"),
        }
    }
}
