//! Affine type-A index combinatorics: the cyclic index set naming the
//! simple affine reflections, the rotation that conjugation by the
//! length-zero generator induces on it, and coroot-pairing exponents of
//! diagonal torus characters.
//!
//! A character of the diagonal torus of GL_n over F_q is an exponent tuple
//! (a_1, ..., a_n) mod q-1; a character of the SL_n torus is such a tuple
//! modulo the diagonal shift (1, ..., 1), kept in the canonical form "last
//! entry zero". The rotation acts on tuples by (a_1, ..., a_n) ->
//! (a_n, a_1, ..., a_{n-1}) and on indices by i -> i+1 mod n, and pairing
//! exponents are the cyclic differences a_i - a_{i+1}.

use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("affine index {i} out of range for rank {n}")]
    IndexOutOfRange { n: usize, i: usize },
    #[error("rank must be at least 2, got {n}")]
    RankTooSmall { n: usize },
}

/// One of the n simple affine reflections, named by its index in
/// {0, ..., n-1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineIndex {
    n: usize,
    i: usize,
}

impl AffineIndex {
    pub fn new(n: usize, i: usize) -> Result<Self, WeylError> {
        if n < 2 {
            return Err(WeylError::RankTooSmall { n });
        }
        if i >= n {
            return Err(WeylError::IndexOutOfRange { n, i });
        }
        Ok(AffineIndex { n, i })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> usize {
        self.i
    }

    /// Conjugation by the length-zero generator sends index i to i+1 mod n.
    pub fn omega(&self) -> AffineIndex {
        AffineIndex {
            n: self.n,
            i: (self.i + 1) % self.n,
        }
    }
}

/// A subset of the affine index set {0, ..., n-1}, stored as a bitmask.
///
/// Ordering is lexicographic on the sorted index list (so {} < {0} <
/// {0, 2} < {1}), which is the order packet representatives are chosen by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineSubset {
    n: usize,
    bits: u64,
}

impl AffineSubset {
    pub fn empty(n: usize) -> Self {
        assert!((2..=64).contains(&n), "rank out of supported range");
        AffineSubset { n, bits: 0 }
    }

    pub fn full(n: usize) -> Self {
        assert!((2..=64).contains(&n), "rank out of supported range");
        AffineSubset {
            n,
            bits: if n == 64 { u64::MAX } else { (1 << n) - 1 },
        }
    }

    pub fn from_bits(n: usize, bits: u64) -> Self {
        let full = Self::full(n);
        assert!(bits & !full.bits == 0, "bits outside the index range");
        AffineSubset { n, bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Self {
        let mut s = Self::empty(n);
        for i in indices {
            assert!(i < n, "index {i} out of range for rank {n}");
            s.bits |= 1 << i;
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.n)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.bits & (1 << i) != 0
    }

    pub fn is_subset_of(&self, other: &AffineSubset) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The image under index rotation by `by`: each i becomes i+by mod n.
    pub fn rotate(&self, by: usize) -> AffineSubset {
        let by = by % self.n;
        if by == 0 {
            return *self;
        }
        let mask = Self::full(self.n).bits;
        let bits = ((self.bits << by) | (self.bits >> (self.n - by))) & mask;
        AffineSubset { n: self.n, bits }
    }

    /// Smallest d > 0 with rotate(d) = self; always divides n.
    pub fn rotation_period(&self) -> usize {
        for d in crate::arith::divisors(self.n as u64) {
            if self.rotate(d as usize) == *self {
                return d as usize;
            }
        }
        unreachable!("rotation by n is the identity")
    }
}

impl PartialOrd for AffineSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

/// An exponent tuple (a_1, ..., a_n) mod q-1: a character of the full
/// diagonal torus of GL_n over F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTupleGL {
    q: u64,
    entries: Vec<u32>,
}

/// Reduce an entry into [0, q-1). For q = 2 the modulus is 1 and every
/// entry is 0.
fn reduce(q: u64, v: u64) -> u32 {
    (v % (q - 1)) as u32
}

impl ExponentTupleGL {
    pub fn new(q: u64, entries: &[u64]) -> Self {
        assert!(q >= 2, "residue field must have at least 2 elements");
        assert!(entries.len() >= 2, "rank must be at least 2");
        ExponentTupleGL {
            q,
            entries: entries.iter().map(|&v| reduce(q, v)).collect(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Conjugating the diagonal torus by the length-zero generator
    /// rotates the exponents: (a_1, ..., a_n) -> (a_n, a_1, ..., a_{n-1}).
    pub fn omega(&self) -> ExponentTupleGL {
        let n = self.n();
        let mut entries = Vec::with_capacity(n);
        entries.push(self.entries[n - 1]);
        entries.extend_from_slice(&self.entries[..n - 1]);
        ExponentTupleGL {
            q: self.q,
            entries,
        }
    }

    /// The exponent e with (character ∘ coroot_i)(x) = x^e: the cyclic
    /// difference a_i - a_{i+1} for 1 <= i <= n-1, and a_n - a_1 for the
    /// affine index 0.
    pub fn coroot_exponent(&self, idx: usize) -> u32 {
        let n = self.n();
        assert!(idx < n, "affine index out of range");
        let m = self.q - 1;
        let (hi, lo) = if idx == 0 {
            (self.entries[n - 1], self.entries[0])
        } else {
            (self.entries[idx - 1], self.entries[idx])
        };
        ((hi as u64 + m - lo as u64) % m) as u32
    }

    /// Smallest d > 0 with omega^d fixing the tuple exactly; divides n.
    pub fn rotation_period(&self) -> usize {
        let n = self.n();
        'outer: for d in crate::arith::divisors(n as u64) {
            let d = d as usize;
            for i in 0..n {
                if self.entries[i] != self.entries[(i + d) % n] {
                    continue 'outer;
                }
            }
            return d;
        }
        unreachable!("rotation by n is the identity")
    }

    /// The class of this tuple modulo diagonal shifts.
    pub fn restrict(&self) -> ExponentClassSL {
        ExponentClassSL::from_entries(
            self.q,
            &self.entries.iter().map(|&v| v as u64).collect::<Vec<_>>(),
        )
    }
}

/// An exponent tuple modulo the diagonal shift (1, ..., 1): a character of
/// the diagonal torus of SL_n over F_q. Canonical form has last entry 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentClassSL {
    q: u64,
    entries: Vec<u32>,
}

impl ExponentClassSL {
    /// Canonicalize by subtracting the last entry from every entry.
    pub fn from_entries(q: u64, entries: &[u64]) -> Self {
        assert!(q >= 2, "residue field must have at least 2 elements");
        assert!(entries.len() >= 2, "rank must be at least 2");
        let m = q - 1;
        let last = entries[entries.len() - 1] % m;
        ExponentClassSL {
            q,
            entries: entries
                .iter()
                .map(|&v| ((v % m + m - last) % m) as u32)
                .collect(),
        }
    }

    pub fn trivial(n: usize, q: u64) -> Self {
        Self::from_entries(q, &vec![0; n])
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// The canonical representative (last entry zero).
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Rotation as on GL tuples, re-canonicalized.
    pub fn omega(&self) -> ExponentClassSL {
        let n = self.n();
        let m = self.q - 1;
        // Rotated tuple is (a_n, a_1, ..., a_{n-1}); its last entry is
        // a_{n-1}, which gets subtracted from everything.
        let last = self.entries[n - 2] as u64;
        let mut entries = Vec::with_capacity(n);
        entries.push(((self.entries[n - 1] as u64 + m - last) % m) as u32);
        for &v in &self.entries[..n - 1] {
            entries.push(((v as u64 + m - last) % m) as u32);
        }
        ExponentClassSL {
            q: self.q,
            entries,
        }
    }

    /// Coroot pairing exponents are differences, so they do not see the
    /// diagonal and are computed on the canonical representative.
    pub fn coroot_exponent(&self, idx: usize) -> u32 {
        let n = self.n();
        assert!(idx < n, "affine index out of range");
        let m = self.q - 1;
        let (hi, lo) = if idx == 0 {
            (self.entries[n - 1], self.entries[0])
        } else {
            (self.entries[idx - 1], self.entries[idx])
        };
        ((hi as u64 + m - lo as u64) % m) as u32
    }

    /// All q-1 characters of the GL torus restricting to this class: the
    /// diagonal twists of the canonical representative.
    pub fn lifts(&self) -> Vec<ExponentTupleGL> {
        let m = self.q - 1;
        (0..m)
            .map(|shift| {
                ExponentTupleGL::new(
                    self.q,
                    &self
                        .entries
                        .iter()
                        .map(|&v| v as u64 + shift)
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_rotates_indices_cyclically() {
        let idx = AffineIndex::new(3, 0).unwrap();
        assert_eq!(idx.omega().i(), 1);
        let idx = AffineIndex::new(3, 2).unwrap();
        assert_eq!(idx.omega().i(), 0);
        let idx = AffineIndex::new(2, 1).unwrap();
        assert_eq!(idx.omega().i(), 0);
    }

    #[test]
    fn index_construction_validates() {
        assert!(AffineIndex::new(3, 3).is_err());
        assert!(AffineIndex::new(1, 0).is_err());
    }

    #[test]
    fn omega_on_tuple_is_a_single_rotation() {
        let t = ExponentTupleGL::new(4, &[0, 1, 2]);
        assert_eq!(t.omega().entries(), &[2, 0, 1]);
    }

    #[test]
    fn omega_on_class_recanonicalizes() {
        // (0, 1) mod 2 canonicalizes to (1, 0); its rotation (0, 1)
        // canonicalizes back to (1, 0): the class is fixed.
        let c = ExponentClassSL::from_entries(3, &[0, 1]);
        assert_eq!(c.entries(), &[1, 0]);
        assert_eq!(c.omega(), c);
    }

    #[test]
    fn omega_applied_n_times_is_identity() {
        let t = ExponentTupleGL::new(5, &[0, 1, 3]);
        let mut u = t.clone();
        for _ in 0..3 {
            u = u.omega();
        }
        assert_eq!(u, t);
        let c = ExponentClassSL::from_entries(7, &[2, 4, 1, 0]);
        let mut d = c.clone();
        for _ in 0..4 {
            d = d.omega();
        }
        assert_eq!(d, c);
    }

    #[test]
    fn coroot_exponent_examples() {
        // Class (0, 1) over q = 3: both pairings have exponent 1 mod 2.
        let c = ExponentClassSL::from_entries(3, &[0, 1]);
        assert_eq!(c.coroot_exponent(1), 1);
        assert_eq!(c.coroot_exponent(0), 1);
        // Trivial class and constant tuples pair to zero.
        let t = ExponentClassSL::trivial(4, 5);
        for i in 0..4 {
            assert_eq!(t.coroot_exponent(i), 0);
        }
        let constant = ExponentTupleGL::new(5, &[3, 3, 3]);
        for i in 0..3 {
            assert_eq!(constant.coroot_exponent(i), 0);
        }
    }

    #[test]
    fn class_and_tuple_pairings_agree() {
        let t = ExponentTupleGL::new(7, &[5, 2, 4, 4]);
        let c = t.restrict();
        for i in 0..4 {
            assert_eq!(t.coroot_exponent(i), c.coroot_exponent(i));
        }
    }

    #[test]
    fn subset_rotation_and_order() {
        let j = AffineSubset::from_indices(4, [0, 2]);
        assert_eq!(j.rotate(1).to_vec(), vec![1, 3]);
        assert_eq!(j.rotate(2), j);
        assert_eq!(j.rotation_period(), 2);
        assert_eq!(AffineSubset::empty(4).rotation_period(), 1);
        assert_eq!(AffineSubset::from_indices(4, [1]).rotation_period(), 4);

        // Sorted-index-list lexicographic order.
        let a = AffineSubset::from_indices(3, [0, 2]);
        let b = AffineSubset::from_indices(3, [1]);
        assert!(AffineSubset::empty(3) < a);
        assert!(a < b);
    }

    proptest! {
        #[test]
        fn telescoping_pairings_sum_to_zero(
            q in 3u64..=16,
            entries in proptest::collection::vec(0u64..64, 2..=6),
        ) {
            let t = ExponentTupleGL::new(q, &entries);
            let m = q - 1;
            let total: u64 = (0..t.n()).map(|i| t.coroot_exponent(i) as u64).sum();
            prop_assert_eq!(total % m, 0);
        }

        // The rotation is equivariant: pairing the rotated character at
        // the rotated index recovers the original pairing. This is what
        // makes the action on (character, subset) pairs well defined.
        #[test]
        fn rotation_is_equivariant(
            q in 3u64..=16,
            entries in proptest::collection::vec(0u64..64, 2..=6),
        ) {
            let t = ExponentTupleGL::new(q, &entries);
            let rotated = t.omega();
            let n = t.n();
            for i in 0..n {
                prop_assert_eq!(rotated.coroot_exponent((i + 1) % n), t.coroot_exponent(i));
            }
            let c = t.restrict();
            let rotated = c.omega();
            for i in 0..n {
                prop_assert_eq!(rotated.coroot_exponent((i + 1) % n), c.coroot_exponent(i));
            }
        }

        #[test]
        fn class_rotation_has_order_dividing_n(
            q in 3u64..=16,
            entries in proptest::collection::vec(0u64..64, 2..=6),
        ) {
            let c = ExponentClassSL::from_entries(q, &entries);
            let n = c.n();
            let mut d = c.clone();
            let mut period = 0;
            for step in 1..=n {
                d = d.omega();
                if d == c {
                    period = step;
                    break;
                }
            }
            prop_assert!(period > 0);
            prop_assert_eq!(n % period, 0);
        }

        #[test]
        fn lifts_restrict_back(
            q in 3u64..=9,
            entries in proptest::collection::vec(0u64..64, 2..=5),
        ) {
            let c = ExponentClassSL::from_entries(q, &entries);
            let lifts = c.lifts();
            prop_assert_eq!(lifts.len() as u64, q - 1);
            for lift in lifts {
                prop_assert_eq!(lift.restrict(), c.clone());
            }
        }
    }
}
