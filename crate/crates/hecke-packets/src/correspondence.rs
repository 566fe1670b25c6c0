//! The explicit packet-to-projective-class correspondence for prime
//! residue fields (q = p).
//!
//! Each supersingular character over F_p determines a tuple of integers
//! k_1, ..., k_n in [0, p-1]: at each affine index the coroot pairing
//! exponent e gives k = p-1-e when e is nonzero, and a trivial pairing
//! contributes p-1 or 0 according to whether the index sits in J. The
//! weighted digit sum of the k-tuple is divisible by p-1 and yields the
//! integer
//!
//! ```text
//! r = (1/(p-1)) * sum over j < n of (p-1-k_{n-j}) p^j,
//! ```
//!
//! the exponent of the residue class attached to the character. The same
//! digit sum describes a one-dimensional semilinear module: a basis
//! vector is scaled by an explicit unit and a monomial under the two
//! module operators; that exponent/scalar/fraction triple is
//! [`PhiGammaData`].
//!
//! A character is regular exactly when its r is primitive, a packet's
//! members land in a single projective class, and the class's d_sigma
//! equals the packet size — so mapping packets to classes through r is a
//! bijection size-by-size. [`verify_wbij`] checks all of that
//! exhaustively for one (n, p).

use crate::arith;
use crate::characters::{all_packets, LPacket, SupersingularCharacter};
use crate::galois::{projective_classes, GaloisError, ProjectiveClassSet};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("the correspondence needs a prime residue field, got q = {q}")]
    NonPrimeResidueField { q: u64 },
    /// The digit sum must be divisible by p-1; anything else would
    /// falsify the integrality theorem, so it aborts rather than rounds.
    #[error("digit sum {sum} is not divisible by p-1 = {modulus}")]
    NonIntegralExponent { sum: BigUint, modulus: u64 },
    #[error("regular packet member produced the non-primitive residue {r}")]
    RegularMemberNotPrimitive { r: BigUint },
    #[error("non-regular packet member produced the primitive residue {r}")]
    NonRegularMemberPrimitive { r: BigUint },
    #[error("packet members landed in different projective classes ({first} vs {second})")]
    PacketSplitAcrossClasses { first: BigUint, second: BigUint },
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

/// The integer tuple (k_1, ..., k_n) attached to a supersingular
/// character over a prime residue field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTuple {
    p: u64,
    entries: Vec<u64>,
}

impl KTuple {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Entries k_1, ..., k_n, each in [0, p-1].
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// The digit sum `sum over j < n of (p-1-k_{n-j}) p^j`.
    pub fn digit_sum(&self) -> BigUint {
        let n = self.n();
        let p = BigUint::from(self.p);
        let mut power = BigUint::one();
        let mut sum = BigUint::zero();
        for j in 0..n {
            // k_{n-j} in 1-based notation is entries[n-1-j].
            sum += BigUint::from(self.p - 1 - self.entries[n - 1 - j]) * &power;
            power *= &p;
        }
        sum
    }
}

/// The k-tuple of a character: the boundary rule puts p-1 at indices of J
/// with trivial pairing, 0 at indices outside J with trivial pairing, and
/// the representative of minus the pairing exponent in [1, p-2] elsewhere.
pub fn k_tuple_of(chi: &SupersingularCharacter) -> Result<KTuple, CorrespondenceError> {
    let p = chi.q();
    if !arith::is_prime(p) {
        return Err(CorrespondenceError::NonPrimeResidueField { q: p });
    }
    let n = chi.n();
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let e = chi.lambda().coroot_exponent(i) as u64;
        let k = if e == 0 {
            if chi.j().contains(i) {
                p - 1
            } else {
                0
            }
        } else {
            // -e mod p-1, which lands in [1, p-2] since e does.
            p - 1 - e
        };
        entries.push(k);
    }
    let tuple = KTuple { p, entries };
    debug_assert!(
        (tuple.entries.iter().sum::<u64>()) % (p - 1).max(1) == 0,
        "k-tuple entries must sum to 0 mod p-1"
    );
    Ok(tuple)
}

/// The residue exponent r of a character: the digit sum of its k-tuple
/// divided (exactly) by p-1. Always lies strictly between 0 and [n].
pub fn r_of(chi: &SupersingularCharacter) -> Result<BigUint, CorrespondenceError> {
    let tuple = k_tuple_of(chi)?;
    let sum = tuple.digit_sum();
    let modulus = BigUint::from(tuple.p - 1);
    let (quot, rem) = num_integer::Integer::div_rem(&sum, &modulus);
    if !rem.is_zero() {
        return Err(CorrespondenceError::NonIntegralExponent {
            sum,
            modulus: tuple.p - 1,
        });
    }
    Ok(quot)
}

/// Exponent/scalar data of the one-dimensional semilinear module attached
/// to a character: the power of the variable and the unit scaling the
/// basis vector under the n-fold operator, and the exact fractional
/// exponent of the second operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiGammaData {
    pub p: u64,
    pub n: usize,
    /// Minus the digit sum: the basis vector picks up t^phi_exponent.
    pub phi_exponent: BigInt,
    /// (-1)^n times the inverse of the product of the k_j factorials,
    /// as a nonzero element of F_p.
    pub phi_scalar: u64,
    /// digit sum / (p^n - 1), kept exact and reduced.
    pub gamma_exponent: BigRational,
}

/// Compute the module data for a character over a prime residue field.
pub fn phi_gamma_of(chi: &SupersingularCharacter) -> Result<PhiGammaData, CorrespondenceError> {
    let tuple = k_tuple_of(chi)?;
    let p = tuple.p;
    let n = tuple.n();
    let sum = tuple.digit_sum();

    // (prod k_j!)^(-1) mod p; every k_j <= p-1 keeps the product a unit.
    let mut product = 1u64;
    for &k in tuple.entries() {
        for m in 1..=k {
            product = product * m % p;
        }
    }
    let inverse = pow_mod(product, p - 2, p);
    let phi_scalar = if n % 2 == 0 {
        inverse
    } else {
        (p - inverse) % p
    };
    assert!(phi_scalar != 0, "the scalar is a unit by construction");

    let pn_minus_1 = BigInt::from(crate::galois::modulus(n, p));
    let sum_int = BigInt::from(sum);
    Ok(PhiGammaData {
        p,
        n,
        phi_exponent: -sum_int.clone(),
        phi_scalar,
        gamma_exponent: BigRational::new(sum_int, pn_minus_1),
    })
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Where a packet lands on the residue side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WImage {
    /// All members produced primitive residues in one projective class.
    Irreducible {
        class_index: usize,
        r_values: Vec<BigUint>,
    },
    /// All members produced non-primitive residues (non-regular packets).
    NonIrreducible { r_values: Vec<BigUint> },
}

/// Map a packet to its projective class by computing r for every member
/// and locating it in the class partition. Members of one packet must
/// land in a single class, and regularity must match primitivity; either
/// failing is a theorem violation and comes back as an error.
pub fn w_map(
    packet: &LPacket,
    classes: &ProjectiveClassSet,
) -> Result<WImage, CorrespondenceError> {
    let mut r_values = Vec::with_capacity(packet.size());
    let mut image: Option<usize> = None;
    for member in packet.members() {
        let r = r_of(member)?;
        let class = classes.class_index_of(&r);
        match (packet.regular(), class) {
            (true, None) => {
                return Err(CorrespondenceError::RegularMemberNotPrimitive { r });
            }
            (false, Some(_)) => {
                return Err(CorrespondenceError::NonRegularMemberPrimitive { r });
            }
            (true, Some(idx)) => {
                if let Some(prev) = image {
                    if prev != idx {
                        return Err(CorrespondenceError::PacketSplitAcrossClasses {
                            first: classes.classes()[prev].representative.clone(),
                            second: classes.classes()[idx].representative.clone(),
                        });
                    }
                } else {
                    image = Some(idx);
                }
            }
            (false, None) => {}
        }
        r_values.push(r);
    }
    Ok(match image {
        Some(class_index) => WImage::Irreducible {
            class_index,
            r_values,
        },
        None => WImage::NonIrreducible { r_values },
    })
}

/// One regular packet's image in the verification report.
#[derive(Debug, Clone)]
pub struct PacketMatch {
    pub packet: LPacket,
    /// Residues of the members, in member order.
    pub r_values: Vec<BigUint>,
    pub class_index: usize,
    pub class_representative: BigUint,
    pub d_sigma: usize,
    /// Size agrees with d_sigma and no other packet claimed the class.
    pub matched: bool,
}

/// A non-regular packet and the (non-primitive) residues it produced.
#[derive(Debug, Clone)]
pub struct NonRegularImage {
    pub packet: LPacket,
    pub r_values: Vec<BigUint>,
}

/// Per-divisor tally of both sides of the bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeTally {
    pub d: usize,
    pub regular_packets: u64,
    pub projective_classes: u64,
}

/// Everything `verify_wbij` found for one (n, p).
#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub n: usize,
    pub p: u64,
    pub matching: Vec<PacketMatch>,
    pub non_regular: Vec<NonRegularImage>,
    pub tallies: Vec<SizeTally>,
    /// True when the packet-to-class map is a bijection respecting sizes.
    pub bijection: bool,
}

/// Verify that mapping regular packets through r is a bijection onto
/// projective classes, divisor by divisor, and report the full matching.
pub fn verify_wbij(n: usize, p: u64) -> Result<CorrespondenceReport, CorrespondenceError> {
    if !arith::is_prime(p) {
        return Err(CorrespondenceError::NonPrimeResidueField { q: p });
    }
    let packets = all_packets(n, p);
    let classes = projective_classes(n, p)?;

    let mut claimed: Vec<Option<usize>> = vec![None; classes.len()];
    let mut matching = Vec::new();
    let mut non_regular = Vec::new();
    let mut all_matched = true;

    for (pi, packet) in packets.iter().enumerate() {
        match w_map(packet, &classes)? {
            WImage::Irreducible {
                class_index,
                r_values,
            } => {
                let class = &classes.classes()[class_index];
                let mut matched = class.d_sigma == packet.size();
                if claimed[class_index].is_some() {
                    matched = false;
                } else {
                    claimed[class_index] = Some(pi);
                }
                all_matched &= matched;
                matching.push(PacketMatch {
                    packet: packet.clone(),
                    r_values,
                    class_index,
                    class_representative: class.representative.clone(),
                    d_sigma: class.d_sigma,
                    matched,
                });
            }
            WImage::NonIrreducible { r_values } => {
                non_regular.push(NonRegularImage {
                    packet: packet.clone(),
                    r_values,
                });
            }
        }
    }

    let surjective = claimed.iter().all(Option::is_some);
    let tallies: Vec<SizeTally> = arith::divisors(n as u64)
        .into_iter()
        .map(|d| {
            let d = d as usize;
            SizeTally {
                d,
                regular_packets: packets
                    .iter()
                    .filter(|p| p.regular() && p.size() == d)
                    .count() as u64,
                projective_classes: classes
                    .classes()
                    .iter()
                    .filter(|c| c.d_sigma == d)
                    .count() as u64,
            }
        })
        .collect();
    let tallies_agree = tallies
        .iter()
        .all(|t| t.regular_packets == t.projective_classes);

    Ok(CorrespondenceReport {
        n,
        p,
        matching,
        non_regular,
        tallies,
        bijection: surjective && all_matched && tallies_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_supersingular, packet_of};
    use crate::galois::is_primitive;
    use crate::weyl::{AffineSubset, ExponentClassSL};

    fn chi(n: usize, q: u64, entries: &[u64], j: &[usize]) -> SupersingularCharacter {
        SupersingularCharacter::new(
            ExponentClassSL::from_entries(q, entries),
            AffineSubset::from_indices(n, j.iter().copied()),
        )
        .unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn k_tuple_examples() {
        assert_eq!(k_tuple_of(&chi(2, 3, &[0, 0], &[1])).unwrap().entries(), &[0, 2]);
        assert_eq!(k_tuple_of(&chi(2, 3, &[0, 0], &[0])).unwrap().entries(), &[2, 0]);
        assert_eq!(k_tuple_of(&chi(2, 3, &[0, 1], &[])).unwrap().entries(), &[1, 1]);
    }

    #[test]
    fn k_tuple_rejects_prime_powers() {
        assert_eq!(
            k_tuple_of(&chi(2, 9, &[0, 1], &[])),
            Err(CorrespondenceError::NonPrimeResidueField { q: 9 })
        );
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_of(&chi(2, 3, &[0, 0], &[1])).unwrap(), big(3));
        assert_eq!(r_of(&chi(2, 3, &[0, 0], &[0])).unwrap(), big(1));
        assert_eq!(r_of(&chi(2, 3, &[0, 1], &[])).unwrap(), big(2));
    }

    #[test]
    fn phi_gamma_examples() {
        let data = phi_gamma_of(&chi(2, 3, &[0, 0], &[1])).unwrap();
        assert_eq!(data.phi_exponent, BigInt::from(-6));
        assert_eq!(data.phi_scalar, 2);
        assert_eq!(
            data.gamma_exponent,
            BigRational::new(BigInt::from(3), BigInt::from(4))
        );

        let data = phi_gamma_of(&chi(2, 3, &[0, 1], &[])).unwrap();
        assert_eq!(data.phi_exponent, BigInt::from(-4));
        assert_eq!(data.phi_scalar, 1);
        assert_eq!(
            data.gamma_exponent,
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn gamma_exponent_cancels_phi_exponent() {
        for p in [3u64, 5, 7] {
            for chi in enumerate_supersingular(3, p) {
                let data = phi_gamma_of(&chi).unwrap();
                let pn_minus_1 = BigRational::from(BigInt::from(crate::galois::modulus(3, p)));
                let total = &data.gamma_exponent * pn_minus_1 + BigRational::from(data.phi_exponent.clone());
                assert!(total.is_zero(), "p = {p}");
            }
        }
    }

    #[test]
    fn phi_data_separates_characters() {
        for (n, p) in [(2usize, 3u64), (2, 5), (3, 3), (3, 5), (2, 7)] {
            let mut seen = std::collections::HashMap::new();
            for chi in enumerate_supersingular(n, p) {
                let data = phi_gamma_of(&chi).unwrap();
                let key = (data.phi_exponent.clone(), data.phi_scalar);
                if let Some(previous) = seen.insert(key, chi.clone()) {
                    panic!("characters {previous:?} and {chi:?} share module data at n = {n}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn r_is_integral_and_detects_regularity() {
        for (n, p) in [(2usize, 3u64), (2, 5), (3, 3), (3, 5), (3, 7), (4, 3), (4, 5)] {
            for chi in enumerate_supersingular(n, p) {
                let r = r_of(&chi).unwrap();
                assert_eq!(
                    chi.is_regular(),
                    is_primitive(n, p, &r),
                    "regularity/primitivity mismatch at n = {n}, p = {p}, chi = {chi:?}"
                );
            }
        }
    }

    // The pairing exponent at affine index 0 is the difference a_n - a_1.
    // Flipping it to a_1 - a_n breaks integrality of the digit sum, so
    // the orientation is pinned, not chosen.
    #[test]
    fn flipped_index_zero_orientation_breaks_integrality() {
        let p = 7u64;
        let n = 3usize;
        let mut flipped_failure = false;
        for chi in enumerate_supersingular(n, p) {
            let mut entries = Vec::with_capacity(n);
            for i in 0..n {
                let e = chi.lambda().coroot_exponent(i) as u64;
                let e = if i == 0 && e != 0 { p - 1 - e } else { e };
                let k = if e == 0 {
                    if chi.j().contains(i) {
                        p - 1
                    } else {
                        0
                    }
                } else {
                    p - 1 - e
                };
                entries.push(k);
            }
            let tuple = KTuple { p, entries };
            if (tuple.digit_sum() % BigUint::from(p - 1)) != BigUint::zero() {
                flipped_failure = true;
                break;
            }
        }
        assert!(flipped_failure, "the flipped orientation should fail integrality somewhere");
    }

    #[test]
    fn w_map_examples() {
        let classes = projective_classes(2, 3).unwrap();

        let packet = packet_of(&chi(2, 3, &[0, 0], &[0]));
        match w_map(&packet, &classes).unwrap() {
            WImage::Irreducible {
                class_index,
                r_values,
            } => {
                assert_eq!(r_values, vec![big(1), big(3)]);
                let class = &classes.classes()[class_index];
                assert_eq!(class.representative, big(1));
                assert_eq!(class.d_sigma, 2);
                assert_eq!(class.d_sigma, packet.size());
            }
            other => panic!("expected an irreducible image, got {other:?}"),
        }

        let packet = packet_of(&chi(2, 3, &[0, 1], &[]));
        match w_map(&packet, &classes).unwrap() {
            WImage::Irreducible {
                class_index,
                r_values,
            } => {
                assert_eq!(r_values, vec![big(2)]);
                let class = &classes.classes()[class_index];
                assert_eq!(class.representative, big(2));
                assert_eq!(class.d_sigma, 1);
            }
            other => panic!("expected an irreducible image, got {other:?}"),
        }
    }

    #[test]
    fn non_regular_packets_map_to_non_primitive_residues() {
        let classes = projective_classes(4, 3).unwrap();
        let packet = packet_of(&chi(4, 3, &[0, 0, 0, 0], &[0, 2]));
        assert!(!packet.regular());
        match w_map(&packet, &classes).unwrap() {
            WImage::NonIrreducible { r_values } => {
                assert!(r_values.contains(&big(10)));
                for r in r_values {
                    assert!(!is_primitive(4, 3, &r));
                }
            }
            other => panic!("expected a non-irreducible image, got {other:?}"),
        }
    }

    #[test]
    fn packet_size_equals_d_sigma() {
        for (n, p) in [(2usize, 3u64), (2, 5), (3, 7), (4, 5)] {
            let classes = projective_classes(n, p).unwrap();
            for packet in all_packets(n, p) {
                if !packet.regular() {
                    continue;
                }
                if let WImage::Irreducible { class_index, .. } = w_map(&packet, &classes).unwrap()
                {
                    assert_eq!(
                        classes.classes()[class_index].d_sigma,
                        packet.size(),
                        "n = {n}, p = {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn wbij_small_cases() {
        let report = verify_wbij(2, 3).unwrap();
        assert!(report.bijection);
        assert_eq!(report.matching.len(), 2);
        assert!(report.non_regular.is_empty());

        let report = verify_wbij(2, 5).unwrap();
        assert!(report.bijection);
        assert_eq!(report.matching.len(), 3);

        let report = verify_wbij(3, 7).unwrap();
        assert!(report.bijection);
        let by_d: Vec<(usize, u64)> = report
            .tallies
            .iter()
            .map(|t| (t.d, t.regular_packets))
            .collect();
        assert_eq!(by_d, vec![(1, 2), (3, 18)]);
    }

    #[test]
    fn wbij_rejects_prime_powers() {
        assert!(matches!(
            verify_wbij(2, 9),
            Err(CorrespondenceError::NonPrimeResidueField { q: 9 })
        ));
    }
}
