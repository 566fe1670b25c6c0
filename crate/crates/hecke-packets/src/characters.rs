//! Supersingular characters of the pro-p Iwahori-Hecke algebra of SL_n
//! over a local field with residue field F_q, the rotation action on them,
//! the orbits (packets) it cuts them into, and the regularity condition.
//!
//! A character is a pair (lambda, J): a torus character lambda given as an
//! exponent class, and a subset J of the affine indices at which lambda
//! pairs trivially with the coroot. The pair determines the character
//! values: lambda on torus elements, -1 on the reflection generators named
//! by J, 0 on the rest. The trivial pair (lambda = 1, J empty) and the
//! sign pair (lambda = 1, J everything) are the two non-supersingular
//! characters and are excluded.
//!
//! The quadratic-relation checker at the bottom verifies the defining
//! algebra relations of each character with honest finite-field sums
//! rather than the closed form they are known to equal.

use crate::arith;
use crate::field::{FieldElement, FieldSpec};
use crate::weyl::{AffineSubset, ExponentClassSL, ExponentTupleGL};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("J must be contained in the vanishing set of the torus character")]
    SubsetNotAllowed,
    #[error("the trivial character is not supersingular")]
    TrivialCharacter,
    #[error("the sign character is not supersingular")]
    SignCharacter,
    #[error("rank mismatch: character has n = {lambda_n}, subset has n = {subset_n}")]
    RankMismatch { lambda_n: usize, subset_n: usize },
    #[error("field has q = {field_q} but the character lives over q = {expected_q}")]
    FieldMismatch { field_q: u64, expected_q: u64 },
}

/// The set of affine indices at which the torus character pairs trivially
/// with the coroot. Subsets J are only admissible inside this set.
pub fn s_lambda(lambda: &ExponentClassSL) -> AffineSubset {
    AffineSubset::from_indices(
        lambda.n(),
        (0..lambda.n()).filter(|&i| lambda.coroot_exponent(i) == 0),
    )
}

/// Same vanishing set for a character of the full GL torus.
pub fn s_lambda_gl(lambda_tilde: &ExponentTupleGL) -> AffineSubset {
    AffineSubset::from_indices(
        lambda_tilde.n(),
        (0..lambda_tilde.n()).filter(|&i| lambda_tilde.coroot_exponent(i) == 0),
    )
}

/// A supersingular character (lambda, J) of the SL_n Hecke algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupersingularCharacter {
    lambda: ExponentClassSL,
    j: AffineSubset,
}

impl SupersingularCharacter {
    pub fn new(lambda: ExponentClassSL, j: AffineSubset) -> Result<Self, CharacterError> {
        if lambda.n() != j.n() {
            return Err(CharacterError::RankMismatch {
                lambda_n: lambda.n(),
                subset_n: j.n(),
            });
        }
        if !j.is_subset_of(&s_lambda(&lambda)) {
            return Err(CharacterError::SubsetNotAllowed);
        }
        if lambda.is_trivial() {
            if j.is_empty() {
                return Err(CharacterError::TrivialCharacter);
            }
            if j.is_full() {
                return Err(CharacterError::SignCharacter);
            }
        }
        Ok(SupersingularCharacter { lambda, j })
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn q(&self) -> u64 {
        self.lambda.q()
    }

    pub fn lambda(&self) -> &ExponentClassSL {
        &self.lambda
    }

    pub fn j(&self) -> &AffineSubset {
        &self.j
    }

    /// The rotation action: lambda rotates, J shifts by one index.
    pub fn omega(&self) -> SupersingularCharacter {
        let next = SupersingularCharacter {
            lambda: self.lambda.omega(),
            j: self.j.rotate(1),
        };
        debug_assert!(next.j.is_subset_of(&s_lambda(&next.lambda)));
        next
    }

    /// True when every lift of lambda to the GL torus gives an affine
    /// character with full rotation orbit of size n. The lifts provably
    /// agree on this, but each one is checked anyway.
    pub fn is_regular(&self) -> bool {
        let n = self.n();
        self.lambda.lifts().into_iter().all(|lift| {
            AffineCharacterGL {
                lambda_tilde: lift,
                j: self.j,
            }
            .orbit_size()
                == n
        })
    }

    /// Character value on the reflection generator named by an affine
    /// index: -1 if the index is in J, 0 otherwise.
    pub fn reflection_value(&self, field: &FieldSpec, idx: usize) -> FieldElement {
        if self.j.contains(idx) {
            field.neg_one()
        } else {
            field.zero()
        }
    }
}

/// A character (lambda_tilde, J) of the affine Hecke algebra of GL_n: the
/// torus character is a full exponent tuple, with no diagonal quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineCharacterGL {
    lambda_tilde: ExponentTupleGL,
    j: AffineSubset,
}

impl AffineCharacterGL {
    pub fn new(lambda_tilde: ExponentTupleGL, j: AffineSubset) -> Result<Self, CharacterError> {
        if lambda_tilde.n() != j.n() {
            return Err(CharacterError::RankMismatch {
                lambda_n: lambda_tilde.n(),
                subset_n: j.n(),
            });
        }
        if !j.is_subset_of(&s_lambda_gl(&lambda_tilde)) {
            return Err(CharacterError::SubsetNotAllowed);
        }
        Ok(AffineCharacterGL { lambda_tilde, j })
    }

    pub fn lambda_tilde(&self) -> &ExponentTupleGL {
        &self.lambda_tilde
    }

    pub fn j(&self) -> &AffineSubset {
        &self.j
    }

    pub fn omega(&self) -> AffineCharacterGL {
        AffineCharacterGL {
            lambda_tilde: self.lambda_tilde.omega(),
            j: self.j.rotate(1),
        }
    }

    /// Restriction to the SL torus: quotient the tuple by the diagonal.
    pub fn restrict(&self) -> Result<SupersingularCharacter, CharacterError> {
        SupersingularCharacter::new(self.lambda_tilde.restrict(), self.j)
    }

    /// Size of the rotation orbit: the smallest d > 0 fixing both the
    /// tuple (exactly, no diagonal quotient) and the subset. Divides n.
    pub fn orbit_size(&self) -> usize {
        let n = self.lambda_tilde.n();
        let entries = self.lambda_tilde.entries();
        'outer: for d in arith::divisors(n as u64) {
            let d = d as usize;
            for i in 0..n {
                if entries[i] != entries[(i + d) % n] {
                    continue 'outer;
                }
            }
            if self.j.rotate(d) == self.j {
                return d;
            }
        }
        unreachable!("rotation by n fixes everything")
    }
}

/// An orbit of supersingular characters under the rotation action, with
/// members sorted and the smallest one serving as representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPacket {
    members: Vec<SupersingularCharacter>,
    regular: bool,
}

impl LPacket {
    fn from_orbit(mut members: Vec<SupersingularCharacter>) -> LPacket {
        members.sort_unstable();
        let flags: Vec<bool> = members.iter().map(|c| c.is_regular()).collect();
        let regular = flags[0];
        assert!(
            flags.iter().all(|&f| f == regular),
            "regularity must be constant on a packet"
        );
        LPacket { members, regular }
    }

    pub fn members(&self) -> &[SupersingularCharacter] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn representative(&self) -> &SupersingularCharacter {
        &self.members[0]
    }

    pub fn regular(&self) -> bool {
        self.regular
    }

    pub fn n(&self) -> usize {
        self.representative().n()
    }

    pub fn q(&self) -> u64 {
        self.representative().q()
    }
}

fn orbit_of(chi: &SupersingularCharacter) -> Vec<SupersingularCharacter> {
    let mut members = vec![chi.clone()];
    let mut current = chi.omega();
    while &current != chi {
        members.push(current.clone());
        current = current.omega();
    }
    debug_assert_eq!(chi.n() % members.len(), 0, "orbit size must divide n");
    members
}

/// The packet (rotation orbit) through one character.
pub fn packet_of(chi: &SupersingularCharacter) -> LPacket {
    LPacket::from_orbit(orbit_of(chi))
}

/// Number of raw (class, subset) pairs a full enumeration ranges over:
/// (q-1)^(n-1) classes times 2^n subsets. Used for budget checks.
pub fn enumeration_cost(n: usize, q: u64) -> u128 {
    let classes = (q as u128 - 1).pow(n as u32 - 1);
    classes.saturating_mul(1u128 << n)
}

/// All supersingular characters for the given rank and residue field, in
/// a fixed deterministic order: classes by lexicographic canonical tuple,
/// then subsets of the vanishing set in binary-counter order.
pub fn enumerate_supersingular(n: usize, q: u64) -> Vec<SupersingularCharacter> {
    assert!(n >= 2, "rank must be at least 2");
    assert!(q >= 2, "residue field must have at least 2 elements");
    let m = q - 1;
    let class_count = m.checked_pow(n as u32 - 1).expect("class count overflow");

    let decode = |k: u64| -> ExponentClassSL {
        // Most-significant digit first, so ascending k is ascending
        // lexicographic order of the canonical tuple.
        let mut entries = vec![0u64; n];
        let mut rest = k;
        for slot in entries[..n - 1].iter_mut().rev() {
            *slot = rest % m;
            rest /= m;
        }
        ExponentClassSL::from_entries(q, &entries)
    };

    (0..class_count)
        .into_par_iter()
        .map(|k| {
            let lambda = decode(k);
            let allowed = s_lambda(&lambda);
            let trivial = lambda.is_trivial();
            let full = AffineSubset::full(n);
            let mask = allowed.bits();
            let mut out = Vec::new();
            let mut sub = 0u64;
            loop {
                let j = AffineSubset::from_bits(n, sub);
                let skip = trivial && (j.is_empty() || j == full);
                if !skip {
                    out.push(SupersingularCharacter {
                        lambda: lambda.clone(),
                        j,
                    });
                }
                if sub == mask {
                    break;
                }
                sub = sub.wrapping_sub(mask) & mask;
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Partition of all supersingular characters into packets, sorted by
/// packet representative. Each packet carries its regularity flag.
pub fn all_packets(n: usize, q: u64) -> Vec<LPacket> {
    let chars = enumerate_supersingular(n, q);
    let mut packets: Vec<LPacket> = chars
        .par_iter()
        .filter_map(|chi| {
            let orbit = orbit_of(chi);
            // Emit each orbit once, from its smallest member.
            if orbit.iter().min() == Some(chi) {
                Some(LPacket::from_orbit(orbit))
            } else {
                None
            }
        })
        .collect();
    packets.sort_unstable_by(|a, b| a.representative().cmp(b.representative()));
    packets
}

fn relations_hold<E, V>(
    n: usize,
    q: u64,
    field: &FieldSpec,
    exponent: E,
    value: V,
) -> Result<bool, CharacterError>
where
    E: Fn(usize) -> u32,
    V: Fn(usize) -> bool,
{
    if field.q() != q {
        return Err(CharacterError::FieldMismatch {
            field_q: field.q(),
            expected_q: q,
        });
    }
    // q vanishes in characteristic p.
    let q_bar = field.from_int(q as i64);
    for i in 0..n {
        let c = if value(i) { field.neg_one() } else { field.zero() };
        let e = exponent(i) as u64;
        // Character value on the sum of torus elements in the coroot
        // image: an honest power sum over the field.
        let tau = field.power_sum(e);
        // The square of the reflection lift is the coroot at -1.
        let t_square = field.pow(field.neg_one(), e);
        let lhs = field.mul(c, c);
        let rhs = field.add(field.mul(q_bar, t_square), field.mul(c, tau));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check the quadratic relations for a supersingular character: for every
/// affine index, value^2 = q * value(coroot at -1) + value * power_sum,
/// evaluated in F_q by literal summation.
pub fn verify_hecke_relations(
    chi: &SupersingularCharacter,
    field: &FieldSpec,
) -> Result<bool, CharacterError> {
    relations_hold(
        chi.n(),
        chi.q(),
        field,
        |i| chi.lambda.coroot_exponent(i),
        |i| chi.j.contains(i),
    )
}

/// The same check for an affine character of GL_n.
pub fn verify_hecke_relations_affine(
    chi: &AffineCharacterGL,
    field: &FieldSpec,
) -> Result<bool, CharacterError> {
    relations_hold(
        chi.lambda_tilde.n(),
        chi.lambda_tilde.q(),
        field,
        |i| chi.lambda_tilde.coroot_exponent(i),
        |i| chi.j.contains(i),
    )
}

/// Relation check on a raw (class, subset) pair that need not satisfy the
/// admissibility invariant. Pairs with J outside the vanishing set fail.
pub fn hecke_relations_hold_raw(
    lambda: &ExponentClassSL,
    j: &AffineSubset,
    field: &FieldSpec,
) -> Result<bool, CharacterError> {
    if lambda.n() != j.n() {
        return Err(CharacterError::RankMismatch {
            lambda_n: lambda.n(),
            subset_n: j.n(),
        });
    }
    relations_hold(
        lambda.n(),
        lambda.q(),
        field,
        |i| lambda.coroot_exponent(i),
        |i| j.contains(i),
    )
}
