//! Supersingular characters and L-packets of the pro-p Iwahori-Hecke
//! algebra of SL_n over a local field with residue field F_q.
//!
//! The crate enumerates the characters exactly, partitions them into
//! packets under the rotation action, evaluates the closed-form packet
//! counts next to brute-force tallies, enumerates the residue classes
//! parametrizing irreducible projective mod-p Galois representations, and
//! — for prime residue fields — realizes the explicit bijection between
//! regular packets and projective classes.
//!
//! All counting is exact big-integer arithmetic; nothing is ever floated
//! or rounded. See the `book/` directory for the long-form guide (its
//! code blocks are compiled as doc-tests via the [`guide`] module), and
//! the `hecke-packets` binary for the command-line front end.

pub mod arith;
pub mod characters;
pub mod cli;
pub mod correspondence;
pub mod counting;
pub mod field;
pub mod galois;
pub mod guide;
pub mod weyl;

pub use characters::{LPacket, SupersingularCharacter};
pub use counting::CountReport;
pub use galois::ProjectiveClass;

/// Serialize an arbitrary-precision residue as a decimal string, so JSON
/// output stays exact at any size.
pub(crate) fn serialize_biguint<S: serde::Serializer>(
    v: &num_bigint::BigUint,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&v.to_string())
}
