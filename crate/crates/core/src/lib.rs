//! Right loops induced by transversals of an order-2 subgroup in the
//! dihedral group `D_2n` (`n` odd), their isotopy classes, and the cycle
//! index of the affine group `Aff(1, n)` that counts them.
//!
//! The crate is organised bottom-up:
//!
//! - [`modular`]: `Z_n`, units, affine maps `x ↦ νx + u`.
//! - [`subset`]: subsets of `Z_n` as bit masks.
//! - [`right_loop`]: Cayley tables, `Z_n^A`, principal isotopes, and
//!   brute-force isomorphism/isotopy searches.
//! - [`dihedral`]: `D_2n`, transversals `T_A` and their induced operation.
//! - [`classify`]: isotopy classes as affine orbits, swept over all subsets.
//! - [`cycle_index`]: cycle indices of `Aff(1, n)`, the closed form for
//!   `Aff(1, p²)`, and the class count.
//! - [`verify`]: the self-check suite behind the `verify` command.
//! - [`cli`]: the command-line front end.
//!
//! ```
//! use dihedral_isotopy::{classify::{classify_all, ClassifyOptions}, cycle_index::itp_count, Modulus};
//!
//! let n = Modulus::new_odd(9)?;
//! let classes = classify_all(n, ClassifyOptions::default())?;
//! assert_eq!(classes.count(), 11);
//! assert_eq!(itp_count(n)?, 11u32.into());
//! # Ok::<(), dihedral_isotopy::Error>(())
//! ```

pub mod classify;
pub mod cli;
pub mod cycle_index;
pub mod dihedral;
mod error;
pub mod modular;
pub mod permutation;
pub mod right_loop;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use modular::{AffineMap, Modulus, Residue};
pub use permutation::Permutation;
pub use subset::{SubsetA, ZnSet};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/right-loops.md")]
    mod right_loops {}
    #[doc = include_str!("../../../book/src/transversals.md")]
    mod transversals {}
    #[doc = include_str!("../../../book/src/isotopy.md")]
    mod isotopy {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/cycle-index.md")]
    mod cycle_index {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
