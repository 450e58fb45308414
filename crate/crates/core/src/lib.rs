//! Finite and exact-symbolic machinery for generalized definable locally
//! compact models of approximate subgroups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] and [`subset`]: finite groups with dense indexing and the
//!   bitset subset calculus (`X^n`, doubling witnesses, covers).
//! * [`algebra`]: left-invariant Boolean algebras of subsets, the
//!   d-operator, d-closure and the Stone semigroup on atoms.
//! * [`ellis`]: minimal left ideals, Ellis groups, the circle operation,
//!   `cl_tau` and the Hausdorff quotient.
//! * [`pipeline`]: the `F_n` tower, the error set `C`, the map `f` and the
//!   certificate for the main theorem.
//! * [`quasihom`]: quasi-homomorphism checkers, exponent budgets,
//!   morphisms and the universality constructions.
//! * [`sl2`]: exact `SL2(Q)` arithmetic, the cocycle `h` and the cover law.
//! * [`nonstd`]: an ordered tower of transcendental blocks with decidable
//!   sign, used for the `u_G` sandwich computations.

pub mod algebra;
pub mod certificate;
pub mod ellis;
pub mod error;
pub mod exec;
pub mod explain;
pub mod gen;
pub mod group;
pub mod instance;
pub mod nonstd;
pub mod pipeline;
pub mod quasihom;
pub mod sl2;
pub mod subset;
pub mod suites;

pub use error::{Error, Result};
pub use exec::Exec;
pub use group::{FiniteGroup, Group};
pub use subset::GSubset;
