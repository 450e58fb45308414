//! Sign arithmetic in an ordered tower of infinite and infinitesimal
//! generators, and the sandwich computations with the idempotent `u_G` of
//! the `SL_2` type space.

pub mod expr;
pub mod lemmas;
pub mod oracle;
pub mod poly;
pub mod tower;

pub use expr::{parse, random_expr, Expr};
pub use lemmas::{h_on_types, u_g, ug_sandwich, ug_sandwich_entry, EllisClass, Sandwich, TMat};
pub use poly::{Poly, RatFn};
pub use tower::{Kind, SignReport, Tower};
