//! Exact arithmetic in multiquadratic towers over Q or a real quadratic field.

pub mod base;
pub mod finite;
pub mod place;
pub mod prime;
pub mod rat;
pub mod reduce;
pub mod tower;

pub use base::{BaseElem, BaseField};
pub use finite::{Fq, FqElem};
pub use place::{sign_at, RealPlace};
pub use prime::{prime_split, reduce_mod, PrimeIdeal, PrimeKind};
pub use rat::Q;
pub use reduce::TowerReduction;
pub use tower::{ExtField, FieldElem, GaloisChar, Op};
