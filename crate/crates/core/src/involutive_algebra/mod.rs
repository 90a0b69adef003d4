//! Rings with involution and affine monoids with involution.

mod monoid;
mod ring;
pub mod spec;

pub use monoid::{AffineMonoid, MonoidElement, WeightMap};
pub use ring::{InvolutiveRing, RingHom};
