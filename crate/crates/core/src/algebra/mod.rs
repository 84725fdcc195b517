//! Scalars, polynomials and the pairing-group abstraction.

mod backend;
mod field;
mod poly;

pub use backend::{Bls12Backend, GroupElement, PairingBackend, Toy101, Toy7919, ToyBackend, ToyGroup, ToyGt};
pub use field::{Field, ToyScalar};
pub use poly::{interpolate, interpolate_at_nodes, Polynomial};
