//! The quantized enveloping algebra `U` over `Q(v)`: triangular normal form,
//! Hopf structure, braid automorphisms, PBW bases, specialization at a root of
//! unity and the Frobenius map.

pub mod algebra;
pub mod braid;
pub mod elem;
pub mod frobenius;
pub mod hopf;
pub mod pbw;
pub mod specialize;
pub mod text;
pub mod words;

pub use algebra::{Uq, UqError, DEFAULT_HT_BOUND};
pub use elem::{Tensor, TermKey, UElem};
pub use pbw::{Form, Mono, PbwElem, PbwKey};
pub use words::{Gamma, Word};
pub use specialize::ZElem;
pub use frobenius::{ClassicalElem, ClassicalTensor};
