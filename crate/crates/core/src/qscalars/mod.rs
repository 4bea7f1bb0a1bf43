//! Exact coefficient arithmetic: `Q(v)` with `v = q^(1/d)`, cyclotomic fields,
//! q-combinatorics, and specialization at a primitive root of unity.

pub mod cyc;
pub mod field;
pub mod laurent;
pub mod parse;
pub mod qnum;
pub mod qscalar;

pub use cyc::CycScalar;
pub use field::{Field, Mat};
pub use laurent::Laurent;
pub use parse::{parse_scalar, parse_scalar_with_q};
pub use qnum::{qbinom, qfact, qint, RootConfigError, RootOfUnityConfig, SpecializeError};
pub use qscalar::QScalar;
