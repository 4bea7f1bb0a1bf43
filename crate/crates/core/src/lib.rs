//! Exact computer algebra for quantized enveloping algebras at roots of unity,
//! the quantized flag manifold's coordinate ring and its differential operators.

pub mod center_azumaya;
pub mod diffops;
pub mod expr;
pub mod pairing;
pub mod qcoord;
pub mod qreps;
pub mod qscalars;
pub mod rootdata;
pub mod suites;
pub mod uqalg;
