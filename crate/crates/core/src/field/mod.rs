//! Exact coefficient arithmetic over the oscillator parameters.
//!
//! The coefficient field is the field of rational functions in the model
//! parameters (`a`, `b`, `omega`, `epsilon`, plus any custom anharmonicity
//! coefficients) with rational number coefficients, represented as reduced
//! ratios of integer polynomials.

mod gcd;
mod parse;
mod poly;
mod ratio;

pub use gcd::{divide_exact, poly_gcd, poly_lcm};
pub use parse::{parse_ratio, ParseError};
pub use poly::{EvalError, Monomial, ParamPoly, Var};
pub use ratio::ParamRatio;
