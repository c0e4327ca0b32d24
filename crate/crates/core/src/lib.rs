//! Resolution combinatorics, jumping numbers and relevant exceptional
//! divisors of plane curve singularities, in exact arithmetic.
//!
//! The pipeline runs from a polynomial (or combinatorial branch data)
//! through the Enriques diagram of the minimal embedded resolution to the
//! numerical data `a`, `k`, the intersection matrix and the valences, and
//! from there to the jumping numbers and the divisors that contribute them.
//!
//! ```
//! use planejump::arith::{fmt_rational, Rational};
//! use planejump::jumping::jumping_numbers;
//! use planejump::puiseux::{parse, puiseux_branches, to_diagram};
//! use planejump::resolution::ResolutionData;
//!
//! let f = parse("x^4 - y^3")?;
//! let d = to_diagram(&puiseux_branches(&f, 2)?)?;
//! let r = ResolutionData::new(&d)?;
//! let report = jumping_numbers(&r, &Rational::from_integer(1.into()))?;
//! let lambdas: Vec<String> = report.records.iter().map(|x| fmt_rational(&x.lambda)).collect();
//! assert_eq!(lambdas, ["7/12", "5/6", "11/12", "1"]);
//! # Ok::<(), planejump::Error>(())
//! ```

pub mod arith;
pub mod branch;
pub mod cluster;
pub mod corpus;
pub mod error;
pub mod jumping;
pub mod oracle;
pub mod puiseux;
pub mod resolution;

pub use error::{Error, Result};
