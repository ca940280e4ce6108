//! Quasi-F-split heights: Witt vectors, Dieudonné modules, divisors on P¹, elliptic covers
//! and direct Čech verification.

pub mod dieudonne;
pub mod divisor;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod height;
pub mod logcy;
pub mod poly;
pub mod qfs;
pub mod ratfunc;
pub mod witt;

pub use divisor::{PointP1, QDivisor};
pub use error::{Error, Result};
pub use field::{Field, Fq, FqContext};
pub use height::HeightResult;
pub use logcy::LogCYClass;
pub use poly::Laurent;
pub use qfs::{SplitQuery, SplitVerdict};
pub use ratfunc::RationalFunctionElem;
pub use witt::{WittRingContext, WittVector};
