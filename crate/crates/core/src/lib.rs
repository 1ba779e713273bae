//! Exact series solution of the Sakiadis boundary layer.
//!
//! - [`series`]: truncated power series, Miller powers, reversion, root test
//! - [`sakiadis`]: far-field coefficients and the constants `gamma`, `C`, `kappa`
//! - [`oracle`]: RK4 cross-checks (transformed problem, shooting)
//! - [`field`]: streamlines, velocity field and layer edge in physical variables
//! - [`cli`]: the `sakiadis` command-line front end

pub mod cli;
pub mod error;
pub mod field;
pub mod oracle;
pub mod sakiadis;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use sakiadis::{solve, Coefficients, SakiadisSolution};
pub use scalar::{Precision, Real, RealScalar, Scalar};
pub use series::TruncatedSeries;
