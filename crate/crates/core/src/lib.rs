//! Multisector CES production-network toolkit.
//!
//! The crate solves quantity-free price equilibria of an `n`-sector economy
//! whose sectors produce with CES technologies over `n` intermediate goods and
//! one primary factor, and builds the downstream machinery on top of it:
//!
//! - [`economy`]: benchmark input-output data, shocks, CSV ingestion.
//! - [`equilibrium`]: the recursive price fixed point and the uniform-CES,
//!   Leontief and Cobb-Douglas closed forms.
//! - [`structure`]: equilibrium input-output structure, cost-share network
//!   and the Hawkins-Simon viability test.
//! - [`household`]: CES price index and the Domar aggregators mapping
//!   productivity shocks into real GDP growth.
//! - [`montecarlo`]: shock sampling, fluctuation distributions, QQ points and
//!   the Hodrick-Prescott filter.
//! - [`gbm`]: drift/volatility estimation of productivity series and the
//!   Shapiro-Wilk normality test.
//! - [`econometrics`]: fixed-effects and 2SLS panel estimation of
//!   substitution elasticities with IV diagnostics.
//!
//! Sample evaluation in [`montecarlo`] runs on rayon when the `parallel`
//! feature is enabled (default); results are bit-identical either way.

pub mod econometrics;
pub mod economy;
pub mod equilibrium;
mod error;
pub mod gbm;
pub mod household;
pub(crate) mod linalg;
pub mod montecarlo;
pub mod structure;

pub use economy::{Economy, Numeraire, ShockVector};
pub use equilibrium::{EquilibriumResult, FixedPointOptions, SolveStatus};
pub use error::{Error, Result};
pub use household::{AggregationMethod, GrowthOutcome, HouseholdPrefs};
