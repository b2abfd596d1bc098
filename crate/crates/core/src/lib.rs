//! Series construction of circle-invariant Ricci-flat Kähler metrics on the
//! canonical bundle of a real-analytic Kähler manifold.
//!
//! Near the zero section the metric is determined by a Hermitian matrix
//! `g_ij(t, z)` and a potential `u(t, z)` in the moment-map variable `t`.
//! Given the base metric `h = g(0)` the pair is the unique solution of a
//! singular Cauchy problem, which [`solver::solve`] constructs order by order
//! as truncated power series in `t` with Taylor-jet coefficients in `z`.
//!
//! * [`jet`]: truncated multivariate Taylor polynomials and `t`-series.
//! * [`kahler`]: initial metrics, complex Hessians, Ricci forms.
//! * [`solver`]: the recursion.
//! * [`verifier`]: residual checks of every identity the metric satisfies.
//! * [`closed_form`]: explicit solutions over bases with constant principal
//!   Ricci curvatures, used as an oracle.
//! * [`majorant`]: empirical majorant bounds behind the convergence proof.
//! * [`cli`]: the `kcanon` command-line front end.
//!
//! ```
//! use kcanon::kahler::builtin_metric;
//! use kcanon::solver::{solve, SolverConfig};
//!
//! let h = builtin_metric("fubini_study_chart:1,1", 8).unwrap();
//! let sol = solve(&h, &SolverConfig::new(1.0, 3, 8)).unwrap();
//! // g(t) = h (1 + 8t) on the round sphere of area pi
//! let g1 = sol.g.get(0, 0).coeff(1).constant_term().re;
//! assert!((g1 - 8.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod jet;
pub mod kahler;
pub mod majorant;
pub mod solver;
pub mod verifier;

pub use error::{Error, Result};
pub use jet::{Jet, TJet, C64};
pub use kahler::{HermitianJetMatrix, InitialData};
pub use solver::{solve, Solution, SolverConfig};
