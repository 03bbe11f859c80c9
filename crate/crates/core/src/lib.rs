//! Symbolic-numeric toolkit for entire solutions of quadratic trinomial
//! partial differential-difference equations in `C^n`:
//!
//! ```text
//! a·(α ∂f/∂z_i + β ∂f/∂z_j)² + 2ω·(α ∂f/∂z_i + β ∂f/∂z_j)·S(f) + b·S(f)² = e^{g(z)}
//! ```
//!
//! where `S(f)` is the shift `f(z+c)` or the difference `Δ_c f`. The crate
//! provides:
//!
//! * exact sparse polynomial and exponential-polynomial algebra
//!   ([`poly`], [`exppoly`]), closed under the operators above;
//! * the equation model with symbolic and seeded numeric residual
//!   verification ([`equation`]);
//! * constructors for every known entire solution family, closed-form ξ
//!   solvers, and constraint evaluation ([`solutions`]);
//! * an expression grammar, equation/parameter file formats, and the
//!   bundled worked examples with a verification audit ([`parser`],
//!   [`config`], [`audit`]).

pub mod audit;
pub mod complex;
pub mod config;
pub mod draws;
pub mod equation;
pub mod exppoly;
pub mod parser;
pub mod poly;
pub mod sampling;
pub mod solutions;

pub use complex::{approx_eq, cexp, clog, csqrt, cx, Cx, Tolerance};
pub use equation::{
    factorization_check, omega_roots, OmegaBranch, OmegaPair, TrinomialPdde, Variant,
    VerificationReport,
};
pub use exppoly::{ExpPoly, ExpTerm};
pub use parser::{format_expression, parse_constant, parse_expression, parse_polynomial};
pub use poly::{MultiIndex, Poly, UniPoly};
pub use solutions::{
    build_periodic, check_constraints, construct, solve_two_exp_split, solve_xi, CaseId,
    CaseParameters, ConstraintReport, SolutionCandidate, Theorem,
};
