//! Principal values, finite parts, the continued pairing and its Laurent
//! coefficients, fiber expansions, and the comparison harnesses.

pub mod checks;
pub mod expansion;
pub mod finite;
pub mod fit;
pub mod merext;
pub mod pv;

pub use checks::{boundary_decay_check, compare_t_s, formal_action_check, BoundaryDecay, ComparisonReport, FormalActionReport};
pub use expansion::{fiber_expansion, fiber_oracle, taylor_coeff, ExpansionModel, ExpansionTerm, FiberFit};
pub use finite::{counterterm_constant, finite_part, Counterterm, FinitePartResult};
pub use fit::{fit_sweep, tail_slope, SweepFit};
pub use merext::{default_m, laurent_coeffs, merext_eval, LaurentData, MerextOpts, MerextResult};
pub use pv::{exponent_lattice, pv_limit, PvOpts, PvResult};
