//! Exact truncated-series and graded-operator arithmetic.

mod diffop;
mod eps;
mod fiber;
mod jet;
mod multi;
mod nu;
mod poisson;
mod scalar;

pub use diffop::{DiffOp, GradeOrder, NaturalityReport, OpGrade};
pub use eps::{Dual, EpsPair};
pub use fiber::{FiberPoly, FiberVar};
pub use jet::JetSeries;
pub use multi::{binomial, factorial, Multi, Order, Var, EXACT};
pub use nu::NuSeries;
pub use poisson::{ham_exp, ham_phi1, poisson_bracket};
pub use scalar::{Coeff, Scalar};

pub(crate) use multi::{int_scalar, inv_int_scalar, ord_sub};
pub(crate) use poisson::{check_hamiltonian, ham_exp_unchecked};
