//! Exact arithmetic foundations: truncated q-series over the rationals,
//! q-Pochhammer symbols, q-integers, big-integer combinatorics, and the
//! precision contract used by every floating-point evaluation.

pub mod combinatorics;
pub mod eval;
pub mod pochhammer;
pub mod series;

pub use combinatorics::{big_binomial, central_binomial_row, BigCombinatorics};
pub use eval::{PrecisionContext, SummationPolicy};
pub use pochhammer::{
    pochhammer_scaling_limit_check, q_factorial_at, q_factorials_at, q_integer, q_integer_series,
    q_pochhammer, q_pochhammer_base, QMonomial, ScalingRow, ScalingTable,
};
pub use series::QSeries;
