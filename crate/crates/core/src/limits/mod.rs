//! The two-step limit: `beta_n(s, q)` and `T_n`, the exact inner limit
//! `L_n`, the binomially weighted sequence `a_n`, its extrapolation to
//! `L(s, chi)/sqrt(pi)`, and the pole-subtracted path to Euler's constant.

pub mod extrapolate;
pub mod family;
pub mod outer;
pub mod regularize;
pub mod report;

pub use extrapolate::{AsymptoticModel, Extrapolation};
pub use family::{
    alpha_zeta, beta_n, beta_n_exact, hypothesis_bound_diagnostic, inner_limit_exact, inner_limit_exact_value,
    inner_limit_numeric, integer_exponent, t_n, AlphaFamily, BoundDiagnostic, BoundRow, InnerLimitRow,
    InnerLimitTable,
};
pub use outer::{
    a_n, a_n_via_inner_limit, binomial_window_ratio, geometric_schedule, outer_limit, outer_limit_streaming,
    sqrt_pi, validate_schedule, ConvergenceReport, Record, StreamedRecord,
};
pub use report::{complex_json, extrapolated_csv, extrapolated_line, float_text, record_csv, record_line, CSV_HEADER};
pub use regularize::{default_delta_grid, euler_mascheroni_regularized, RegularizationReport, REGULARIZATION_ACCEL};
