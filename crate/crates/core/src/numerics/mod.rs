//! Floating-point kernels shared by the rule builders and bound evaluators.

pub mod integrate;
pub mod logsum;
pub mod roots;

pub use integrate::{
    integrate_log, integrate_reference, IntegrationResult, IntegratorOptions, LogIntegral,
    DEFAULT_MAX_PANELS,
};
pub use logsum::{log_abs_tanh, log_add_exp, log_sum_exp, LogProduct};
pub use roots::{poly_roots_by_newton, ThreeTermRecurrence};
