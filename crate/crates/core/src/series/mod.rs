//! Exact integer sequences and truncated power series, with the analysis
//! tools used on growth functions: finite differences, residue splitting,
//! eventual-form fitting, composite detection and closed-form evaluation.

mod closed_form;
mod fit;
mod order;
mod partitions;
mod power_series;
mod sequence;

use thiserror::Error;

pub use closed_form::{binomial, fibonacci, ClosedFormSpec, FormKind, PartSpec};
pub use fit::{
    detect_composite, fit_eventually_exponential, fit_eventually_polynomial, CompositeVerdict,
    ExpFit, PartForm, PolyFit,
};
pub use order::{order_compare, OrderBounds, OrderRelation, OrderVerdict, OrderWitness};
pub use partitions::{partitions_pow2, partitions_pow2_table};
pub use power_series::{
    check_delta_gamma, expand_a5_gamma, expand_a6_gamma, expand_a6_semigroup_gamma,
    expand_rational, inverse_power_of_one_minus_x, PowerSeries,
};
pub use sequence::IntSequence;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("difference of order {order} needs more than {len} values")]
    OrderTooLarge { order: usize, len: usize },
    #[error("modulus must be at least 2, got {0}")]
    Modulus(usize),
    #[error("indices are not contiguous")]
    NotContiguous,
    #[error("denominator has zero constant term")]
    ZeroConstantTerm,
    #[error("coefficient {0} is not an integer")]
    NotInteger(usize),
    #[error("value does not fit in 128 bits")]
    Overflow,
    #[error("n = {n} is below the defined range (from {min})")]
    BelowRange { n: usize, min: usize },
    #[error("unknown closed form `{0}`")]
    UnknownForm(String),
    #[error("malformed closed form: {0}")]
    Malformed(String),
}
