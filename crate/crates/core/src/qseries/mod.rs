//! Truncated formal power series in `t` with coefficients either in `Q(q)` or
//! in truncated `u = 1/q` series, and the census generating functions built
//! from them.

mod forms;
mod ring;
mod series;

pub use forms::{
    build_f1, build_f2, build_fbar, build_fbar_form, f1_log, f2_log, f2_t2_term, rf_to_useries,
    series_to_useries, AnySeries, Form, Target,
};
pub use ring::{CoeffRing, RatFuncRing, RingTag, UCoeff, USeriesRing};
pub use series::{ps_exp, ps_mul, PowerSeries};

use thiserror::Error;

/// Default truncation order in `t`.
pub const DEFAULT_T_ORDER: usize = 12;
/// Default truncation order in `u`.
pub const DEFAULT_U_ORDER: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series live in different coefficient rings")]
    RingMismatch,
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("exp needs a series with zero constant term")]
    NonzeroConstant,
    #[error("log needs a series with constant term 1")]
    ConstantNotOne,
    #[error("product form only exists in the u-series ring")]
    ProductNeedsUSeries,
    #[error("this generating function has no sum form")]
    NoSumForm,
    #[error("{0} has a pole at u = 0")]
    PoleAtZero(String),
}
