//! Achievable rates of Gaussian multiple relay channels on a line under
//! k-hop myopic and omniscient decode-forward coding.
//!
//! Closed-form node rates live in [`rates`] and are checked against the
//! log-det oracle in [`oracle`]. [`optimizer`] finds max-min power splits,
//! [`sweep`] and [`scaling`] run the experiments, [`pipeline`] traces the
//! block schedule and [`cli`] is the command-line front end.

// `!(x > 0.0)` rejects NaN as well as non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod pipeline;
pub mod rates;
pub mod scaling;
pub mod scheme;
pub mod sweep;
