//! Error measurement, skewness diagnostics and rate fitting.
//!
//! Errors are measured against the interpolate `I_h u` in the discrete
//! energy norm of the scheme and in the diffusion-independent discrete H¹
//! norm; both are relative, and switch to absolute values (flagged) when the
//! reference norm vanishes.

mod errors;
mod rates;
mod skewness;
mod transport;

pub use errors::{
    all_errors, energy_error, global_interpolate, h1_error, l2_error, ErrorReport, ErrorValue,
    ZERO_NORM,
};
pub use rates::{convergence_rates, flatness_rates, pairwise_rates, PairRates};
pub use skewness::{
    interplay_factor, predicted_bound_factor, skewness_diagnostics, transported_tensor,
    CellDiagnostics, SkewnessDiagnostics, TransportedTensor,
};
pub use transport::{verify_transport, verify_transport_polygon, TransportResiduals};
