//! Intrinsic depolarizing noise, the radiation transient-fault model and
//! circuit instrumentation.

mod instrument;
mod model;

pub use instrument::{erasure_profile, instrument_circuit, radiation_profile, Channel, ErrorSite, InstrumentedCircuit};
pub use model::{
    fault_intensity, sample_depolarize, spatial_decay, step_temporal_decay, temporal_decay, IntrinsicNoiseConfig,
    Pauli, RadiationFaultConfig,
};
