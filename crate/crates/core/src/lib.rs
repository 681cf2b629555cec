//! Exact multimode Fock-space simulation of polarization-encoded linear-optical
//! Bell-state measurement and preparation circuits.

pub mod analysis;
pub mod circuits;
pub mod cli;
pub mod density;
pub mod detection;
pub mod error;
pub mod inputs;
pub mod mode;
pub mod optics;
pub mod state;
pub mod transfer;

pub use circuits::{ghz_circuit, standard_bsm, symmetric_bsm, CircuitKind, CircuitSpec};
pub use density::{concurrence, fidelity, DensityMatrix};
pub use detection::{
    classify, heralded_state, measure, BsmVerdict, DetectionPattern, DetectorId, Heralded,
    OutcomeDistribution, Scheme,
};
pub use error::{Error, Result};
pub use inputs::{BellState, InputSpec, PolState};
pub use mode::{ModeLabel, Path, Polarization};
pub use optics::{DelayModel, Overlap};
pub use state::{inner_product, make_state, Occupation, PhotonicState};
pub use transfer::{apply_transfer, TransferMap};
