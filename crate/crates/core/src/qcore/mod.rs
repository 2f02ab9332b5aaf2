//! Dense complex linear algebra and quantum-information primitives.

mod metrics;
mod random;
mod register;
mod schmidt;
mod state;

pub mod linalg;

pub use metrics::{
    fidelity, holevo_fidelity, jordan_hahn, psd_sqrt, trace_distance, JordanHahn, JordanHahnParts,
};
pub use random::RngStream;
pub use register::RegisterShape;
pub use schmidt::{schmidt_decompose, SchmidtData};
pub use state::{DensityMatrix, StateKind, StateVector};
