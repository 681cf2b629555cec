//! Experiment-level analytics on top of circuits and detection.

mod hom;
mod qber;
mod tomography;

pub use hom::{
    class_probability, hom_scan, visibility_at, ClassSeries, CoincidenceClass, HomScan, Visibility,
    VisibilityKind,
};
pub use qber::{expected_verdict, qber};
pub use tomography::{
    exact_tomography, reconstruct, simulate_tomography, Basis, TomographyCounts, TomographyRecord,
};
