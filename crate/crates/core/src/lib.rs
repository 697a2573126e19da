//! Minimal-spectral-gap cubic and quartic graphs: construction, spectra,
//! Floquet–Bloch bands, eigenvector recurrences and structural audits.

pub mod analysis;
pub mod eigen;
pub mod equitable;
pub mod error;
pub mod families;
pub mod figures;
pub mod floquet;
pub mod format;
pub mod graph;
pub mod poly;
pub mod recurrence;
pub mod sector;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use families::{BlockKind, Family, FamilyDescriptor};
pub use graph::{Graph, SymMatrix};
