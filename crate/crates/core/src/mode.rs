//! Bosonic mode labels.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Linear polarization basis state of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    /// Qubit index: H = 0, V = 1.
    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => f.write_str("H"),
            Polarization::V => f.write_str("V"),
        }
    }
}

/// Spatial path identifier, e.g. `a`, `g`, or `g.t` for a PBS output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(String);

impl Path {
    pub fn new(name: impl Into<String>) -> Self {
        Path(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// A derived path such as `g.t` or `a.vac`.
    pub fn child(&self, suffix: &str) -> Path {
        Path(format!("{}.{}", self.0, suffix))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Path {
    fn from(s: &str) -> Self {
        Path(s.to_owned())
    }
}

/// One bosonic mode: spatial path, polarization and temporal bin.
///
/// Field order gives the canonical sort key (spatial, polarization, temporal).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub spatial: Path,
    pub polarization: Polarization,
    pub temporal: u32,
}

impl ModeLabel {
    pub fn new(spatial: impl Into<Path>, polarization: Polarization, temporal: u32) -> Self {
        ModeLabel {
            spatial: spatial.into(),
            polarization,
            temporal,
        }
    }

    /// Mode in the reference temporal bin.
    pub fn at(spatial: impl Into<Path>, polarization: Polarization) -> Self {
        Self::new(spatial, polarization, 0)
    }

    pub fn h(spatial: &str) -> Self {
        Self::at(spatial, Polarization::H)
    }

    pub fn v(spatial: &str) -> Self {
        Self::at(spatial, Polarization::V)
    }

    pub fn with_temporal(&self, temporal: u32) -> Self {
        ModeLabel {
            temporal,
            ..self.clone()
        }
    }

    pub fn with_spatial(&self, spatial: Path) -> Self {
        ModeLabel {
            spatial,
            ..self.clone()
        }
    }

    pub fn with_polarization(&self, polarization: Polarization) -> Self {
        ModeLabel {
            polarization,
            ..self.clone()
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.spatial, self.polarization)?;
        if self.temporal != 0 {
            write!(f, "@{}", self.temporal)?;
        }
        Ok(())
    }
}
