//! Transfer maps for the optical elements: BS, PBS, HWP, circulator exchange and delay.
//!
//! Every element acts identically on temporal bins `0..TEMPORAL_BINS`, except the
//! delay, which mixes bins 0 and 1 of one path.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::{ModeLabel, Path, Polarization};
use crate::transfer::TransferMap;

/// Temporal bins covered by element maps: the reference wavepacket and its orthogonal complement.
pub const TEMPORAL_BINS: u32 = 2;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Gaussian wavepacket overlap as a function of path-length delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayModel {
    /// Coherence length `l_c`, same units as the delay.
    pub coherence_length: f64,
}

impl DelayModel {
    pub fn new(coherence_length: f64) -> Result<Self> {
        if !(coherence_length > 0.0 && coherence_length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coherence length must be positive, got {coherence_length}"
            )));
        }
        Ok(DelayModel { coherence_length })
    }

    /// `exp(-l^2 / (2 l_c^2))`
    pub fn overlap(&self, delay: f64) -> f64 {
        (-delay * delay / (2.0 * self.coherence_length * self.coherence_length)).exp()
    }
}

/// Wavepacket overlap between the delayed and undelayed photons.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Overlap(f64);

impl Overlap {
    pub const FULL: Overlap = Overlap(1.0);
    pub const NONE: Overlap = Overlap(0.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&gamma) {
            Ok(Overlap(gamma))
        } else {
            Err(Error::OverlapOutOfRange(gamma))
        }
    }

    /// Overlap whose square is `gamma_sq`.
    pub fn from_squared(gamma_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma_sq) {
            return Err(Error::OverlapOutOfRange(gamma_sq));
        }
        Ok(Overlap(gamma_sq.sqrt()))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Overlap {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Overlap::new(v)
    }
}

impl From<Overlap> for f64 {
    fn from(o: Overlap) -> f64 {
        o.0
    }
}

fn across_bins(
    inputs: &[(Path, Polarization)],
    image: impl Fn(&Path, Polarization) -> Vec<(Path, Polarization, Complex64)>,
) -> Result<TransferMap> {
    let mut images = Vec::new();
    for t in 0..TEMPORAL_BINS {
        for (p, pol) in inputs {
            let img = image(p, *pol)
                .into_iter()
                .filter(|(_, _, c)| c.norm() > 0.0)
                .map(|(q, qpol, c)| (ModeLabel::new(q, qpol, t), c))
                .collect();
            images.push((ModeLabel::new(p.clone(), *pol, t), img));
        }
    }
    TransferMap::from_images(images)
}

fn both_polarizations(paths: &[&Path]) -> Vec<(Path, Polarization)> {
    paths
        .iter()
        .flat_map(|p| Polarization::BOTH.map(|pol| ((*p).clone(), pol)))
        .collect()
}

fn check_distinct_paths(paths: &[&Path]) -> Result<()> {
    for (i, a) in paths.iter().enumerate() {
        if paths[i + 1..].contains(a) {
            return Err(Error::LabelCollision(a.to_string()));
        }
    }
    Ok(())
}

/// Polarizing beamsplitter: H is transmitted with coefficient 1, V is reflected with `i`.
///
/// `in1_H -> out1_H`, `in1_V -> i out2_V`, `in2_H -> out2_H`, `in2_V -> i out1_V`.
pub fn pbs(inputs: [&Path; 2], outputs: [&Path; 2]) -> Result<TransferMap> {
    check_distinct_paths(&inputs)?;
    check_distinct_paths(&outputs)?;
    let [in1, _] = inputs;
    let [out1, out2] = outputs;
    across_bins(&both_polarizations(&inputs), |p, pol| {
        let first = p == in1;
        match (pol, first) {
            (Polarization::H, true) => vec![(out1.clone(), pol, re(1.0))],
            (Polarization::V, true) => vec![(out2.clone(), pol, I)],
            (Polarization::H, false) => vec![(out2.clone(), pol, re(1.0))],
            (Polarization::V, false) => vec![(out1.clone(), pol, I)],
        }
    })
}

/// Half-wave plate with its fast axis at `theta_deg` degrees.
///
/// `H -> cos2θ H + sin2θ V`, `V -> sin2θ H - cos2θ V`.
pub fn hwp(theta_deg: f64, spatial: &Path) -> Result<TransferMap> {
    let two_theta = 2.0 * theta_deg.to_radians();
    let (s, c) = (snap(two_theta.sin()), snap(two_theta.cos()));
    across_bins(&both_polarizations(&[spatial]), |p, pol| match pol {
        Polarization::H => vec![
            (p.clone(), Polarization::H, re(c)),
            (p.clone(), Polarization::V, re(s)),
        ],
        Polarization::V => vec![
            (p.clone(), Polarization::H, re(s)),
            (p.clone(), Polarization::V, re(-c)),
        ],
    })
}

/// Symmetric, polarization-independent 50:50 beamsplitter.
///
/// `in1 -> (out1 + i out2)/√2`, `in2 -> (i out1 + out2)/√2`.
pub fn bs(inputs: [&Path; 2], outputs: [&Path; 2]) -> Result<TransferMap> {
    check_distinct_paths(&inputs)?;
    check_distinct_paths(&outputs)?;
    let [in1, _] = inputs;
    let [out1, out2] = outputs;
    let t = re(FRAC_1_SQRT_2);
    let r = I * FRAC_1_SQRT_2;
    across_bins(&both_polarizations(&inputs), |p, pol| {
        if p == in1 {
            vec![(out1.clone(), pol, t), (out2.clone(), pol, r)]
        } else {
            vec![(out1.clone(), pol, r), (out2.clone(), pol, t)]
        }
    })
}

/// Lossless, phase-free swap of two paths.
pub fn circulator_exchange(path_a: &Path, path_b: &Path) -> Result<TransferMap> {
    ring_exchange(&[path_a.clone(), path_b.clone()])
}

/// Routes the amplitude of `paths[i]` into `paths[i + 1 mod N]`.
///
/// For two paths this is [`circulator_exchange`].
pub fn ring_exchange(paths: &[Path]) -> Result<TransferMap> {
    if paths.len() < 2 {
        return Err(Error::InvalidParameter(
            "exchange needs at least two paths".into(),
        ));
    }
    let refs: Vec<&Path> = paths.iter().collect();
    check_distinct_paths(&refs)?;
    let n = paths.len();
    across_bins(&both_polarizations(&refs), |p, pol| {
        let i = paths.iter().position(|q| q == p).expect("listed path");
        vec![(paths[(i + 1) % n].clone(), pol, re(1.0))]
    })
}

/// Delay on `spatial` with wavepacket overlap `gamma` to the undelayed reference.
///
/// Bin 0 maps to `γ·bin0 + √(1-γ²)·bin1`; bin 1 is completed to a unitary and is
/// assumed empty on input.
pub fn delay_with_overlap(gamma: f64, spatial: &Path) -> Result<TransferMap> {
    let gamma = Overlap::new(gamma)?.value();
    let rest = (1.0 - gamma * gamma).max(0.0).sqrt();
    let mut images = Vec::new();
    for pol in Polarization::BOTH {
        let early = ModeLabel::new(spatial.clone(), pol, 0);
        let late = ModeLabel::new(spatial.clone(), pol, 1);
        images.push((
            early.clone(),
            vec![(early.clone(), re(gamma)), (late.clone(), re(rest))],
        ));
        images.push((late.clone(), vec![(early, re(-rest)), (late, re(gamma))]));
    }
    TransferMap::from_images(images)
}

/// Delay by `length` under `model`.
pub fn delay(model: &DelayModel, length: f64, spatial: &Path) -> Result<TransferMap> {
    delay_with_overlap(model.overlap(length), spatial)
}

/// One optical element of a circuit, serializable for topology dumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "element", rename_all = "snake_case")]
pub enum Element {
    Delay {
        path: Path,
        overlap: f64,
    },
    Bs {
        inputs: [Path; 2],
        outputs: [Path; 2],
    },
    Pbs {
        inputs: [Path; 2],
        outputs: [Path; 2],
    },
    Hwp {
        path: Path,
        theta_deg: f64,
    },
    Exchange {
        paths: Vec<Path>,
    },
}

impl Element {
    pub fn transfer_map(&self) -> Result<TransferMap> {
        match self {
            Element::Delay { path, overlap } => delay_with_overlap(*overlap, path),
            Element::Bs { inputs, outputs } => {
                bs([&inputs[0], &inputs[1]], [&outputs[0], &outputs[1]])
            }
            Element::Pbs { inputs, outputs } => {
                pbs([&inputs[0], &inputs[1]], [&outputs[0], &outputs[1]])
            }
            Element::Hwp { path, theta_deg } => hwp(*theta_deg, path),
            Element::Exchange { paths } => ring_exchange(paths),
        }
    }
}
