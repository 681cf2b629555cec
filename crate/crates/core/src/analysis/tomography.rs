//! Two-qubit polarization tomography: 9 basis settings x 4 outcomes = the 36 projector
//! pairs from {H, V, D, A, R, L}. Reconstruction is least-squares linear inversion over
//! the Pauli coefficients followed by eigenvalue clipping.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::SCHEMA_VERSION;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::inputs::PolState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    pub fn eigenstates(self) -> [PolState; 2] {
        match self {
            Basis::Z => [PolState::H, PolState::V],
            Basis::X => [PolState::D, PolState::A],
            Basis::Y => [PolState::R, PolState::L],
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn settings() -> Vec<[Basis; 2]> {
    Basis::ALL
        .iter()
        .flat_map(|&a| Basis::ALL.iter().map(move |&b| [a, b]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographyRecord {
    pub setting: [Basis; 2],
    pub projector: [PolState; 2],
    pub count: u64,
    /// Relative frequency within the setting; the exact probability when no shots were drawn.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographyCounts {
    /// `None` for exact Born probabilities.
    pub shots_per_setting: Option<u64>,
    pub records: Vec<TomographyRecord>,
}

impl TomographyCounts {
    /// `setting,outcome,count,frequency` rows.
    pub fn to_csv(&self) -> String {
        let mut out =
            format!("# schema_version: {SCHEMA_VERSION}\nsetting,outcome,count,frequency\n");
        for r in &self.records {
            out.push_str(&format!(
                "{}{},{}{},{},{:.12}\n",
                r.setting[0], r.setting[1], r.projector[0], r.projector[1], r.count, r.frequency
            ));
        }
        out
    }
}

fn projector_probability(rho: &DensityMatrix, pair: [PolState; 2]) -> f64 {
    let [a, b] = [pair[0].amplitudes(), pair[1].amplitudes()];
    let psi: Vec<Complex64> = (0..4).map(|i| a[i >> 1] * b[i & 1]).collect();
    rho.fidelity(&psi).max(0.0)
}

fn setting_probabilities(rho: &DensityMatrix, setting: [Basis; 2]) -> Vec<([PolState; 2], f64)> {
    let [ea, eb] = [setting[0].eigenstates(), setting[1].eigenstates()];
    ea.iter()
        .flat_map(|&p| eb.iter().map(move |&q| [p, q]))
        .map(|pair| (pair, projector_probability(rho, pair)))
        .collect()
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.qubits() != 2 {
        return Err(Error::InvalidParameter(format!(
            "tomography is two-qubit, got {} qubits",
            rho.qubits()
        )));
    }
    Ok(())
}

/// Exact Born probabilities for all 36 projectors, no sampling noise.
pub fn exact_tomography(rho: &DensityMatrix) -> Result<TomographyCounts> {
    require_two_qubits(rho)?;
    let records = settings()
        .into_iter()
        .flat_map(|s| {
            setting_probabilities(rho, s)
                .into_iter()
                .map(move |(projector, p)| TomographyRecord {
                    setting: s,
                    projector,
                    count: 0,
                    frequency: p,
                })
        })
        .collect();
    Ok(TomographyCounts {
        shots_per_setting: None,
        records,
    })
}

/// Multinomial counts, `shots` per basis setting.
///
/// Setting `k` draws from its own ChaCha stream `k` under `seed`, so results do not
/// depend on evaluation order.
pub fn simulate_tomography(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<TomographyCounts> {
    require_two_qubits(rho)?;
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let per_setting: Vec<Vec<TomographyRecord>> = settings()
        .into_par_iter()
        .enumerate()
        .map(|(k, s)| {
            let probs = setting_probabilities(rho, s);
            let total: f64 = probs.iter().map(|(_, p)| p).sum();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut counts = [0u64; 4];
            for _ in 0..shots {
                let u: f64 = rng.random::<f64>() * total;
                let mut acc = 0.0;
                let mut pick = 3;
                for (i, (_, p)) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = i;
                        break;
                    }
                }
                counts[pick] += 1;
            }
            probs
                .iter()
                .zip(counts)
                .map(|((projector, _), count)| TomographyRecord {
                    setting: s,
                    projector: *projector,
                    count,
                    frequency: count as f64 / shots as f64,
                })
                .collect()
        })
        .collect();
    Ok(TomographyCounts {
        shots_per_setting: Some(shots),
        records: per_setting.into_iter().flatten().collect(),
    })
}

fn pauli(k: usize) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// Least-squares linear inversion, then projection onto the physical states.
pub fn reconstruct(counts: &TomographyCounts) -> Result<DensityMatrix> {
    // frequencies renormalized within each setting
    let all = settings();
    let mut totals = vec![0.0; all.len()];
    for r in &counts.records {
        let k = all
            .iter()
            .position(|s| *s == r.setting)
            .expect("known setting");
        totals[k] += r.frequency;
    }
    let usable: Vec<&TomographyRecord> = counts
        .records
        .iter()
        .filter(|r| totals[all.iter().position(|s| *s == r.setting).unwrap()] > 0.0)
        .collect();

    let rows = usable.len();
    let mut design = DMatrix::<f64>::zeros(rows, 16);
    let mut observed = DVector::<f64>::zeros(rows);
    for (row, r) in usable.iter().enumerate() {
        let k = all.iter().position(|s| *s == r.setting).unwrap();
        observed[row] = r.frequency / totals[k];
        let [ba, bb] = [r.projector[0].bloch(), r.projector[1].bloch()];
        let sa = [1.0, ba[0], ba[1], ba[2]];
        let sb = [1.0, bb[0], bb[1], bb[2]];
        for i in 0..4 {
            for j in 0..4 {
                design[(row, 4 * i + j)] = 0.25 * sa[i] * sb[j];
            }
        }
    }

    let missing = || {
        let names: Vec<String> = all
            .iter()
            .zip(&totals)
            .filter(|(_, t)| **t <= 0.0)
            .map(|(s, _)| format!("{}{}", s[0], s[1]))
            .collect();
        Error::IncompleteTomography(if names.is_empty() {
            "outcomes within the listed settings".into()
        } else {
            names.join(", ")
        })
    };
    if rows < 16 {
        return Err(missing());
    }
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * smax.max(1.0))
        .count();
    if rank < 16 {
        return Err(missing());
    }
    let coeffs = svd
        .solve(&observed, 1e-12)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut rho = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
    for i in 0..4 {
        for j in 0..4 {
            let (pa, pb) = (pauli(i), pauli(j));
            let c = Complex64::new(0.25 * coeffs[4 * i + j], 0.0);
            for r in 0..4 {
                for col in 0..4 {
                    rho[(r, col)] += c * pa[r >> 1][col >> 1] * pb[r & 1][col & 1];
                }
            }
        }
    }
    DensityMatrix::project_physical(&rho)
}
