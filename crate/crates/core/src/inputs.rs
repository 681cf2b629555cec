//! Named input states: Bell pairs, GHZ states, polarization product states, and
//! explicit amplitude lists.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::{ModeLabel, Path, Polarization};
use crate::state::{Occupation, PhotonicState};

/// The four two-qubit Bell states; for `N` parties `PhiPlus`/`PhiMinus` stand for the
/// GHZ states `(|H..H> ± |V..V>)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// Amplitudes over the qubit basis HH, HV, VH, VV.
    pub fn qubit_vector(self) -> [Complex64; 4] {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellState::PhiPlus => [r, z, z, r],
            BellState::PhiMinus => [r, z, z, -r],
            BellState::PsiPlus => [z, r, r, z],
            BellState::PsiMinus => [z, r, -r, z],
        }
    }

    /// Two-photon state on the input paths `a` and `b`.
    pub fn state(self, a: &Path, b: &Path) -> PhotonicState {
        let amps = self.qubit_vector();
        let terms = (0..4).filter(|&i| amps[i].norm() > 0.0).map(|i| {
            let pa = Polarization::BOTH[i >> 1];
            let pb = Polarization::BOTH[i & 1];
            (
                Occupation::from_modes(&[
                    ModeLabel::at(a.clone(), pa),
                    ModeLabel::at(b.clone(), pb),
                ]),
                amps[i],
            )
        });
        PhotonicState::new(terms).expect("Bell states are normalized")
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        })
    }
}

/// `(|H..H> ± |V..V>)/√2` across `paths`.
pub fn ghz_state(paths: &[Path], minus: bool) -> PhotonicState {
    let all = |pol| {
        Occupation::from_modes(
            &paths
                .iter()
                .map(|p| ModeLabel::at(p.clone(), pol))
                .collect::<Vec<_>>(),
        )
    };
    let sign = if minus { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    PhotonicState::new([
        (all(Polarization::H), Complex64::new(FRAC_1_SQRT_2, 0.0)),
        (all(Polarization::V), Complex64::new(sign, 0.0)),
    ])
    .expect("GHZ states are normalized")
}

/// Single-qubit polarization eigenstates used for inputs and tomography.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolState {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl PolState {
    pub const ALL: [PolState; 6] = [
        PolState::H,
        PolState::V,
        PolState::D,
        PolState::A,
        PolState::R,
        PolState::L,
    ];

    /// `(amp_H, amp_V)`. `R = (H - iV)/√2`, `L = (H + iV)/√2`.
    pub fn amplitudes(self) -> [Complex64; 2] {
        let r = FRAC_1_SQRT_2;
        let c = Complex64::new;
        match self {
            PolState::H => [c(1.0, 0.0), c(0.0, 0.0)],
            PolState::V => [c(0.0, 0.0), c(1.0, 0.0)],
            PolState::D => [c(r, 0.0), c(r, 0.0)],
            PolState::A => [c(r, 0.0), c(-r, 0.0)],
            PolState::R => [c(r, 0.0), c(0.0, -r)],
            PolState::L => [c(r, 0.0), c(0.0, r)],
        }
    }

    /// Bloch vector `(x, y, z)`.
    pub fn bloch(self) -> [f64; 3] {
        match self {
            PolState::H => [0.0, 0.0, 1.0],
            PolState::V => [0.0, 0.0, -1.0],
            PolState::D => [1.0, 0.0, 0.0],
            PolState::A => [-1.0, 0.0, 0.0],
            PolState::R => [0.0, -1.0, 0.0],
            PolState::L => [0.0, 1.0, 0.0],
        }
    }

    fn from_char(ch: char) -> Option<Self> {
        Some(match ch {
            'H' => PolState::H,
            'V' => PolState::V,
            'D' => PolState::D,
            'A' => PolState::A,
            'R' => PolState::R,
            'L' => PolState::L,
            _ => return None,
        })
    }
}

impl fmt::Display for PolState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One photon per path in the given polarization states.
pub fn product_state(paths: &[Path], pols: &[PolState]) -> Result<PhotonicState> {
    if paths.len() != pols.len() {
        return Err(Error::InvalidParameter(format!(
            "{} polarizations for {} inputs",
            pols.len(),
            paths.len()
        )));
    }
    let mut terms = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for (path, pol) in paths.iter().zip(pols) {
        let amps = pol.amplitudes();
        let mut next = Vec::new();
        for (modes, c) in &terms {
            for p in Polarization::BOTH {
                let a = amps[p.index()];
                if a.norm() > 0.0 {
                    let mut m: Vec<ModeLabel> = modes.clone();
                    m.push(ModeLabel::at(path.clone(), p));
                    next.push((m, c * a));
                }
            }
        }
        terms = next;
    }
    PhotonicState::new(
        terms
            .into_iter()
            .map(|(m, c)| (Occupation::from_modes(&m), c)),
    )
}

/// Parsed form of an input-state name.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Bell(BellState),
    /// GHZ over all parties; `true` for the minus sign.
    Ghz(bool),
    /// One polarization per party, e.g. `DA`. A single letter is repeated for every party.
    Product(Vec<PolState>),
    /// Explicit polarization amplitudes, e.g. `HH=1,VV=-1`; normalized on build.
    Amplitudes(Vec<(Vec<Polarization>, Complex64)>),
}

impl FromStr for InputSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bell = match s.to_ascii_lowercase().as_str() {
            "phi+" => Some(InputSpec::Bell(BellState::PhiPlus)),
            "phi-" => Some(InputSpec::Bell(BellState::PhiMinus)),
            "psi+" => Some(InputSpec::Bell(BellState::PsiPlus)),
            "psi-" => Some(InputSpec::Bell(BellState::PsiMinus)),
            "ghz+" => Some(InputSpec::Ghz(false)),
            "ghz-" => Some(InputSpec::Ghz(true)),
            _ => None,
        };
        if let Some(b) = bell {
            return Ok(b);
        }
        if s.contains('=') {
            let mut terms = Vec::new();
            for item in s.split(',') {
                let (label, amp) = item.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("expected LABEL=AMPLITUDE, got {item:?}"))
                })?;
                let pols = label
                    .trim()
                    .chars()
                    .map(|c| match c {
                        'H' => Ok(Polarization::H),
                        'V' => Ok(Polarization::V),
                        _ => Err(Error::Parse(format!(
                            "amplitude labels use H/V only, got {c:?}"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let amp = Complex64::from_str(amp.trim())
                    .map_err(|_| Error::Parse(format!("bad amplitude {amp:?}")))?;
                terms.push((pols, amp));
            }
            return Ok(InputSpec::Amplitudes(terms));
        }
        let pols: Option<Vec<PolState>> = s.chars().map(PolState::from_char).collect();
        match pols {
            Some(p) if !p.is_empty() => Ok(InputSpec::Product(p)),
            _ => Err(Error::Parse(format!(
                "unknown input state {s:?}; expected phi+/phi-/psi+/psi-/ghz+/ghz-, a product such as DA, or amplitudes such as HH=1,VV=-1"
            ))),
        }
    }
}

impl InputSpec {
    /// Builds the state on the given party input paths.
    pub fn build(&self, inputs: &[Path]) -> Result<PhotonicState> {
        let n = inputs.len();
        match self {
            InputSpec::Bell(b) => {
                if n != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "Bell state {b} needs 2 parties, circuit has {n}; use ghz+/ghz-"
                    )));
                }
                Ok(b.state(&inputs[0], &inputs[1]))
            }
            InputSpec::Ghz(minus) => Ok(ghz_state(inputs, *minus)),
            InputSpec::Product(p) if p.len() == 1 => product_state(inputs, &vec![p[0]; n]),
            InputSpec::Product(p) => product_state(inputs, p),
            InputSpec::Amplitudes(terms) => {
                let mut out = Vec::with_capacity(terms.len());
                for (pols, amp) in terms {
                    if pols.len() != n {
                        return Err(Error::InvalidParameter(format!(
                            "amplitude label of length {} for {n} parties",
                            pols.len()
                        )));
                    }
                    let modes: Vec<ModeLabel> = inputs
                        .iter()
                        .zip(pols)
                        .map(|(p, pol)| ModeLabel::at(p.clone(), *pol))
                        .collect();
                    out.push((Occupation::from_modes(&modes), *amp));
                }
                PhotonicState::new(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> [Path; 2] {
        [Path::new("a"), Path::new("b")]
    }

    #[test]
    fn parses_names() {
        assert_eq!(
            "phi-".parse::<InputSpec>().unwrap(),
            InputSpec::Bell(BellState::PhiMinus)
        );
        assert_eq!("GHZ+".parse::<InputSpec>().unwrap(), InputSpec::Ghz(false));
        assert_eq!(
            "DA".parse::<InputSpec>().unwrap(),
            InputSpec::Product(vec![PolState::D, PolState::A])
        );
        assert!("bogus".parse::<InputSpec>().is_err());
        assert!("HX=1".parse::<InputSpec>().is_err());
    }

    #[test]
    fn amplitude_list_matches_named_bell_state() {
        let [a, b] = ab();
        let spec: InputSpec = "HH=1,VV=-1".parse().unwrap();
        let s = spec.build(&[a.clone(), b.clone()]).unwrap();
        assert!(s.approx_eq_up_to_phase(&BellState::PhiMinus.state(&a, &b), 1e-15));
        let spec: InputSpec = "HV=1,VH=0+1i".parse().unwrap();
        let s = spec.build(&[a, b]).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn diagonal_product_expands_to_four_terms() {
        let [a, b] = ab();
        let s = product_state(&[a, b], &[PolState::D, PolState::D]).unwrap();
        assert_eq!(s.len(), 4);
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_needs_two_parties() {
        let paths: Vec<Path> = ["a1", "a2", "a3"].map(Path::from).to_vec();
        assert!(InputSpec::Bell(BellState::PhiPlus).build(&paths).is_err());
        let g = InputSpec::Ghz(true).build(&paths).unwrap();
        assert_eq!(g.photon_number(), 3);
        assert_eq!(
            InputSpec::Product(vec![PolState::D])
                .build(&paths)
                .unwrap()
                .len(),
            8
        );
    }

    #[test]
    fn bloch_vectors_match_amplitudes() {
        for s in PolState::ALL {
            let [h, v] = s.amplitudes();
            let x = 2.0 * (h.conj() * v).re;
            let y = 2.0 * (h.conj() * v).im;
            let z = h.norm_sqr() - v.norm_sqr();
            let b = s.bloch();
            assert!(
                (x - b[0]).abs() < 1e-15 && (y - b[1]).abs() < 1e-15 && (z - b[2]).abs() < 1e-15,
                "{s}"
            );
        }
    }
}
