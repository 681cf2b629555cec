//! Photon-number-resolving, temporal-bin-blind detection; BSM classification; heralding.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circuits::{CircuitKind, CircuitSpec, SCHEMA_VERSION};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::inputs::BellState;
use crate::mode::Path;
use crate::state::PhotonicState;

/// Detector `D{n}`, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DetectorId(pub u32);

impl fmt::Display for DetectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.0)
    }
}

/// Photon counts per detector. Shown as `D1+D4` for a coincidence and `D1^2` for two
/// photons in one detector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DetectionPattern(BTreeMap<DetectorId, u32>);

impl DetectionPattern {
    pub fn new(counts: impl IntoIterator<Item = (DetectorId, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (d, n) in counts {
            if n > 0 {
                *map.entry(d).or_insert(0) += n;
            }
        }
        DetectionPattern(map)
    }

    /// One click on each listed detector; repeats stack.
    pub fn clicks(ids: &[u32]) -> Self {
        Self::new(ids.iter().map(|&i| (DetectorId(i), 1)))
    }

    pub fn counts(&self) -> &BTreeMap<DetectorId, u32> {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn count(&self, d: DetectorId) -> u32 {
        self.0.get(&d).copied().unwrap_or(0)
    }

    /// Sorted detector numbers with multiplicity.
    fn ids(&self) -> Vec<u32> {
        self.0
            .iter()
            .flat_map(|(d, n)| std::iter::repeat_n(d.0, *n as usize))
            .collect()
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (d, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{d}")?;
            if *n > 1 {
                write!(f, "^{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for DetectionPattern {
    type Err = Error;

    /// Accepts `D1+D4`, `D1^2`, and the compact `Dmn` form (`D14`, `D11`), where each
    /// digit is one detector.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad detection pattern {s:?}"));
        if s.contains('+') || s.contains('^') {
            let mut counts = Vec::new();
            for part in s.split('+') {
                let body = part.trim().strip_prefix('D').ok_or_else(bad)?;
                let (id, n) = match body.split_once('^') {
                    Some((id, n)) => (id, n.parse::<u32>().map_err(|_| bad())?),
                    None => (body, 1),
                };
                counts.push((DetectorId(id.parse().map_err(|_| bad())?), n));
            }
            return Ok(DetectionPattern::new(counts));
        }
        let body = s.strip_prefix('D').ok_or_else(bad)?;
        if body.is_empty() {
            return Err(bad());
        }
        let ids = body
            .chars()
            .map(|c| c.to_digit(10).filter(|&d| d > 0).ok_or_else(bad))
            .collect::<Result<Vec<u32>>>()?;
        Ok(DetectionPattern::clicks(&ids))
    }
}

/// Probability of each detection pattern.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutcomeDistribution {
    entries: BTreeMap<DetectionPattern, f64>,
}

impl OutcomeDistribution {
    pub fn probability(&self, pattern: &DetectionPattern) -> f64 {
        self.entries.get(pattern).copied().unwrap_or(0.0)
    }

    /// Summed probability of the patterns written as `D13+D24`-style compact tokens,
    /// or any other [`DetectionPattern`] form.
    pub fn probability_of_any(&self, patterns: &[DetectionPattern]) -> f64 {
        patterns.iter().map(|p| self.probability(p)).sum()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DetectionPattern, &f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `pattern,probability` rows under a schema comment line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema_version: {SCHEMA_VERSION}\npattern,probability\n");
        for (p, prob) in &self.entries {
            out.push_str(&format!("{p},{prob:.12}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(p, prob)| json!({"pattern": p.to_string(), "probability": prob}))
            .collect();
        json!({"schema_version": SCHEMA_VERSION, "outcomes": entries})
    }
}

/// Which classification table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Standard,
    Symmetric,
    /// N-party ring; classified by V-detector parity.
    Ghz(usize),
}

impl Scheme {
    pub fn of(spec: &CircuitSpec) -> Scheme {
        match spec.kind() {
            CircuitKind::StandardBsm => Scheme::Standard,
            CircuitKind::SymmetricBsm => Scheme::Symmetric,
            CircuitKind::Ghz => Scheme::Ghz(spec.parties()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BsmVerdict {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    Inconclusive,
}

impl BsmVerdict {
    pub fn bell_state(self) -> Option<BellState> {
        match self {
            BsmVerdict::PhiPlus => Some(BellState::PhiPlus),
            BsmVerdict::PhiMinus => Some(BellState::PhiMinus),
            BsmVerdict::PsiPlus => Some(BellState::PsiPlus),
            BsmVerdict::PsiMinus => Some(BellState::PsiMinus),
            BsmVerdict::Inconclusive => None,
        }
    }

    pub fn from_bell(b: BellState) -> Self {
        match b {
            BellState::PhiPlus => BsmVerdict::PhiPlus,
            BellState::PhiMinus => BsmVerdict::PhiMinus,
            BellState::PsiPlus => BsmVerdict::PsiPlus,
            BellState::PsiMinus => BsmVerdict::PsiMinus,
        }
    }
}

impl fmt::Display for BsmVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bell_state() {
            Some(b) => write!(f, "{b}"),
            None => f.write_str("inconclusive"),
        }
    }
}

/// Table-driven BSM verdict.
///
/// Standard: D12/D34 → ψ⁺, D14/D23 → ψ⁻. Symmetric: D13/D24 → φ⁺, D14/D23 → φ⁻.
/// GHZ ring: one click per party (detector pair `2k+1, 2k+2`), even number of
/// V-detector clicks → φ⁺, odd → φ⁻. Everything else is inconclusive.
pub fn classify(pattern: &DetectionPattern, scheme: Scheme) -> BsmVerdict {
    let ids = pattern.ids();
    match scheme {
        Scheme::Standard => match ids.as_slice() {
            [1, 2] | [3, 4] => BsmVerdict::PsiPlus,
            [1, 4] | [2, 3] => BsmVerdict::PsiMinus,
            _ => BsmVerdict::Inconclusive,
        },
        Scheme::Symmetric => match ids.as_slice() {
            [1, 3] | [2, 4] => BsmVerdict::PhiPlus,
            [1, 4] | [2, 3] => BsmVerdict::PhiMinus,
            _ => BsmVerdict::Inconclusive,
        },
        Scheme::Ghz(n) => {
            if ids.len() != n {
                return BsmVerdict::Inconclusive;
            }
            let one_per_party = ids
                .iter()
                .enumerate()
                .all(|(k, &d)| d == 2 * k as u32 + 1 || d == 2 * k as u32 + 2);
            if !one_per_party {
                return BsmVerdict::Inconclusive;
            }
            let v_clicks = ids.iter().filter(|&&d| d % 2 == 0).count();
            if v_clicks % 2 == 0 {
                BsmVerdict::PhiPlus
            } else {
                BsmVerdict::PhiMinus
            }
        }
    }
}

/// Detector-level distribution of a circuit output state.
pub fn measure(state: &PhotonicState, spec: &CircuitSpec) -> Result<OutcomeDistribution> {
    let mut entries: BTreeMap<DetectionPattern, f64> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        let mut counts = Vec::new();
        for (mode, n) in occ.entries() {
            match spec.detector(&mode.spatial, mode.polarization) {
                Some(d) => counts.push((d, *n)),
                None => return Err(Error::UnwiredMode(mode.to_string())),
            }
        }
        *entries.entry(DetectionPattern::new(counts)).or_insert(0.0) += amp.norm_sqr();
    }
    Ok(OutcomeDistribution { entries })
}

/// Verdict probabilities of a distribution.
pub fn verdict_probabilities(
    dist: &OutcomeDistribution,
    scheme: Scheme,
) -> BTreeMap<BsmVerdict, f64> {
    let mut out = BTreeMap::new();
    for (p, prob) in dist.iter() {
        *out.entry(classify(p, scheme)).or_insert(0.0) += prob;
    }
    out
}

/// Result of post-selecting one photon per party output.
#[derive(Debug, Clone, PartialEq)]
pub struct Heralded {
    pub probability: f64,
    /// `None` when the heralding probability vanishes.
    pub state: Option<DensityMatrix>,
}

/// Sends `input` through the preparation optics, keeps the events with exactly one photon
/// in each party output, traces out temporal bins, and returns the normalized polarization
/// state with its heralding probability.
pub fn heralded_state(input: &PhotonicState, spec: &CircuitSpec) -> Result<Heralded> {
    let outputs = spec.outputs();
    let n = outputs.len();
    if input.photon_number() as usize != n {
        return Err(Error::PhotonNumberMismatch {
            expected: n as u32,
            got: input.photon_number(),
        });
    }
    let prepared = spec.prepare(input);
    herald_outputs(&prepared, outputs)
}

/// Heralding on an already-prepared state; see [`heralded_state`].
pub fn herald_outputs(prepared: &PhotonicState, outputs: &[Path]) -> Result<Heralded> {
    let n = outputs.len();
    let dim = 1usize << n;
    // temporal assignment -> polarization amplitude vector
    let mut branches: BTreeMap<Vec<u32>, Vec<Complex64>> = BTreeMap::new();
    for (occ, amp) in prepared.terms() {
        let entries = occ.entries();
        if entries.len() != n || entries.iter().any(|(_, c)| *c != 1) {
            continue;
        }
        let mut index = 0usize;
        let mut temporal = vec![0u32; n];
        let mut seen = vec![false; n];
        let mut ok = true;
        for (mode, _) in entries {
            match outputs.iter().position(|p| *p == mode.spatial) {
                Some(k) if !seen[k] => {
                    seen[k] = true;
                    index |= mode.polarization.index() << (n - 1 - k);
                    temporal[k] = mode.temporal;
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        branches
            .entry(temporal)
            .or_insert_with(|| vec![Complex64::new(0.0, 0.0); dim])[index] += amp;
    }
    let mut rho = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for v in branches.values() {
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    let probability = rho.trace().re;
    if probability < 1e-14 {
        return Ok(Heralded {
            probability: 0.0,
            state: None,
        });
    }
    Ok(Heralded {
        probability,
        state: Some(DensityMatrix::from_unnormalized(rho)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{standard_bsm, symmetric_bsm};
    use crate::inputs::{product_state, PolState};

    #[test]
    fn pattern_notation() {
        let p: DetectionPattern = "D14".parse().unwrap();
        assert_eq!(p, DetectionPattern::clicks(&[1, 4]));
        assert_eq!(p.to_string(), "D1+D4");
        let p: DetectionPattern = "D11".parse().unwrap();
        assert_eq!(p.to_string(), "D1^2");
        assert_eq!("D1^2".parse::<DetectionPattern>().unwrap(), p);
        assert_eq!(
            "D3+D1".parse::<DetectionPattern>().unwrap().to_string(),
            "D1+D3"
        );
        assert!("X12".parse::<DetectionPattern>().is_err());
        assert!("D".parse::<DetectionPattern>().is_err());
        assert!("D10".parse::<DetectionPattern>().is_err());
    }

    #[test]
    fn classification_tables() {
        let p = |s: &str| s.parse::<DetectionPattern>().unwrap();
        assert_eq!(classify(&p("D13"), Scheme::Symmetric), BsmVerdict::PhiPlus);
        assert_eq!(classify(&p("D24"), Scheme::Symmetric), BsmVerdict::PhiPlus);
        assert_eq!(classify(&p("D14"), Scheme::Symmetric), BsmVerdict::PhiMinus);
        assert_eq!(classify(&p("D23"), Scheme::Symmetric), BsmVerdict::PhiMinus);
        assert_eq!(
            classify(&p("D11"), Scheme::Symmetric),
            BsmVerdict::Inconclusive
        );
        assert_eq!(
            classify(&p("D12"), Scheme::Symmetric),
            BsmVerdict::Inconclusive
        );
        assert_eq!(classify(&p("D12"), Scheme::Standard), BsmVerdict::PsiPlus);
        assert_eq!(classify(&p("D34"), Scheme::Standard), BsmVerdict::PsiPlus);
        assert_eq!(classify(&p("D23"), Scheme::Standard), BsmVerdict::PsiMinus);
        assert_eq!(
            classify(&p("D13"), Scheme::Standard),
            BsmVerdict::Inconclusive
        );
        for s in ["D13", "D24", "D14", "D23", "D11", "D12", "D34"] {
            assert_eq!(
                classify(&p(s), Scheme::Ghz(2)),
                classify(&p(s), Scheme::Symmetric),
                "{s}"
            );
        }
        assert_eq!(classify(&p("D135"), Scheme::Ghz(3)), BsmVerdict::PhiPlus);
        assert_eq!(classify(&p("D136"), Scheme::Ghz(3)), BsmVerdict::PhiMinus);
        assert_eq!(
            classify(&p("D115"), Scheme::Ghz(3)),
            BsmVerdict::Inconclusive
        );
    }

    #[test]
    fn measure_rejects_unwired_modes() {
        let spec = symmetric_bsm().unwrap();
        let s = BellState::PhiPlus.state(&Path::new("a"), &Path::new("b"));
        // the raw input is not at the detectors
        assert!(matches!(measure(&s, &spec), Err(Error::UnwiredMode(_))));
    }

    #[test]
    fn csv_and_json_forms() {
        let spec = symmetric_bsm().unwrap();
        let s = BellState::PhiMinus.state(&Path::new("a"), &Path::new("b"));
        let dist = measure(&spec.run(&s), &spec).unwrap();
        let csv = dist.to_csv();
        assert_eq!(
            csv,
            "# schema_version: 1\npattern,probability\nD1+D4,0.500000000000\nD2+D3,0.500000000000\n"
        );
        let js = dist.to_json();
        assert_eq!(js["outcomes"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn heralding_hv_through_standard_splitter_gives_psi_minus() {
        let spec = standard_bsm().unwrap();
        let input = product_state(spec.inputs(), &[PolState::H, PolState::V]).unwrap();
        let h = heralded_state(&input, &spec).unwrap();
        assert!((h.probability - 0.5).abs() < 1e-12);
        let f = h
            .state
            .unwrap()
            .fidelity(&BellState::PsiMinus.qubit_vector());
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heralding_reports_empty_verdict() {
        let spec = standard_bsm().unwrap();
        // HOM: identical photons never leave in separate outputs
        let input = product_state(spec.inputs(), &[PolState::H, PolState::H]).unwrap();
        let h = heralded_state(&input, &spec).unwrap();
        assert_eq!(h.probability, 0.0);
        assert!(h.state.is_none());
    }
}
