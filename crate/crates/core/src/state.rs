//! Multimode Fock states of indistinguishable bosons.
//!
//! Amplitudes carry the bosonic normalization: the term `{g_H: 2}` with amplitude
//! `c` is the normalized Fock state `c |2>`, i.e. `c (g_H^dag)^2 / sqrt(2) |0>`.
//! Probabilities are therefore plain `|c|^2`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mode::{ModeLabel, Path, Polarization};

/// Amplitudes below this magnitude are treated as cancelled.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Occupation numbers of a Fock basis vector, sorted by mode, zero counts omitted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Occupation(Vec<(ModeLabel, u32)>);

impl Occupation {
    /// Builds an occupation from `(mode, count)` pairs. Repeated modes are summed.
    pub fn new(entries: impl IntoIterator<Item = (ModeLabel, u32)>) -> Self {
        let mut map: BTreeMap<ModeLabel, u32> = BTreeMap::new();
        for (mode, n) in entries {
            if n > 0 {
                *map.entry(mode).or_insert(0) += n;
            }
        }
        Occupation(map.into_iter().collect())
    }

    /// One photon per listed mode; repeated modes stack.
    pub fn from_modes<'a>(modes: impl IntoIterator<Item = &'a ModeLabel>) -> Self {
        Self::new(modes.into_iter().map(|m| (m.clone(), 1)))
    }

    pub fn entries(&self) -> &[(ModeLabel, u32)] {
        &self.0
    }

    pub fn photon_number(&self) -> u32 {
        self.0.iter().map(|(_, n)| n).sum()
    }

    pub fn count(&self, mode: &ModeLabel) -> u32 {
        self.0
            .binary_search_by(|(m, _)| m.cmp(mode))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// `prod_k n_k!`
    pub fn factorial_weight(&self) -> f64 {
        self.0.iter().map(|(_, n)| factorial(*n)).product()
    }

    /// Counts per (spatial, polarization), summed over temporal bins.
    pub fn spatial_polarization_counts(&self) -> BTreeMap<(Path, Polarization), u32> {
        let mut out = BTreeMap::new();
        for (m, n) in &self.0 {
            *out.entry((m.spatial.clone(), m.polarization)).or_insert(0) += n;
        }
        out
    }

    /// Counts per spatial path, summed over polarization and temporal bins.
    pub fn spatial_counts(&self) -> BTreeMap<Path, u32> {
        let mut out = BTreeMap::new();
        for (m, n) in &self.0 {
            *out.entry(m.spatial.clone()).or_insert(0) += n;
        }
        out
    }

    /// Photon-by-photon mode list, e.g. `{g_H: 2}` becomes `[g_H, g_H]`.
    pub fn expanded(&self) -> Vec<ModeLabel> {
        self.0
            .iter()
            .flat_map(|(m, n)| std::iter::repeat_n(m.clone(), *n as usize))
            .collect()
    }

    fn parse(key: &str) -> Result<Self> {
        if key.is_empty() {
            return Ok(Occupation::default());
        }
        let mut entries = Vec::new();
        for item in key.split(',') {
            let (mode, count) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("missing count in {item:?}")))?;
            let count: u32 = count
                .parse()
                .map_err(|_| Error::Parse(format!("bad count in {item:?}")))?;
            entries.push((parse_mode(mode)?, count));
        }
        Ok(Occupation::new(entries))
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}:{n}")?;
        }
        Ok(())
    }
}

fn parse_mode(s: &str) -> Result<ModeLabel> {
    let (body, temporal) = match s.split_once('@') {
        Some((b, t)) => (
            b,
            t.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad temporal bin in {s:?}")))?,
        ),
        None => (s, 0),
    };
    let (spatial, pol) = body
        .rsplit_once('_')
        .ok_or_else(|| Error::Parse(format!("missing polarization in {s:?}")))?;
    let pol = match pol {
        "H" => Polarization::H,
        "V" => Polarization::V,
        other => return Err(Error::Parse(format!("unknown polarization {other:?}"))),
    };
    Ok(ModeLabel::new(Path::new(spatial), pol, temporal))
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Superposition of Fock basis vectors with a common photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState {
    terms: BTreeMap<Occupation, Complex64>,
    photons: u32,
}

impl PhotonicState {
    /// Canonicalizes, merges and normalizes `terms`.
    pub fn new(terms: impl IntoIterator<Item = (Occupation, Complex64)>) -> Result<Self> {
        Ok(make_state(terms)?.0)
    }

    /// Builds the state without normalizing. Terms are merged and cancelled amplitudes dropped.
    pub fn unnormalized(terms: impl IntoIterator<Item = (Occupation, Complex64)>) -> Result<Self> {
        let mut merged: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        let mut photons: Option<u32> = None;
        let mut seen_any = false;
        for (occ, amp) in terms {
            seen_any = true;
            let n = occ.photon_number();
            match photons {
                None => photons = Some(n),
                Some(p) if p != n => return Err(Error::MixedPhotonNumber(p, n)),
                _ => {}
            }
            *merged.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        if !seen_any {
            return Err(Error::EmptyState);
        }
        merged.retain(|_, a| a.norm() >= MERGE_TOLERANCE);
        Ok(PhotonicState {
            terms: merged,
            photons: photons.unwrap_or(0),
        })
    }

    /// State written as a polynomial in creation operators acting on vacuum.
    ///
    /// Each entry is `(coefficient, [modes])` meaning `coefficient * prod a_m^dag |0>`.
    /// The `sqrt(n!)` factors of repeated modes are absorbed into the amplitudes.
    /// The result is not normalized.
    pub fn from_operator_terms(terms: &[(Complex64, Vec<ModeLabel>)]) -> Result<Self> {
        Self::unnormalized(terms.iter().map(|(c, modes)| {
            let occ = Occupation::from_modes(modes);
            let w = occ.factorial_weight().sqrt();
            (occ, c * w)
        }))
    }

    /// Single Fock basis vector with unit amplitude.
    pub fn basis(occupation: Occupation) -> Self {
        let photons = occupation.photon_number();
        PhotonicState {
            terms: BTreeMap::from([(occupation, Complex64::new(1.0, 0.0))]),
            photons,
        }
    }

    pub fn photon_number(&self) -> u32 {
        self.photons
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occupation: &Occupation) -> Complex64 {
        self.terms
            .get(occupation)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n < MERGE_TOLERANCE {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        PhotonicState {
            terms: self
                .terms
                .iter()
                .map(|(o, a)| (o.clone(), a * factor))
                .collect(),
            photons: self.photons,
        }
    }

    /// `sum_i c_i |s_i>`, not normalized.
    pub fn linear_combination(parts: &[(Complex64, &PhotonicState)]) -> Result<Self> {
        Self::unnormalized(
            parts
                .iter()
                .flat_map(|(c, s)| s.terms.iter().map(move |(o, a)| (o.clone(), c * a))),
        )
    }

    /// Every mode carrying at least one photon in some term.
    pub fn modes(&self) -> Vec<ModeLabel> {
        let mut modes: Vec<ModeLabel> = self
            .terms
            .keys()
            .flat_map(|o| o.entries().iter().map(|(m, _)| m.clone()))
            .collect();
        modes.sort();
        modes.dedup();
        modes
    }

    /// `<self|other>`, zero when photon numbers differ.
    pub fn inner_product(&self, other: &PhotonicState) -> Complex64 {
        inner_product(self, other)
    }

    /// Probability of the detection pattern `pattern`.
    ///
    /// With `trace_temporal` the temporal bin of each pattern mode is ignored and every
    /// temporal assignment matching the (spatial, polarization) counts contributes.
    /// Without it the pattern must match term occupations exactly.
    pub fn pattern_probability(&self, pattern: &Occupation, trace_temporal: bool) -> Result<f64> {
        let n = pattern.photon_number();
        if n != self.photons {
            return Err(Error::PhotonNumberMismatch {
                expected: self.photons,
                got: n,
            });
        }
        if !trace_temporal {
            return Ok(self.amplitude(pattern).norm_sqr());
        }
        let target = pattern.spatial_polarization_counts();
        Ok(self
            .terms
            .iter()
            .filter(|(o, _)| o.spatial_polarization_counts() == target)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// True when the two states agree up to a global phase, amplitude by amplitude.
    pub fn approx_eq_up_to_phase(&self, other: &PhotonicState, tol: f64) -> bool {
        let overlap = self.inner_product(other);
        if overlap.norm() < MERGE_TOLERANCE {
            return self.norm() < tol && other.norm() < tol;
        }
        let phase = overlap / overlap.norm();
        let rotated = self.scale(phase);
        let keys: std::collections::BTreeSet<Occupation> = rotated
            .terms
            .keys()
            .chain(other.terms.keys())
            .cloned()
            .collect();
        keys.iter()
            .all(|k| (rotated.amplitude(k) - other.amplitude(k)).norm() <= tol)
    }

    /// JSON debug form: `{"a_H:1,b_H:1": [re, im], ...}`.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(o, a)| (o.to_string(), serde_json::json!([a.re, a.im])))
            .collect();
        Value::Object(map)
    }

    /// Parses the JSON debug form. The state is not renormalized.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("state JSON must be an object".into()))?;
        let mut terms = Vec::with_capacity(obj.len());
        for (k, v) in obj {
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse(format!("amplitude for {k:?} must be [re, im]")))?;
            let re = pair[0].as_f64().ok_or_else(|| Error::Parse("re".into()))?;
            let im = pair[1].as_f64().ok_or_else(|| Error::Parse("im".into()))?;
            terms.push((Occupation::parse(k)?, Complex64::new(re, im)));
        }
        Self::unnormalized(terms)
    }
}

impl fmt::Display for PhotonicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (o, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i)|{}>", a.re, a.im, o)?;
        }
        Ok(())
    }
}

/// Canonicalizes, merges and normalizes `terms`, returning the state and its original norm.
pub fn make_state(
    terms: impl IntoIterator<Item = (Occupation, Complex64)>,
) -> Result<(PhotonicState, f64)> {
    let raw = PhotonicState::unnormalized(terms)?;
    let n = raw.norm();
    Ok((raw.normalize()?, n))
}

pub fn inner_product(s1: &PhotonicState, s2: &PhotonicState) -> Complex64 {
    if s1.photons != s2.photons {
        return Complex64::new(0.0, 0.0);
    }
    let (small, large, conj_small) = if s1.terms.len() <= s2.terms.len() {
        (s1, s2, true)
    } else {
        (s2, s1, false)
    };
    small
        .terms
        .iter()
        .filter_map(|(o, a)| large.terms.get(o).map(|b| (a, b)))
        .map(|(a, b)| {
            if conj_small {
                a.conj() * b
            } else {
                b.conj() * a
            }
        })
        .sum()
}
