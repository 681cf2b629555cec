//! Linear maps on creation operators.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mode::{ModeLabel, Path};
use crate::state::{factorial, Occupation, PhotonicState};

/// Tolerance for the `U^dag U = I` check.
pub const ISOMETRY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `a_i^dag -> sum_j U[j, i] b_j^dag` for the listed input modes.
///
/// Modes not in `modes_in` pass through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMap {
    modes_in: Vec<ModeLabel>,
    modes_out: Vec<ModeLabel>,
    matrix: DMatrix<Complex64>,
}

impl TransferMap {
    /// `matrix` has one row per output mode and one column per input mode.
    pub fn new(
        modes_in: Vec<ModeLabel>,
        modes_out: Vec<ModeLabel>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        if matrix.nrows() != modes_out.len() || matrix.ncols() != modes_in.len() {
            return Err(Error::Shape(format!(
                "{}x{} matrix for {} outputs and {} inputs",
                matrix.nrows(),
                matrix.ncols(),
                modes_out.len(),
                modes_in.len()
            )));
        }
        check_distinct(&modes_in)?;
        check_distinct(&modes_out)?;
        let map = TransferMap {
            modes_in,
            modes_out,
            matrix,
        };
        let deviation = map.isometry_deviation();
        if deviation > ISOMETRY_TOLERANCE {
            return Err(Error::NotIsometric { deviation });
        }
        Ok(map)
    }

    pub fn identity(modes: Vec<ModeLabel>) -> Result<Self> {
        let n = modes.len();
        Self::new(modes.clone(), modes, DMatrix::identity(n, n))
    }

    /// Builds a map from per-input images. Output modes are the sorted union of all image modes.
    pub fn from_images(images: Vec<(ModeLabel, Vec<(ModeLabel, Complex64)>)>) -> Result<Self> {
        let outs: BTreeSet<ModeLabel> = images
            .iter()
            .flat_map(|(_, img)| img.iter().map(|(m, _)| m.clone()))
            .collect();
        let modes_out: Vec<ModeLabel> = outs.into_iter().collect();
        let row: HashMap<&ModeLabel, usize> =
            modes_out.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut matrix = DMatrix::from_element(modes_out.len(), images.len(), ZERO);
        for (col, (_, img)) in images.iter().enumerate() {
            for (m, c) in img {
                matrix[(row[m], col)] += *c;
            }
        }
        let modes_in = images.into_iter().map(|(m, _)| m).collect();
        Self::new(modes_in, modes_out, matrix)
    }

    pub fn modes_in(&self) -> &[ModeLabel] {
        &self.modes_in
    }

    pub fn modes_out(&self) -> &[ModeLabel] {
        &self.modes_out
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn is_square(&self) -> bool {
        self.modes_in.len() == self.modes_out.len()
    }

    /// `max |(U^dag U - I)_{ij}|`
    pub fn isometry_deviation(&self) -> f64 {
        let gram = self.matrix.adjoint() * &self.matrix;
        let n = gram.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((gram[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Image of one creation operator; pass-through modes map to themselves.
    pub fn image(&self, mode: &ModeLabel) -> Vec<(ModeLabel, Complex64)> {
        match self.modes_in.iter().position(|m| m == mode) {
            Some(col) => self
                .modes_out
                .iter()
                .enumerate()
                .filter_map(|(row, m)| {
                    let c = self.matrix[(row, col)];
                    (c != ZERO).then(|| (m.clone(), c))
                })
                .collect(),
            None => vec![(mode.clone(), ONE)],
        }
    }

    /// Coefficient of `to^dag` in the image of `from^dag`.
    pub fn coefficient(&self, from: &ModeLabel, to: &ModeLabel) -> Complex64 {
        self.image(from)
            .into_iter()
            .find(|(m, _)| m == to)
            .map(|(_, c)| c)
            .unwrap_or(ZERO)
    }

    /// Applies the map to every creation operator of `state` and expands the products.
    pub fn apply(&self, state: &PhotonicState) -> PhotonicState {
        let mut universe: Vec<ModeLabel> = self.modes_out.clone();
        let mut index: HashMap<ModeLabel, u32> = universe
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mut images: HashMap<ModeLabel, Vec<(u32, Complex64)>> = HashMap::new();
        for mode in state.modes() {
            let img = self
                .image(&mode)
                .into_iter()
                .map(|(m, c)| {
                    let next = universe.len() as u32;
                    let idx = *index.entry(m.clone()).or_insert_with(|| {
                        universe.push(m);
                        next
                    });
                    (idx, c)
                })
                .collect();
            images.insert(mode, img);
        }

        let mut total: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (occ, amp) in state.terms() {
            let mut poly: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
            poly.insert(Vec::new(), amp / occ.factorial_weight().sqrt());
            for mode in occ.expanded() {
                let img = &images[&mode];
                let mut next: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
                for (key, c) in &poly {
                    for &(j, u) in img {
                        let mut k = key.clone();
                        let pos = k.partition_point(|&x| x <= j);
                        k.insert(pos, j);
                        *next.entry(k).or_insert(ZERO) += c * u;
                    }
                }
                poly = next;
            }
            for (key, c) in poly {
                *total.entry(key).or_insert(ZERO) += c;
            }
        }

        let terms = total.into_iter().map(|(key, c)| {
            let occ = Occupation::new(key.iter().map(|&j| (universe[j as usize].clone(), 1)));
            let weight: f64 = multiplicities(&key).map(factorial).product();
            (occ, c * weight.sqrt())
        });
        PhotonicState::unnormalized(terms).expect("photon number is preserved by a linear map")
    }

    /// `next ∘ self`: apply `self` first, then `next`.
    ///
    /// Inputs of `next` that `self` produces are internal; the remaining inputs of `next`
    /// become inputs of the composite.
    pub fn then(&self, next: &TransferMap) -> Result<TransferMap> {
        let produced: BTreeSet<&ModeLabel> = self.modes_out.iter().collect();
        let own: BTreeSet<&ModeLabel> = self.modes_in.iter().collect();
        let mut images = Vec::new();
        for (col, m) in self.modes_in.iter().enumerate() {
            let mut acc: BTreeMap<ModeLabel, Complex64> = BTreeMap::new();
            for (row, out) in self.modes_out.iter().enumerate() {
                let c = self.matrix[(row, col)];
                if c == ZERO {
                    continue;
                }
                for (m2, c2) in next.image(out) {
                    *acc.entry(m2).or_insert(ZERO) += c * c2;
                }
            }
            images.push((m.clone(), acc.into_iter().collect::<Vec<_>>()));
        }
        for m in &next.modes_in {
            if !produced.contains(m) && !own.contains(m) {
                images.push((m.clone(), next.image(m)));
            }
        }
        let mut composite = Self::from_images(images)?;
        // keep modes with identically zero rows visible, e.g. unused temporal bins
        let extra: Vec<ModeLabel> = next
            .modes_out
            .iter()
            .filter(|m| !composite.modes_out.contains(m))
            .cloned()
            .collect();
        if !extra.is_empty() {
            composite = composite.with_extra_outputs(extra);
        }
        Ok(composite)
    }

    fn with_extra_outputs(self, extra: Vec<ModeLabel>) -> TransferMap {
        let mut outs = self.modes_out.clone();
        outs.extend(extra);
        outs.sort();
        let row: HashMap<&ModeLabel, usize> =
            outs.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut matrix = DMatrix::from_element(outs.len(), self.modes_in.len(), ZERO);
        for (r, m) in self.modes_out.iter().enumerate() {
            for c in 0..self.modes_in.len() {
                matrix[(row[m], c)] = self.matrix[(r, c)];
            }
        }
        TransferMap {
            modes_in: self.modes_in,
            modes_out: outs,
            matrix,
        }
    }

    /// Compose a sequence of maps, first element applied first.
    pub fn compose_all<'a>(maps: impl IntoIterator<Item = &'a TransferMap>) -> Result<TransferMap> {
        let mut iter = maps.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Shape("cannot compose an empty sequence".into()))?
            .clone();
        iter.try_fold(first, |acc, m| acc.then(m))
    }

    /// Renames spatial paths on both sides of the map.
    pub fn relabel(&self, rename: impl Fn(&Path) -> Path) -> Result<TransferMap> {
        let f = |m: &ModeLabel| m.with_spatial(rename(&m.spatial));
        Self::new(
            self.modes_in.iter().map(f).collect(),
            self.modes_out.iter().map(f).collect(),
            self.matrix.clone(),
        )
    }

    /// Largest coefficient difference after removing a global phase; `None` when
    /// the maps act on different mode sets.
    pub fn distance_up_to_phase(&self, other: &TransferMap) -> Option<f64> {
        let ins: BTreeSet<&ModeLabel> = self.modes_in.iter().collect();
        let other_ins: BTreeSet<&ModeLabel> = other.modes_in.iter().collect();
        if ins != other_ins {
            return None;
        }
        let mut pairs = Vec::new();
        for m in &self.modes_in {
            let a: BTreeMap<ModeLabel, Complex64> = self.image(m).into_iter().collect();
            let b: BTreeMap<ModeLabel, Complex64> = other.image(m).into_iter().collect();
            let keys: BTreeSet<&ModeLabel> = a.keys().chain(b.keys()).collect();
            for k in keys {
                pairs.push((
                    a.get(k).copied().unwrap_or(ZERO),
                    b.get(k).copied().unwrap_or(ZERO),
                ));
            }
        }
        let overlap: Complex64 = pairs.iter().map(|(a, b)| a.conj() * b).sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        Some(
            pairs
                .iter()
                .map(|(a, b)| (a * phase - b).norm())
                .fold(0.0, f64::max),
        )
    }
}

fn multiplicities(sorted: &[u32]) -> impl Iterator<Item = u32> + '_ {
    sorted.chunk_by(|a, b| a == b).map(|run| run.len() as u32)
}

fn check_distinct(modes: &[ModeLabel]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for m in modes {
        if !seen.insert(m) {
            return Err(Error::LabelCollision(m.to_string()));
        }
    }
    Ok(())
}

/// Free-function form of [`TransferMap::apply`].
pub fn apply_transfer(state: &PhotonicState, map: &TransferMap) -> PhotonicState {
    map.apply(state)
}
