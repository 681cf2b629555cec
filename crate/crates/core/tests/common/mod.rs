//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lobsim::{
    CircuitSpec, DetectionPattern, DetectorId, ModeLabel, Occupation, PhotonicState, TransferMap,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Permanent by summing over all permutations.
pub fn permanent(m: &DMatrix<Complex64>) -> Complex64 {
    assert_eq!(m.nrows(), m.ncols());
    permutations(m.nrows())
        .into_iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(r, &col)| m[(r, col)])
                .product::<Complex64>()
        })
        .sum()
}

fn multisets(
    items: usize,
    size: usize,
    start: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if acc.len() == size {
        out.push(acc.clone());
        return;
    }
    for i in start..items {
        acc.push(i);
        multisets(items, size, i, acc, out);
        acc.pop();
    }
}

/// Output amplitudes of `map` on `state` from transition amplitudes
/// <m|U|n> = Perm(U[m, n]) / sqrt(prod n! prod m!).
///
/// Every mode of `state` must be an input of `map`.
pub fn oracle_apply(map: &TransferMap, state: &PhotonicState) -> BTreeMap<Occupation, Complex64> {
    let ins = map.modes_in();
    let outs = map.modes_out();
    let u = map.matrix();
    let col = |m: &ModeLabel| {
        ins.iter()
            .position(|x| x == m)
            .unwrap_or_else(|| panic!("{m} is not an input of the map"))
    };
    let reachable: BTreeSet<usize> = state
        .modes()
        .iter()
        .flat_map(|m| {
            let j = col(m);
            (0..outs.len()).filter(move |&r| u[(r, j)].norm() > 0.0)
        })
        .collect();
    let reachable: Vec<usize> = reachable.into_iter().collect();
    let n = state.photon_number() as usize;
    let mut targets = Vec::new();
    multisets(reachable.len(), n, 0, &mut Vec::new(), &mut targets);

    let mut result = BTreeMap::new();
    for t in targets {
        let rows: Vec<usize> = t.iter().map(|&i| reachable[i]).collect();
        let out_occ = Occupation::from_modes(rows.iter().map(|&r| &outs[r]));
        let mut amp = ZERO;
        for (in_occ, coeff) in state.terms() {
            let cols: Vec<usize> = in_occ.expanded().iter().map(col).collect();
            let sub = DMatrix::from_fn(n, n, |r, k| u[(rows[r], cols[k])]);
            let norm: f64 = in_occ
                .entries()
                .iter()
                .map(|(_, k)| factorial(*k))
                .product::<f64>()
                * out_occ
                    .entries()
                    .iter()
                    .map(|(_, k)| factorial(*k))
                    .product::<f64>();
            amp += coeff * permanent(&sub) / norm.sqrt();
        }
        if amp.norm() > 1e-14 {
            result.insert(out_occ, amp);
        }
    }
    result
}

/// Detector-pattern distribution computed from the oracle amplitudes and the circuit wiring.
pub fn oracle_distribution(
    spec: &CircuitSpec,
    input: &PhotonicState,
) -> BTreeMap<DetectionPattern, f64> {
    let amps = oracle_apply(spec.compiled(), input);
    let mut dist = BTreeMap::new();
    for (occ, amp) in amps {
        let mut clicks: BTreeMap<DetectorId, u32> = BTreeMap::new();
        let mut lost = false;
        for (mode, k) in occ.entries() {
            match spec.detector(&mode.spatial, mode.polarization) {
                Some(d) => *clicks.entry(d).or_insert(0) += k,
                None => lost = true,
            }
        }
        assert!(!lost, "photon left the circuit through an unwired port");
        *dist.entry(DetectionPattern::new(clicks)).or_insert(0.0) += amp.norm_sqr();
    }
    dist
}

/// Haar-like random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let d = r[(i, i)];
            d / d.norm()
        } else {
            ZERO
        }
    });
    q * phases
}

pub fn modes(names: &[&str]) -> Vec<ModeLabel> {
    names
        .iter()
        .flat_map(|n| [ModeLabel::h(n), ModeLabel::v(n)])
        .collect()
}

/// Normalized state from creation-operator monomials on H/V modes, e.g. `("g_H h_V", 1.0)`.
pub fn operator_state(terms: &[(&str, Complex64)]) -> PhotonicState {
    let parsed: Vec<(Complex64, Vec<ModeLabel>)> = terms
        .iter()
        .map(|(mono, coeff)| {
            let ms = mono
                .split_whitespace()
                .map(|tok| {
                    let (path, pol) = tok.rsplit_once('_').expect("mode written as path_P");
                    match pol {
                        "H" => ModeLabel::h(path),
                        "V" => ModeLabel::v(path),
                        _ => panic!("bad polarization in {tok}"),
                    }
                })
                .collect();
            (*coeff, ms)
        })
        .collect();
    PhotonicState::from_operator_terms(&parsed)
        .and_then(|s| s.normalize())
        .unwrap()
}

/// Largest amplitude difference after removing the best global phase.
pub fn distance_up_to_phase(a: &PhotonicState, b: &PhotonicState) -> f64 {
    let overlap = b.inner_product(a);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    let keys: BTreeSet<&Occupation> = a
        .terms()
        .map(|(o, _)| o)
        .chain(b.terms().map(|(o, _)| o))
        .collect();
    keys.into_iter()
        .map(|o| (a.amplitude(o) - phase * b.amplitude(o)).norm())
        .fold(0.0, f64::max)
}

/// Concurrence of a two-qubit density matrix via the eigenvalues of rho (sy sy) rho* (sy sy),
/// computed through a Schur decomposition of the non-Hermitian product.
pub fn wootters_concurrence(rho: &DMatrix<Complex64>) -> f64 {
    let mut flip = DMatrix::from_element(4, 4, ZERO);
    // sy (x) sy has entries -1 on the anti-diagonal corners and +1 on the inner anti-diagonal
    flip[(0, 3)] = c(-1.0, 0.0);
    flip[(3, 0)] = c(-1.0, 0.0);
    flip[(1, 2)] = c(1.0, 0.0);
    flip[(2, 1)] = c(1.0, 0.0);
    let tilde = &flip * rho.conjugate() * &flip;
    let r = rho * tilde;
    let eig = r
        .schur()
        .eigenvalues()
        .expect("complex eigenvalues of a 4x4 matrix");
    let mut l: Vec<f64> = eig.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Heralding probability and unnormalized-then-normalized polarization density matrix,
/// built from the oracle amplitudes of the preparation map.
pub fn oracle_herald(spec: &CircuitSpec, input: &PhotonicState) -> (f64, DMatrix<Complex64>) {
    let outputs = spec.outputs();
    let n = outputs.len();
    let dim = 1usize << n;
    let mut branches: BTreeMap<Vec<u32>, Vec<Complex64>> = BTreeMap::new();
    for (occ, amp) in oracle_apply(spec.preparation(), input) {
        let mut per_party: Vec<Option<&ModeLabel>> = vec![None; n];
        let mut valid = occ.photon_number() as usize == n;
        for (mode, k) in occ.entries() {
            match outputs.iter().position(|p| *p == mode.spatial) {
                Some(i) if *k == 1 && per_party[i].is_none() => per_party[i] = Some(mode),
                _ => valid = false,
            }
        }
        if !valid {
            continue;
        }
        let modes: Vec<&ModeLabel> = per_party.into_iter().map(|m| m.unwrap()).collect();
        let index = modes
            .iter()
            .fold(0usize, |acc, m| (acc << 1) | m.polarization.index());
        let bins: Vec<u32> = modes.iter().map(|m| m.temporal).collect();
        branches.entry(bins).or_insert_with(|| vec![ZERO; dim])[index] += amp;
    }
    let mut rho = DMatrix::from_element(dim, dim, ZERO);
    for v in branches.values() {
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    let p = rho.trace().re;
    if p > 0.0 {
        rho /= c(p, 0.0);
    }
    (p, rho)
}

pub fn ghz_vector(n: usize, minus: bool) -> Vec<Complex64> {
    let dim = 1 << n;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![ZERO; dim];
    v[0] = c(r, 0.0);
    v[dim - 1] = c(if minus { -r } else { r }, 0.0);
    v
}

pub fn pure_fidelity(rho: &DMatrix<Complex64>, psi: &[Complex64]) -> f64 {
    let mut f = ZERO;
    for i in 0..psi.len() {
        for j in 0..psi.len() {
            f += psi[i].conj() * rho[(i, j)] * psi[j];
        }
    }
    f.re
}

/// Number of clicks on V-wired detectors (even ids), or `None` unless every party fires once.
pub fn v_parity(pattern: &DetectionPattern, parties: usize) -> Option<u32> {
    let counts = pattern.counts();
    let mut vs = 0;
    for k in 0..parties as u32 {
        let h = counts.get(&DetectorId(2 * k + 1)).copied().unwrap_or(0);
        let v = counts.get(&DetectorId(2 * k + 2)).copied().unwrap_or(0);
        if h + v != 1 {
            return None;
        }
        vs += v;
    }
    Some(vs % 2)
}
