//! The named circuits: standard BSM, symmetric (no-overlap) BSM and its N-party ring.
//!
//! Each circuit is a list of stages of [`Element`]s compiled eagerly into one
//! [`TransferMap`]. The final analyzer stages (H2 and PBS3, or the output PBSs of the
//! standard scheme) are kept separate from the preparation stages so the state at the
//! party outputs can be heralded directly.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::detection::DetectorId;
use crate::error::{Error, Result};
use crate::mode::{Path, Polarization};
use crate::optics::{DelayModel, Element, Overlap};
use crate::state::PhotonicState;
use crate::transfer::TransferMap;

/// Version tag written into every JSON and CSV artifact.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitKind {
    StandardBsm,
    SymmetricBsm,
    Ghz,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub elements: Vec<Element>,
    /// Part of the polarization analyzer rather than the state-preparation optics.
    pub analyzer: bool,
}

impl Stage {
    fn new(name: &str, elements: Vec<Element>, analyzer: bool) -> Self {
        Stage {
            name: name.to_owned(),
            elements,
            analyzer,
        }
    }
}

/// Spatial paths used by one party of the symmetric scheme.
#[derive(Debug, Clone)]
struct PartyPaths {
    input: Path,
    h_arm: Path,
    v_arm: Path,
    output: Path,
}

impl PartyPaths {
    fn new(input: &str, h_arm: &str, v_arm: &str, output: &str) -> Self {
        PartyPaths {
            input: input.into(),
            h_arm: h_arm.into(),
            v_arm: v_arm.into(),
            output: output.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CircuitSpec {
    kind: CircuitKind,
    inputs: Vec<Path>,
    outputs: Vec<Path>,
    delay_path: Path,
    overlap: Overlap,
    stages: Vec<Stage>,
    wiring: BTreeMap<(Path, Polarization), DetectorId>,
    compiled: TransferMap,
    preparation: TransferMap,
}

impl CircuitSpec {
    fn build(
        kind: CircuitKind,
        inputs: Vec<Path>,
        outputs: Vec<Path>,
        stages: Vec<Stage>,
        wiring: BTreeMap<(Path, Polarization), DetectorId>,
    ) -> Result<Self> {
        let delay_path = inputs.last().expect("at least two parties").clone();
        let mut stages = stages;
        stages.insert(
            0,
            Stage::new(
                "delay",
                vec![Element::Delay {
                    path: delay_path.clone(),
                    overlap: 1.0,
                }],
                false,
            ),
        );
        let (compiled, preparation) = compile(&stages)?;
        let spec = CircuitSpec {
            kind,
            inputs,
            outputs,
            delay_path,
            overlap: Overlap::FULL,
            stages,
            wiring,
            compiled,
            preparation,
        };
        spec.check_wiring()?;
        Ok(spec)
    }

    fn check_wiring(&self) -> Result<()> {
        let ids: Vec<u32> = self.wiring.values().map(|d| d.0).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        let expected: Vec<u32> = (1..=2 * self.parties() as u32).collect();
        if sorted != expected {
            return Err(Error::InvalidParameter(format!(
                "detector wiring {ids:?} is not a bijection onto D1..D{}",
                2 * self.parties()
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> CircuitKind {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            CircuitKind::StandardBsm => "standard_bsm".into(),
            CircuitKind::SymmetricBsm => "symmetric_bsm".into(),
            CircuitKind::Ghz => format!("ghz_{}", self.parties()),
        }
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    /// Input path of each party, in party order.
    pub fn inputs(&self) -> &[Path] {
        &self.inputs
    }

    /// Party output paths before the analyzer, in party order.
    pub fn outputs(&self) -> &[Path] {
        &self.outputs
    }

    pub fn delay_path(&self) -> &Path {
        &self.delay_path
    }

    pub fn overlap(&self) -> Overlap {
        self.overlap
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn wiring(&self) -> &BTreeMap<(Path, Polarization), DetectorId> {
        &self.wiring
    }

    pub fn detector(&self, path: &Path, pol: Polarization) -> Option<DetectorId> {
        self.wiring.get(&(path.clone(), pol)).copied()
    }

    /// Whole circuit, delay through analyzer.
    pub fn compiled(&self) -> &TransferMap {
        &self.compiled
    }

    /// Everything before the analyzer.
    pub fn preparation(&self) -> &TransferMap {
        &self.preparation
    }

    /// Same circuit with wavepacket overlap `gamma` on the delayed input.
    pub fn with_overlap(&self, gamma: f64) -> Result<Self> {
        let overlap = Overlap::new(gamma)?;
        let mut stages = self.stages.clone();
        for stage in &mut stages {
            for e in &mut stage.elements {
                if let Element::Delay { overlap: o, .. } = e {
                    *o = gamma;
                }
            }
        }
        let (compiled, preparation) = compile(&stages)?;
        Ok(CircuitSpec {
            overlap,
            stages,
            compiled,
            preparation,
            ..self.clone()
        })
    }

    /// Same circuit with the delayed input shifted by `length` under `model`.
    pub fn with_delay(&self, model: &DelayModel, length: f64) -> Result<Self> {
        self.with_overlap(model.overlap(length))
    }

    /// Output state at the detectors.
    pub fn run(&self, input: &PhotonicState) -> PhotonicState {
        self.compiled.apply(input)
    }

    /// State at the party outputs, before the analyzer.
    pub fn prepare(&self, input: &PhotonicState) -> PhotonicState {
        self.preparation.apply(input)
    }

    /// State after each stage, in order.
    pub fn step_through(&self, input: &PhotonicState) -> Result<Vec<(String, PhotonicState)>> {
        let mut out = Vec::with_capacity(self.stages.len());
        let mut state = input.clone();
        for stage in &self.stages {
            for e in &stage.elements {
                state = e.transfer_map()?.apply(&state);
            }
            out.push((stage.name.clone(), state.clone()));
        }
        Ok(out)
    }

    /// Topology dump: stages, elements, and detector wiring.
    pub fn topology_json(&self) -> Value {
        let wiring: Vec<Value> = self
            .wiring
            .iter()
            .map(|((p, pol), d)| json!({"path": p, "polarization": pol, "detector": d.to_string()}))
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "name": self.name(),
            "parties": self.parties(),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "overlap": self.overlap.value(),
            "stages": self.stages,
            "wiring": wiring,
        })
    }
}

fn compile(stages: &[Stage]) -> Result<(TransferMap, TransferMap)> {
    let mut maps = Vec::new();
    let mut prep_len = 0;
    for stage in stages {
        for e in &stage.elements {
            maps.push(e.transfer_map()?);
        }
        if !stage.analyzer {
            prep_len = maps.len();
        }
    }
    let compiled = TransferMap::compose_all(&maps)?;
    let preparation = TransferMap::compose_all(&maps[..prep_len])?;
    Ok((compiled, preparation))
}

fn analyzer_pbs(out: &Path) -> Element {
    Element::Pbs {
        inputs: [out.clone(), out.child("vac")],
        outputs: [out.child("t"), out.child("r")],
    }
}

/// Wiring for a party output analyzed by a PBS: transmitted H to `D(2k+1)`, reflected V to `D(2k+2)`.
fn analyzer_wiring(outputs: &[Path]) -> BTreeMap<(Path, Polarization), DetectorId> {
    let mut wiring = BTreeMap::new();
    for (k, out) in outputs.iter().enumerate() {
        let k = k as u32;
        wiring.insert((out.child("t"), Polarization::H), DetectorId(2 * k + 1));
        wiring.insert((out.child("r"), Polarization::V), DetectorId(2 * k + 2));
    }
    wiring
}

/// Photons meet at a 50:50 BS; each output is split by a PBS.
///
/// Wiring: `u` to D1 (H) and D2 (V), `v` to D3 (H) and D4 (V).
pub fn standard_bsm() -> Result<CircuitSpec> {
    let (a, b, u, v) = (
        Path::new("a"),
        Path::new("b"),
        Path::new("u"),
        Path::new("v"),
    );
    let outputs = vec![u.clone(), v.clone()];
    let stages = vec![
        Stage::new(
            "bs",
            vec![Element::Bs {
                inputs: [a.clone(), b.clone()],
                outputs: [u.clone(), v.clone()],
            }],
            false,
        ),
        Stage::new("pbs", outputs.iter().map(analyzer_pbs).collect(), true),
    ];
    let wiring = analyzer_wiring(&outputs);
    CircuitSpec::build(
        CircuitKind::StandardBsm,
        vec![a, b],
        outputs,
        stages,
        wiring,
    )
}

/// Symmetric scheme: the two photons never share an optical element.
///
/// PBS1 splits each input into an H arm (`c`, `f`) and a V arm (`d`, `e`); the V arms
/// are exchanged between the parties; H1 at 45° flips both arms; PBS2 recombines them
/// into `g` and `h`; H2 at 22.5° and PBS3 analyze. Wiring: `g` to D1 (H) and D2 (V),
/// `h` to D3 (H) and D4 (V).
pub fn symmetric_bsm() -> Result<CircuitSpec> {
    ring(
        CircuitKind::SymmetricBsm,
        vec![
            PartyPaths::new("a", "c", "d", "g"),
            PartyPaths::new("b", "f", "e", "h"),
        ],
    )
}

/// `N` copies of the symmetric interferometer with the V arms exchanged around a ring,
/// party `i` to party `i + 1 mod N`. Paths are `a{k}`, `c{k}`, `d{k}`, `g{k}` for `k = 1..N`.
pub fn ghz_circuit(parties: usize) -> Result<CircuitSpec> {
    if parties < 2 {
        return Err(Error::TooFewParties(parties));
    }
    let paths = (1..=parties)
        .map(|k| {
            PartyPaths::new(
                &format!("a{k}"),
                &format!("c{k}"),
                &format!("d{k}"),
                &format!("g{k}"),
            )
        })
        .collect();
    ring(CircuitKind::Ghz, paths)
}

fn ring(kind: CircuitKind, parties: Vec<PartyPaths>) -> Result<CircuitSpec> {
    let pbs1 = parties
        .iter()
        .map(|p| Element::Pbs {
            inputs: [p.input.clone(), p.input.child("vac")],
            outputs: [p.h_arm.clone(), p.v_arm.clone()],
        })
        .collect();
    let exchange = vec![Element::Exchange {
        paths: parties.iter().map(|p| p.v_arm.clone()).collect(),
    }];
    let h1 = parties
        .iter()
        .flat_map(|p| {
            [&p.h_arm, &p.v_arm].map(|arm| Element::Hwp {
                path: arm.clone(),
                theta_deg: 45.0,
            })
        })
        .collect();
    // after H1 the V arm carries H (transmitted into the output) and the H arm carries V
    // (reflected into the output)
    let pbs2 = parties
        .iter()
        .map(|p| Element::Pbs {
            inputs: [p.v_arm.clone(), p.h_arm.clone()],
            outputs: [p.output.clone(), p.output.child("x")],
        })
        .collect();
    let outputs: Vec<Path> = parties.iter().map(|p| p.output.clone()).collect();
    let h2 = outputs
        .iter()
        .map(|o| Element::Hwp {
            path: o.clone(),
            theta_deg: 22.5,
        })
        .collect();
    let pbs3 = outputs.iter().map(analyzer_pbs).collect();
    let stages = vec![
        Stage::new("pbs1", pbs1, false),
        Stage::new("exchange", exchange, false),
        Stage::new("h1", h1, false),
        Stage::new("pbs2", pbs2, false),
        Stage::new("h2", h2, true),
        Stage::new("pbs3", pbs3, true),
    ];
    let wiring = analyzer_wiring(&outputs);
    let inputs = parties.into_iter().map(|p| p.input).collect();
    CircuitSpec::build(kind, inputs, outputs, stages, wiring)
}
