use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::circuits::{CircuitSpec, SCHEMA_VERSION};
use crate::detection::{measure, DetectionPattern};
use crate::error::{Error, Result};
use crate::optics::DelayModel;
use crate::state::PhotonicState;

/// A named set of detection patterns whose probabilities are summed, e.g. `D13+D24`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceClass {
    pub name: String,
    pub patterns: Vec<DetectionPattern>,
}

impl CoincidenceClass {
    pub fn new(name: impl Into<String>, patterns: Vec<DetectionPattern>) -> Self {
        CoincidenceClass {
            name: name.into(),
            patterns,
        }
    }

    /// Parses `D13+D24` into the patterns `{D1,D3}` and `{D2,D4}`; the name is kept verbatim.
    pub fn parse(s: &str) -> Result<Self> {
        let patterns = s
            .split('+')
            .map(|tok| tok.trim().parse::<DetectionPattern>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CoincidenceClass::new(s.trim(), patterns))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VisibilityKind {
    Dip,
    Peak,
    /// No interference: equal at zero delay and far away.
    Flat,
    /// Identically zero.
    Null,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Visibility {
    pub class: String,
    pub kind: VisibilityKind,
    /// `|C_far - C_0| / C_far`
    pub value: f64,
    pub at_zero_delay: f64,
    pub far: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSeries {
    pub class: String,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomScan {
    pub delays: Vec<f64>,
    pub series: Vec<ClassSeries>,
    pub visibilities: Vec<Visibility>,
}

impl HomScan {
    pub fn series(&self, class: &str) -> Option<&ClassSeries> {
        self.series.iter().find(|s| s.class == class)
    }

    pub fn visibility(&self, class: &str) -> Option<&Visibility> {
        self.visibilities.iter().find(|v| v.class == class)
    }

    /// `delay,class,probability` rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema_version: {SCHEMA_VERSION}\ndelay,class,probability\n");
        for (i, l) in self.delays.iter().enumerate() {
            for s in &self.series {
                out.push_str(&format!("{l:.6},{},{:.12}\n", s.class, s.probabilities[i]));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "delays": self.delays,
            "series": self.series,
            "visibilities": self.visibilities,
        })
    }
}

/// Probability of `class` at overlap `gamma`.
pub fn class_probability(
    circuit: &CircuitSpec,
    input: &PhotonicState,
    class: &CoincidenceClass,
    gamma: f64,
) -> Result<f64> {
    let spec = circuit.with_overlap(gamma)?;
    let dist = measure(&spec.run(input), &spec)?;
    Ok(dist.probability_of_any(&class.patterns))
}

/// Visibility of `class` when the overlap at zero delay is `gamma`, relative to the
/// fully distinguishable (`gamma = 0`) level.
pub fn visibility_at(
    circuit: &CircuitSpec,
    input: &PhotonicState,
    class: &CoincidenceClass,
    gamma: f64,
) -> Result<Visibility> {
    let at_zero = class_probability(circuit, input, class, gamma)?;
    let far = class_probability(circuit, input, class, 0.0)?;
    let (kind, value) = if far.abs() < 1e-14 && at_zero.abs() < 1e-14 {
        (VisibilityKind::Null, 0.0)
    } else if far.abs() < 1e-14 {
        (VisibilityKind::Peak, f64::INFINITY)
    } else if (at_zero - far).abs() < 1e-12 {
        (VisibilityKind::Flat, 0.0)
    } else if at_zero < far {
        (VisibilityKind::Dip, (far - at_zero) / far)
    } else {
        (VisibilityKind::Peak, (at_zero - far) / far)
    };
    Ok(Visibility {
        class: class.name.clone(),
        kind,
        value,
        at_zero_delay: at_zero,
        far,
    })
}

/// Class probabilities over a delay scan on the circuit's delayed input.
///
/// Visibilities compare zero delay with the `γ = 0` asymptote.
pub fn hom_scan(
    circuit: &CircuitSpec,
    input: &PhotonicState,
    model: &DelayModel,
    delays: &[f64],
    classes: &[CoincidenceClass],
) -> Result<HomScan> {
    if delays.is_empty() {
        return Err(Error::InvalidParameter("delay list is empty".into()));
    }
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if let Some(p) = a.patterns.iter().find(|p| b.patterns.contains(p)) {
                return Err(Error::OverlappingClasses(p.to_string()));
            }
        }
    }
    let rows: Vec<Vec<f64>> = delays
        .par_iter()
        .map(|&l| {
            let spec = circuit.with_delay(model, l)?;
            let dist = measure(&spec.run(input), &spec)?;
            Ok(classes
                .iter()
                .map(|c| dist.probability_of_any(&c.patterns))
                .collect())
        })
        .collect::<Result<_>>()?;
    let series = classes
        .iter()
        .enumerate()
        .map(|(k, c)| ClassSeries {
            class: c.name.clone(),
            probabilities: rows.iter().map(|r| r[k]).collect(),
        })
        .collect();
    let visibilities = classes
        .iter()
        .map(|c| visibility_at(circuit, input, c, model.overlap(0.0)))
        .collect::<Result<_>>()?;
    Ok(HomScan {
        delays: delays.to_vec(),
        series,
        visibilities,
    })
}
