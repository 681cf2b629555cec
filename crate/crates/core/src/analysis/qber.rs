use crate::circuits::CircuitSpec;
use crate::detection::{classify, measure, BsmVerdict, Scheme};
use crate::error::{Error, Result};
use crate::inputs::{ghz_state, BellState};
use crate::state::PhotonicState;

/// The verdict an ideal measurement of `input` should give, if `input` is one of the
/// states the circuit's scheme resolves (up to global phase).
pub fn expected_verdict(circuit: &CircuitSpec, input: &PhotonicState) -> Result<BsmVerdict> {
    let ins = circuit.inputs();
    let candidates: Vec<(BsmVerdict, PhotonicState)> = match Scheme::of(circuit) {
        Scheme::Standard => [BellState::PsiPlus, BellState::PsiMinus]
            .into_iter()
            .map(|b| (BsmVerdict::from_bell(b), b.state(&ins[0], &ins[1])))
            .collect(),
        Scheme::Symmetric => [BellState::PhiPlus, BellState::PhiMinus]
            .into_iter()
            .map(|b| (BsmVerdict::from_bell(b), b.state(&ins[0], &ins[1])))
            .collect(),
        Scheme::Ghz(_) => vec![
            (BsmVerdict::PhiPlus, ghz_state(ins, false)),
            (BsmVerdict::PhiMinus, ghz_state(ins, true)),
        ],
    };
    let norm = input.norm_sqr();
    candidates
        .into_iter()
        .find(|(_, s)| (s.inner_product(input).norm_sqr() / norm - 1.0).abs() < 1e-9)
        .map(|(v, _)| v)
        .ok_or(Error::NotResolvableBellState)
}

/// Wrong-verdict probability over all conclusive verdicts at overlap `gamma`.
pub fn qber(circuit: &CircuitSpec, input: &PhotonicState, gamma: f64) -> Result<f64> {
    let expected = expected_verdict(circuit, input)?;
    let spec = circuit.with_overlap(gamma)?;
    let dist = measure(&spec.run(input), &spec)?;
    let scheme = Scheme::of(circuit);
    let (mut right, mut wrong) = (0.0, 0.0);
    for (p, prob) in dist.iter() {
        match classify(p, scheme) {
            BsmVerdict::Inconclusive => {}
            v if v == expected => right += prob,
            _ => wrong += prob,
        }
    }
    let conclusive = right + wrong;
    if conclusive < 1e-14 {
        return Err(Error::NoConclusiveEvents);
    }
    Ok(wrong / conclusive)
}
