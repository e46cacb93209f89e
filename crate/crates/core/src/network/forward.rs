use super::paths::{enumerate_paths, Move};
use super::perceptrons::PerceptronSet;
use super::spec::{NetworkSpec, ResidualEdge};
use crate::qmath::{
    pad_conjugate_hermitian, pad_trailing, trace_out_leading, trace_out_trailing, CMatrix, PureState,
    QubitLayout,
};
use crate::{Error, Result};

/// Layout of perceptron `j` (1-based) inside the working register of its
/// layer after `j` output qubits have been appended to the `m_in` inputs.
///
/// Output qubits beyond `j` are still `|0⟩` at that point and are left out
/// of the register.
pub(crate) fn perceptron_layout(m_in: usize, j: usize) -> QubitLayout {
    let n = m_in + j;
    let mut targets: Vec<usize> = (0..m_in).collect();
    targets.push(n - 1);
    QubitLayout::new(n, &targets).expect("targets are in range and distinct")
}

/// Runs one layer, returning the register state after each perceptron
/// (`A_j` for `j = 1..=m_out`, each on `m_in + j` qubits).
pub(crate) fn layer_states(rho_in: &CMatrix, units: &[CMatrix]) -> Vec<CMatrix> {
    let m_in = rho_in.n_qubits().expect("stage states are qubit operators");
    let mut out = Vec::with_capacity(units.len());
    let mut current = rho_in.clone();
    for (idx, u) in units.iter().enumerate() {
        let layout = perceptron_layout(m_in, idx + 1);
        current = pad_conjugate_hermitian(&current, u, &layout);
        out.push(current.clone());
    }
    out
}

/// Output qubits of the last register state of a layer.
pub(crate) fn layer_output(last_state: &CMatrix, m_in: usize) -> CMatrix {
    trace_out_leading(last_state, m_in)
}

/// `tr_{l−1}( U^l (ρ ⊗ |0…0⟩⟨0…0|) U^l† )` with `U^l = U_{m_l}^l ⋯ U_1^l`.
pub fn layer_channel(rho_in: &CMatrix, l: usize, perceptrons: &PerceptronSet) -> Result<CMatrix> {
    if l == 0 || l > perceptrons.layer_count() {
        return Err(Error::InvalidIndex {
            layer: l,
            perceptron: 0,
        });
    }
    let units = perceptrons.layer(l);
    let m_in = rho_in.require_qubits()?;
    let expected = units[0].require_qubits()? - 1;
    if m_in != expected {
        return Err(Error::DimensionMismatch(format!(
            "layer {l} expects {expected} input qubits, got {m_in}"
        )));
    }
    let states = layer_states(rho_in, units);
    Ok(layer_output(states.last().unwrap(), m_in))
}

/// Brings the state that entered `edge.source` to the width of
/// `edge.target`: trailing zero padding for inner stages, trailing partial
/// trace for the output stage.
pub fn bypass_state(spec: &NetworkSpec, edge: ResidualEdge, state: &CMatrix) -> CMatrix {
    let src = spec.stage_width(edge.source);
    let dst = spec.stage_width(edge.target);
    if edge.target == spec.terminal_stage() {
        trace_out_trailing(state, src - dst)
    } else {
        pad_trailing(state, dst - src)
    }
}

/// Forms the state entering `stage` from the output of layer `stage − 1`
/// and, when the stage has a residual edge, the state that entered its
/// source stage.
pub fn residual_combine(
    spec: &NetworkSpec,
    stage: usize,
    layer_output: &CMatrix,
    source_state: Option<&CMatrix>,
) -> Result<CMatrix> {
    let width = spec.stage_width(stage);
    if layer_output.n_qubits() != Some(width) {
        return Err(Error::DimensionMismatch(format!(
            "layer output entering stage {stage} is {}x{}, expected {width} qubits",
            layer_output.rows(),
            layer_output.cols()
        )));
    }
    match (spec.edge_into(stage), source_state) {
        (None, None) => Ok(layer_output.clone()),
        (Some(edge), Some(src)) => {
            if src.n_qubits() != Some(spec.stage_width(edge.source)) {
                return Err(Error::DimensionMismatch(format!(
                    "stage {} state has the wrong width",
                    edge.source
                )));
            }
            let (w_apply, w_bypass) = spec.stage_weights(stage);
            let mut out = layer_output.scale_real(w_apply);
            out.add_scaled(w_bypass.into(), &bypass_state(spec, edge, src));
            Ok(out)
        }
        (Some(_), None) => Err(Error::DimensionMismatch(format!(
            "stage {stage} has a residual edge but no source state was given"
        ))),
        (None, Some(_)) => Err(Error::DimensionMismatch(format!(
            "stage {stage} has no residual edge"
        ))),
    }
}

/// Summed stage inputs `ρ^{t_in}` for `t = 1..=L+1` and the network output.
#[derive(Clone, Debug)]
pub struct StageStates {
    pub stages: Vec<CMatrix>,
    pub output: CMatrix,
}

impl StageStates {
    /// `ρ^{t_in}`, 1-based.
    pub fn stage(&self, t: usize) -> &CMatrix {
        &self.stages[t - 1]
    }
}

/// Propagates an arbitrary operator on the input qubits through the network.
pub fn propagate(rho_in: &CMatrix, spec: &NetworkSpec, perceptrons: &PerceptronSet) -> Result<StageStates> {
    perceptrons.check(spec)?;
    if rho_in.n_qubits() != Some(spec.input_qubits()) {
        return Err(Error::DimensionMismatch(format!(
            "input operator is {}x{}, network takes {} qubits",
            rho_in.rows(),
            rho_in.cols(),
            spec.input_qubits()
        )));
    }
    let terminal = spec.terminal_stage();
    let mut stages: Vec<CMatrix> = vec![rho_in.clone()];
    for l in 1..terminal {
        let current = &stages[l - 1];
        let (m_in, _) = spec.layer_io(l);
        let states = layer_states(current, perceptrons.layer(l));
        let out = layer_output(states.last().unwrap(), m_in);
        let source = spec.edge_into(l + 1).map(|e| &stages[e.source - 1]);
        let next = residual_combine(spec, l + 1, &out, source)?;
        stages.push(next);
    }
    let output = stages.pop().unwrap();
    Ok(StageStates { stages, output })
}

/// One branch's state at one stage.
#[derive(Clone, Debug)]
pub struct BranchState {
    /// Stage index (`L+2` for the network output).
    pub stage: usize,
    /// Unit-trace state of this branch alone.
    pub state: CMatrix,
    /// Layers applied so far along the branch.
    pub layers: Vec<usize>,
    /// Index of the branch in [`enumerate_paths`] order.
    pub path: usize,
}

#[derive(Clone, Debug)]
pub struct Feedforward {
    /// `ρ^{t_in}` for `t = 1..=L+1`.
    pub stages: Vec<CMatrix>,
    pub output: CMatrix,
    /// Every branch state visited, path by path.
    pub branches: Vec<BranchState>,
}

/// Feeds `|φ_in⟩⟨φ_in|` through the network, keeping both the summed stage
/// inputs and every individual branch.
pub fn feedforward(phi_in: &PureState, spec: &NetworkSpec, perceptrons: &PerceptronSet) -> Result<Feedforward> {
    let rho = phi_in.projector();
    let StageStates { stages, output } = propagate(&rho, spec, perceptrons)?;
    let mut branches = Vec::new();
    for (index, path) in enumerate_paths(spec).paths().iter().enumerate() {
        let mut state = rho.clone();
        let mut layers = Vec::new();
        branches.push(BranchState {
            stage: 1,
            state: state.clone(),
            layers: layers.clone(),
            path: index,
        });
        for mv in path.moves() {
            state = match *mv {
                Move::Apply(l) => {
                    layers.push(l);
                    layer_channel(&state, l, perceptrons)?
                }
                Move::Bypass { edge, .. } => bypass_state(spec, edge, &state),
            };
            branches.push(BranchState {
                stage: mv.destination(),
                state: state.clone(),
                layers: layers.clone(),
                path: index,
            });
        }
    }
    Ok(Feedforward {
        stages,
        output,
        branches,
    })
}
