use super::spec::NetworkSpec;
use crate::qmath::{random_unitary, CMatrix, QRng};
use crate::{Error, Result};

/// Unitarity tolerance enforced on perceptrons handed to the network.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Perceptron unitaries `U_j^l`, one list per layer `l = 1..=L+1`.
///
/// `U_j^l` acts on the `m_{l-1}` qubits of the previous layer followed by
/// output qubit `j`; within a layer they are applied for `j = 1` first.
#[derive(Clone, Debug, PartialEq)]
pub struct PerceptronSet {
    layers: Vec<Vec<CMatrix>>,
}

impl PerceptronSet {
    /// Independent Haar-random perceptrons, drawn layer by layer.
    pub fn random(spec: &NetworkSpec, rng: &mut QRng) -> Self {
        let layers = (1..=spec.layer_count())
            .map(|l| {
                let (m_in, m_out) = spec.layer_io(l);
                (0..m_out)
                    .map(|_| random_unitary(1 << (m_in + 1), rng).expect("power-of-two dimension"))
                    .collect()
            })
            .collect();
        Self { layers }
    }

    pub fn identity(spec: &NetworkSpec) -> Self {
        let layers = (1..=spec.layer_count())
            .map(|l| {
                let (m_in, m_out) = spec.layer_io(l);
                vec![CMatrix::identity(1 << (m_in + 1)); m_out]
            })
            .collect();
        Self { layers }
    }

    pub fn from_layers(spec: &NetworkSpec, layers: Vec<Vec<CMatrix>>) -> Result<Self> {
        let set = Self { layers };
        set.check(spec)?;
        for layer in &set.layers {
            for u in layer {
                let defect = u.unitarity_defect();
                if defect > UNITARY_TOLERANCE {
                    return Err(Error::NotUnitary(defect));
                }
            }
        }
        Ok(set)
    }

    /// Checks the layer structure against `spec` (dimensions only).
    pub fn check(&self, spec: &NetworkSpec) -> Result<()> {
        if self.layers.len() != spec.layer_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} perceptron layers for a network with {}",
                self.layers.len(),
                spec.layer_count()
            )));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            let (m_in, m_out) = spec.layer_io(i + 1);
            if layer.len() != m_out {
                return Err(Error::DimensionMismatch(format!(
                    "layer {} has {} perceptrons, expected {m_out}",
                    i + 1,
                    layer.len()
                )));
            }
            let dim = 1 << (m_in + 1);
            if let Some(u) = layer.iter().find(|u| u.rows() != dim || u.cols() != dim) {
                return Err(Error::DimensionMismatch(format!(
                    "layer {} perceptron is {}x{}, expected {dim}x{dim}",
                    i + 1,
                    u.rows(),
                    u.cols()
                )));
            }
        }
        Ok(())
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Perceptrons of layer `l` (1-based), in application order.
    pub fn layer(&self, l: usize) -> &[CMatrix] {
        &self.layers[l - 1]
    }

    pub fn layers(&self) -> &[Vec<CMatrix>] {
        &self.layers
    }

    /// `U_j^l` with 1-based indices.
    pub fn get(&self, l: usize, j: usize) -> Result<&CMatrix> {
        self.layers
            .get(l.wrapping_sub(1))
            .and_then(|layer| layer.get(j.wrapping_sub(1)))
            .ok_or(Error::InvalidIndex {
                layer: l,
                perceptron: j,
            })
    }

    /// Copy with `U_j^l` replaced.
    pub fn with_replaced(&self, l: usize, j: usize, u: CMatrix) -> Result<Self> {
        let current = self.get(l, j)?;
        if current.rows() != u.rows() || current.cols() != u.cols() {
            return Err(Error::DimensionMismatch(format!(
                "replacement is {}x{}, perceptron is {}x{}",
                u.rows(),
                u.cols(),
                current.rows(),
                current.cols()
            )));
        }
        let mut out = self.clone();
        out.layers[l - 1][j - 1] = u;
        Ok(out)
    }

    /// Applies `f` to every perceptron, with its (1-based) layer and index.
    pub fn map(&self, mut f: impl FnMut(usize, usize, &CMatrix) -> Result<CMatrix>) -> Result<Self> {
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(li, layer)| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(ji, u)| f(li + 1, ji + 1, u))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { layers })
    }

    /// Worst `max |U†U − I|` over all perceptrons.
    pub fn max_unitarity_defect(&self) -> f64 {
        self.layers
            .iter()
            .flatten()
            .map(CMatrix::unitarity_defect)
            .fold(0.0, f64::max)
    }
}
