//! Reference constructions for the update generators. Slow; used by tests
//! and the gradient check command.

use super::cost::mean_fidelity;
use super::types::{check_set, TrainingPair};
use crate::network::{bypass_move, enumerate_paths, Move, NetworkSpec, Path, PerceptronSet, ResidualEdge};
use crate::qmath::{apply_to_vector, pauli_products, CMatrix, QubitLayout, C64, ZERO};
use crate::{Error, Result};

/// A named branch term of the hand-derived generator formulas.
#[derive(Clone, Debug, PartialEq)]
pub struct HandTerm {
    pub name: char,
    pub path: Path,
}

fn edge(target: usize, source: usize) -> ResidualEdge {
    ResidualEdge { target, source }
}

/// The term list written out for layer `l` in the hand derivations. Only
/// plain networks and per-layer residual networks with one or two hidden
/// layers are covered.
pub fn hand_terms(spec: &NetworkSpec, l: usize) -> Result<Vec<HandTerm>> {
    let layers = spec.layer_count();
    if l == 0 || l > layers {
        return Err(Error::InvalidIndex {
            layer: l,
            perceptron: 0,
        });
    }
    let full = Path::new((1..=layers).map(Move::Apply).collect());
    let term = |name, moves: Vec<Move>| HandTerm {
        name,
        path: Path::new(moves),
    };
    let m = HandTerm { name: 'M', path: full };
    let edges = spec.edges();
    if edges.is_empty() {
        return Ok(vec![m]);
    }
    if layers == 2 && edges == [edge(2, 1)] {
        let by = bypass_move(spec, edge(2, 1));
        return Ok(match l {
            1 => vec![m],
            _ => vec![m, term('N', vec![by, Move::Apply(2)])],
        });
    }
    if layers == 3 && edges == [edge(2, 1), edge(3, 2)] {
        let by1 = bypass_move(spec, edge(2, 1));
        let by2 = bypass_move(spec, edge(3, 2));
        return Ok(match l {
            1 => vec![m, term('P', vec![Move::Apply(1), by2, Move::Apply(3)])],
            2 => vec![m, term('Q', vec![by1, Move::Apply(2), Move::Apply(3)])],
            _ => vec![
                m,
                term('S', vec![by1, by2, Move::Apply(3)]),
                term('T', vec![Move::Apply(1), by2, Move::Apply(3)]),
            ],
        });
    }
    Err(Error::UnsupportedShape(format!(
        "no hand-derived term list for {}",
        spec.notation().unwrap_or_else(|| format!("{:?}", spec.widths()))
    )))
}

/// Whether the hand-derived term list for layer `l` covers exactly the
/// branches through that layer.
pub fn hand_terms_complete(spec: &NetworkSpec, l: usize) -> Result<bool> {
    let mut listed: Vec<Vec<usize>> = hand_terms(spec, l)?
        .iter()
        .map(|t| t.path.applied_layers())
        .collect();
    let mut actual: Vec<Vec<usize>> = enumerate_paths(spec)
        .through_layer(l)
        .map(Path::applied_layers)
        .collect();
    listed.sort();
    actual.sort();
    Ok(listed == actual)
}

/// The hand-derived terms evaluated literally in the unrolled register.
pub fn k_matrix_unrolled_oracle(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    eta: f64,
    l: usize,
    j: usize,
) -> Result<CMatrix> {
    let paths: Vec<Path> = hand_terms(spec, l)?.into_iter().map(|t| t.path).collect();
    k_matrix_path_sum(spec, perceptrons, set, eta, l, j, &paths)
}

struct Gate {
    layer: usize,
    index: usize,
    layout: QubitLayout,
}

struct Unrolled {
    n_qubits: usize,
    gates: Vec<Gate>,
    output: QubitLayout,
}

fn unroll(spec: &NetworkSpec, path: &Path) -> Result<Unrolled> {
    let mut next = spec.input_qubits();
    let mut cur: Vec<usize> = (0..next).collect();
    let mut plan: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for mv in path.moves() {
        match *mv {
            Move::Apply(l) => {
                let (_, m_out) = spec.layer_io(l);
                let fresh: Vec<usize> = (next..next + m_out).collect();
                next += m_out;
                for (idx, &q) in fresh.iter().enumerate() {
                    let mut targets = cur.clone();
                    targets.push(q);
                    plan.push((l, idx + 1, targets));
                }
                cur = fresh;
            }
            Move::Bypass { pad, trim, .. } => {
                cur.extend(next..next + pad);
                next += pad;
                cur.truncate(cur.len() - trim);
            }
        }
    }
    let gates = plan
        .into_iter()
        .map(|(layer, index, targets)| {
            Ok(Gate {
                layer,
                index,
                layout: QubitLayout::new(next, &targets)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Unrolled {
        n_qubits: next,
        gates,
        output: QubitLayout::new(next, &cur)?,
    })
}

/// `i η 2^{m_{l-1}}/N Σ_x Σ_P w_P tr_rest[A_P, B_P]` over the given paths,
/// built from pure states in each path's unrolled register.
pub fn k_matrix_path_sum(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    eta: f64,
    l: usize,
    j: usize,
    paths: &[Path],
) -> Result<CMatrix> {
    check_set(set, spec)?;
    perceptrons.check(spec)?;
    let k_dim = perceptrons.get(l, j)?.rows();
    let mut acc = CMatrix::zeros(k_dim, k_dim);
    for path in paths {
        if !path.contains_layer(l) {
            continue;
        }
        let weight = path.weight(spec);
        let unrolled = unroll(spec, path)?;
        let pos = unrolled
            .gates
            .iter()
            .position(|g| g.layer == l && g.index == j)
            .expect("path applies layer l");
        for pair in set {
            let x = path_commutator(&unrolled, pos, perceptrons, spec, pair)?;
            acc.add_scaled(weight.into(), &x);
        }
    }
    let (m_in, _) = spec.layer_io(l);
    let prefactor = C64::new(0.0, eta * (1u64 << m_in) as f64 / set.len() as f64);
    Ok(acc.scale(prefactor))
}

fn path_commutator(
    unrolled: &Unrolled,
    pos: usize,
    perceptrons: &PerceptronSet,
    spec: &NetworkSpec,
    pair: &TrainingPair,
) -> Result<CMatrix> {
    let n = unrolled.n_qubits;
    let shift = n - spec.input_qubits();
    let mut a = vec![ZERO; 1 << n];
    for (i, &amp) in pair.input.amplitudes().iter().enumerate() {
        a[i << shift] = amp;
    }
    for g in &unrolled.gates[..=pos] {
        a = apply_to_vector(&a, perceptrons.get(g.layer, g.index)?, &g.layout);
    }
    let mut b = a.clone();
    for g in &unrolled.gates[pos + 1..] {
        b = apply_to_vector(&b, perceptrons.get(g.layer, g.index)?, &g.layout);
    }
    // (I ⊗ |ψ⟩⟨ψ|) on the output qubits.
    let psi = pair.target.amplitudes();
    let oo = unrolled.output.target_offsets();
    for &r in unrolled.output.rest_offsets() {
        let s: C64 = oo.iter().zip(psi).map(|(&o, p)| p.conj() * b[o + r]).sum();
        for (&o, p) in oo.iter().zip(psi) {
            b[o + r] = p * s;
        }
    }
    for g in unrolled.gates[pos + 1..].iter().rev() {
        let u_dag = perceptrons.get(g.layer, g.index)?.adjoint();
        b = apply_to_vector(&b, &u_dag, &g.layout);
    }
    let layout = &unrolled.gates[pos].layout;
    let to = layout.target_offsets();
    let ro = layout.rest_offsets();
    let k = to.len();
    Ok(CMatrix::from_fn(k, k, |x, y| {
        ro.iter()
            .map(|&r| {
                a[to[x] + r] * b[to[y] + r].conj() - b[to[x] + r] * a[to[y] + r].conj()
            })
            .sum()
    }))
}

/// `(η/2) Σ_G g_G G` over Pauli products `G`, where `g_G` is the central
/// difference of the mean fidelity under `U_j^l → e^{iθG} U_j^l`.
pub fn k_matrix_fd_oracle(
    spec: &NetworkSpec,
    perceptrons: &PerceptronSet,
    set: &[TrainingPair],
    eta: f64,
    l: usize,
    j: usize,
    delta: f64,
) -> Result<CMatrix> {
    if !(delta > 0.0 && delta <= 1e-2) {
        return Err(Error::InvalidHyperParams(format!(
            "finite-difference step must lie in (0, 1e-2], got {delta}"
        )));
    }
    let u = perceptrons.get(l, j)?.clone();
    let k = u.require_qubits()?;
    let dim = u.rows();
    let mut acc = CMatrix::zeros(dim, dim);
    let fidelity_at = |g: &CMatrix, theta: f64| -> Result<f64> {
        let mut rot = CMatrix::identity(dim).scale_real(theta.cos());
        rot.add_scaled(C64::new(0.0, theta.sin()), g);
        let moved = perceptrons.with_replaced(l, j, rot.matmul(&u))?;
        mean_fidelity(set, spec, &moved)
    };
    for g in pauli_products(k) {
        let slope = (fidelity_at(&g, delta)? - fidelity_at(&g, -delta)?) / (2.0 * delta);
        acc.add_scaled(slope.into(), &g);
    }
    Ok(acc.scale_real(eta / 2.0))
}
