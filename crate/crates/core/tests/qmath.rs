use proptest::prelude::*;
use reshqcnn::qmath::{
    embed, expm_i_herm, fidelity_pure, kron, partial_trace, pauli_products, random_density_matrix,
    random_hermitian, random_pure_state, random_unitary, single_qubit_paulis, CMatrix, PureState,
    QRng, Stream, C64,
};

#[test]
fn random_states_are_normalized_and_reproducible() {
    let a = random_pure_state(1, &mut QRng::new(42)).unwrap();
    let b = random_pure_state(1, &mut QRng::new(42)).unwrap();
    assert_eq!(a, b);
    assert!((a.norm() - 1.0).abs() <= 1e-12);
    assert_ne!(a, random_pure_state(1, &mut QRng::new(43)).unwrap());
}

#[test]
fn streams_are_independent() {
    let mut a = QRng::for_stream(7, Stream::TargetUnitary);
    let mut b = QRng::for_stream(7, Stream::CleanPairs);
    assert_ne!(a.normal(), b.normal());
}

#[test]
fn bloch_vectors_are_isotropic() {
    let mut rng = QRng::new(1);
    let paulis = single_qubit_paulis();
    let mut mean = [0.0; 3];
    let n = 10_000;
    for _ in 0..n {
        let rho = random_pure_state(1, &mut rng).unwrap().projector();
        for (m, p) in mean.iter_mut().zip(&paulis[1..]) {
            *m += rho.matmul(p).trace().re / n as f64;
        }
    }
    for m in mean {
        assert!(m.abs() < 0.05, "{mean:?}");
    }
}

#[test]
fn haar_first_moment() {
    let mut rng = QRng::new(2);
    let n = 10_000;
    let mean: f64 = (0..n)
        .map(|_| random_unitary(2, &mut rng).unwrap()[(0, 0)].norm_sqr())
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.5).abs() < 0.02, "{mean}");
}

#[test]
fn haar_phase_of_diagonal_is_uniform() {
    // Without the phase correction the diagonal of Q is biased towards the
    // positive real axis.
    let mut rng = QRng::new(3);
    let n = 10_000;
    let mean_re: f64 = (0..n)
        .map(|_| random_unitary(2, &mut rng).unwrap()[(0, 0)].re)
        .sum::<f64>()
        / n as f64;
    assert!(mean_re.abs() < 0.02, "{mean_re}");
}

#[test]
fn random_unitaries_are_unitary_and_reproducible() {
    for dim in [2, 4, 8, 32] {
        let u = random_unitary(dim, &mut QRng::new(5)).unwrap();
        assert!(u.unitarity_defect() <= 1e-12);
        assert_eq!(u, random_unitary(dim, &mut QRng::new(5)).unwrap());
    }
    assert!(random_unitary(3, &mut QRng::new(5)).is_err());
}

#[test]
fn fidelity_examples() {
    let zero = PureState::basis(1, 0);
    let one = PureState::basis(1, 1);
    assert_eq!(fidelity_pure(&zero, &zero.projector()).unwrap(), 1.0);
    assert_eq!(fidelity_pure(&zero, &one.projector()).unwrap(), 0.0);
    let mixed = CMatrix::identity(2).scale_real(0.5);
    assert_eq!(fidelity_pure(&zero, &mixed).unwrap(), 0.5);
    assert!(fidelity_pure(&zero, &CMatrix::identity(4)).is_err());
    let mut skew = CMatrix::zeros(2, 2);
    skew[(0, 0)] = C64::new(0.0, 1.0);
    assert!(fidelity_pure(&zero, &skew).is_err());
}

#[test]
fn single_qubit_pauli_list() {
    let p = pauli_products(1);
    assert_eq!(p.len(), 4);
    for (a, b) in p.iter().zip(single_qubit_paulis().iter()) {
        assert_eq!(a, b);
    }
}

#[test]
fn pauli_products_are_orthogonal() {
    let p = pauli_products(2);
    assert_eq!(p.len(), 16);
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate() {
            let t = a.matmul(b).trace();
            let want = if i == j { 4.0 } else { 0.0 };
            assert!((t - C64::new(want, 0.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn pauli_products_are_complete() {
    let mut rng = QRng::new(8);
    for k in 1..=3 {
        let x = random_hermitian(1 << k, &mut rng);
        let mut sum = CMatrix::zeros(1 << k, 1 << k);
        for g in pauli_products(k) {
            sum.add_scaled(x.matmul(&g).trace(), &g);
        }
        assert!(sum.max_abs_diff(&x.scale_real((1 << k) as f64)) < 1e-10);
    }
}

#[test]
fn pauli_index_order() {
    let p = pauli_products(2);
    let s = single_qubit_paulis();
    // index 1·4 + 3 is σx on qubit 0, σz on qubit 1
    assert_eq!(p[7], kron(&s[1], &s[3]));
}

fn hermitian_psd(seed: u64, dim: usize) -> CMatrix {
    random_density_matrix(dim, &mut QRng::new(seed)).scale_real(1.7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_preserves_trace_hermiticity_and_positivity(seed in any::<u64>(), mask in 1u8..8) {
        let m = hermitian_psd(seed, 8);
        let keep: Vec<usize> = (0..3).filter(|q| mask >> q & 1 == 1).collect();
        let r = partial_trace(&m, &keep).unwrap();
        prop_assert!((r.trace() - m.trace()).norm() <= 1e-12);
        prop_assert!(r.hermiticity_defect() <= 1e-12);
        prop_assert!(r.min_eigenvalue_hermitian() >= -1e-12);
    }

    #[test]
    fn kron_trace_and_associativity(seed in any::<u64>()) {
        let mut rng = QRng::new(seed);
        let a = CMatrix::from_fn(2, 2, |_, _| rng.complex_normal());
        let b = CMatrix::from_fn(4, 4, |_, _| rng.complex_normal());
        let c = CMatrix::from_fn(2, 2, |_, _| rng.complex_normal());
        prop_assert!((kron(&a, &b).trace() - a.trace() * b.trace()).norm() <= 1e-12);
        prop_assert!(kron(&kron(&a, &b), &c).max_abs_diff(&kron(&a, &kron(&b, &c))) <= 1e-14);
    }

    #[test]
    fn embedded_unitaries_act_locally(seed in any::<u64>(), order in 0usize..6) {
        let targets = [[0, 1], [1, 0], [0, 2], [2, 0], [1, 2], [2, 1]][order];
        let rest = 3 - targets[0] - targets[1];
        let mut rng = QRng::new(seed);
        let u = random_unitary(4, &mut rng).unwrap();
        let rho = random_density_matrix(4, &mut rng);
        let sigma = random_hermitian(2, &mut rng);
        // ρ on the targets (in order) and σ on the remaining qubit
        let joint_in_factor_order = kron(&rho, &sigma);
        let mut positions = targets.to_vec();
        positions.push(rest);
        let placed = embed(&joint_in_factor_order, 3, &positions).unwrap();
        let big = embed(&u, 3, &targets).unwrap();
        let out = big.matmul(&placed).matmul(&big.adjoint());
        let reduced = partial_trace(&out, &targets).unwrap();
        let want = u.matmul(&rho).matmul(&u.adjoint()).scale(sigma.trace());
        prop_assert!(reduced.max_abs_diff(&want) <= 1e-12);
    }

    #[test]
    fn exponentials_are_unitary(seed in any::<u64>(), eps in -1e3f64..1e3) {
        let k = random_hermitian(8, &mut QRng::new(seed));
        prop_assert!(expm_i_herm(&k, eps).unwrap().unitarity_defect() <= 1e-12);
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>()) {
        let a = random_unitary(4, &mut QRng::new(seed)).unwrap();
        let b = random_unitary(4, &mut QRng::new(seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
