use reshqcnn::datagen::DataSetDescriptor;
use reshqcnn::network::{enumerate_paths, NetworkSpec, Path, PerceptronSet};
use reshqcnn::qmath::{QRng, Stream};
use reshqcnn::training::{
    cost, dcost_ds_analytic, k_matrices, k_matrix_fd_oracle, k_matrix_path_sum,
    k_matrix_unrolled_oracle, hand_terms_complete, TrainingPair,
};

const ETA: f64 = 1.0 / 1.8;

fn setup(spec: &str, n_pairs: usize, seed: u64) -> (NetworkSpec, PerceptronSet, Vec<TrainingPair>) {
    let spec = NetworkSpec::parse(spec).unwrap();
    let data = DataSetDescriptor::new(spec.input_qubits(), spec.output_qubits(), n_pairs, 0, seed)
        .unwrap()
        .generate()
        .unwrap();
    let mut rng = QRng::for_stream(seed, Stream::Perceptrons);
    let perc = PerceptronSet::random(&spec, &mut rng);
    (spec, perc, data.training)
}

#[test]
fn layerwise_generators_match_finite_differences() {
    for (text, seed) in [("2,3,2", 1), ("1,2~,1", 2), ("2,3~,2", 3), ("1,2~,1;p=0.3", 4)] {
        let (spec, perc, set) = setup(text, 3, seed);
        let ks = k_matrices(&spec, &perc, &set, ETA).unwrap();
        for l in 1..=spec.layer_count() {
            for j in 1..=spec.layer_io(l).1 {
                let fd = k_matrix_fd_oracle(&spec, &perc, &set, ETA, l, j, 1e-4).unwrap();
                let err = ks[l - 1][j - 1].max_abs_diff(&fd);
                assert!(err <= 1e-6, "{text} l={l} j={j}: {err:e}");
                assert!(ks[l - 1][j - 1].hermiticity_defect() <= 1e-10);
            }
        }
    }
}

#[test]
fn layerwise_generators_match_unrolled_branch_sum() {
    for (text, seed) in [("2,3,2", 5), ("1,2~,1", 6), ("2,3~,3~,2", 7), ("1,2~,1~", 8), ("1,2,2^,1~;p=0.4", 9)] {
        let (spec, perc, set) = setup(text, 2, seed);
        let ks = k_matrices(&spec, &perc, &set, ETA).unwrap();
        let paths: Vec<Path> = enumerate_paths(&spec).paths().to_vec();
        for l in 1..=spec.layer_count() {
            for j in 1..=spec.layer_io(l).1 {
                let oracle = k_matrix_path_sum(&spec, &perc, &set, ETA, l, j, &paths).unwrap();
                let err = ks[l - 1][j - 1].max_abs_diff(&oracle);
                assert!(err <= 1e-10, "{text} l={l} j={j}: {err:e}");
            }
        }
    }
}

#[test]
fn hand_derived_terms_agree_where_complete() {
    let (spec, perc, set) = setup("2,3~,3~,2", 2, 10);
    let ks = k_matrices(&spec, &perc, &set, ETA).unwrap();
    for l in 1..=3 {
        let complete = hand_terms_complete(&spec, l).unwrap();
        assert_eq!(complete, l != 3);
        let oracle = k_matrix_unrolled_oracle(&spec, &perc, &set, ETA, l, 1).unwrap();
        let err = ks[l - 1][0].max_abs_diff(&oracle);
        if complete {
            assert!(err <= 1e-10, "l={l}: {err:e}");
        } else {
            assert!(err > 1e-6, "missing branch should change the generator");
        }
    }
}

#[test]
fn analytic_slope_is_nonnegative_and_matches_secant() {
    let (spec, perc, set) = setup("2,3~,2", 4, 11);
    let ks = k_matrices(&spec, &perc, &set, ETA).unwrap();
    let slope = dcost_ds_analytic(&spec, &perc, &set, &ks).unwrap();
    assert!(slope >= 0.0);
    let eps = 1e-3;
    let moved = reshqcnn::training::apply_update(&perc, &ks, eps).unwrap();
    let secant = (cost(&set, &spec, &moved).unwrap() - cost(&set, &spec, &perc).unwrap()) / eps;
    assert!((secant - slope).abs() <= 0.1 * slope, "{secant} vs {slope}");
}
