use super::spec::{Mode, NetworkSpec, ResidualEdge};

/// One step of a branch through the residual graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// Layer `l` applied, moving from stage `l` to stage `l+1`.
    Apply(usize),
    /// Residual edge taken. `pad` zero qubits are appended (inner targets);
    /// `trim` trailing qubits are traced out (output target).
    Bypass {
        edge: ResidualEdge,
        pad: usize,
        trim: usize,
    },
}

impl Move {
    /// Stage entered by this move.
    pub fn destination(&self) -> usize {
        match *self {
            Move::Apply(l) => l + 1,
            Move::Bypass { edge, .. } => edge.target,
        }
    }
}

/// A route from stage 1 to the network output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    moves: Vec<Move>,
}

impl Path {
    pub fn new(moves: Vec<Move>) -> Self {
        Self { moves }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn applied_layers(&self) -> Vec<usize> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                Move::Apply(l) => Some(*l),
                Move::Bypass { .. } => None,
            })
            .collect()
    }

    pub fn contains_layer(&self, l: usize) -> bool {
        self.moves.contains(&Move::Apply(l))
    }

    /// Weight of this branch in the output: 1 in standard mode; in p-mix
    /// mode the product over residual-equipped stages entered of `p`
    /// (bypass) or `1−p` (layer output).
    pub fn weight(&self, spec: &NetworkSpec) -> f64 {
        if let Mode::Standard = spec.mode() {
            return 1.0;
        }
        self.moves
            .iter()
            .map(|m| {
                let (w_apply, w_bypass) = spec.stage_weights(m.destination());
                match m {
                    Move::Apply(_) => w_apply,
                    Move::Bypass { .. } => w_bypass,
                }
            })
            .product()
    }
}

/// Every branch of a network, ordered lexicographically by applied layers.
#[derive(Clone, Debug)]
pub struct PathDag {
    paths: Vec<Path>,
}

impl PathDag {
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn through_layer(&self, l: usize) -> impl Iterator<Item = &Path> {
        self.paths.iter().filter(move |p| p.contains_layer(l))
    }
}

/// Builds the residual-edge move leaving stage `edge.source`.
pub fn bypass_move(spec: &NetworkSpec, edge: ResidualEdge) -> Move {
    let src = spec.stage_width(edge.source);
    let dst = spec.stage_width(edge.target);
    if edge.target == spec.terminal_stage() {
        Move::Bypass {
            edge,
            pad: 0,
            trim: src - dst,
        }
    } else {
        Move::Bypass {
            edge,
            pad: dst - src,
            trim: 0,
        }
    }
}

pub fn enumerate_paths(spec: &NetworkSpec) -> PathDag {
    let mut paths = Vec::new();
    let mut prefix = Vec::new();
    walk(spec, 1, &mut prefix, &mut paths);
    paths.sort_by(|a: &Path, b: &Path| a.applied_layers().cmp(&b.applied_layers()));
    PathDag { paths }
}

fn walk(spec: &NetworkSpec, stage: usize, prefix: &mut Vec<Move>, out: &mut Vec<Path>) {
    if stage == spec.terminal_stage() {
        out.push(Path::new(prefix.clone()));
        return;
    }
    prefix.push(Move::Apply(stage));
    walk(spec, stage + 1, prefix, out);
    prefix.pop();
    let edges: Vec<ResidualEdge> = spec.edges_from(stage).collect();
    for edge in edges {
        prefix.push(bypass_move(spec, edge));
        walk(spec, edge.target, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layers(spec: &str) -> Vec<Vec<usize>> {
        let spec = NetworkSpec::parse(spec).unwrap();
        enumerate_paths(&spec)
            .paths()
            .iter()
            .map(Path::applied_layers)
            .collect()
    }

    #[test]
    fn plain_network_has_one_path() {
        assert_eq!(layers("2,3,3,2"), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn single_block_has_two_paths() {
        let spec = NetworkSpec::parse("1,2~,1").unwrap();
        let dag = enumerate_paths(&spec);
        assert_eq!(dag.len(), 2);
        assert_eq!(dag.paths()[0].applied_layers(), vec![1, 2]);
        assert_eq!(dag.paths()[1].applied_layers(), vec![2]);
        match dag.paths()[1].moves()[0] {
            Move::Bypass { pad, trim, .. } => assert_eq!((pad, trim), (1, 0)),
            other => panic!("unexpected first move {other:?}"),
        }
    }

    #[test]
    fn two_blocks_have_four_paths() {
        assert_eq!(
            layers("2,3~,3~,2"),
            vec![vec![1, 2, 3], vec![1, 3], vec![2, 3], vec![3]]
        );
    }

    #[test]
    fn output_residual_paths_may_skip_last_layer() {
        let spec = NetworkSpec::parse("1,2~,1~").unwrap();
        let dag = enumerate_paths(&spec);
        assert_eq!(dag.len(), 4);
        let skipping: Vec<_> = dag.paths().iter().filter(|p| !p.contains_layer(2)).collect();
        assert_eq!(skipping.len(), 2);
        for p in skipping {
            match p.moves().last().unwrap() {
                Move::Bypass { trim, .. } => assert_eq!(*trim, 1),
                other => panic!("unexpected last move {other:?}"),
            }
        }
    }

    #[test]
    fn per_layer_residuals_give_power_of_two_paths() {
        for (spec, l) in [("2,3~,2", 1), ("2,3~,3~,2", 2), ("2,3~,3~,3~,2", 3), ("2,3~,4~,5~,2", 3)] {
            let spec = NetworkSpec::parse(spec).unwrap();
            assert_eq!(enumerate_paths(&spec).len(), 1 << l);
            assert_eq!(spec.path_count(), 1 << l);
        }
    }

    #[test]
    fn pmix_weights_sum_to_one() {
        let spec = NetworkSpec::parse("2,3~,3~,2;p=0.3").unwrap();
        let total: f64 = enumerate_paths(&spec).paths().iter().map(|p| p.weight(&spec)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        let l1 = NetworkSpec::parse("1,2~,1;p=0.3").unwrap();
        let w: Vec<f64> = enumerate_paths(&l1).paths().iter().map(|p| p.weight(&l1)).collect();
        assert!((w[0] - 0.7).abs() < 1e-15 && (w[1] - 0.3).abs() < 1e-15);
    }
}
