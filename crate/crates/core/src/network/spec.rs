use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// How a stage with an incoming residual edge combines its two contributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Plain matrix sum; stage traces grow with the number of branches.
    Standard,
    /// Convex combination `p·bypass + (1−p)·layer output`.
    PMix(f64),
}

/// Residual edge: the state entering stage `target` receives an additive
/// copy of the state that entered stage `source`.
///
/// Stage `t` is the input of layer `t`; stage `L+2` is the network output,
/// so an edge into it adds a (traced-down) earlier stage to the final state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidualEdge {
    pub target: usize,
    pub source: usize,
}

/// Layer widths `m_0..m_{L+1}`, residual edges and combination mode.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    widths: Vec<usize>,
    edges: Vec<ResidualEdge>,
    mode: Mode,
}

impl NetworkSpec {
    pub fn new(widths: Vec<usize>, mut edges: Vec<ResidualEdge>, mode: Mode) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::InvalidSpec(
                "need at least an input and an output layer".into(),
            ));
        }
        if let Some(i) = widths.iter().position(|&w| w == 0) {
            return Err(Error::InvalidSpec(format!("layer {i} has zero width")));
        }
        if let Mode::PMix(p) = mode {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!("mixing weight p={p} outside [0,1]")));
            }
        }
        edges.sort();
        let terminal = widths.len(); // L + 2
        let width_of_stage = |t: usize| widths[t - 1];
        for (i, e) in edges.iter().enumerate() {
            if e.source < 1 || e.source >= e.target || e.target > terminal {
                return Err(Error::InvalidSpec(format!(
                    "edge ({}, {}) must satisfy 1 <= source < target <= {terminal}",
                    e.target, e.source
                )));
            }
            if i > 0 && edges[i - 1].target == e.target {
                return Err(Error::InvalidSpec(format!(
                    "two residual edges enter stage {}",
                    e.target
                )));
            }
            let src = width_of_stage(e.source);
            let dst = width_of_stage(e.target);
            if e.target < terminal && src > dst {
                return Err(Error::InvalidSpec(format!(
                    "edge ({}, {}) would shrink {src} qubits into {dst}",
                    e.target, e.source
                )));
            }
            if e.target == terminal && src < dst {
                return Err(Error::InvalidSpec(format!(
                    "output edge from stage {} has {src} qubits, fewer than the {dst} output qubits",
                    e.source
                )));
            }
        }
        Ok(Self {
            widths,
            edges,
            mode,
        })
    }

    /// Parses the compact notation: comma-separated widths, `~` after a
    /// width wraps that layer in a residual block, `^` marks a layer skipped
    /// by the next `~`, and an optional `;p=<real>` selects [`Mode::PMix`].
    ///
    /// `"2,3~,2"` is one residual block around layer 1; `"2,3^,3~,2"` feeds
    /// the network input straight into stage 3; a `~` on the output width
    /// adds the output residual.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (body, options) = match text.split_once(';') {
            Some((b, o)) => (b, Some(o)),
            None => (text, None),
        };
        let body = body.trim().trim_start_matches('[').trim_end_matches(']');

        let mut mode = Mode::Standard;
        if let Some(opts) = options {
            for opt in opts.split(';').map(str::trim).filter(|o| !o.is_empty()) {
                let (key, value) = opt
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidSpec(format!("malformed option '{opt}'")))?;
                match key.trim() {
                    "p" => {
                        let p: f64 = value.trim().parse().map_err(|_| {
                            Error::InvalidSpec(format!("malformed mixing weight '{value}'"))
                        })?;
                        mode = Mode::PMix(p);
                    }
                    other => {
                        return Err(Error::InvalidSpec(format!("unknown option '{other}'")))
                    }
                }
            }
        }

        let mut widths = Vec::new();
        let mut edges = Vec::new();
        let mut pending_skips = 0usize;
        for (index, raw) in body.split(',').enumerate() {
            let token = raw.trim();
            let digits_end = token
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(token.len());
            let (digits, marks) = token.split_at(digits_end);
            let width: usize = digits
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("malformed width token '{token}'")))?;
            widths.push(width);
            match marks.trim() {
                "" => {
                    if pending_skips > 0 {
                        return Err(Error::InvalidSpec(format!(
                            "'^' before token {index} is not followed by a '~'"
                        )));
                    }
                }
                "~" => {
                    if index == 0 {
                        return Err(Error::InvalidSpec(
                            "the input layer cannot carry a residual block".into(),
                        ));
                    }
                    edges.push(ResidualEdge {
                        target: index + 1,
                        source: index - pending_skips,
                    });
                    pending_skips = 0;
                }
                "^" => {
                    if index == 0 {
                        return Err(Error::InvalidSpec("the input layer cannot be skipped".into()));
                    }
                    pending_skips += 1;
                }
                other => {
                    return Err(Error::InvalidSpec(format!(
                        "unknown marker '{other}' in token '{token}'"
                    )))
                }
            }
        }
        if pending_skips > 0 {
            return Err(Error::InvalidSpec(
                "trailing '^' has no residual block to attach to".into(),
            ));
        }
        Self::new(widths, edges, mode)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn edges(&self) -> &[ResidualEdge] {
        &self.edges
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of hidden layers `L`.
    pub fn hidden_layers(&self) -> usize {
        self.widths.len() - 2
    }

    /// Number of perceptron layers, `L + 1`.
    pub fn layer_count(&self) -> usize {
        self.widths.len() - 1
    }

    /// Index of the output stage, `L + 2`.
    pub fn terminal_stage(&self) -> usize {
        self.widths.len()
    }

    pub fn input_qubits(&self) -> usize {
        self.widths[0]
    }

    pub fn output_qubits(&self) -> usize {
        *self.widths.last().unwrap()
    }

    /// Width of the state entering stage `t` (`1 <= t <= L+2`).
    pub fn stage_width(&self, t: usize) -> usize {
        self.widths[t - 1]
    }

    /// `(m_{l-1}, m_l)` for layer `l` (`1 <= l <= L+1`).
    pub fn layer_io(&self, l: usize) -> (usize, usize) {
        (self.widths[l - 1], self.widths[l])
    }

    pub fn edge_into(&self, stage: usize) -> Option<ResidualEdge> {
        self.edges.iter().copied().find(|e| e.target == stage)
    }

    pub fn edges_from(&self, stage: usize) -> impl Iterator<Item = ResidualEdge> + '_ {
        self.edges.iter().copied().filter(move |e| e.source == stage)
    }

    pub fn residual_count(&self) -> usize {
        self.edges.len()
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Self::new(self.widths.clone(), self.edges.clone(), mode)
    }

    /// Same widths without residual edges, in standard mode.
    pub fn without_residuals(&self) -> Self {
        Self {
            widths: self.widths.clone(),
            edges: Vec::new(),
            mode: Mode::Standard,
        }
    }

    /// Weights `(layer output, bypass)` used when forming stage `t`.
    pub fn stage_weights(&self, t: usize) -> (f64, f64) {
        match (self.mode, self.edge_into(t)) {
            (Mode::PMix(p), Some(_)) => (1.0 - p, p),
            _ => (1.0, 1.0),
        }
    }

    /// Number of end-to-end branches through the residual graph.
    pub fn path_count(&self) -> usize {
        let terminal = self.terminal_stage();
        let mut count = vec![0usize; terminal + 1];
        count[1] = 1;
        for t in 2..=terminal {
            count[t] = count[t - 1] + self.edge_into(t).map_or(0, |e| count[e.source]);
        }
        count[terminal]
    }

    /// Divisor turning the summed output fidelity into a cost in `[0, 1]`.
    pub fn cost_normalization(&self) -> f64 {
        match self.mode {
            Mode::Standard => self.path_count() as f64,
            Mode::PMix(_) => 1.0,
        }
    }

    /// Compact notation, when the edge set is expressible in it.
    pub fn notation(&self) -> Option<String> {
        let n = self.widths.len();
        let mut marks = vec![""; n];
        for e in &self.edges {
            let tilde = e.target - 1;
            if !marks[tilde].is_empty() {
                return None;
            }
            marks[tilde] = "~";
            for skipped in e.source..tilde {
                if !marks[skipped].is_empty() {
                    return None;
                }
                marks[skipped] = "^";
            }
        }
        let mut out = self
            .widths
            .iter()
            .zip(marks)
            .map(|(w, m)| format!("{w}{m}"))
            .collect::<Vec<_>>()
            .join(",");
        if let Mode::PMix(p) = self.mode {
            out.push_str(&format!(";p={p}"));
        }
        Some(out)
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.notation() {
            Some(s) => write!(f, "[{s}]"),
            None => write!(f, "{:?} edges {:?}", self.widths, self.edges),
        }
    }
}

impl FromStr for NetworkSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
