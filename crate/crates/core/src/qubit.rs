//! Dense statevector simulator.
//!
//! Qubit 0 is the least significant bit of a basis label. Multi-qubit gate
//! blocks use the same rule locally: `targets[0]` is the least significant
//! bit of the block index.
//!
//! `RY(θ) = exp(−iθY/2)`, so `RY(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::unitarity_defect;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Probabilities at or below this are treated as a failed post-selection.
pub const ZERO_PROBABILITY: f64 = 1e-20;

/// Normalised state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl QubitState {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Self { num_qubits, amplitudes }
    }

    /// Normalises the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::BadStateLength(len));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|self⟩ ⊗ |high⟩` with `self` on the low qubits.
    pub fn tensor(&self, high: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * high.amplitudes.len());
        for h in &high.amplitudes {
            amplitudes.extend(self.amplitudes.iter().map(|l| l * h));
        }
        Self {
            num_qubits: self.num_qubits + high.num_qubits,
            amplitudes,
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

/// Gate kinds. `X` with one or two controls is the CNOT / CCNOT.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    H,
    Ry(f64),
    Swap,
    /// Explicit `2^k × 2^k` unitary on `k` targets.
    Unitary(DMatrix<C64>),
}

impl GateKind {
    fn arity(&self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::Ry(_) => 1,
            GateKind::Swap => 2,
            GateKind::Unitary(u) => u.nrows().trailing_zeros() as usize,
        }
    }

    /// Matrix on the targets, `targets[0]` least significant.
    pub fn matrix(&self) -> DMatrix<C64> {
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            GateKind::X => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            GateKind::H => {
                let h = r(std::f64::consts::FRAC_1_SQRT_2);
                DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
            }
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                DMatrix::from_row_slice(2, 2, &[r(c), r(-s), r(s), r(c)])
            }
            GateKind::Swap => DMatrix::from_row_slice(
                4,
                4,
                &[
                    ONE, ZERO, ZERO, ZERO, //
                    ZERO, ZERO, ONE, ZERO, //
                    ZERO, ONE, ZERO, ZERO, //
                    ZERO, ZERO, ZERO, ONE,
                ],
            ),
            GateKind::Unitary(u) => u.clone(),
        }
    }

    fn name(&self, controls: usize) -> &'static str {
        match (self, controls) {
            (GateKind::X, 1) => "CNOT",
            (GateKind::X, 2) => "CCNOT",
            (GateKind::X, _) => "X",
            (GateKind::H, _) => "H",
            (GateKind::Ry(_), _) => "RY",
            (GateKind::Swap, _) => "SWAP",
            (GateKind::Unitary(_), _) => "U",
        }
    }
}

/// A gate applied to `targets`, conditioned on every control being `|1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
}

impl GateOp {
    /// Checks arity and disjointness; explicit blocks must be unitary.
    pub fn new(kind: GateKind, controls: Vec<usize>, targets: Vec<usize>) -> Result<Self> {
        if let GateKind::Unitary(u) = &kind {
            if !u.is_square() || !u.nrows().is_power_of_two() || u.nrows() < 2 {
                return Err(Error::GateArity {
                    kind: "U",
                    expected: "a square block of size 2^k, k ≥ 1".into(),
                    got: format!("{}×{}", u.nrows(), u.ncols()),
                });
            }
            let defect = unitarity_defect(u);
            if defect > 1e-10 {
                return Err(Error::NotUnitary(defect));
            }
        }
        if targets.len() != kind.arity() {
            return Err(Error::GateArity {
                kind: kind.name(controls.len()),
                expected: format!("{} target(s)", kind.arity()),
                got: format!("{} target(s)", targets.len()),
            });
        }
        let mut seen = controls.clone();
        seen.extend(&targets);
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateQubit(w[0]));
        }
        Ok(Self {
            kind,
            controls,
            targets,
        })
    }

    pub fn x(t: usize) -> Self {
        Self::new(GateKind::X, vec![], vec![t]).expect("valid arity")
    }

    pub fn h(t: usize) -> Self {
        Self::new(GateKind::H, vec![], vec![t]).expect("valid arity")
    }

    pub fn ry(t: usize, theta: f64) -> Self {
        Self::new(GateKind::Ry(theta), vec![], vec![t]).expect("valid arity")
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        Self::new(GateKind::Swap, vec![], vec![a, b])
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::X, vec![control], vec![target])
    }

    pub fn ccnot(c1: usize, c2: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::X, vec![c1, c2], vec![target])
    }

    pub fn unitary(block: DMatrix<C64>, targets: Vec<usize>) -> Result<Self> {
        Self::new(GateKind::Unitary(block), vec![], targets)
    }

    /// Same gate with extra controls.
    pub fn controlled_by(mut self, controls: &[usize]) -> Result<Self> {
        self.controls.extend_from_slice(controls);
        Self::new(self.kind, self.controls, self.targets)
    }

    fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(&self.targets).copied()
    }

    /// Full `2^Q × 2^Q` matrix of the gate on a `num_qubits` register.
    pub fn full_matrix(&self, num_qubits: usize) -> Result<DMatrix<C64>> {
        let dim = 1 << num_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let out = apply(&QubitState::basis(num_qubits, col), self)?;
            m.set_column(col, &nalgebra::DVector::from_column_slice(out.amplitudes()));
        }
        Ok(m)
    }
}

/// Applies a gate; norm is preserved to round-off.
pub fn apply(state: &QubitState, op: &GateOp) -> Result<QubitState> {
    for q in op.qubits() {
        state.check_qubit(q)?;
    }
    let block = op.kind.matrix();
    let k = op.targets.len();
    let control_mask: usize = op.controls.iter().map(|&c| 1 << c).sum();
    let target_mask: usize = op.targets.iter().map(|&t| 1 << t).sum();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|local| {
            op.targets
                .iter()
                .enumerate()
                .filter(|(j, _)| local >> j & 1 == 1)
                .map(|(_, &t)| 1 << t)
                .sum()
        })
        .collect();

    let mut out = state.amplitudes.clone();
    let mut gathered = vec![ZERO; 1 << k];
    for base in 0..state.amplitudes.len() {
        if base & target_mask != 0 || base & control_mask != control_mask {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = state.amplitudes[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            out[base | off] = (0..gathered.len()).map(|c| block[(r, c)] * gathered[c]).sum();
        }
    }
    Ok(QubitState {
        num_qubits: state.num_qubits,
        amplitudes: out,
    })
}

/// Weight of a state outside the subspace where qubits `i` and `j` are
/// both `|0⟩`.
fn weight_outside_zero(state: &QubitState, i: usize, j: usize) -> f64 {
    let mask = (1 << i) | (1 << j);
    state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(idx, _)| idx & mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Turns `|00⟩` on `(i, j)` into `(|00⟩ + |11⟩)/√2`.
pub fn prepare_epr(state: &QubitState, i: usize, j: usize) -> Result<QubitState> {
    state.check_qubit(i)?;
    state.check_qubit(j)?;
    if i == j {
        return Err(Error::DuplicateQubit(i));
    }
    if weight_outside_zero(state, i, j) > 1e-12 {
        return Err(Error::NotInZeroState(i, j));
    }
    let s = apply(state, &GateOp::h(i))?;
    apply(&s, &GateOp::cnot(i, j)?)
}

/// The four Bell states of an ordered pair `(i, j)`.
///
/// ```text
/// Φ± = (|0_i 0_j⟩ ± |1_i 1_j⟩)/√2
/// Ψ± = (|0_i 1_j⟩ ± |1_i 0_j⟩)/√2
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// Components indexed by `b_i + 2 b_j`.
    pub fn components(self) -> [C64; 4] {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            BellState::PhiPlus => [h, ZERO, ZERO, h],
            BellState::PhiMinus => [h, ZERO, ZERO, -h],
            BellState::PsiPlus => [ZERO, h, h, ZERO],
            BellState::PsiMinus => [ZERO, -h, h, ZERO],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "PHI+",
            BellState::PhiMinus => "PHI-",
            BellState::PsiPlus => "PSI+",
            BellState::PsiMinus => "PSI-",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.label().eq_ignore_ascii_case(s))
    }
}

/// Result of projecting a pair onto one Bell state.
#[derive(Debug, Clone, PartialEq)]
pub struct BellOutcome {
    pub pair: (usize, usize),
    pub outcome: BellState,
    pub probability: f64,
    /// Renormalised state of the other qubits, in their original order;
    /// `None` when the outcome has zero probability.
    pub post_state: Option<QubitState>,
}

impl BellOutcome {
    pub fn is_flagged(&self) -> bool {
        self.post_state.is_none()
    }
}

/// Projects `(i, j)` onto a Bell state; the remaining qubits keep their
/// relative order.
pub fn bell_postselect(state: &QubitState, i: usize, j: usize, which: BellState) -> Result<BellOutcome> {
    state.check_qubit(i)?;
    state.check_qubit(j)?;
    if i == j {
        return Err(Error::DuplicateQubit(i));
    }
    let bell = which.components();
    let rest: Vec<usize> = (0..state.num_qubits).filter(|&q| q != i && q != j).collect();
    let mut projected = vec![ZERO; 1 << rest.len()];
    for (r, slot) in projected.iter_mut().enumerate() {
        let base: usize = rest
            .iter()
            .enumerate()
            .filter(|(k, _)| r >> k & 1 == 1)
            .map(|(_, &q)| 1 << q)
            .sum();
        *slot = (0..4)
            .map(|local| {
                let idx = base | ((local & 1) << i) | ((local >> 1) << j);
                bell[local].conj() * state.amplitudes[idx]
            })
            .sum();
    }
    let probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    let post_state = if probability > ZERO_PROBABILITY {
        Some(QubitState::from_amplitudes(projected)?)
    } else {
        None
    };
    Ok(BellOutcome {
        pair: (i, j),
        outcome: which,
        probability,
        post_state,
    })
}

/// Probabilities of the four Bell outcomes, in [`BellState::ALL`] order.
pub fn bell_probabilities(state: &QubitState, i: usize, j: usize) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (slot, which) in out.iter_mut().zip(BellState::ALL) {
        *slot = bell_postselect(state, i, j, which)?.probability;
    }
    Ok(out)
}

/// Seeded computational-basis sampling; returns counts per basis label.
pub fn sample(state: &QubitState, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    sample_with(state, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_with<R: Rng + ?Sized>(state: &QubitState, shots: u64, rng: &mut R) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let dist = WeightedIndex::new(state.probabilities()).map_err(|_| Error::ZeroNorm)?;
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(rng)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// One step of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Gate(GateOp),
    /// Post-selection of a pair onto a Bell state. The pair is removed from
    /// the register; later steps keep using the original qubit labels.
    Bell {
        pair: (usize, usize),
        outcome: BellState,
    },
}

/// Ordered gates and Bell post-selections on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<CircuitOp>,
}

/// Outcome of an exact circuit run.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRun {
    pub state: QubitState,
    /// Original labels of the qubits of `state`, least significant first.
    pub labels: Vec<usize>,
    /// Product of the post-selection probabilities.
    pub probability: f64,
}

impl CircuitRun {
    /// Position of an original qubit label within `state`.
    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        for q in op.qubits() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.ops.push(CircuitOp::Gate(op));
        Ok(self)
    }

    pub fn push_bell(&mut self, i: usize, j: usize, outcome: BellState) -> Result<&mut Self> {
        for q in [i, j] {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if i == j {
            return Err(Error::DuplicateQubit(i));
        }
        self.ops.push(CircuitOp::Bell { pair: (i, j), outcome });
        Ok(self)
    }

    /// Appends every step of `other`, which must act on the same register.
    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.num_qubits, other.num_qubits, "register size mismatch");
        self.ops.extend(other.ops.iter().cloned());
    }

    /// Unitary of a gate-only circuit; `None` if it contains post-selection.
    pub fn unitary(&self) -> Option<DMatrix<C64>> {
        let dim = 1 << self.num_qubits;
        let mut u = DMatrix::<C64>::identity(dim, dim);
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => u = g.full_matrix(self.num_qubits).ok()? * u,
                CircuitOp::Bell { .. } => return None,
            }
        }
        Some(u)
    }

    /// Runs the circuit with exact projections.
    pub fn run_exact(&self, initial: &QubitState) -> Result<CircuitRun> {
        if initial.num_qubits() != self.num_qubits {
            return Err(Error::BadStateLength(initial.amplitudes().len()));
        }
        let mut state = initial.clone();
        let mut labels: Vec<usize> = (0..self.num_qubits).collect();
        let mut probability = 1.0;
        let locate = |labels: &[usize], q: usize| {
            labels.iter().position(|&l| l == q).ok_or(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: labels.len(),
            })
        };
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => {
                    let controls = g.controls.iter().map(|&q| locate(&labels, q)).collect::<Result<_>>()?;
                    let targets = g.targets.iter().map(|&q| locate(&labels, q)).collect::<Result<_>>()?;
                    let local = GateOp {
                        kind: g.kind.clone(),
                        controls,
                        targets,
                    };
                    state = apply(&state, &local)?;
                }
                CircuitOp::Bell { pair, outcome } => {
                    let (i, j) = (locate(&labels, pair.0)?, locate(&labels, pair.1)?);
                    let result = bell_postselect(&state, i, j, *outcome)?;
                    probability *= result.probability;
                    state = result.post_state.ok_or_else(|| {
                        Error::ZeroProbability(format!("{} on qubits ({}, {})", outcome.label(), pair.0, pair.1))
                    })?;
                    labels.retain(|&l| l != pair.0 && l != pair.1);
                }
            }
        }
        Ok(CircuitRun {
            state,
            labels,
            probability,
        })
    }

    /// Line-oriented text form:
    ///
    /// ```text
    /// QUBITS 5
    /// H - 3
    /// CNOT 3 4
    /// RY 0 2 0.7853981633974483
    /// U - 1,2 re,im re,im …   (row-major block entries)
    /// BELL - 2,3 PHI+
    /// ```
    ///
    /// `-` marks an empty index list; `#` starts a comment.
    pub fn to_text(&self) -> String {
        let list = |v: &[usize]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        let mut out = format!("QUBITS {}\n", self.num_qubits);
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => {
                    let _ = write!(
                        out,
                        "{} {} {}",
                        g.kind.name(g.controls.len()),
                        list(&g.controls),
                        list(&g.targets)
                    );
                    match &g.kind {
                        GateKind::Ry(theta) => {
                            let _ = write!(out, " {theta:?}");
                        }
                        GateKind::Unitary(u) => {
                            for r in 0..u.nrows() {
                                for c in 0..u.ncols() {
                                    let _ = write!(out, " {:?},{:?}", u[(r, c)].re, u[(r, c)].im);
                                }
                            }
                        }
                        _ => {}
                    }
                    out.push('\n');
                }
                CircuitOp::Bell { pair, outcome } => {
                    let _ = writeln!(out, "BELL - {},{} {}", pair.0, pair.1, outcome.label());
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "QUBITS" {
                let n = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("QUBITS needs a count".into()))?;
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| err("missing QUBITS header".into()))?;
            if tokens.len() < 3 {
                return Err(err(format!("expected KIND CONTROLS TARGETS, got {line:?}")));
            }
            let parse_list = |t: &str| -> Result<Vec<usize>> {
                if t == "-" {
                    return Ok(vec![]);
                }
                t.split(',')
                    .map(|x| x.parse().map_err(|_| err(format!("bad qubit index {x:?}"))))
                    .collect()
            };
            let controls = parse_list(tokens[1])?;
            let targets = parse_list(tokens[2])?;
            let params = &tokens[3..];
            let no_params = |kind: &str| {
                if params.is_empty() {
                    Ok(())
                } else {
                    Err(err(format!("{kind} takes no parameters")))
                }
            };
            let kind = match tokens[0] {
                "X" | "CNOT" | "CCNOT" => {
                    no_params(tokens[0])?;
                    GateKind::X
                }
                "H" => {
                    no_params("H")?;
                    GateKind::H
                }
                "SWAP" => {
                    no_params("SWAP")?;
                    GateKind::Swap
                }
                "RY" => {
                    let [theta] = params else {
                        return Err(err("RY takes one angle".into()));
                    };
                    GateKind::Ry(theta.parse().map_err(|_| err(format!("bad angle {theta:?}")))?)
                }
                "U" => {
                    let dim = 1usize << targets.len();
                    if params.len() != dim * dim {
                        return Err(err(format!(
                            "U on {} targets needs {} entries",
                            targets.len(),
                            dim * dim
                        )));
                    }
                    let entries = params
                        .iter()
                        .map(|p| {
                            let (re, im) = p.split_once(',').ok_or_else(|| err(format!("bad entry {p:?}")))?;
                            let re = re.parse().map_err(|_| err(format!("bad entry {p:?}")))?;
                            let im = im.parse().map_err(|_| err(format!("bad entry {p:?}")))?;
                            Ok(C64::new(re, im))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    GateKind::Unitary(DMatrix::from_row_slice(dim, dim, &entries))
                }
                "BELL" => {
                    let ([i, j], [label]) = (targets.as_slice(), params) else {
                        return Err(err("BELL needs a pair and an outcome label".into()));
                    };
                    let outcome =
                        BellState::from_label(label).ok_or_else(|| err(format!("unknown Bell outcome {label:?}")))?;
                    c.push_bell(*i, *j, outcome).map_err(|e| err(e.to_string()))?;
                    continue;
                }
                other => return Err(err(format!("unknown gate {other:?}"))),
            };
            let expected_controls = match tokens[0] {
                "CNOT" => Some(1),
                "CCNOT" => Some(2),
                _ => None,
            };
            if expected_controls.is_some_and(|n| n != controls.len()) {
                return Err(err(format!(
                    "{} needs {} control(s)",
                    tokens[0],
                    expected_controls.unwrap_or(0)
                )));
            }
            let op = GateOp::new(kind, controls, targets).map_err(|e| err(e.to_string()))?;
            c.push(op).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            message: "empty circuit description".into(),
        })
    }
}
