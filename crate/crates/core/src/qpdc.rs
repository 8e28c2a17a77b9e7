//! Truncated amplifier ("q-PDC") transition probabilities, from amplitudes
//! and from a `q = 1` qubit circuit that uses beam-splitter rotations only.
//!
//! # Encodings
//!
//! Occupation numbers are stored in binary registers ([`BinaryEncoding`]).
//! For the device stage a sector of total photon number `N` is moved to
//! `N` physical qubits holding the symmetric (Dicke) state with one `|1⟩`
//! per mode-`a` photon, `|a⟩ = |1⟩`, `|b⟩ = |0⟩` ([`symmetrize`]).
//!
//! On that encoding `RY(2θ)^{⊗N}` restricted to the symmetric subspace is
//! exactly the beam-splitter sector unitary, because
//! `RY(2θ)|0⟩ = cosθ|0⟩ + sinθ|1⟩` reproduces `b† → cosθ b† + sinθ a†`.
//! The gate angle is therefore twice the beam-splitter angle; see
//! [`ry_angle`].
//!
//! # The `q = 1` circuit
//!
//! Register layout for an input `(n, m)` with `n ≥ m` (inputs with `n < m`
//! are mirrored and the output labels swapped back):
//!
//! ```text
//! q0            tag ancilla
//! A = q1..q_w   binary register of mode a, w = max(1, ⌈log₂(max l + 1)⌉)
//! B             mode-b qubit
//! C, D          EPR pair
//! ```
//!
//! Steps: prepare `A = n, B = m`; EPR on `(C, D)`; `SWAP(B, C)` so that `B`
//! carries the EPR index `s`; tag `q0 ^= [A = n ∧ B = 1]` (for `n = 1`,
//! `w = 1` this is `CCNOT(q1, q2 → q0)`); encode sector `n` or `n + 1`
//! selected by the tag; `RY(2θ)` on the occupied physical qubits, the last
//! one controlled by `q0`; decode; uncompute the tag; post-select `Φ⁺` on
//! `(B, C)`.
//!
//! The post-selected branch with `q0 = 0`, `A = l`, `D = s` carries the
//! amplitude `½⟨l,m|U_BS^{1/g}|n,s⟩`, so the physical probability is
//! `(4/g)·|amplitude|²`. Sector states whose `b` occupation does not fit in
//! one qubit are decoded onto codes that leave `q0 = 1`, which removes them
//! from the readout.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::devices::{pdc_amplitude, BeamSplitter, ParametricAmplifier};
use crate::error::{Error, Result};
use crate::fock::FockState2;
use crate::qubit::{apply, sample_with, BellState, Circuit, GateKind, GateOp, QubitState};
use crate::C64;

/// Largest sector supported by the physical encoding. Sector 3 is reached
/// from the `(2, 0)` input through the EPR index `s = 1`.
pub const MAX_SECTOR: u32 = 3;

/// Inputs accepted by [`build_q1_circuit`].
pub const Q1_INPUTS: [FockState2; 5] = [
    FockState2::new(0, 0),
    FockState2::new(1, 1),
    FockState2::new(2, 0),
    FockState2::new(1, 0),
    FockState2::new(0, 1),
];

/// Big-endian binary code of fixed width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryEncoding {
    width: u32,
}

impl BinaryEncoding {
    /// Width must lie in `1..=64`.
    pub fn new(width: u32) -> Result<Self> {
        if !(1..=64).contains(&width) {
            return Err(Error::EncodingOverflow { value: 0, width });
        }
        Ok(Self { width })
    }

    /// Smallest width holding `0..=max_value`, and at least one bit.
    pub fn for_max_value(max_value: u64) -> Self {
        let width = (u64::BITS - max_value.leading_zeros()).max(1);
        Self { width }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn encode(&self, n: u64) -> Result<String> {
        encode_binary(n, self.width)
    }

    pub fn decode(&self, bits: &str) -> Result<u64> {
        if bits.len() != self.width as usize {
            return Err(Error::InvalidBits(bits.to_string()));
        }
        decode_binary(bits)
    }
}

/// `n` as `width` bits, most significant first.
pub fn encode_binary(n: u64, width: u32) -> Result<String> {
    if width == 0 || width > 64 || (width < 64 && n >> width != 0) {
        return Err(Error::EncodingOverflow { value: n, width });
    }
    Ok((0..width)
        .rev()
        .map(|b| if n >> b & 1 == 1 { '1' } else { '0' })
        .collect())
}

pub fn decode_binary(bits: &str) -> Result<u64> {
    if bits.is_empty() || bits.len() > 64 || !bits.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidBits(bits.to_string()));
    }
    Ok(bits.bytes().fold(0, |acc, b| (acc << 1) | u64::from(b - b'0')))
}

/// Gate angle realising a beam splitter on one physical qubit.
pub fn ry_angle(bs: BeamSplitter) -> f64 {
    2.0 * bs.theta()
}

/// Dicke state with `ones` excitations on the first `sector` of
/// `register` qubits; the rest are `|0⟩`.
fn dicke(ones: u32, sector: u32, register: u32) -> DVector<C64> {
    let width = 1usize << register;
    let members: Vec<usize> = (0..1usize << sector).filter(|k| k.count_ones() == ones).collect();
    let amp = C64::new(1.0 / (members.len() as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(width);
    for k in members {
        v[k] = amp;
    }
    v
}

/// Physical encoding of a Fock state: the symmetric state of `n + m`
/// qubits with `n` of them in `|1⟩`.
pub fn symmetrize(state: FockState2) -> Result<QubitState> {
    let total = state.total();
    if total > MAX_SECTOR {
        return Err(Error::UnsupportedSector {
            got: total,
            max: MAX_SECTOR,
        });
    }
    QubitState::from_amplitudes(dicke(state.n, total, total).iter().copied().collect())
}

/// `⟨out|RY(2θ)^{⊗N}|in⟩` between physical encodings of sector `N`, indexed
/// like [`bs_sector_unitary`](crate::devices::bs_sector_unitary).
pub fn physical_device_block(bs: BeamSplitter, total: u32) -> Result<DMatrix<C64>> {
    if total > MAX_SECTOR {
        return Err(Error::UnsupportedSector {
            got: total,
            max: MAX_SECTOR,
        });
    }
    let theta = ry_angle(bs);
    let inputs: Vec<_> = (0..=total).map(|x| dicke(x, total, total)).collect();
    let mut out = DMatrix::zeros(total as usize + 1, total as usize + 1);
    for (c, v) in inputs.iter().enumerate() {
        let mut s = QubitState::from_amplitudes(v.iter().copied().collect())?;
        for q in 0..total as usize {
            s = apply(&s, &GateOp::ry(q, theta))?;
        }
        for (r, w) in inputs.iter().enumerate() {
            out[(r, c)] = w.iter().zip(s.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        }
    }
    Ok(out)
}

/// Execution mode of a q-PDC run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunMode {
    Exact,
    /// Seeded sampling. `stream` selects an independent ChaCha stream so
    /// that tasks sharing a root seed stay uncorrelated.
    Shots {
        shots: u64,
        seed: u64,
        stream: u64,
    },
}

/// Parameters of a q-PDC evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpdcSpec {
    pub device: ParametricAmplifier,
    pub q: u32,
    pub input: FockState2,
    pub mode: RunMode,
}

impl QpdcSpec {
    pub fn new(g: f64, q: u32, input: FockState2, mode: RunMode) -> Result<Self> {
        if let RunMode::Shots { shots: 0, .. } = mode {
            return Err(Error::NoShots);
        }
        Ok(Self {
            device: ParametricAmplifier::new(g)?,
            q,
            input,
            mode,
        })
    }

    pub fn g(&self) -> f64 {
        self.device.g()
    }
}

/// Outputs `(n − m + l, l)` for `l = 0..=q`, mirrored back when `n < m`.
pub fn qpdc_outputs(input: FockState2, q: u32) -> Vec<FockState2> {
    let (base, mirrored) = if input.n >= input.m {
        (input, false)
    } else {
        (input.swapped(), true)
    };
    (0..=q)
        .map(|l| {
            let out = FockState2::new(base.n - base.m + l, l);
            if mirrored {
                out.swapped()
            } else {
                out
            }
        })
        .collect()
}

/// Reference probabilities `|⟨out|U_PDC|in⟩|²` over [`qpdc_outputs`].
pub fn qpdc_amplitudes(spec: &QpdcSpec) -> Vec<(FockState2, f64)> {
    qpdc_outputs(spec.input, spec.q)
        .into_iter()
        .map(|out| (out, pdc_amplitude(spec.device, spec.input, out).norm_sqr()))
        .collect()
}

/// Qubit roles in the `q = 1` circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q1Layout {
    pub ancilla: usize,
    /// Mode-`a` register, least significant bit first.
    pub a_register: Vec<usize>,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Q1Layout {
    fn new(width: usize) -> Self {
        Self {
            ancilla: 0,
            a_register: (1..=width).collect(),
            b: width + 1,
            c: width + 2,
            d: width + 3,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.d + 1
    }

    /// `[A…, B]`, the qubits the device stage acts on.
    fn physical(&self) -> Vec<usize> {
        let mut p = self.a_register.clone();
        p.push(self.b);
        p
    }
}

/// A built `q = 1` circuit together with its readout map.
#[derive(Debug, Clone, PartialEq)]
pub struct Q1Circuit {
    /// Gates followed by the `Φ⁺` post-selection on `(B, C)`.
    pub circuit: Circuit,
    pub layout: Q1Layout,
    pub input: FockState2,
    pub g: f64,
    /// Set when the input had `n < m` and was mirrored.
    pub mirrored: bool,
}

impl Q1Circuit {
    /// The gate part, without post-selection.
    pub fn gates(&self) -> Circuit {
        let mut gates = Circuit::new(self.circuit.num_qubits());
        for op in self.circuit.ops() {
            if let crate::qubit::CircuitOp::Gate(g) = op {
                gates.push(g.clone()).expect("same register");
            }
        }
        gates
    }

    /// `(output, l, s)` with `l` read from `A` and `s` from `D`.
    fn readout(&self) -> Vec<(FockState2, u64, u64)> {
        let base = if self.mirrored {
            self.input.swapped()
        } else {
            self.input
        };
        (0..=1u32)
            .map(|s| {
                let l = base.n - base.m + s;
                let out = FockState2::new(l, s);
                (if self.mirrored { out.swapped() } else { out }, l as u64, s as u64)
            })
            .collect()
    }
}

fn check_q1(spec: &QpdcSpec) -> Result<()> {
    if spec.q != 1 {
        return Err(Error::UnsupportedOrder(spec.q));
    }
    if !Q1_INPUTS.contains(&spec.input) {
        return Err(Error::UnsupportedInput(spec.input));
    }
    Ok(())
}

/// Multi-controlled X on `target` that fires when `qubits` hold `pattern`
/// (bit `k` of `pattern` for `qubits[k]`).
fn pattern_x(circ: &mut Circuit, qubits: &[usize], pattern: u64, target: usize) -> Result<()> {
    let zeros: Vec<usize> = qubits
        .iter()
        .enumerate()
        .filter(|(k, _)| pattern >> k & 1 == 0)
        .map(|(_, &q)| q)
        .collect();
    for &q in &zeros {
        circ.push(GateOp::x(q))?;
    }
    circ.push(GateOp::new(GateKind::X, qubits.to_vec(), vec![target])?)?;
    for &q in &zeros {
        circ.push(GateOp::x(q))?;
    }
    Ok(())
}

/// Applies `op` when `control` is `|0⟩`.
fn anti_controlled(circ: &mut Circuit, op: GateOp, control: usize) -> Result<()> {
    circ.push(GateOp::x(control))?;
    circ.push(op.controlled_by(&[control])?)?;
    circ.push(GateOp::x(control))?;
    Ok(())
}

/// Encoder for sector `total`: a unitary on `[A…, B]` sending binary codes
/// to physical Dicke states.
///
/// States `(x, total − x)` with `total − x ≤ 1` and `x < 2^width` go to their
/// own code. The others go to `garbage_codes` in order. Remaining columns are
/// completed by Gram–Schmidt.
fn sector_encoder(total: u32, width: u32, garbage_codes: &[usize]) -> DMatrix<C64> {
    let register = width + 1;
    let dim = 1usize << register;
    let code = |x: u32, y: u32| x as usize + ((y as usize) << width);
    let mut columns: BTreeMap<usize, DVector<C64>> = BTreeMap::new();
    let mut garbage = garbage_codes.iter();
    for x in 0..=total {
        let y = total - x;
        let target = if y <= 1 && x < 1 << width {
            code(x, y)
        } else {
            *garbage.next().expect("enough free codes for sector garbage")
        };
        assert!(
            columns.insert(target, dicke(x, total, register)).is_none(),
            "code used twice"
        );
    }

    let mut basis: Vec<DVector<C64>> = columns.values().cloned().collect();
    let mut candidates = (0..dim).map(|k| {
        let mut e = DVector::zeros(dim);
        e[k] = C64::new(1.0, 0.0);
        e
    });
    let mut completion = Vec::new();
    while basis.len() < dim {
        let mut v = candidates.next().expect("standard basis spans the space");
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= C64::new(norm, 0.0);
            basis.push(v.clone());
            completion.push(v);
        }
    }
    let mut completion = completion.into_iter();
    DMatrix::from_columns(
        &(0..dim)
            .map(|k| {
                columns
                    .get(&k)
                    .cloned()
                    .unwrap_or_else(|| completion.next().expect("one vector per free code"))
            })
            .collect::<Vec<_>>(),
    )
}

/// Builds the `q = 1` circuit for a supported input.
pub fn build_q1_circuit(spec: &QpdcSpec) -> Result<Q1Circuit> {
    check_q1(spec)?;
    let mirrored = spec.input.n < spec.input.m;
    let FockState2 { n, m } = if mirrored { spec.input.swapped() } else { spec.input };
    let enc = BinaryEncoding::for_max_value(u64::from(n.max(n - m + 1)));
    let width = enc.width();
    let layout = Q1Layout::new(width as usize);
    let physical = layout.physical();
    let mut circ = Circuit::new(layout.num_qubits());

    // Preparation.
    for (k, &q) in layout.a_register.iter().enumerate() {
        if n >> k & 1 == 1 {
            circ.push(GateOp::x(q))?;
        }
    }
    if m == 1 {
        circ.push(GateOp::x(layout.b))?;
    }

    // Cup, then hand the EPR index to B.
    circ.push(GateOp::h(layout.c))?;
    circ.push(GateOp::cnot(layout.c, layout.d)?)?;
    circ.push(GateOp::swap(layout.b, layout.c)?)?;

    // Tag the s = 1 branch.
    let tag_pattern = u64::from(n) | (1 << width);
    pattern_x(&mut circ, &physical, tag_pattern, layout.ancilla)?;

    // Encoders. Garbage from sector n is parked on the valid codes of sector
    // n + 1 so that the uncompute step leaves it tagged.
    let code = |x: u32, y: u32| x as usize + ((y as usize) << width);
    let fits = |x: u32| x < 1 << width;
    let flip_codes: Vec<usize> = [(n + 1, 0), (n, 1)]
        .into_iter()
        .filter(|&(x, _)| fits(x))
        .map(|(x, y)| code(x, y))
        .collect();
    let valid = |total: u32| -> Vec<usize> {
        (0..=total)
            .filter(|&x| total - x <= 1 && fits(x))
            .map(|x| code(x, total - x))
            .collect()
    };
    let low_garbage: Vec<usize> = flip_codes.iter().copied().filter(|c| !valid(n).contains(c)).collect();
    let high_valid = valid(n + 1);
    let high_garbage: Vec<usize> = (0..1usize << (width + 1))
        .filter(|c| !flip_codes.contains(c) && !high_valid.contains(c))
        .collect();
    let enc_low = sector_encoder(n, width, &low_garbage);
    let enc_high = sector_encoder(n + 1, width, &high_garbage);

    anti_controlled(
        &mut circ,
        GateOp::unitary(enc_low.clone(), physical.clone())?,
        layout.ancilla,
    )?;
    circ.push(GateOp::unitary(enc_high.clone(), physical.clone())?.controlled_by(&[layout.ancilla])?)?;

    // Device stage.
    let theta = ry_angle(BeamSplitter::new(1.0 / spec.g())?);
    for &q in &physical[..n as usize] {
        circ.push(GateOp::ry(q, theta))?;
    }
    circ.push(GateOp::ry(physical[n as usize], theta).controlled_by(&[layout.ancilla])?)?;

    // Decoders.
    circ.push(GateOp::unitary(enc_high.adjoint(), physical.clone())?.controlled_by(&[layout.ancilla])?)?;
    anti_controlled(
        &mut circ,
        GateOp::unitary(enc_low.adjoint(), physical.clone())?,
        layout.ancilla,
    )?;

    // Uncompute the tag on the valid codes of sector n + 1.
    for (x, y) in [(n + 1, 0u32), (n, 1)] {
        if fits(x) {
            pattern_x(
                &mut circ,
                &physical,
                u64::from(x) | (u64::from(y) << width),
                layout.ancilla,
            )?;
        }
    }

    // Cap.
    circ.push_bell(layout.b, layout.c, BellState::PhiPlus)?;

    Ok(Q1Circuit {
        circuit: circ,
        layout,
        input: spec.input,
        g: spec.g(),
        mirrored,
    })
}

/// One output of [`run_qpdc`].
#[derive(Debug, Clone, PartialEq)]
pub struct QpdcRow {
    pub output: FockState2,
    /// Physical probability (exact) or its estimate (shots).
    pub probability: f64,
    /// Binomial standard error of the estimate; zero in exact mode.
    pub stderr: f64,
    /// Post-selected probability or frequency before the `4/g` correction.
    pub raw: f64,
}

/// Runs the `q = 1` circuit.
pub fn run_qpdc(spec: &QpdcSpec) -> Result<Vec<QpdcRow>> {
    let built = build_q1_circuit(spec)?;
    let correction = 4.0 / spec.g();
    let layout = &built.layout;
    match spec.mode {
        RunMode::Exact => {
            let run = match built.circuit.run_exact(&QubitState::zero(layout.num_qubits())) {
                Ok(run) => Some(run),
                Err(Error::ZeroProbability(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(built
                .readout()
                .into_iter()
                .map(|(output, l, s)| {
                    let raw = run.as_ref().map_or(0.0, |run| {
                        let mut index = 0usize;
                        for (k, &q) in layout.a_register.iter().enumerate() {
                            index |= ((l >> k & 1) as usize) << run.position(q).expect("A survives");
                        }
                        index |= (s as usize) << run.position(layout.d).expect("D survives");
                        run.probability * run.state.amplitude(index).norm_sqr()
                    });
                    QpdcRow {
                        output,
                        probability: correction * raw,
                        stderr: 0.0,
                        raw,
                    }
                })
                .collect())
        }
        RunMode::Shots { shots, seed, stream } => {
            // Bell-basis readout: Φ⁺ on (B, C) becomes B = C = 0.
            let mut circ = built.gates();
            circ.push(GateOp::cnot(layout.b, layout.c)?)?;
            circ.push(GateOp::h(layout.b))?;
            let run = circ.run_exact(&QubitState::zero(layout.num_qubits()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let counts = sample_with(&run.state, shots, &mut rng)?;
            Ok(built
                .readout()
                .into_iter()
                .map(|(output, l, s)| {
                    let mut index = (s as usize) << layout.d;
                    for (k, &q) in layout.a_register.iter().enumerate() {
                        index |= ((l >> k & 1) as usize) << q;
                    }
                    let f = *counts.get(&index).unwrap_or(&0) as f64 / shots as f64;
                    QpdcRow {
                        output,
                        probability: correction * f,
                        stderr: correction * (f * (1.0 - f) / shots as f64).sqrt(),
                        raw: f,
                    }
                })
                .collect())
        }
    }
}
